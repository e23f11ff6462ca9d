import random

import pytest

from rde.passive_auth import IssuerKeypair
from rde.passport import create_passport, make_profile

from support import registration


@pytest.fixture(scope="session")
def issuer():
    return IssuerKeypair.generate(random.Random("issuer"))


@pytest.fixture(scope="session")
def make_passport(issuer):
    def build(suite, curve_id, seed=0, **profile_kw):
        profile = make_profile(suite, curve_id, **profile_kw)
        return create_passport(profile, issuer, random.Random(f"{suite.code}/{int(curve_id)}/{seed}"))

    return build


@pytest.fixture(scope="session")
def registered(make_passport, issuer):
    """(passport, record) per profile, built once."""
    cache = {}

    def get(suite, curve_id):
        key = (suite, curve_id)
        if key not in cache:
            p = make_passport(suite, curve_id)
            cache[key] = (p, registration(p, issuer))
        return cache[key]

    return get
