"""Shared test helpers: the eight suite x curve profiles and a registration shortcut."""

import itertools

from rde import core
from rde.group import CurveId
from rde.passive_auth import DataGroup
from rde.passport import SFI_DG1, SFI_DG14, SFI_SOD
from rde.sm import CipherSuite

PROFILES = list(itertools.product(CipherSuite, CurveId))
PROFILE_IDS = [f"{s.short_name}-{c.short_name}" for s, c in PROFILES]


def registration(passport, issuer, n=128, f_id=SFI_DG14):
    f = passport.files
    params = core.ExtractionParameters(n, f_id, f[f_id])
    return core.register(
        DataGroup(1, f[SFI_DG1]), DataGroup(14, f[SFI_DG14]), f[SFI_SOD], params, True, issuer.public
    )
