"""Two cold-reset rounds of BAC, CA and a protected 128-byte DG14 read.

With ``mem`` set the second round reuses the first round's ephemeral key,
so the shared secret and the protected response should repeat exactly.
With fresh keys both should differ.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass

from . import apdu, group
from .chip_auth import parse_dg14
from .errors import CardError
from .passport import SFI_DG14
from .reader import Reader

READ_LENGTH = 128


@dataclass(frozen=True)
class Round:
    shared_secret: bytes
    ks_enc: bytes
    ks_mac: bytes
    response: bytes
    plaintext: bytes


@dataclass(frozen=True)
class ExperimentResult:
    mem: bool
    rounds: tuple

    @property
    def identical(self):
        a, b = self.rounds
        return a.response == b.response and a.shared_secret == b.shared_secret

    @property
    def differ(self):
        a, b = self.rounds
        return a.response != b.response and a.shared_secret != b.shared_secret

    @property
    def verdict(self):
        if self.identical:
            return "MATCH"
        return "DIFFER" if self.differ else "MIXED"

    @property
    def as_expected(self):
        return self.identical if self.mem else self.differ


def run_experiment(card, mrz, mem=True, rng=None, log=None, n=READ_LENGTH):
    rng = rng if rng is not None else secrets.SystemRandom()
    k = None
    rounds = []
    for round_no in (1, 2):
        card.reset()
        reader = Reader(card, rng, log, round_no)
        reader.select_lds()
        reader.bac(mrz)
        dg14 = parse_dg14(reader.read_file(SFI_DG14))
        if k is None or not mem:
            k = group.random_scalar(dg14.params, rng)
        ca = reader.chip_authenticate(dg14, k)
        reader.note("shared secret", ca.shared_secret)
        reader.note("KSenc", ca.session.ks_enc)
        reader.note("KSmac", ca.session.ks_mac)
        session_keys = (ca.session.ks_enc, ca.session.ks_mac)
        r = reader.secure(apdu.encode_read_binary_sfi(SFI_DG14, 0, n), f"READ SFI {SFI_DG14:02X}")
        if not r.ok:
            raise CardError(r.sw, "protected read failed")
        rounds.append(Round(ca.shared_secret, *session_keys, reader.last_response, r.data))
    return ExperimentResult(bool(mem), tuple(rounds))
