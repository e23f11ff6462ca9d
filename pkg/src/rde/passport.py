"""A software e-passport chip.

The chip holds a small file system addressed by short file identifier,
gates it behind BAC, and switches to Chip Authentication secure messaging
on MSE:SET KAT.  ``Passport.process_apdu`` is total: every byte string gets
a response, error conditions become status words.
"""

from __future__ import annotations

import enum
import hmac
import secrets
from dataclasses import dataclass

from . import apdu, group, primitives, sm
from .apdu import CommandApdu, ResponseApdu, decode_command, encode_response, encode_tlv
from .chip_auth import Dg14Content, chip_receive_ca, encode_dg14, parse_dg14, parse_mse_set_kat
from .errors import CodecError, FormatError, PointError, SmError
from .mrz import build_td3, parse_mrz
from .passive_auth import DataGroup, create_sod
from .sm import CipherSuite

LDS_AID = bytes.fromhex("A0000002471001")

SFI_DG1 = 0x01
SFI_DG14 = 0x0E
SFI_SOD = 0x1D
SFI_COM = 0x1E

FILE_VERSION = 1


class AccessState(enum.Enum):
    NO_ACCESS = "no-access"
    BAC = "bac"
    CA = "ca"


@dataclass(frozen=True)
class PassportProfile:
    mrz: str
    holder_name: str
    suite: CipherSuite
    curve_id: group.CurveId
    seed: int | None = None

    def __post_init__(self):
        parse_mrz(self.mrz)

    @property
    def mrz_key(self):
        return parse_mrz(self.mrz)


def make_profile(suite=CipherSuite.AES_CBC_CMAC_256, curve_id=group.CurveId.BRAINPOOL_P320R1,
                 seed=None, document_number="NXC4R8T61", date_of_birth="750412",
                 date_of_expiry="320101", surname="De Bruijn", given_names="Willeke"):
    mrz = build_td3(document_number, date_of_birth, date_of_expiry, surname, given_names)
    return PassportProfile(mrz, f"{given_names} {surname}", suite, group.CurveId(curve_id), seed)


def _ef_com():
    return encode_tlv(
        0x60,
        encode_tlv(0x5F01, b"0107") + encode_tlv(0x5F36, b"040000") + encode_tlv(0x5C, b"\x61\x6e"),
    )


def encode_dg1(mrz):
    return encode_tlv(0x61, encode_tlv(0x5F1F, "".join(mrz.split()).encode("ascii")))


def parse_dg1(data):
    outer = apdu.decode_tlv(data)
    inner = apdu.find_tlv(outer.children(), 0x5F1F) if outer.tag == 0x61 else None
    if inner is None:
        raise FormatError("DG1 does not hold an MRZ")
    return inner.value.decode("ascii")


def _sw(code):
    return encode_response(ResponseApdu(b"", code))


class Passport:
    """Chip state plus command processing; one instance is one card."""

    def __init__(self, profile, files, ca_private, rng=None):
        self.profile = profile
        self.files = dict(files)
        self.ca_private = ca_private
        self.rng = rng if rng is not None else secrets.SystemRandom()
        params = group.curve(profile.curve_id)
        if not 0 < ca_private < params.q:
            raise ValueError("CA private key out of range")
        seed = profile.mrz_key.key_seed()
        self._bac_enc = sm.kdf(seed, sm.KDF_ENC, CipherSuite.TDES_CBC_CBC)
        self._bac_mac = sm.kdf(seed, sm.KDF_MAC, CipherSuite.TDES_CBC_CBC)
        self.reset()

    # -- state ------------------------------------------------------------

    def reset(self):
        """Cold reset: drop every session, keep files and keys."""
        self.state = AccessState.NO_ACCESS
        self.session = None
        self._challenge = None
        self._current_sfi = None

    def _abort(self):
        self.reset()

    @property
    def params(self):
        return group.curve(self.profile.curve_id)

    @property
    def dg14(self):
        return parse_dg14(self.files[SFI_DG14])

    # -- transport --------------------------------------------------------

    def __call__(self, command):
        return self.process_apdu(command)

    def process_apdu(self, command):
        try:
            cmd = decode_command(command)
        except CodecError:
            if self.session is not None:
                self._abort()
                return _sw(apdu.SW_SM_INCORRECT)
            return _sw(apdu.SW_WRONG_LENGTH)
        if self.session is None:
            return encode_response(self._plain(cmd))
        return self._secure(cmd)

    # -- unprotected phase ------------------------------------------------

    def _plain(self, c):
        if c.cla & 0x0C:
            return ResponseApdu(b"", apdu.SW_SECURITY_STATUS)
        if c.cla != 0x00:
            return ResponseApdu(b"", apdu.SW_CLA_UNSUPPORTED)
        if c.ins == apdu.INS_SELECT:
            return self._select(c)
        if c.ins == apdu.INS_GET_CHALLENGE:
            if c.le != 8 or c.data:
                return ResponseApdu(b"", apdu.SW_WRONG_LENGTH)
            self._challenge = self.rng.randbytes(8)
            return ResponseApdu(self._challenge, apdu.SW_OK)
        if c.ins == apdu.INS_EXTERNAL_AUTHENTICATE:
            return self._external_authenticate(c)
        if c.ins == apdu.INS_READ_BINARY:
            if c.p1 & 0x80 and c.p1 & 0x1F == SFI_COM:
                return self._read_binary(c, 256)
            return ResponseApdu(b"", apdu.SW_SECURITY_STATUS)
        if c.ins == apdu.INS_MSE:
            return ResponseApdu(b"", apdu.SW_SECURITY_STATUS)
        return ResponseApdu(b"", apdu.SW_INS_UNSUPPORTED)

    def _select(self, c):
        if c.p1 == 0x04 and c.data == LDS_AID:
            self._current_sfi = None
            return ResponseApdu(b"", apdu.SW_OK)
        return ResponseApdu(b"", apdu.SW_FILE_NOT_FOUND)

    def _external_authenticate(self, c):
        challenge, self._challenge = self._challenge, None
        if len(c.data) != 40 or c.le not in (None, 40):
            return ResponseApdu(b"", apdu.SW_WRONG_LENGTH)
        if challenge is None:
            return ResponseApdu(b"", apdu.SW_CONDITIONS)
        e_ifd, m_ifd = c.data[:32], c.data[32:]
        expected = primitives.retail_mac(self._bac_mac, sm.pad2(e_ifd, 8))
        if not hmac.compare_digest(expected, m_ifd):
            return ResponseApdu(b"", apdu.SW_BAC_FAILED)
        s = primitives.tdes_cbc_decrypt(self._bac_enc, bytes(8), e_ifd)
        rnd_ifd, rnd_ic, k_ifd = s[:8], s[8:16], s[16:]
        if not hmac.compare_digest(rnd_ic, challenge):
            return ResponseApdu(b"", apdu.SW_BAC_FAILED)
        k_ic = self.rng.randbytes(16)
        r = rnd_ic + rnd_ifd + k_ic
        e_ic = primitives.tdes_cbc_encrypt(self._bac_enc, bytes(8), r)
        m_ic = primitives.retail_mac(self._bac_mac, sm.pad2(e_ic, 8))
        seed = bytes(a ^ b for a, b in zip(k_ifd, k_ic))
        ssc = int.from_bytes(rnd_ic[4:] + rnd_ifd[4:], "big")
        self.session = sm.derive_session_keys(seed, CipherSuite.TDES_CBC_CBC, ssc)
        self.state = AccessState.BAC
        return ResponseApdu(e_ic + m_ic, apdu.SW_OK)

    # -- protected phase --------------------------------------------------

    def _secure(self, cmd):
        session = self.session
        try:
            plain = sm.unprotect_command(session, cmd)
        except SmError:
            self._abort()
            return _sw(apdu.SW_SM_INCORRECT)
        next_session = None
        if plain.ins == apdu.INS_MSE:
            resp, next_session = self._mse(plain)
        elif plain.ins == apdu.INS_SELECT:
            resp = self._select(plain)
        elif plain.ins == apdu.INS_READ_BINARY:
            resp = self._read_binary(plain, sm.max_plain_response(session.suite))
        else:
            resp = ResponseApdu(b"", apdu.SW_INS_UNSUPPORTED)
        try:
            out = sm.protect_response(session, resp)
        except SmError:
            self._abort()
            return _sw(apdu.SW_SM_INCORRECT)
        if next_session is not None:
            # CA secure messaging replaces the BAC session entirely
            self.session = next_session
            self.state = AccessState.CA
        return encode_response(out)

    def _mse(self, c):
        if self.state is not AccessState.BAC:
            return ResponseApdu(b"", apdu.SW_CONDITIONS), None
        try:
            z_bytes = parse_mse_set_kat(c)
            new = chip_receive_ca(self.ca_private, self.profile.suite, z_bytes, self.params)
        except (ValueError, PointError):
            return ResponseApdu(b"", apdu.SW_WRONG_DATA), None
        return ResponseApdu(b"", apdu.SW_OK), new

    def _read_binary(self, c, limit):
        if c.le is None:
            return ResponseApdu(b"", apdu.SW_WRONG_LENGTH)
        if c.p1 & 0x80:
            if c.p1 & 0x60:
                return ResponseApdu(b"", apdu.SW_WRONG_P1P2)
            sfi = c.p1 & 0x1F
            if sfi not in self.files:
                return ResponseApdu(b"", apdu.SW_FILE_NOT_FOUND)
            self._current_sfi = sfi
            offset = c.p2
        else:
            if self._current_sfi is None:
                return ResponseApdu(b"", apdu.SW_FILE_NOT_FOUND)
            offset = (c.p1 << 8) | c.p2
        content = self.files[self._current_sfi]
        if offset >= len(content):
            return ResponseApdu(b"", apdu.SW_WRONG_P1P2)
        n = min(c.le, limit, len(content) - offset)
        return ResponseApdu(content[offset : offset + n], apdu.SW_OK)

    # -- persistence ------------------------------------------------------

    def to_bytes(self):
        params = self.params
        files = b"".join(
            encode_tlv(0x61, encode_tlv(0x80, bytes((sfi,))) + encode_tlv(0x81, content))
            for sfi, content in sorted(self.files.items())
        )
        body = (
            encode_tlv(0x80, bytes((FILE_VERSION,)))
            + encode_tlv(0x81, self.profile.mrz.encode("ascii"))
            + encode_tlv(0x82, self.profile.holder_name.encode("utf-8"))
            + encode_tlv(0x83, bytes((self.profile.suite.code,)))
            + encode_tlv(0x84, bytes((int(self.profile.curve_id),)))
            + encode_tlv(0x85, self.ca_private.to_bytes(params.order_bytes, "big"))
            + encode_tlv(0xA0, files)
        )
        return encode_tlv(0x70, body)

    @classmethod
    def from_bytes(cls, data, rng=None):
        try:
            outer = apdu.decode_tlv(data)
            if outer.tag != 0x70:
                raise FormatError("not a passport file")
            items = {o.tag: o.value for o in outer.children()}
            if items.get(0x80) != bytes((FILE_VERSION,)):
                raise FormatError("unsupported passport file version")
            profile = PassportProfile(
                items[0x81].decode("ascii"),
                items[0x82].decode("utf-8"),
                CipherSuite.from_code(items[0x83][0]),
                group.CurveId(items[0x84][0]),
            )
            files = {}
            for f in apdu.decode_tlv_sequence(items[0xA0]):
                parts = {o.tag: o.value for o in f.children()}
                files[parts[0x80][0]] = parts[0x81]
            ca_private = int.from_bytes(items[0x85], "big")
            return cls(profile, files, ca_private, rng)
        except FormatError:
            raise
        except (KeyError, IndexError, ValueError, UnicodeDecodeError) as e:
            raise FormatError(f"malformed passport file: {e}") from e


def create_passport(profile, issuer, rng=None):
    """Issue a passport: CA keypair, DG1, DG14 and an issuer-signed SOD.

    With a seeded ``rng`` (or ``profile.seed``) the result is reproducible.
    """
    if rng is None:
        rng = secrets.SystemRandom() if profile.seed is None else _seeded(profile.seed)
    params = group.curve(profile.curve_id)
    x, Y = group.generate_keypair(params, rng)
    dg1 = encode_dg1(profile.mrz)
    dg14 = encode_dg14(Dg14Content(profile.suite, profile.curve_id, Y))
    sod = create_sod(issuer, [DataGroup(1, dg1), DataGroup(14, dg14)], rng)
    files = {SFI_COM: _ef_com(), SFI_DG1: dg1, SFI_DG14: dg14, SFI_SOD: bytes(sod)}
    return Passport(profile, files, x, rng)


def _seeded(seed):
    import random

    return random.Random(seed)
