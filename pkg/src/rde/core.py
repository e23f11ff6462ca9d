"""Remote Document Encryption: registration, encryption by simulating a card
read, decryption by replaying that read against the real card.

The RDE key is SHA-256 over the protected READ BINARY response(s) the chip
would return, taken as full response APDUs (DO'87' || DO'99' || DO'8E' || SW).

Ciphertext envelope (tag 72, all lengths DER)::

    80 version   81 suite code   82 curve id   83 Z or Z' (uncompressed)
    84 protected READ BINARY command    (repeated, one per read)
    85 CCM nonce (12)   87 flags (bit 0: PIN-protected)
    86 AES-256-CCM ciphertext || tag (16)

The AAD is the envelope re-encoded without tag 86.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import secrets
from dataclasses import dataclass, field

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESCCM

from . import apdu, group, sm
from .apdu import ResponseApdu, decode_tlv, encode_tlv
from .chip_auth import Dg14Content, mse_set_kat, parse_dg14, terminal_chip_auth
from .errors import (
    AuthDecryptFailure,
    CardError,
    CardRejectedSm,
    CodecError,
    ConsentMissing,
    FormatError,
    MalformedSod,
    PaFailure,
    ParamsInconsistent,
    PointError,
)
from .mrz import parse_mrz
from .passive_auth import DataGroup, DocumentSecurityObject, parse_sod, verify_dg
from .passport import parse_dg1
from .reader import Reader
from .sm import CipherSuite

CIPHERTEXT_VERSION = 1
RECORD_VERSION = 1
NONCE_LENGTH = 12
TAG_LENGTH = 16
MAX_MULTI = 64

TAG_CIPHERTEXT = 0x72
TAG_RECORD = 0x71
FLAG_PIN = 0x01


# ---------------------------------------------------------------------------
# registration

@dataclass(frozen=True)
class ExtractionParameters:
    """Which bytes the RDE read returns: the first ``n`` of file ``f_id``."""

    n: int
    f_id: int
    f_cont: bytes

    def __post_init__(self):
        if not 1 <= self.n <= 256:
            raise ValueError("n must be in 1..256")
        if not 1 <= self.f_id <= 16:
            raise ValueError("f_id must name a data group (1..16)")
        object.__setattr__(self, "f_cont", bytes(self.f_cont))

    @property
    def expected_plaintext(self):
        return self.f_cont[: self.n]


@dataclass(frozen=True)
class RegistrationRecord:
    mrz: str
    dg14: Dg14Content
    sod: DocumentSecurityObject
    params: ExtractionParameters
    consent: bool
    consent_time: str
    dg1_bytes: bytes = field(repr=False)
    dg14_bytes: bytes = field(repr=False)

    @property
    def suite(self):
        return self.dg14.suite

    @property
    def curve(self):
        return self.dg14.params

    @property
    def document_number(self):
        return parse_mrz(self.mrz).document_number

    def to_bytes(self):
        p = self.params
        body = (
            encode_tlv(0x80, bytes((RECORD_VERSION,)))
            + encode_tlv(0x81, self.dg1_bytes)
            + encode_tlv(0x82, self.dg14_bytes)
            + encode_tlv(0x83, bytes(self.sod))
            + encode_tlv(0x84, p.n.to_bytes(2, "big"))
            + encode_tlv(0x85, bytes((p.f_id,)))
            + encode_tlv(0x86, p.f_cont)
            + encode_tlv(0x87, self.consent_time.encode("ascii"))
        )
        return encode_tlv(TAG_RECORD, body)

    @classmethod
    def from_bytes(cls, data, trusted_issuer=None):
        """Parse and re-verify a stored record."""
        try:
            outer = decode_tlv(data)
            items = outer.children()
            if outer.tag != TAG_RECORD or [o.tag for o in items] != list(range(0x80, 0x88)):
                raise FormatError("not a registration record")
            v = [o.value for o in items]
            if v[0] != bytes((RECORD_VERSION,)):
                raise FormatError("unsupported record version")
            params = ExtractionParameters(int.from_bytes(v[4], "big"), v[5][0], v[6])
            when = v[7].decode("ascii")
        except (CodecError, IndexError, UnicodeDecodeError) as e:
            raise FormatError(f"malformed registration record: {e}") from e
        except ValueError as e:
            raise FormatError(str(e)) from e
        return register(
            DataGroup(1, v[1]), DataGroup(14, v[2]), v[3], params, True,
            trusted_issuer=trusted_issuer, consent_time=when,
        )


def register(dg1, dg14_dg, sod, params, consent, trusted_issuer=None, consent_time=None):
    """Validate what the holder supplied and produce a registration record.

    Every data group is checked against the SOD; ``trusted_issuer`` pins
    the SOD signer.  Without it any self-consistent SOD is accepted.
    """
    if consent is not True:
        raise ConsentMissing("holder consent is required for registration")
    if not isinstance(sod, DocumentSecurityObject):
        try:
            sod = parse_sod(sod)
        except MalformedSod as e:
            raise PaFailure(0, f"EF.SOD rejected: {e}") from e
    if dg1.number != 1 or dg14_dg.number != 14:
        raise ValueError("expected DG1 and DG14")
    for dg in (dg1, dg14_dg):
        if not verify_dg(sod, dg, trusted_issuer):
            raise PaFailure(dg.number, f"DG{dg.number} does not verify against EF.SOD")
    if sod.hash_for(params.f_id) is None:
        raise ParamsInconsistent(f"DG{params.f_id} is not covered by EF.SOD")
    if not verify_dg(sod, DataGroup(params.f_id, params.f_cont), trusted_issuer):
        raise PaFailure(params.f_id, f"DG{params.f_id} contents do not verify against EF.SOD")
    try:
        mrz = parse_dg1(dg1.content)
        parse_mrz(mrz)
    except (CodecError, ValueError) as e:
        raise PaFailure(1, f"DG1 holds no usable MRZ: {e}") from e
    dg14 = parse_dg14(dg14_dg.content)
    limit = sm.max_plain_response(dg14.suite)
    if params.n > len(params.f_cont):
        raise ParamsInconsistent(f"n={params.n} exceeds the {len(params.f_cont)}-byte file")
    if params.n > limit:
        raise ParamsInconsistent(f"n={params.n} exceeds the {limit}-byte read limit of {dg14.suite.label}")
    if consent_time is None:
        consent_time = _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()
    return RegistrationRecord(mrz, dg14, sod, params, True, consent_time, dg1.content, dg14_dg.content)


# ---------------------------------------------------------------------------
# simulated reads

@dataclass(frozen=True)
class ProtectedRead:
    """Z with the protected commands and the chip responses they provoke."""

    z: group.Point
    commands: tuple
    responses: tuple

    @property
    def rb(self):
        return self.commands[0]

    @property
    def m(self):
        return self.responses[0]

    def key(self):
        return rde_key(self.responses)


def rde_key(responses):
    return hashlib.sha256(b"".join(responses)).digest()


def simulate_reads(record, k, count=1):
    """Terminal-side prediction of ``count`` CA-protected reads under ephemeral key k.

    Command j carries SSC 2j-1, its response SSC 2j.  No card is involved.
    """
    if not 1 <= count <= MAX_MULTI:
        raise ValueError(f"read count must be in 1..{MAX_MULTI}")
    p = record.params
    transcript = terminal_chip_auth(record.dg14, k)
    session = transcript.session
    plain = ResponseApdu(p.expected_plaintext, apdu.SW_OK)
    command = apdu.encode_read_binary_sfi(p.f_id, 0, p.n)
    commands, responses = [], []
    for _ in range(count):
        commands.append(bytes(sm.protect_command(session, command)))
        responses.append(bytes(sm.protect_response(session, plain)))
    return ProtectedRead(transcript.ephemeral_public, tuple(commands), tuple(responses))


def simulate_protected_read(record, k):
    """Return (Z, RB̄, M̄) for one read; a pure function of (record, k)."""
    r = simulate_reads(record, k, 1)
    return r.z, r.rb, r.m


# ---------------------------------------------------------------------------
# envelope

@dataclass(frozen=True)
class RdeCiphertext:
    suite: CipherSuite
    curve_id: group.CurveId
    z_point: bytes
    rb_blocks: tuple
    nonce: bytes
    payload: bytes
    pin_protected: bool = False
    version: int = CIPHERTEXT_VERSION

    def __post_init__(self):
        params = group.curve(self.curve_id)
        try:
            group.decode_point(self.z_point, params)
        except PointError as e:
            raise FormatError(f"bad Z point: {e}") from e
        if not 1 <= len(self.rb_blocks) <= MAX_MULTI:
            raise FormatError("envelope needs 1..64 protected commands")
        for block in self.rb_blocks:
            try:
                c = apdu.decode_command(block)
            except CodecError as e:
                raise FormatError(f"bad RB block: {e}") from e
            if c.cla & 0x0C != 0x0C or c.ins != apdu.INS_READ_BINARY:
                raise FormatError("RB block is not a protected READ BINARY")
        if len(self.nonce) != NONCE_LENGTH:
            raise FormatError("nonce must be 12 bytes")
        if len(self.payload) <= TAG_LENGTH:
            raise FormatError("payload too short")
        if self.version != CIPHERTEXT_VERSION:
            raise FormatError(f"unsupported envelope version {self.version}")

    @property
    def multi_count(self):
        return len(self.rb_blocks)

    @property
    def rb_protected(self):
        return b"".join(self.rb_blocks)

    def _fields(self, with_payload):
        out = (
            encode_tlv(0x80, bytes((self.version,)))
            + encode_tlv(0x81, bytes((self.suite.code,)))
            + encode_tlv(0x82, bytes((int(self.curve_id),)))
            + encode_tlv(0x83, self.z_point)
            + b"".join(encode_tlv(0x84, b) for b in self.rb_blocks)
            + encode_tlv(0x85, self.nonce)
        )
        if with_payload:
            out += encode_tlv(0x86, self.payload)
        return out + encode_tlv(0x87, bytes((FLAG_PIN if self.pin_protected else 0,)))

    def associated_data(self):
        return encode_tlv(TAG_CIPHERTEXT, self._fields(False))

    def to_bytes(self):
        return encode_tlv(TAG_CIPHERTEXT, self._fields(True))

    def to_text(self):
        return self.to_bytes().hex()

    @classmethod
    def from_bytes(cls, data):
        try:
            outer = decode_tlv(data)
            if outer.tag != TAG_CIPHERTEXT:
                raise FormatError("not an RDE ciphertext")
            items = outer.children()
            tags = [o.tag for o in items]
            blocks = tags.count(0x84)
            if blocks < 1 or tags != [0x80, 0x81, 0x82, 0x83] + [0x84] * blocks + [0x85, 0x86, 0x87]:
                raise FormatError("unexpected envelope layout")
            v = {o.tag: o.value for o in items}
            for tag in (0x80, 0x81, 0x82, 0x87):
                if len(v[tag]) != 1:
                    raise FormatError(f"field {tag:02X} must be one byte")
            if v[0x87][0] & ~FLAG_PIN:
                raise FormatError("unknown flag bits")
            ct = cls(
                CipherSuite.from_code(v[0x81][0]),
                group.CurveId(v[0x82][0]),
                v[0x83],
                tuple(o.value for o in items if o.tag == 0x84),
                v[0x85],
                v[0x86],
                bool(v[0x87][0] & FLAG_PIN),
                v[0x80][0],
            )
        except FormatError:
            raise
        except (CodecError, PointError, ValueError) as e:
            raise FormatError(f"malformed RDE ciphertext: {e}") from e
        if ct.to_bytes() != bytes(data):
            raise FormatError("non-canonical envelope encoding")
        return ct

    @classmethod
    def from_text(cls, text):
        try:
            raw = bytes.fromhex("".join(text.split()))
        except ValueError as e:
            raise FormatError("envelope text is not hexadecimal") from e
        return cls.from_bytes(raw)


# ---------------------------------------------------------------------------
# encryption and decryption

def encrypt(record, data, rng=None, pin=None, multi_count=1):
    """Encrypt ``data`` so that only the registered document can recover the key."""
    data = bytes(data)
    if not data:
        raise ValueError("nothing to encrypt")
    rng = rng if rng is not None else secrets.SystemRandom()
    params = record.curve
    offset = group.embed_pin(pin, params) if pin is not None else None
    while True:
        k = group.random_scalar(params, rng)
        reads = simulate_reads(record, k, multi_count)
        z = reads.z if offset is None else group.point_add(offset, reads.z, params)
        if not z.is_identity:
            break
    nonce = rng.randbytes(NONCE_LENGTH)
    header = RdeCiphertext(
        record.suite, params.curve_id, group.encode_point(z, params),
        reads.commands, nonce, bytes(TAG_LENGTH + 1), pin is not None,
    )
    payload = AESCCM(reads.key(), tag_length=TAG_LENGTH).encrypt(nonce, data, header.associated_data())
    return RdeCiphertext(
        header.suite, header.curve_id, header.z_point, header.rb_blocks, nonce, payload, header.pin_protected,
    )


def recover_z(ct, pin=None):
    params = group.curve(ct.curve_id)
    z = group.decode_point(ct.z_point, params)
    if not ct.pin_protected:
        return z
    if pin is None:
        raise ValueError("this ciphertext needs the Extraction PIN")
    return group.point_sub(z, group.embed_pin(pin, params), params)


def decrypt(ct, card, mrz, pin=None, rng=None, log=None):
    """Recover the plaintext by replaying the stored reads against ``card``.

    ``card`` maps command bytes to response bytes; if it has ``reset`` it is
    cold-reset first.
    """
    params = group.curve(ct.curve_id)
    z = recover_z(ct, pin)
    if z.is_identity:
        raise AuthDecryptFailure("PIN removal produced the identity point")
    reset = getattr(card, "reset", None)
    if callable(reset):
        reset()
    reader = Reader(card, rng, log)
    reader.select_lds()
    reader.bac(mrz)
    try:
        r = reader.secure(mse_set_kat(group.encode_point(z, params)), "MSE:SET KAT")
    except CardError as e:
        raise CardRejectedSm(f"chip refused MSE:SET KAT ({e.sw:04X})") from e
    if not r.ok:
        raise CardRejectedSm(f"chip refused MSE:SET KAT ({r.sw:04X})")
    # from here on only the chip holds the session keys
    reader.session = None
    responses = []
    for block in ct.rb_blocks:
        m = reader.transmit_raw(block, "RB")
        if len(m) <= 2:
            raise CardRejectedSm(f"chip rejected the protected read ({m.hex().upper()})")
        responses.append(m)
    try:
        return AESCCM(rde_key(responses), tag_length=TAG_LENGTH).decrypt(
            ct.nonce, ct.payload, ct.associated_data()
        )
    except InvalidTag:
        raise AuthDecryptFailure("authenticated decryption failed") from None


def security_strength(suite, q_bits):
    """Bits of security for the RDE key: capped by the SM cipher and by |q|/2."""
    if q_bits <= 0:
        raise ValueError("q_bits must be positive")
    cap = 192 if suite.is_aes else 128
    return min(cap, q_bits // 2)
