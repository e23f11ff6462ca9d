"""Chip Authentication: DG14 contents, ephemeral ECDH on both sides, and the
MSE:SET KAT command that carries the terminal's ephemeral key.

DG14 profile (all lengths DER)::

    6E
      06  id-CA-ECDH-<suite> object identifier
      02  standardized domain parameter id (13 = bp256, 14 = bp320)
      7F49  public key template
        06  id-PK-ECDH
        81 p   82 a   83 b   84 G (uncompressed)   85 q   86 Y   87 h
"""

from __future__ import annotations

from dataclasses import dataclass

from . import group
from .apdu import INS_MSE, CommandApdu, decode_tlv, decode_tlv_sequence, encode_tlv, find_tlv
from .errors import CodecError, MalformedDg14, UnknownCurve, UnknownSuite
from .sm import CipherSuite, SmSession, derive_session_keys

TAG_DG14 = 0x6E
TAG_PUBLIC_KEY = 0x7F49
TAG_EPHEMERAL_KEY = 0x91

# 0.4.0.127.0.7.2.2.3.2.<n>  (bsi-de protocols ca ecdh)
_OID_CA_ECDH = bytes.fromhex("04007F000702020302")
_OID_PK_ECDH = bytes.fromhex("04007F000702020102")

MSE_P1, MSE_P2 = 0x41, 0xA6


def suite_oid(suite):
    return _OID_CA_ECDH + bytes((suite.code,))


def suite_from_oid(oid):
    if len(oid) != len(_OID_CA_ECDH) + 1 or not oid.startswith(_OID_CA_ECDH):
        raise UnknownSuite(f"unsupported chip authentication OID {oid.hex()}")
    try:
        return CipherSuite.from_code(oid[-1])
    except ValueError:
        raise UnknownSuite(f"unsupported chip authentication OID {oid.hex()}") from None


@dataclass(frozen=True)
class Dg14Content:
    suite: CipherSuite
    curve_id: group.CurveId
    ca_public_key: group.Point

    @property
    def params(self):
        return group.curve(self.curve_id)


def _fixed(value, width):
    return value.to_bytes(width, "big")


def encode_dg14(c):
    params = c.params
    w = params.field_bytes
    key = b"".join(
        (
            encode_tlv(0x06, _OID_PK_ECDH),
            encode_tlv(0x81, _fixed(params.p, w)),
            encode_tlv(0x82, _fixed(params.a, w)),
            encode_tlv(0x83, _fixed(params.b, w)),
            encode_tlv(0x84, group.encode_point(params.G, params)),
            encode_tlv(0x85, _fixed(params.q, w)),
            encode_tlv(0x86, group.encode_point(c.ca_public_key, params)),
            encode_tlv(0x87, bytes((params.h,))),
        )
    )
    body = (
        encode_tlv(0x06, suite_oid(c.suite))
        + encode_tlv(0x02, bytes((int(c.curve_id),)))
        + encode_tlv(TAG_PUBLIC_KEY, key)
    )
    return encode_tlv(TAG_DG14, body)


def parse_dg14(data):
    try:
        outer = decode_tlv(data)
        if outer.tag != TAG_DG14:
            raise MalformedDg14(f"expected tag 6E, got {outer.tag:X}")
        items = outer.children()
        if [o.tag for o in items] != [0x06, 0x02, TAG_PUBLIC_KEY]:
            raise MalformedDg14("unexpected DG14 layout")
        key_items = items[2].children()
    except CodecError as e:
        raise MalformedDg14(str(e)) from e
    suite = suite_from_oid(items[0].value)
    if len(items[1].value) != 1:
        raise MalformedDg14("curve identifier must be one byte")
    try:
        curve_id = group.CurveId(items[1].value[0])
    except ValueError:
        raise UnknownCurve(f"unknown domain parameter id {items[1].value[0]}") from None
    params = group.curve(curve_id)
    if [o.tag for o in key_items] != [0x06, 0x81, 0x82, 0x83, 0x84, 0x85, 0x86, 0x87]:
        raise MalformedDg14("unexpected public key template layout")
    if key_items[0].value != _OID_PK_ECDH:
        raise MalformedDg14("public key is not an ECDH key")
    w = params.field_bytes
    explicit = [o.value for o in key_items[1:6]] + [key_items[7].value]
    expected = [
        _fixed(params.p, w),
        _fixed(params.a, w),
        _fixed(params.b, w),
        group.encode_point(params.G, params),
        _fixed(params.q, w),
        bytes((params.h,)),
    ]
    if explicit != expected:
        raise UnknownCurve("explicit domain parameters do not match the named curve")
    Y = group.decode_point(find_tlv(key_items, 0x86).value, params)
    return Dg14Content(suite, curve_id, Y)


@dataclass
class CaTranscript:
    """Terminal view of one Chip Authentication run."""

    ephemeral_public: group.Point
    shared_secret: bytes
    session: SmSession

    def ephemeral_bytes(self, params):
        return group.encode_point(self.ephemeral_public, params)


def _check_scalar(k, params):
    if not 0 < k < params.q:
        raise ValueError("scalar must lie in (0, q)")


def terminal_chip_auth(dg14, k):
    """Z = kG, K = kY; deterministic in (dg14, k)."""
    params = dg14.params
    _check_scalar(k, params)
    Z = group.scalar_mult(k, params.G, params)
    K = group.scalar_mult(k, dg14.ca_public_key, params)
    secret = group.shared_secret_bytes(K, params)
    return CaTranscript(Z, secret, derive_session_keys(secret, dg14.suite))


def chip_receive_ca(x, suite, z_bytes, params):
    """Chip side: K = xZ. Rejects malformed, off-curve and identity keys."""
    _check_scalar(x, params)
    Z = group.decode_point(z_bytes, params)
    K = group.scalar_mult(x, Z, params)
    return derive_session_keys(group.shared_secret_bytes(K, params), suite)


def mse_set_kat(z_bytes):
    return CommandApdu(0x00, INS_MSE, MSE_P1, MSE_P2, encode_tlv(TAG_EPHEMERAL_KEY, z_bytes))


def parse_mse_set_kat(command):
    """Return the ephemeral key bytes carried by an MSE:SET KAT command."""
    if (command.p1, command.p2) != (MSE_P1, MSE_P2):
        raise ValueError("not an MSE:SET KAT command")
    objects = decode_tlv_sequence(command.data)
    if len(objects) != 1 or objects[0].tag != TAG_EPHEMERAL_KEY:
        raise ValueError("MSE:SET KAT must carry exactly one ephemeral key object")
    return objects[0].value
