"""Passive Authentication: an issuer-signed list of data-group hashes.

SOD encoding::

    77
      30  signed content
        06  hash algorithm OID (SHA-256)
        30  { 30 { 02 dg-number, 04 hash } ... }   sorted by dg number
      02  issuer curve id
      86  issuer public key (uncompressed)
      5F37  ECDSA signature r || s over SHA-256(signed content)
"""

from __future__ import annotations

import hashlib
import hmac
from dataclasses import dataclass

from . import group
from .apdu import decode_tlv, encode_tlv
from .errors import CodecError, DuplicateDgNumber, MalformedSod, PointError

TAG_SOD = 0x77
TAG_SIGNATURE = 0x5F37
OID_SHA256 = bytes.fromhex("608648016503040201")
SOD_CURVE = group.BRAINPOOL_P256R1


# ---------------------------------------------------------------------------
# ECDSA

def _bits2int(data, q):
    v = int.from_bytes(data, "big")
    excess = len(data) * 8 - q.bit_length()
    return v >> excess if excess > 0 else v


def rfc6979_nonce(d, digest, params, hashfunc=hashlib.sha256):
    q = params.q
    rlen = params.order_bytes
    x = d.to_bytes(rlen, "big")
    h = (_bits2int(digest, q) % q).to_bytes(rlen, "big")
    size = hashfunc().digest_size
    V = b"\x01" * size
    K = b"\x00" * size
    K = hmac.new(K, V + b"\x00" + x + h, hashfunc).digest()
    V = hmac.new(K, V, hashfunc).digest()
    K = hmac.new(K, V + b"\x01" + x + h, hashfunc).digest()
    V = hmac.new(K, V, hashfunc).digest()
    while True:
        T = b""
        while len(T) < rlen:
            V = hmac.new(K, V, hashfunc).digest()
            T += V
        k = _bits2int(T[:rlen], q)
        if 0 < k < q:
            return k
        K = hmac.new(K, V + b"\x00", hashfunc).digest()
        V = hmac.new(K, V, hashfunc).digest()


def ecdsa_sign(d, message, params=SOD_CURVE, rng=None):
    """Sign SHA-256(message); nonce from ``rng`` or, if None, RFC 6979."""
    digest = hashlib.sha256(message).digest()
    e = _bits2int(digest, params.q)
    q = params.q
    while True:
        if rng is None:
            k = rfc6979_nonce(d, digest, params)
        else:
            k = group.random_scalar(params, rng)
        r = group.scalar_mult(k, params.G, params).x % q
        s = pow(k, -1, q) * (e + r * d) % q
        if r and s:
            n = params.order_bytes
            return r.to_bytes(n, "big") + s.to_bytes(n, "big")
        if rng is None:
            raise RuntimeError("degenerate deterministic nonce")


def ecdsa_verify(Q, message, signature, params=SOD_CURVE):
    n = params.order_bytes
    if len(signature) != 2 * n or Q.is_identity or not params.contains(Q):
        return False
    q = params.q
    r = int.from_bytes(signature[:n], "big")
    s = int.from_bytes(signature[n:], "big")
    if not (0 < r < q and 0 < s < q):
        return False
    e = _bits2int(hashlib.sha256(message).digest(), q)
    w = pow(s, -1, q)
    R = group.point_add(
        group.scalar_mult(e * w % q, params.G, params),
        group.scalar_mult(r * w % q, Q, params),
        params,
    )
    return not R.is_identity and R.x % q == r


# ---------------------------------------------------------------------------
# document security object

@dataclass(frozen=True)
class DataGroup:
    number: int
    content: bytes

    def __post_init__(self):
        if not 1 <= self.number <= 16:
            raise ValueError("data group numbers run from 1 to 16")
        object.__setattr__(self, "content", bytes(self.content))


@dataclass(frozen=True)
class IssuerKeypair:
    private: int
    public: group.Point

    @classmethod
    def generate(cls, rng=None):
        d, Q = group.generate_keypair(SOD_CURVE, rng)
        return cls(d, Q)


@dataclass(frozen=True)
class DocumentSecurityObject:
    entries: tuple  # ((dg number, sha-256 digest), ...)
    signature: bytes
    issuer_public: group.Point
    hash_alg: str = "SHA-256"

    def hash_for(self, number):
        for dg, digest in self.entries:
            if dg == number:
                return digest
        return None

    def signed_content(self):
        return _signed_content(self.entries)

    def __bytes__(self):
        return encode_sod(self)


def _signed_content(entries):
    seq = b"".join(
        encode_tlv(0x30, encode_tlv(0x02, bytes((n,))) + encode_tlv(0x04, digest))
        for n, digest in entries
    )
    return encode_tlv(0x30, encode_tlv(0x06, OID_SHA256) + encode_tlv(0x30, seq))


def create_sod(issuer, dgs, rng=None):
    if not dgs:
        raise ValueError("at least one data group is required")
    numbers = [dg.number for dg in dgs]
    if len(set(numbers)) != len(numbers):
        raise DuplicateDgNumber(f"data group numbers repeat: {numbers}")
    entries = tuple(
        (dg.number, hashlib.sha256(dg.content).digest())
        for dg in sorted(dgs, key=lambda d: d.number)
    )
    signature = ecdsa_sign(issuer.private, _signed_content(entries), SOD_CURVE, rng)
    return DocumentSecurityObject(entries, signature, issuer.public)


def encode_sod(sod):
    return encode_tlv(
        TAG_SOD,
        sod.signed_content()
        + encode_tlv(0x02, bytes((int(SOD_CURVE.curve_id),)))
        + encode_tlv(0x86, group.encode_point(sod.issuer_public, SOD_CURVE))
        + encode_tlv(TAG_SIGNATURE, sod.signature),
    )


def parse_sod(data):
    try:
        outer = decode_tlv(data)
        if outer.tag != TAG_SOD:
            raise MalformedSod("expected tag 77")
        items = outer.children()
        if [o.tag for o in items] != [0x30, 0x02, 0x86, TAG_SIGNATURE]:
            raise MalformedSod("unexpected SOD layout")
        content = items[0].children()
        if [o.tag for o in content] != [0x06, 0x30] or content[0].value != OID_SHA256:
            raise MalformedSod("unsupported hash algorithm")
        entries = []
        for entry in content[1].children():
            parts = entry.children()
            if entry.tag != 0x30 or [o.tag for o in parts] != [0x02, 0x04]:
                raise MalformedSod("malformed hash entry")
            if len(parts[0].value) != 1 or len(parts[1].value) != 32:
                raise MalformedSod("malformed hash entry")
            entries.append((parts[0].value[0], parts[1].value))
        if items[1].value != bytes((int(SOD_CURVE.curve_id),)):
            raise MalformedSod("unsupported issuer curve")
        issuer = group.decode_point(items[2].value, SOD_CURVE)
    except (CodecError, PointError) as e:
        raise MalformedSod(str(e)) from e
    numbers = [n for n, _ in entries]
    if numbers != sorted(set(numbers)):
        raise MalformedSod("hash entries must be sorted and unique")
    sod = DocumentSecurityObject(tuple(entries), items[3].value, issuer)
    if encode_sod(sod) != bytes(data):
        raise MalformedSod("non-canonical encoding")
    return sod


def verify_sod(sod, trusted_issuer=None):
    if trusted_issuer is not None and sod.issuer_public != trusted_issuer:
        return False
    return ecdsa_verify(sod.issuer_public, sod.signed_content(), sod.signature, SOD_CURVE)


def verify_dg(sod, dg, trusted_issuer=None):
    """True iff the SOD signature verifies and ``dg`` matches its hash entry.

    ``sod`` may be raw bytes; malformed encodings are rejected.  When
    ``trusted_issuer`` is given the SOD must be signed by that key.
    """
    if not isinstance(sod, DocumentSecurityObject):
        try:
            sod = parse_sod(sod)
        except MalformedSod:
            return False
    expected = sod.hash_for(dg.number)
    if expected is None or not verify_sod(sod, trusted_issuer):
        return False
    return hmac.compare_digest(expected, hashlib.sha256(dg.content).digest())
