"""Elliptic-curve group arithmetic on the Brainpool curves used for Chip
Authentication, plus the try-and-increment PIN embedding."""

from __future__ import annotations

import enum
import secrets
from dataclasses import dataclass

from . import _backend
from .errors import EmbeddingFailure, MalformedPoint, OffCurvePoint

EMBED_MAX_TRIES = 1000


class CurveId(enum.IntEnum):
    """Standardized domain parameter identifiers (BSI TR-03110)."""

    BRAINPOOL_P256R1 = 13
    BRAINPOOL_P320R1 = 14

    @property
    def short_name(self):
        return {13: "bp256", 14: "bp320"}[self.value]

    @classmethod
    def from_name(cls, name):
        names = {
            "bp256": cls.BRAINPOOL_P256R1,
            "brainpoolp256r1": cls.BRAINPOOL_P256R1,
            "bp320": cls.BRAINPOOL_P320R1,
            "brainpoolp320r1": cls.BRAINPOOL_P320R1,
        }
        try:
            return names[name.lower()]
        except KeyError:
            raise ValueError(f"unknown curve {name!r}") from None


@dataclass(frozen=True)
class Point:
    """Affine point; ``x is None`` marks the identity."""

    x: int | None
    y: int | None

    @property
    def is_identity(self):
        return self.x is None

    def __repr__(self):
        if self.is_identity:
            return "Point(identity)"
        return f"Point(x=0x{self.x:x}, y=0x{self.y:x})"


IDENTITY = Point(None, None)


@dataclass(frozen=True)
class DomainParameters:
    curve_id: CurveId
    p: int
    a: int
    b: int
    gx: int
    gy: int
    q: int
    h: int = 1

    @property
    def G(self):
        return Point(self.gx, self.gy)

    @property
    def field_bytes(self):
        return (self.p.bit_length() + 7) // 8

    @property
    def order_bytes(self):
        return (self.q.bit_length() + 7) // 8

    def contains(self, P):
        if P.is_identity:
            return True
        x, y = P.x, P.y
        if not (0 <= x < self.p and 0 <= y < self.p):
            return False
        return (y * y - (x * x * x + self.a * x + self.b)) % self.p == 0


# RFC 5639
BRAINPOOL_P256R1 = DomainParameters(
    curve_id=CurveId.BRAINPOOL_P256R1,
    p=0xA9FB57DBA1EEA9BC3E660A909D838D726E3BF623D52620282013481D1F6E5377,
    a=0x7D5A0975FC2C3057EEF67530417AFFE7FB8055C126DC5C6CE94A4B44F330B5D9,
    b=0x26DC5C6CE94A4B44F330B5D9BBD77CBF958416295CF7E1CE6BCCDC18FF8C07B6,
    gx=0x8BD2AEB9CB7E57CB2C4B482FFC81B7AFB9DE27E1E3BD23C23A4453BD9ACE3262,
    gy=0x547EF835C3DAC4FD97F8461A14611DC9C27745132DED8E545C1D54C72F046997,
    q=0xA9FB57DBA1EEA9BC3E660A909D838D718C397AA3B561A6F7901E0E82974856A7,
)

BRAINPOOL_P320R1 = DomainParameters(
    curve_id=CurveId.BRAINPOOL_P320R1,
    p=0xD35E472036BC4FB7E13C785ED201E065F98FCFA6F6F40DEF4F92B9EC7893EC28FCD412B1F1B32E27,
    a=0x3EE30B568FBAB0F883CCEBD46D3F3BB8A2A73513F5EB79DA66190EB085FFA9F492F375A97D860EB4,
    b=0x520883949DFDBC42D3AD198640688A6FE13F41349554B49ACC31DCCD884539816F5EB4AC8FB1F1A6,
    gx=0x43BD7E9AFB53D8B85289BCC48EE5BFE6F20137D10A087EB6E7871E2A10A599C710AF8D0D39E20611,
    gy=0x14FDD05545EC1CC8AB4093247F77275E0743FFED117182EAA9C77877AAAC6AC7D35245D1692E8EE1,
    q=0xD35E472036BC4FB7E13C785ED201E065F98FCFA5B68F12A32D482EC7EE8658E98691555B44C59311,
)

CURVES = {
    CurveId.BRAINPOOL_P256R1: BRAINPOOL_P256R1,
    CurveId.BRAINPOOL_P320R1: BRAINPOOL_P320R1,
}


def curve(curve_id):
    return CURVES[CurveId(curve_id)]


def point_neg(P, params):
    if P.is_identity:
        return IDENTITY
    return Point(P.x, (-P.y) % params.p)


def point_add(P, Q, params):
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    p = params.p
    if P.x == Q.x:
        if (P.y + Q.y) % p == 0:
            return IDENTITY
        lam = (3 * P.x * P.x + params.a) * pow(2 * P.y, -1, p) % p
    else:
        lam = (Q.y - P.y) * pow(Q.x - P.x, -1, p) % p
    x = (lam * lam - P.x - Q.x) % p
    y = (lam * (P.x - x) - P.y) % p
    return Point(x, y)


def point_sub(P, Q, params):
    return point_add(P, point_neg(Q, params), params)


def scalar_mult(k, P, params):
    """Return k*P. ``k`` is reduced modulo the group order first."""
    k %= params.q
    if k == 0 or P.is_identity:
        return IDENTITY
    r = _backend.mul(k, P.x, P.y, params.p, params.a)
    return IDENTITY if r is None else Point(*r)


def random_scalar(params, rng=None):
    """Uniform scalar in (0, q). ``rng`` is any ``random.Random``-like object."""
    if rng is None:
        return secrets.randbelow(params.q - 1) + 1
    return rng.randrange(1, params.q)


def generate_keypair(params, rng=None):
    k = random_scalar(params, rng)
    return k, scalar_mult(k, params.G, params)


def _sqrt(n, p):
    # both Brainpool primes used here are 3 mod 4
    assert p % 4 == 3
    r = pow(n, (p + 1) // 4, p)
    return r if r * r % p == n % p else None


def embed_pin(pin, params):
    """Deterministically map a PIN onto the curve.

    The PIN bytes are read as a big-endian integer (reduced mod p) and used
    as a candidate x-coordinate, incremented until x^3 + ax + b is a square;
    of the two roots the even y is taken.
    """
    if not pin:
        raise ValueError("PIN must be non-empty")
    p = params.p
    x = int.from_bytes(bytes(pin), "big") % p
    for _ in range(EMBED_MAX_TRIES):
        rhs = (x * x * x + params.a * x + params.b) % p
        if rhs != 0:
            y = _sqrt(rhs, p)
            if y is not None:
                if y & 1:
                    y = p - y
                return Point(x, y)
        x = (x + 1) % p
    raise EmbeddingFailure(f"no curve point within {EMBED_MAX_TRIES} increments")


def encode_point(P, params):
    """Uncompressed encoding 04 || x || y."""
    if P.is_identity:
        raise MalformedPoint("the identity element has no transmissible encoding")
    n = params.field_bytes
    return b"\x04" + P.x.to_bytes(n, "big") + P.y.to_bytes(n, "big")


def decode_point(data, params):
    n = params.field_bytes
    data = bytes(data)
    if len(data) != 1 + 2 * n or data[0] != 0x04:
        raise MalformedPoint(f"expected {1 + 2 * n} byte uncompressed point")
    x = int.from_bytes(data[1 : 1 + n], "big")
    y = int.from_bytes(data[1 + n :], "big")
    if x >= params.p or y >= params.p:
        raise MalformedPoint("coordinate not reduced modulo p")
    P = Point(x, y)
    if not params.contains(P):
        raise OffCurvePoint("point does not satisfy the curve equation")
    return P


def shared_secret_bytes(P, params):
    """Fixed-width x-coordinate of a Diffie-Hellman point."""
    if P.is_identity:
        raise ValueError("shared point is the identity")
    return P.x.to_bytes(params.field_bytes, "big")
