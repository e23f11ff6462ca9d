"""Reference implementations kept deliberately separate from the package.

Slow, textbook and affine: they only need to be obviously right.
"""

import random


def inv(a, p):
    # extended Euclid rather than pow(a, -1, p)
    r0, r1, s0, s1 = a % p, p, 1, 0
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    assert r0 == 1
    return s0 % p


def on_curve(P, p, a, b):
    if P is None:
        return True
    x, y = P
    return (y * y - (x * x * x + a * x + b)) % p == 0


def add(P, Q, p, a):
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and (y1 + y2) % p == 0:
        return None
    if P == Q:
        lam = (3 * x1 * x1 + a) * inv(2 * y1, p) % p
    else:
        lam = (y2 - y1) * inv(x2 - x1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def mul(k, P, p, a):
    """Right-to-left double-and-add."""
    R = None
    while k:
        if k & 1:
            R = add(R, P, p, a)
        P = add(P, P, p, a)
        k >>= 1
    return R


def legendre(n, p):
    return pow(n, (p - 1) // 2, p)


def tonelli_shanks(n, p):
    n %= p
    if n == 0:
        return 0
    if legendre(n, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def embed(pin, p, a, b):
    """Try-and-increment with the even root, via Tonelli-Shanks."""
    x = int.from_bytes(pin, "big") % p
    while True:
        rhs = (x ** 3 + a * x + b) % p
        y = tonelli_shanks(rhs, p) if rhs else None
        if y:
            return x, min(y, p - y, key=lambda v: v & 1)
        x = (x + 1) % p


def is_probable_prime(n, rounds=32):
    if n < 2:
        return False
    for sp in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29):
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = random.Random(n)
    for _ in range(rounds):
        x = pow(rng.randrange(2, n - 1), d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def tlv_size(value_len, tag_len=1):
    """Encoded size of a DER TLV with the given value length."""
    if value_len < 0x80:
        return tag_len + 1 + value_len
    return tag_len + 1 + (value_len.bit_length() + 7) // 8 + value_len


def retail_mac_by_hand(key, data):
    """ISO 9797-1 MAC algorithm 3 written out block by block over single DES."""
    from cryptography.hazmat.decrepit.ciphers.algorithms import TripleDES
    from cryptography.hazmat.primitives.ciphers import Cipher, modes

    def des(k, block, enc=True):
        c = Cipher(TripleDES(k * 3), modes.ECB())
        ctx = c.encryptor() if enc else c.decryptor()
        return ctx.update(block) + ctx.finalize()

    ka, kb = key[:8], key[8:]
    h = bytes(8)
    for i in range(0, len(data), 8):
        h = des(ka, bytes(x ^ y for x, y in zip(h, data[i : i + 8])))
    return des(ka, des(kb, h, enc=False))
