"""Pure-Python scalar multiplication kernel.

Same contract as the compiled ``_ecfast`` module: affine integers in,
affine tuple (or ``None`` for the point at infinity) out.  Internally the
loop runs in Jacobian coordinates so only one inversion is paid.
"""

NAME = "python"


def _double(X, Y, Z, p, a):
    if Z == 0 or Y == 0:
        return 0, 1, 0
    YY = Y * Y % p
    S = 4 * X * YY % p
    ZZ = Z * Z % p
    M = (3 * X * X + a * ZZ * ZZ) % p
    X3 = (M * M - 2 * S) % p
    Y3 = (M * (S - X3) - 8 * YY * YY) % p
    Z3 = 2 * Y * Z % p
    return X3, Y3, Z3


def _add_mixed(X, Y, Z, x, y, p, a):
    # (X:Y:Z) + (x, y, 1)
    if Z == 0:
        return x, y, 1
    ZZ = Z * Z % p
    U2 = x * ZZ % p
    S2 = y * ZZ * Z % p
    H = (U2 - X) % p
    R = (S2 - Y) % p
    if H == 0:
        if R == 0:
            return _double(X, Y, Z, p, a)
        return 0, 1, 0
    HH = H * H % p
    HHH = H * HH % p
    V = X * HH % p
    X3 = (R * R - HHH - 2 * V) % p
    Y3 = (R * (V - X3) - Y * HHH) % p
    Z3 = Z * H % p
    return X3, Y3, Z3


def mul(k, x, y, p, a):
    """Return k*(x, y) as an affine pair, or None for infinity. Requires k >= 0."""
    if k == 0:
        return None
    X, Y, Z = x, y, 1
    for bit in bin(k)[3:]:
        X, Y, Z = _double(X, Y, Z, p, a)
        if bit == "1":
            X, Y, Z = _add_mixed(X, Y, Z, x, y, p, a)
    if Z == 0:
        return None
    zi = pow(Z, -1, p)
    zi2 = zi * zi % p
    return X * zi2 % p, Y * zi2 * zi % p
