# cython: language_level=3, boundscheck=False, wraparound=False
"""GMP-backed scalar multiplication kernel (compiled counterpart of _ecpy)."""

from libc.stdlib cimport malloc, free

cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]
    ctypedef __mpz_struct *mpz_ptr
    ctypedef const __mpz_struct *mpz_srcptr

    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)
    void mpz_set(mpz_ptr, mpz_srcptr)
    void mpz_set_ui(mpz_ptr, unsigned long)
    int mpz_set_str(mpz_ptr, const char *, int)
    char *mpz_get_str(char *, int, mpz_srcptr)
    size_t mpz_sizeinbase(mpz_srcptr, int)
    void mpz_add(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_sub(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_mul(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_mul_ui(mpz_ptr, mpz_srcptr, unsigned long)
    void mpz_mod(mpz_ptr, mpz_srcptr, mpz_srcptr)
    int mpz_invert(mpz_ptr, mpz_srcptr, mpz_srcptr)
    int mpz_tstbit(mpz_srcptr, unsigned long)
    int mpz_sgn(mpz_srcptr)

NAME = "gmp"

# scratch registers shared by the helpers below
cdef mpz_t T1, T2, T3, T4, T5, T6
mpz_init(T1); mpz_init(T2); mpz_init(T3)
mpz_init(T4); mpz_init(T5); mpz_init(T6)


cdef void _load(mpz_ptr z, object value):
    cdef bytes s = format(value, "x").encode("ascii")
    mpz_set_str(z, s, 16)


cdef object _store(mpz_srcptr z):
    cdef size_t n = mpz_sizeinbase(z, 16) + 2
    cdef char *buf = <char *>malloc(n)
    if buf == NULL:
        raise MemoryError()
    try:
        mpz_get_str(buf, 16, z)
        return int(buf.decode("ascii"), 16)
    finally:
        free(buf)


cdef void _double(mpz_ptr X, mpz_ptr Y, mpz_ptr Z, mpz_srcptr p, mpz_srcptr a):
    if mpz_sgn(Z) == 0 or mpz_sgn(Y) == 0:
        mpz_set_ui(X, 0); mpz_set_ui(Y, 1); mpz_set_ui(Z, 0)
        return
    # T1 = YY, T2 = S, T3 = M
    mpz_mul(T1, Y, Y); mpz_mod(T1, T1, p)
    mpz_mul(T2, X, T1); mpz_mul_ui(T2, T2, 4); mpz_mod(T2, T2, p)
    mpz_mul(T4, Z, Z); mpz_mod(T4, T4, p)
    mpz_mul(T4, T4, T4); mpz_mod(T4, T4, p)
    mpz_mul(T4, T4, a)
    mpz_mul(T3, X, X); mpz_mul_ui(T3, T3, 3); mpz_add(T3, T3, T4); mpz_mod(T3, T3, p)
    # Z3 = 2YZ
    mpz_mul(Z, Y, Z); mpz_mul_ui(Z, Z, 2); mpz_mod(Z, Z, p)
    # X3 = M^2 - 2S
    mpz_mul(X, T3, T3); mpz_sub(X, X, T2); mpz_sub(X, X, T2); mpz_mod(X, X, p)
    # Y3 = M(S - X3) - 8 YY^2
    mpz_sub(T2, T2, X); mpz_mul(T2, T2, T3)
    mpz_mul(T1, T1, T1); mpz_mul_ui(T1, T1, 8)
    mpz_sub(Y, T2, T1); mpz_mod(Y, Y, p)


cdef void _add_mixed(mpz_ptr X, mpz_ptr Y, mpz_ptr Z, mpz_srcptr x, mpz_srcptr y,
                     mpz_srcptr p, mpz_srcptr a):
    if mpz_sgn(Z) == 0:
        mpz_set(X, x); mpz_set(Y, y); mpz_set_ui(Z, 1)
        return
    # T1 = ZZ, T2 = U2 -> H, T3 = S2 -> R
    mpz_mul(T1, Z, Z); mpz_mod(T1, T1, p)
    mpz_mul(T2, x, T1); mpz_mod(T2, T2, p)
    mpz_mul(T3, y, T1); mpz_mul(T3, T3, Z); mpz_mod(T3, T3, p)
    mpz_sub(T2, T2, X); mpz_mod(T2, T2, p)
    mpz_sub(T3, T3, Y); mpz_mod(T3, T3, p)
    if mpz_sgn(T2) == 0:
        if mpz_sgn(T3) == 0:
            _double(X, Y, Z, p, a)
        else:
            mpz_set_ui(X, 0); mpz_set_ui(Y, 1); mpz_set_ui(Z, 0)
        return
    # T4 = HH, T5 = HHH, T6 = V
    mpz_mul(T4, T2, T2); mpz_mod(T4, T4, p)
    mpz_mul(T5, T2, T4); mpz_mod(T5, T5, p)
    mpz_mul(T6, X, T4); mpz_mod(T6, T6, p)
    # Z3 = Z H
    mpz_mul(Z, Z, T2); mpz_mod(Z, Z, p)
    # X3 = R^2 - HHH - 2V
    mpz_mul(X, T3, T3); mpz_sub(X, X, T5); mpz_sub(X, X, T6); mpz_sub(X, X, T6)
    mpz_mod(X, X, p)
    # Y3 = R(V - X3) - Y HHH
    mpz_sub(T6, T6, X); mpz_mul(T6, T6, T3)
    mpz_mul(T5, Y, T5)
    mpz_sub(Y, T6, T5); mpz_mod(Y, Y, p)


def mul(k, x, y, p, a):
    """Return k*(x, y) as an affine pair, or None for infinity. Requires k >= 0."""
    cdef mpz_t K, PX, PY, P, A, X, Y, Z
    cdef long i
    if k == 0:
        return None
    mpz_init(K); mpz_init(PX); mpz_init(PY); mpz_init(P); mpz_init(A)
    mpz_init(X); mpz_init(Y); mpz_init(Z)
    try:
        _load(K, k); _load(PX, x); _load(PY, y); _load(P, p); _load(A, a)
        mpz_set(X, PX); mpz_set(Y, PY); mpz_set_ui(Z, 1)
        for i in range(<long>k.bit_length() - 2, -1, -1):
            _double(X, Y, Z, P, A)
            if mpz_tstbit(K, i):
                _add_mixed(X, Y, Z, PX, PY, P, A)
        if mpz_sgn(Z) == 0:
            return None
        mpz_invert(Z, Z, P)
        mpz_mul(T1, Z, Z); mpz_mod(T1, T1, P)
        mpz_mul(X, X, T1); mpz_mod(X, X, P)
        mpz_mul(T1, T1, Z); mpz_mul(Y, Y, T1); mpz_mod(Y, Y, P)
        return _store(X), _store(Y)
    finally:
        mpz_clear(K); mpz_clear(PX); mpz_clear(PY); mpz_clear(P); mpz_clear(A)
        mpz_clear(X); mpz_clear(Y); mpz_clear(Z)
