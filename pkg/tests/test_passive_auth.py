import random

import pytest
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import ec
from cryptography.hazmat.primitives.asymmetric.utils import decode_dss_signature, encode_dss_signature

from rde import group, passive_auth as pa
from rde.errors import DuplicateDgNumber, MalformedSod
from rde.passive_auth import DataGroup, IssuerKeypair

D = int("1234567890abcdef" * 4, 16)
# RFC 6979 deterministic signature, cross-checked with cryptography's deterministic_signing
SAMPLE_SIG = bytes.fromhex(
    "511cda34dbc1ac2ed6b138e1337bc4ff17afc75f9a90905acc24f3444bff537e"
    "65579237a71a5b1f088798bfc3930a6b238585655ab6673a61be78f6a4abf3f4"
)
CURVE = pa.SOD_CURVE


def _crypto_key(d):
    return ec.derive_private_key(d, ec.BrainpoolP256R1())


def test_rfc6979_frozen_signature():
    assert pa.ecdsa_sign(D, b"sample") == SAMPLE_SIG


def test_deterministic_signature_matches_cryptography():
    key = _crypto_key(D)
    try:
        sig = key.sign(b"sample", ec.ECDSA(hashes.SHA256(), deterministic_signing=True))
    except TypeError:
        pytest.skip("cryptography without deterministic ECDSA")
    r, s = decode_dss_signature(sig)
    assert SAMPLE_SIG == r.to_bytes(32, "big") + s.to_bytes(32, "big")


def test_signatures_verify_in_cryptography():
    rng = random.Random(8)
    for _ in range(5):
        d, Q = group.generate_keypair(CURVE, rng)
        msg = rng.randbytes(50)
        sig = pa.ecdsa_sign(d, msg, rng=rng)
        der = encode_dss_signature(int.from_bytes(sig[:32], "big"), int.from_bytes(sig[32:], "big"))
        _crypto_key(d).public_key().verify(der, msg, ec.ECDSA(hashes.SHA256()))
        assert pa.ecdsa_verify(Q, msg, sig)


def test_verify_accepts_cryptography_signatures():
    key = _crypto_key(D)
    Q = group.scalar_mult(D, CURVE.G, CURVE)
    r, s = decode_dss_signature(key.sign(b"hello", ec.ECDSA(hashes.SHA256())))
    sig = r.to_bytes(32, "big") + s.to_bytes(32, "big")
    assert pa.ecdsa_verify(Q, b"hello", sig)
    assert not pa.ecdsa_verify(Q, b"hellp", sig)
    assert not pa.ecdsa_verify(Q, b"hello", sig[:-1])
    assert not pa.ecdsa_verify(Q, b"hello", bytes(64))


@pytest.fixture(scope="module")
def signed():
    rng = random.Random(12)
    issuer = IssuerKeypair.generate(rng)
    dgs = [DataGroup(14, rng.randbytes(300)), DataGroup(1, rng.randbytes(93))]
    return issuer, dgs, pa.create_sod(issuer, dgs, rng=None)


def test_sod_round_trip(signed):
    issuer, dgs, sod = signed
    raw = bytes(sod)
    assert raw[0] == 0x77
    assert pa.parse_sod(raw) == sod
    assert [n for n, _ in sod.entries] == [1, 14]
    assert pa.verify_sod(sod, issuer.public)
    for dg in dgs:
        assert pa.verify_dg(raw, dg, issuer.public)
        assert pa.verify_dg(sod, dg)


def test_sod_is_deterministic_without_rng(signed):
    issuer, dgs, sod = signed
    assert pa.create_sod(issuer, list(reversed(dgs))) == sod


def test_unknown_dg_and_wrong_issuer(signed):
    issuer, dgs, sod = signed
    assert not pa.verify_dg(sod, DataGroup(2, b"x"))
    other = IssuerKeypair.generate(random.Random(1))
    assert not pa.verify_dg(sod, dgs[0], other.public)


def test_single_bit_flips_are_rejected(signed):
    issuer, dgs, sod = signed
    raw = bytes(sod)
    rng = random.Random(30)
    dg = dgs[0]
    for _ in range(200):
        bit = rng.randrange(len(dg.content) * 8)
        content = bytearray(dg.content)
        content[bit // 8] ^= 1 << (bit % 8)
        assert not pa.verify_dg(raw, DataGroup(dg.number, bytes(content)), issuer.public)
    for bit in range(len(raw) * 8):
        bad = bytearray(raw)
        bad[bit // 8] ^= 1 << (bit % 8)
        assert not pa.verify_dg(bytes(bad), dg, issuer.public)


def test_sod_parse_errors(signed):
    _, _, sod = signed
    raw = bytes(sod)
    with pytest.raises(MalformedSod):
        pa.parse_sod(raw[:-1])
    with pytest.raises(MalformedSod):
        pa.parse_sod(b"\x78" + raw[1:])
    with pytest.raises(MalformedSod):
        pa.parse_sod(raw + b"\x00")


def test_create_sod_rejects_duplicates():
    issuer = IssuerKeypair.generate(random.Random(2))
    with pytest.raises(DuplicateDgNumber):
        pa.create_sod(issuer, [DataGroup(1, b"a"), DataGroup(1, b"b")])
    with pytest.raises(ValueError):
        pa.create_sod(issuer, [])
    with pytest.raises(ValueError):
        DataGroup(17, b"")
