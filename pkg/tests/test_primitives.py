"""Block-cipher layer against the published vectors in ``vectors``."""

import random

import pytest

import oracles
from rde import primitives as P
from vectors import (
    AES_KEYS,
    CBC_VECTORS,
    CMAC_VECTORS,
    E_IC,
    E_IFD,
    IV,
    K_ENC,
    K_MAC,
    M_IC,
    M_IFD,
    R_IC,
    S_IFD,
    SP800_38A_PLAIN,
    TDES_KEY,
    TDES_PLAIN,
    TDES_CIPHER,
)


@pytest.mark.parametrize("bits", [128, 192, 256])
def test_aes_cbc_sp800_38a(bits):
    ct = bytes.fromhex(CBC_VECTORS[bits])
    assert P.aes_cbc_encrypt(AES_KEYS[bits], IV, SP800_38A_PLAIN) == ct
    assert P.aes_cbc_decrypt(AES_KEYS[bits], IV, ct) == SP800_38A_PLAIN


def test_aes_ecb_first_block():
    # SP 800-38A F.1.1
    assert P.aes_ecb_encrypt(AES_KEYS[128], SP800_38A_PLAIN[:16]) == bytes.fromhex("3ad77bb40d7a3660a89ecaf32466ef97")


@pytest.mark.parametrize("bits,length", sorted(CMAC_VECTORS))
def test_aes_cmac(bits, length):
    assert P.aes_cmac(AES_KEYS[bits], SP800_38A_PLAIN[:length]) == bytes.fromhex(CMAC_VECTORS[(bits, length)])


def test_3des_ecb_sp800_67():
    assert P.des_ecb_encrypt(TDES_KEY, TDES_PLAIN) == TDES_CIPHER
    assert P.des_ecb_decrypt(TDES_KEY, TDES_CIPHER) == TDES_PLAIN


@pytest.mark.parametrize(
    "plain,cipher",
    [("8000000000000000", "95F8A5E5DD31D900"), ("4000000000000000", "DD7F121CA5015619"),
     ("2000000000000000", "2E8653104F3834EA")],
)
def test_3des_cbc_variable_plaintext(plain, cipher):
    key = bytes.fromhex("0101010101010101" * 3)
    assert P.tdes_cbc_encrypt(key, bytes(8), bytes.fromhex(plain)) == bytes.fromhex(cipher)


def test_3des_cbc_bac_cryptograms():
    assert P.tdes_cbc_encrypt(K_ENC, bytes(8), S_IFD) == E_IFD
    assert P.tdes_cbc_decrypt(K_ENC, bytes(8), E_IFD) == S_IFD
    assert P.tdes_cbc_decrypt(K_ENC, bytes(8), E_IC) == R_IC
    assert P.tdes_cbc_encrypt(K_ENC, bytes(8), R_IC) == E_IC


def test_retail_mac_bac_vectors():
    pad = b"\x80" + bytes(7)
    assert P.retail_mac(K_MAC, E_IFD + pad) == M_IFD
    assert P.retail_mac(K_MAC, E_IC + pad) == M_IC


def test_retail_mac_matches_blockwise_oracle():
    rng = random.Random(4)
    for _ in range(50):
        key = rng.randbytes(16)
        data = rng.randbytes(8 * rng.randrange(1, 10))
        assert P.retail_mac(key, data) == oracles.retail_mac_by_hand(key, data)


def test_block_length_checks():
    with pytest.raises(ValueError):
        P.aes_cbc_encrypt(AES_KEYS[128], IV, b"short")
    with pytest.raises(ValueError):
        P.retail_mac(K_MAC, b"1234567")
    with pytest.raises(ValueError):
        P.retail_mac(K_MAC[:8], bytes(8))


def test_adjust_parity():
    out = P.adjust_parity(bytes(range(32)))
    assert all(bin(b).count("1") % 2 == 1 for b in out)
    assert P.adjust_parity(bytes.fromhex("ab94fdecf2674fdf")) == bytes.fromhex("ab94fdecf2674fdf")
