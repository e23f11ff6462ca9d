"""Block-cipher primitives used by secure messaging.

AES, DES/3DES and CMAC come from ``cryptography``; the ISO/IEC 9797-1 MAC
algorithm 3 ("retail MAC") is composed here from single DES.
"""

from cryptography.hazmat.decrepit.ciphers.algorithms import TripleDES
from cryptography.hazmat.primitives import cmac
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes


def _run(cipher, data, encrypt):
    ctx = cipher.encryptor() if encrypt else cipher.decryptor()
    return ctx.update(data) + ctx.finalize()


def _tdes_key(key):
    if len(key) == 8:
        return key * 3
    if len(key) == 16:
        return key + key[:8]
    if len(key) == 24:
        return key
    raise ValueError("DES keys are 8, 16 or 24 bytes")


def _check_blocks(data, size):
    if len(data) % size:
        raise ValueError(f"data length {len(data)} is not a multiple of {size}")


def aes_ecb_encrypt(key, block):
    _check_blocks(block, 16)
    return _run(Cipher(algorithms.AES(key), modes.ECB()), block, True)


def aes_cbc_encrypt(key, iv, data):
    _check_blocks(data, 16)
    return _run(Cipher(algorithms.AES(key), modes.CBC(iv)), data, True)


def aes_cbc_decrypt(key, iv, data):
    _check_blocks(data, 16)
    return _run(Cipher(algorithms.AES(key), modes.CBC(iv)), data, False)


def des_ecb_encrypt(key, data):
    _check_blocks(data, 8)
    return _run(Cipher(TripleDES(_tdes_key(key)), modes.ECB()), data, True)


def des_ecb_decrypt(key, data):
    _check_blocks(data, 8)
    return _run(Cipher(TripleDES(_tdes_key(key)), modes.ECB()), data, False)


def tdes_cbc_encrypt(key, iv, data):
    _check_blocks(data, 8)
    return _run(Cipher(TripleDES(_tdes_key(key)), modes.CBC(iv)), data, True)


def tdes_cbc_decrypt(key, iv, data):
    _check_blocks(data, 8)
    return _run(Cipher(TripleDES(_tdes_key(key)), modes.CBC(iv)), data, False)


def aes_cmac(key, data):
    c = cmac.CMAC(algorithms.AES(key))
    c.update(data)
    return c.finalize()


def retail_mac(key, data):
    """ISO/IEC 9797-1 MAC algorithm 3 with a two-key 3DES key.

    ``data`` must already be padded to a multiple of 8 bytes.
    """
    if len(key) != 16:
        raise ValueError("retail MAC needs a 16 byte key")
    _check_blocks(data, 8)
    ka, kb = key[:8], key[8:]
    h = _run(Cipher(TripleDES(ka * 3), modes.CBC(bytes(8))), data, True)[-8:]
    return des_ecb_encrypt(ka, des_ecb_decrypt(kb, h))


def adjust_parity(key):
    """Set the low bit of every byte so it has odd parity."""
    out = bytearray()
    for b in key:
        b &= 0xFE
        out.append(b | (bin(b).count("1") + 1) % 2)
    return bytes(out)
