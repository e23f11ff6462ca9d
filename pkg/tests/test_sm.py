import hashlib
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from rde import apdu, sm
from rde.apdu import CommandApdu, ResponseApdu
from rde.errors import MacMismatch, MalformedSmObjects, NoPaddingMarker, SmError, SscExhausted, StatusMismatch
from rde.primitives import adjust_parity
from rde.sm import CipherSuite, SmSession

# ICAO Doc 9303 worked example, secure messaging after BAC
KS_ENC = bytes.fromhex("979EC13B1CBFE9DCD01AB0FED307EAE5")
KS_MAC = bytes.fromhex("F1CB1F1FB5ADF208806B89DC579DC1F8")
SSC0 = 0x887022120C06C226
SELECT = CommandApdu(0x00, 0xA4, 0x02, 0x0C, bytes.fromhex("011E"))
SELECT_PROTECTED = "0CA4020C158709016375432908C044F68E08BF8B92D635FF24F800"
SELECT_RESPONSE = "990290008E08FA855A5D4C50A8ED9000"
READ4 = CommandApdu(0x00, 0xB0, 0x00, 0x00, le=4)
READ4_PROTECTED = "0CB000000D9701048E08ED6705417E96BA5500"
READ4_RESPONSE = "8709019FF0EC34F9922651990290008E08AD55CC17140B2DED9000"


def icao_session():
    return SmSession(CipherSuite.TDES_CBC_CBC, KS_ENC, KS_MAC, SSC0)


def random_session(suite, rng):
    return sm.derive_session_keys(rng.randbytes(32), suite)


def test_kdf_bac_vectors():
    seed = bytes.fromhex("239AB9CB282DAF66231DC5A4DF6BFBAE")
    assert sm.kdf(seed, 1, CipherSuite.TDES_CBC_CBC).hex() == "ab94fdecf2674fdfb9b391f85d7f76f2"
    assert sm.kdf(seed, 2, CipherSuite.TDES_CBC_CBC).hex() == "7962d9ece03d1acd4c76089dce131543"
    s = sm.derive_session_keys(bytes.fromhex("0036D272F5C350ACAC50C3F572D23600"), CipherSuite.TDES_CBC_CBC)
    assert (s.ks_enc, s.ks_mac, s.ssc) == (KS_ENC, KS_MAC, 0)


@pytest.mark.parametrize("suite", list(CipherSuite), ids=lambda s: s.short_name)
def test_kdf_matches_hash_oracle(suite):
    secret = bytes(range(40))
    for counter in (1, 2, 3):
        h = hashlib.sha256 if suite.key_length > 16 else hashlib.sha1
        expected = h(secret + counter.to_bytes(4, "big")).digest()[: suite.key_length]
        if suite is CipherSuite.TDES_CBC_CBC:
            expected = adjust_parity(expected)
        assert sm.kdf(secret, counter, suite) == expected


def test_suite_lookup():
    assert CipherSuite.from_code(4) is CipherSuite.AES_CBC_CMAC_256
    assert CipherSuite.from_name("aes192") is CipherSuite.AES_CBC_CMAC_192
    assert CipherSuite.from_name("3des").block_size == 8
    with pytest.raises(ValueError):
        CipherSuite.from_code(9)
    with pytest.raises(ValueError):
        CipherSuite.from_name("des")


def test_protect_select_icao():
    s = icao_session()
    assert bytes(sm.protect_command(s, SELECT)).hex().upper() == SELECT_PROTECTED
    assert s.ssc == SSC0 + 1
    r = sm.unprotect_response(s, apdu.decode_response(bytes.fromhex(SELECT_RESPONSE)))
    assert r == ResponseApdu(b"", 0x9000)


def test_protect_read_binary_icao():
    s = icao_session()
    s.ssc = SSC0 + 2
    assert bytes(sm.protect_command(s, READ4)).hex().upper() == READ4_PROTECTED
    r = sm.unprotect_response(s, apdu.decode_response(bytes.fromhex(READ4_RESPONSE)))
    assert r == ResponseApdu(bytes.fromhex("60145F01"), 0x9000)


def test_chip_side_icao():
    chip = icao_session()
    plain = sm.unprotect_command(chip, apdu.decode_command(bytes.fromhex(SELECT_PROTECTED)))
    assert plain == SELECT
    assert bytes(sm.protect_response(chip, ResponseApdu(b"", 0x9000))).hex().upper() == SELECT_RESPONSE
    plain = sm.unprotect_command(chip, apdu.decode_command(bytes.fromhex(READ4_PROTECTED)))
    assert plain == READ4
    out = sm.protect_response(chip, ResponseApdu(bytes.fromhex("60145F01"), 0x9000))
    assert bytes(out).hex().upper() == READ4_RESPONSE


@pytest.mark.parametrize("suite", list(CipherSuite), ids=lambda s: s.short_name)
def test_round_trip_all_suites(suite):
    rng = random.Random(suite.code)
    term = random_session(suite, rng)
    chip = term.copy()
    for _ in range(20):
        data = rng.randbytes(rng.randrange(0, 200))
        le = rng.choice([None, rng.randrange(1, 257)])
        c = CommandApdu(0x00, 0xB0, rng.randrange(256), rng.randrange(256), data, le)
        pc = sm.protect_command(term, c)
        assert pc.cla == 0x0C and pc.le == 256
        assert sm.unprotect_command(chip, apdu.decode_command(bytes(pc))) == c
        payload = rng.randbytes(rng.randrange(0, sm.max_plain_response(suite) + 1))
        pr = sm.protect_response(chip, ResponseApdu(payload, 0x9000))
        assert len(bytes(pr)) <= 257
        assert sm.unprotect_response(term, apdu.decode_response(bytes(pr))) == ResponseApdu(payload, 0x9000)
    assert term.ssc == chip.ssc == 40


@pytest.mark.parametrize("suite", list(CipherSuite), ids=lambda s: s.short_name)
def test_protection_is_deterministic(suite):
    rng = random.Random(7)
    a = random_session(suite, rng)
    b = a.copy()
    c = apdu.encode_read_binary_sfi(14, 0, 128)
    assert bytes(sm.protect_command(a, c)) == bytes(sm.protect_command(b, c))
    r = ResponseApdu(bytes(128), 0x9000)
    assert bytes(sm.protect_response(a, r)) == bytes(sm.protect_response(b, r))


@pytest.mark.parametrize("suite", list(CipherSuite), ids=lambda s: s.short_name)
def test_command_tamper_fails_mac(suite):
    rng = random.Random(3)
    term = random_session(suite, rng)
    raw = bytes(sm.protect_command(term.copy(), apdu.encode_read_binary_sfi(14, 0, 128)))
    for i in range(len(raw)):
        for flip in (0x01, 0x80):
            bad = bytearray(raw)
            bad[i] ^= flip
            try:
                c = apdu.decode_command(bytes(bad))
            except ValueError:
                continue
            with pytest.raises(SmError):
                sm.unprotect_command(term.copy(), c)


def test_wrong_ssc_fails_mac():
    s = icao_session()
    with pytest.raises(MacMismatch):
        sm.unprotect_command(s.copy(), apdu.decode_command(bytes.fromhex(READ4_PROTECTED)))


def test_unprotected_command_rejected():
    with pytest.raises(MalformedSmObjects):
        sm.unprotect_command(icao_session(), SELECT)


def test_status_word_mismatch():
    raw = bytearray(bytes.fromhex(SELECT_RESPONSE))
    raw[-2:] = b"\x6a\x82"
    s = icao_session()
    s.ssc += 1
    with pytest.raises(StatusMismatch):
        sm.unprotect_response(s, apdu.decode_response(bytes(raw)))


def test_plain_error_response_rejected():
    with pytest.raises(MalformedSmObjects):
        sm.unprotect_response(icao_session(), ResponseApdu(b"", 0x6988))


def test_ssc_exhaustion():
    s = SmSession(CipherSuite.TDES_CBC_CBC, KS_ENC, KS_MAC, (1 << 64) - 1)
    with pytest.raises(SscExhausted):
        s.increment()


@pytest.mark.parametrize("suite,limit", [(CipherSuite.TDES_CBC_CBC, 231), (CipherSuite.AES_CBC_CMAC_128, 223),
                                         (CipherSuite.AES_CBC_CMAC_256, 223)])
def test_max_plain_response(suite, limit):
    assert sm.max_plain_response(suite) == limit
    bs = suite.block_size
    size = lambda n: oracles.tlv_size(1 + (n // bs + 1) * bs) + 4 + 10
    assert size(limit) <= 255 < size(limit + 1)


@settings(max_examples=300)
@given(st.binary(max_size=300), st.sampled_from([8, 16]))
def test_pad2_round_trip(data, bs):
    padded = sm.pad2(data, bs)
    assert len(padded) % bs == 0 and len(padded) - len(data) in range(1, bs + 1)
    assert padded[len(data)] == 0x80
    assert sm.unpad2(padded, bs) == data


def test_unpad2_rejects():
    with pytest.raises(NoPaddingMarker):
        sm.unpad2(bytes(8), 8)
    with pytest.raises(NoPaddingMarker):
        sm.unpad2(b"\x80" + bytes(15), 8)
    with pytest.raises(ValueError):
        sm.unpad2(b"\x80", 8)
