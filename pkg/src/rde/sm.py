"""ICAO-style secure messaging.

Session keys are derived from a shared secret with a counter-based hash
KDF.  Commands and responses are padded (ISO/IEC 9797-1 method 2),
encrypted under KS_Enc and authenticated under KS_MAC together with the
send sequence counter (SSC).  Given the keys and the SSC, the protected
bytes are a pure function of the plain message.
"""

from __future__ import annotations

import enum
import hashlib
import hmac
from dataclasses import dataclass

from . import primitives
from .apdu import CommandApdu, ResponseApdu, decode_tlv_sequence, encode_tlv
from .errors import (
    MacMismatch,
    MalformedSmObjects,
    NoPaddingMarker,
    SscExhausted,
    StatusMismatch,
    TlvError,
)

MAC_LENGTH = 8
MAX_RESPONSE_DATA = 255

KDF_ENC = 1
KDF_MAC = 2


class CipherSuite(enum.Enum):
    TDES_CBC_CBC = (1, "CA-3DES-CBC-CBC", 8, 16)
    AES_CBC_CMAC_128 = (2, "CA-AES-CBC-CMAC-128", 16, 16)
    AES_CBC_CMAC_192 = (3, "CA-AES-CBC-CMAC-192", 16, 24)
    AES_CBC_CMAC_256 = (4, "CA-AES-CBC-CMAC-256", 16, 32)

    def __init__(self, code, label, block_size, key_length):
        self.code = code
        self.label = label
        self.block_size = block_size
        self.key_length = key_length

    @property
    def is_aes(self):
        return self.block_size == 16

    @property
    def kdf_hash(self):
        return hashlib.sha1 if self.key_length == 16 else hashlib.sha256

    @property
    def short_name(self):
        return {1: "3des", 2: "aes128", 3: "aes192", 4: "aes256"}[self.code]

    @classmethod
    def from_code(cls, code):
        for suite in cls:
            if suite.code == code:
                return suite
        raise ValueError(f"unknown cipher suite code {code}")

    @classmethod
    def from_name(cls, name):
        key = name.lower().replace("_", "-")
        for suite in cls:
            if key in (suite.short_name, suite.label.lower(), "id-" + suite.label.lower()):
                return suite
        raise ValueError(f"unknown cipher suite {name!r}")


def kdf(secret, counter, suite):
    """Hash(secret || counter) truncated to the suite key length; DES keys get parity."""
    digest = suite.kdf_hash(bytes(secret) + counter.to_bytes(4, "big")).digest()
    key = digest[: suite.key_length]
    if not suite.is_aes:
        key = primitives.adjust_parity(key)
    return key


def pad2(data, block_size):
    data = bytes(data)
    pad = block_size - len(data) % block_size
    return data + b"\x80" + bytes(pad - 1)


def unpad2(data, block_size):
    data = bytes(data)
    if not data or len(data) % block_size:
        raise ValueError("padded data must be a positive multiple of the block size")
    stripped = data.rstrip(b"\x00")
    if not stripped or stripped[-1] != 0x80 or len(data) - len(stripped) >= block_size:
        raise NoPaddingMarker("padding method 2 marker not found")
    return stripped[:-1]


@dataclass
class SmSession:
    """Mutable secure-messaging state; confine each instance to one actor."""

    suite: CipherSuite
    ks_enc: bytes
    ks_mac: bytes
    ssc: int = 0

    @property
    def ssc_width(self):
        return self.suite.block_size

    def ssc_bytes(self):
        return self.ssc.to_bytes(self.ssc_width, "big")

    def increment(self):
        if self.ssc >= (1 << (8 * self.ssc_width)) - 1:
            raise SscExhausted("send sequence counter exhausted")
        self.ssc += 1
        return self.ssc_bytes()

    def copy(self):
        return SmSession(self.suite, self.ks_enc, self.ks_mac, self.ssc)

    def _iv(self):
        if self.suite.is_aes:
            return primitives.aes_ecb_encrypt(self.ks_enc, self.ssc_bytes())
        return bytes(8)

    def encrypt(self, padded):
        if self.suite.is_aes:
            return primitives.aes_cbc_encrypt(self.ks_enc, self._iv(), padded)
        return primitives.tdes_cbc_encrypt(self.ks_enc, self._iv(), padded)

    def decrypt(self, ciphertext):
        if self.suite.is_aes:
            return primitives.aes_cbc_decrypt(self.ks_enc, self._iv(), ciphertext)
        return primitives.tdes_cbc_decrypt(self.ks_enc, self._iv(), ciphertext)

    def mac(self, padded):
        if self.suite.is_aes:
            return primitives.aes_cmac(self.ks_mac, padded)[:MAC_LENGTH]
        return primitives.retail_mac(self.ks_mac, padded)


def derive_session_keys(shared_secret, suite, ssc=0):
    return SmSession(
        suite,
        kdf(shared_secret, KDF_ENC, suite),
        kdf(shared_secret, KDF_MAC, suite),
        ssc,
    )


def max_plain_response(suite):
    """Largest plaintext that fits a protected response of at most 255 data bytes."""
    bs = suite.block_size
    best = 0
    for n in range(1, MAX_RESPONSE_DATA + 1):
        padded = (n // bs + 1) * bs
        size = len(encode_tlv(0x87, bytes(1 + padded))) + 4 + 2 + MAC_LENGTH
        if size <= MAX_RESPONSE_DATA:
            best = n
    return best


def _do87(session, data):
    return encode_tlv(0x87, b"\x01" + session.encrypt(pad2(data, session.suite.block_size)))


def _split_checksum(data):
    # DO'8E' must close the protected body; anything else fails authentication
    if len(data) < 2 + MAC_LENGTH or data[-(2 + MAC_LENGTH):-MAC_LENGTH] != b"\x8e\x08":
        raise MacMismatch("cryptographic checksum missing or malformed")
    return data[: -(2 + MAC_LENGTH)], data[-MAC_LENGTH:]


def _verify(session, mac_input, checksum):
    expected = session.mac(pad2(mac_input, session.suite.block_size))
    if not hmac.compare_digest(expected, checksum):
        raise MacMismatch("cryptographic checksum does not verify")


def _decrypt87(session, value):
    bs = session.suite.block_size
    if len(value) < 1 + bs or value[0] != 0x01 or (len(value) - 1) % bs:
        raise MalformedSmObjects("malformed DO'87'")
    try:
        return unpad2(session.decrypt(value[1:]), bs)
    except NoPaddingMarker as e:
        raise MalformedSmObjects("bad padding inside DO'87'") from e


def _parse_body(body, allowed):
    try:
        objects = decode_tlv_sequence(body)
    except TlvError as e:
        raise MalformedSmObjects(str(e)) from e
    found = {}
    order = [o.tag for o in objects]
    if len(set(order)) != len(order) or any(t not in allowed for t in order):
        raise MalformedSmObjects(f"unexpected data objects {[hex(t) for t in order]}")
    if order != sorted(order, key=allowed.index):
        raise MalformedSmObjects("data objects out of order")
    for o in objects:
        found[o.tag] = o.value
    return found


def protect_command(session, c):
    ssc = session.increment()
    bs = session.suite.block_size
    cla = c.cla | 0x0C
    header = bytes((cla, c.ins, c.p1, c.p2))
    body = b""
    if c.data:
        body += _do87(session, c.data)
    if c.le is not None:
        body += encode_tlv(0x97, bytes((c.le & 0xFF,)))
    checksum = session.mac(pad2(ssc + pad2(header, bs) + body, bs))
    body += encode_tlv(0x8E, checksum)
    return CommandApdu(cla, c.ins, c.p1, c.p2, body, le=256)


def unprotect_command(session, pc):
    """Chip side: verify DO'8E' first, then decrypt. Always consumes an SSC value."""
    ssc = session.increment()
    bs = session.suite.block_size
    if pc.cla & 0x0C != 0x0C:
        raise MalformedSmObjects("command is not secure-messaging protected")
    if pc.le != 256:
        raise MalformedSmObjects("protected command must carry Le='00'")
    body, checksum = _split_checksum(pc.data)
    _verify(session, ssc + pad2(pc.header, bs) + body, checksum)
    found = _parse_body(body, [0x87, 0x97])
    data = _decrypt87(session, found[0x87]) if 0x87 in found else b""
    le = None
    if 0x97 in found:
        if len(found[0x97]) != 1:
            raise MalformedSmObjects("DO'97' must hold one byte")
        le = found[0x97][0] or 256
    return CommandApdu(pc.cla & ~0x0C & 0xFF, pc.ins, pc.p1, pc.p2, data, le)


def protect_response(session, r):
    ssc = session.increment()
    bs = session.suite.block_size
    body = b""
    if r.data:
        body += _do87(session, r.data)
    body += encode_tlv(0x99, r.sw.to_bytes(2, "big"))
    checksum = session.mac(pad2(ssc + body, bs))
    return ResponseApdu(body + encode_tlv(0x8E, checksum), r.sw)


def unprotect_response(session, r):
    ssc = session.increment()
    if not r.data:
        raise MalformedSmObjects(f"unprotected response with status {r.sw:04X}")
    body, checksum = _split_checksum(r.data)
    _verify(session, ssc + body, checksum)
    found = _parse_body(body, [0x87, 0x99])
    if 0x99 not in found or len(found[0x99]) != 2:
        raise MalformedSmObjects("DO'99' missing")
    status = int.from_bytes(found[0x99], "big")
    if status != r.sw:
        raise StatusMismatch(f"DO'99' {status:04X} disagrees with status word {r.sw:04X}")
    data = _decrypt87(session, found[0x87]) if 0x87 in found else b""
    return ResponseApdu(data, status)
