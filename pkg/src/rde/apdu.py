"""ISO 7816-4 short APDUs and BER-TLV data objects."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CodecError,
    IndefiniteLength,
    LengthMismatch,
    TlvError,
    TrailingGarbage,
    TruncatedApdu,
    TruncatedTlv,
)

INS_SELECT = 0xA4
INS_READ_BINARY = 0xB0
INS_GET_CHALLENGE = 0x84
INS_EXTERNAL_AUTHENTICATE = 0x82
INS_MSE = 0x22

SW_OK = 0x9000
SW_BAC_FAILED = 0x6300
SW_WRONG_LENGTH = 0x6700
SW_SECURITY_STATUS = 0x6982
SW_CONDITIONS = 0x6985
SW_SM_INCORRECT = 0x6988
SW_WRONG_DATA = 0x6A80
SW_FILE_NOT_FOUND = 0x6A82
SW_WRONG_P1P2 = 0x6B00
SW_INS_UNSUPPORTED = 0x6D00
SW_CLA_UNSUPPORTED = 0x6E00


def hexdump(data):
    """Uppercase, space separated hex used in transcripts."""
    return " ".join(f"{b:02X}" for b in data)


@dataclass(frozen=True)
class CommandApdu:
    cla: int
    ins: int
    p1: int
    p2: int
    data: bytes = b""
    le: int | None = None

    def __post_init__(self):
        for name in ("cla", "ins", "p1", "p2"):
            if not 0 <= getattr(self, name) <= 0xFF:
                raise ValueError(f"{name} out of byte range")
        if len(self.data) > 255:
            raise ValueError("short APDU data is limited to 255 bytes")
        if self.le is not None and not 0 < self.le <= 256:
            raise ValueError("le must be in 1..256")
        object.__setattr__(self, "data", bytes(self.data))

    @property
    def header(self):
        return bytes((self.cla, self.ins, self.p1, self.p2))

    def __bytes__(self):
        return encode_command(self)


@dataclass(frozen=True)
class ResponseApdu:
    data: bytes
    sw: int

    def __post_init__(self):
        if not 0 <= self.sw <= 0xFFFF:
            raise ValueError("status word must fit two bytes")
        object.__setattr__(self, "data", bytes(self.data))

    @property
    def ok(self):
        return self.sw == SW_OK

    def __bytes__(self):
        return encode_response(self)


def encode_command(c):
    out = bytearray(c.header)
    if c.data:
        out.append(len(c.data))
        out += c.data
    if c.le is not None:
        out.append(c.le & 0xFF)
    return bytes(out)


def decode_command(raw):
    raw = bytes(raw)
    if len(raw) < 4:
        raise TruncatedApdu(f"{len(raw)} bytes is shorter than a command header")
    cla, ins, p1, p2 = raw[:4]
    body = raw[4:]
    if not body:
        return CommandApdu(cla, ins, p1, p2)
    if len(body) == 1:
        return CommandApdu(cla, ins, p1, p2, le=body[0] or 256)
    lc = body[0]
    if lc == 0:
        # extended length is not supported
        raise LengthMismatch("Lc of zero in a short APDU")
    if len(body) == 1 + lc:
        return CommandApdu(cla, ins, p1, p2, body[1:])
    if len(body) == 2 + lc:
        return CommandApdu(cla, ins, p1, p2, body[1:-1], le=body[-1] or 256)
    raise LengthMismatch(f"Lc={lc} does not match {len(body) - 1} trailing bytes")


def encode_response(r):
    return r.data + r.sw.to_bytes(2, "big")


def decode_response(raw):
    raw = bytes(raw)
    if len(raw) < 2:
        raise TruncatedApdu("response shorter than a status word")
    return ResponseApdu(raw[:-2], int.from_bytes(raw[-2:], "big"))


def encode_read_binary_sfi(sfi, offset=0, n=256):
    """READ BINARY addressing the file by short file identifier."""
    if not 1 <= sfi <= 30:
        raise ValueError("SFI must be in 1..30")
    if not 0 <= offset <= 255:
        raise ValueError("offset must fit P2")
    if not 1 <= n <= 256:
        raise ValueError("n must be in 1..256")
    return CommandApdu(0x00, INS_READ_BINARY, 0x80 | sfi, offset, le=n)


def encode_read_binary(offset, n=256):
    """READ BINARY on the currently selected file, 15-bit offset."""
    if not 0 <= offset <= 0x7FFF:
        raise ValueError("offset must fit 15 bits")
    return CommandApdu(0x00, INS_READ_BINARY, offset >> 8, offset & 0xFF, le=n)


# ---------------------------------------------------------------------------
# TLV

@dataclass(frozen=True)
class TlvObject:
    tag: int
    value: bytes

    def __post_init__(self):
        _tag_bytes(self.tag)
        object.__setattr__(self, "value", bytes(self.value))

    @property
    def constructed(self):
        return bool(_tag_bytes(self.tag)[0] & 0x20)

    def children(self):
        return decode_tlv_sequence(self.value)

    def __bytes__(self):
        return encode_tlv(self)


def _tag_bytes(tag):
    if 0 <= tag <= 0xFF:
        if tag & 0x1F == 0x1F:
            raise TlvError(f"tag {tag:02X} announces a second byte")
        return bytes((tag,))
    if 0x100 <= tag <= 0xFFFF:
        hi, lo = tag >> 8, tag & 0xFF
        if hi & 0x1F != 0x1F or lo & 0x80:
            raise TlvError(f"tag {tag:04X} is not a valid two-byte tag")
        return bytes((hi, lo))
    raise TlvError("tags are limited to two bytes")


def _length_bytes(n):
    if n < 0x80:
        return bytes((n,))
    body = n.to_bytes((n.bit_length() + 7) // 8, "big")
    if len(body) > 4:
        raise TlvError("length too large")
    return bytes((0x80 | len(body),)) + body


def encode_tlv(obj_or_tag, value=None):
    """Encode a TlvObject, or a ``(tag, value)`` pair given positionally."""
    if value is None:
        tag, value = obj_or_tag.tag, obj_or_tag.value
    else:
        tag = obj_or_tag
    return _tag_bytes(tag) + _length_bytes(len(value)) + bytes(value)


def _read_one(data, pos):
    end = len(data)
    if pos >= end:
        raise TruncatedTlv("missing tag")
    first = data[pos]
    pos += 1
    tag = first
    if first & 0x1F == 0x1F:
        if pos >= end:
            raise TruncatedTlv("missing second tag byte")
        second = data[pos]
        pos += 1
        if second & 0x80:
            raise TlvError("tags longer than two bytes are not supported")
        tag = (first << 8) | second
    if pos >= end:
        raise TruncatedTlv("missing length")
    lb = data[pos]
    pos += 1
    if lb == 0x80:
        raise IndefiniteLength("indefinite length is not allowed")
    if lb & 0x80:
        count = lb & 0x7F
        if count > 4:
            raise TlvError("length field too long")
        if pos + count > end:
            raise TruncatedTlv("truncated length field")
        length = int.from_bytes(data[pos : pos + count], "big")
        pos += count
        if length < 0x80 or length.bit_length() <= 8 * (count - 1):
            raise TlvError("non-minimal length encoding")
    else:
        length = lb
    if pos + length > end:
        raise TruncatedTlv(f"value needs {length} bytes, {end - pos} left")
    return TlvObject(tag, data[pos : pos + length]), pos + length


def decode_tlv_sequence(data):
    data = bytes(data)
    out = []
    pos = 0
    while pos < len(data):
        obj, pos = _read_one(data, pos)
        out.append(obj)
    return out


def decode_tlv(data):
    """Decode exactly one TLV object."""
    data = bytes(data)
    obj, pos = _read_one(data, 0)
    if pos != len(data):
        raise TrailingGarbage(f"{len(data) - pos} bytes after the object")
    return obj


def find_tlv(objects, tag):
    for obj in objects:
        if obj.tag == tag:
            return obj
    return None

