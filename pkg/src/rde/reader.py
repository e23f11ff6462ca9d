"""Terminal side of the chip conversation: BAC, secure messaging, file reads and CA.

Every exchanged APDU can be logged as ``[round][ssc] label: HEX`` lines.
"""

from __future__ import annotations

import hmac
import secrets

from . import apdu, primitives, sm
from .apdu import CommandApdu, decode_response, hexdump
from .chip_auth import mse_set_kat, terminal_chip_auth
from .errors import BacFailure, CardError, FormatError
from .mrz import MrzKey, parse_mrz
from .passport import LDS_AID
from .sm import CipherSuite


class Reader:
    def __init__(self, card, rng=None, log=None, round_no=1):
        self.card = card
        self.rng = rng if rng is not None else secrets.SystemRandom()
        self.log = log
        self.round_no = round_no
        self.session = None
        self.last_command = None
        self.last_response = None

    def _emit(self, label, data):
        if self.log is None:
            return
        ssc = "-" if self.session is None else f"{self.session.ssc:X}"
        self.log(f"[{self.round_no}][{ssc}] {label}: {hexdump(data)}")

    def note(self, label, data):
        """Log a derived value (keys, points) in transcript format."""
        self._emit(label, data)

    def transmit_raw(self, command, label="C"):
        command = bytes(command)
        self._emit(label, command)
        response = bytes(self.card(command))
        self._emit("R", response)
        self.last_command, self.last_response = command, response
        return response

    def transmit(self, command, label="C"):
        return decode_response(self.transmit_raw(bytes(command), label))

    # -- plain phase ------------------------------------------------------

    def select_lds(self):
        r = self.transmit(CommandApdu(0x00, apdu.INS_SELECT, 0x04, 0x0C, LDS_AID), "SELECT")
        if not r.ok:
            raise CardError(r.sw, "LDS application not selectable")

    def bac(self, mrz):
        """Run BAC with keys from ``mrz`` (MRZ text or MrzKey); installs the BAC session."""
        key = mrz if isinstance(mrz, MrzKey) else parse_mrz(mrz)
        seed = key.key_seed()
        k_enc = sm.kdf(seed, sm.KDF_ENC, CipherSuite.TDES_CBC_CBC)
        k_mac = sm.kdf(seed, sm.KDF_MAC, CipherSuite.TDES_CBC_CBC)
        r = self.transmit(CommandApdu(0x00, apdu.INS_GET_CHALLENGE, 0, 0, le=8), "GET CHALLENGE")
        if not r.ok or len(r.data) != 8:
            raise BacFailure(f"GET CHALLENGE failed with {r.sw:04X}")
        rnd_ic = r.data
        rnd_ifd = self.rng.randbytes(8)
        k_ifd = self.rng.randbytes(16)
        e_ifd = primitives.tdes_cbc_encrypt(k_enc, bytes(8), rnd_ifd + rnd_ic + k_ifd)
        m_ifd = primitives.retail_mac(k_mac, sm.pad2(e_ifd, 8))
        r = self.transmit(
            CommandApdu(0x00, apdu.INS_EXTERNAL_AUTHENTICATE, 0, 0, e_ifd + m_ifd, le=40),
            "EXTERNAL AUTHENTICATE",
        )
        if not r.ok or len(r.data) != 40:
            raise BacFailure(f"EXTERNAL AUTHENTICATE failed with {r.sw:04X}")
        e_ic, m_ic = r.data[:32], r.data[32:]
        if not hmac.compare_digest(primitives.retail_mac(k_mac, sm.pad2(e_ic, 8)), m_ic):
            raise BacFailure("chip BAC cryptogram does not verify")
        plain = primitives.tdes_cbc_decrypt(k_enc, bytes(8), e_ic)
        if plain[:8] != rnd_ic or plain[8:16] != rnd_ifd:
            raise BacFailure("chip did not echo the nonces")
        k_seed = bytes(a ^ b for a, b in zip(k_ifd, plain[16:]))
        ssc = int.from_bytes(rnd_ic[4:] + rnd_ifd[4:], "big")
        self.session = sm.derive_session_keys(k_seed, CipherSuite.TDES_CBC_CBC, ssc)
        return self.session

    # -- protected phase --------------------------------------------------

    def secure(self, command, label="C"):
        """Send ``command`` under the current session and return the unwrapped response."""
        if self.session is None:
            raise RuntimeError("no secure messaging session")
        protected = sm.protect_command(self.session, command)
        r = self.transmit(protected, label)
        if not r.data:
            self.session = None
            raise CardError(r.sw, "chip rejected secure messaging")
        return sm.unprotect_response(self.session, r)

    def read_file(self, sfi):
        """Read a whole TLV-structured file: first chunk by SFI, the rest by offset."""
        limit = sm.max_plain_response(self.session.suite) if self.session else 256
        first = self._read(apdu.encode_read_binary_sfi(sfi, 0, min(limit, 256)), f"READ SFI {sfi:02X}")
        total = _tlv_total_length(first)
        data = first
        while len(data) < total:
            n = min(limit, total - len(data))
            data += self._read(apdu.encode_read_binary(len(data), n), "READ")
        return data[:total]

    def _read(self, command, label):
        r = self.secure(command, label) if self.session else self.transmit(command, label)
        if not r.ok:
            raise CardError(r.sw, "READ BINARY failed")
        return r.data

    def chip_authenticate(self, dg14, k):
        """MSE:SET KAT with Z = kG under BAC, then switch to the CA session."""
        transcript = terminal_chip_auth(dg14, k)
        r = self.secure(mse_set_kat(transcript.ephemeral_bytes(dg14.params)), "MSE:SET KAT")
        if not r.ok:
            raise CardError(r.sw, "chip authentication refused")
        self.session = transcript.session
        return transcript


def _tlv_total_length(head):
    """Size of the TLV object that starts ``head``, from its tag and length bytes."""
    pos = 1
    if head and head[0] & 0x1F == 0x1F:
        pos = 2
    if len(head) <= pos:
        raise FormatError("file too short to hold a TLV header")
    first = head[pos]
    if first < 0x80:
        return pos + 1 + first
    count = first & 0x7F
    if not 1 <= count <= 4 or len(head) < pos + 1 + count:
        raise FormatError("unsupported TLV length in file header")
    return pos + 1 + count + int.from_bytes(head[pos + 1 : pos + 1 + count], "big")
