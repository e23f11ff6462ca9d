"""Exception hierarchy shared by all rde modules."""


class RdeError(Exception):
    """Base class for every error raised by this package."""


# group

class PointError(RdeError, ValueError):
    pass


class MalformedPoint(PointError):
    pass


class OffCurvePoint(PointError):
    pass


class EmbeddingFailure(RdeError):
    pass


# apdu / tlv codecs

class CodecError(RdeError, ValueError):
    pass


class TruncatedApdu(CodecError):
    pass


class LengthMismatch(CodecError):
    pass


class TlvError(CodecError):
    pass


class IndefiniteLength(TlvError):
    pass


class TruncatedTlv(TlvError):
    pass


class TrailingGarbage(TlvError):
    pass


# secure messaging

class SmError(RdeError):
    pass


class MacMismatch(SmError):
    pass


class MalformedSmObjects(SmError):
    pass


class StatusMismatch(SmError):
    pass


class NoPaddingMarker(SmError, ValueError):
    pass


class SscExhausted(SmError):
    pass


# chip authentication / DG14

class Dg14Error(RdeError, ValueError):
    pass


class UnknownSuite(Dg14Error):
    pass


class UnknownCurve(Dg14Error):
    pass


class MalformedDg14(Dg14Error):
    pass


# passive authentication

class PaError(RdeError):
    pass


class DuplicateDgNumber(PaError, ValueError):
    pass


class MalformedSod(PaError, ValueError):
    pass


# MRZ

class MrzError(RdeError, ValueError):
    pass


# registration

class RegistrationError(RdeError):
    pass


class PaFailure(RegistrationError):
    def __init__(self, dg_number, reason="passive authentication failed"):
        super().__init__(f"DG{dg_number}: {reason}")
        self.dg_number = dg_number


class ConsentMissing(RegistrationError):
    pass


class ParamsInconsistent(RegistrationError, ValueError):
    pass


# card interaction / decryption

class BacFailure(RdeError):
    pass


class CardError(RdeError):
    """The card answered with an unexpected status word."""

    def __init__(self, sw, message=""):
        super().__init__(message or f"card returned {sw:04X}")
        self.sw = sw


class DecryptionFailed(RdeError):
    """Common family for every way RDE decryption can fail after BAC."""


class CardRejectedSm(DecryptionFailed):
    pass


class AuthDecryptFailure(DecryptionFailed):
    pass


class FormatError(RdeError, ValueError):
    """A serialized passport, registration or ciphertext file is malformed."""
