"""Remote Document Encryption on top of e-passport Chip Authentication."""

from ._backend import NAME as BACKEND
from .core import (
    ExtractionParameters,
    RdeCiphertext,
    RegistrationRecord,
    decrypt,
    encrypt,
    register,
    security_strength,
    simulate_protected_read,
)
from .group import BRAINPOOL_P256R1, BRAINPOOL_P320R1, CurveId
from .passive_auth import IssuerKeypair
from .passport import Passport, PassportProfile, create_passport, make_profile
from .sm import CipherSuite

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BRAINPOOL_P256R1",
    "BRAINPOOL_P320R1",
    "CipherSuite",
    "CurveId",
    "ExtractionParameters",
    "IssuerKeypair",
    "Passport",
    "PassportProfile",
    "RdeCiphertext",
    "RegistrationRecord",
    "create_passport",
    "decrypt",
    "encrypt",
    "make_profile",
    "register",
    "security_strength",
    "simulate_protected_read",
]
