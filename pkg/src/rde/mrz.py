"""Machine Readable Zone helpers: check digits, TD1/TD3 parsing and the BAC key seed."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

from .errors import MrzError

_WEIGHTS = (7, 3, 1)
_FILLER = "<"


def _char_value(c):
    if c.isdigit():
        return int(c)
    if "A" <= c <= "Z":
        return ord(c) - ord("A") + 10
    if c == _FILLER:
        return 0
    raise MrzError(f"invalid MRZ character {c!r}")


def check_digit(field):
    return str(sum(_char_value(c) * _WEIGHTS[i % 3] for i, c in enumerate(field)) % 10)


@dataclass(frozen=True)
class MrzKey:
    """The three MRZ fields BAC uses, stored without check digits."""

    document_number: str
    date_of_birth: str
    date_of_expiry: str

    def __post_init__(self):
        for name in ("date_of_birth", "date_of_expiry"):
            if not re.fullmatch(r"\d{6}", getattr(self, name)):
                raise MrzError(f"{name} must be YYMMDD")
        if not re.fullmatch(r"[0-9A-Z<]{1,9}", self.document_number):
            raise MrzError("document number must be 1..9 MRZ characters")

    @property
    def information(self):
        doc = self.document_number.ljust(9, _FILLER)
        return (
            doc + check_digit(doc)
            + self.date_of_birth + check_digit(self.date_of_birth)
            + self.date_of_expiry + check_digit(self.date_of_expiry)
        )

    def key_seed(self):
        return hashlib.sha1(self.information.encode("ascii")).digest()[:16]


def _verify(field, digit, what):
    if check_digit(field) != digit:
        raise MrzError(f"bad check digit for {what}")


def parse_mrz(text):
    """Accept a TD3 (2x44) or TD1 (3x30) MRZ, or a 24-character MRZ information string."""
    compact = "".join(text.split()).upper()
    if len(compact) == 24:
        doc, dob, exp = compact[:9], compact[10:16], compact[17:23]
        _verify(doc, compact[9], "document number")
        _verify(dob, compact[16], "date of birth")
        _verify(exp, compact[23], "date of expiry")
    elif len(compact) == 88:
        line2 = compact[44:]
        doc, dob, exp = line2[0:9], line2[13:19], line2[21:27]
        _verify(doc, line2[9], "document number")
        _verify(dob, line2[19], "date of birth")
        _verify(exp, line2[27], "date of expiry")
        composite = line2[0:10] + line2[13:20] + line2[21:43]
        _verify(composite, line2[43], "composite")
    elif len(compact) == 90:
        line1, line2 = compact[:30], compact[30:60]
        doc, dob, exp = line1[5:14], line2[0:6], line2[8:14]
        _verify(doc, line1[14], "document number")
        _verify(dob, line2[6], "date of birth")
        _verify(exp, line2[14], "date of expiry")
        composite = line1[5:30] + line2[0:7] + line2[8:15] + line2[18:29]
        _verify(composite, line2[29], "composite")
    else:
        raise MrzError(f"unrecognised MRZ length {len(compact)}")
    return MrzKey(doc.rstrip(_FILLER), dob, exp)


def _name_field(surname, given_names, width):
    name = surname.upper().replace(" ", _FILLER) + _FILLER * 2 + given_names.upper().replace(" ", _FILLER)
    if len(name) > width:
        name = name[:width]
    return name.ljust(width, _FILLER)


def build_td3(document_number, date_of_birth, date_of_expiry, surname, given_names,
              nationality="NLD", issuer="NLD", sex="<"):
    """Two-line passport MRZ with valid check digits."""
    key = MrzKey(document_number, date_of_birth, date_of_expiry)
    line1 = ("P<" + issuer + _name_field(surname, given_names, 39))[:44]
    doc = document_number.ljust(9, _FILLER)
    optional = _FILLER * 14
    line2 = (
        doc + check_digit(doc) + nationality
        + date_of_birth + check_digit(date_of_birth) + sex
        + date_of_expiry + check_digit(date_of_expiry)
        + optional + check_digit(optional)
    )
    composite = line2[0:10] + line2[13:20] + line2[21:43]
    line2 += check_digit(composite)
    text = line1 + "\n" + line2
    assert parse_mrz(text) == key
    return text
