"""``rde`` command line: simulated passports, registration, encryption,
decryption and the two-round determinism experiment.

Exit codes: 0 ok, 1 experiment outcome differs from expectation, 2 usage,
3 registration/passive authentication, 4 BAC, 5 secure messaging or
decryption, 6 file I/O or file format.
"""

from __future__ import annotations

import argparse
import random
import secrets
import sys
from pathlib import Path

from . import core, group
from .errors import (
    BacFailure,
    CardError,
    DecryptionFailed,
    FormatError,
    MrzError,
    RegistrationError,
    SmError,
)
from .experiment import run_experiment
from .passive_auth import DataGroup, IssuerKeypair
from .passport import SFI_DG1, SFI_DG14, SFI_SOD, Passport, create_passport, make_profile
from .reader import Reader
from .sm import CipherSuite

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_PA = 3
EXIT_BAC = 4
EXIT_DECRYPT = 5
EXIT_IO = 6

DEFAULT_ISSUER_SEED = 0


def builtin_issuer(seed=DEFAULT_ISSUER_SEED):
    """A reproducible stand-in for a document signer, derived from ``seed``."""
    return IssuerKeypair.generate(random.Random(f"rde-test-issuer:{seed}"))


def _rng(seed, purpose):
    if seed is None:
        return secrets.SystemRandom()
    return random.Random(f"{purpose}:{seed}")


def _suite(name):
    try:
        return CipherSuite.from_name(name)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown suite {name!r}") from None


def _curve(name):
    try:
        return group.CurveId.from_name(name)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown curve {name!r}") from None


def _pin(text):
    if not text:
        raise argparse.ArgumentTypeError("PIN must be non-empty")
    return text.encode("utf-8")


def _load_passport(path, seed=None):
    return Passport.from_bytes(Path(path).read_bytes(), _rng(seed, "chip"))


def _load_ciphertext(path):
    raw = Path(path).read_bytes()
    if raw[:1] == bytes((core.TAG_CIPHERTEXT,)):
        return core.RdeCiphertext.from_bytes(raw)
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError:
        raise FormatError("ciphertext file is neither binary nor hex text") from None
    return core.RdeCiphertext.from_text(text)


def _printer(enabled):
    return print if enabled else None


# ---------------------------------------------------------------------------
# subcommands

def cmd_create_passport(args):
    profile = make_profile(args.suite, args.curve, args.seed, document_number=args.document_number,
                           date_of_birth=args.birth, date_of_expiry=args.expiry,
                           surname=args.surname, given_names=args.given_names)
    passport = create_passport(profile, builtin_issuer(args.issuer_seed), _rng(args.seed, "passport"))
    Path(args.out).write_bytes(passport.to_bytes())
    print(profile.mrz)
    print(f"suite: {profile.suite.label}  curve: {group.curve(profile.curve_id).curve_id.name}")
    return EXIT_OK


def cmd_register(args):
    card = _load_passport(args.passport, args.seed)
    mrz = args.mrz or card.profile.mrz
    reader = Reader(card, _rng(args.seed, "reader"), _printer(args.transcript))
    reader.select_lds()
    reader.bac(mrz)
    files = {sfi: reader.read_file(sfi) for sfi in (SFI_DG1, SFI_DG14, SFI_SOD)}
    f_cont = files[SFI_DG14] if args.f_id == 14 else reader.read_file(args.f_id)
    params = core.ExtractionParameters(args.n, args.f_id, f_cont)
    trusted = None if args.any_issuer else builtin_issuer(args.issuer_seed).public
    record = core.register(
        DataGroup(1, files[SFI_DG1]), DataGroup(14, files[SFI_DG14]), files[SFI_SOD],
        params, args.consent, trusted_issuer=trusted,
    )
    Path(args.out).write_bytes(record.to_bytes())
    print(f"registered {record.document_number}: n={params.n} file=DG{params.f_id} suite={record.suite.label}")
    return EXIT_OK


def cmd_encrypt(args):
    trusted = None if args.any_issuer else builtin_issuer(args.issuer_seed).public
    record = core.RegistrationRecord.from_bytes(Path(args.record).read_bytes(), trusted)
    data = Path(args.input).read_bytes()
    ct = core.encrypt(record, data, _rng(args.seed, "encrypt"), args.pin, args.multi)
    if args.text:
        Path(args.out).write_text(ct.to_text() + "\n")
    else:
        Path(args.out).write_bytes(ct.to_bytes())
    print(f"encrypted {len(data)} bytes, {ct.multi_count} read(s), pin={'yes' if ct.pin_protected else 'no'}")
    return EXIT_OK


def cmd_decrypt(args):
    ct = _load_ciphertext(args.ciphertext)
    card = _load_passport(args.passport, args.seed)
    mrz = args.mrz or card.profile.mrz
    if ct.pin_protected and args.pin is None:
        print("error: this ciphertext is PIN-protected; pass --pin", file=sys.stderr)
        return EXIT_USAGE
    data = core.decrypt(ct, card, mrz, args.pin, _rng(args.seed, "reader"), _printer(args.transcript))
    Path(args.out).write_bytes(data)
    print(f"decrypted {len(data)} bytes")
    return EXIT_OK


def cmd_experiment(args):
    card = _load_passport(args.passport, args.seed)
    result = run_experiment(card, args.mrz or card.profile.mrz, bool(args.mem),
                            _rng(args.seed, "experiment"), _printer(args.transcript))
    for i, r in enumerate(result.rounds, 1):
        print(f"round {i} shared key: {r.shared_secret.hex()}")
        print(f"round {i} protected response: {r.response.hex()}")
    expected = "MATCH" if args.mem else "DIFFER"
    print(f"mem={args.mem} verdict: {result.verdict} (expected {expected})")
    return EXIT_OK if result.as_expected else EXIT_MISMATCH


def cmd_strength(args):
    print(core.security_strength(args.suite, args.bits))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="rde", description="Remote Document Encryption with a simulated e-passport.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True, issuer=False):
        if seed:
            sp.add_argument("--seed", type=int, help="make every random choice reproducible")
        if issuer:
            sp.add_argument("--issuer-seed", type=int, default=DEFAULT_ISSUER_SEED,
                            help="seed of the built-in test issuer (trust anchor)")
        sp.add_argument("--transcript", action="store_true", help="print every APDU exchanged")

    sp = sub.add_parser("create-passport", help="issue a simulated passport")
    sp.add_argument("--suite", type=_suite, default=CipherSuite.AES_CBC_CMAC_256,
                    help="3des, aes128, aes192 or aes256")
    sp.add_argument("--curve", type=_curve, default=group.CurveId.BRAINPOOL_P320R1, help="bp256 or bp320")
    sp.add_argument("--document-number", default="NXC4R8T61")
    sp.add_argument("--birth", default="750412", help="YYMMDD")
    sp.add_argument("--expiry", default="320101", help="YYMMDD")
    sp.add_argument("--surname", default="De Bruijn")
    sp.add_argument("--given-names", default="Willeke")
    sp.add_argument("--out", "-o", required=True)
    common(sp, issuer=True)
    sp.set_defaults(func=cmd_create_passport)

    sp = sub.add_parser("register", help="read a passport and register it for RDE")
    sp.add_argument("--passport", required=True)
    sp.add_argument("--mrz", help="MRZ used for BAC (default: the one printed in the passport)")
    sp.add_argument("--n", type=int, default=128, help="bytes read per extraction")
    sp.add_argument("--f-id", type=int, default=14, help="data group to read")
    sp.add_argument("--consent", action="store_true", help="holder agrees to RDE registration")
    sp.add_argument("--any-issuer", action="store_true", help="accept any self-consistent EF.SOD")
    sp.add_argument("--out", "-o", required=True)
    common(sp, issuer=True)
    sp.set_defaults(func=cmd_register)

    sp = sub.add_parser("encrypt", help="encrypt a file for a registered document")
    sp.add_argument("--record", required=True)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", "-o", required=True)
    sp.add_argument("--pin", type=_pin, help="Extraction PIN")
    sp.add_argument("--multi", type=int, default=1, choices=range(1, core.MAX_MULTI + 1),
                    metavar="I", help="number of protected reads hashed into the key")
    sp.add_argument("--text", action="store_true", help="write the envelope as hex text")
    sp.add_argument("--any-issuer", action="store_true")
    common(sp, issuer=True)
    sp.set_defaults(func=cmd_encrypt)

    sp = sub.add_parser("decrypt", help="decrypt using the passport")
    sp.add_argument("--ciphertext", required=True)
    sp.add_argument("--passport", required=True)
    sp.add_argument("--mrz")
    sp.add_argument("--pin", type=_pin)
    sp.add_argument("--out", "-o", required=True)
    common(sp)
    sp.set_defaults(func=cmd_decrypt)

    sp = sub.add_parser("experiment", help="two cold-reset rounds with or without key reuse")
    sp.add_argument("--passport", required=True)
    sp.add_argument("--mem", type=int, choices=(0, 1), default=1, help="1 reuses the ephemeral key")
    sp.add_argument("--mrz")
    common(sp)
    sp.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("strength", help="security strength in bits")
    sp.add_argument("--suite", type=_suite, required=True)
    sp.add_argument("--bits", type=int, required=True, help="bit length of the group order")
    sp.set_defaults(func=cmd_strength)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RegistrationError as e:
        print(f"error: registration failed: {e}", file=sys.stderr)
        return EXIT_PA
    except BacFailure as e:
        print(f"error: BAC failed: {e}", file=sys.stderr)
        return EXIT_BAC
    except (DecryptionFailed, SmError, CardError) as e:
        print(f"error: decryption failed: {e}", file=sys.stderr)
        return EXIT_DECRYPT
    except MrzError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, FormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
