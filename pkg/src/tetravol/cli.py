"""Command-line front end.

Exit codes: 0 pass, 1 an identity failed to vanish, 2 usage error,
3 a floating-point check failed.  Errors go to stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import difflab
from .discovery import MonomialSpace, discover
from .errors import TetravolError, TooLarge, UnstableKernel
from .exact import Configuration, format_rational, parse_labels, random_configuration, signed_volume
from .identities import Identity, eq9_identities, evaluate, orbit
from .poly import expand_identity

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2)


def _emit(doc, out=None):
    text = _dump(doc) + "\n"
    if out:
        Path(out).write_text(text)
    return text


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_identity(path) -> Identity:
    try:
        return Identity.from_json(_read_json(path))
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad identity file {path}: {exc}") from exc


def _parse_profile(text: str):
    if text in ("balanced", "unconstrained"):
        return text
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"profile must be balanced, unconstrained or a comma list, got {text!r}")


def cmd_volume(args):
    try:
        config = Configuration.from_json(_read_json(args.config))
        labels = parse_labels(args.tetra)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    if len(labels) != 4:
        raise UsageError(f"--tetra needs four labels, got {args.tetra!r}")
    vol = signed_volume(config, *labels)
    print(_dump({"schema": 1, "tetra": args.tetra, "volume": format_rational(vol)}))
    return EXIT_OK


def cmd_verify(args):
    ident = _load_identity(args.identity)
    residuals = []
    for k in range(args.trials):
        config = random_configuration(ident.n, args.coord_bound, args.seed + k)
        residuals.append(format_rational(evaluate(ident, config)))
    ok = all(r == "0" for r in residuals)
    print(_dump({
        "schema": 1,
        "provenance": ident.provenance,
        "trials": args.trials,
        "coord_bound": args.coord_bound,
        "seeds": [args.seed, args.seed + args.trials - 1] if args.trials else [],
        "residuals": residuals,
        "nonzero": sum(r != "0" for r in residuals),
        "pass": ok,
    }))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_prove(args):
    ident = _load_identity(args.identity)
    poly = expand_identity(ident, fix_origin=args.fix_origin)
    if args.dump:
        Path(args.dump).write_text(poly.to_text() + "\n")
    zero = not poly.terms
    print(_dump({"schema": 1, "provenance": ident.provenance, "zero": zero,
                 "terms_after_cancellation": len(poly)}))
    return EXIT_OK if zero else EXIT_FAIL


def cmd_discover(args):
    space = MonomialSpace(args.n, args.degree, _parse_profile(args.profile))
    try:
        result = discover(space, args.coord_bound, args.seed, extra_rows=args.extra_rows,
                          max_monomials=args.max_monomials)
    except TooLarge as exc:
        print(_dump({"schema": 1, "status": "too_large", "space": space.to_json(),
                     "size": exc.size, "budget": exc.budget, "message": str(exc)}))
        return EXIT_OK
    sys.stdout.write(_emit(result.to_json(), args.out))
    return EXIT_OK


def cmd_orbit(args):
    ident = _load_identity(args.identity)
    images = orbit(ident)
    doc = {"schema": 1, "provenance": ident.provenance, "size": len(images),
           "identities": [i.to_json() for i in images]}
    if args.out:
        _emit(doc, args.out)
        print(_dump({"schema": 1, "provenance": ident.provenance, "size": len(images),
                     "out": str(args.out)}))
    else:
        print(_dump(doc))
    return EXIT_OK


def cmd_diffcheck(args):
    if args.eq == 2:
        h = 1e-5 if args.h is None else args.h
        report = difflab.check_eq2(args.seed, h, args.samples or 100,
                                   **({"tol": args.tolerance} if args.tolerance else {}))
    elif args.eq == 4:
        report = difflab.run_eq4(args.seed, args.samples or 64, args.configs or 20,
                                 finite_difference=args.finite_difference,
                                 **({"h": args.h} if args.h is not None else {}),
                                 **({"tol": args.tolerance} if args.tolerance else {}))
    else:
        h = 1e-5 if args.h is None else args.h
        report = difflab.run_eq5(args.seed, h, args.samples or 16, args.configs or 5,
                                 **({"tol": args.tolerance} if args.tolerance else {}))
    print(_dump(report))
    return EXIT_OK if report["pass"] else EXIT_NUMERIC


def cmd_builtin(args):
    if not args.eq9:
        raise UsageError("builtin needs --eq9")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = []
    for ident in eq9_identities():
        path = out_dir / f"{ident.provenance}.json"
        _emit(ident.to_json(), path)
        files.append(str(path))
    print(_dump({"schema": 1, "files": files}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tetravol", description="Exact identities among tetrahedron volumes.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("volume", help="signed volume of one tetrahedron")
    s.add_argument("--config", required=True)
    s.add_argument("--tetra", required=True, help="e.g. ABDE or A,B,P6,P7")
    s.set_defaults(func=cmd_volume)

    s = sub.add_parser("verify", help="exact evaluation at random integer configurations")
    s.add_argument("--identity", required=True)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--coord-bound", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("prove", help="symbolic expansion in coordinates")
    s.add_argument("--identity", required=True)
    s.add_argument("--fix-origin", action="store_true", help="place label A at the origin")
    s.add_argument("--dump", help="write the expanded polynomial as text")
    s.set_defaults(func=cmd_prove)

    s = sub.add_parser("discover", help="kernel search in a monomial space")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--profile", default="balanced")
    s.add_argument("--coord-bound", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--extra-rows", type=int, default=10)
    s.add_argument("--max-monomials", type=int, default=300)
    s.add_argument("--out")
    s.set_defaults(func=cmd_discover)

    s = sub.add_parser("orbit", help="images under all relabelings")
    s.add_argument("--identity", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_orbit)

    s = sub.add_parser("diffcheck", help="floating-point differential checks")
    s.add_argument("--eq", type=int, choices=(2, 4, 5), required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--h", type=float)
    s.add_argument("--samples", type=int)
    s.add_argument("--configs", type=int)
    s.add_argument("--finite-difference", action="store_true")
    s.add_argument("--tolerance", type=float, help="override the check's default tolerance")
    s.set_defaults(func=cmd_diffcheck)

    s = sub.add_parser("builtin", help="write built-in identities")
    s.add_argument("--eq9", action="store_true")
    s.add_argument("--out-dir", default=".")
    s.set_defaults(func=cmd_builtin)
    return p


def _error(kind, message):
    sys.stderr.write(json.dumps({"schema": 1, "error": kind, "message": message}) + "\n")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
        return args.func(args)
    except UsageError as exc:
        _error("usage", str(exc))
        return EXIT_USAGE
    except UnstableKernel as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_FAIL
    except TetravolError as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
