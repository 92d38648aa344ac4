"""Command-line front end.

Exit codes: 0 success / verified, 1 refuted or invalid, 2 unknown, 64 usage
error, 65 unparsable input, 70 internal error. With ``--json`` the machine
report goes to stdout and human-readable text to stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .certificate import SoncCertificate, SymmetricSoncCertificate, expand, load_certificate, verify, verify_symmetric
from .circuit import DEFAULT_TOLERANCE, CircuitPolynomial, circuit_verdict, theta_decimal
from .decompose import DecomposeOptions, search, search_symmetric
from .errors import CertificateError, DimensionMismatch, InputNotSymmetric, InvalidCircuit, NotInPolytope, \
    ParseError, SoncError
from .muirhead import caratheodory_decomposition, generalized_muirhead_gap, in_permutation_polytope, \
    muirhead_gap, symmetric_sum
from .oracle import FalsificationConfig, falsify
from .poly import format_polynomial, load_polynomial
from .symmetry import SymmetrizationMode, orbit, symmetrize

EXIT_OK, EXIT_REFUTED, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_PARSE, EXIT_INTERNAL = 64, 65, 70

log = logging.getLogger("sonccert")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class _Out:
    """Routes machine output to stdout and human text to stdout or stderr."""

    def __init__(self, as_json, stdout, stderr):
        self.as_json = as_json
        self.stdout = stdout
        self.stderr = stderr

    def say(self, text=""):
        print(text, file=self.stderr if self.as_json else self.stdout)

    def emit(self, payload):
        if self.as_json:
            json.dump(payload, self.stdout, indent=2, sort_keys=False)
            self.stdout.write("\n")


def _common():
    # defaults are filled in by run(), so flags work before or after the command
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                   help="write the JSON report to stdout, human text to stderr")
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS, metavar="N",
                   help="worker threads (default: available CPUs)")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, metavar="S")
    p.add_argument("--max-iter", type=int, default=argparse.SUPPRESS, metavar="K")
    p.add_argument("--mode", choices=["group", "orbit"], default=argparse.SUPPRESS)
    p.add_argument("--tolerance", type=float, default=argparse.SUPPRESS, metavar="EPS")
    p.add_argument("--nvars", type=int, default=argparse.SUPPRESS, metavar="N",
                   help="declared variable count for text input")
    p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    return p


_DEFAULTS = {"json": False, "jobs": None, "seed": 0, "max_iter": 500, "mode": None,
             "tolerance": DEFAULT_TOLERANCE, "nvars": None, "verbose": False}


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="sonccert", description="SONC certificates for sparse polynomials.",
                     parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def cmd(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    p = cmd("check-circuit", "classify a circuit polynomial")
    p.add_argument("input", help="polynomial (text or JSON) or circuit JSON; '-' for stdin")

    for name, what in (("verify-cert", "a SONC certificate"), ("verify-sym-cert", "an orbit-level certificate")):
        p = cmd(name, f"exactly verify {what}")
        p.add_argument("polynomial")
        p.add_argument("certificate")

    p = cmd("decompose", "search for a SONC certificate")
    p.add_argument("input")
    p.add_argument("--symmetric", action="store_true", help="orbit-reduced search (symmetric input)")
    p.add_argument("--json-out", metavar="FILE", help="write the certificate JSON here")
    p.add_argument("--falsify", action="store_true", help="on Unknown, search for a negative point")
    p.add_argument("--samples", type=int, default=10_000)

    p = cmd("symmetrize", "sum a polynomial over all variable permutations")
    p.add_argument("input")

    p = cmd("orbit", "list the S_n orbit of an exponent vector")
    p.add_argument("alpha", help="comma-separated exponent, e.g. 2,1,1")

    p = cmd("muirhead", "Muirhead membership, decomposition and sampled gaps")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--b", help="comma-separated nonnegative scalars for the weighted inequality")
    p.add_argument("--x", action="append", default=[], help="sample point (repeatable)")
    p.add_argument("--samples", type=int, default=100, help="random points in [0, 3]^n")

    p = cmd("falsify", "sample for a point where the polynomial is negative")
    p.add_argument("input")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--radius", type=float, default=4.0)
    p.add_argument("--nonnegative-orthant", action="store_true")
    return parser


# ------------------------------------------------------------------ helpers

def _read(path, stdin):
    if path == "-":
        return stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _json_or_none(text):
    text = text.strip()
    if not text.startswith("{"):
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos, text) from None


def _polynomial(text, args):
    data = _json_or_none(text)
    try:
        if data is not None:
            return load_polynomial(json.dumps(data), args.nvars)
        return load_polynomial(text, args.nvars)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, SoncError):
            raise
        raise ParseError(f"malformed polynomial: {exc}", None, text) from None


def _vector(text, what):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None


def _fractions(text, what):
    try:
        return tuple(Fraction(v) for v in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{what} must be comma-separated numbers, got {text!r}") from None


def _theta_text(piece: CircuitPolynomial):
    theta = piece.theta_exact()
    if theta is not None:
        return str(theta), f"{theta} (exact)"
    approx = theta_decimal(piece.outer_coeffs, piece.lam, 30)
    return str(approx), f"{approx:.15g} (approximate)"


def _report_lines(out, report, label="pieces"):
    out.say(f"verdict: {report.verdict.value}" + ("" if report.exact else " (within tolerance)"))
    out.say(f"circuit-number checks: {report.checks_performed} ({label})")
    if not report.residual.is_zero():
        out.say(f"residual: {format_polynomial(report.residual)}")
    for m in report.messages:
        out.say(f"  {m}")


# ----------------------------------------------------------------- commands

def cmd_check_circuit(args, out, stdin):
    text = _read(args.input, stdin)
    data = _json_or_none(text)
    try:
        if data is not None and "outer" in data:
            piece = CircuitPolynomial.from_json(data)
        else:
            piece = CircuitPolynomial.from_polynomial(_polynomial(text, args))
    except InvalidCircuit as exc:
        out.say(f"not a circuit polynomial: {exc.reason}: {exc}")
        out.emit({"class": None, "error": exc.reason, "message": str(exc)})
        return EXIT_REFUTED
    verdict = circuit_verdict(piece, tolerance=args.tolerance)
    theta, theta_text = _theta_text(piece)
    out.say(verdict.tag.value)
    out.say(f"Theta = {theta_text}")
    out.say(f"|c_beta| = {abs(piece.inner_coeff)}")
    payload = verdict.to_json()
    payload.update({"theta": theta, "theta_exact": piece.theta_exact() is not None,
                    "circuit": piece.to_json()})
    out.emit(payload)
    return EXIT_OK if verdict.tag.nonnegative else EXIT_REFUTED


def _load_cert(path, stdin):
    text = _read(path, stdin)
    try:
        return load_certificate(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid certificate JSON: {exc.msg}", exc.pos, text) from None


def cmd_verify_cert(args, out, stdin):
    p = _polynomial(_read(args.polynomial, stdin), args)
    cert = _load_cert(args.certificate, stdin)
    if isinstance(cert, SymmetricSoncCertificate):
        cert = expand(cert)
    report = verify(p, cert, tolerance=args.tolerance, jobs=args.jobs)
    _report_lines(out, report)
    out.emit(report.to_json())
    return EXIT_OK if report.verified else EXIT_REFUTED


def cmd_verify_sym_cert(args, out, stdin):
    p = _polynomial(_read(args.polynomial, stdin), args)
    cert = _load_cert(args.certificate, stdin)
    if isinstance(cert, SoncCertificate):
        cert = SymmetricSoncCertificate(cert.pieces, args.mode or "group", cert.squares)
    elif args.mode:
        cert = SymmetricSoncCertificate(cert.orbit_pieces, args.mode, cert.squares)
    try:
        report = verify_symmetric(p, cert, tolerance=args.tolerance)
    except InputNotSymmetric as exc:
        out.say(f"error: {exc}")
        out.emit({"verdict": None, "error": "InputNotSymmetric", "message": str(exc)})
        return EXIT_REFUTED
    _report_lines(out, report, f"orbit pieces, mode {cert.mode.value}")
    out.emit(report.to_json())
    return EXIT_OK if report.verified else EXIT_REFUTED


def cmd_decompose(args, out, stdin):
    p = _polynomial(_read(args.input, stdin), args)
    opts = DecomposeOptions(max_iter=args.max_iter, tolerance=args.tolerance)
    if args.symmetric:
        try:
            result = search_symmetric(p, opts)
        except InputNotSymmetric as exc:
            raise UsageError(f"--symmetric needs a symmetric polynomial: {exc}") from None
    else:
        result = search(p, opts)
    payload = {"status": "Unknown" if result.certificate is None else "Verified",
               "stage": result.stage, "circuits": result.circuits,
               "certificate": result.certificate.to_json() if result.certificate else None,
               "report": result.report.to_json() if result.report else None,
               "messages": list(result.messages)}
    if result.certificate is not None:
        cert = result.certificate
        count = len(getattr(cert, "orbit_pieces", getattr(cert, "pieces", ())))
        out.say(f"Verified ({result.stage}): {count} circuit pieces, {len(cert.squares)} squares")
        if args.json_out:
            with open(args.json_out, "w", encoding="utf-8") as fh:
                json.dump(cert.to_json(), fh, indent=2)
                fh.write("\n")
            out.say(f"certificate written to {args.json_out}")
        out.emit(payload)
        return EXIT_OK
    out.say(f"Unknown; best min slack {result.min_slack:.6g}")
    for m in result.messages:
        out.say(f"  {m}")
    code = EXIT_UNKNOWN
    if args.falsify:
        w = falsify(p, FalsificationConfig(samples=args.samples, seed=args.seed))
        payload["witness"] = w.to_json() if w else None
        if w is not None:
            out.say(f"refuted: p({', '.join(str(v) for v in w.point)}) = {float(w.value):.6g}")
            code = EXIT_REFUTED
        else:
            out.say("no negative value found")
    out.emit(payload)
    return code


def cmd_symmetrize(args, out, stdin):
    p = _polynomial(_read(args.input, stdin), args)
    mode = SymmetrizationMode.parse(args.mode or "group")
    q = symmetrize(p, mode)
    out.say(format_polynomial(q))
    out.emit({"mode": mode.value, "polynomial": q.to_json()})
    return EXIT_OK


def cmd_orbit(args, out, stdin):
    o = orbit(_vector(args.alpha, "alpha"))
    out.say(f"orbit of {list(o.representative)}: {o.size} elements")
    for e in o.elements:
        out.say(f"  {list(e)}")
    out.emit(o.to_json())
    return EXIT_OK


def cmd_muirhead(args, out, stdin):
    alpha, beta = _vector(args.alpha, "alpha"), _vector(args.beta, "beta")
    if len(alpha) != len(beta):
        raise UsageError("alpha and beta must have the same length")
    n = len(alpha)
    member = in_permutation_polytope(beta, alpha)
    payload = {"alpha": list(alpha), "beta": list(beta), "member": member}
    out.say(f"beta in conv(orbit(alpha)): {member}")
    if not member:
        out.emit(payload)
        return EXIT_REFUTED
    decomp = caratheodory_decomposition(beta, alpha)
    payload["decomposition"] = decomp.to_json()
    for point, w in zip(decomp.points(), decomp.weights()):
        out.say(f"  {w} * {list(point)}")
    points = [tuple(float(v) for v in _fractions(x, "--x")) for x in args.x]
    if any(len(x) != n for x in points):
        raise UsageError(f"sample points need {n} coordinates")
    rng = np.random.default_rng(args.seed)
    points += [tuple(row) for row in rng.uniform(0.0, 3.0, size=(max(args.samples, 0), n))]
    b = _fractions(args.b, "--b") if args.b else None
    if b is not None and n < 3:
        raise UsageError("the weighted inequality needs n >= 3")
    if b is not None and len(b) not in (len(decomp.terms), n + 1):
        raise UsageError(f"--b needs {len(decomp.terms)} or {n + 1} scalars, got {len(b)}")
    if b is not None and any(v < 0 for v in b):
        raise UsageError("--b scalars must be nonnegative")
    worst, worst_rel, worst_x = None, None, None
    for x in points:
        if b is None:
            gap = muirhead_gap(alpha, beta, x)
        else:
            gap = generalized_muirhead_gap(alpha, decomp, b, x)
        scale = max(1.0, abs(symmetric_sum(alpha, x)) * (float(max(b)) if b else 1.0))
        if worst is None or gap < worst:
            worst, worst_rel, worst_x = gap, gap / scale, x
    payload["samples"] = len(points)
    payload["min_gap"] = worst
    payload["min_gap_point"] = list(worst_x) if worst_x is not None else None
    if worst is not None:
        out.say(f"min gap over {len(points)} points: {worst:.6g} at {list(worst_x)}")
    out.emit(payload)
    return EXIT_OK if worst is None or worst_rel >= -1e-9 else EXIT_REFUTED


def cmd_falsify(args, out, stdin):
    p = _polynomial(_read(args.input, stdin), args)
    cfg = FalsificationConfig(samples=args.samples, box_radius=args.radius, seed=args.seed,
                              nonnegative_orthant=args.nonnegative_orthant)
    w = falsify(p, cfg)
    if w is None:
        out.say(f"no negative value found in {args.samples} samples")
        out.emit({"witness": None, "samples": args.samples, "seed": args.seed})
        return EXIT_UNKNOWN
    out.say(f"witness: p({', '.join(str(v) for v in w.point)}) = {w.value} ~ {float(w.value):.6g}")
    out.emit({"witness": w.to_json(), "samples": args.samples, "seed": args.seed})
    return EXIT_REFUTED


COMMANDS = {
    "check-circuit": cmd_check_circuit,
    "verify-cert": cmd_verify_cert,
    "verify-sym-cert": cmd_verify_sym_cert,
    "decompose": cmd_decompose,
    "symmetrize": cmd_symmetrize,
    "orbit": cmd_orbit,
    "muirhead": cmd_muirhead,
    "falsify": cmd_falsify,
}


def run(argv=None, stdout=None, stderr=None, stdin=None) -> int:
    """Run one command and return its exit code; never raises."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    stdin = stdin or sys.stdin
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        print(parser.format_usage().rstrip(), file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    for k, v in _DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    if args.jobs is None:
        args.jobs = os.cpu_count() or 1
    if args.jobs < 1 or args.max_iter < 1 or args.tolerance < 0:
        print("usage error: --jobs and --max-iter must be positive, --tolerance nonnegative", file=stderr)
        return EXIT_USAGE
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=stderr)
    out = _Out(args.json, stdout, stderr)
    try:
        return COMMANDS[args.command](args, out, stdin)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_PARSE
    except (CertificateError, InvalidCircuit, DimensionMismatch, NotInPolytope) as exc:
        print(f"invalid: {exc}", file=stderr)
        return EXIT_REFUTED
    except SoncError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_REFUTED
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INTERNAL


def main():
    sys.exit(run())
