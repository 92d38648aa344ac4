"""SONC certificates and their exact verification."""
from __future__ import annotations

import enum
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import factorial

from .circuit import (
    DEFAULT_MAX_DENOMINATOR,
    DEFAULT_TOLERANCE,
    CircuitPolynomial,
    circuit_verdict,
)
from .errors import CertificateError, InputNotSymmetric, InvalidCircuit
from .poly import SparsePolynomial, as_fraction, is_even
from .symmetry import (
    GROUP_SUM,
    ORBIT_SUM,
    SymmetrizationMode,
    all_permutations,
    apply_permutation,
    is_symmetric,
    multiset_permutations,
    symmetrize,
)


class Verdict(enum.Enum):
    VERIFIED = "Verified"
    SUM_MISMATCH = "SumMismatch"
    PIECE_NOT_NONNEGATIVE = "PieceNotNonnegative"
    INVALID_PIECE = "InvalidPiece"


@dataclass(frozen=True)
class SoncCertificate:
    pieces: tuple = ()
    squares: tuple = ()  # ((exponent, coefficient), ...)

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "squares", tuple((tuple(e), as_fraction(c)) for e, c in self.squares))

    def total(self, n) -> SparsePolynomial:
        terms = []
        for piece in self.pieces:
            terms.extend(piece.to_polynomial().terms.items())
        terms.extend(self.squares)
        return SparsePolynomial(n, terms)

    def to_json(self):
        return {
            "type": "sonc",
            "pieces": [p.to_json() for p in self.pieces],
            "squares": [{"exp": list(e), "coef": str(c)} for e, c in self.squares],
        }


@dataclass(frozen=True)
class SymmetricSoncCertificate:
    """Orbit-level certificate: each piece stands for its sum over S_n.

    Under ``GROUP_SUM`` a piece expands to all n! permuted copies; under
    ``ORBIT_SUM`` to its distinct permuted copies, each once. Squares expand
    the same way.
    """

    orbit_pieces: tuple = ()
    mode: SymmetrizationMode = GROUP_SUM
    squares: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "orbit_pieces", tuple(self.orbit_pieces))
        object.__setattr__(self, "mode", SymmetrizationMode.parse(self.mode))
        object.__setattr__(self, "squares", tuple((tuple(e), as_fraction(c)) for e, c in self.squares))

    def to_json(self):
        return {
            "type": "symmetric-sonc",
            "mode": self.mode.value,
            "pieces": [p.to_json() for p in self.orbit_pieces],
            "squares": [{"exp": list(e), "coef": str(c)} for e, c in self.squares],
        }


def load_certificate(data):
    """Parse certificate JSON (dict or string) into a certificate object.

    Invalid circuits and squares raise :class:`CertificateError`.
    """
    if isinstance(data, str):
        data = json.loads(data)
    kind = data.get("type", "sonc")
    pieces = []
    for i, raw in enumerate(data.get("pieces", [])):
        try:
            pieces.append(CircuitPolynomial.from_json(raw))
        except InvalidCircuit as exc:
            raise CertificateError(f"piece {i}: {exc.reason}: {exc}") from None
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateError(f"piece {i}: malformed ({exc})") from None
    squares = [(tuple(s["exp"]), as_fraction(s["coef"])) for s in data.get("squares", [])]
    if kind == "sonc":
        return SoncCertificate(tuple(pieces), tuple(squares))
    if kind == "symmetric-sonc":
        return SymmetricSoncCertificate(tuple(pieces), data.get("mode", "group"), tuple(squares))
    raise CertificateError(f"unknown certificate type {kind!r}")


@dataclass(frozen=True)
class VerificationReport:
    verdict: Verdict
    residual: SparsePolynomial
    per_piece: tuple
    checks_performed: int
    issues: tuple = ()
    failing: tuple = ()
    exact: bool = True
    messages: tuple = field(default=())

    @property
    def verified(self) -> bool:
        return self.verdict is Verdict.VERIFIED

    def to_json(self):
        return {
            "verdict": self.verdict.value,
            "issues": [v.value for v in self.issues],
            "exact": self.exact,
            "residual": self.residual.to_json(),
            "per_piece": [c.value for c in self.per_piece],
            "failing": list(self.failing),
            "checks_performed": self.checks_performed,
            "messages": list(self.messages),
        }


def _assemble(residual, per_piece, checks, failing, invalid, exact, messages):
    issues = []
    if invalid:
        issues.append(Verdict.INVALID_PIECE)
    if any(not c.nonnegative for c in per_piece):
        issues.append(Verdict.PIECE_NOT_NONNEGATIVE)
    if not residual.is_zero():
        issues.append(Verdict.SUM_MISMATCH)
    verdict = issues[0] if issues else Verdict.VERIFIED
    return VerificationReport(verdict, residual, tuple(per_piece), checks, tuple(issues),
                              tuple(failing), exact, tuple(messages))


def _check_squares(squares, n, messages):
    bad = []
    for i, (e, c) in enumerate(squares):
        if len(e) != n or not is_even(e) or c <= 0:
            bad.append(i)
            messages.append(f"square {i} ({e}, {c}) is not a positive monomial square in {n} variables")
    return bad


def verify(p: SparsePolynomial, cert: SoncCertificate, max_denominator=DEFAULT_MAX_DENOMINATOR,
           tolerance=DEFAULT_TOLERANCE, jobs=1) -> VerificationReport:
    """Exact check that ``cert`` is a SONC decomposition of ``p``.

    The residual ``p - sum(pieces) - sum(squares)`` is computed in rational
    arithmetic; each piece is classified with the exact circuit-number
    comparison (log-domain fallback only on denominator overflow).
    """
    messages = []
    bad_dim = [i for i, piece in enumerate(cert.pieces) if piece.n != p.n]
    for i in bad_dim:
        messages.append(f"piece {i} has {cert.pieces[i].n} variables, polynomial has {p.n}")
    bad_sq = _check_squares(cert.squares, p.n, messages)
    if bad_dim or bad_sq:
        return _assemble(p, [], 0, bad_dim, True, True, messages)

    def judge(piece):
        return circuit_verdict(piece, max_denominator, tolerance)

    if jobs and jobs > 1 and len(cert.pieces) > 1:
        with ThreadPoolExecutor(jobs) as pool:
            verdicts = list(pool.map(judge, cert.pieces))
    else:
        verdicts = [judge(piece) for piece in cert.pieces]
    residual = p - cert.total(p.n)
    failing = [i for i, v in enumerate(verdicts) if not v.tag.nonnegative]
    for i in failing:
        messages.append(f"piece {i} (inner {cert.pieces[i].inner}) violates the circuit-number bound")
    exact = all(v.exact for v in verdicts)
    return _assemble(residual, [v.tag for v in verdicts], len(verdicts), failing, False, exact, messages)


def _expand_polynomial(piece_poly, mode):
    """Sum of a piece over S_n under ``mode``, without materializing copies."""
    if mode is GROUP_SUM:
        return symmetrize(piece_poly, GROUP_SUM)
    seen = set()
    total = SparsePolynomial(piece_poly.n)
    for sigma in all_permutations(piece_poly.n):
        image = apply_permutation(sigma, piece_poly)
        if image not in seen:
            seen.add(image)
            total = total + image
    return total


def _piece_images(piece, mode):
    seen = set()
    for sigma in all_permutations(piece.n):
        image = piece.permuted(sigma)
        if mode is ORBIT_SUM:
            key = image.to_polynomial()
            if key in seen:
                continue
            seen.add(key)
        yield image


def _square_images(e, c, mode):
    if mode is GROUP_SUM:
        mult = factorial(len(e)) // sum(1 for _ in multiset_permutations(e))
        for img in multiset_permutations(e):
            yield img, c * mult
    else:
        for img in multiset_permutations(e):
            yield img, c


def expand(sym: SymmetricSoncCertificate) -> SoncCertificate:
    """Materialize the implicit sum over S_n.

    ``GROUP_SUM``: every piece is copied once per permutation (n! copies, no
    merging). ``ORBIT_SUM``: one copy per distinct permuted piece.
    """
    pieces = []
    for piece in sym.orbit_pieces:
        pieces.extend(_piece_images(piece, sym.mode))
    squares = []
    for e, c in sym.squares:
        squares.extend(_square_images(e, c, sym.mode))
    return SoncCertificate(tuple(pieces), tuple(squares))


def verify_symmetric(p: SparsePolynomial, sym: SymmetricSoncCertificate,
                     max_denominator=DEFAULT_MAX_DENOMINATOR,
                     tolerance=DEFAULT_TOLERANCE) -> VerificationReport:
    """Verify an orbit-level certificate with one circuit-number check per piece.

    The sum check compares ``p`` against the expanded certificate exactly.
    Raises :class:`InputNotSymmetric` if ``p`` is not S_n-invariant.
    """
    if not is_symmetric(p):
        raise InputNotSymmetric("polynomial is not invariant under permuting variables")
    messages = []
    bad = [i for i, piece in enumerate(sym.orbit_pieces) if piece.n != p.n]
    for i in bad:
        messages.append(f"orbit piece {i} has {sym.orbit_pieces[i].n} variables, polynomial has {p.n}")
    positive = [i for i, piece in enumerate(sym.orbit_pieces) if piece.inner_coeff > 0 and i not in bad]
    for i in positive:
        messages.append(f"orbit piece {i} has a positive inner coefficient")
    bad_sq = _check_squares(sym.squares, p.n, messages)
    if bad or bad_sq:
        return _assemble(p, [], 0, bad, True, True, messages)

    verdicts = [circuit_verdict(piece, max_denominator, tolerance) for piece in sym.orbit_pieces]
    total = SparsePolynomial(p.n)
    for piece in sym.orbit_pieces:
        total = total + _expand_polynomial(piece.to_polynomial(), sym.mode)
    for e, c in sym.squares:
        total = total + _expand_polynomial(SparsePolynomial.monomial(e, c), sym.mode)
    residual = p - total
    failing = sorted(set(positive) | {i for i, v in enumerate(verdicts) if not v.tag.nonnegative})
    for i, v in enumerate(verdicts):
        if not v.tag.nonnegative:
            messages.append(f"orbit piece {i} (representative inner {sym.orbit_pieces[i].inner}) "
                            "violates the circuit-number bound")
    exact = all(v.exact for v in verdicts)
    return _assemble(residual, [v.tag for v in verdicts], len(verdicts), failing,
                     bool(positive), exact, messages)

