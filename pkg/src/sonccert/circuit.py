"""Circuit polynomials: support recognition, circuit numbers, classification.

A circuit polynomial has positive coefficients on the even vertices of a
lattice simplex and one further term (the inner term) whose exponent lies in
the relative interior of that simplex. With ``lam`` the barycentric
coordinates of the inner exponent, the circuit number is

    theta = prod_a (c_a / lam_a) ** lam_a

and the polynomial is nonnegative iff ``|c_inner| <= theta`` (or the inner
term is itself a square with nonnegative coefficient).
"""
from __future__ import annotations

import enum
import itertools
import json
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from math import lcm

from . import linalg
from .errors import (
    DegenerateSupport,
    DenominatorOverflow,
    DimensionMismatch,
    InvalidCircuit,
    NonLatticeInnerPoint,
    NonpositiveOuterCoefficient,
    NotASimplex,
    NotInterior,
    ParityMismatch,
)
from .poly import SparsePolynomial, as_fraction, is_even, log_abs, signed_partition
from .symmetry import all_permutations, check_permutation, permute

DEFAULT_MAX_DENOMINATOR = 64
DEFAULT_TOLERANCE = 1e-9


class Comparison(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"
    WITHIN_TOLERANCE = "WithinTolerance"


class NonnegativityClass(enum.Enum):
    MONOMIAL_SQUARE_SUM = "MonomialSquareSum"
    INNER_NONNEGATIVE = "InnerNonnegative"
    STRICTLY_INSIDE = "StrictlyInside"
    BOUNDARY = "Boundary"
    NOT_NONNEGATIVE = "NotNonnegative"

    @property
    def nonnegative(self) -> bool:
        return self is not NonnegativityClass.NOT_NONNEGATIVE


# ----------------------------------------------------------- support geometry

def barycentric_coordinates(outer, inner) -> dict:
    """Exact barycentric coordinates of ``inner`` w.r.t. the points ``outer``.

    Returns a dict keyed by the outer exponents (in the given order). Raises
    :class:`NotASimplex` for affinely dependent points and
    :class:`NotInterior` unless every coordinate lies strictly in (0, 1).
    """
    outer = [tuple(a) for a in outer]
    inner = tuple(inner)
    if not outer:
        raise NotInterior("no outer points")
    n = len(inner)
    if any(len(a) != n for a in outer):
        raise DimensionMismatch("outer and inner exponents differ in length")
    if len(set(outer)) != len(outer):
        raise NotASimplex("outer points are not distinct")
    if len(outer) > n + 1:
        raise NotASimplex(f"{len(outer)} points cannot be affinely independent in dimension {n}")
    rows = [[a[i] for a in outer] for i in range(n)]
    rows.append([1] * len(outer))
    try:
        lam = linalg.solve(rows, list(inner) + [1])
    except linalg.SingularSystem:
        raise NotASimplex("outer points are affinely dependent") from None
    except linalg.InconsistentSystem:
        raise NotInterior("inner point is outside the affine hull") from None
    if any(not 0 < v < 1 for v in lam):
        raise NotInterior("inner point is not in the relative interior")
    return dict(zip(outer, lam))


@dataclass(frozen=True)
class SupportCheck:
    ok: bool
    reason: str | None = None
    detail: str = ""
    lam: tuple | None = None

    def __bool__(self):
        return self.ok


def is_circuit_support(outer, inner) -> SupportCheck:
    """Diagnose whether ``(outer, inner)`` is a circuit support; never raises.

    ``reason`` names the first failing condition: ``TooFewVertices``,
    ``DimensionMismatch``, ``DuplicateVertex``, ``OddVertex``,
    ``NotASimplex`` or ``NotInterior``.
    """
    outer = [tuple(a) for a in outer]
    inner = tuple(inner)
    if len(outer) < 1:
        return SupportCheck(False, "TooFewVertices", "need at least one outer point")
    if any(len(a) != len(inner) for a in outer):
        return SupportCheck(False, "DimensionMismatch", "exponent lengths differ")
    if len(set(outer)) != len(outer):
        return SupportCheck(False, "DuplicateVertex", "outer points repeat")
    for a in outer:
        if not is_even(a):
            return SupportCheck(False, "OddVertex", f"vertex {a} has an odd entry")
    try:
        lam = barycentric_coordinates(outer, inner)
    except InvalidCircuit as exc:
        return SupportCheck(False, exc.reason, str(exc))
    return SupportCheck(True, lam=tuple(lam.values()))


# ----------------------------------------------------------- circuit numbers

def _aligned(coeffs, lam):
    if isinstance(lam, Mapping):
        keys = list(lam)
        lam = [lam[k] for k in keys]
        if isinstance(coeffs, Mapping):
            coeffs = [coeffs[tuple(k)] for k in keys]
    coeffs = [as_fraction(c) for c in coeffs]
    lam = [as_fraction(v) for v in lam]
    if len(coeffs) != len(lam):
        raise DimensionMismatch("coefficients and barycentric coordinates differ in length")
    return coeffs, lam


def circuit_number_log(outer_coeffs, lam) -> float:
    """``sum lam_a * (ln c_a - ln lam_a)``, the natural log of the circuit number."""
    coeffs, lam = _aligned(outer_coeffs, lam)
    if any(c <= 0 for c in coeffs):
        raise NonpositiveOuterCoefficient("outer coefficients must be positive")
    return sum(float(l) * (log_abs(c) - log_abs(l)) for c, l in zip(coeffs, lam))


def _powered_theta(coeffs, lam, max_denominator):
    d = lcm(*(l.denominator for l in lam))
    if max_denominator is not None and d > max_denominator:
        raise DenominatorOverflow(d, max_denominator)
    rhs = Fraction(1)
    for c, l in zip(coeffs, lam):
        rhs *= (c / l) ** (l.numerator * (d // l.denominator))
    return d, rhs


def compare_exact(abs_inner, outer_coeffs, lam, max_denominator=DEFAULT_MAX_DENOMINATOR) -> Comparison:
    """Exact three-way comparison of ``abs_inner`` against the circuit number.

    With ``D`` the lcm of the coordinate denominators, compares
    ``abs_inner**D`` against ``prod (c_a/lam_a)**(D*lam_a)``, both rational.
    """
    coeffs, lam = _aligned(outer_coeffs, lam)
    abs_inner = as_fraction(abs_inner)
    if abs_inner < 0:
        raise ValueError("abs_inner must be nonnegative")
    if any(c <= 0 for c in coeffs):
        raise NonpositiveOuterCoefficient("outer coefficients must be positive")
    d, rhs = _powered_theta(coeffs, lam, max_denominator)
    lhs = abs_inner ** d
    if lhs < rhs:
        return Comparison.LESS
    if lhs > rhs:
        return Comparison.GREATER
    return Comparison.EQUAL


def compare_circuit_number(abs_inner, outer_coeffs, lam,
                           max_denominator=DEFAULT_MAX_DENOMINATOR,
                           tolerance=DEFAULT_TOLERANCE):
    """Exact comparison when possible, else a log-domain one.

    Returns ``(comparison, exact)``. In the log domain a difference within
    ``tolerance`` yields ``Comparison.WITHIN_TOLERANCE``.
    """
    try:
        return compare_exact(abs_inner, outer_coeffs, lam, max_denominator), True
    except DenominatorOverflow:
        pass
    abs_inner = as_fraction(abs_inner)
    if abs_inner == 0:
        return Comparison.LESS, False
    diff = log_abs(abs_inner) - circuit_number_log(outer_coeffs, lam)
    if diff > tolerance:
        return Comparison.GREATER, False
    if diff < -tolerance:
        return Comparison.LESS, False
    return Comparison.WITHIN_TOLERANCE, False


def _iroot(x: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer."""
    if x < 2:
        return x
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * r + x // r ** (k - 1)) // k
        if y >= r:
            return r
        r = y


def theta_exact(outer_coeffs, lam, max_denominator=DEFAULT_MAX_DENOMINATOR):
    """The circuit number as a Fraction when it is rational, else ``None``."""
    coeffs, lam = _aligned(outer_coeffs, lam)
    try:
        d, powered = _powered_theta(coeffs, lam, max_denominator)
    except DenominatorOverflow:
        return None
    num, den = _iroot(powered.numerator, d), _iroot(powered.denominator, d)
    if num ** d == powered.numerator and den ** d == powered.denominator:
        return Fraction(num, den)
    return None


def theta_decimal(outer_coeffs, lam, digits=60) -> Decimal:
    """High-precision value of the circuit number."""
    coeffs, lam = _aligned(outer_coeffs, lam)
    with localcontext() as ctx:
        ctx.prec = digits
        log_theta = Decimal(0)
        for c, l in zip(coeffs, lam):
            q = c / l
            term = Decimal(q.numerator).ln() - Decimal(q.denominator).ln()
            log_theta += Decimal(l.numerator) / Decimal(l.denominator) * term
        return log_theta.exp()


# --------------------------------------------------------- circuit polynomial

def _exp(e):
    return tuple(int(v) for v in e)


@dataclass(frozen=True)
class CircuitPolynomial:
    """One circuit polynomial ``sum c_a x^a + c_inner x^inner``.

    Validated on construction; ``lam`` holds the barycentric coordinates
    aligned with ``outer``.
    """

    outer: tuple
    outer_coeffs: tuple
    inner: tuple
    inner_coeff: Fraction
    lam: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        outer = tuple(_exp(a) for a in self.outer)
        coeffs = tuple(as_fraction(c) for c in self.outer_coeffs)
        inner = _exp(self.inner)
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "outer_coeffs", coeffs)
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "inner_coeff", as_fraction(self.inner_coeff))
        if len(coeffs) != len(outer):
            raise DimensionMismatch("one coefficient per outer point required")
        check = is_circuit_support(outer, inner)
        if not check:
            raise InvalidCircuit(check.reason, check.detail)
        if any(c <= 0 for c in coeffs):
            raise NonpositiveOuterCoefficient("outer coefficients must be positive")
        object.__setattr__(self, "lam", check.lam)

    @classmethod
    def from_terms(cls, outer_terms, inner, inner_coeff):
        """Build from a mapping or pair-list ``exponent -> coefficient``."""
        items = list(outer_terms.items()) if isinstance(outer_terms, Mapping) else list(outer_terms)
        return cls(tuple(e for e, _ in items), tuple(c for _, c in items), inner, inner_coeff)

    @classmethod
    def from_polynomial(cls, p: SparsePolynomial) -> "CircuitPolynomial":
        """Read a polynomial whose support is exactly a circuit plus inner term.

        Terms outside the monomial-square part are tried first as the inner
        term; raises :class:`InvalidCircuit` if no choice works.
        """
        signed = signed_partition(p)
        candidates = sorted(signed.a_minus) + sorted(signed.a_plus)
        if len(signed.a_minus) > 1:
            raise InvalidCircuit("NotACircuit", "more than one non-square term")
        last = None
        for beta in candidates:
            outer = sorted(e for e in p.terms if e != beta)
            try:
                return cls(tuple(outer), tuple(p.coefficient(e) for e in outer), beta, p.coefficient(beta))
            except InvalidCircuit as exc:
                last = exc
        raise last or InvalidCircuit("NotACircuit", "empty polynomial")

    @property
    def n(self) -> int:
        return len(self.inner)

    def lambda_map(self) -> dict:
        return dict(zip(self.outer, self.lam))

    def coefficient_map(self) -> dict:
        return dict(zip(self.outer, self.outer_coeffs))

    def log_circuit_number(self) -> float:
        return circuit_number_log(self.outer_coeffs, self.lam)

    def theta_exact(self, max_denominator=DEFAULT_MAX_DENOMINATOR):
        return theta_exact(self.outer_coeffs, self.lam, max_denominator)

    def compare(self, max_denominator=DEFAULT_MAX_DENOMINATOR, tolerance=DEFAULT_TOLERANCE):
        return compare_circuit_number(abs(self.inner_coeff), self.outer_coeffs, self.lam,
                                      max_denominator, tolerance)

    def to_polynomial(self) -> SparsePolynomial:
        terms = list(zip(self.outer, self.outer_coeffs))
        terms.append((self.inner, self.inner_coeff))
        return SparsePolynomial(self.n, terms)

    def permuted(self, sigma) -> "CircuitPolynomial":
        sigma = check_permutation(sigma, self.n)
        return CircuitPolynomial(tuple(permute(sigma, a) for a in self.outer), self.outer_coeffs,
                                 permute(sigma, self.inner), self.inner_coeff)

    def scaled(self, t) -> "CircuitPolynomial":
        t = as_fraction(t)
        if t <= 0:
            raise ValueError("scale factor must be positive")
        return CircuitPolynomial(self.outer, tuple(c * t for c in self.outer_coeffs),
                                 self.inner, self.inner_coeff * t)

    def with_inner_coeff(self, c) -> "CircuitPolynomial":
        return CircuitPolynomial(self.outer, self.outer_coeffs, self.inner, c)

    def to_json(self, include_lambda=True) -> dict:
        out = {
            "outer": [{"exp": list(a), "coef": str(c)} for a, c in zip(self.outer, self.outer_coeffs)],
            "inner": {"exp": list(self.inner), "coef": str(self.inner_coeff)},
        }
        if include_lambda:
            out["lambda"] = [str(v) for v in self.lam]
        return out

    @classmethod
    def from_json(cls, data) -> "CircuitPolynomial":
        """Load circuit JSON; a stored ``lambda`` is cross-checked, never trusted."""
        if isinstance(data, str):
            data = json.loads(data)
        piece = cls(tuple(t["exp"] for t in data["outer"]),
                    tuple(as_fraction(t["coef"]) for t in data["outer"]),
                    data["inner"]["exp"], as_fraction(data["inner"]["coef"]))
        stored = data.get("lambda")
        if stored is not None and tuple(as_fraction(v) for v in stored) != piece.lam:
            raise InvalidCircuit("LambdaMismatch", "stored barycentric coordinates do not match recomputed ones")
        return piece


# ------------------------------------------------------------ classification

@dataclass(frozen=True)
class CircuitVerdict:
    tag: NonnegativityClass
    comparison: Comparison | None
    exact: bool
    log_theta: float

    def to_json(self):
        return {
            "class": self.tag.value,
            "comparison": self.comparison.value if self.comparison else None,
            "exact": self.exact,
            "log_theta": self.log_theta,
        }


_FROM_COMPARISON = {
    Comparison.LESS: NonnegativityClass.STRICTLY_INSIDE,
    Comparison.EQUAL: NonnegativityClass.BOUNDARY,
    Comparison.WITHIN_TOLERANCE: NonnegativityClass.BOUNDARY,
    Comparison.GREATER: NonnegativityClass.NOT_NONNEGATIVE,
}


def circuit_verdict(data: CircuitPolynomial, max_denominator=DEFAULT_MAX_DENOMINATOR,
                    tolerance=DEFAULT_TOLERANCE) -> CircuitVerdict:
    log_theta = data.log_circuit_number()
    c = data.inner_coeff
    # a positive inner coefficient is only harmless if the inner monomial is a square
    if c == 0 or (c > 0 and is_even(data.inner)):
        return CircuitVerdict(NonnegativityClass.INNER_NONNEGATIVE, None, True, log_theta)
    comparison, exact = data.compare(max_denominator, tolerance)
    return CircuitVerdict(_FROM_COMPARISON[comparison], comparison, exact, log_theta)


def classify(data: CircuitPolynomial, max_denominator=DEFAULT_MAX_DENOMINATOR,
             tolerance=DEFAULT_TOLERANCE) -> NonnegativityClass:
    return circuit_verdict(data, max_denominator, tolerance).tag


# ---------------------------------------------------------- support reduction

def default_sigma_choice(n):
    """The ``n+1`` lexicographically smallest permutations (cycled if n! < n+1)."""
    perms = list(itertools.islice(all_permutations(n), n + 1))
    return [perms[j % len(perms)] for j in range(n + 1)]


def _inner_coefficient_for_reduction(f, verdict, k):
    """``c_inner * k / theta_f`` as a rational that keeps f's classification."""
    c = f.inner_coeff
    if c == 0:
        return Fraction(0)
    theta = f.theta_exact()
    if theta is not None:
        return c * k / theta
    sign = 1 if c > 0 else -1
    if verdict.comparison is Comparison.WITHIN_TOLERANCE:
        return Fraction(sign * k)
    approx = Fraction(abs(c)) * k / Fraction(theta_decimal(f.outer_coeffs, f.lam))
    approx = approx.limit_denominator(10 ** 30)
    nudge = Fraction(1, 10 ** 40)
    if verdict.comparison is Comparison.LESS and approx >= k:
        approx = k - nudge
    elif verdict.comparison is Comparison.GREATER and approx <= k:
        approx = k + nudge
    return sign * approx


def support_reduction(f: CircuitPolynomial, alpha_tilde, sigma_choice=None) -> CircuitPolynomial:
    """Move a circuit onto permutations of a single even exponent.

    The new outer points are ``sigma_j(alpha_tilde)`` for the ``n+1`` chosen
    permutations (coinciding images are merged and their unit coefficients
    added), the new inner point is

        sum_j sigma_j(alpha_tilde)/(n+1) - sum_a lam_a * a + inner

    and the new inner coefficient is ``c_inner * (n+1) / theta_f``. The result
    has circuit number ``n+1``, so its classification equals ``f``'s.
    """
    n = f.n
    alpha_tilde = _exp(alpha_tilde)
    if len(alpha_tilde) != n:
        raise DimensionMismatch("alpha_tilde has the wrong length")
    if not is_even(alpha_tilde):
        raise ValueError("alpha_tilde must have all-even entries")
    if sigma_choice is None:
        sigma_choice = default_sigma_choice(n)
    sigma_choice = [check_permutation(s, n) for s in sigma_choice]
    if len(sigma_choice) != n + 1:
        raise ValueError(f"need exactly {n + 1} permutations")
    k = n + 1
    images = [permute(s, alpha_tilde) for s in sigma_choice]
    shift = [sum(Fraction(l) * a[i] for a, l in zip(f.outer, f.lam)) for i in range(n)]
    beta_t = [Fraction(sum(img[i] for img in images), k) - shift[i] + f.inner[i] for i in range(n)]
    if any(b.denominator != 1 or b < 0 for b in beta_t):
        raise NonLatticeInnerPoint(f"new inner point {tuple(str(b) for b in beta_t)} is not in N^n")
    beta_t = tuple(int(b) for b in beta_t)

    c = f.inner_coeff
    if c > 0 and is_even(f.inner) != is_even(beta_t):
        raise ParityMismatch("positive inner coefficient with differing parity of inner exponents")

    counts = Counter(images)
    outer = tuple(sorted(counts))
    verdict = circuit_verdict(f)
    try:
        g = CircuitPolynomial(outer, tuple(Fraction(counts[a]) for a in outer), beta_t,
                              _inner_coefficient_for_reduction(f, verdict, k))
    except InvalidCircuit as exc:
        raise DegenerateSupport(f"merged images do not form a circuit: {exc.reason}") from None
    return g
