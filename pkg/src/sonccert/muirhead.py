"""Muirhead inequality checks and Caratheodory decompositions over orbits."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import linalg
from .circuit import (
    DEFAULT_MAX_DENOMINATOR,
    DEFAULT_TOLERANCE,
    Comparison,
    circuit_verdict,
)
from .errors import DimensionMismatch, NotInPolytope, PositiveInnerCoefficient
from .symmetry import inverse, multiset_permutations, permutation_to, permute


def _check_pair(alpha, beta):
    alpha, beta = tuple(alpha), tuple(beta)
    if len(alpha) != len(beta):
        raise DimensionMismatch("alpha and beta differ in length")
    return alpha, beta


def majorizes(alpha, beta) -> bool:
    """True iff ``alpha`` majorizes ``beta``: equal totals, and each prefix sum of
    ``beta`` sorted descending is at most that of ``alpha``."""
    alpha, beta = _check_pair(alpha, beta)
    if sum(alpha) != sum(beta):
        return False
    sa, sb = 0, 0
    for a, b in zip(sorted(alpha, reverse=True), sorted(beta, reverse=True)):
        sa += a
        sb += b
        if sb > sa:
            return False
    return True


def in_permutation_polytope(beta, alpha) -> bool:
    """Is ``beta`` in the convex hull of all coordinate permutations of ``alpha``?

    Decided by majorization (Rado's theorem).
    """
    return majorizes(alpha, beta)


@dataclass(frozen=True)
class CaratheodoryDecomposition:
    """``beta = sum_j weight_j * sigma_j(alpha)`` with affinely independent points."""

    alpha: tuple
    beta: tuple
    terms: tuple  # ((sigma, weight), ...)

    @property
    def n(self):
        return len(self.alpha)

    def points(self):
        return [permute(s, self.alpha) for s, _ in self.terms]

    def weights(self):
        return [w for _, w in self.terms]

    def reconstruct(self):
        return tuple(sum(w * p[i] for p, w in zip(self.points(), self.weights())) for i in range(self.n))

    def is_valid(self) -> bool:
        ws = self.weights()
        if not ws or any(not 0 < w <= 1 for w in ws) or sum(ws) != 1:
            return False
        if self.reconstruct() != tuple(Fraction(b) for b in self.beta):
            return False
        pts = self.points()
        rows = [[p[i] for p in pts] for i in range(self.n)] + [[1] * len(pts)]
        return linalg.rank(rows) == len(pts)

    def to_json(self):
        return {
            "alpha": list(self.alpha),
            "beta": list(self.beta),
            "terms": [{"sigma": list(s), "point": list(permute(s, self.alpha)), "weight": str(w)}
                      for s, w in self.terms],
        }


def _argsort_desc(v):
    # stable, so equal entries keep their order
    return tuple(sorted(range(len(v)), key=lambda i: -v[i]))


def _t_transform_combination(alpha_sorted, beta_sorted):
    """Convex combination of permutations of ``alpha_sorted`` equal to
    ``beta_sorted`` (both weakly decreasing), built from T-transforms."""
    x = list(alpha_sorted)
    combo = {tuple(x): Fraction(1)}
    n = len(x)
    while x != list(beta_sorted):
        j = max(i for i in range(n) if x[i] > beta_sorted[i])
        k = min(i for i in range(j + 1, n) if x[i] < beta_sorted[i])
        delta = min(x[j] - beta_sorted[j], beta_sorted[k] - x[k])
        lam = 1 - Fraction(delta, x[j] - x[k])
        new = {}
        for v, w in combo.items():
            new[v] = new.get(v, 0) + lam * w
            if lam != 1:
                sw = list(v)
                sw[j], sw[k] = sw[k], sw[j]
                sw = tuple(sw)
                new[sw] = new.get(sw, 0) + (1 - lam) * w
        combo = {v: w for v, w in new.items() if w}
        x[j] -= delta
        x[k] += delta
    return combo


def caratheodory_reduce(combo):
    """Drop points from a convex combination until the rest are affinely
    independent (classical Caratheodory step). ``combo`` maps point -> weight."""
    combo = dict(sorted(combo.items()))
    while True:
        pts = list(combo)
        n = len(pts[0])
        rows = [[p[i] for p in pts] for i in range(n)] + [[1] * len(pts)]
        null = linalg.nullspace(rows)
        if not null:
            return combo
        mu = null[0]
        if not any(m > 0 for m in mu):
            mu = [-m for m in mu]
        t = min(combo[p] / m for p, m in zip(pts, mu) if m > 0)
        combo = {p: combo[p] - t * m for p, m in zip(pts, mu)}
        combo = {p: w for p, w in combo.items() if w != 0}


def caratheodory_decomposition(beta, alpha) -> CaratheodoryDecomposition:
    """Write ``beta`` as a convex combination of at most ``n+1`` (in fact at
    most ``n``) affinely independent permutations of ``alpha``.

    Deterministic: T-transforms on the sorted vectors give an initial
    combination, which is then Caratheodory-reduced; each point is labelled
    with the lexicographically smallest permutation producing it.
    """
    alpha, beta = _check_pair(alpha, beta)
    if not in_permutation_polytope(beta, alpha):
        raise NotInPolytope(f"{beta} is not in the permutation polytope of {alpha}")
    pa, pb = _argsort_desc(alpha), _argsort_desc(beta)
    alpha_sorted, beta_sorted = permute(pa, alpha), permute(pb, beta)
    combo = _t_transform_combination(alpha_sorted, beta_sorted)
    back = inverse(pb)
    combo = {permute(back, v): w for v, w in combo.items()}
    combo = caratheodory_reduce(combo)
    terms = sorted((permutation_to(alpha, p), w) for p, w in combo.items())
    return CaratheodoryDecomposition(alpha, beta, tuple(terms))


# ------------------------------------------------------------------- gaps

def _check_point(x, n):
    if len(x) != n:
        raise DimensionMismatch(f"point has {len(x)} coordinates, expected {n}")
    x = [float(v) for v in x]
    if any(v < 0 for v in x):
        raise ValueError("Muirhead inequalities need a nonnegative point")
    return x


def symmetric_sum(gamma, x) -> float:
    """``sum over all sigma in S_n of x^sigma(gamma)``, via distinct orbit
    elements weighted by their multiplicity."""
    elems = list(multiset_permutations(gamma))
    mult = factorial(len(gamma)) // len(elems)
    total = 0.0
    for e in elems:
        term = 1.0
        for xi, k in zip(x, e):
            if k:
                term *= xi ** k
        total += term
    return mult * total


def muirhead_gap(alpha, beta, x) -> float:
    """Right side minus left side of Muirhead's inequality at ``x >= 0``."""
    alpha, beta = _check_pair(alpha, beta)
    if not in_permutation_polytope(beta, alpha):
        raise NotInPolytope(f"{beta} is not in the permutation polytope of {alpha}")
    x = _check_point(x, len(alpha))
    return symmetric_sum(alpha, x) - symmetric_sum(beta, x)


def generalized_muirhead_gap(alpha, decomp: CaratheodoryDecomposition, b, x) -> float:
    """Gap of the weighted Muirhead inequality

        sum_tau prod_j b_j**lam_j x^tau(beta) <= sum_tau sum_j b_j lam_j x^tau(alpha)

    for the weights ``lam_j`` of ``decomp``. ``b`` has one entry per term of
    the decomposition, or ``n+1`` entries whose surplus belongs to zero-weight
    terms. Requires ``n >= 3``.
    """
    alpha = tuple(alpha)
    if alpha != tuple(decomp.alpha):
        raise ValueError("decomposition was built for a different alpha")
    n = len(alpha)
    if n < 3:
        raise ValueError("the generalized inequality is stated for n >= 3 only")
    lam = decomp.weights()
    if len(b) not in (len(lam), n + 1) or len(b) < len(lam):
        raise DimensionMismatch(f"need {len(lam)} or {n + 1} scalars, got {len(b)}")
    b = [float(v) for v in b][:len(lam)]
    if any(v < 0 for v in b):
        raise ValueError("scalars b_j must be nonnegative")
    x = _check_point(x, n)
    if any(bj == 0 for bj in b):
        geo = 0.0
    else:
        geo = math.exp(sum(float(l) * math.log(bj) for l, bj in zip(lam, b)))
    arith = float(sum(Fraction(bj) * l for bj, l in zip(b, lam)))
    return arith * symmetric_sum(alpha, x) - geo * symmetric_sum(decomp.beta, x)


@dataclass(frozen=True)
class PieceCheck:
    index: int
    inner: tuple
    comparison: Comparison | None
    exact: bool
    ok: bool

    def to_json(self):
        return {"index": self.index, "inner": list(self.inner),
                "comparison": self.comparison.value if self.comparison else None,
                "exact": self.exact, "ok": self.ok}


def symmetric_condition_check(pieces, max_denominator=DEFAULT_MAX_DENOMINATOR,
                              tolerance=DEFAULT_TOLERANCE):
    """Circuit-number condition once per orbit piece.

    Returns ``(ok, reports)``. The condition is invariant under permuting a
    piece, so one check covers the piece's whole orbit.
    """
    reports = []
    for i, piece in enumerate(pieces):
        if piece.inner_coeff > 0:
            raise PositiveInnerCoefficient(f"piece {i} has inner coefficient {piece.inner_coeff} > 0")
        v = circuit_verdict(piece, max_denominator, tolerance)
        reports.append(PieceCheck(i, piece.inner, v.comparison, v.exact, v.tag.nonnegative))
    return all(r.ok for r in reports), reports
