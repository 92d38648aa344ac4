"""Search for SONC decompositions.

The search is sound but incomplete: every certificate it returns has passed
exact verification, and ``None`` means "unknown", not "not SONC".

Coefficient allocation runs in stages. Pieces with proportional shares
``w_{C,a} = lam_a * d_C`` sit on the boundary of nonnegativity and verify
exactly; the first stage tries one such circuit per inner exponent, the second
solves an exact LP over all circuits for the shares ``d_C``. If both fail, a
multiplicative rebalancing heuristic in floating point tries to maximize the
smallest slack ``log theta_C - log d_C`` and the result is rounded to
rationals and re-verified.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import linalg
from .certificate import SoncCertificate, SymmetricSoncCertificate, verify, verify_symmetric
from .circuit import DEFAULT_MAX_DENOMINATOR, DEFAULT_TOLERANCE, CircuitPolynomial, is_circuit_support
from .errors import InputNotSymmetric
from .poly import SparsePolynomial, signed_partition
from .symmetry import GROUP_SUM, canonical, is_symmetric, orbit_size, permute, stabilizer

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CircuitSupport:
    outer: tuple
    inner: tuple
    lam: tuple


@dataclass
class DecomposeOptions:
    max_iter: int = 500
    step: float = 0.5
    margin: float = 1e-9
    limit_denominator: int = 10 ** 12
    exact_lp: bool = True
    max_denominator: int = DEFAULT_MAX_DENOMINATOR
    tolerance: float = DEFAULT_TOLERANCE


def _in_box(points, beta):
    return all(min(p[i] for p in points) <= b <= max(p[i] for p in points) for i, b in enumerate(beta))


def enumerate_circuits(a_plus, beta) -> list:
    """All circuits ``(C, beta)`` with ``C`` a subset of ``a_plus``.

    Subsets of size 2..n+1 in lexicographic order; a subset is skipped when
    ``beta`` falls outside its coordinate bounding box.
    """
    beta = tuple(beta)
    pts = sorted(tuple(a) for a in a_plus)
    out = []
    for size in range(2, len(beta) + 2):
        for subset in itertools.combinations(pts, size):
            if not _in_box(subset, beta):
                continue
            check = is_circuit_support(subset, beta)
            if check:
                out.append(CircuitSupport(subset, beta, check.lam))
    return out


# ---------------------------------------------------------------- allocation

@dataclass
class AllocationProblem:
    """Budgets are per resource; ``resource_of`` maps an outer exponent to its
    resource (the exponent itself, or its orbit in the symmetric case)."""

    budget: dict
    demands: dict
    catalog: dict
    resource_of: object = None

    def resource(self, alpha):
        return alpha if self.resource_of is None else self.resource_of(alpha)


@dataclass
class Allocation:
    entries: list  # [(CircuitSupport, (w_a, ...), d)]
    leftover: dict
    stage: str
    min_slack: float = 0.0


@dataclass
class SearchResult:
    certificate: object
    stage: str = "none"
    min_slack: float = -math.inf
    circuits: int = 0
    report: object = None
    messages: list = field(default_factory=list)


def _circuits(problem):
    return [(beta, c) for beta in sorted(problem.demands) for c in problem.catalog[beta]]


def _proportional_entries(problem, chosen):
    """Entries and leftovers for ``w_{C,a} = lam_a * d_C``, or None if over budget."""
    used = {r: Fraction(0) for r in problem.budget}
    entries = []
    for c, dk in chosen:
        if dk == 0:
            continue
        w = tuple(l * dk for l in c.lam)
        for a, wa in zip(c.outer, w):
            used[problem.resource(a)] += wa
        entries.append((c, w, dk))
    if any(used[r] > problem.budget[r] for r in used):
        return None
    return entries, {r: problem.budget[r] - used[r] for r in used}


def allocate_single(problem: AllocationProblem, max_combinations=5000):
    """One circuit per inner exponent, proportional shares; tries combinations
    in lexicographic catalog order and returns the first that fits."""
    betas = sorted(problem.demands)
    combos = itertools.product(*(problem.catalog[b] for b in betas))
    for combo in itertools.islice(combos, max_combinations):
        got = _proportional_entries(problem, [(c, problem.demands[b]) for b, c in zip(betas, combo)])
        if got is not None:
            return Allocation(got[0], got[1], "single-circuit", 0.0)
    return None


def allocate_exact(problem: AllocationProblem):
    """Exact LP stage: proportional shares ``w_{C,a} = lam_a * d_C``."""
    circuits = _circuits(problem)
    if not circuits:
        return None
    betas = sorted(problem.demands)
    resources = sorted(problem.budget)
    a_eq = [[1 if beta == b else 0 for b, _ in circuits] for beta in betas]
    b_eq = [problem.demands[beta] for beta in betas]
    a_ub = []
    for r in resources:
        row = []
        for _, c in circuits:
            row.append(sum((l for a, l in zip(c.outer, c.lam) if problem.resource(a) == r), Fraction(0)))
        a_ub.append(row)
    b_ub = [problem.budget[r] for r in resources]
    d = linalg.feasible_point(a_eq, b_eq, a_ub, b_ub)
    if d is None:
        return None
    entries, leftover = _proportional_entries(problem, [(c, dk) for (_, c), dk in zip(circuits, d)])
    return Allocation(entries, leftover, "exact-lp", 0.0)


def allocate_heuristic(problem: AllocationProblem, opts: DecomposeOptions):
    """Multiplicative rebalancing of circuit weights ``mu_C``.

    Outer coefficients are split as ``w_{C,a} ~ mu_C * lam_{C,a}`` within each
    resource, inner demands as ``d_C ~ theta_C`` within each inner exponent.
    Circuits whose inner exponent has low slack get their weight raised.
    """
    circuits = _circuits(problem)
    if not circuits:
        return None
    budget = {r: float(v) for r, v in problem.budget.items()}
    demand = {b: float(v) for b, v in problem.demands.items()}
    lam = [[float(l) for l in c.lam] for _, c in circuits]
    res = [[problem.resource(a) for a in c.outer] for _, c in circuits]

    def log_theta(k, w):
        return sum(l * (math.log(wa) - math.log(l)) for l, wa in zip(lam[k], w[k]))

    # potential with full budgets
    pot = [math.exp(sum(l * (math.log(budget[r]) - math.log(l)) for l, r in zip(lam[k], res[k])))
           for k in range(len(circuits))]
    mu = []
    for k, (beta, _) in enumerate(circuits):
        total = sum(pot[j] for j, (b, _) in enumerate(circuits) if b == beta)
        mu.append(demand[beta] * pot[k] / total)

    def shares(mu):
        denom = {}
        for k in range(len(circuits)):
            for l, r in zip(lam[k], res[k]):
                denom[r] = denom.get(r, 0.0) + mu[k] * l
        return [[budget[r] * mu[k] * l / denom[r] for l, r in zip(lam[k], res[k])]
                for k in range(len(circuits))]

    best = (-math.inf, None)
    for _ in range(max(1, opts.max_iter)):
        w = shares(mu)
        lt = [log_theta(k, w) for k in range(len(circuits))]
        slack = {}
        for beta in demand:
            s = sum(math.exp(lt[k]) for k, (b, _) in enumerate(circuits) if b == beta)
            slack[beta] = math.log(s) - math.log(demand[beta]) if s > 0 else -math.inf
        worst = min(slack.values())
        if worst > best[0]:
            best = (worst, w)
        if worst >= opts.margin:
            break
        mu = [m * math.exp(-opts.step * slack[circuits[k][0]]) for k, m in enumerate(mu)]
        top = max(mu)
        mu = [max(m / top, 1e-300) for m in mu]
    worst, w = best
    return _rationalize(problem, circuits, w, opts, worst)


def _rationalize(problem, circuits, w, opts, worst):
    """Round float shares to rationals that sum exactly to the budgets."""
    by_resource = {}
    for k, (_, c) in enumerate(circuits):
        for i, a in enumerate(c.outer):
            by_resource.setdefault(problem.resource(a), []).append((k, i))
    wr = [[None] * len(c.outer) for _, c in circuits]
    for r, slots in by_resource.items():
        remaining = problem.budget[r]
        for k, i in slots[:-1]:
            q = Fraction(w[k][i]).limit_denominator(opts.limit_denominator)
            wr[k][i] = q
            remaining -= q
        k, i = slots[-1]
        wr[k][i] = remaining
    if any(v <= 0 for row in wr for v in row):
        return None
    entries = []
    for beta in sorted(problem.demands):
        ks = [k for k, (b, _) in enumerate(circuits) if b == beta]
        thetas = [math.exp(sum(float(l) * (math.log(float(v)) - math.log(float(l)))
                               for l, v in zip(circuits[k][1].lam, wr[k]))) for k in ks]
        total = sum(thetas)
        remaining = problem.demands[beta]
        ds = []
        for t in thetas[:-1]:
            q = Fraction(float(problem.demands[beta]) * t / total).limit_denominator(opts.limit_denominator)
            ds.append(q)
            remaining -= q
        ds.append(remaining)
        if any(v <= 0 for v in ds):
            return None
        for k, dk in zip(ks, ds):
            entries.append((circuits[k][1], tuple(wr[k]), dk))
    return Allocation(entries, {r: Fraction(0) for r in problem.budget}, "heuristic", worst)


def _allocations(problem, opts):
    """Candidate allocations, cheapest and sparsest first."""
    if opts.exact_lp:
        for stage in (allocate_single, allocate_exact):
            alloc = stage(problem)
            if alloc is not None:
                yield alloc
                break
    alloc = allocate_heuristic(problem, opts)
    if alloc is not None:
        yield alloc


def _pieces(allocation, signs):
    return tuple(CircuitPolynomial(c.outer, w, c.inner, signs[c.inner] * d) for c, w, d in allocation.entries)


# ------------------------------------------------------------------- search

def search(p: SparsePolynomial, opts: DecomposeOptions | None = None) -> SearchResult:
    """Plain SONC search with diagnostics; see :func:`decompose`."""
    opts = opts or DecomposeOptions()
    signed = signed_partition(p)
    squares_only = tuple((e, p.coefficient(e)) for e in sorted(signed.a_plus))
    if not signed.a_minus:
        cert = SoncCertificate((), squares_only)
        return SearchResult(cert, "squares", math.inf, 0, verify(p, cert))
    catalog = {beta: enumerate_circuits(signed.a_plus, beta) for beta in sorted(signed.a_minus)}
    ncirc = sum(len(v) for v in catalog.values())
    empty = [b for b, cs in catalog.items() if not cs]
    if empty:
        return SearchResult(None, "no-circuit", -math.inf, ncirc,
                            messages=[f"no circuit has inner point {b}" for b in empty])
    problem = AllocationProblem({a: p.coefficient(a) for a in signed.a_plus},
                                {b: abs(p.coefficient(b)) for b in signed.a_minus}, catalog)
    signs = {b: (1 if p.coefficient(b) > 0 else -1) for b in signed.a_minus}
    best = SearchResult(None, "unknown", -math.inf, ncirc)
    for alloc in _allocations(problem, opts):
        squares = tuple((a, v) for a, v in sorted(alloc.leftover.items()) if v > 0)
        cert = SoncCertificate(_pieces(alloc, signs), squares)
        report = verify(p, cert, opts.max_denominator, opts.tolerance)
        log.debug("stage %s: %s (min slack %.3g)", alloc.stage, report.verdict.value, alloc.min_slack)
        if report.verified:
            return SearchResult(cert, alloc.stage, alloc.min_slack, ncirc, report)
        if alloc.min_slack > best.min_slack:
            best = SearchResult(None, "unknown", alloc.min_slack, ncirc, report)
    return best


def decompose(p: SparsePolynomial, opts: DecomposeOptions | None = None):
    """Return an exactly verified :class:`SoncCertificate` for ``p`` or ``None``."""
    return search(p, opts).certificate


def symmetric_catalog(a_plus, beta):
    """Circuits with inner point ``beta`` over ``a_plus``, one per class under
    the stabilizer of ``beta``."""
    stab = stabilizer(beta)
    out = []
    for c in enumerate_circuits(a_plus, beta):
        key = tuple(sorted(c.outer))
        if all(tuple(sorted(permute(s, a) for a in c.outer)) >= key for s in stab):
            out.append(c)
    return out


def search_symmetric(p: SparsePolynomial, opts: DecomposeOptions | None = None) -> SearchResult:
    """Orbit-reduced search; see :func:`decompose_symmetric`."""
    opts = opts or DecomposeOptions()
    if not is_symmetric(p):
        raise InputNotSymmetric("polynomial is not invariant under permuting variables")
    n = p.n
    nfact = factorial(n)
    signed = signed_partition(p)
    plus_reps = sorted({canonical(a) for a in signed.a_plus}, reverse=True)
    minus_reps = sorted({canonical(b) for b in signed.a_minus}, reverse=True)
    scaled_budget = {r: p.coefficient(r) * orbit_size(r) / nfact for r in plus_reps}
    if not minus_reps:
        sym = SymmetricSoncCertificate((), GROUP_SUM, tuple(sorted(scaled_budget.items())))
        return SearchResult(sym, "squares", math.inf, 0, verify_symmetric(p, sym))
    catalog = {b: symmetric_catalog(signed.a_plus, b) for b in minus_reps}
    ncirc = sum(len(v) for v in catalog.values())
    empty = [b for b, cs in catalog.items() if not cs]
    if empty:
        return SearchResult(None, "no-circuit", -math.inf, ncirc,
                            messages=[f"no circuit has inner point {b}" for b in empty])
    demands = {b: abs(p.coefficient(b)) * orbit_size(b) / nfact for b in minus_reps}
    problem = AllocationProblem(scaled_budget, demands, catalog, canonical)
    signs = {b: (1 if p.coefficient(b) > 0 else -1) for b in minus_reps}
    best = SearchResult(None, "unknown", -math.inf, ncirc)
    for alloc in _allocations(problem, opts):
        squares = tuple((r, v) for r, v in sorted(alloc.leftover.items()) if v > 0)
        sym = SymmetricSoncCertificate(_pieces(alloc, signs), GROUP_SUM, squares)
        report = verify_symmetric(p, sym, opts.max_denominator, opts.tolerance)
        if report.verified:
            return SearchResult(sym, alloc.stage, alloc.min_slack, ncirc, report)
        if alloc.min_slack > best.min_slack:
            best = SearchResult(None, "unknown", alloc.min_slack, ncirc, report)
    return best


def decompose_symmetric(p: SparsePolynomial, opts: DecomposeOptions | None = None):
    """Orbit-level certificate (group-sum mode) for a symmetric ``p``, or ``None``.

    Works on one inner exponent per orbit and one circuit per stabilizer
    class, with budgets and demands scaled by orbit size over n!.
    """
    return search_symmetric(p, opts).certificate
