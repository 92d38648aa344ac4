"""Independent brute-force and sampling checks.

Nothing here relies on circuit numbers or majorization, so these functions
can be used to cross-examine the rest of the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .errors import BudgetExceeded, DimensionTooLarge
from .poly import SparsePolynomial, evaluate, evaluate_exact
from .symmetry import multiset_permutations

WITNESS_THRESHOLD = -1e-12


@dataclass(frozen=True)
class FalsificationConfig:
    samples: int = 10_000
    box_radius: float = 4.0
    refine_steps: int = 200
    seed: int = 0
    nonnegative_orthant: bool = False
    log_decades: float = 6.0


@dataclass(frozen=True)
class Witness:
    point: tuple
    value: Fraction

    def to_json(self):
        return {"point": [str(v) for v in self.point], "value": str(self.value),
                "value_float": float(self.value)}


class _Evaluator:
    def __init__(self, p: SparsePolynomial):
        items = p.sorted_terms()
        self.n = p.n
        self.exps = np.array([e for e, _ in items], dtype=float).reshape(len(items), p.n)
        self.coefs = np.array([float(c) for _, c in items])

    def __call__(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if not len(self.coefs):
            return np.zeros(len(pts))
        with np.errstate(over="ignore", invalid="ignore"):
            mons = np.prod(pts[:, None, :] ** self.exps[None, :, :], axis=2)
            vals = mons @ self.coefs
        return np.where(np.isfinite(vals), vals, np.inf)


def _samples(cfg: FalsificationConfig, n, rng):
    half = cfg.samples // 2
    lo = 0.0 if cfg.nonnegative_orthant else -cfg.box_radius
    uniform = rng.uniform(lo, cfg.box_radius, size=(half, n))
    mags = cfg.box_radius * np.exp(-rng.uniform(0.0, cfg.log_decades * np.log(10.0),
                                                size=(cfg.samples - half, n)))
    if cfg.nonnegative_orthant:
        signs = 1.0
    else:
        signs = rng.choice([-1.0, 1.0], size=mags.shape)
    return np.vstack([uniform, mags * signs])


def _refine(f, x, steps, nonneg):
    """Coordinate descent with shrinking relative steps."""
    x = np.array(x, dtype=float)
    fx = f(x)[0]
    h = 0.5
    n = len(x)
    for _ in range(steps):
        if h < 1e-12:
            break
        improved = False
        for i in range(n):
            scale = max(abs(x[i]), 1e-6)
            cands = np.repeat(x[None, :], 4, axis=0)
            cands[0, i] += h * scale
            cands[1, i] -= h * scale
            cands[2, i] *= 1 + h
            cands[3, i] /= 1 + h
            if nonneg:
                cands[:, i] = np.maximum(cands[:, i], 0.0)
            vals = f(cands)
            j = int(np.argmin(vals))
            if vals[j] < fx:
                x, fx = cands[j], vals[j]
                improved = True
        if not improved:
            h /= 2
    return x, fx


def _exact_witness(p, x):
    for den in (10 ** 6, 10 ** 9, None):
        q = tuple(Fraction(float(v)) if den is None else Fraction(float(v)).limit_denominator(den) for v in x)
        val = evaluate_exact(p, q)
        if val < 0 and float(val) < WITNESS_THRESHOLD:
            return Witness(q, val)
    return None


def falsify(p: SparsePolynomial, cfg: FalsificationConfig | None = None):
    """Search for a point where ``p`` is negative.

    Uniform and log-uniform samples in the box, then coordinate descent from
    the best few. A witness is only reported after exact re-evaluation at a
    nearby rational point confirms ``p < -1e-12``. Returns :class:`Witness`
    or ``None``.
    """
    cfg = cfg or FalsificationConfig()
    if p.is_zero():
        return None
    if p.n == 0:
        c = p.coefficient(())
        return Witness((), c) if c < 0 and float(c) < WITNESS_THRESHOLD else None
    rng = np.random.default_rng(cfg.seed)
    f = _Evaluator(p)
    pts = _samples(cfg, p.n, rng)
    vals = np.concatenate([f(chunk) for chunk in np.array_split(pts, max(1, len(pts) // 4096))])
    order = np.argsort(vals, kind="stable")[:5]
    for idx in order:
        if vals[idx] < WITNESS_THRESHOLD:
            w = _exact_witness(p, pts[idx])
            if w is not None:
                return w
    for idx in order:
        x, fx = _refine(f, pts[idx], cfg.refine_steps, cfg.nonnegative_orthant)
        if fx < WITNESS_THRESHOLD:
            w = _exact_witness(p, x)
            if w is not None:
                return w
    return None


def permutohedron_membership_bruteforce(beta, alpha, max_n=6) -> bool:
    """Exact LP feasibility of ``beta`` as a convex combination of every
    coordinate permutation of ``alpha``."""
    alpha, beta = tuple(alpha), tuple(beta)
    n = len(alpha)
    if len(beta) != n:
        raise ValueError("alpha and beta differ in length")
    if n > max_n:
        raise DimensionTooLarge(f"n = {n} exceeds {max_n}")
    verts = list(multiset_permutations(alpha))
    a_eq = [[v[i] for v in verts] for i in range(n)] + [[1] * len(verts)]
    b_eq = list(beta) + [1]
    return linalg.feasible_point(a_eq, b_eq) is not None


def min_on_grid(p: SparsePolynomial, box_radius: float, steps_per_axis: int, budget: int = 10 ** 7):
    """Exhaustive minimum over the grid ``linspace(-R, R, steps)^n``.

    Returns ``(point, value)``.
    """
    total = steps_per_axis ** p.n
    if total > budget:
        raise BudgetExceeded(f"{total} grid points exceed budget {budget}")
    if p.n == 0:
        return (), evaluate(p, ())
    axis = np.linspace(-box_radius, box_radius, steps_per_axis)
    f = _Evaluator(p)
    rest = np.stack(np.meshgrid(*([axis] * (p.n - 1)), indexing="ij"), axis=-1).reshape(-1, p.n - 1) \
        if p.n > 1 else np.zeros((1, 0))
    best_val, best_pt = np.inf, None
    for x1 in axis:
        pts = np.hstack([np.full((len(rest), 1), x1), rest])
        vals = f(pts)
        j = int(np.argmin(vals))
        if vals[j] < best_val:
            best_val, best_pt = float(vals[j]), tuple(float(v) for v in pts[j])
    return best_pt, best_val
