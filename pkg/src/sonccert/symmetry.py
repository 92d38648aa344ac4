"""Symmetric-group action on exponents and polynomials.

A permutation is a tuple ``sigma`` of 0-based indices; it acts on an exponent
vector by ``sigma(alpha) = (alpha[sigma[0]], ..., alpha[sigma[n-1]])``, and on
a polynomial by acting on every exponent.
"""
from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass
from math import factorial, prod

from .errors import DimensionMismatch
from .poly import SparsePolynomial


class SymmetrizationMode(enum.Enum):
    GROUP_SUM = "group"
    ORBIT_SUM = "orbit"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


GROUP_SUM = SymmetrizationMode.GROUP_SUM
ORBIT_SUM = SymmetrizationMode.ORBIT_SUM


def check_permutation(sigma, n=None):
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(len(sigma))):
        raise ValueError(f"{sigma} is not a permutation of 0..{len(sigma) - 1}")
    if n is not None and len(sigma) != n:
        raise DimensionMismatch(f"permutation of length {len(sigma)} for {n} variables")
    return sigma


def identity(n):
    return tuple(range(n))


def transposition(n, i, j):
    s = list(range(n))
    s[i], s[j] = s[j], s[i]
    return tuple(s)


def permute(sigma, alpha):
    """``sigma(alpha)``."""
    return tuple(alpha[i] for i in sigma)


def then(sigma, tau):
    """Single permutation equal to acting with ``sigma`` and then ``tau``."""
    return tuple(sigma[t] for t in tau)


def inverse(sigma):
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    return tuple(inv)


def all_permutations(n):
    """All of S_n in lexicographic order."""
    return itertools.permutations(range(n))


def multiset_permutations(seq):
    """Distinct permutations of ``seq`` in lexicographic order.

    Classic next-permutation successor, so repeated entries never produce
    duplicates and the cost is proportional to the orbit size, not n!.
    """
    a = sorted(seq)
    n = len(a)
    while True:
        yield tuple(a)
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])


def orbit_size(alpha) -> int:
    return factorial(len(alpha)) // prod(factorial(m) for m in Counter(alpha).values())


def canonical(alpha):
    """Orbit representative: entries sorted weakly decreasing."""
    return tuple(sorted(alpha, reverse=True))


@dataclass(frozen=True)
class Orbit:
    representative: tuple
    elements: tuple
    size: int

    def __contains__(self, alpha):
        return canonical(alpha) == self.representative

    def to_json(self):
        return {
            "representative": list(self.representative),
            "size": self.size,
            "elements": [list(e) for e in self.elements],
        }


def orbit(alpha) -> Orbit:
    alpha = tuple(alpha)
    elements = tuple(multiset_permutations(alpha))
    return Orbit(canonical(alpha), elements, len(elements))


def permutation_to(alpha, target):
    """Lexicographically smallest ``sigma`` with ``sigma(alpha) == target``."""
    alpha, target = tuple(alpha), tuple(target)
    if sorted(alpha) != sorted(target):
        raise ValueError(f"{target} is not a permutation of {alpha}")
    used = [False] * len(alpha)
    sigma = []
    for t in target:
        k = next(i for i in range(len(alpha)) if not used[i] and alpha[i] == t)
        used[k] = True
        sigma.append(k)
    return tuple(sigma)


def stabilizer(alpha):
    """All permutations fixing ``alpha`` (lexicographic order)."""
    alpha = tuple(alpha)
    return [s for s in all_permutations(len(alpha)) if permute(s, alpha) == alpha]


def apply_permutation(sigma, p: SparsePolynomial) -> SparsePolynomial:
    sigma = check_permutation(sigma, p.n)
    return SparsePolynomial(p.n, {permute(sigma, e): c for e, c in p.terms.items()})


def symmetrize(p: SparsePolynomial, mode=GROUP_SUM) -> SparsePolynomial:
    """Sum of ``p`` over S_n.

    ``GROUP_SUM`` is the literal sum over all n! permutations, so a term whose
    exponent has a nontrivial stabilizer is counted once per stabilizing
    permutation. ``ORBIT_SUM`` puts the original coefficient on every distinct
    permuted monomial.
    """
    mode = SymmetrizationMode.parse(mode)
    nfact = factorial(p.n)
    out = {}
    for exp, c in p.terms.items():
        elems = list(multiset_permutations(exp))
        weight = c * (nfact // len(elems)) if mode is GROUP_SUM else c
        for e in elems:
            out[e] = out.get(e, 0) + weight
    return SparsePolynomial(p.n, out)


def is_symmetric(p: SparsePolynomial) -> bool:
    """Invariance under every adjacent transposition (these generate S_n)."""
    for i in range(p.n - 1):
        swap = transposition(p.n, i, i + 1)
        for exp, c in p.terms.items():
            if p.coefficient(permute(swap, exp)) != c:
                return False
    return True


def orbit_decompose_support(support) -> list:
    """Orbits covering the symmetric closure of ``support``, sorted by
    representative (descending lexicographic)."""
    reps = sorted({canonical(a) for a in support}, reverse=True)
    return [orbit(r) for r in reps]


def orbit_of(alpha, orbits):
    """The orbit in ``orbits`` containing ``alpha``."""
    rep = canonical(alpha)
    for o in orbits:
        if o.representative == rep:
            return o
    raise KeyError(alpha)
