"""Exact sparse multivariate polynomials.

A :class:`SparsePolynomial` maps exponent tuples to :class:`~fractions.Fraction`
coefficients. Instances are immutable and always canonical: no zero
coefficients are stored, so two polynomials are equal iff their term maps are.

Text format (variables are ``x1`` .. ``xn``)::

    polynomial := term (('+'|'-') term)*
    term       := [rational ['*']] monomial?
    monomial   := var ['^' int] ('*' var ['^' int])*
    rational   := int ['/' posint]

A leading sign and decimal literals (``3.01``) are also accepted; decimals are
converted exactly.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

from .errors import DimensionMismatch, ParseError

Exponent = tuple


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def is_even(exp) -> bool:
    return all(e % 2 == 0 for e in exp)


def grlex_key(exp):
    return (sum(exp), tuple(exp))


class SparsePolynomial:
    """Polynomial in ``n`` variables with exact rational coefficients."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms=None):
        if n < 0:
            raise ValueError("variable count must be nonnegative")
        self.n = n
        clean = {}
        for exp, coef in (terms.items() if isinstance(terms, dict) else (terms or ())):
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise DimensionMismatch(f"exponent {exp} has length {len(exp)}, expected {n}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            coef = as_fraction(coef)
            total = clean.get(exp, 0) + coef
            if total:
                clean[exp] = total
            else:
                clean.pop(exp, None)
        self._terms = clean
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def constant(cls, n, c):
        return cls(n, {(0,) * n: c})

    @classmethod
    def monomial(cls, exp, c=1):
        exp = tuple(exp)
        return cls(len(exp), {exp: c})

    # mapping-ish access

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def coefficient(self, exp) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def support(self):
        return frozenset(self._terms)

    def sorted_terms(self):
        """Terms in graded lexicographic order, highest degree first."""
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __eq__(self, other):
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    # arithmetic (linear structure only)

    def _check_dim(self, other):
        if self.n != other.n:
            raise DimensionMismatch(f"{self.n} vs {other.n} variables")

    def __add__(self, other):
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        self._check_dim(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return SparsePolynomial(self.n, out)

    def __neg__(self):
        return SparsePolynomial(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self + (-other)

    def scale(self, t):
        t = as_fraction(t)
        return SparsePolynomial(self.n, {e: c * t for e, c in self._terms.items()})

    def __rmul__(self, t):
        if isinstance(t, SparsePolynomial):
            return NotImplemented
        return self.scale(t)

    # evaluation

    def __call__(self, point):
        return evaluate(self, point)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"SparsePolynomial({self.n}, {format_polynomial(self)!r})"

    # serialization

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"exp": list(e), "coef": str(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data) -> "SparsePolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["n"]), [(t["exp"], as_fraction(t["coef"])) for t in data["terms"]])


def combine(p: SparsePolynomial, q: SparsePolynomial, a=1, b=1) -> SparsePolynomial:
    """Return ``a*p + b*q`` exactly."""
    p._check_dim(q)
    a, b = as_fraction(a), as_fraction(b)
    out = {e: a * c for e, c in p._terms.items()}
    for e, c in q._terms.items():
        out[e] = out.get(e, 0) + b * c
    return SparsePolynomial(p.n, out)


def evaluate(p: SparsePolynomial, point) -> float:
    """Floating-point value of ``p`` at ``point``."""
    if len(point) != p.n:
        raise DimensionMismatch(f"point has {len(point)} coordinates, polynomial has {p.n} variables")
    x = [float(v) for v in point]
    total = 0.0
    for exp, c in p._terms.items():
        term = float(c)
        for xi, e in zip(x, exp):
            if e:
                term *= xi ** e
        total += term
    return total


def evaluate_exact(p: SparsePolynomial, point) -> Fraction:
    """Exact value of ``p`` at a rational point."""
    if len(point) != p.n:
        raise DimensionMismatch(f"point has {len(point)} coordinates, polynomial has {p.n} variables")
    x = [as_fraction(v) for v in point]
    total = Fraction(0)
    for exp, c in p._terms.items():
        term = c
        for xi, e in zip(x, exp):
            if e:
                term *= xi ** e
        total += term
    return total


@dataclass(frozen=True)
class SignedSupport:
    a_plus: frozenset
    a_minus: frozenset


def signed_partition(p: SparsePolynomial) -> SignedSupport:
    """Split the support into monomial squares (``a_plus``) and the rest."""
    plus = frozenset(e for e, c in p._terms.items() if c > 0 and is_even(e))
    return SignedSupport(plus, frozenset(p._terms) - plus)


# ---------------------------------------------------------------- formatting

def _format_monomial(exp):
    parts = []
    for i, e in enumerate(exp, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def format_polynomial(p: SparsePolynomial) -> str:
    if p.is_zero():
        return "0"
    out = []
    for k, (exp, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        mono = _format_monomial(exp)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if k == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


# ------------------------------------------------------------------- parsing

class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, msg, pos=None):
        return ParseError(msg, self.pos if pos is None else pos, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def digits(self):
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return self.text[start:self.pos]

    def number(self):
        self.skip()
        start = self.pos
        whole = self.digits()
        if self.pos < len(self.text) and self.text[self.pos] == ".":
            self.pos += 1
            frac = self.digits()
            if not whole and not frac:
                raise self.error("malformed number", start)
            return Fraction(f"{whole or '0'}.{frac or '0'}")
        value = Fraction(int(whole))
        if self.take("/"):
            self.skip()
            dpos = self.pos
            den = self.digits()
            if not den:
                raise self.error("expected denominator", dpos)
            if int(den) == 0:
                raise self.error("zero denominator", dpos)
            value /= int(den)
        return value

    def variable(self):
        self.skip()
        start = self.pos
        if not self.take("x"):
            raise self.error("expected variable x<k>")
        idx = self.digits()
        if not idx or int(idx) == 0:
            raise self.error("variables are named x1, x2, ...", start)
        power = 1
        if self.take("^"):
            self.skip()
            if self.peek() == "-":
                raise self.error("negative exponent")
            ppos = self.pos
            ptxt = self.digits()
            if not ptxt:
                raise self.error("expected integer exponent", ppos)
            power = int(ptxt)
        return int(idx), power

    def monomial(self):
        powers = {}
        while True:
            i, e = self.variable()
            powers[i] = powers.get(i, 0) + e
            save = self.pos
            if self.take("*") and self.peek() == "x":
                continue
            self.pos = save
            return powers

    def term(self):
        c = Fraction(1)
        ch = self.peek()
        if ch.isdigit() or ch == ".":
            c = self.number()
            star = self.take("*")
            if self.peek() == "x":
                return c, self.monomial()
            if star:
                raise self.error("expected monomial after '*'")
            return c, {}
        if ch == "x":
            return c, self.monomial()
        raise self.error("expected term" if ch else "unexpected end of input")

    def polynomial(self):
        terms = []
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        c, m = self.term()
        terms.append((sign * c, m))
        while True:
            ch = self.peek()
            if not ch:
                break
            if ch not in "+-":
                raise self.error(f"unexpected character {ch!r}")
            self.pos += 1
            sign = -1 if ch == "-" else 1
            c, m = self.term()
            terms.append((sign * c, m))
        return terms


def parse(text: str, n: int | None = None) -> SparsePolynomial:
    """Parse the text format into a canonical polynomial.

    ``n`` defaults to the highest variable index that appears; if given, any
    variable beyond ``x{n}`` is an error.
    """
    raw = _Parser(text).polynomial()
    top = max((max(m) for _, m in raw if m), default=0)
    if n is None:
        n = top
    elif top > n:
        raise ParseError(f"variable x{top} exceeds declared variable count {n}", None, text)
    terms = []
    for c, m in raw:
        exp = [0] * n
        for i, e in m.items():
            exp[i - 1] = e
        terms.append((tuple(exp), c))
    return SparsePolynomial(n, terms)


def load_polynomial(text: str, n: int | None = None) -> SparsePolynomial:
    """Accept either the JSON schema or the text grammar."""
    stripped = text.strip()
    if stripped.startswith("{"):
        return SparsePolynomial.from_json(json.loads(stripped))
    return parse(stripped, n)


def log_abs(q: Fraction) -> float:
    """Natural log of ``|q|`` without overflowing on huge numerators."""
    q = abs(q)
    return math.log(q.numerator) - math.log(q.denominator)
