import itertools
from fractions import Fraction as F

import pytest

from sonccert import parse
from sonccert.errors import BudgetExceeded, DimensionTooLarge
from sonccert.oracle import FalsificationConfig, falsify, min_on_grid, permutohedron_membership_bruteforce
from sonccert.poly import evaluate_exact

import corpus


def test_motzkin_not_refuted():
    assert falsify(corpus.MOTZKIN, FalsificationConfig(samples=10_000)) is None


def test_motzkin_variant_refuted_exactly():
    w = falsify(corpus.MOTZKIN_BAD)
    assert w is not None and w.value < 0
    assert evaluate_exact(corpus.MOTZKIN_BAD, w.point) == w.value
    assert all(isinstance(v, F) for v in w.point)


def test_slightly_violated_circuit_refuted():
    p = parse("x1^4*x2^2 + x1^2*x2^4 - 301/100*x1^2*x2^2 + 1")
    w = falsify(p)
    assert w is not None and float(w.value) < -1e-12


def test_deterministic_under_seed():
    cfg = FalsificationConfig(samples=2000, seed=7)
    assert falsify(corpus.MOTZKIN_BAD, cfg) == falsify(corpus.MOTZKIN_BAD, cfg)


def test_nonnegative_orthant_mode():
    p = parse("x1 - 1/100")
    assert falsify(p, FalsificationConfig(nonnegative_orthant=True, samples=2000)) is not None
    assert falsify(parse("x1 + x2"), FalsificationConfig(nonnegative_orthant=True, samples=2000)) is None


def test_constant_and_zero():
    assert falsify(parse("0*x1")) is None
    assert falsify(parse("-1")) is not None


def test_min_on_grid():
    point, value = min_on_grid(corpus.MOTZKIN, 2.0, 201)
    assert 0 <= value <= 1e-3
    assert tuple(abs(v) for v in point) == pytest.approx((1.0, 1.0))
    with pytest.raises(BudgetExceeded):
        min_on_grid(corpus.MUIRHEAD_F, 1.0, 1000)


def test_bruteforce_membership():
    assert permutohedron_membership_bruteforce((2, 3, 0), (1, 4, 0))
    assert not permutohedron_membership_bruteforce((3, 0, 0), (1, 1, 1))
    assert permutohedron_membership_bruteforce((1, 1, 1), (3, 0, 0))
    with pytest.raises(DimensionTooLarge):
        permutohedron_membership_bruteforce((1,) * 7, (7,) + (0,) * 6)


def test_verified_certificates_are_not_refuted():
    for p in (corpus.MUIRHEAD_F, corpus.EX45_F, corpus.EX46_P):
        assert falsify(p, FalsificationConfig(samples=4000)) is None


def test_two_variable_hull_membership_small():
    for alpha in itertools.product(range(3), repeat=2):
        for beta in itertools.product(range(3), repeat=2):
            if sum(alpha) == sum(beta):
                inside = min(alpha) <= min(beta)
                assert permutohedron_membership_bruteforce(beta, alpha) == inside
