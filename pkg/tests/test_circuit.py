import json
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sonccert import CircuitPolynomial, Comparison, NonnegativityClass, barycentric_coordinates, classify, \
    compare_exact, is_circuit_support, parse, support_reduction
from sonccert.circuit import circuit_verdict, compare_circuit_number, theta_decimal
from sonccert.errors import (
    DegenerateSupport,
    DenominatorOverflow,
    InvalidCircuit,
    NonLatticeInnerPoint,
    NonpositiveOuterCoefficient,
    NotASimplex,
    NotInterior,
    ParityMismatch,
)
from sonccert.oracle import min_on_grid

import corpus

B = NonnegativityClass


def test_motzkin_boundary():
    f = CircuitPolynomial.from_polynomial(corpus.MOTZKIN)
    assert f.inner == (2, 2)
    assert f.lambda_map() == {(0, 0): F(1, 3), (2, 4): F(1, 3), (4, 2): F(1, 3)}
    assert f.theta_exact() == 3
    assert compare_exact(3, f.outer_coeffs, f.lam) is Comparison.EQUAL
    assert classify(f) is B.BOUNDARY


def test_barycentric_of_example_point():
    lam = barycentric_coordinates([(0, 0, 0), (4, 0, 0), (0, 4, 4), (0, 4, 8)], (1, 2, 3))
    assert list(lam.values()) == [F(1, 4)] * 4


@pytest.mark.parametrize("outer, inner, reason", [
    ([], (1,), "TooFewVertices"),
    ([(0, 0), (2,)], (1, 1), "DimensionMismatch"),
    ([(0, 0), (0, 0)], (0, 0), "DuplicateVertex"),
    ([(0, 0), (3, 0)], (1, 0), "OddVertex"),
    ([(0, 0), (2, 0), (4, 0)], (1, 0), "NotASimplex"),
    ([(0, 0), (4, 0), (0, 4)], (3, 3), "NotInterior"),
    ([(0, 0), (4, 0), (0, 4)], (0, 2), "NotInterior"),
    ([(0, 0), (4, 0)], (1, 1), "NotInterior"),
])
def test_support_diagnostics(outer, inner, reason):
    check = is_circuit_support(outer, inner)
    assert not check and check.reason == reason


def test_invalid_circuit_errors():
    with pytest.raises(NotASimplex):
        barycentric_coordinates([(0, 0), (2, 0), (4, 0)], (1, 0))
    with pytest.raises(NotInterior):
        barycentric_coordinates([(0, 0), (4, 0), (0, 4)], (3, 3))
    with pytest.raises(NonpositiveOuterCoefficient):
        CircuitPolynomial(((0,), (2,)), (1, 0), (1,), -1)
    with pytest.raises(InvalidCircuit):
        CircuitPolynomial.from_polynomial(parse("x1^2 - x1 - x1^3 + 1"))


def test_inner_sign_rules():
    even = CircuitPolynomial(((0, 0), (8, 0), (0, 8)), (1, 1, 1), (2, 2), 5)
    assert classify(even) is B.INNER_NONNEGATIVE
    assert classify(even.with_inner_coeff(0)) is B.INNER_NONNEGATIVE
    # odd inner exponent: the sign of c_beta can be flipped by x -> -x
    odd = CircuitPolynomial.from_polynomial(parse("x1^2 + 3*x1 + 1"))
    assert odd.theta_exact() == 2
    assert classify(odd) is B.NOT_NONNEGATIVE
    assert classify(odd.with_inner_coeff(2)) is B.BOUNDARY
    assert classify(odd.with_inner_coeff(1)) is B.STRICTLY_INSIDE


def test_strict_and_violated():
    f = CircuitPolynomial.from_polynomial(corpus.MOTZKIN)
    assert classify(f.with_inner_coeff(F(-299, 100))) is B.STRICTLY_INSIDE
    assert classify(f.with_inner_coeff(F(-301, 100))) is B.NOT_NONNEGATIVE


def test_overflow_falls_back_to_log_domain():
    f = CircuitPolynomial(((0,), (130,)), (1, 1), (1,), -1)
    assert f.lam == (F(129, 130), F(1, 130))
    with pytest.raises(DenominatorOverflow):
        compare_exact(1, f.outer_coeffs, f.lam)
    theta = theta_decimal(f.outer_coeffs, f.lam)
    near = f.with_inner_coeff(-F(str(theta)).limit_denominator(10 ** 15))
    v = circuit_verdict(near)
    assert v.tag is B.BOUNDARY and v.comparison is Comparison.WITHIN_TOLERANCE and not v.exact
    assert compare_circuit_number(1, f.outer_coeffs, f.lam, max_denominator=200) == (Comparison.LESS, True)


def test_irrational_theta():
    f = CircuitPolynomial(((0,), (2,)), (1, 2), (1,), -1)
    assert f.theta_exact() is None  # 2 * sqrt(2)
    g = CircuitPolynomial(((0, 0), (4, 0), (0, 4)), (1, 2, 1), (1, 1), -1)
    assert g.theta_exact() is None
    assert float(theta_decimal(g.outer_coeffs, g.lam)) == pytest.approx(math.exp(g.log_circuit_number()))


def test_json_roundtrip_and_lambda_crosscheck():
    f = corpus.EX45_F123
    data = json.loads(json.dumps(f.to_json()))
    assert CircuitPolynomial.from_json(data) == f
    data["lambda"][0] = "1/3"
    with pytest.raises(InvalidCircuit) as info:
        CircuitPolynomial.from_json(data)
    assert info.value.reason == "LambdaMismatch"


def _theta_oracle(f):
    # independent float evaluation of prod (c/lam)^lam via numpy least squares
    pts = np.array([list(a) + [1] for a in f.outer], dtype=float).T
    lam, *_ = np.linalg.lstsq(pts, np.array(list(f.inner) + [1], dtype=float), rcond=None)
    c = np.array([float(v) for v in f.outer_coeffs])
    return float(np.prod((c / lam) ** lam))


@given(st.integers(0, 10 ** 6), st.integers(1, 3))
@settings(max_examples=150, deadline=None)
def test_classification_matches_float_oracle(seed, n):
    f = corpus.random_circuit(random.Random(seed), n)
    theta = _theta_oracle(f)
    c = abs(float(f.inner_coeff))
    tag = classify(f)
    if f.inner_coeff > 0 and all(v % 2 == 0 for v in f.inner):
        assert tag is B.INNER_NONNEGATIVE
    elif c < theta * (1 - 1e-9):
        assert tag is B.STRICTLY_INSIDE
    elif c > theta * (1 + 1e-9):
        assert tag is B.NOT_NONNEGATIVE
    else:
        assert tag is B.BOUNDARY


def test_boundary_minimum_is_zero_on_grid():
    f = CircuitPolynomial.from_polynomial(corpus.MOTZKIN)
    _, value = min_on_grid(f.to_polynomial(), 2.0, 201)
    assert 0 <= value <= 1e-3


# --------------------------------------------------------- support reduction

def test_support_reduction_worked_example():
    g = support_reduction(corpus.EX45_F111, (4, 0, 0))
    assert g.to_polynomial() == parse("2*x1^4 + x2^4 + x3^4 - 4*x1^2*x2*x3")
    assert classify(g) is classify(corpus.EX45_F111) is B.BOUNDARY


def test_support_reduction_errors():
    f = corpus.EX45_F111
    with pytest.raises(DegenerateSupport):
        support_reduction(f, (8, 4, 0))  # four distinct images in one hyperplane
    with pytest.raises(NonLatticeInnerPoint):
        support_reduction(f, (2, 0, 0))
    with pytest.raises(ValueError):
        support_reduction(f, (3, 0, 0))
    with pytest.raises(ValueError):
        support_reduction(f, (4, 0, 0), [(0, 1, 2)] * 3)
    pos = CircuitPolynomial(((0, 0, 0), (8, 0, 0), (0, 4, 4)), (1, 1, 1), (2, 2, 2), 1)
    assert classify(pos) is B.INNER_NONNEGATIVE
    with pytest.raises(ParityMismatch):
        support_reduction(pos, (2, 2, 0))  # new inner point (2, 1, 1) is odd


def test_support_reduction_theta_is_n_plus_one():
    g = support_reduction(corpus.EX45_F123, (4, 0, 0))
    assert g.theta_exact() == 4
    assert classify(g) is B.BOUNDARY
