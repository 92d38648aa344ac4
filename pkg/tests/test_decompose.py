import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sonccert import SparsePolynomial, decompose, decompose_symmetric, enumerate_circuits, parse, symmetrize, \
    verify, verify_symmetric
from sonccert.decompose import DecomposeOptions, search, search_symmetric
from sonccert.errors import InputNotSymmetric
from sonccert.symmetry import GROUP_SUM

import corpus


def _bruteforce_circuit_count(a_plus, beta):
    # affine independence by numpy rank, interiority by least squares
    count = 0
    for k in range(2, len(beta) + 2):
        for subset in itertools.combinations(sorted(a_plus), k):
            m = np.array([list(a) + [1] for a in subset], dtype=float).T
            if np.linalg.matrix_rank(m) < k:
                continue
            lam, *_ = np.linalg.lstsq(m, np.array(list(beta) + [1], dtype=float), rcond=None)
            if np.allclose(m @ lam, list(beta) + [1]) and np.all(lam > 1e-12):
                count += 1
    return count


def test_enumerate_circuits_matches_bruteforce():
    got = enumerate_circuits(corpus.EX46_A_PLUS, (2, 2, 4))
    assert len(got) == _bruteforce_circuit_count(corpus.EX46_A_PLUS, (2, 2, 4)) == 1
    a_plus = [(0, 0), (4, 0), (0, 4), (4, 4), (2, 0), (0, 2)]
    for beta in [(1, 1), (2, 2), (1, 3), (3, 1), (2, 1)]:
        assert len(enumerate_circuits(a_plus, beta)) == _bruteforce_circuit_count(a_plus, beta)


def test_enumeration_is_lexicographic():
    a_plus = [(0, 0), (4, 0), (0, 4), (4, 4), (2, 0), (0, 2)]
    got = [c.outer for c in enumerate_circuits(a_plus, (1, 1))]
    assert got == sorted(got, key=lambda o: (len(o), o))


def test_motzkin_single_piece():
    cert = decompose(corpus.MOTZKIN)
    assert cert is not None and len(cert.pieces) == 1 and not cert.squares
    assert cert.pieces[0].to_polynomial() == corpus.MOTZKIN


def test_motzkin_variant_unknown():
    result = search(corpus.MOTZKIN_BAD)
    assert result.certificate is None and result.min_slack < 0


def test_example_with_two_inner_points():
    cert = decompose(corpus.EX45_F)
    expected = {corpus.EX45_F111.to_polynomial(), corpus.EX45_F123.to_polynomial()}
    assert {c.to_polynomial() for c in cert.pieces} == expected


def test_muirhead_polynomial():
    cert = decompose(corpus.MUIRHEAD_F)
    assert cert is not None and verify(corpus.MUIRHEAD_F, cert).verified
    sym = decompose_symmetric(corpus.MUIRHEAD_F)
    assert len(sym.orbit_pieces) == 1 and verify_symmetric(corpus.MUIRHEAD_F, sym).verified


def test_symmetric_examples_use_two_orbit_pieces():
    for p in (corpus.EX45_FSYM_GROUP, corpus.EX46_P):
        result = search_symmetric(p)
        assert result.certificate.mode is GROUP_SUM
        assert len(result.certificate.orbit_pieces) == 2
        assert result.report.checks_performed == 2


def test_symmetric_requires_symmetric_input():
    with pytest.raises(InputNotSymmetric):
        decompose_symmetric(corpus.EX45_F)


def test_squares_only_and_leftovers():
    p = parse("x1^2 + 3*x2^4 + 1")
    cert = decompose(p)
    assert not cert.pieces and len(cert.squares) == 3
    q = corpus.MOTZKIN + parse("2*x1^4*x2^2 + 7")
    cert = decompose(q)
    assert verify(q, cert).verified and cert.squares


def test_no_circuit_for_outside_term():
    assert decompose(parse("x1^2 - x1^3 + 1")) is None


def test_heuristic_stage_alone():
    # strictly inside in aggregate but no proportional split fits
    p = parse("x1^4 + x2^4 + 1 - x1*x2 - x1^2*x2")
    opts = DecomposeOptions(exact_lp=False)
    result = search(p, opts)
    if result.certificate is not None:
        assert result.stage == "heuristic"
        assert verify(p, result.certificate).verified


@given(st.integers(0, 10 ** 6))
@settings(max_examples=100, deadline=None)
def test_outputs_always_verify(seed):
    p = corpus.random_signed_polynomial(random.Random(seed))
    cert = decompose(p)
    if cert is not None:
        assert verify(p, cert).verified


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_symmetric_outputs_always_verify(seed):
    rng = random.Random(seed)
    p = corpus.random_signed_polynomial(rng)
    if p.n == 1:
        p = SparsePolynomial(2, {e + (0,): c for e, c in p.terms.items()})
    sym = symmetrize(p, GROUP_SUM)
    cert = decompose_symmetric(sym)
    if cert is not None:
        assert verify_symmetric(sym, cert).verified
        assert verify(sym, corpus.expand(cert)).verified


def test_scaling_budget_and_demands():
    # halving the inner term keeps a boundary certificate valid with square leftovers
    p = corpus.MOTZKIN + parse("3/2*x1^2*x2^2")
    cert = decompose(p)
    assert cert is not None and verify(p, cert).verified
    assert all(c > 0 for _, c in cert.squares)
    assert sum(abs(piece.inner_coeff) for piece in cert.pieces) == F(3, 2)
