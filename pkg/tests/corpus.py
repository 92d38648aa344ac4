"""Golden polynomials and certificates shared by the test modules."""
import math
from fractions import Fraction as F

from sonccert import CircuitPolynomial, SparsePolynomial, parse
from sonccert.circuit import is_circuit_support
from sonccert.certificate import SoncCertificate, SymmetricSoncCertificate, expand
from sonccert.symmetry import GROUP_SUM, ORBIT_SUM, symmetrize

MOTZKIN = parse("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1")
MOTZKIN_BAD = parse("x1^4*x2^2 + x1^2*x2^4 - 10*x1^2*x2^2 + 1")

# Muirhead for alpha = (1,4,0), beta = (2,3,0) after x_i = y_i^2
MUIRHEAD_F = SparsePolynomial(3, {
    (2, 8, 0): 1, (2, 0, 8): 1, (8, 2, 0): 1, (0, 2, 8): 1, (8, 0, 2): 1, (0, 8, 2): 1,
    (4, 6, 0): -1, (4, 0, 6): -1, (6, 4, 0): -1, (0, 4, 6): -1, (6, 0, 4): -1, (0, 6, 4): -1,
})


def _pair_pieces(i, j):
    def e(a, b):
        v = [0, 0, 0]
        v[i], v[j] = a, b
        return tuple(v)
    return [
        CircuitPolynomial((e(2, 8), e(8, 2)), (F(2, 3), F(1, 3)), e(4, 6), F(-1)),
        CircuitPolynomial((e(2, 8), e(8, 2)), (F(1, 3), F(2, 3)), e(6, 4), F(-1)),
    ]


# the six printed pieces, in printed order (pairs (y2,y3), (y1,y3), (y1,y2))
MUIRHEAD_PIECES = _pair_pieces(1, 2) + _pair_pieces(0, 2) + _pair_pieces(0, 1)
MUIRHEAD_CERT = SoncCertificate(tuple(MUIRHEAD_PIECES))

EX45_F = parse("1/2*x1^4 + 1/2*x2^4*x3^4 + 1/4*x2^4*x3^8 - x1*x2*x3 - x1*x2^2*x3^3 + 3/4")
EX45_F111 = CircuitPolynomial(((0, 0, 0), (4, 0, 0), (0, 4, 4)), (F(1, 2), F(1, 4), F(1, 4)),
                              (1, 1, 1), F(-1))
EX45_F123 = CircuitPolynomial(((0, 0, 0), (4, 0, 0), (0, 4, 4), (0, 4, 8)),
                              (F(1, 4), F(1, 4), F(1, 4), F(1, 4)), (1, 2, 3), F(-1))
EX45_CERT = SoncCertificate((EX45_F111, EX45_F123))

# f_sym exactly as printed (17 terms)
EX45_FSYM_PRINTED = parse(
    "1/2*x1^4 + 1/2*x2^4 + 1/2*x3^4 + 1/2*x2^4*x3^4 + 1/2*x1^4*x2^4 + 1/2*x1^4*x3^4"
    " + 1/4*x2^4*x3^8 + 1/4*x1^4*x2^8 + 1/4*x1^4*x3^8"
    " - x1*x2*x3 - x1*x2^2*x3^3 - x1^2*x2*x3^3 - x1*x2^3*x3^2 - x1^3*x2^2*x3"
    " - x1^2*x2^3*x3 - x1^3*x2*x3^2 + 3/4")
# orbit images of (0,4,8) missing from the printed display
EX45_FSYM_OMITTED = SparsePolynomial(3, {(0, 8, 4): F(1, 4), (8, 4, 0): F(1, 4), (8, 0, 4): F(1, 4)})
EX45_FSYM_GROUP = symmetrize(EX45_F, GROUP_SUM)
EX45_FSYM_ORBIT = symmetrize(EX45_F, ORBIT_SUM)
EX45_SYM_CERT = SymmetricSoncCertificate((EX45_F111, EX45_F123), GROUP_SUM)

# support of the symmetric example with A+ = orbit(7,0,0) u {0}, doubled to even exponents
EX46_A_PLUS = ((0, 0, 0), (14, 0, 0), (0, 14, 0), (0, 0, 14))
EX46_PIECE_1 = CircuitPolynomial(EX46_A_PLUS, (F(3, 7), F(1, 7), F(1, 7), F(2, 7)), (2, 2, 4), F(-1))
EX46_PIECE_2 = CircuitPolynomial(EX46_A_PLUS, (F(1, 7), F(2, 7), F(2, 7), F(2, 7)), (4, 4, 4), F(-1))
EX46_SYM_CERT = SymmetricSoncCertificate((EX46_PIECE_1, EX46_PIECE_2), GROUP_SUM)
EX46_P = symmetrize(EX46_PIECE_1.to_polynomial() + EX46_PIECE_2.to_polynomial(), GROUP_SUM)


def symmetric_corpus():
    """(name, polynomial, symmetric certificate) triples."""
    strict = EX46_PIECE_1.with_inner_coeff(F(-1, 2))
    orbit_cert = SymmetricSoncCertificate((EX46_PIECE_1,), ORBIT_SUM)
    return [
        ("ex45-group", EX45_FSYM_GROUP, EX45_SYM_CERT),
        ("ex46-group", EX46_P, EX46_SYM_CERT),
        ("ex46-orbit", expand(orbit_cert).total(3), orbit_cert),
        ("ex46-strict", symmetrize(strict.to_polynomial(), GROUP_SUM),
         SymmetricSoncCertificate((strict,), GROUP_SUM)),
        ("ex46-wrong-sum", EX46_P, SymmetricSoncCertificate((EX46_PIECE_1,), GROUP_SUM)),
        ("ex46-too-negative", symmetrize(EX46_PIECE_1.with_inner_coeff(F(-2)).to_polynomial(), GROUP_SUM),
         SymmetricSoncCertificate((EX46_PIECE_1.with_inner_coeff(F(-2)),), GROUP_SUM)),
        ("muirhead-orbit", MUIRHEAD_F,
         SymmetricSoncCertificate((MUIRHEAD_PIECES[0],), ORBIT_SUM)),
        ("motzkin-orbit", MOTZKIN,
         SymmetricSoncCertificate((CircuitPolynomial.from_polynomial(MOTZKIN),), ORBIT_SUM)),
    ]


def random_circuit(rng, n, max_entry=8, coeff_den=6, vertices=None):
    """Random circuit polynomial with positive random coefficients; ``rng`` is
    a ``random.Random``. The inner coefficient is drawn around the circuit number."""
    k = vertices or n + 1
    while True:
        outer = [tuple(2 * rng.randint(0, max_entry // 2) for _ in range(n)) for _ in range(k)]
        lo = [min(a[i] for a in outer) for i in range(n)]
        hi = [max(a[i] for a in outer) for i in range(n)]
        inner = tuple(rng.randint(lo[i], hi[i]) for i in range(n))
        check = is_circuit_support(outer, inner)
        if check:
            if rng.random() < 0.3:
                # coefficients proportional to lambda put the circuit on the boundary
                t = F(rng.randint(1, 4 * coeff_den), coeff_den)
                coeffs = [t * v for v in check.lam]
            else:
                coeffs = [F(rng.randint(1, 4 * coeff_den), coeff_den) for _ in outer]
            piece = CircuitPolynomial(tuple(outer), tuple(coeffs), inner, -1)
            theta = piece.theta_exact()
            if theta is not None and rng.random() < 0.5:
                c = theta
            else:
                c = F(rng.uniform(0.2, 2.0) * math.exp(piece.log_circuit_number())).limit_denominator(1000)
            sign = -1 if rng.random() < 0.8 else 1
            return piece.with_inner_coeff(sign * c)


def random_signed_polynomial(rng, max_plus=8, max_minus=3):
    """Random polynomial in n <= 3 variables with at most ``max_plus`` monomial
    squares and at most ``max_minus`` other terms."""
    n = rng.randint(1, 3)
    plus = {(0,) * n: F(rng.randint(1, 12), 4)}
    for _ in range(rng.randint(1, max_plus - 1)):
        plus[tuple(2 * rng.randint(0, 4) for _ in range(n))] = F(rng.randint(1, 12), 4)
    hi = [max(a[i] for a in plus) for i in range(n)]
    pts = sorted(plus)
    minus = {}
    while not minus:
        for _ in range(rng.randint(1, max_minus)):
            if rng.random() < 0.5:
                e = tuple(rng.randint(0, max(h, 1)) for h in hi)
            else:
                k = rng.randint(2, min(3, len(pts))) if len(pts) > 1 else 1
                chosen = rng.sample(pts, k)
                e = tuple(sum(a[i] for a in chosen) // k for i in range(n))
            if e in plus or len(minus) >= max_minus:
                continue
            sign = -1 if rng.random() < 0.8 or all(v % 2 == 0 for v in e) else 1
            minus[e] = sign * F(rng.randint(1, 8), 4)
    return SparsePolynomial(n, {**plus, **minus})
