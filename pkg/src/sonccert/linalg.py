"""Exact linear algebra over the rationals.

Everything here works on plain lists of ints/Fractions. Elimination is
fraction-free (Bareiss): rows are first scaled to integers, and every
intermediate entry stays an integer minor of the input.
"""
from fractions import Fraction
from math import lcm


class SingularSystem(ArithmeticError):
    """Coefficient matrix does not have full column rank."""


class InconsistentSystem(ArithmeticError):
    """Right-hand side is not in the column space."""


def _integer_rows(rows):
    out = []
    for row in rows:
        row = [Fraction(v) for v in row]
        scale = lcm(1, *(v.denominator for v in row))
        out.append([int(v * scale) for v in row])
    return out


def echelon(rows):
    """Fraction-free row echelon form.

    Returns ``(matrix, pivots)`` where ``matrix`` is an integer matrix in row
    echelon form and ``pivots`` lists the pivot column of each nonzero row.
    """
    m = _integer_rows(rows)
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, nrows):
            a = m[i][c]
            row_i = m[i]
            row_r = m[r]
            for j in range(c, ncols):
                q, rem = divmod(p * row_i[j] - a * row_r[j], prev)
                assert rem == 0, "Bareiss division must be exact"
                row_i[j] = q
        prev = p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows):
    return len(echelon(rows)[1])


def _back_substitute(m, pivots, ncols):
    """Solve the echelon system whose last column is the right-hand side."""
    x = [Fraction(0)] * ncols
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        acc = Fraction(m[r][-1])
        for j in range(c + 1, ncols):
            if m[r][j]:
                acc -= m[r][j] * x[j]
        x[c] = acc / m[r][c]
    return x


def solve(a, b):
    """Unique exact solution of ``a @ x = b`` for a (possibly tall) matrix.

    Raises :class:`SingularSystem` if the columns of ``a`` are dependent and
    :class:`InconsistentSystem` if ``b`` is outside their span.
    """
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    m, pivots = echelon(aug)
    if pivots and pivots[-1] == ncols:
        raise InconsistentSystem("right-hand side outside column space")
    if len(pivots) < ncols:
        raise SingularSystem(f"rank {len(pivots)} < {ncols} columns")
    return _back_substitute(m, pivots, ncols)


def nullspace(a):
    """Basis of the rational null space of ``a`` (list of vectors)."""
    if not a:
        return []
    ncols = len(a[0])
    m, pivots = echelon(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            acc = Fraction(0)
            for j in range(c + 1, ncols):
                if m[r][j] and x[j]:
                    acc -= m[r][j] * x[j]
            x[c] = acc / m[r][c]
        basis.append(x)
    return basis


def feasible_point(a_eq, b_eq, a_ub=(), b_ub=()):
    """Exact phase-one simplex: find ``x >= 0`` with ``a_eq x = b_eq`` and
    ``a_ub x <= b_ub``, or return ``None`` if no such point exists.

    Uses Bland's rule, so it terminates and is deterministic.
    """
    a_eq, a_ub = list(a_eq), list(a_ub)
    nvar = len((a_eq or a_ub)[0]) if (a_eq or a_ub) else 0
    nslack = len(a_ub)
    rows = []
    rhs = []
    for row, bi in zip(a_eq, b_eq):
        rows.append([Fraction(v) for v in row] + [Fraction(0)] * nslack)
        rhs.append(Fraction(bi))
    for k, (row, bi) in enumerate(zip(a_ub, b_ub)):
        slack = [Fraction(0)] * nslack
        slack[k] = Fraction(1)
        rows.append([Fraction(v) for v in row] + slack)
        rhs.append(Fraction(bi))
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    nrow = len(rows)
    ntot = nvar + nslack
    # tableau columns: structural + slack, then one artificial per row
    tab = []
    for i in range(nrow):
        art = [Fraction(0)] * nrow
        art[i] = Fraction(1)
        tab.append(rows[i] + art + [rhs[i]])
    basis = [ntot + i for i in range(nrow)]
    width = ntot + nrow
    # reduced cost row for min sum(artificials)
    cost = [Fraction(0)] * (width + 1)
    for i in range(nrow):
        for j in range(ntot):
            cost[j] -= tab[i][j]
        cost[width] -= tab[i][width]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(nrow):
            if tab[i][enter] > 0:
                ratio = tab[i][width] / tab[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            break  # unbounded direction; cannot happen for phase one
        _pivot(tab, cost, best[1], enter)
        basis[best[1]] = enter
    if cost[width] != 0:
        return None
    x = [Fraction(0)] * nvar
    for i, var in enumerate(basis):
        if var < nvar:
            x[var] = tab[i][width]
    return x


def _pivot(tab, cost, r, c):
    pr = tab[r]
    pv = pr[c]
    if pv != 1:
        tab[r] = pr = [v / pv for v in pr]
    for i, row in enumerate(tab):
        if i != r and row[c] != 0:
            f = row[c]
            tab[i] = [vi - f * vr for vi, vr in zip(row, pr)]
    if cost[c] != 0:
        f = cost[c]
        cost[:] = [vi - f * vr for vi, vr in zip(cost, pr)]
