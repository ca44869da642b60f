"""Small dense linear algebra over Q and over the truncated Laurent ring.

Matrices are tuples of tuples (immutable).  Over the local ring k[[hbar]]
a matrix is invertible iff its determinant has nonzero constant term;
rank questions are settled by Gaussian elimination preferring unit
pivots, pulling out hbar factors when a row has none.
"""

from fractions import Fraction

from .series import TruncLaurent, ts_div_h


# ---------------------------------------------------------------- rationals

def q_mat(rows):
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


def q_rank(m):
    if not m:
        return 0
    rows = [list(r) for r in m]
    ncols = len(rows[0])
    rank = 0
    col = 0
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def q_solve(a, b):
    """One solution x of a x = b over Q, or None if inconsistent.

    a: m x n, b: length-m vector.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    rows = [list(a[i]) + [Fraction(b[i])] for i in range(m)]
    pivots = []
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, m) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(m):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, m):
        if rows[r][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = rows[i][n]
    return x


def q_nullspace(a):
    """Basis of the right nullspace of a over Q."""
    m = len(a)
    n = len(a[0]) if m else 0
    rows = [list(r) for r in a]
    pivots = []
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, m) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(m):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(tuple(v))
    return basis


# ----------------------------------------------------- truncated series

def s_const_mat(m, order, vmax=2):
    """Embed a rational matrix as a TruncLaurent matrix."""
    return tuple(tuple(TruncLaurent.const(x, order, vmax) for x in r) for r in m)


def s_zero(nrows, ncols, order, vmax=2):
    z = TruncLaurent.zero(order, vmax)
    return tuple(tuple(z for _ in range(ncols)) for _ in range(nrows))


def s_identity(n, order, vmax=2):
    one = TruncLaurent.one(order, vmax)
    z = TruncLaurent.zero(order, vmax)
    return tuple(tuple(one if i == j else z for j in range(n)) for i in range(n))


def s_transpose(m):
    return tuple(zip(*m)) if m else ()


def s_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def s_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def s_neg(a):
    return tuple(tuple(-x for x in r) for r in a)


def s_mul(a, b):
    bt = s_transpose(b)
    out = []
    for ra in a:
        row = []
        for cb in bt:
            acc = None
            for x, y in zip(ra, cb):
                p = x * y
                acc = p if acc is None else acc + p
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def s_matvec(a, v):
    out = []
    for row in a:
        acc = None
        for x, y in zip(row, v):
            p = x * y
            acc = p if acc is None else acc + p
        out.append(acc)
    return tuple(out)


def s_const_part(m):
    return tuple(tuple(x.constant() for x in r) for r in m)


def s_eq_at(a, b, n):
    return all(x.eq_at(y, n) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def s_det(m):
    """Determinant by expansion over column subsets (n <= 8 expected)."""
    n = len(m)
    if n == 0:
        return TruncLaurent.one()
    memo = {}

    def minor(rows, cols):
        key = (rows, cols)
        if key in memo:
            return memo[key]
        if len(rows) == 1:
            out = m[rows[0]][cols[0]]
        else:
            out = None
            r = rows[0]
            rest = rows[1:]
            for k, c in enumerate(cols):
                entry = m[r][c]
                if entry.is_zero():
                    continue
                sub = minor(rest, cols[:k] + cols[k + 1:])
                term = entry * sub
                if k % 2:
                    term = -term
                out = term if out is None else out + term
            if out is None:
                out = TruncLaurent.zero(m[0][0].order, m[0][0].vmax)
        memo[key] = out
        return out

    return minor(tuple(range(n)), tuple(range(n)))


def s_is_invertible(m):
    """Unit criterion in the local ring: constant-term determinant != 0."""
    return s_det(m).constant() != 0


def s_inverse(m):
    """Inverse of a unit matrix via Gauss-Jordan with unit pivots."""
    n = len(m)
    order = min(x.order for r in m for x in r)
    vmax = m[0][0].vmax
    a = [list(r) for r in m]
    inv = [list(r) for r in s_identity(n, order, vmax)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col].is_unit()), None)
        if piv is None:
            raise ZeroDivisionError("matrix is not invertible over k[[hbar]]")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        pv = a[col][col].inverse()
        a[col] = [x * pv for x in a[col]]
        inv[col] = [x * pv for x in inv[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return tuple(tuple(r) for r in inv)


def s_solve_rows(basis_rows, target):
    """Coefficients x with sum x_k basis_rows[k] = target over k[[hbar]].

    Requires the rows to be independent mod hbar (unit-pivot elimination);
    returns None when the system is inconsistent at the working order.
    """
    k = len(basis_rows)
    if k == 0:
        return () if all(t.is_zero() for t in target) else None
    ncols = len(basis_rows[0])
    a = [list(r) for r in basis_rows]
    rhs = list(target)
    # column operations are awkward; eliminate on the transposed system
    # A^T x^T = target^T  with A^T of size ncols x k
    at = [[a[r][c] for r in range(k)] for c in range(ncols)]
    x = [None] * k
    used_rows = []
    for col in range(k):
        piv = next((r for r in range(ncols)
                    if r not in used_rows and at[r][col].is_unit()), None)
        if piv is None:
            return None
        used_rows.append(piv)
        pv = at[piv][col].inverse()
        at[piv] = [e * pv for e in at[piv]]
        rhs[piv] = rhs[piv] * pv
        for r in range(ncols):
            if r != piv and not at[r][col].is_zero():
                f = at[r][col]
                at[r] = [e - f * g for e, g in zip(at[r], at[piv])]
                rhs[r] = rhs[r] - f * rhs[piv]
    for i, piv in enumerate(used_rows):
        x[i] = rhs[piv]
    check_n = min(e.order for e in rhs)
    for r in range(ncols):
        if r not in used_rows and not rhs[r].is_zero_at(check_n):
            return None
    return tuple(x)


def s_rank(m):
    """Rank over the Laurent field, by unit pivots and hbar extraction."""
    if not m:
        return 0
    rows = [list(r) for r in m]
    ncols = len(rows[0])
    rank = 0
    col = 0
    nrows = len(rows)
    while rank < nrows and col < ncols:
        piv = None
        for r in range(rank, nrows):
            if rows[r][col].is_unit():
                piv = r
                break
        if piv is None:
            # pull out hbar from candidate rows that are nonzero in this col
            for r in range(rank, nrows):
                e = rows[r][col]
                if not e.is_zero() and not e.is_unit():
                    v = e.valuation()
                    rows[r] = [ts_div_h(x, v) if not x.is_zero() else x
                               for x in rows[r]]
            piv = next((r for r in range(rank, nrows)
                        if rows[r][col].is_unit()), None)
            if piv is None:
                col += 1
                continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col].inverse()
        rows[rank] = [x * pv for x in rows[rank]]
        for r in range(nrows):
            if r != rank and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank
