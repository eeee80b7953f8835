"""Exact integer linear algebra: Smith normal form, first homology of a
surgery presentation, and rational linking numbers after surgery.

Everything here works over arbitrary-precision Python integers (or
fractions.Fraction where a division is genuinely needed).  Framing
normalization produces entries of size n^2 and Smith reductions can blow
intermediate entries up well past machine words, so exactness is not
optional.
"""

from __future__ import annotations

from fractions import Fraction


class SingularMatrixError(ValueError):
    """Raised when a linking computation needs A^{-1} but det A = 0."""


# ---------------------------------------------------------------------------
# small dense-matrix helpers (lists of lists of ints)
# ---------------------------------------------------------------------------

def identity_matrix(m):
    return [[1 if i == j else 0 for j in range(m)] for i in range(m)]


def mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            aik = ai[k]
            if aik:
                bk = b[k]
                for j in range(cols):
                    oi[j] += aik * bk[j]
    return out


def mat_transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def is_symmetric(a):
    m = len(a)
    return all(len(row) == m for row in a) and all(
        a[i][j] == a[j][i] for i in range(m) for j in range(i + 1, m)
    )


def _check_rectangular(m):
    if any(len(row) != len(m[0]) for row in m):
        raise ValueError("ragged matrix")


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def smith_normal_form(matrix):
    """Return (U, D, V) with U * matrix * V = D, U and V unimodular, and D
    diagonal with d_1 | d_2 | ... and every d_i >= 0.

    Pivoting picks the smallest nonzero absolute value in the remaining
    block (row-then-column index as tiebreak), which keeps intermediate
    entries small and makes the reduction deterministic.
    """
    if not matrix or not matrix[0]:
        rows = len(matrix)
        cols = len(matrix[0]) if matrix else 0
        return identity_matrix(rows), [row[:] for row in matrix], identity_matrix(cols)
    _check_rectangular(matrix)
    d = [row[:] for row in matrix]
    rows, cols = len(d), len(d[0])
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row dst += c * row src
        d[dst] = [x + c * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in d:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    def find_pivot(s):
        best = None
        for i in range(s, rows):
            for j in range(s, cols):
                x = abs(d[i][j])
                if x and (best is None or x < best[0]):
                    best = (x, i, j)
        return best

    def diagonalize():
        s = 0
        while s < min(rows, cols):
            found = find_pivot(s)
            if found is None:
                break
            _, pi, pj = found
            if pi != s:
                swap_rows(s, pi)
            if pj != s:
                swap_cols(s, pj)
            # clear the edging; a nonzero remainder becomes a strictly
            # smaller pivot, so the inner loop terminates
            dirty = True
            while dirty:
                dirty = False
                for i in range(s + 1, rows):
                    if d[i][s]:
                        add_row(s, i, -(d[i][s] // d[s][s]))
                        if d[i][s]:
                            swap_rows(s, i)
                            dirty = True
                for j in range(s + 1, cols):
                    if d[s][j]:
                        add_col(s, j, -(d[s][j] // d[s][s]))
                        if d[s][j]:
                            swap_cols(s, j)
                            dirty = True
            s += 1

    while True:
        diagonalize()
        for i in range(min(rows, cols)):
            if d[i][i] < 0:
                negate_row(i)
        # enforce d_i | d_{i+1}: fold an offending column back in and
        # rediagonalize; the running gcds strictly decrease, so this stops
        bad = None
        for i in range(min(rows, cols) - 1):
            a, b = d[i][i], d[i + 1][i + 1]
            if a and b % a != 0:
                bad = i
                break
        if bad is None:
            break
        add_col(bad + 1, bad, 1)

    assert mat_mul(mat_mul(u, matrix), v) == d
    return u, d, v


def snf_diagonal(matrix):
    _, d, _ = smith_normal_form(matrix)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def h1_invariant_factors(a):
    """Invariant factors of coker(Z^m --a--> Z^m) for a symmetric linking
    matrix a: the first homology of the presented surgery manifold.

    Trivial factors (1) are dropped; each rank deficiency contributes a 0,
    denoting a free summand.  The empty list is the trivial group.
    """
    if a and not is_symmetric(a):
        raise ValueError("linking matrix must be symmetric")
    m = len(a)
    if m == 0:
        return []
    diag = snf_diagonal(a)
    finite = [x for x in diag if x > 1]
    free = sum(1 for x in diag if x == 0)
    return finite + [0] * free


def det(matrix):
    """Exact determinant by fraction-free Gaussian elimination (Bareiss)."""
    m = len(matrix)
    if m == 0:
        return 1
    _check_rectangular(matrix)
    if len(matrix[0]) != m:
        raise ValueError("determinant of a non-square matrix")
    a = [row[:] for row in matrix]
    sign = 1
    prev = 1
    for k in range(m - 1):
        if a[k][k] == 0:
            for i in range(k + 1, m):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, m):
            for j in range(k + 1, m):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[m - 1][m - 1]


def solve_rational(a, b):
    """Solve a x = b exactly over the rationals; a must be nonsingular."""
    m = len(a)
    if m == 0:
        return []
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    for col in range(m):
        pivot = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("singular linking matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[m] for row in aug]


def post_surgery_linking(a, l_a, l_b, lk0=0):
    """Linking number of two curves after surgery along a framed link with
    linking matrix a:  lk0 - l_a^T A^{-1} l_b, as an exact Fraction.

    l_a and l_b are the vectors of linking numbers of the two curves with
    the surgery components; lk0 their linking number before surgery.
    """
    if len(l_a) != len(a) or len(l_b) != len(a):
        raise ValueError("linking vector length does not match matrix size")
    if len(a) and det(a) == 0:
        raise SingularMatrixError("singular linking matrix")
    if not a:
        return Fraction(lk0)
    x = solve_rational(a, l_b)
    return Fraction(lk0) - sum(Fraction(c) * xi for c, xi in zip(l_a, x))
