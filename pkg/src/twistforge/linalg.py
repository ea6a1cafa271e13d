"""Small dense linear algebra over exact rationals.

Matrices are lists of rows of ``mpq``.  Sizes stay in the low hundreds, so
plain Gauss-Jordan elimination is adequate.
"""
from .rational import ONE, ZERO, to_q


def as_matrix(rows):
    return [[to_q(x) for x in row] for row in rows]


def rref(rows, ncols=None):
    """Reduced row echelon form.  Returns ``(matrix, pivot_columns)``."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        row_r = m[r]
        nz = [(j, x) for j, x in enumerate(row_r) if x != 0]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                row_i = m[i]
                for j, x in nz:
                    row_i[j] -= f * x
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r] + [[ZERO] * ncols for _ in range(len(m) - r)], pivots


def rank(rows):
    if not rows:
        return 0
    return len(rref(rows)[1])


def solve(a, b):
    """Solve ``a @ x = b`` for square ``a``.

    Returns ``(x, defect)``; ``x`` is None when ``a`` is singular and
    ``defect`` is ``n - rank(a)``.
    """
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    red, pivots = rref(aug, ncols=n)
    if len(pivots) < n:
        return None, n - len(pivots)
    return [red[i][n] for i in range(n)], 0


def inverse(a):
    n = len(a)
    aug = [list(a[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    red, pivots = rref(aug, ncols=n)
    if len(pivots) < n:
        raise ZeroDivisionError(f"singular matrix (rank defect {n - len(pivots)})")
    return [row[n:] for row in red]


def matmul(a, b):
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), ZERO) for col in cols] for row in a]


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), ZERO) for row in a]


def identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
