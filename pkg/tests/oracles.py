"""Independent brute-force oracles used to freeze expected values.

Everything here is written as directly as possible from the definitions,
with no shared code paths into the package: border paths are walked step by
step, diagonals are counted one at a time, Gelfand-Tsetlin patterns are
enumerated recursively.  The oracles are slow and that is fine.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def walk_border(J, k, n):
    """Walk the border path of the (n-k) x k box from the northeast corner.

    Steps 1..n; a step in J moves south, otherwise west.  Returns the list
    of column positions recorded after each south step, which is the
    partition row by row.
    """
    J = set(J)
    row, col = 0, k
    parts = []
    for step in range(1, n + 1):
        if step in J:
            row += 1
            parts.append(col)
        else:
            col -= 1
    assert row == n - k and col == 0
    return tuple(p for p in parts if p > 0)


def diag_count(outer, inner, d):
    """Number of boxes of outer minus inner on the diagonal c - r = d."""
    total = 0
    for r in range(1, len(outer) + 1):
        for c in range(1, outer[r - 1] + 1):
            if r <= len(inner) and c <= inner[r - 1]:
                continue
            if c - r == d:
                total += 1
    return total


def max_diag_bruteforce(outer, inner):
    span = range(-len(outer) - 1, (outer[0] if outer else 0) + 2)
    return max((diag_count(outer, inner, d) for d in span), default=0)


def gt_patterns(top):
    """All Gelfand-Tsetlin patterns with the given (weakly decreasing) top row."""
    rows = [list(top)]
    out = []

    def descend(rows):
        prev = rows[-1]
        if len(prev) == 1:
            out.append([tuple(r) for r in rows])
            return
        def choose(i, row):
            if i == len(prev) - 1:
                descend(rows + [row])
                return
            lo, hi = prev[i + 1], prev[i]
            if row:
                hi = min(hi, row[-1])
            for v in range(lo, hi + 1):
                choose(i + 1, row + [v])
        choose(0, [])

    descend(rows)
    return out


def gt_dimension(r, k, n):
    """dim of the irreducible GL(n) module with highest weight r * omega_{n-k},
    counted by brute-force pattern enumeration."""
    top = (r,) * (n - k) + (0,) * k
    return len(gt_patterns(top))


def minor(matrix, rows, cols):
    """Exact determinant of the submatrix, cofactor expansion."""
    rows, cols = list(rows), sorted(cols)
    if not rows:
        return 1
    if len(rows) == 1:
        return matrix[rows[0]][cols[0]]
    total = 0
    for t, c in enumerate(cols):
        sub = minor(matrix, rows[1:], cols[:t] + cols[t + 1 :])
        term = matrix[rows[0]][c] * sub
        total += -term if t % 2 else term
    return total


def all_minors(matrix, n, size):
    return {J: minor(matrix, list(range(size)), list(J)) for J in combinations(range(n), size)}


def simplex_volume(points):
    """Exact volume of the simplex on d+1 points in Q^d."""
    base = points[0]
    mat = [[Fraction(x) - Fraction(b) for x, b in zip(p, base)] for p in points[1:]]
    d = len(mat)
    det = _det_fraction([row[:] for row in mat])
    fact = 1
    for i in range(2, d + 1):
        fact *= i
    return abs(det) / fact


def _det_fraction(mat):
    d = len(mat)
    det = Fraction(1)
    for col in range(d):
        piv = next((r for r in range(col, d) if mat[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        det *= mat[col][col]
        for r in range(col + 1, d):
            f = mat[r][col] / mat[col][col]
            for c in range(col, d):
                mat[r][c] -= f * mat[col][c]
    return det
