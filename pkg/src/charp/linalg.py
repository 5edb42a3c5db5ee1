"""Dense linear algebra over F_q, used for p-independence and bounded oracles."""

from __future__ import annotations


def row_reduce(rows, gf):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [list(r) for r in rows]
    pivots = []
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = gf.inv(rows[r][c])
        rows[r] = [gf.mul(x, inv) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [gf.sub(x, gf.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(rows, gf) -> int:
    if not rows:
        return 0
    return len(row_reduce(rows, gf)[1])


def solve(columns, target, gf):
    """Solve sum_j x_j * columns[j] = target; returns a solution list or None."""
    n = len(columns)
    m = len(target)
    if n == 0:
        return [] if not any(target) else None
    aug = [[columns[j][i] for j in range(n)] + [target[i]] for i in range(m)]
    red, pivots = row_reduce(aug, gf)
    if n in pivots:
        return None
    x = [0] * n
    for row, c in zip(red, pivots):
        x[c] = row[n]
    return x
