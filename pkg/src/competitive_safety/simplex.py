"""Exact primal simplex over Fractions with Bland's pivoting rule.

Only the packing form needed by the maximin program is supported::

    maximize  sum(y)   subject to   A y <= 1,  y >= 0

with every entry of ``A`` strictly positive, so the slack basis is
feasible and the optimum is bounded. The dual solution (one value per
row) is read off the final reduced costs of the slack columns.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class SimplexError(RuntimeError):
    pass


def solve_packing(A: Sequence[Sequence[Fraction]]) -> tuple[list[Fraction], list[Fraction], Fraction]:
    """Return ``(y, x, optimum)``: primal solution, dual solution, objective.

    ``x`` solves the covering dual ``min sum(x)  s.t.  A^T x >= 1, x >= 0``.
    """
    m = len(A)
    n = len(A[0])
    if any(a <= 0 for row in A for a in row):
        raise SimplexError("packing matrix must be strictly positive")

    # Columns 0..n-1 are structural, n..n+m-1 are slacks.
    width = n + m
    tab = [
        [Fraction(a) for a in A[i]] + [Fraction(int(i == j)) for j in range(m)] + [Fraction(1)]
        for i in range(m)
    ]
    # reduced costs c_j - z_j; objective value kept separately
    cost = [Fraction(1)] * n + [Fraction(0)] * m
    obj = Fraction(0)
    basis = [n + i for i in range(m)]

    for _ in range(10_000):
        entering = next((j for j in range(width) if cost[j] > 0), None)
        if entering is None:
            break
        best = None
        for i in range(m):
            a = tab[i][entering]
            if a > 0:
                key = (tab[i][-1] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise SimplexError("unbounded packing program")
        r = best[1]
        piv = tab[r][entering]
        tab[r] = [v / piv for v in tab[r]]
        for i in range(m):
            f = tab[i][entering]
            if i != r and f:
                tab[i] = [vi - f * vr for vi, vr in zip(tab[i], tab[r])]
        f = cost[entering]
        cost = [cj - f * vr for cj, vr in zip(cost, tab[r][:-1])]
        obj += f * tab[r][-1]
        basis[r] = entering
    else:
        raise SimplexError("iteration limit reached")

    y = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            y[b] = tab[i][-1]
    x = [-cost[n + i] for i in range(m)]
    return y, x, obj
