"""Exact two-phase simplex over Fractions with Bland's rule.

Solves  max c·x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
Small dense problems only (tens of rows and columns).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import GlnqError, Infeasible


class Unbounded(GlnqError):
    pass


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple
    y_ub: tuple  # duals of the inequality rows, all >= 0
    y_eq: tuple


def _pivot(T, basis, r, c):
    piv = T[r][c]
    row = [v / piv for v in T[r]]
    T[r] = row
    for i, other in enumerate(T):
        if i != r and other[c] != 0:
            f = other[c]
            T[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _optimize(T, basis, cost, allowed):
    """Maximize cost over the tableau, entering only columns in `allowed`."""
    m = len(T)
    while True:
        enter = None
        for j in allowed:
            if j in basis:
                continue
            d = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m) if T[i][j] != 0)
            if d > 0:
                enter = j
                break
        if enter is None:
            return
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise Unbounded("objective is unbounded")
        _pivot(T, basis, best[1], enter)


def simplex_max(c: Sequence, A_ub: Sequence[Sequence], b_ub: Sequence,
                A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    F = Fraction
    nv = len(c)
    mu, me = len(A_ub), len(A_eq)
    m = mu + me
    rows, sign = [], []
    for i in range(m):
        coeffs = [F(v) for v in (A_ub[i] if i < mu else A_eq[i - mu])]
        rhs = F(b_ub[i] if i < mu else b_eq[i - mu])
        row = coeffs + [F(0)] * (mu + m) + [rhs]
        if i < mu:
            row[nv + i] = F(1)
        s = -1 if rhs < 0 else 1
        if s < 0:
            row = [-v for v in row]
        row[nv + mu + i] = F(1)
        rows.append(row)
        sign.append(s)
    basis = [nv + mu + i for i in range(m)]
    real_cols = list(range(nv + mu))

    phase1 = [F(0)] * (nv + mu) + [F(-1)] * m
    _optimize(rows, basis, phase1, real_cols)
    if sum(rows[i][-1] for i in range(m) if basis[i] >= nv + mu) > 0:
        raise Infeasible("linear program is infeasible")
    # drive zero-level artificials out where possible; leftover rows are redundant
    for i in range(m):
        if basis[i] >= nv + mu:
            for j in real_cols:
                if rows[i][j] != 0 and j not in basis:
                    _pivot(rows, basis, i, j)
                    break

    cost = [F(v) for v in c] + [F(0)] * (mu + m)
    _optimize(rows, basis, cost, real_cols)

    x = [F(0)] * nv
    for i, b in enumerate(basis):
        if b < nv:
            x[b] = rows[i][-1]
    # the artificial columns hold B^-1 of the sign-adjusted system
    y = []
    for k in range(m):
        col = nv + mu + k
        y.append(sign[k] * sum(cost[basis[i]] * rows[i][col] for i in range(m)))
    value = sum(F(ci) * xi for ci, xi in zip(c, x))
    return LPResult(value, tuple(x), tuple(y[:mu]), tuple(y[mu:]))
