"""Exact counts of the constrained arrays, i.e. the moments of moments.

Two independent routes are provided.  :func:`enumerate_count` visits every
array by depth-first search in row-major order (compiled with numba);
:func:`dp_count` sweeps the anti-diagonals, keeping one big-integer count per
diagonal state.  Monotonicity along rows and columns only couples adjacent
anti-diagonals, and it does so by interlacing: the cell ``(r, c)`` on diagonal
``d + 1`` lies between its left neighbour and its upper neighbour on diagonal
``d``.  For ``k = 1`` there are no sum constraints and :func:`weyl_dimension`
gives a closed form.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numba
import numpy as np

from .gt import ParamTriple, Signature, sum_constraints, top_signature

log = logging.getLogger(__name__)

DEFAULT_ENUMERATION_BUDGET = 5 * 10**9


class BudgetExceededError(RuntimeError):
    """The estimated cost of an exhaustive search exceeds the allowed budget."""

    def __init__(self, estimate: int, budget: int, what: str = "enumeration"):
        super().__init__(f"{what} cost estimate {estimate} exceeds budget {budget}")
        self.estimate = estimate
        self.budget = budget


@dataclass(frozen=True)
class CountResult:
    params: ParamTriple
    count: int
    method: str  # "enumerate" or "dp"

    def to_json(self) -> dict:
        return {**self.params.as_dict(), "count": str(self.count), "method": self.method}


def weyl_dimension(lam: Signature | Sequence[int], m: int) -> int:
    """Number of semistandard tableaux of shape ``lam`` with entries ``<= m``."""
    parts = tuple(lam)
    if len(parts) != m:
        raise ValueError(f"signature has length {len(parts)}, expected {m}")
    num = den = 1
    for i in range(m):
        for j in range(i + 1, m):
            num *= parts[i] - parts[j] + j - i
            den *= j - i
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError("Weyl dimension product is not an integer")
    return q


def monotone_array_count(m: int, N: int) -> int:
    """Arrays in ``[0, N]^(m x m)`` monotone in rows and columns (MacMahon box formula).

    Upper bound on the leaves of the exhaustive search; used as its cost estimate.
    """
    r = Fraction(1)
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            r *= Fraction(i + j + N - 1, i + j - 1)
    return int(r)


# --------------------------------------------------------------------------
# exhaustive search
# --------------------------------------------------------------------------

@numba.njit(cache=True)
def _dfs_count(m, N, target, diag_lo, diag_hi):  # pragma: no cover - compiled
    mm = m * m
    vals = np.zeros(mm, np.int64)
    cur = np.zeros(mm, np.int64)
    hi = np.zeros(mm, np.int64)
    count = 0
    p = 0
    cur[0] = 0
    hi[0] = N
    while p >= 0:
        if cur[p] > hi[p]:
            p -= 1
            if p >= 0:
                cur[p] += 1
            continue
        vals[p] = cur[p]
        t = target[p]
        if t >= 0:
            r = p // m
            c = p - r * m
            d = r + c
            s = 0
            for rr in range(diag_lo[d], diag_hi[d] + 1):
                s += vals[rr * m + d - rr]
            if s != t:
                if s > t:
                    # the sum only grows with this cell's value
                    cur[p] = hi[p] + 1
                else:
                    cur[p] += 1
                continue
        if p == mm - 1:
            count += 1
            cur[p] += 1
            continue
        p += 1
        r = p // m
        c = p - r * m
        cur[p] = vals[p - 1] if c > 0 else 0
        hi[p] = vals[p - m] if r > 0 else N
    return count


def enumerate_count(p: ParamTriple, budget: int = DEFAULT_ENUMERATION_BUDGET) -> CountResult:
    """Count arrays by visiting each one.

    Cells are filled in row-major order, each between its left neighbour and its
    upper neighbour; a constrained anti-diagonal is summed when its last cell
    (bottom-left end) is placed.
    """
    m = p.size
    estimate = monotone_array_count(m, p.N)
    if estimate > budget:
        raise BudgetExceededError(estimate, budget)
    target = np.full(m * m, -1, np.int64)
    diag_lo = np.array([max(0, d - m + 1) for d in range(2 * m - 1)], np.int64)
    diag_hi = np.array([min(d, m - 1) for d in range(2 * m - 1)], np.int64)
    for cells, t in sum_constraints(p):
        # last cell in row-major order is the one in the lowest row
        i, j = max(cells, key=lambda ij: ij[1])
        target[(j - 1) * m + (i - 1)] = t
    count = int(_dfs_count(m, p.N, target, diag_lo, diag_hi))
    return CountResult(p, count, "enumerate")


# --------------------------------------------------------------------------
# anti-diagonal dynamic program
# --------------------------------------------------------------------------

def _diag_rows(m: int, d: int) -> range:
    """Rows (0-based) of the cells on anti-diagonal ``d`` = row + column."""
    return range(max(0, d - m + 1), min(d, m - 1) + 1)


def _diagonal_targets(p: ParamTriple) -> dict[int, int]:
    """Anti-diagonal index (row + column, 0-based) -> required sum."""
    m, b = p.size, p.beta
    targets = {}
    for l in range(1, p.k // 2 + 1):
        targets[2 * b * l - 1] = l * b * p.N
        targets[2 * m - 2 * b * l - 1] = l * b * p.N
    return targets


def _sum_mask(shape: tuple[int, ...], target: int) -> np.ndarray:
    total = np.zeros(shape, np.int64)
    for ax, n in enumerate(shape):
        idx = [1] * len(shape)
        idx[ax] = n
        total = total + np.arange(n).reshape(idx)
    return total == target


def _dp_prefix(p: ParamTriple) -> int:
    m, N = p.size, p.N
    n1 = N + 1
    targets = _diagonal_targets(p)
    cur = np.ones(n1, dtype=object)
    if 0 in targets:
        cur[~_sum_mask(cur.shape, targets[0])] = 0
    for d in range(2 * m - 2):
        rows = list(_diag_rows(m, d))
        nrows = list(_diag_rows(m, d + 1))
        pos = {r: a for a, r in enumerate(nrows)}
        L = len(rows)
        # prefix sums with a leading zero slab on every axis
        P = np.zeros((n1 + 1,) * L, dtype=object)
        P[(slice(1, None),) * L] = cur
        for ax in range(L):
            P = np.cumsum(P, axis=ax)
        y = np.indices((n1,) * len(nrows))
        lo, hi = [], []
        for r in rows:
            c = d - r
            hi.append(y[pos[r]] if c + 1 <= m - 1 else np.full(y.shape[1:], N))
            lo.append(y[pos[r + 1]] if r + 1 <= m - 1 else np.zeros(y.shape[1:], int))
        new = np.zeros((n1,) * len(nrows), dtype=object)
        for corner in itertools.product((0, 1), repeat=L):
            idx = tuple(lo[a] if corner[a] else hi[a] + 1 for a in range(L))
            if sum(corner) % 2:
                new = new - P[idx]
            else:
                new = new + P[idx]
        empty = np.zeros(new.shape, bool)
        for a in range(L):
            empty |= lo[a] > hi[a]
        new[empty] = 0
        if d + 1 in targets:
            new[~_sum_mask(new.shape, targets[d + 1])] = 0
        cur = new
    return int(cur.sum())


def _successors(state: tuple[int, ...], m: int, d: int, N: int) -> Iterator[tuple[int, ...]]:
    val = dict(zip(_diag_rows(m, d), state))
    ranges = []
    for r in _diag_rows(m, d + 1):
        c = d + 1 - r
        lo = val[r] if c >= 1 else 0
        hi = val[r - 1] if r >= 1 else N
        ranges.append(range(lo, hi + 1))
    return itertools.product(*ranges)


def _dp_naive(p: ParamTriple) -> int:
    m, N = p.size, p.N
    targets = _diagonal_targets(p)
    states = {(v,): 1 for v in range(N + 1) if 0 not in targets or v == targets[0]}
    for d in range(2 * m - 2):
        t = targets.get(d + 1)
        new: dict[tuple[int, ...], int] = {}
        for s, c in states.items():
            for y in _successors(s, m, d, N):
                if t is not None and sum(y) != t:
                    continue
                new[y] = new.get(y, 0) + c
        states = new
    return sum(states.values())


def dp_count(p: ParamTriple, transitions: str = "prefix") -> CountResult:
    """Count arrays with the anti-diagonal dynamic program.

    ``transitions="prefix"`` evaluates every layer as box sums over a
    multidimensional prefix-sum table; ``"naive"`` pushes each state to each of
    its successors.  Both give identical integers.
    """
    if transitions == "prefix":
        count = _dp_prefix(p)
    elif transitions == "naive":
        count = _dp_naive(p)
    else:
        raise ValueError(f"unknown transitions {transitions!r}")
    return CountResult(p, count, "dp")


def iter_members(p: ParamTriple) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield every array of the constrained set as a tuple of rows.

    States that cannot be completed are discarded up front by a backward sweep,
    so the walk only visits prefixes of actual members.
    """
    m, N = p.size, p.N
    targets = _diagonal_targets(p)
    last = 2 * m - 2
    alive: dict[tuple[int, ...], list] = {
        (v,): [] for v in range(N + 1) if last not in targets or v == targets[last]
    }
    succ: list[dict[tuple[int, ...], list]] = [dict() for _ in range(last + 1)]
    succ[last] = alive
    for d in range(last - 1, -1, -1):
        L = len(_diag_rows(m, d))
        t = targets.get(d)
        layer = {}
        for s in itertools.combinations_with_replacement(range(N, -1, -1), L):
            if t is not None and sum(s) != t:
                continue
            nxt = [y for y in _successors(s, m, d, N) if y in succ[d + 1]]
            if nxt:
                layer[s] = nxt
        succ[d] = layer

    rows_of = [list(_diag_rows(m, d)) for d in range(last + 1)]
    path: list[tuple[int, ...]] = [()] * (last + 1)

    def walk(d: int, s: tuple[int, ...]):
        path[d] = s
        if d == last:
            X = [[0] * m for _ in range(m)]
            for dd in range(last + 1):
                for r, v in zip(rows_of[dd], path[dd]):
                    X[r][dd - r] = v
            yield tuple(tuple(r) for r in X)
            return
        for y in succ[d][s]:
            yield from walk(d + 1, y)

    for s in succ[0]:
        yield from walk(0, s)


def k1_count(p: ParamTriple) -> int:
    """Closed form for ``k = 1``: Weyl dimension of the top row in ``2*beta`` variables."""
    if p.k != 1:
        raise ValueError("closed form only holds for k = 1")
    return weyl_dimension(top_signature(p), 2 * p.beta)
