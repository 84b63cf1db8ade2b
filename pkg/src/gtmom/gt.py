"""Signatures, Gelfand-Tsetlin patterns, tableaux and constrained integer arrays.

Three equivalent encodings of one combinatorial set are handled here:

* Gelfand-Tsetlin patterns of depth ``2*k*beta`` whose top row is
  ``(N, ..., N, 0, ..., 0)`` and whose rows ``2*j*beta`` sum to ``N*j*beta``;
* semistandard tableaux of that top shape with exactly ``N*beta`` entries from
  each block ``{2*beta*(j-1)+1, ..., 2*beta*j}``;
* ``k*beta`` by ``k*beta`` integer arrays, monotone along rows and columns,
  with ``k - 1`` anti-diagonal sum constraints.

Array entries are written ``x_i^(j)`` with ``i`` the column and ``j`` the row,
both 1-based.  They are stored as ``entries[j - 1][i - 1]``; :func:`cell` is the
only place that converts between the two.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from functools import lru_cache
from itertools import accumulate
from typing import Any, Iterable, Sequence


class ValidationError(ValueError):
    """A well-formed object that is not a member of the set an operation needs."""


def _as_int(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class ParamTriple:
    """Matrix size ``N``, outer moment ``k`` and inner exponent ``beta``."""

    N: int
    k: int
    beta: int

    def __post_init__(self) -> None:
        _as_int(self.N, "N")
        _as_int(self.k, "k")
        _as_int(self.beta, "beta")
        if self.N < 0 or self.k < 1 or self.beta < 1:
            raise ValueError(f"need N >= 0, k >= 1, beta >= 1; got {self}")

    @property
    def size(self) -> int:
        """Side length ``k*beta`` of the constrained arrays."""
        return self.k * self.beta

    @property
    def depth(self) -> int:
        return 2 * self.k * self.beta

    def as_dict(self) -> dict[str, int]:
        return {"N": self.N, "k": self.k, "beta": self.beta}


@dataclass(frozen=True)
class Signature:
    """Non-increasing tuple of non-negative integers; trailing zeros count."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        try:
            parts = tuple(map(operator.index, self.parts))
        except TypeError:
            raise ValueError(f"signature parts must be integers: {self.parts!r}") from None
        object.__setattr__(self, "parts", parts)
        if parts and parts[-1] < 0:
            raise ValueError(f"negative part in {parts}")
        if not all(map(operator.ge, parts, parts[1:])):
            raise ValueError(f"signature {parts} is not non-increasing")

    @property
    def length(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, idx):
        return self.parts[idx]

    def __repr__(self) -> str:
        return f"Signature{self.parts}"


def _sig(s: Signature | Sequence[int]) -> Signature:
    return s if isinstance(s, Signature) else Signature(tuple(s))


def _interlaces(lower: Sequence[int], upper: Sequence[int]) -> bool:
    return all(map(operator.ge, upper, lower)) and all(map(operator.ge, lower, upper[1:]))


def interlaces(lower: Signature | Sequence[int], upper: Signature | Sequence[int]) -> bool:
    """True iff ``upper_1 >= lower_1 >= upper_2 >= ... >= lower_M >= upper_{M+1}``."""
    lower, upper = _sig(lower), _sig(upper)
    if len(upper) != len(lower) + 1:
        raise ValueError(
            f"interlacing needs lengths M and M+1, got {len(lower)} and {len(upper)}"
        )
    return _interlaces(lower.parts, upper.parts)


@lru_cache(maxsize=1 << 16)
def _trusted_signature(parts: tuple[int, ...]) -> Signature:
    s = object.__new__(Signature)
    object.__setattr__(s, "parts", parts)
    return s


def _check_rows(rows: Sequence[tuple[int, ...]]) -> None:
    for i, row in enumerate(rows):
        if len(row) != i + 1:
            raise ValueError(f"row {i + 1} has length {len(row)}, expected {i + 1}")
    for i in range(len(rows) - 1):
        if not _interlaces(rows[i], rows[i + 1]):
            raise ValidationError(f"rows {i + 1} and {i + 2} do not interlace")


@dataclass(frozen=True)
class GTPattern:
    """Interlacing rows ``rows[0] < rows[1] < ...`` with ``len(rows[i]) == i + 1``."""

    rows: tuple[Signature, ...]

    def __post_init__(self) -> None:
        rows = tuple(_sig(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        _check_rows([r.parts for r in rows])

    @classmethod
    def from_lists(cls, rows: Iterable[Sequence[int]]) -> "GTPattern":
        try:
            parts = [tuple(map(operator.index, r)) for r in rows]
        except TypeError:
            raise ValueError("pattern entries must be integers") from None
        if parts:
            Signature(parts[-1])
        _check_rows(parts)
        # interlacing below a valid top row forces every row to be a signature
        return cls._unchecked(parts)

    @classmethod
    def _unchecked(cls, rows: Iterable[tuple[int, ...]]) -> "GTPattern":
        """Build from rows already known to interlace (skips validation)."""
        g = object.__new__(cls)
        object.__setattr__(g, "rows", tuple(map(_trusted_signature, rows)))
        return g

    @property
    def depth(self) -> int:
        return len(self.rows)

    @property
    def top(self) -> Signature:
        return self.rows[-1]

    def row(self, d: int) -> Signature:
        """Row of length ``d`` (1-based depth index)."""
        return self.rows[d - 1]

    def to_json(self) -> list[list[int]]:
        return [list(r.parts) for r in self.rows]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]]) -> "GTPattern":
        return cls.from_lists(data)


@dataclass(frozen=True)
class Tableau:
    """Semistandard filling of ``shape`` with entries ``1..len(shape)``.

    ``rows`` holds one tuple per part of the shape, including empty rows for
    zero parts.
    """

    shape: Signature
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        shape = _sig(self.shape)
        try:
            rows = tuple(tuple(map(operator.index, r)) for r in self.rows)
        except TypeError:
            raise ValueError("tableau entries must be integers") from None
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "rows", rows)
        M = len(shape)
        if len(rows) != M:
            raise ValueError(f"tableau has {len(rows)} rows, shape has {M}")
        prev: tuple[int, ...] = ()
        for r, row in enumerate(rows):
            if len(row) != shape[r]:
                raise ValueError(f"row {r + 1} has {len(row)} entries, shape needs {shape[r]}")
            if row and (row[0] < 1 or row[-1] > M):
                raise ValidationError(f"row {r + 1} has entries outside 1..{M}")
            if not all(map(operator.le, row, row[1:])):
                raise ValidationError(f"row {r + 1} is not weakly increasing")
            if r and not all(map(operator.lt, prev, row)):
                raise ValidationError(f"row {r + 1} breaks a strictly increasing column")
            prev = row

    def to_json(self) -> dict[str, Any]:
        return {"shape": list(self.shape.parts), "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Tableau":
        return cls(Signature(tuple(data["shape"])), tuple(tuple(r) for r in data["rows"]))


def cell(i: int, j: int) -> tuple[int, int]:
    """Storage index ``(row, column)`` of ``x_i^(j)`` (column ``i``, row ``j``, 1-based)."""
    return j - 1, i - 1


@dataclass(frozen=True)
class ConstrainedArray:
    """A ``k*beta`` square integer array; membership is checked by :func:`validate_array`."""

    params: ParamTriple
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        try:
            entries = tuple(tuple(map(operator.index, row)) for row in self.entries)
        except TypeError:
            raise ValueError("array entries must be integers") from None
        object.__setattr__(self, "entries", entries)
        m = self.params.size
        if len(entries) != m or any(len(row) != m for row in entries):
            raise ValueError(f"array must be {m}x{m}")

    def x(self, i: int, j: int) -> int:
        """Entry ``x_i^(j)``."""
        r, c = cell(i, j)
        return self.entries[r][c]

    def to_json(self) -> dict[str, Any]:
        return {"params": self.params.as_dict(), "matrix": [list(r) for r in self.entries]}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "ConstrainedArray":
        return cls(ParamTriple(**data["params"]), tuple(tuple(r) for r in data["matrix"]))


@lru_cache(maxsize=256)
def top_signature(p: ParamTriple) -> Signature:
    m = p.size
    return Signature((p.N,) * m + (0,) * m)


@lru_cache(maxsize=256)
def sum_constraints(p: ParamTriple) -> tuple[tuple[tuple[tuple[int, int], ...], int], ...]:
    """Anti-diagonal constraints as ``(cells, target)``, cells given as 1-based ``(i, j)``.

    For even ``k`` the two constraints at ``l = k/2`` name the same diagonal and
    are listed once, leaving ``k - 1`` constraints in total.
    """
    m, b = p.size, p.beta
    out = []
    seen = set()
    for l in range(1, p.k // 2 + 1):
        span = 2 * b * l
        top_left = tuple((i, span - i + 1) for i in range(1, span + 1))
        bottom_right = tuple((m - span + i, m - i + 1) for i in range(1, span + 1))
        for cells in (top_left, bottom_right):
            key = frozenset(cells)
            if key not in seen:
                seen.add(key)
                out.append((cells, l * b * p.N))
    return tuple(out)


def _is_monotone(rows: Sequence[Sequence[int]]) -> bool:
    """Rows non-decreasing left to right, columns non-increasing top to bottom."""
    for row in rows:
        if not all(map(operator.le, row, row[1:])):
            return False
    for upper, lower in zip(rows, rows[1:]):
        if not all(map(operator.ge, upper, lower)):
            return False
    return True


def validate_array(x: ConstrainedArray) -> bool:
    """Membership of ``x`` in the constrained set: bounds, sums and monotonicity."""
    N = x.params.N
    rows = x.entries
    if any(min(row) < 0 or max(row) > N for row in rows):
        return False
    for cells, target in sum_constraints(x.params):
        if sum(rows[j - 1][i - 1] for i, j in cells) != target:
            return False
    return _is_monotone(rows)


def _check_shape(pattern: GTPattern, p: ParamTriple) -> None:
    if pattern.depth != p.depth:
        raise ValueError(f"pattern depth {pattern.depth}, expected {p.depth}")
    if pattern.top != top_signature(p):
        raise ValueError(f"top row {pattern.top.parts} is not {top_signature(p).parts}")


def validate_gt_constraints(pattern: GTPattern, p: ParamTriple) -> bool:
    """Rows of length ``2*j*beta`` must sum to ``N*j*beta`` for ``j = 1..k``."""
    _check_shape(pattern, p)
    b = p.beta
    return all(
        sum(pattern.rows[2 * j * b - 1].parts) == p.N * j * b for j in range(1, p.k + 1)
    )


def validate_tableau_constraints(t: Tableau, p: ParamTriple) -> bool:
    """Each block ``{2b(j-1)+1..2bj}`` must supply exactly ``N*beta`` entries."""
    if t.shape != top_signature(p):
        raise ValueError(f"tableau shape {t.shape.parts} is not {top_signature(p).parts}")
    width = 2 * p.beta
    blocks = [0] * p.k
    for row in t.rows:
        for v in row:
            blocks[(v - 1) // width] += 1
    return all(c == p.N * p.beta for c in blocks)


def gt_to_tableau(pattern: GTPattern) -> Tableau:
    """Insert ``i`` into the cells of ``row(i)`` minus ``row(i-1)``."""
    M = pattern.depth
    parts = [r.parts for r in pattern.rows]
    filled = []
    for r in range(M):
        row: list[int] = []
        prev = 0
        for i in range(r + 1, M + 1):
            cur = parts[i - 1][r]
            if cur != prev:
                row += [i] * (cur - prev)
                prev = cur
        filled.append(tuple(row))
    return Tableau(pattern.top, tuple(filled))


def tableau_to_gt(t: Tableau) -> GTPattern:
    """Row ``i`` of the pattern is the shape formed by entries ``<= i``."""
    M = len(t.shape)
    cums = []
    for row in t.rows:
        c = [0] * (M + 1)
        for v in row:
            c[v] += 1
        cums.append(list(accumulate(c)))
    cols = list(zip(*cums))  # cols[i][r] = entries <= i in row r
    # a semistandard filling always yields interlacing rows
    return GTPattern._unchecked(cols[i][:i] for i in range(1, M + 1))


def gt_to_array(pattern: GTPattern, p: ParamTriple) -> ConstrainedArray:
    """Relabel the non-fixed coordinates of a constrained pattern as an array."""
    try:
        ok = validate_gt_constraints(pattern, p)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    if not ok:
        raise ValidationError("pattern violates the row-sum constraints")
    return ConstrainedArray(p, _relabel_to_array(pattern, p))


def _relabel_to_array(pattern: GTPattern, p: ParamTriple) -> tuple[tuple[int, ...], ...]:
    m = p.size
    rows = pattern.rows
    X = [[0] * m for _ in range(m)]
    # rows 2m-j, j = 1..m-1: lambda_{m-i+1} -> x_i^(j-i+1)
    for j in range(1, m):
        lam = rows[2 * m - j - 1].parts
        for i in range(1, j + 1):
            X[j - i][i - 1] = lam[m - i]
    # rows m+1-j, j = 1..m: lambda_{m+2-j-i} -> x_{i+j-1}^(m-i+1)
    for j in range(1, m + 1):
        lam = rows[m - j].parts
        for i in range(1, m + 2 - j):
            X[m - i][i + j - 2] = lam[m + 1 - j - i]
    return tuple(tuple(r) for r in X)


def _relabel_to_rows(entries: Sequence[Sequence[int]], p: ParamTriple) -> list[tuple[int, ...]]:
    m, N = p.size, p.N
    rows: list[tuple[int, ...]] = [()] * (2 * m)
    rows[2 * m - 1] = (N,) * m + (0,) * m
    for j in range(1, m):
        free = [0] * j
        for i in range(1, j + 1):
            free[j - i] = entries[j - i][i - 1]  # position m-i+1 of the row
        rows[2 * m - j - 1] = (N,) * (m - j) + tuple(free) + (0,) * (m - j)
    for j in range(1, m + 1):
        length = m + 1 - j
        row = [0] * length
        for i in range(1, length + 1):
            row[length - i] = entries[m - i][i + j - 2]
        rows[m - j] = tuple(row)
    return rows


def array_to_gt(x: ConstrainedArray) -> GTPattern:
    """Inverse relabelling; fixed coordinates of the pattern are restored."""
    if not validate_array(x):
        raise ValidationError("array is not a member of the constrained set")
    rows = _relabel_to_rows(x.entries, x.params)
    # integer rows under the fixed top (N^m, 0^m): interlacing is the only check left
    _check_rows(rows)
    return GTPattern._unchecked(rows)
