"""The convex region whose N-dilate holds exactly the constrained arrays.

Coordinates are the array cells ``u_i^(j)`` (column ``i``, row ``j``) minus one
cell per sum constraint; that cell is solved for from the constraint.  The free
cells are ordered row-major (row ``j`` outer, column ``i`` inner) and this order
is used for sampling, enumeration and serialisation alike.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .count import BudgetExceededError
from .gt import ParamTriple

DEFAULT_LATTICE_BUDGET = 2 * 10**7
_CHUNK = 1 << 17


@dataclass(frozen=True)
class RegionSpec:
    k: int
    beta: int
    free_indices: tuple[tuple[int, int], ...] = field(init=False)
    # (dependent cell, other cells on its anti-diagonal, l*beta)
    dependents: tuple[tuple[tuple[int, int], tuple[tuple[int, int], ...], int], ...] = field(
        init=False
    )

    def __post_init__(self) -> None:
        if self.k < 1 or self.beta < 1:
            raise ValueError("need k >= 1 and beta >= 1")
        m, b = self.k * self.beta, self.beta
        deps = []
        seen = set()
        for l in range(1, self.k // 2 + 1):
            span = 2 * b * l
            top = ((1, span), tuple((i, span - i + 1) for i in range(2, span + 1)), l * b)
            bottom = (
                (m - span + 1, m),
                tuple((m - span + i, m - i + 1) for i in range(2, span + 1)),
                l * b,
            )
            for dep in (top, bottom):
                if dep[0] not in seen:
                    seen.add(dep[0])
                    deps.append(dep)
        free = tuple(
            (i, j) for j in range(1, m + 1) for i in range(1, m + 1) if (i, j) not in seen
        )
        object.__setattr__(self, "dependents", tuple(deps))
        object.__setattr__(self, "free_indices", free)

    @property
    def size(self) -> int:
        return self.k * self.beta

    @property
    def dimension(self) -> int:
        return len(self.free_indices)


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    stderr: float
    samples: int
    seed: int | None
    method: str = "mc"

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
            "method": self.method,
        }


def _full_matrices(U: np.ndarray, spec: RegionSpec, scale) -> np.ndarray:
    """Stack of full ``m x m`` matrices (storage order ``[row, column]``) from free coordinates."""
    m = spec.size
    X = np.empty((U.shape[0], m, m), dtype=U.dtype)
    for a, (i, j) in enumerate(spec.free_indices):
        X[:, j - 1, i - 1] = U[:, a]
    for (i0, j0), others, lb in spec.dependents:
        acc = lb * scale - sum(X[:, j - 1, i - 1] for i, j in others)
        X[:, j0 - 1, i0 - 1] = acc
    return X


def members(U: np.ndarray, spec: RegionSpec, scale=1, tol: float = 0.0) -> np.ndarray:
    """Vectorised membership of the rows of ``U`` in ``scale`` times the region.

    ``U`` has one column per free index.  With an integer array and integer
    ``scale`` the test is exact.  ``tol`` relaxes every inequality, which helps
    for float points on the boundary.
    """
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[1] != spec.dimension:
        raise ValueError(f"expected shape (n, {spec.dimension}), got {U.shape}")
    X = _full_matrices(U, spec, scale)
    ok = np.all((X >= -tol) & (X <= scale + tol), axis=(1, 2))
    ok &= np.all(np.diff(X, axis=2) >= -tol, axis=(1, 2))  # rows non-decreasing
    ok &= np.all(np.diff(X, axis=1) <= tol, axis=(1, 2))  # columns non-increasing
    return ok


def region_membership(
    u: Mapping[tuple[int, int], float] | Sequence[float], spec: RegionSpec, scale=1
) -> bool:
    """Whether the free coordinates ``u`` (keyed by ``(i, j)``) describe a point of the region."""
    if isinstance(u, Mapping):
        if set(u) != set(spec.free_indices):
            raise ValueError("coordinates must be given for exactly the free indices")
        vec = [u[ij] for ij in spec.free_indices]
    else:
        vec = list(u)
        if len(vec) != spec.dimension:
            raise ValueError(f"expected {spec.dimension} coordinates, got {len(vec)}")
    dtype = object if all(isinstance(v, int) for v in vec) else float
    return bool(members(np.array([vec], dtype=dtype), spec, scale)[0])


def _integer_blocks(d: int, N: int):
    """All points of ``{0..N}^d`` in blocks of at most ``_CHUNK`` rows."""
    inner = 0
    while inner < d and (N + 1) ** (inner + 1) <= _CHUNK:
        inner += 1
    inner_pts = np.indices((N + 1,) * inner).reshape(inner, -1).T.astype(np.int64)
    for outer in itertools.product(range(N + 1), repeat=d - inner):
        block = np.empty((inner_pts.shape[0], d), np.int64)
        block[:, : d - inner] = outer
        block[:, d - inner :] = inner_pts
        yield block


def lattice_count_dilate(p: ParamTriple, budget: int = DEFAULT_LATTICE_BUDGET) -> int:
    """Number of integer points in ``N`` times the region (free coordinates in ``0..N``)."""
    spec = RegionSpec(p.k, p.beta)
    d = spec.dimension
    estimate = (p.N + 1) ** d
    if estimate > budget:
        raise BudgetExceededError(estimate, budget, "lattice enumeration")
    total = 0
    for block in _integer_blocks(d, p.N):
        total += int(np.count_nonzero(members(block, spec, p.N)))
    return total


def _stream(seed: int, worker: int) -> np.random.Generator:
    # Philox is counter-based; each (seed, worker) pair gets its own key.
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(worker,))))


def split_samples(samples: int, workers: int) -> list[int]:
    base, extra = divmod(samples, workers)
    return [base + (w < extra) for w in range(workers)]


def mc_volume(spec: RegionSpec, samples: int, seed: int, workers: int = 1) -> VolumeEstimate:
    """Hit-or-miss estimate of the region's volume inside the unit cube.

    The estimate depends on ``(seed, workers)``: worker ``w`` draws its share of
    the samples from the stream keyed by ``(seed, w)``.
    """
    if samples < 10_000:
        raise ValueError("mc_volume needs at least 10^4 samples")
    if workers < 1:
        raise ValueError("workers must be positive")
    d = spec.dimension

    def run(w: int, n: int) -> int:
        rng = _stream(seed, w)
        hits = 0
        done = 0
        while done < n:
            size = min(_CHUNK, n - done)
            hits += int(np.count_nonzero(members(rng.random((size, d)), spec)))
            done += size
        return hits

    shares = split_samples(samples, workers)
    if workers == 1:
        hits = run(0, shares[0])
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(run, range(workers), shares))
    phat = hits / samples
    return VolumeEstimate(phat, float(np.sqrt(phat * (1 - phat) / samples)), samples, seed)
