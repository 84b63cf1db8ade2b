"""Volumes of continuous Gelfand-Tsetlin patterns and the leading-coefficient formulas built from them.

Conventions: chamber points are non-decreasing (``x_1 <= ... <= x_n``), every
coordinate lives in ``[0, 1]``, and each delta function ``delta(sum x - c)`` is
resolved by solving for the last coordinate.  Integrals over a chamber
``W^n_[0,1]`` are written as integrals over the cube of the sorted point,
divided by ``n!``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._linalg import det_pivot
from .painleve import barnes_g
from .region import VolumeEstimate, _stream, split_samples

BOUNDARY_GAP = 1e-10
_MC_BLOCK = 1 << 15


@dataclass(frozen=True)
class ChamberPoint:
    """A point of the closed Weyl chamber ``x_1 <= ... <= x_n``."""

    coords: tuple[float, ...]

    def __post_init__(self) -> None:
        c = tuple(float(v) for v in self.coords)
        if any(b < a for a, b in zip(c, c[1:])):
            raise ValueError(f"coordinates are not non-decreasing: {c}")
        object.__setattr__(self, "coords", c)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def min_gap(self) -> float:
        return min((b - a for a, b in zip(self.coords, self.coords[1:])), default=math.inf)


def _chamber(x) -> ChamberPoint:
    return x if isinstance(x, ChamberPoint) else ChamberPoint(tuple(x))


def vol_gt(x) -> float:
    """Volume of continuous GT patterns with top row ``x``: ``Delta(x) / prod_{j<=n} (j-1)!``."""
    x = _chamber(x)
    n = len(x)
    if n < 2:
        raise ValueError("vol_gt needs n >= 2")
    c = x.coords
    vdm = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            vdm *= c[j] - c[i]
    return vdm / barnes_g(n + 1)


def _bspline_raw(a: np.ndarray, knots: np.ndarray) -> np.ndarray:
    """Explicit B-spline sum, broadcast over leading axes; ``knots`` has the knot axis last."""
    n = knots.shape[-1]
    a = np.asarray(a, dtype=knots.dtype)
    diff = knots[..., :, None] - knots[..., None, :]
    idx = np.arange(n)
    diff[..., idx, idx] = 1.0
    denom = np.prod(diff, axis=-1)
    gap = knots - a[..., None]
    terms = np.where(gap > 0, np.where(gap > 0, gap, 0.0) ** (n - 2), 0.0) / denom
    out = (n - 1) * np.sum(terms, axis=-1)
    inside = (a > knots[..., 0]) & (a < knots[..., -1])
    return np.where(inside, out, 0.0)


def bspline(a, knots) -> float | np.ndarray:
    """B-spline ``M(a; y_1, ..., y_n)`` with strictly increasing knots.

    ``a`` may be a scalar or an array.  The value is zero outside ``(y_1, y_n)``
    and the function integrates to one.
    """
    y = np.asarray(tuple(knots), dtype=float)
    if y.ndim != 1 or len(y) < 2:
        raise ValueError("need at least two knots")
    if np.any(np.diff(y) <= 0):
        raise ValueError("knots must be strictly increasing")
    out = _bspline_raw(np.asarray(a, dtype=float), np.broadcast_to(y, np.shape(a) + y.shape))
    return float(out) if np.ndim(out) == 0 else out


def trapezoid_constant(m: int, n: int) -> float:
    """``1 / ((n-m)!)^m * prod_{j=1}^{n-m} 1/(j-1)!``."""
    d = n - m
    return 1.0 / (math.factorial(d) ** m * barnes_g(d + 1))


def _band_product(z: np.ndarray, d: int) -> np.ndarray:
    n = z.shape[-1]
    out = np.ones(z.shape[:-1])
    for i in range(n):
        for j in range(i + 1, min(n, i + d + 1)):
            out = out * (z[..., j] - z[..., i])
    return out


def vol_trapezoid(z, y) -> float:
    """Volume of trapezoidal patterns between top row ``z`` (length n) and bottom row ``y`` (length m).

    Uses the B-spline determinant formula; requires ``n - m >= 2`` and ``z`` in
    the open chamber (gaps of at least ``BOUNDARY_GAP``).
    """
    z, y = _chamber(z), _chamber(y)
    n, m = len(z), len(y)
    if m < 1 or n - m < 2:
        raise ValueError("need m >= 1 and n - m >= 2")
    if z.min_gap() < BOUNDARY_GAP:
        raise ValueError("z is on the chamber boundary")
    zc, yc = np.array(z.coords), np.array(y.coords)
    if yc[0] <= zc[0] or yc[-1] >= zc[-1]:
        return 0.0
    d = n - m
    M = np.array([[bspline(yc[j], zc[i : i + d + 1]) for j in range(m)] for i in range(m)])
    det = float(det_pivot(M, dtype=np.longdouble))
    return trapezoid_constant(m, n) * float(_band_product(zc, d)) * det


def vol_trapezoid_total(z, y) -> float:
    """Like :func:`vol_trapezoid` but 0 on the chamber boundary instead of an error."""
    z = _chamber(z)
    if z.min_gap() < BOUNDARY_GAP:
        return 0.0
    return vol_trapezoid(z, y)


def _vol_trapezoid_batch(Z: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Row-wise :func:`vol_trapezoid_total` for stacks ``Z`` (S, n) and ``Y`` (S, m); float64 determinants."""
    S, n = Z.shape
    m = Y.shape[1]
    d = n - m
    M = np.empty((S, m, m))
    for i in range(m):
        knots = Z[:, i : i + d + 1]
        for j in range(m):
            M[:, i, j] = _bspline_raw(Y[:, j], knots)
    out = trapezoid_constant(m, n) * _band_product(Z, d) * np.linalg.det(M)
    bad = np.min(np.diff(Z, axis=1), axis=1) < BOUNDARY_GAP
    return np.where(bad, 0.0, out)


def _interlace_overlap(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Measure of ``{z in W^{m+1}_[0,1] : x < z, y < z}`` for stacks of rows ``x``, ``y`` (S, m)."""
    S, m = x.shape
    lo = np.concatenate([np.zeros((S, 1)), np.maximum(x, y)], axis=1)
    hi = np.concatenate([np.minimum(x, y), np.ones((S, 1))], axis=1)
    return np.prod(np.clip(hi - lo, 0.0, None), axis=1)


def _mc(fn, samples: int, seed: int, workers: int, method: str) -> VolumeEstimate:
    """Mean of ``fn(rng, size)`` over ``samples`` draws split across per-worker streams."""
    total = total_sq = 0.0
    for w, share in enumerate(split_samples(samples, workers)):
        rng = _stream(seed, w)
        done = 0
        while done < share:
            size = min(_MC_BLOCK, share - done)
            v = fn(rng, size)
            total += float(v.sum())
            total_sq += float((v * v).sum())
            done += size
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    return VolumeEstimate(mean, math.sqrt(var / samples), samples, seed, method)


def vol_double(x, y, n: int, samples: int = 200_000, seed: int = 0, workers: int = 1) -> VolumeEstimate:
    """``int_{W^n_[0,1]} Vol_m^n(z, x) Vol_m^n(z, y) dz`` for ``x, y`` of length m.

    For ``n = m + 1`` the inner volumes are interlacing indicators and the
    integral is a product of interval overlaps (exact).  Otherwise ``z`` is drawn
    as ``n`` sorted uniforms and the mean is divided by ``n!``.
    """
    x, y = _chamber(x), _chamber(y)
    m = len(x)
    if len(y) != m or m < 1:
        raise ValueError("x and y must have the same positive length")
    if n - m < 1:
        raise ValueError("need n > m")
    xa, ya = np.array([x.coords]), np.array([y.coords])
    if n == m + 1:
        return VolumeEstimate(float(_interlace_overlap(xa, ya)[0]), 0.0, 0, None, "exact")
    fact = math.factorial(n)

    def draw(rng, size):
        Z = np.sort(rng.random((size, n)), axis=1)
        X, Y = np.repeat(xa, size, axis=0), np.repeat(ya, size, axis=0)
        return _vol_trapezoid_batch(Z, X) * _vol_trapezoid_batch(Z, Y) / fact

    return _mc(draw, samples, seed, workers, "mc")


def _default_nodes(n: int) -> int:
    # the nested integrand is piecewise polynomial of degree <= n(n-1) + n - 1
    return (n * (n - 1) + n) // 2 + 1


def c2_slice_integral(beta: int, nodes: int | None = None) -> float:
    """Leading coefficient for ``k = 2`` from the squared-Vandermonde slice integral.

    ``1/((2b)! G(1+2b)^2) * int_{[0,1]^{2b}} delta(sum t - b) prod_{i<j} (t_i - t_j)^2 dt``
    with ``t_{2b} = b - sum_{i<2b} t_i``.  The inner integrals are piecewise
    polynomial in each outer variable with one break where the remaining sum
    crosses an integer, so Gauss-Legendre on each piece is exact up to rounding.
    """
    if not 1 <= beta <= 3:
        raise ValueError("c2_slice_integral supports 1 <= beta <= 3")
    n = 2 * beta
    q = nodes or _default_nodes(n)
    gx, gw = np.polynomial.legendre.leggauss(q)
    gx, gw = (gx + 1) / 2, gw / 2

    def expand(T: np.ndarray, S: np.ndarray, W: np.ndarray, level: int):
        rem = n - level  # variables still to place after this one, including the last
        R = beta - S
        a = np.maximum(0.0, R - rem)
        b = np.minimum(1.0, R)
        cut = np.clip(R - np.floor(R), a, b)
        outs_T, outs_S, outs_W = [], [], []
        for lo, hi in ((a, cut), (cut, b)):
            width = hi - lo
            keep = width > 0
            if not np.any(keep):
                continue
            lo_k, w_k = lo[keep], width[keep]
            t = lo_k[:, None] + w_k[:, None] * gx[None, :]
            outs_T.append(
                np.concatenate(
                    [np.repeat(T[keep], q, axis=0), t.reshape(-1, 1)], axis=1
                )
            )
            outs_S.append((S[keep][:, None] + t).ravel())
            outs_W.append((W[keep][:, None] * w_k[:, None] * gw[None, :]).ravel())
        if not outs_T:
            return np.empty((0, T.shape[1] + 1)), np.empty(0), np.empty(0)
        return np.concatenate(outs_T), np.concatenate(outs_S), np.concatenate(outs_W)

    def finish(T, S, W) -> float:
        last = beta - S
        ok = (last >= 0) & (last <= 1)
        full = np.concatenate([T[ok], last[ok, None]], axis=1)
        sq = np.ones(full.shape[0])
        for i in range(n):
            for j in range(i + 1, n):
                sq *= (full[:, j] - full[:, i]) ** 2
        return float(np.dot(W[ok], sq))

    def descend(T, S, W, level) -> float:
        if level == n:
            return finish(T, S, W)
        T, S, W = expand(T, S, W, level)
        if len(S) > 2_000_000 // max(1, q) and level < n - 1:
            # keep memory bounded by recursing point block by point block
            return sum(
                descend(T[i : i + 256], S[i : i + 256], W[i : i + 256], level + 1)
                for i in range(0, len(S), 256)
            )
        return descend(T, S, W, level + 1)

    integral = descend(np.empty((1, 0)), np.zeros(1), np.ones(1), 1)
    return integral / (math.factorial(n) * barnes_g(n + 1) ** 2)


def _slice_point(U: np.ndarray, total: float) -> tuple[np.ndarray, np.ndarray]:
    """Complete each row of ``U`` by ``total - sum`` and sort; also return the validity mask."""
    last = total - U.sum(axis=1)
    ok = (last >= 0) & (last <= 1)
    X = np.sort(np.concatenate([U, last[:, None]], axis=1), axis=1)
    return X, ok


def _vandermonde_rows(X: np.ndarray) -> np.ndarray:
    n = X.shape[1]
    out = np.ones(X.shape[0])
    for i in range(n):
        for j in range(i + 1, n):
            out = out * (X[:, j] - X[:, i])
    return out


def assemble_c_formula(
    k: int, beta: int, samples: int = 10**6, seed: int = 0, workers: int = 1
) -> VolumeEstimate:
    """Leading coefficient from the assembled GT-volume formula.

    ``k = 2``: the slice integral (deterministic, zero stderr).
    ``k = 3``: Monte Carlo of ``Vol^{2b}(x) Vol_(2b,3b)(x, x~) Vol^{2b}(x~)`` over
    ``x, x~`` in ``W^{2b}_[0,1]`` with ``sum x = sum x~ = b``.  For ``b = 1`` the
    middle factor is exact; otherwise one ``z`` in ``W^{3b}_[0,1]`` is drawn per
    sample.
    """
    if k == 2:
        if not 1 <= beta <= 2:
            raise ValueError("assemble_c_formula supports beta <= 2")
        return VolumeEstimate(c2_slice_integral(beta), 0.0, 0, None, "quadrature")
    if k != 3:
        raise ValueError("assemble_c_formula supports k in {2, 3}")
    if not 1 <= beta <= 2:
        raise ValueError("assemble_c_formula supports beta <= 2")
    if samples < 1:
        raise ValueError("samples must be positive")
    m, n = 2 * beta, 3 * beta
    g = float(barnes_g(m + 1))
    chamber = float(math.factorial(m)) ** 2

    def draw(rng, size):
        X, okx = _slice_point(rng.random((size, m - 1)), beta)
        Y, oky = _slice_point(rng.random((size, m - 1)), beta)
        outer = _vandermonde_rows(X) * _vandermonde_rows(Y) / (g * g * chamber)
        if n == m + 1:
            mid = _interlace_overlap(X, Y)
        else:
            Z = np.sort(rng.random((size, n)), axis=1)
            mid = _vol_trapezoid_batch(Z, X) * _vol_trapezoid_batch(Z, Y) / math.factorial(n)
        return np.where(okx & oky, outer * mid, 0.0)

    return _mc(draw, samples, seed, workers, "mc")
