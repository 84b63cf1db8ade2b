"""Cross-verification suite behind ``gtmom verify``.

Every check compares two independent routes to the same quantity.  The
``quick`` level finishes in well under a minute; ``full`` runs the complete
grids (the exhaustive bijection sweep dominates at a few minutes).
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import integrate

from . import count as _count
from .gt import (
    ConstrainedArray,
    ParamTriple,
    ValidationError,
    array_to_gt,
    gt_to_array,
    gt_to_tableau,
    tableau_to_gt,
    top_signature,
    validate_tableau_constraints,
)
from .gtvolume import bspline, c2_slice_integral
from .painleve import c2_fourier, sigma_pv_residual
from .poly import c_k1, interpolate_mom, leading_coefficient
from .region import lattice_count_dilate

log = logging.getLogger(__name__)

LEVELS = ("quick", "full")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


def check_bijections(p: ParamTriple) -> int:
    """Round-trip every member of the constrained set through all three encodings.

    Returns the number of members visited; raises ``AssertionError`` on the
    first failure.
    """
    n = 0
    for rows in _count.iter_members(p):
        x = ConstrainedArray(p, rows)
        try:
            g = array_to_gt(x)  # validates the array
            back = gt_to_array(g, p)  # validates the pattern constraints
            t = gt_to_tableau(g)  # validates semistandardness
        except ValidationError as exc:
            raise AssertionError(f"{exc}: {rows}") from None
        assert back == x, f"array round trip failed: {rows}"
        assert validate_tableau_constraints(t, p), f"image tableau violates constraints: {rows}"
        assert tableau_to_gt(t) == g, f"tableau round trip failed: {rows}"
        n += 1
    return n


def _grid(Ns, ks, betas):
    return [ParamTriple(N, k, b) for k in ks for b in betas for N in Ns]


def _oracle(params: list[ParamTriple]) -> tuple[bool, str]:
    bad = []
    for p in params:
        a = _count.enumerate_count(p).count
        b = _count.dp_count(p).count
        if a != b:
            bad.append(f"{p.as_dict()}: enumerate {a} != dp {b}")
    return not bad, "; ".join(bad) or f"{len(params)} triples agree"


def _dp_variants(params: list[ParamTriple]) -> tuple[bool, str]:
    bad = [
        p.as_dict()
        for p in params
        if _count.dp_count(p, "prefix").count != _count.dp_count(p, "naive").count
    ]
    return not bad, f"mismatch at {bad}" if bad else f"{len(params)} triples agree"


def _k1(Nmax: int, bmax: int) -> tuple[bool, str]:
    bad = []
    for b in range(1, bmax + 1):
        for N in range(Nmax + 1):
            p = ParamTriple(N, 1, b)
            w = _count.weyl_dimension(top_signature(p), 2 * b)
            if _count.dp_count(p).count != w:
                bad.append(p.as_dict())
    return not bad, f"mismatch at {bad}" if bad else f"N <= {Nmax}, beta <= {bmax}"


def _hand_values() -> tuple[bool, str]:
    want = {(1, 2, 1): 4, (2, 2, 1): 10, (3, 2, 1): 20, (1, 1, 2): 6, (1, 3, 1): 8}
    bad = []
    for (N, k, b), v in want.items():
        got = _count.dp_count(ParamTriple(N, k, b)).count
        if got != v:
            bad.append(f"({N},{k},{b}): {got} != {v}")
    poly = interpolate_mom(2, 1)
    expected = (Fraction(1), Fraction(11, 6), Fraction(1), Fraction(1, 6))
    if poly.coeffs != expected:
        bad.append(f"MoM(2,1) coefficients {poly.coeffs}")
    return not bad, "; ".join(bad) or "all hand values reproduced"


def _dilation(cases: list[tuple[int, int, int]]) -> tuple[bool, str]:
    bad = []
    for k, b, Nmax in cases:
        for N in range(Nmax + 1):
            p = ParamTriple(N, k, b)
            a, c = lattice_count_dilate(p), _count.dp_count(p).count
            if a != c:
                bad.append(f"{p.as_dict()}: lattice {a} != dp {c}")
    return not bad, "; ".join(bad) or f"cases {cases}"


def _bijection(params: list[ParamTriple]) -> tuple[bool, str]:
    total = 0
    for p in params:
        try:
            n = check_bijections(p)
        except AssertionError as exc:
            return False, f"{p.as_dict()}: {exc}"
        expected = _count.dp_count(p).count
        if n != expected:
            return False, f"{p.as_dict()}: visited {n} members, dp gives {expected}"
        total += n
    return True, f"{total} members round-tripped"


def _coefficients(bmax: int, with_22: bool) -> tuple[bool, str]:
    bad = []
    for b in range(1, bmax + 1):
        c = leading_coefficient(interpolate_mom(1, b))
        if c != c_k1(b):
            bad.append(f"c(1,{b}) = {c}, product gives {c_k1(b)}")
    c21 = leading_coefficient(interpolate_mom(2, 1))
    if c21 != Fraction(1, 6):
        bad.append(f"c(2,1) = {c21}")
    for name, val in (("slice", c2_slice_integral(1)), ("fourier", c2_fourier(1).value)):
        if abs(val - 1 / 6) > 1e-4 / 6:
            bad.append(f"{name} c(2,1) = {val}")
    if with_22:
        exact = float(leading_coefficient(interpolate_mom(2, 2)))
        for name, val in (("slice", c2_slice_integral(2)), ("fourier", c2_fourier(2).value)):
            if abs(val - exact) > 1e-3 * exact:
                bad.append(f"{name} c(2,2) = {val}, exact {exact}")
    return not bad, "; ".join(bad) or "interpolation, products and integrals agree"


def _bspline_norm(sets: int, seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(sets):
        n = int(rng.integers(2, 7))
        knots = np.sort(rng.random(n) * 4 - 2)
        if np.min(np.diff(knots)) < 1e-3:
            knots = np.linspace(-1, 1, n)
        val = integrate.quad(
            lambda a: bspline(a, knots), knots[0], knots[-1], points=knots[1:-1], epsabs=1e-13, limit=200
        )[0]
        worst = max(worst, abs(val - 1))
    return worst <= 1e-9, f"max |integral - 1| = {worst:.2e} over {sets} knot sets"


def _pv() -> tuple[bool, str]:
    worst = max(sigma_pv_residual(b, t) for b in (1, 2) for t in (0.5, 1.0, 2.0))
    return worst <= 1e-5, f"max residual {worst:.2e}"


def suite(level: str = "quick") -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    full = level == "full"
    if full:
        oracle = _grid(range(5), (1, 2, 3), (1, 2)) + _grid(range(5, 7), (2,), (1,))
        dilation = [(2, 1, 8), (3, 1, 4)]
        bij = _grid(range(4), (1, 2, 3), (1, 2))
    else:
        oracle = _grid(range(4), (1, 2, 3), (1,)) + _grid(range(3), (1, 2), (2,))
        dilation = [(2, 1, 5), (3, 1, 2)]
        bij = _grid(range(3), (1, 2, 3), (1,)) + _grid(range(3), (1, 2), (2,))
    return [
        ("oracle equivalence", lambda: _oracle(oracle)),
        ("dp transitions", lambda: _dp_variants(_grid(range(4), (2, 3), (1,)))),
        ("k=1 closed form", lambda: _k1(20 if full else 8, 3 if full else 2)),
        ("hand-verified values", _hand_values),
        ("dilation identity", lambda: _dilation(dilation)),
        ("bijection round trips", lambda: _bijection(bij)),
        ("coefficient agreement", lambda: _coefficients(3 if full else 2, True)),
        ("b-spline normalisation", lambda: _bspline_norm(50 if full else 10)),
        ("painleve residual", _pv),
    ]


def run(level: str = "quick") -> list[CheckResult]:
    out = []
    for name, fn in suite(level):
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        dt = time.perf_counter() - t0
        log.info("%-24s %s (%.1fs)", name, "pass" if ok else "FAIL", dt)
        out.append(CheckResult(name, bool(ok), detail, dt))
    return out


def all_passed(results: list[CheckResult]) -> bool:
    return bool(results) and all(r.passed for r in results)


__all__ = ["CheckResult", "LEVELS", "all_passed", "check_bijections", "run", "suite"]
