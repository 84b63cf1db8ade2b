"""Exact reconstruction of MoM_N(k, beta) as a polynomial in N.

The counts are integers at every N and the moment is a polynomial of degree
``D = k^2 beta^2 - k + 1``.  Newton forward differences through ``N = 0..D``
recover it exactly; the extra node ``N = D + 1`` is evaluated and compared so
the degree bound is checked rather than assumed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .count import dp_count
from .gt import ParamTriple


class ConsistencyError(RuntimeError):
    """Exact data contradicts a structural fact; points at a counting bug."""


def mom_degree(k: int, beta: int) -> int:
    return k * k * beta * beta - k + 1


@dataclass(frozen=True)
class MomPolynomial:
    k: int
    beta: int
    coeffs: tuple[Fraction, ...]  # coeffs[p] multiplies N**p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, N) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * N + c
        return acc

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "beta": self.beta,
            "degree": self.degree,
            "coefficients": [
                {"numerator": str(c.numerator), "denominator": str(c.denominator)}
                for c in self.coeffs
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MomPolynomial":
        coeffs = tuple(
            Fraction(int(c["numerator"]), int(c["denominator"])) for c in data["coefficients"]
        )
        return cls(int(data["k"]), int(data["beta"]), coeffs)


def forward_differences(values: Sequence[int]) -> list[int]:
    """Leading entries ``Delta^j f(0)`` of the forward difference table."""
    row = list(values)
    out = []
    while row:
        out.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    return out


def newton_to_monomial(diffs: Sequence[int]) -> list[Fraction]:
    """Expand ``sum_j diffs[j] * binom(N, j)`` into powers of N."""
    coeffs = [Fraction(0)] * len(diffs)
    # falling factorial N(N-1)...(N-j+1), updated in place
    falling = [Fraction(1)]
    for j, dj in enumerate(diffs):
        scale = Fraction(dj, factorial(j))
        for p, c in enumerate(falling):
            coeffs[p] += scale * c
        nxt = [Fraction(0)] * (len(falling) + 1)
        for p, c in enumerate(falling):
            nxt[p + 1] += c
            nxt[p] -= j * c
        falling = nxt
    return coeffs


def interpolate_mom(
    k: int, beta: int, counter: Callable[[ParamTriple], object] | None = None
) -> MomPolynomial:
    """Interpolate the exact counts at ``N = 0..D`` and check the node ``D + 1``."""
    D = mom_degree(k, beta)
    if counter is None:
        counter = lambda p: dp_count(p).count  # noqa: E731
    counts = [int(counter(ParamTriple(N, k, beta))) for N in range(D + 2)]
    diffs = forward_differences(counts[: D + 1])
    coeffs = newton_to_monomial(diffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    poly = MomPolynomial(k, beta, tuple(coeffs))
    if poly(D + 1) != counts[D + 1]:
        raise ConsistencyError(
            f"count at N={D + 1} is {counts[D + 1]}, interpolant gives {poly(D + 1)}"
        )
    if poly.degree != D:
        raise ConsistencyError(f"interpolated degree {poly.degree}, expected {D}")
    return poly


def leading_coefficient(poly: MomPolynomial) -> Fraction:
    return poly.coeffs[poly.degree]


def c_k1(beta: int) -> Fraction:
    """Leading coefficient for ``k = 1``: ``prod_{j<beta} j! / (j+beta)!``."""
    out = Fraction(1)
    for j in range(beta):
        out *= Fraction(factorial(j), factorial(j + beta))
    return out

