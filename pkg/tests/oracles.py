"""Independent quadrature oracles shared by the volume tests and the acceptance suite."""
import itertools
import math

import numpy as np
from scipy import integrate


def vol_recursive(x, q=6):
    """Vol^n from its definition: integrate Vol^{n-1} over the interlacing box, base Vol^1 = 1."""
    n = len(x)
    if n == 1:
        return 1.0
    gx, gw = np.polynomial.legendre.leggauss(q)
    axes = []
    for i in range(n - 1):
        lo, hi = x[i], x[i + 1]
        axes.append([(lo + (hi - lo) * (t + 1) / 2, (hi - lo) * w / 2) for t, w in zip(gx, gw)])
    total = 0.0
    for combo in itertools.product(*axes):
        y = [c[0] for c in combo]
        w = math.prod(c[1] for c in combo)
        total += w * vol_recursive(y, q)
    return total


def interlace_box(upper, lower):
    """Intervals for v with lower < v < upper (len(v) = len(lower) + 1 = len(upper) - 1)."""
    m = len(lower)
    out = []
    for i in range(m + 1):
        lo = max(upper[i], lower[i - 1] if i > 0 else -np.inf)
        hi = min(upper[i + 1], lower[i] if i < m else np.inf)
        out.append((lo, hi))
    return out


def trapezoid_oracle(z, y):
    """Vol_m^n(z, y) by nested quadrature over the intermediate rows."""
    n, m = len(z), len(y)
    if n - m == 1:
        return float(all(z[i] <= y[i] <= z[i + 1] for i in range(m)))
    box = interlace_box(z, y) if n - m == 2 else [(z[i], z[i + 1]) for i in range(n - 1)]
    if any(hi <= lo for lo, hi in box):
        return 0.0
    if n - m == 2:
        def f(*v):
            return 1.0
    else:
        def f(*v):
            v = list(v)
            if any(b < a for a, b in zip(v, v[1:])):
                return 0.0
            return trapezoid_oracle(v, y)
    val, _ = integrate.nquad(f, box, opts={"epsabs": 1e-12, "epsrel": 1e-10, "limit": 100})
    return val
