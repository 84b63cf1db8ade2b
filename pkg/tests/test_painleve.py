import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from gtmom import painleve
from gtmom.painleve import (
    SERIES_RADIUS,
    AccuracyError,
    HankelContext,
    barnes_g,
    c2_fourier,
    hankel_det,
    hankel_matrix,
    moment_g,
    moments_g,
    sigma_h,
    sigma_pv_residual,
)

C22 = 149 / 81729648000


def quad_moment(n, t):
    """g^(n)(t) by direct quadrature of its defining integral."""
    f = lambda x: (-x) ** n * cmath.exp(-t * x)
    re = integrate.quad(lambda x: f(x).real, 0, 1, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
    im = integrate.quad(lambda x: f(x).imag, 0, 1, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
    return complex(re, im)


def test_barnes_g():
    assert [barnes_g(n) for n in range(1, 6)] == [1, 1, 1, 2, 12]
    with pytest.raises(ValueError):
        barnes_g(0)


def test_hankel_context():
    ctx = HankelContext(2)
    assert ctx.size == 4
    assert ctx.barnes_g_squared == Fraction(144)


def test_moment_examples():
    assert moment_g(0, 0) == 1
    assert moment_g(1, 0) == pytest.approx(-0.5)
    assert moment_g(0, 1) == pytest.approx(1 - math.exp(-1), abs=1e-12)
    with pytest.raises(ValueError):
        moment_g(-1, 1.0)


@pytest.mark.parametrize("t", [0.1, 1 + 1j, 5, 12.0, 3j * math.pi])
def test_moments_against_quadrature(t):
    got = moments_g(8, t)
    for n in range(9):
        assert abs(got[n] - quad_moment(n, t)) <= 1e-10


@pytest.mark.parametrize("arg", [0.0, math.pi / 2, math.pi])
def test_series_and_recursion_agree_at_switch(arg):
    t = SERIES_RADIUS * (1 + 1e-12) * cmath.exp(1j * arg)  # just outside: recursion branch
    rec = moments_g(12, t)
    for n, v in enumerate(rec):
        ser = (-1) ** n * painleve._series(n, t)
        assert abs(v - ser) <= 1e-11 * max(1.0, abs(v))


def test_hankel_det_at_zero():
    assert hankel_det(1, 0).real == pytest.approx(1 / 12, rel=1e-12)
    assert hankel_det(2, 0).real == pytest.approx(1 / 6048000, rel=1e-10)


def test_hankel_matrix_shape_and_symmetry():
    H = hankel_matrix(2, 0.7)
    assert H.shape == (4, 4)
    assert np.allclose(H, H.T)


@pytest.mark.parametrize("beta", [1, 2])
def test_hankel_det_positive_on_real_axis(beta):
    for t in (-3.0, -0.5, 0.2, 1.0, 4.0, 9.0):
        d = hankel_det(beta, t)
        assert d.real > 0 and abs(d.imag) <= 1e-14 * abs(d.real)


@pytest.mark.parametrize("beta", [1, 2])
def test_hankel_det_conjugate_symmetry(beta):
    for t in (0.3 + 2j, 4 - 1j, 7j):
        assert abs(hankel_det(beta, t.conjugate()) - hankel_det(beta, t).conjugate()) <= 1e-12 * abs(hankel_det(beta, t))


def test_fourier_beta1():
    r = c2_fourier(1)
    assert abs(r.value - 1 / 6) <= 1e-4 / 6
    assert r.imag_residue <= 1e-8
    assert r.tail_estimate <= 1e-6


def test_fourier_beta2_against_exact():
    r = c2_fourier(2)
    assert abs(r.value - C22) <= 1e-3 * C22
    assert r.imag_residue <= 1e-8


def test_fourier_accuracy_error_carries_partial_result():
    with pytest.raises(AccuracyError) as info:
        c2_fourier(1, U=5, tol=1e-12)
    partial = info.value.partial
    assert partial is not None and partial.U == 5
    assert partial.tail_estimate > 1e-12
    assert set(partial.to_json()) >= {"value", "tail_estimate", "imag_residue", "U"}


def test_fourier_argument_checks():
    with pytest.raises(ValueError):
        c2_fourier(0)
    with pytest.raises(ValueError):
        c2_fourier(1, U=-1)


@pytest.mark.parametrize("beta", [1, 2])
@pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 4.0])
def test_sigma_pv_residual_small(beta, t):
    assert sigma_pv_residual(beta, t) <= 1e-5


def test_sigma_h_matches_finite_difference_of_log_det():
    beta, t, h = 1, 1.3, 1e-5
    d = lambda s: math.log(hankel_det(beta, s).real)
    fd = t * (d(t + h) - d(t - h)) / (2 * h) + 4
    assert sigma_h(beta, t) == pytest.approx(fd, rel=1e-8)


def test_sigma_pv_residual_second_order_in_step():
    r1 = sigma_pv_residual(1, 1.0, h=0.1, richardson=False)
    r2 = sigma_pv_residual(1, 1.0, h=0.05, richardson=False)
    assert r1 / r2 >= 3.5


def test_sigma_pv_detects_wrong_function(monkeypatch):
    # H built for beta = 1 must not satisfy the beta = 2 equation
    real = painleve.sigma_h
    monkeypatch.setattr(painleve, "sigma_h", lambda beta, t: real(1, t))
    assert sigma_pv_residual(2, 1.0) > 1e-3


def test_sigma_pv_argument_checks():
    with pytest.raises(ValueError):
        sigma_pv_residual(1, -1.0)
    with pytest.raises(ValueError):
        sigma_pv_residual(1, 1.0, h=2.0)
