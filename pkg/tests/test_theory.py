import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quasiclique.theory import (DegenerateWindowWarning, HypothesisViolation,
                                NearDegenerateWarning, estimates, kl_bernoulli,
                                refined_estimate, typical_qcn, window)

# values frozen from 30-digit mpmath evaluations
KL_07_02 = 0.582685302043239726
TYPICAL_60 = 14.0533648192769031
REFINED_60 = 9.41443124651465557


def mp_kl(g, p):
    g, p = mpmath.mpf(g.numerator) / g.denominator, mpmath.mpf(p)
    if g == 1:
        return mpmath.log(1 / p)
    return g * mpmath.log(g / p) + (1 - g) * mpmath.log((1 - g) / (1 - p))


def test_kl_examples():
    assert kl_bernoulli("1/2", 0.5) == 0.0
    assert kl_bernoulli(1, 1 / math.e) == pytest.approx(1.0, abs=1e-15)
    assert kl_bernoulli("7/10", 0.2) == pytest.approx(KL_07_02, abs=1e-14)


@given(st.integers(1, 1000), st.integers(1, 1000), st.floats(1e-6, 1 - 1e-6))
def test_kl_against_mpmath(a, b, p):
    g = Fraction(min(a, b), max(a, b))
    mpmath.mp.dps = 40
    want = float(mp_kl(g, p))
    assert kl_bernoulli(g, p) == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_kl_rejects_bad_p():
    for p in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ValueError):
            kl_bernoulli("1/2", p)


def test_kl_grid_properties():
    ps = np.linspace(0.005, 0.995, 100)
    for gf in np.linspace(0.01, 1.0, 100):
        g = Fraction(round(gf * 100), 100)
        vals = [kl_bernoulli(g, p) for p in ps]
        for p, v in zip(ps, vals):
            assert v >= 0
            if abs(p - float(g)) > 1e-12:
                assert v > 0
        assert kl_bernoulli(g, float(g)) == 0.0 if g < 1 else True
        below = [v for p, v in zip(ps, vals) if p < float(g)]
        assert all(a > b for a, b in zip(below, below[1:]))


def test_kl_gamma_one_limit():
    for p in (0.05, 0.2, 0.5, 0.9):
        assert abs(kl_bernoulli(Fraction(10**8 - 1, 10**8), p) - math.log(1 / p)) < 1e-6


def test_typical_examples():
    assert typical_qcn(100, 1, 1 / math.e) == pytest.approx(2 * math.log(100), rel=1e-14)
    assert typical_qcn(100, 1, 1 / math.e) == pytest.approx(9.21034, abs=1e-5)
    assert typical_qcn(60, "7/10", 0.2) == pytest.approx(TYPICAL_60, rel=1e-13)


def test_typical_hypothesis_guard():
    with pytest.raises(HypothesisViolation):
        typical_qcn(100, "1/2", 0.5)
    with pytest.raises(HypothesisViolation):
        typical_qcn(100, "1/2", 0.7)
    with pytest.raises(ValueError):
        typical_qcn(1, "1/2", 0.2)


def test_near_degenerate_warns():
    with pytest.warns(NearDegenerateWarning):
        v = typical_qcn(100, "1/2", 0.5 - 1e-9)
    assert math.isfinite(v) and v > 1e6


def test_refined_examples():
    assert refined_estimate(60, "7/10", 0.2) == pytest.approx(REFINED_60, rel=1e-12)
    assert refined_estimate(60, "7/10", 0.2) == pytest.approx(9.4, abs=0.05)
    v = refined_estimate(3, "7/10", 0.2)
    assert math.isfinite(v)
    assert v == pytest.approx(3.64742992058433, rel=1e-12)
    # D = 2/e makes log(e D / 2) vanish
    p = math.exp(-2 / math.e)
    d = 2 / math.e
    want = 2 / d * (math.log(50) - math.log(math.log(50))) + 1
    assert refined_estimate(50, 1, p) == pytest.approx(want, rel=1e-12)
    with pytest.raises(ValueError):
        refined_estimate(2, "7/10", 0.2)


def test_window_examples():
    with pytest.warns(DegenerateWindowWarning):
        assert window(10.0, 0.0) == (10.0, 10.0)
    lo, hi = window(14.05, 0.5)
    assert lo == pytest.approx(7.025) and hi == pytest.approx(21.075)
    for bad in (-0.1, 1.0, 1.5):
        with pytest.raises(ValueError):
            window(10.0, bad)


@given(st.floats(0.1, 100.0), st.floats(0.01, 0.99))
def test_window_contains_center(w, eps):
    lo, hi = window(w, eps)
    assert lo <= w <= hi


def test_typical_monotone():
    g = Fraction(3, 4)
    ns = range(2, 400)
    vals = [typical_qcn(n, g, 0.4) for n in ns]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    ps = np.linspace(0.01, 0.74, 60)
    vals = [typical_qcn(100, g, p) for p in ps]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_estimates_bundle():
    est = estimates(60, "7/10", 0.2)
    assert est.kl == pytest.approx(KL_07_02, abs=1e-14)
    assert est.omega_tilde == pytest.approx(2 * math.log(60) / est.kl)
    assert est.window(0.5) == pytest.approx((0.5 * est.omega_tilde, 1.5 * est.omega_tilde))


def test_hypothesis_guard_float_rounding():
    # the float 0.7 is slightly below 7/10
    with pytest.raises(HypothesisViolation):
        typical_qcn(60, "7/10", 0.7)
