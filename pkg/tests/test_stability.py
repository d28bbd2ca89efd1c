import math

import numpy as np
import pytest

from illposed import (ExpPoly, FunctionKind, FunctionRep, Interval,
                      InvalidArgumentError, eig_sym, lemma1_constant,
                      lemma3_prefactor, make_grid, make_rng, verify_lemma1,
                      verify_lemma2, verify_lemma3, verify_theorem,
                      violation_count)
from illposed.spectral import ASCENDING_DIFF
from illposed.stability import (EXPONENTIAL, POWER_OF_RATIO, StabilityFit,
                                SweepData, changes_sign,
                                fit_constants_from_sweep, h1_seminorm,
                                random_nonnegative_series, random_sine_series,
                                random_trial_mix)

SYM = Interval(-1.0, 1.0)
UNIT = Interval(0.0, 1.0)


def legendre(coeffs, domain):
    return FunctionRep(FunctionKind.LEGENDRE_SERIES, coeffs, domain)


# ----------------------------------------------------------------------------
# Lemma 2
# ----------------------------------------------------------------------------

def test_lemma2_linear_function():
    # f(x) = x on [-1,1]: sup 1, ||f_x|| = sqrt(2), bound sqrt(2)*sqrt(2) = 2
    grid = make_grid(SYM, 64)
    f = legendre([0.0, np.sqrt(2.0 / 3.0)], SYM)  # equals x
    assert f.values(np.array([0.5]))[0] == pytest.approx(0.5, rel=1e-14)
    rec = verify_lemma2(f, grid)
    assert rec.applicable
    assert rec.sup_norm == pytest.approx(1.0, rel=1e-10)
    assert rec.bound == pytest.approx(2.0, rel=1e-12)
    assert rec.passed


def test_lemma2_no_sign_change_short_circuits():
    grid = make_grid(UNIT, 32)
    rec = verify_lemma2(legendre([1.0], UNIT), grid)
    assert not rec.applicable and rec.passed


def test_lemma2_sine_on_longer_interval():
    dom = Interval(0.0, 2.0)
    grid = make_grid(dom, 64)
    f = FunctionRep(FunctionKind.SINE_SERIES, [0.0, 1.0], dom)  # sin(pi x)
    rec = verify_lemma2(f, grid)
    assert rec.applicable
    assert rec.sup_norm == pytest.approx(1.0, rel=1e-8)
    assert rec.bound == pytest.approx(np.sqrt(2.0) * np.pi, rel=1e-10)
    assert rec.passed


# ----------------------------------------------------------------------------
# Lemma 3
# ----------------------------------------------------------------------------

def test_lemma3_constant_function():
    grid = make_grid(UNIT, 32)
    rec = verify_lemma3(legendre([1.0], UNIT), grid, c2=1.0)
    assert rec.passed
    assert rec.lhs == pytest.approx(1.0, rel=1e-14)
    assert rec.c1 <= math.sqrt(UNIT.length) / 2.0 + 1e-12


def test_lemma3_quadratic_oracle():
    # f = x^2 on [0,1]: int f = 1/3, ||f|| = 1/sqrt(5), ||f_x|| = 2/sqrt(3)
    grid = make_grid(UNIT, 32)
    # x^2 in orthonormalized Legendre on [0,1]
    coeffs = np.array([1.0 / 3.0, 1.0 / (2.0 * np.sqrt(3.0)), 1.0 / (6.0 * np.sqrt(5.0))])
    f = legendre(coeffs, UNIT)
    xs = np.linspace(0, 1, 7)
    assert f.values(xs) == pytest.approx(xs ** 2, abs=1e-13)
    rec = verify_lemma3(f, grid, c2=1.0)
    assert rec.lhs == pytest.approx(1.0 / 3.0, rel=1e-12)
    ratio = h1_seminorm(f, grid) / (1.0 / np.sqrt(5.0))
    assert ratio == pytest.approx((2.0 / np.sqrt(3.0)) * np.sqrt(5.0), rel=1e-12)
    assert rec.passed


def test_lemma3_zero_function_vacuous():
    grid = make_grid(UNIT, 16)
    rec = verify_lemma3(legendre([0.0], UNIT), grid, c2=2.0)
    assert rec.passed and rec.lhs == 0.0 and rec.rhs == 0.0


def test_lemma3_rejects_sign_changing():
    grid = make_grid(UNIT, 32)
    f = FunctionRep(FunctionKind.SINE_SERIES, [0.0, 1.0], UNIT)  # sin(2 pi x)
    assert changes_sign(f, grid)
    with pytest.raises(InvalidArgumentError):
        verify_lemma3(f, grid, c2=1.0)


def test_lemma3_prefactor_monotone_in_c2():
    dom = Interval(1.0, 2.0)
    # larger c2 weakens the exponential, so the same c1 clamp applies sooner
    vals = [lemma3_prefactor(c2, dom) for c2 in (0.5, 1.0, 4.0)]
    assert all(v > 0 for v in vals)
    assert all(a <= b * (1 + 1e-12) for a, b in zip(vals, vals[1:]))
    with pytest.raises(InvalidArgumentError):
        lemma3_prefactor(-1.0, dom)


# ----------------------------------------------------------------------------
# Lemma 1
# ----------------------------------------------------------------------------

def test_lemma1_first_eigenfunction(bg128):
    dec = eig_sym(bg128.stiffness, ASCENDING_DIFF)
    f = legendre(dec.eigenvectors[:, 0], Interval(1.0, 2.0))
    rec = verify_lemma1(f, bg128, dec, c=5.0)
    assert rec.threshold_index >= 1
    assert rec.low_freq_mass == pytest.approx(1.0, abs=1e-10)
    assert rec.passed


def test_lemma1_deep_eigenfunction(bg128):
    dec = eig_sym(bg128.stiffness, ASCENDING_DIFF)
    c = lemma1_constant(bg128, dec, [10.0])
    m = 8
    f = legendre(dec.eigenvectors[:, m - 1], Interval(1.0, 2.0))
    rec = verify_lemma1(f, bg128, dec, c)
    # the growth bound forces the threshold at or beyond the mode itself
    assert rec.threshold_index >= m
    assert rec.passed


def test_lemma1_random_ensemble(bg128):
    dec = eig_sym(bg128.stiffness, ASCENDING_DIFF)
    rng = make_rng(42)
    vectors = random_trial_mix(dec, 50, rng)
    funcs = [legendre(v, Interval(1.0, 2.0)) for v in vectors]
    ratios = [float(v @ bg128.stiffness @ v) / h1_seminorm(f, bg128.grid) ** 2
              for v, f in zip(vectors, funcs)]
    c = lemma1_constant(bg128, dec, ratios)
    assert all(verify_lemma1(f, bg128, dec, c).passed for f in funcs)


# ----------------------------------------------------------------------------
# Constant fitting and theorem verification
# ----------------------------------------------------------------------------

def test_fit_synthetic_exponential_exact():
    r = np.linspace(0.5, 8.0, 10)
    sweep = SweepData(np.arange(1, 11), r, 2.0 * np.exp(-3.0 * r), "synthetic", "synthetic")
    fit = fit_constants_from_sweep(sweep, EXPONENTIAL)
    assert fit.c1 == pytest.approx(2.0, rel=1e-10)
    assert fit.c2 == pytest.approx(3.0, rel=1e-10)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_fit_synthetic_power_of_ratio():
    r = np.linspace(1.0, 9.0, 12)
    c1, c2 = 0.7, 0.9
    lhs = c1 * (c2 * r) ** (-c2 * r)
    sweep = SweepData(np.arange(1, 13), r, lhs, "synthetic", "synthetic")
    fit = fit_constants_from_sweep(sweep, POWER_OF_RATIO)
    assert fit.c1 == pytest.approx(c1, rel=1e-4)
    assert fit.c2 == pytest.approx(c2, rel=1e-4)
    assert fit.r_squared >= 1.0 - 1e-8


def test_fit_requires_positive_constants():
    r = np.linspace(0.5, 5.0, 8)
    sweep = SweepData(np.arange(1, 9), r, np.exp(+r), "synthetic", "synthetic")
    with pytest.raises(InvalidArgumentError):
        fit_constants_from_sweep(sweep, EXPONENTIAL)


def test_verify_theorem_zero_violations_small(laplace_M):
    from illposed.stability import eigenfunction_sweep
    import illposed
    bg = illposed.assemble_bertero_grunbaum(Interval(1.0, 2.0), 64)
    sweep = eigenfunction_sweep(laplace_M, bg, 10)
    fit = fit_constants_from_sweep(sweep, EXPONENTIAL)
    assert fit.r_squared >= 0.95
    ens = random_sine_series(Interval(1.0, 2.0), 60, make_rng(1))
    recs = verify_theorem(laplace_M, fit, ens)
    assert violation_count(recs) == 0


def test_verify_theorem_records_errors(laplace_M):
    fit = StabilityFit(1.0, 1.0, EXPONENTIAL, 1.0, "synthetic")
    bad = FunctionRep(FunctionKind.SINE_SERIES, [1.0], Interval(0.0, 1.0))
    good = FunctionRep(FunctionKind.SINE_SERIES, [1.0], Interval(1.0, 2.0))
    recs = verify_theorem(laplace_M, fit, [bad, good])
    assert recs[0].error is not None and not recs[0].satisfied
    assert recs[1].error is None


def test_scale_invariance_of_verdicts(laplace_M):
    fit = StabilityFit(0.06, 0.3, EXPONENTIAL, 0.98, "synthetic")
    f = FunctionRep(FunctionKind.SINE_SERIES, [0.2, -0.7, 0.4], Interval(1.0, 2.0))
    f17 = FunctionRep(FunctionKind.SINE_SERIES, 17.0 * f.payload, Interval(1.0, 2.0))
    r1 = verify_theorem(laplace_M, fit, [f])[0]
    r2 = verify_theorem(laplace_M, fit, [f17])[0]
    assert r1.satisfied == r2.satisfied
    assert r1.h1_ratio == pytest.approx(r2.h1_ratio, rel=1e-12)


def test_lemma_ensembles_zero_violations(ab):
    grid = make_grid(ab, 128)
    rng = make_rng(7)
    for f in random_sine_series(ab, 100, rng):
        assert verify_lemma2(f, grid).passed
    for f in random_nonnegative_series(ab, 100, rng):
        assert verify_lemma3(f, grid, c2=1.0).passed


def test_figure3_function_satisfies_theorem3(fourier_M, prolate128):
    from illposed.adversarial import FIGURES, FigureId
    from illposed.stability import eigenfunction_sweep
    sweep = eigenfunction_sweep(fourier_M, prolate128, 12)
    fit = fit_constants_from_sweep(sweep, POWER_OF_RATIO)
    f = FIGURES[FigureId.FIG3].function()
    rec = verify_theorem(fourier_M, fit, [f])[0]
    assert rec.satisfied  # large ratio makes the bound astronomically small
