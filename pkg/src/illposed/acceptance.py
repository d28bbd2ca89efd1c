"""The acceptance suite: every release gate as an executable criterion.

Each criterion runs at its stated tolerance and reports pass/fail with the
measured numbers.  `run_acceptance` shares the expensive operator and
spectral objects across criteria so the whole suite stays within the desk
runtime budget.

Known-red criteria (2, 3, 11's fit-form comparison, 12) fail for documented
reasons external to this implementation: the published figure coefficients
do not reproduce their captioned ratios under exact evaluation (verified
against 40-digit quadrature), and the eigenfunction H1 ratios of the
degenerate operators grow like n^1.5 rather than n, which bends the
exponential-in-ratio envelope.  They are implemented exactly as stated and
left red.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .adversarial import FigureId, build_gramian, reproduce_figure
from .diff_ops import (GalerkinOperator, SignVariant, assemble_bertero_grunbaum,
                       assemble_fourth_order, assemble_prolate)
from .domains import Interval, half_line_for, make_grid
from .functions import FunctionKind, FunctionRep, h1_seminorm, make_sine_basis
from .integral_ops import OperatorKind, gram_matrix
from .spectral import (ASCENDING_DIFF, EXP_DECAY, SUPER_EXP, SVD_FLOOR,
                       converged_mode_count, decompose_operator, eig_sym,
                       fit_decay, growth_check, match_eigenfunctions,
                       usable_modes)
from .stability import (EXPONENTIAL, POWER_OF_RATIO, eigenfunction_sweep,
                        fit_constants_from_sweep, lemma1_constant, make_rng,
                        random_exp_poly, random_nonnegative_series,
                        random_sine_series, random_trial_mix, verify_lemma1,
                        verify_lemma2, verify_lemma3, verify_theorem,
                        violation_count)

DEFAULT_SEED = 0xC0FFEE


@dataclass
class CriterionResult:
    cid: str
    title: str
    passed: bool
    details: dict
    seconds: float

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} criterion {self.cid}: {self.title} ({self.seconds:.2f}s)"

    def to_json(self) -> dict:
        return {"criterion": self.cid, "title": self.title, "pass": self.passed,
                "details": self.details}


@dataclass
class AcceptanceContext:
    """Shared heavyweight objects, built once."""

    seed: int = DEFAULT_SEED
    n: int = 256
    N: int = 128
    m: int = 12
    _cache: dict = field(default_factory=dict)

    def get(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    # -- operators -------------------------------------------------------

    @property
    def ab(self):
        return Interval(1.0, 2.0)

    def laplace(self):
        return self.get("laplace", lambda: gram_matrix(
            OperatorKind.laplace_tt(self.ab), make_grid(self.ab, self.n)))

    def fourier(self):
        return self.get("fourier", lambda: gram_matrix(
            OperatorKind.fourier_tt(), make_grid(Interval(-1.0, 1.0), self.n)))

    def adjoint(self):
        def build():
            half = half_line_for(self.ab)
            kind = OperatorKind.laplace_adjoint_tt(self.ab, half)
            return gram_matrix(kind, make_grid(half, max(16, self.n // 4)))
        return self.get("adjoint", build)

    def bg(self, N=None):
        N = N or self.N
        return self.get(f"bg{N}", lambda: assemble_bertero_grunbaum(self.ab, N))

    def prolate(self, N=None):
        N = N or self.N
        return self.get(f"prolate{N}", lambda: assemble_prolate(N))

    def fourth(self, variant: SignVariant):
        N4 = min(max(self.N // 2, 32), 64)
        return self.get(f"fourth-{variant.value}", lambda: assemble_fourth_order(
            self.ab, half_line_for(self.ab), N4, variant))

    def converged(self, which: str) -> int:
        def build():
            if which == "bg":
                return converged_mode_count(self.bg(), self.bg(2 * self.N))
            if which == "prolate":
                return converged_mode_count(self.prolate(), self.prolate(2 * self.N))
            variant = SignVariant(which)
            return converged_mode_count(self.fourth(variant))
        return self.get(f"conv-{which}", build)

    def fourth_selected(self):
        """Sign variant minimizing the commutation residual (runtime choice)."""
        def build():
            best = None
            for variant in SignVariant:
                conv = self.converged(variant.value)
                if conv < 4:
                    entry = (math.inf, variant, conv)
                else:
                    rep = match_eigenfunctions(self.adjoint(), self.fourth(variant),
                                               min(self.m, conv), converged=conv)
                    entry = (rep.commutation_residual, variant, conv)
                if best is None or entry[0] < best[0]:
                    best = entry
            return best
        return self.get("fourth-selected", build)

    def laplace_sweep(self):
        return self.get("sweepL", lambda: eigenfunction_sweep(
            self.laplace(), self.bg(), self.m, converged=self.converged("bg")))

    def fourier_sweep(self):
        return self.get("sweepF", lambda: eigenfunction_sweep(
            self.fourier(), self.prolate(), self.m, converged=self.converged("prolate")))


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# ----------------------------------------------------------------------------
# Criteria
# ----------------------------------------------------------------------------

def criterion_01(ctx) -> CriterionResult:
    rec, dt = _timed(lambda: reproduce_figure(FigureId.FIG2, ctx.n))
    ok = rec["pass"] and dt < 1.0
    return CriterionResult("1", "figure 2 ratio within 30x of 1e-8, < 1 s",
                           ok, rec, dt)


def criterion_02(ctx) -> CriterionResult:
    rec, dt = _timed(lambda: reproduce_figure(FigureId.FIG1, ctx.n))
    ok = rec["pass"] and dt < 1.0
    return CriterionResult("2", "figure 1 ratio within 30x of 1e-7, < 1 s",
                           ok, rec, dt)


def criterion_03(ctx) -> CriterionResult:
    rec, dt = _timed(lambda: reproduce_figure(FigureId.FIG3, ctx.n))
    ok = rec["pass"] and dt < 2.0
    return CriterionResult("3", "figure 3 ratio within [1e-20, 1e-16], < 2 s",
                           ok, rec, dt)


def criterion_04(ctx) -> CriterionResult:
    def run():
        out = {}
        for name, M, diff, conv in (
            ("laplace-bg", ctx.laplace(), ctx.bg(), ctx.converged("bg")),
            ("fourier-prolate", ctx.fourier(), ctx.prolate(), ctx.converged("prolate")),
        ):
            rep = match_eigenfunctions(M, diff, 10, converged=conv)
            out[name] = {"max_residual": rep.max_residual(),
                         "commutation": rep.commutation_residual}
        return out
    out, dt = _timed(run)
    ok = all(v["max_residual"] <= 1e-6 and v["commutation"] <= 1e-8
             for v in out.values())
    return CriterionResult("4", "eigenfunction coincidence: residual <= 1e-6, "
                           "commutation <= 1e-8", ok, out, dt)


def criterion_05(ctx) -> CriterionResult:
    def run():
        dec = decompose_operator(ctx.laplace())
        fit = fit_decay(dec, EXP_DECAY, (2, 25))
        return fit.to_json()
    out, dt = _timed(run)
    ok = out["r_squared"] >= 0.99 and out["c2"] > 0 and dt < 5.0
    return CriterionResult("5", "Laplace exponential decay fit r^2 >= 0.99",
                           ok, out, dt)


def criterion_06(ctx) -> CriterionResult:
    def run():
        dec = decompose_operator(ctx.fourier())
        fit_a = fit_decay(dec, SUPER_EXP, (4, 12))
        fit_b = fit_decay(dec, SUPER_EXP, (8, 16))
        usable = usable_modes(dec, (1, dec.size))
        mu = dec.eigenvalues
        ratios = [mu[k - 1] / mu[k] for k in usable[:-1]]
        return {
            "slope_win_4_12": fit_a.slope, "slope_win_8_16": fit_b.slope,
            "slope_shift": abs(fit_a.slope - fit_b.slope) / abs(fit_a.slope),
            "ratios_increasing": bool(np.all(np.diff(ratios) > 0)),
            "usable_modes": int(len(usable)),
        }
    out, dt = _timed(run)
    ok = (out["slope_win_4_12"] < 0 and out["slope_win_8_16"] < 0
          and out["slope_shift"] <= 0.15 and out["ratios_increasing"])
    return CriterionResult("6", "Fourier superexponential decay: stable "
                           "n log n slope, increasing mu ratios", ok, out, dt)


def criterion_07(ctx) -> CriterionResult:
    def run():
        out = {}
        for name, op_lo, op_hi in (
            ("bg", ctx.bg(), ctx.bg(2 * ctx.N)),
            ("prolate", ctx.prolate(), ctx.prolate(2 * ctx.N)),
        ):
            conv_lo = ctx.converged(name)
            dec_lo = eig_sym(op_lo.stiffness, ASCENDING_DIFF)
            dec_hi = eig_sym(op_hi.stiffness, ASCENDING_DIFF)
            g_lo = growth_check(dec_lo, conv_lo)
            g_hi = growth_check(dec_hi, conv_lo)  # same converged window
            out[name] = {"min_ratio_N": g_lo, "min_ratio_2N": g_hi,
                         "shift": abs(g_lo - g_hi) / g_hi}
        return out
    out, dt = _timed(run)
    ok = all(v["min_ratio_N"] > 0 and v["shift"] <= 0.02 for v in out.values())
    return CriterionResult("7", "eigenvalue growth min lambda_n/n^2 > 0, "
                           "stable to 2% under refinement", ok, out, dt)


def criterion_08(ctx) -> CriterionResult:
    def run():
        dom = Interval(0.0, 1.0)
        grid = make_grid(dom, ctx.n)
        op = OperatorKind.hilbert_truncated(dom, Interval(2.0, 3.0))
        mins, tops = [], []
        for size in range(1, 13):
            rep = build_gramian(op, make_sine_basis(dom, size), grid)
            mins.append(rep.min_eigenvalue)
            tops.append(float(np.linalg.eigvalsh(rep.gramian)[-1]))
        ns = np.arange(1, 13)
        window = (ns >= 3) & (ns <= 12)
        decreasing = bool(np.all(np.diff(np.array(mins)[window]) < 0))
        # the documented solver-floor rule excludes unresolvable eigenvalues
        above = window & (np.array(mins) > SVD_FLOOR * np.array(tops))
        x, y = ns[above], np.log(np.array(mins)[above])
        slope, intercept = np.polyfit(x, y, 1)
        r2 = 1.0 - np.sum((y - slope * x - intercept) ** 2) / np.sum((y - y.mean()) ** 2)
        return {"min_eigs": mins, "fit_modes": [int(v) for v in x],
                "slope": float(slope), "r_squared": float(r2),
                "decreasing": decreasing}
    out, dt = _timed(run)
    ok = out["decreasing"] and out["slope"] < 0 and out["r_squared"] >= 0.97
    return CriterionResult("8", "Gramian min-eig log-affine decrease over "
                           "n in [3,12]", ok, out, dt)


def criterion_09(ctx) -> CriterionResult:
    def run():
        diff = ctx.bg()
        dec = eig_sym(diff.stiffness, ASCENDING_DIFF)
        conv = ctx.converged("bg")
        rng = make_rng(ctx.seed)
        coeff_vectors = random_trial_mix(dec, 200, rng)
        funcs = [FunctionRep(FunctionKind.LEGENDRE_SERIES, c, ctx.ab)
                 for c in coeff_vectors]
        ratios = []
        for f, c in zip(funcs, coeff_vectors):
            df = float(c @ diff.stiffness @ c)
            fx = h1_seminorm(f, diff.grid)
            ratios.append(df / fx ** 2)
        c_meas = lemma1_constant(diff, dec, ratios)
        fails, masses = 0, []
        for f in funcs:
            rec = verify_lemma1(f, diff, dec, c_meas, converged=None)
            masses.append(rec.low_freq_mass)
            fails += 0 if rec.passed else 1
        return {"constant": c_meas, "violations": fails,
                "min_mass": float(min(masses)), "count": len(funcs)}
    out, dt = _timed(run)
    ok = out["violations"] == 0
    return CriterionResult("9", "lemma 1: 200 random trial functions keep "
                           "half their mass below the threshold", ok, out, dt)


def criterion_10(ctx) -> CriterionResult:
    def run():
        grid = make_grid(ctx.ab, ctx.n)
        rng = make_rng(ctx.seed + 10)
        v2 = applicable = 0
        for f in random_sine_series(ctx.ab, 1000, rng):
            rec = verify_lemma2(f, grid)
            applicable += int(rec.applicable)
            v2 += 0 if rec.passed else 1
        v3 = 0
        for f in random_nonnegative_series(ctx.ab, 1000, rng):
            rec3 = verify_lemma3(f, grid, c2=1.0)
            v3 += 0 if rec3.passed else 1
        return {"lemma2_violations": v2, "lemma2_applicable": applicable,
                "lemma3_violations": v3, "count": 1000}
    out, dt = _timed(run)
    ok = out["lemma2_violations"] == 0 and out["lemma3_violations"] == 0
    return CriterionResult("10", "lemmas 2 and 3: zero violations on 1000 "
                           "random admissible functions each", ok, out, dt)


def criterion_11(ctx) -> CriterionResult:
    def run():
        out = {}
        fit1 = fit_constants_from_sweep(ctx.laplace_sweep(), EXPONENTIAL)
        ens1 = random_sine_series(ctx.ab, 500, make_rng(ctx.seed + 1))
        out["thm1"] = {"fit": fit1.to_json(),
                       "violations": violation_count(verify_theorem(ctx.laplace(), fit1, ens1))}

        comm, variant, conv4 = ctx.fourth_selected()
        sweep2 = eigenfunction_sweep(ctx.adjoint(), ctx.fourth(variant),
                                     min(ctx.m, conv4), converged=conv4)
        fit2 = fit_constants_from_sweep(sweep2, EXPONENTIAL)
        ens2 = random_exp_poly(500, make_rng(ctx.seed + 2))
        out["thm2"] = {"fit": fit2.to_json(), "variant": variant.value,
                       "variant_commutation": comm,
                       "violations": violation_count(verify_theorem(ctx.adjoint(), fit2, ens2))}

        fit3 = fit_constants_from_sweep(ctx.fourier_sweep(), POWER_OF_RATIO)
        fit3_exp = fit_constants_from_sweep(ctx.fourier_sweep(), EXPONENTIAL)
        ens3 = random_sine_series(Interval(-1.0, 1.0), 500, make_rng(ctx.seed + 3))
        out["thm3"] = {"fit": fit3.to_json(),
                       "violations": violation_count(verify_theorem(ctx.fourier(), fit3, ens3)),
                       "exp_r2": fit3_exp.r_squared,
                       "power_beats_exp": bool(fit3.r_squared > fit3_exp.r_squared)}
        return out
    out, dt = _timed(run)
    zero = all(out[k]["violations"] == 0 for k in ("thm1", "thm2", "thm3"))
    ok = zero and out["thm3"]["power_beats_exp"]
    out["zero_violations"] = zero
    return CriterionResult("11", "theorem 1/2/3 ensembles: zero violations; "
                           "power-of-ratio outfits exponential on Fourier",
                           ok, out, dt)


def criterion_12(ctx) -> CriterionResult:
    def run():
        sweep = ctx.laplace_sweep()
        fit = fit_constants_from_sweep(sweep, EXPONENTIAL, mode_range=(2, 12))
        keep = (sweep.indices >= 2) & (sweep.indices <= 12)
        resid = (np.log(sweep.lhs[keep])
                 - (math.log(fit.c1) - fit.c2 * sweep.ratios[keep]))
        signs = np.sign(resid)
        changes = int(np.sum(signs[1:] * signs[:-1] < 0))
        return {"residuals": [float(v) for v in resid], "sign_changes": changes}
    out, dt = _timed(run)
    ok = out["sign_changes"] >= 3
    return CriterionResult("12", "sharpness: Laplace fit residuals change sign "
                           ">= 3 times over n in [2,12]", ok, out, dt)


CRITERIA = [criterion_01, criterion_02, criterion_03, criterion_04,
            criterion_05, criterion_06, criterion_07, criterion_08,
            criterion_09, criterion_10, criterion_11, criterion_12]


def run_acceptance(seed: int = DEFAULT_SEED, n: int = 256, N: int = 128,
                   m: int = 12) -> list[CriterionResult]:
    ctx = AcceptanceContext(seed=seed, n=n, N=N, m=m)
    return [fn(ctx) for fn in CRITERIA]
