"""Symmetric eigendecomposition, eigenfunction matching, and decay-law fits.

Integral-operator spectra are computed from singular values of the half
factor (sigma_n^2 = mu_n), which resolves the exponential and
superexponential decay far below the ~1e-16 ||M|| floor of a direct
eigensolve; the floor excluding modes from fits tracks the solver used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .diff_ops import GalerkinOperator, reassemble
from .errors import (InsufficientDataError, InvalidArgumentError,
                     ModeRangeError)
from .integral_ops import OperatorMatrix

ASCENDING_DIFF = "ascending-diff"
DESCENDING_INTEGRAL = "descending-integral"

EXP_DECAY = "exp-decay"
SUPER_EXP = "super-exp"

# Modes below floor * mu_1 are excluded from fits.  A direct eigensolve is
# trustworthy to ~1e-14 relative; the SVD route resolves sigma_n/sigma_1 down
# to ~1e-14, i.e. mu ratios down to ~1e-28.
EIG_FLOOR = 1e-14
SVD_FLOOR = 1e-28

# Galerkin eigenvalue k counts as converged when resolutions N and 2N agree
# to this relative tolerance, for k <= N/4.
CONVERGENCE_RTOL = 1e-8

DEFAULT_FIT_WINDOW = (2, 25)


def _fix_signs(V: np.ndarray) -> np.ndarray:
    """Deterministic eigenvector signs: largest-magnitude entry positive."""
    V = V.copy()
    idx = np.argmax(np.abs(V), axis=0)
    flip = V[idx, np.arange(V.shape[1])] < 0
    V[:, flip] *= -1.0
    return V


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)
    order: str
    source: str
    value_floor: float = EIG_FLOOR

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=float)
        vecs = np.asarray(self.eigenvectors, dtype=float)
        vals.setflags(write=False)
        vecs.setflags(write=False)
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "eigenvectors", vecs)

    @property
    def size(self) -> int:
        return len(self.eigenvalues)


def eig_sym(M: np.ndarray, order: str = ASCENDING_DIFF,
            source: str = "matrix") -> SpectralDecomposition:
    """Full decomposition of a symmetric matrix with deterministic signs."""
    M = np.asarray(M, dtype=float)
    scale = np.max(np.abs(M))
    if scale > 0 and np.max(np.abs(M - M.T)) > 1e-10 * scale:
        raise InvalidArgumentError("matrix is not symmetric to tolerance")
    vals, vecs = np.linalg.eigh(0.5 * (M + M.T))
    if order == DESCENDING_INTEGRAL:
        vals, vecs = vals[::-1], vecs[:, ::-1]
    elif order != ASCENDING_DIFF:
        raise InvalidArgumentError(f"unknown ordering: {order}")
    return SpectralDecomposition(vals, _fix_signs(vecs), order, source)


def decompose_operator(M: OperatorMatrix) -> SpectralDecomposition:
    """Spectrum of T*T through singular values of the half factor."""
    A = M.half_factor
    _, s, Vt = np.linalg.svd(A, full_matrices=False)
    vals = s ** 2
    vecs = Vt.T
    if len(vals) < M.size:  # rank-limited factor: pad with exact zeros
        pad = M.size - len(vals)
        vals = np.concatenate([vals, np.zeros(pad)])
        vecs = np.hstack([vecs, np.zeros((M.size, pad))])
    return SpectralDecomposition(vals, _fix_signs(vecs), DESCENDING_INTEGRAL,
                                 M.kind.to_string(), value_floor=SVD_FLOOR)


# ----------------------------------------------------------------------------
# Converged Galerkin modes
# ----------------------------------------------------------------------------

def converged_mode_count(op: GalerkinOperator,
                         refined: Optional[GalerkinOperator] = None) -> int:
    """Number of leading eigenvalues stable under N -> 2N refinement."""
    lam = np.linalg.eigvalsh(op.stiffness)
    if refined is None:
        refined = reassemble(op, 2 * op.size)
    lam2 = np.linalg.eigvalsh(refined.stiffness)
    kmax = op.size // 4
    count = 0
    for k in range(kmax):
        if abs(lam[k] - lam2[k]) <= CONVERGENCE_RTOL * abs(lam2[k]):
            count += 1
        else:
            break
    return count


# ----------------------------------------------------------------------------
# Eigenfunction coincidence
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeMatch:
    index: int
    lambda_diff: float
    rayleigh: float
    residual: float  # ||M u - mu u|| / ||M||_2


@dataclass(frozen=True)
class MatchReport:
    records: tuple
    commutation_residual: float
    integral_source: str
    diff_source: str

    def max_residual(self) -> float:
        return max(r.residual for r in self.records)

    def to_json(self) -> dict:
        return {
            "integral": self.integral_source,
            "diff": self.diff_source,
            "commutation_residual": self.commutation_residual,
            "modes": [
                {"n": r.index, "lambda": r.lambda_diff,
                 "rayleigh": r.rayleigh, "residual": r.residual}
                for r in self.records
            ],
        }


def basis_on_grid(diff: GalerkinOperator, grid) -> np.ndarray:
    """Trial-basis values at grid nodes, affinely mapped when domains differ."""
    x = grid.nodes
    bdom = diff.basis.domain
    gdom = grid.domain
    from .domains import Interval
    if isinstance(bdom, Interval) and isinstance(gdom, Interval) and bdom != gdom:
        x = bdom.a + (x - gdom.a) * (bdom.length / gdom.length)
    return diff.basis.values(x)


def match_eigenfunctions(integral: OperatorMatrix, diff: GalerkinOperator,
                         m: int, converged: Optional[int] = None) -> MatchReport:
    """Rayleigh values and residuals of diff eigenvectors against T*T.

    residuals are relative to ||M||_2; the commutation residual
    ||KS - SK||_F / (||K||_F ||S||_F) is computed in the trial space, where
    the degenerate endpoint coefficients cause no discretization artifacts.
    """
    if converged is None:
        converged = converged_mode_count(diff)
    if m > converged:
        raise ModeRangeError(f"requested {m} modes, only {converged} converged")
    dec = eig_sym(diff.stiffness, ASCENDING_DIFF, source=diff.spec.tag)
    B = np.sqrt(integral.grid.weights)[:, None] * basis_on_grid(diff, integral.grid)
    M = integral.entries
    A = integral.half_factor
    op_norm = float(np.linalg.svd(A, compute_uv=False)[0] ** 2)
    records = []
    for n in range(m):
        v = B @ dec.eigenvectors[:, n]
        v = v / np.linalg.norm(v)
        Av = A @ v  # Rayleigh through the half factor resolves deep modes
        mu = float(np.dot(Av, Av))
        res = float(np.linalg.norm(M @ v - mu * v)) / op_norm
        records.append(ModeMatch(n + 1, float(dec.eigenvalues[n]), mu, res))
    # Commutator on the matched eigenblock: non-converged Galerkin modes carry
    # no spectral claim and their norms would drown the signal.
    U = dec.eigenvectors[:, :m]
    K = (B @ U).T @ M @ (B @ U)
    lam = np.diag(dec.eigenvalues[:m])
    comm = np.linalg.norm(K @ lam - lam @ K) / (np.linalg.norm(K) * np.linalg.norm(lam))
    return MatchReport(tuple(records), float(comm),
                       integral.kind.to_string(), diff.spec.tag)


# ----------------------------------------------------------------------------
# Decay and growth laws
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class DecayFit:
    model: str
    c1: float
    c2: float           # decay rate (exp model) or |slope| (superexp model)
    slope: float        # signed slope of log mu against the regressor
    r_squared: float
    n_range: tuple

    def to_json(self) -> dict:
        return {"model": self.model, "c1": self.c1, "c2": self.c2,
                "slope": self.slope, "r_squared": self.r_squared,
                "n_range": list(self.n_range)}


def _r_squared(y, yhat) -> float:
    ss_res = float(np.sum((y - yhat) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot == 0.0:
        return 1.0
    return 1.0 - ss_res / ss_tot


def usable_modes(dec: SpectralDecomposition, n_range) -> np.ndarray:
    """1-based indices inside the window and above the solver floor."""
    mu = dec.eigenvalues
    lo, hi = n_range
    idx = np.arange(1, len(mu) + 1)
    keep = (idx >= lo) & (idx <= hi) & (mu > dec.value_floor * mu[0]) & (mu > 0)
    return idx[keep]


def fit_decay(dec: SpectralDecomposition, model: str,
              n_range=DEFAULT_FIT_WINDOW) -> DecayFit:
    """Least-squares decay-law fit on the log spectrum.

    exp-decay:  log mu_n = log c1 - c2 n
    super-exp:  log mu_n = const + slope * (n log n)

    The spectrum must carry >= 8 modes above the solver floor; the requested
    window is then intersected with the usable modes (>= 4 points for a fit).
    """
    if dec.order != DESCENDING_INTEGRAL:
        raise InvalidArgumentError("decay fits expect an integral-operator spectrum")
    if len(usable_modes(dec, (1, dec.size))) < 8:
        raise InsufficientDataError("fewer than 8 modes above the solver floor")
    idx = usable_modes(dec, n_range)
    if len(idx) < 4:
        raise InsufficientDataError(
            f"only {len(idx)} usable modes in window {n_range}; need >= 4"
        )
    logmu = np.log(dec.eigenvalues[idx - 1])
    if model == EXP_DECAY:
        regressor = idx.astype(float)
    elif model == SUPER_EXP:
        regressor = idx * np.log(idx)
    else:
        raise InvalidArgumentError(f"unknown decay model: {model}")
    slope, intercept = np.polyfit(regressor, logmu, 1)
    r2 = _r_squared(logmu, slope * regressor + intercept)
    if model == EXP_DECAY:
        c1, c2 = float(np.exp(intercept)), float(-slope)
        if c2 <= 0:
            raise InvalidArgumentError("spectrum is not decaying: fitted c2 <= 0")
    else:
        c1, c2 = float(np.exp(intercept)), float(abs(slope))
    return DecayFit(model, c1, c2, float(slope), float(np.clip(r2, 0.0, 1.0)),
                    (int(idx[0]), int(idx[-1])))


def growth_check(dec: SpectralDecomposition, mode_count: Optional[int] = None) -> float:
    """min over modes of lambda_n / n^2 (ascending spectrum, 1-indexed)."""
    if dec.order != ASCENDING_DIFF:
        raise InvalidArgumentError("growth check expects an ascending spectrum")
    lam = dec.eigenvalues
    if mode_count is not None:
        lam = lam[:mode_count]
    n = np.arange(1, len(lam) + 1, dtype=float)
    return float(np.min(lam / n ** 2))


def spectrum_to_csv(dec: SpectralDecomposition) -> str:
    lines = ["n,eigenvalue"]
    for n, val in enumerate(dec.eigenvalues, start=1):
        lines.append(f"{n},{val:.17g}")
    return "\n".join(lines) + "\n"
