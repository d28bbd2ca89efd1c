"""Worst-case synthesis: Gramian minimization and figure reproduction.

The smallest eigenpair of G_ij = <T phi_i, T phi_j> over an orthonormal
basis yields the unit-norm combination the operator damps the most; its
eigenvalue is the achieved ratio ||T f||^2 / ||f||^2.  The three built-in
figure functions reproduce the published near-invisible examples with their
printed coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .domains import Interval, QuadGrid, make_grid
from .errors import InvalidArgumentError
from .functions import FunctionKind, FunctionRep, linear_combination
from .integral_ops import (OperatorKind, OperatorMatrix, fourier_image_energy,
                           gram_matrix, quadratic_form)

ORTHONORMALITY_TOL = 1e-10


@dataclass(frozen=True)
class GramianReport:
    basis_descriptor: dict
    gramian: np.ndarray = field(repr=False)
    min_eigenvalue: float = 0.0
    minimizer_coefficients: np.ndarray = field(repr=False, default=None)
    basis: tuple = field(repr=False, default=())
    operator: str = ""

    def to_json(self) -> dict:
        return {
            "operator": self.operator,
            "basis": self.basis_descriptor,
            "min_eigenvalue": self.min_eigenvalue,
            "minimizer": list(self.minimizer_coefficients),
        }


def build_gramian(operator: OperatorKind, basis: list[FunctionRep],
                  grid: QuadGrid) -> GramianReport:
    """Gramian of the operator images of an orthonormal basis.

    The smallest eigenpair comes from an SVD of the half-factor image matrix,
    so min eigenvalues far below eps*||G|| are still resolved accurately.
    """
    V = np.column_stack([phi.values(grid.nodes) for phi in basis])
    gram0 = V.T @ (grid.weights[:, None] * V)
    if np.max(np.abs(gram0 - np.eye(len(basis)))) > ORTHONORMALITY_TOL:
        raise InvalidArgumentError("basis is not orthonormal on the grid")
    M = gram_matrix(operator, grid)
    AV = M.half_factor @ (np.sqrt(grid.weights)[:, None] * V)
    G = AV.T @ AV
    _, s, Vt = np.linalg.svd(AV, full_matrices=False)
    if len(s) < len(basis):
        raise InvalidArgumentError("image matrix is rank deficient for this basis")
    vec = Vt[-1]
    i = np.argmax(np.abs(vec))
    if vec[i] < 0:
        vec = -vec
    first = basis[0]
    descriptor = {
        "family": first.kind.value,
        "size": len(basis),
        "domain": [first.domain.a, first.domain.b],
    }
    return GramianReport(descriptor, 0.5 * (G + G.T), float(s[-1] ** 2),
                         vec, tuple(basis), operator.to_string())


def worst_function(report: GramianReport) -> FunctionRep:
    """The minimizing combination sum_k a_k phi_k as a FunctionRep."""
    if not report.basis:
        raise InvalidArgumentError("report carries no basis functions")
    return linear_combination(list(report.basis), report.minimizer_coefficients)


# ----------------------------------------------------------------------------
# Figure reproduction
# ----------------------------------------------------------------------------

class FigureId(Enum):
    FIG1 = 1
    FIG2 = 2
    FIG3 = 3


@dataclass(frozen=True)
class FigureSpec:
    figure_id: FigureId
    coefficients: tuple
    basis_kind: FunctionKind
    first_mode: int          # lowest raw frequency k carrying a coefficient
    domain: Interval
    operator: OperatorKind
    claimed_ratio: float
    pass_factor: float

    def function(self) -> FunctionRep:
        payload = np.zeros(self.first_mode - 1 + len(self.coefficients))
        payload[self.first_mode - 1:] = self.coefficients
        return FunctionRep(self.basis_kind, payload, self.domain, raw_x=True)


# Printed plot coefficients, raw sin(k pi x) / cos(k pi x) bases.
FIGURES = {
    FigureId.FIG1: FigureSpec(
        FigureId.FIG1,
        (-0.15269, 0.4830, 0.3084, 0.80509),
        FunctionKind.SINE_SERIES, 2,
        Interval(0.0, 1.0),
        OperatorKind.hilbert_truncated(Interval(0.0, 1.0), Interval(2.0, 3.0)),
        1e-7, 30.0,
    ),
    FigureId.FIG2: FigureSpec(
        FigureId.FIG2,
        (-0.0707, -0.421, 0.2137, 0.8783),
        FunctionKind.SINE_SERIES, 1,
        Interval(1.0, 2.0),
        OperatorKind.laplace_tt(Interval(1.0, 2.0)),
        1e-8, 30.0,
    ),
    FigureId.FIG3: FigureSpec(
        FigureId.FIG3,
        (0.00055, 0.0824, 0.6196, 0.7805),
        FunctionKind.COSINE_SERIES, 1,
        Interval(-1.0, 1.0),
        OperatorKind.fourier_tt(),
        1e-18, 100.0,
    ),
}


def reproduce_figure(figure_id: FigureId, n: int = 256) -> dict:
    """Recompute ||T f||^2 / ||f||^2 for a built-in figure function."""
    try:
        spec = FIGURES[FigureId(figure_id)]
    except (KeyError, ValueError) as exc:
        raise InvalidArgumentError(f"unknown figure id: {figure_id!r}") from exc
    f = spec.function()
    grid = make_grid(spec.domain, n)
    norm2 = float(np.dot(grid.weights, f.values(grid.nodes) ** 2))
    if spec.figure_id is FigureId.FIG3:
        # Cancellation-limited regime: closed-form basis transforms with
        # compensated summation, then integrate |f_hat|^2.
        image = fourier_image_energy(f, n_xi=n)
    else:
        image = quadratic_form(gram_matrix(spec.operator, grid), f)
    ratio = image / norm2
    ok = spec.claimed_ratio / spec.pass_factor <= ratio <= spec.claimed_ratio * spec.pass_factor
    return {
        "figure": spec.figure_id.value,
        "operator": spec.operator.to_string(),
        "computed_ratio": ratio,
        "claimed_ratio": spec.claimed_ratio,
        "pass": bool(ok),
    }
