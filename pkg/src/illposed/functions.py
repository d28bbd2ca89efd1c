"""Function representations, norms and inner products.

A FunctionRep is either a coefficient series (sine / cosine / orthonormal
Legendre) with exact analytic differentiation, or samples on Chebyshev points
differentiated spectrally through barycentric interpolation.  Half-line
functions (Theorem-2 territory) are polynomial-times-exponential ExpPoly
objects, which also differentiate exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np
from numpy.polynomial import legendre as npleg
from numpy.polynomial import polynomial as nppoly

from .domains import HalfLineDomain, Interval, QuadGrid
from .errors import InvalidArgumentError


class FunctionKind(Enum):
    GRID_SAMPLES = "grid-samples"
    SINE_SERIES = "sine-series"
    COSINE_SERIES = "cosine-series"
    LEGENDRE_SERIES = "legendre-series"


# ----------------------------------------------------------------------------
# Chebyshev machinery for GridSamples (spectral differentiation)
# ----------------------------------------------------------------------------

def cheb_nodes(m: int, domain: Interval) -> np.ndarray:
    """Ascending Chebyshev-Lobatto points on the domain (m >= 2)."""
    j = np.arange(m)
    ref = -np.cos(np.pi * j / (m - 1))  # ascending on [-1, 1]
    return domain.midpoint + 0.5 * domain.length * ref


def _cheb_bary_weights(m: int) -> np.ndarray:
    w = (-1.0) ** np.arange(m)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def _bary_eval(x_nodes, w_bary, samples, x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    diff = x[:, None] - x_nodes[None, :]
    hit = np.isclose(diff, 0.0, rtol=0.0, atol=0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = w_bary[None, :] / diff
        out = (ratio @ samples) / ratio.sum(axis=1)
    exact_rows, exact_cols = np.nonzero(hit)
    out[exact_rows] = samples[exact_cols]
    return out


def _bary_diff_matrix(x_nodes, w_bary):
    m = len(x_nodes)
    with np.errstate(divide="ignore"):
        D = (w_bary[None, :] / w_bary[:, None]) / (x_nodes[:, None] - x_nodes[None, :])
    D[np.arange(m), np.arange(m)] = 0.0
    D[np.arange(m), np.arange(m)] = -D.sum(axis=1)
    return D


# ----------------------------------------------------------------------------
# FunctionRep
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class FunctionRep:
    """A real function on an interval, as coefficients or samples.

    Series conventions on [p, q] with L = q - p:
      sine:    f(x) = sum_k c_k sin(k pi (x-p)/L),  k = 1..K (vanishes at ends)
      cosine:  f(x) = sum_k c_k cos(k pi (x-p)/L),  k = 1..K
      legendre: orthonormalized Legendre polynomials mapped to [p, q], k = 0..K-1
    With raw_x=True the trig bases are sin(k pi x) / cos(k pi x) in the raw
    coordinate, exactly as plotted in the worst-case figure reproductions.
    GridSamples hold values at ascending Chebyshev-Lobatto points.
    """

    kind: FunctionKind
    payload: np.ndarray = field(repr=False)
    domain: Interval
    raw_x: bool = False

    def __post_init__(self):
        payload = np.asarray(self.payload, dtype=float)
        payload.setflags(write=False)
        object.__setattr__(self, "payload", payload)
        if payload.ndim != 1 or len(payload) == 0:
            raise InvalidArgumentError("payload must be a nonempty 1-d array")
        if self.kind is FunctionKind.GRID_SAMPLES:
            if len(payload) < 2:
                raise InvalidArgumentError("grid samples need at least 2 points")
            if self.raw_x:
                raise InvalidArgumentError("raw_x applies to trig series only")
        if self.raw_x and self.kind is FunctionKind.LEGENDRE_SERIES:
            raise InvalidArgumentError("raw_x applies to trig series only")

    # -- evaluation -----------------------------------------------------------

    def _trig_freqs(self):
        k = np.arange(1, len(self.payload) + 1, dtype=float)
        if self.raw_x:
            return k * np.pi, 0.0  # angle = omega*x
        omega = k * np.pi / self.domain.length
        return omega, self.domain.a  # angle = omega*(x - p)

    def values(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.kind is FunctionKind.SINE_SERIES:
            omega, p = self._trig_freqs()
            return np.sin(np.outer(x - p, omega)) @ self.payload
        if self.kind is FunctionKind.COSINE_SERIES:
            omega, p = self._trig_freqs()
            return np.cos(np.outer(x - p, omega)) @ self.payload
        if self.kind is FunctionKind.LEGENDRE_SERIES:
            xi = (2.0 * x - self.domain.a - self.domain.b) / self.domain.length
            return npleg.legval(xi, self._plain_legendre_coeffs())
        nodes = cheb_nodes(len(self.payload), self.domain)
        return _bary_eval(nodes, _cheb_bary_weights(len(self.payload)), self.payload, x)

    def _plain_legendre_coeffs(self) -> np.ndarray:
        k = np.arange(len(self.payload))
        return self.payload * np.sqrt((2 * k + 1) / self.domain.length)

    # -- exact differentiation ------------------------------------------------

    def derivative(self) -> "FunctionRep":
        if self.kind is FunctionKind.SINE_SERIES:
            omega, _ = self._trig_freqs()
            return FunctionRep(FunctionKind.COSINE_SERIES, self.payload * omega,
                               self.domain, self.raw_x)
        if self.kind is FunctionKind.COSINE_SERIES:
            omega, _ = self._trig_freqs()
            return FunctionRep(FunctionKind.SINE_SERIES, -self.payload * omega,
                               self.domain, self.raw_x)
        if self.kind is FunctionKind.LEGENDRE_SERIES:
            plain = npleg.legder(self._plain_legendre_coeffs()) * (2.0 / self.domain.length)
            if len(plain) == 0:
                plain = np.zeros(1)
            k = np.arange(len(plain))
            coeffs = plain / np.sqrt((2 * k + 1) / self.domain.length)
            return FunctionRep(FunctionKind.LEGENDRE_SERIES, coeffs, self.domain)
        nodes = cheb_nodes(len(self.payload), self.domain)
        D = _bary_diff_matrix(nodes, _cheb_bary_weights(len(self.payload)))
        return FunctionRep(FunctionKind.GRID_SAMPLES, D @ self.payload, self.domain)

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        key = "samples" if self.kind is FunctionKind.GRID_SAMPLES else "coefficients"
        obj = {
            "kind": self.kind.value,
            "domain": {"a": self.domain.a, "b": self.domain.b},
            key: list(self.payload),
        }
        if self.raw_x:
            obj["raw_x"] = True
        return obj

    @staticmethod
    def from_json(obj: dict) -> "FunctionRep":
        kind = FunctionKind(obj["kind"])
        domain = Interval(float(obj["domain"]["a"]), float(obj["domain"]["b"]))
        payload = obj["samples"] if kind is FunctionKind.GRID_SAMPLES else obj["coefficients"]
        return FunctionRep(kind, np.asarray(payload, dtype=float), domain,
                           bool(obj.get("raw_x", False)))


@dataclass(frozen=True)
class ExpPoly:
    """p(x) e^{-rate x} on the half line, with exact differentiation.

    poly holds power-basis coefficients (low order first).  All weighted
    norms of Theorem-2 type are finite for rate > 0.
    """

    poly: np.ndarray = field(repr=False)
    rate: float

    def __post_init__(self):
        poly = np.asarray(self.poly, dtype=float)
        poly.setflags(write=False)
        object.__setattr__(self, "poly", poly)
        if poly.ndim != 1 or len(poly) == 0:
            raise InvalidArgumentError("poly must be a nonempty 1-d array")
        if not self.rate > 0:
            raise InvalidArgumentError("rate must be positive")

    def values(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return nppoly.polyval(x, self.poly) * np.exp(-self.rate * x)

    def derivative(self) -> "ExpPoly":
        dp = nppoly.polyder(self.poly)
        if len(dp) == 0:
            dp = np.zeros(1)
        n = max(len(dp), len(self.poly))
        coeffs = np.zeros(n)
        coeffs[: len(dp)] += dp
        coeffs[: len(self.poly)] -= self.rate * self.poly
        return ExpPoly(coeffs, self.rate)


FunctionLike = Union[FunctionRep, ExpPoly]


# ----------------------------------------------------------------------------
# Norms and inner products
# ----------------------------------------------------------------------------

def _check_same_domain(f: FunctionLike, g: FunctionLike, grid: QuadGrid):
    for h in (f, g):
        if isinstance(h, FunctionRep):
            if not isinstance(grid.domain, Interval) or h.domain != grid.domain:
                raise InvalidArgumentError("function domain does not match grid domain")
        elif isinstance(h, ExpPoly):
            if not isinstance(grid.domain, HalfLineDomain):
                raise InvalidArgumentError("ExpPoly functions live on a half-line grid")


def inner_product(f: FunctionLike, g: FunctionLike, grid: QuadGrid) -> float:
    """Discrete L2 pairing sum_i w_i f(x_i) g(x_i)."""
    _check_same_domain(f, g, grid)
    return float(np.dot(grid.weights, f.values(grid.nodes) * g.values(grid.nodes)))


def l2_norm(f: FunctionLike, grid: QuadGrid) -> float:
    return float(np.sqrt(max(inner_product(f, f, grid), 0.0)))


def h1_seminorm(f: FunctionLike, grid: QuadGrid) -> float:
    """L2 norm of the exact (series) or spectral (samples) derivative."""
    return l2_norm(f.derivative(), grid)


def weighted_norm(f: FunctionLike, grid: QuadGrid, weight_power: int,
                  derivative_order: int) -> float:
    """|| x^p f^{(k)} || over the truncated half line."""
    if not isinstance(grid.domain, HalfLineDomain):
        raise InvalidArgumentError("weighted_norm requires a half-line grid")
    if weight_power not in (0, 1):
        raise InvalidArgumentError("weight_power must be 0 or 1")
    if derivative_order not in (0, 1, 2):
        raise InvalidArgumentError("derivative_order must be 0, 1 or 2")
    g = f
    for _ in range(derivative_order):
        g = g.derivative()
    vals = g.values(grid.nodes)
    wgt = grid.nodes ** (2 * weight_power) if weight_power else 1.0
    return float(np.sqrt(max(np.dot(grid.weights, wgt * vals * vals), 0.0)))


# ----------------------------------------------------------------------------
# Basis helpers
# ----------------------------------------------------------------------------

def make_sine_basis(domain: Interval, n: int) -> list[FunctionRep]:
    """L2-orthonormal sine functions sqrt(2/L) sin(k pi (x-p)/L), k = 1..n."""
    if n < 1:
        raise InvalidArgumentError("basis size must be >= 1")
    scale = np.sqrt(2.0 / domain.length)
    basis = []
    for k in range(1, n + 1):
        coeffs = np.zeros(k)
        coeffs[-1] = scale
        basis.append(FunctionRep(FunctionKind.SINE_SERIES, coeffs, domain))
    return basis


def linear_combination(basis: list[FunctionRep], coeffs) -> FunctionRep:
    """Combine same-kind series into one FunctionRep (samples fall back to a grid)."""
    coeffs = np.asarray(coeffs, dtype=float)
    if len(basis) != len(coeffs) or not basis:
        raise InvalidArgumentError("need one coefficient per basis function")
    first = basis[0]
    same = all(
        b.kind is first.kind and b.domain == first.domain and b.raw_x == first.raw_x
        and b.kind is not FunctionKind.GRID_SAMPLES
        for b in basis
    )
    if same:
        size = max(len(b.payload) for b in basis)
        payload = np.zeros(size)
        for b, c in zip(basis, coeffs):
            payload[: len(b.payload)] += c * b.payload
        return FunctionRep(first.kind, payload, first.domain, first.raw_x)
    nodes = cheb_nodes(129, first.domain)
    samples = sum(c * b.values(nodes) for b, c in zip(basis, coeffs))
    return FunctionRep(FunctionKind.GRID_SAMPLES, samples, first.domain)
