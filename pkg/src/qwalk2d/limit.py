"""Momentum-space analysis of the alternate walk and its long-time limit law.

Two independent routes to the rescaled moments ``E[(X_t/t)^r1 (Y_t/t)^r2]``
as ``t -> infinity`` live here:

* :func:`limit_moment` integrates group-velocity weights over the Brillouin
  zone with a midpoint rule;
* :func:`density_moment` integrates ``x^r1 y^r2 f(x, y)`` over the elliptical
  support of the closed-form limit density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import HADAMARD, CoinParams, CoinState2, InvalidParameterError, make_coin_2d, new_state
from .walks import Alternate, moments, probability_grid, trajectory

DEGENERACY_TOL = 1e-14


class DegeneratePointError(ValueError):
    """The closed-form eigenvectors are singular at this momentum."""


@dataclass(frozen=True)
class LimitDensityParams:
    params: CoinParams = HADAMARD
    init: CoinState2 = CoinState2.symmetric()

    @property
    def nu(self) -> np.ndarray:
        return self.init.vector

    @property
    def bias(self) -> float:
        """``|nu0|^2 - |nu1|^2``."""
        return abs(self.init.nu0) ** 2 - abs(self.init.nu1) ** 2

    @property
    def coherence(self) -> float:
        """``nu0 conj(nu1) + conj(nu0) nu1``."""
        return 2.0 * (self.init.nu0 * self.init.nu1.conjugate()).real


def _as_limit_params(params, init) -> LimitDensityParams:
    if isinstance(params, LimitDensityParams):
        return params
    return LimitDensityParams(params if params is not None else HADAMARD, init if init is not None else CoinState2.symmetric())


def _shift(k: float) -> np.ndarray:
    return np.diag([np.exp(1j * k), np.exp(-1j * k)])


def step_matrix(kx: float, ky: float, params: CoinParams = HADAMARD) -> np.ndarray:
    """Fourier-space one-step operator ``R(ky) U R(kx) U`` with ``R(k) = diag(e^{ik}, e^{-ik})``."""
    u = make_coin_2d(params).matrix
    return _shift(ky) @ u @ _shift(kx) @ u


@dataclass(frozen=True, eq=False)
class Eigensystem:
    """Closed-form eigenpairs ``j = 1, 2`` of the step operator at one momentum."""

    lambdas: np.ndarray
    vectors: np.ndarray  # column j-1 is v_j
    drift_x: np.ndarray
    drift_y: np.ndarray


def _closed_form(kx, ky, c: float, s: float):
    """Vectorised eigenvalues, unnormalised eigenvectors and drift ratios.

    Arrays carry a leading axis of length 2 for ``j = 1, 2``.
    """
    kx = np.asarray(kx, dtype=float)
    ky = np.asarray(ky, dtype=float)
    ksum, kdiff = kx + ky, kx - ky
    g1 = -c * c * np.sin(ksum) + s * s * np.sin(kdiff)
    g2 = c * c * np.cos(ksum) + s * s * np.cos(kdiff)
    root = np.sqrt(np.clip(1.0 - g2 * g2, 0.0, None))
    sign = np.array([-1.0, 1.0]).reshape((2,) + (1,) * kx.ndim)  # (-1)^j

    lambdas = g2 + 1j * sign * root
    top = c * s * (np.exp(1j * ksum) - np.exp(-1j * kdiff))
    vec0 = np.broadcast_to(top, lambdas.shape)
    vec1 = 1j * (g1 + sign * root)
    with np.errstate(divide="ignore", invalid="ignore"):
        drift_x = -sign * (c * c * np.sin(ksum) + s * s * np.sin(kdiff)) / root
        drift_y = -sign * (c * c * np.sin(ksum) - s * s * np.sin(kdiff)) / root
    return lambdas, vec0, vec1, drift_x, drift_y, 1.0 - g2 * g2


def eigensystem_closed_form(kx: float, ky: float, params: CoinParams = HADAMARD) -> Eigensystem:
    """Eigenvalues ``g2 + i (-1)^j sqrt(1 - g2^2)`` with their normalised eigenvectors."""
    lambdas, v0, v1, dx, dy, gap = _closed_form(kx, ky, params.c, params.s)
    if gap < DEGENERACY_TOL:
        raise DegeneratePointError(f"eigenvalues coincide at k=({kx}, {ky})")
    norms = np.sqrt(np.abs(v0) ** 2 + np.abs(v1) ** 2)
    if np.min(norms) < 1e-7:
        raise DegeneratePointError(f"closed-form eigenvector vanishes at k=({kx}, {ky})")
    vectors = np.vstack([v0 / norms, v1 / norms])
    return Eigensystem(lambdas, vectors, dx, dy)


def midpoint_nodes(n: int, lo: float = -math.pi, hi: float = math.pi) -> np.ndarray:
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


def limit_moment(
    r1: int,
    r2: int,
    params=None,
    init: CoinState2 | None = None,
    quadrature_points: int = 1024,
) -> float:
    """``lim E[(X_t/t)^r1 (Y_t/t)^r2]`` via the Brillouin-zone integral.

    ``(2 pi)^-2 ∫∫ sum_j (D_x λ_j/λ_j)^r1 (D_y λ_j/λ_j)^r2 |<v_j|psi_0>|^2 dk``
    on a midpoint grid; an even grid never lands on ``k in {0, ±pi}`` where
    the eigenvectors are singular.
    """
    if r1 < 0 or r2 < 0:
        raise InvalidParameterError("moment orders must be non-negative")
    if quadrature_points < 2 or quadrature_points % 2:
        raise InvalidParameterError("quadrature_points must be a positive even integer")
    lp = _as_limit_params(params, init)
    c, s = lp.params.c, lp.params.s
    nu0, nu1 = lp.nu
    k = midpoint_nodes(quadrature_points)
    ky = k[np.newaxis, :]
    total = 0.0
    # row blocks keep memory flat for large grids; summation order is fixed
    for start in range(0, quadrature_points, 256):
        kx = k[start : start + 256, np.newaxis]
        _, v0, v1, dx, dy, _ = _closed_form(kx, ky, c, s)
        weight = np.abs(np.conj(v0) * nu0 + np.conj(v1) * nu1) ** 2 / (np.abs(v0) ** 2 + np.abs(v1) ** 2)
        total += float(np.sum(dx**r1 * dy**r2 * weight))
    return total / quadrature_points**2


def limit_density(x, y, params=None, init: CoinState2 | None = None):
    """Closed-form limit density ``f(x, y)``; exactly zero outside the open ellipse D.

    ``D = {(x+y)^2 / 4c^2 + (x-y)^2 / 4s^2 < 1}``.
    """
    lp = _as_limit_params(params, init)
    c, s = lp.params.c, lp.params.s
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    inside = (x + y) ** 2 / (4 * c * c) + (x - y) ** 2 / (4 * s * s) < 1.0
    xi = np.where(inside, x, 0.0)
    yi = np.where(inside, y, 0.0)
    numer = 1.0 - lp.bias * yi - lp.coherence / (2 * c * s) * (c * c * (xi - yi) + s * s * (xi + yi))
    value = numer / (math.pi**2 * (1 - xi * xi) * (1 - yi * yi))
    out = np.where(inside, value, 0.0)
    return float(out) if out.ndim == 0 else out


def support_bounds(x, params: CoinParams):
    """y-interval ``x cos 2γ ± |sin 2γ| sqrt(1 - x^2)`` of D above abscissa ``x``."""
    g2 = 2 * params.gamma
    half = abs(math.sin(g2)) * np.sqrt(np.clip(1 - np.asarray(x) ** 2, 0.0, None))
    centre = np.asarray(x) * math.cos(g2)
    return centre - half, centre + half


def _antiderivative(n: int, y):
    """``∫ y^n / (1 - y^2) dy``."""
    if n == 0:
        return np.arctanh(y)
    if n == 1:
        return -0.5 * np.log1p(-y * y)
    return -(y ** (n - 1)) / (n - 1) + _antiderivative(n - 2, y)


def _outer_nodes(params: CoinParams, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights in θ on (0, π) for the outer integral.

    The inner integral has a log singularity where D touches ``y = ±1``,
    i.e. at ``x = ±cos 2γ``. The interval is split there and each piece gets
    Gauss-Legendre nodes pulled towards its ends by a smoothstep map.
    """
    cut = math.cos(2 * params.gamma)
    breaks = sorted({0.0, math.pi, math.acos(cut), math.acos(-cut)})
    pieces = list(zip(breaks[:-1], breaks[1:]))
    per_piece = max(8, n // len(pieces))
    tau, w = np.polynomial.legendre.leggauss(per_piece)
    tau = 0.5 * (tau + 1.0)
    w = 0.5 * w
    graded = tau * tau * (3.0 - 2.0 * tau)
    dgraded = 6.0 * tau * (1.0 - tau)
    nodes, weights = [], []
    for a, b in pieces:
        if b - a <= 0.0:
            continue
        nodes.append(a + (b - a) * graded)
        weights.append((b - a) * dgraded * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _support_integral(params: CoinParams, r1: int, r2: int, const: float, x_coef: float, y_coef: float, n: int) -> float:
    """``∫∫_D x^r1 y^r2 (const + x_coef x + y_coef y) / (π^2 (1-x^2)(1-y^2)) dx dy``.

    The y-integral is done exactly; the x-integral uses ``x = cos θ``, which
    absorbs the ``1/(1-x^2)`` endpoint singularity.
    """
    theta, weights = _outer_nodes(params, n)
    x = np.cos(theta)
    lo, hi = support_bounds(x, params)
    # nodes next to a break can round y onto ±1; the clipped sliver carries negligible weight
    edge = np.nextafter(1.0, 0.0)
    lo, hi = np.clip(lo, -edge, edge), np.clip(hi, -edge, edge)

    def inner(m):
        return _antiderivative(m, hi) - _antiderivative(m, lo)

    in_y = (const + x_coef * x) * inner(r2) + y_coef * inner(r2 + 1)
    integrand = x**r1 * in_y / np.sin(theta)
    return float(np.sum(integrand * weights) / math.pi**2)


def density_moment(r1: int, r2: int, params=None, init: CoinState2 | None = None, quadrature_points: int = 1024) -> float:
    """``∫∫ x^r1 y^r2 f(x, y) dx dy`` over the support of the limit density."""
    if r1 < 0 or r2 < 0:
        raise InvalidParameterError("moment orders must be non-negative")
    if quadrature_points < 256:
        raise InvalidParameterError("use at least 256 quadrature points")
    lp = _as_limit_params(params, init)
    c, s = lp.params.c, lp.params.s
    q = lp.coherence / (2 * c * s)
    # numerator 1 - bias*y - q*(c^2 (x-y) + s^2 (x+y)) = 1 - q x - (bias + q (s^2 - c^2)) y
    return _support_integral(lp.params, r1, r2, 1.0, -q, -(lp.bias + q * (s * s - c * c)), quadrature_points)


def density_normalization(params=None, init: CoinState2 | None = None, quadrature_points: int = 1024) -> float:
    """Total mass of the limit density (should be 1)."""
    return density_moment(0, 0, params, init, quadrature_points)


def cross_term_integral(params: CoinParams = HADAMARD, quadrature_points: int = 1024) -> float:
    """Integral over D of the coherence term ``[c^2 (x-y) + s^2 (x+y)] / (π^2 (1-x^2)(1-y^2))``."""
    c, s = params.c, params.s
    return _support_integral(params, 0, 0, 0.0, c * c + s * s, s * s - c * c, quadrature_points)


def density_grid(params=None, init: CoinState2 | None = None, points: int = 201):
    """Limit density sampled at cell centres of a ``points x points`` grid on [-1, 1]^2.

    Returns ``(centres, values, cell_area)``; ``values[i, j]`` is ``f(centres[i], centres[j])``.
    """
    if points < 1:
        raise InvalidParameterError("grid needs at least one point per axis")
    centres = midpoint_nodes(points, -1.0, 1.0)
    X, Y = np.meshgrid(centres, centres, indexing="ij")
    return centres, limit_density(X, Y, params, init), (2.0 / points) ** 2


def convergence_report(
    params=None,
    init: CoinState2 | None = None,
    t_list=(100, 200, 400),
    orders=((2, 0), (0, 2), (1, 1), (1, 0), (0, 1)),
    quadrature_points: int = 1024,
) -> list[dict]:
    """Simulated rescaled moments against their limits, one row per ``(t, order)``."""
    lp = _as_limit_params(params, init)
    t_list = [int(t) for t in t_list]
    if not t_list or any(t < 1 for t in t_list) or sorted(t_list) != t_list:
        raise InvalidParameterError("t_list must be ascending positive integers")
    limits = {tuple(o): limit_moment(o[0], o[1], lp, quadrature_points=quadrature_points) for o in orders}
    wanted = set(t_list)
    rows = []
    for state in trajectory(new_state(lp.init, t_list[-1]), Alternate(lp.params), t_list[-1]):
        if state.t not in wanted:
            continue
        grid = probability_grid(state)
        for (r1, r2), lim in limits.items():
            sim = moments(grid, r1, r2, scale=state.t)
            rows.append({"t": state.t, "r1": r1, "r2": r2, "simulated": sim, "limit": lim, "gap": abs(sim - lim)})
    return rows
