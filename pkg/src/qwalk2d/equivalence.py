"""Numerical certificates for the alternate/Grover walk equivalence.

Every residual is a max-abs over lattice sites: the identities being checked
are pointwise, so a summed norm would hide a single bad site.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    HADAMARD,
    CoinParams,
    CoinState2,
    InvalidParameterError,
    WalkerState,
    grover_equivalent_init,
    new_state,
)
from .walks import Alternate, Grover, ProbabilityGrid, probability_grid


@dataclass
class ResidualReport:
    """Per-step residuals of one identity along a trajectory."""

    name: str
    per_step: list = field(default_factory=list)
    worst: tuple | None = None

    @property
    def max_abs(self) -> float:
        return max((r for _, r in self.per_step), default=0.0)

    def add(self, t: int, value: float, where: tuple[int, int]):
        if not self.per_step or value > self.max_abs:
            self.worst = (where[0], where[1], t)
        self.per_step.append((t, float(value)))

    def passed(self, tol: float) -> bool:
        return self.max_abs <= tol


def _argmax_site(err: np.ndarray, offset: int) -> tuple[float, tuple[int, int]]:
    i, j = np.unravel_index(int(np.argmax(err)), err.shape)
    return float(err[i, j]), (int(i) - offset, int(j) - offset)


def _lemma1_fields(state: WalkerState, params: CoinParams | None) -> tuple[np.ndarray, np.ndarray]:
    if state.coin_dim != 4:
        raise InvalidParameterError("the Grover-side identities need a four-level state")
    if params is None:
        w_edge = w_mid = 1.0
    else:
        w_edge, w_mid = abs(params.s), abs(params.c)
    L = state.window
    # two cells of zero padding so (x +- 1, y +- 1) is addressable for x, y in [-L-1, L+1]
    a = np.pad(state.amps, ((2, 2), (2, 2), (0, 0)))
    n = 2 * L + 3
    core = slice(1, 1 + n)
    xm, xp = slice(0, n), slice(2, 2 + n)
    horizontal = (
        w_edge * a[xm, core, 0] + w_mid * a[xm, core, 1] + w_mid * a[xp, core, 2] + w_edge * a[xp, core, 3]
    )
    vertical = (
        w_edge * a[core, xm, 0] + w_mid * a[core, xm, 2] + w_mid * a[core, xp, 1] + w_edge * a[core, xp, 3]
    )
    return horizontal, vertical


def lemma1_site_residual(state: WalkerState, params: CoinParams | None = None):
    """Largest violation of the two Grover-side amplitude identities and where it occurs.

    With ``params=None`` the unweighted sums are checked; otherwise the sums
    are weighted ``|s|, |c|, |c|, |s|`` as needed for the generalised coin.
    """
    horizontal, vertical = _lemma1_fields(state, params)
    err = np.maximum(np.abs(horizontal), np.abs(vertical))
    return _argmax_site(err, state.window + 1)


def lemma1_residual(state: WalkerState, params: CoinParams | None = None) -> float:
    return lemma1_site_residual(state, params)[0]


def _mapping_error(
    alt: WalkerState,
    gro: WalkerState,
    prefactor: complex,
    sign_cs: float,
    kappa: int,
) -> np.ndarray:
    if alt.coin_dim != 2 or gro.coin_dim != 4:
        raise InvalidParameterError("expected an alternate-walk state and a Grover-walk state")
    if alt.t != gro.t:
        raise InvalidParameterError(f"states are at different times ({alt.t} vs {gro.t})")
    if alt.window != gro.window:
        raise InvalidParameterError("states use different windows")
    b, a = alt.amps, gro.amps
    rot = (-1) ** kappa * 1j
    want0 = prefactor * (sign_cs * a[..., 0] + rot * a[..., 2])
    want1 = prefactor * (-a[..., 1] + sign_cs * rot * a[..., 3])
    return np.maximum(np.abs(b[..., 0] - want0), np.abs(b[..., 1] - want1))


def mapping_prefactor(t: int, params: CoinParams, xi: int, kappa: int, nu0: complex) -> complex:
    """``(-1)^(t+xi) sqrt(2) nu0 (c + (-1)^kappa i s)``."""
    return (-1) ** (t + xi) * math.sqrt(2) * nu0 * complex(params.c, (-1) ** kappa * params.s)


def theorem1_site_residual(alt: WalkerState, gro: WalkerState, global_sign: int = 1):
    """Residual of ``b0 = (-1)^t e^{i pi/4} (a0 + i a2)``, ``b1 = (-1)^t e^{i pi/4} (-a1 + i a3)``.

    ``global_sign=-1`` checks the same relations with the opposite overall sign.
    """
    pre = global_sign * (-1) ** alt.t * cmath.exp(1j * math.pi / 4)
    return _argmax_site(_mapping_error(alt, gro, pre, 1.0, 0), alt.window)


def theorem1_residual(alt: WalkerState, gro: WalkerState) -> float:
    return theorem1_site_residual(alt, gro)[0]


def _check_pairing(xi: int, kappa: int, nu0: complex):
    if xi not in (0, 1) or kappa not in (0, 1):
        raise InvalidParameterError("xi and kappa must each be 0 or 1")
    if abs(abs(nu0) - 1 / math.sqrt(2)) > 1e-12:
        raise InvalidParameterError(f"paired alternate init needs |nu0| = 1/sqrt(2), got {abs(nu0)!r}")


def theorem2_site_residual(
    alt: WalkerState,
    gro: WalkerState,
    params: CoinParams,
    xi: int,
    kappa: int,
    nu0: complex = 1 / math.sqrt(2),
):
    """Residual of the generalised amplitude mapping between the two walks.

    ``nu0`` is the alternate walk's initial ``|0>`` amplitude; its partner is
    ``nu1 = (-1)^kappa i nu0``.
    """
    _check_pairing(xi, kappa, nu0)
    pre = mapping_prefactor(alt.t, params, xi, kappa, nu0)
    sign_cs = math.copysign(1.0, params.c * params.s)
    return _argmax_site(_mapping_error(alt, gro, pre, sign_cs, kappa), alt.window)


def theorem2_residual(alt, gro, params: CoinParams, xi: int, kappa: int, nu0: complex = 1 / math.sqrt(2)) -> float:
    return theorem2_site_residual(alt, gro, params, xi, kappa, nu0)[0]


def distribution_site_distance(a: ProbabilityGrid, b: ProbabilityGrid):
    if a.window != b.window:
        raise InvalidParameterError(f"grid windows differ ({a.window} vs {b.window})")
    return _argmax_site(np.abs(a.values - b.values), a.window)


def distribution_distance(a: ProbabilityGrid, b: ProbabilityGrid) -> float:
    """``max_{x,y} |P_a(x, y) - P_b(x, y)|``."""
    return distribution_site_distance(a, b)[0]


def paired_inits(params: CoinParams = HADAMARD, xi: int = 0, kappa: int = 0, nu0: complex = 1 / math.sqrt(2)):
    """Alternate and Grover initial coins that the generalised equivalence pairs."""
    _check_pairing(xi, kappa, nu0)
    return CoinState2(nu0, (-1) ** kappa * 1j * nu0), grover_equivalent_init(params, xi)


def verify_pairing(
    params: CoinParams = HADAMARD,
    xi: int = 0,
    kappa: int = 0,
    t_max: int = 25,
    alt_init: CoinState2 | None = None,
    nu0: complex = 1 / math.sqrt(2),
) -> dict[str, ResidualReport]:
    """Evolve both walks side by side and record every residual at every step.

    ``alt_init`` overrides the alternate-walk coin (to demonstrate that an
    unpaired start breaks the mapping); ``nu0`` is still the value the mapping
    is checked against.
    """
    paired_alt, gro_init = paired_inits(params, xi, kappa, nu0)
    alt = new_state(alt_init if alt_init is not None else paired_alt, t_max)
    gro = new_state(gro_init, t_max)
    alt_walk, gro_walk = Alternate(params), Grover(params)
    alt_coin, gro_coin = alt_walk.coin(), gro_walk.coin()
    weighted = None if params.is_hadamard else params

    reports = {
        name: ResidualReport(name)
        for name in ("lemma1", "mapping", "mapping_flipped", "distribution", "grover_imag")
    }
    for t in range(t_max + 1):
        if t:
            alt = alt_walk.step(alt, alt_coin)
            gro = gro_walk.step(gro, gro_coin)
        reports["lemma1"].add(t, *lemma1_site_residual(gro, weighted))
        reports["mapping"].add(t, *theorem2_site_residual(alt, gro, params, xi, kappa, nu0))
        pre = -mapping_prefactor(t, params, xi, kappa, nu0)
        sign_cs = math.copysign(1.0, params.c * params.s)
        reports["mapping_flipped"].add(
            t, *_argmax_site(_mapping_error(alt, gro, pre, sign_cs, kappa), alt.window)
        )
        reports["distribution"].add(t, *distribution_site_distance(probability_grid(alt), probability_grid(gro)))
        reports["grover_imag"].add(t, *_argmax_site(np.abs(gro.amps.imag).max(axis=2), gro.window))
    return reports
