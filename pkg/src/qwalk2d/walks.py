"""Time evolution of the alternate (two-level coin) and Grover (four-level coin) walks.

Coin index conventions:

* alternate walk: coin 0 moves towards negative x (resp. y), coin 1 towards positive;
  one step is coin, x-shift, coin, y-shift.
* Grover walk: coin 0, 1, 2, 3 move left-down, left-up, right-down, right-up;
  one step is coin followed by the diagonal shift.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    HADAMARD,
    CoinOperator,
    CoinParams,
    InvalidParameterError,
    WalkerState,
    make_coin_2d,
    make_coin_grover,
)


class WindowOverflowError(InvalidParameterError):
    """The requested evolution would push amplitude outside the stored window."""


def _check_step(state: WalkerState, coin: CoinOperator, dim: int) -> int:
    if state.coin_dim != dim or coin.dim != dim:
        raise InvalidParameterError(
            f"walk needs a {dim}-level coin, got state dim {state.coin_dim} and coin dim {coin.dim}"
        )
    radius = state.t + 1
    if radius > state.window:
        raise WindowOverflowError(f"step {radius} does not fit in window half-width {state.window}")
    return radius


def _active_box(state: WalkerState, radius: int) -> slice:
    L = state.window
    return slice(L - radius, L + radius + 1)


def step_alternate(state: WalkerState, coin: CoinOperator) -> WalkerState:
    """One alternate-walk step: coin, shift along x, coin, shift along y."""
    radius = _check_step(state, coin, 2)
    box = _active_box(state, radius)
    u_t = coin.matrix.T

    # the rim of the box is empty at time t, so shifting inside it loses nothing
    a = state.amps[box, box] @ u_t
    b = np.zeros_like(a)
    b[:-1, :, 0] = a[1:, :, 0]
    b[1:, :, 1] = a[:-1, :, 1]
    a = b @ u_t
    b = np.zeros_like(a)
    b[:, :-1, 0] = a[:, 1:, 0]
    b[:, 1:, 1] = a[:, :-1, 1]

    out = np.zeros_like(state.amps)
    out[box, box] = b
    return WalkerState(state.t + 1, out)


def step_grover(state: WalkerState, coin: CoinOperator) -> WalkerState:
    """One Grover-walk step: four-level coin, then the diagonal shift."""
    radius = _check_step(state, coin, 4)
    box = _active_box(state, radius)

    a = state.amps[box, box] @ coin.matrix.T
    b = np.zeros_like(a)
    b[:-1, :-1, 0] = a[1:, 1:, 0]
    b[:-1, 1:, 1] = a[1:, :-1, 1]
    b[1:, :-1, 2] = a[:-1, 1:, 2]
    b[1:, 1:, 3] = a[:-1, :-1, 3]

    out = np.zeros_like(state.amps)
    out[box, box] = b
    return WalkerState(state.t + 1, out)


@dataclass(frozen=True)
class Alternate:
    """Alternate walk with the two-level coin ``[[c, s], [s, -c]]``."""

    params: CoinParams = HADAMARD
    coin_dim = 2

    def coin(self) -> CoinOperator:
        return make_coin_2d(self.params)

    def step(self, state: WalkerState, coin: CoinOperator | None = None) -> WalkerState:
        return step_alternate(state, coin if coin is not None else self.coin())


@dataclass(frozen=True)
class Grover:
    """Grover walk with the generalised four-level coin."""

    params: CoinParams = HADAMARD
    coin_dim = 4

    def coin(self) -> CoinOperator:
        return make_coin_grover(self.params)

    def step(self, state: WalkerState, coin: CoinOperator | None = None) -> WalkerState:
        return step_grover(state, coin if coin is not None else self.coin())


WalkKind = Alternate | Grover


def evolve(state: WalkerState, kind: WalkKind, steps: int) -> WalkerState:
    """Apply ``steps`` steps of ``kind`` to ``state``."""
    if steps < 0:
        raise InvalidParameterError("steps must be non-negative")
    if state.t + steps > state.window:
        raise WindowOverflowError(
            f"{state.t + steps} steps do not fit in window half-width {state.window}"
        )
    coin = kind.coin()
    for _ in range(steps):
        state = kind.step(state, coin)
    return state


def trajectory(state: WalkerState, kind: WalkKind, steps: int):
    """Yield ``state`` and then every subsequent state up to ``state.t + steps``."""
    if state.t + steps > state.window:
        raise WindowOverflowError(
            f"{state.t + steps} steps do not fit in window half-width {state.window}"
        )
    coin = kind.coin()
    yield state
    for _ in range(steps):
        state = kind.step(state, coin)
        yield state


@dataclass(frozen=True, eq=False)
class ProbabilityGrid:
    """Site probabilities ``values[x + L, y + L]`` after ``t`` steps."""

    t: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2 != 1:
            raise InvalidParameterError(f"bad probability grid shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def window(self) -> int:
        return (self.values.shape[0] - 1) // 2

    @property
    def coords(self) -> np.ndarray:
        return np.arange(-self.window, self.window + 1)

    def __call__(self, x: int, y: int) -> float:
        L = self.window
        if abs(x) > L or abs(y) > L:
            return 0.0
        return float(self.values[x + L, y + L])

    def total(self) -> float:
        return float(self.values.sum())


def probability_grid(state: WalkerState) -> ProbabilityGrid:
    """Trace out the coin: ``P(x, y) = sum_c |amp(x, y, c)|^2``."""
    return ProbabilityGrid(state.t, np.sum(np.abs(state.amps) ** 2, axis=2))


def moments(grid: ProbabilityGrid, r1: int, r2: int, scale: float = 1.0) -> float:
    """``E[(X/scale)^r1 (Y/scale)^r2]`` under ``grid``.

    ``scale = t`` gives the rescaled moments compared against the limit law.
    """
    if r1 < 0 or r2 < 0:
        raise InvalidParameterError("moment orders must be non-negative")
    xs = grid.coords / scale
    return float(np.sum(grid.values * np.outer(xs**r1, xs**r2)))


def origin_probability_series(kind: WalkKind, init, t_max: int) -> np.ndarray:
    """``P(0, 0)`` for ``t = 0..t_max``; used to eyeball localisation of the Grover walk."""
    from .core import new_state

    out = np.empty(t_max + 1)
    L = t_max
    for st in trajectory(new_state(init, t_max), kind, t_max):
        out[st.t] = float(np.sum(np.abs(st.amps[L, L]) ** 2))
    return out


# Recurrence oracles. These deliberately loop over sites one by one and read
# neighbours through WalkerState.amplitude so they share no code with the
# vectorised steps above.


def recurrence_oracle_alternate(state: WalkerState, coin: CoinOperator) -> WalkerState:
    """Alternate step written as the site recurrence

    ``b0'(x,y) = U00 [U00 b0 + U01 b1](x+1,y+1) + U01 [U10 b0 + U11 b1](x-1,y+1)``
    ``b1'(x,y) = U10 [U00 b0 + U01 b1](x+1,y-1) + U11 [U10 b0 + U11 b1](x-1,y-1)``
    """
    _check_step(state, coin, 2)
    u = coin.matrix
    L = state.window
    out = np.zeros_like(state.amps)
    amp = state.amplitude
    for x in range(-L, L + 1):
        for y in range(-L, L + 1):
            pp = amp(x + 1, y + 1)
            mp = amp(x - 1, y + 1)
            pm = amp(x + 1, y - 1)
            mm = amp(x - 1, y - 1)
            # coin-mixed amplitudes that the x-shift brings to (x, y+1) and (x, y-1)
            a0_up = u[0, 0] * pp[0] + u[0, 1] * pp[1]
            a1_up = u[1, 0] * mp[0] + u[1, 1] * mp[1]
            a0_down = u[0, 0] * pm[0] + u[0, 1] * pm[1]
            a1_down = u[1, 0] * mm[0] + u[1, 1] * mm[1]
            out[x + L, y + L, 0] = u[0, 0] * a0_up + u[0, 1] * a1_up
            out[x + L, y + L, 1] = u[1, 0] * a0_down + u[1, 1] * a1_down
    return WalkerState(state.t + 1, out)


_GROVER_SOURCE = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def recurrence_oracle_grover(state: WalkerState, coin: CoinOperator) -> WalkerState:
    """Grover step written as ``a_i'(x,y) = sum_j G_ij a_j(x + dx_i, y + dy_i)``."""
    _check_step(state, coin, 4)
    g = coin.matrix
    L = state.window
    out = np.zeros_like(state.amps)
    for x in range(-L, L + 1):
        for y in range(-L, L + 1):
            for i, (dx, dy) in enumerate(_GROVER_SOURCE):
                src = state.amplitude(x + dx, y + dy)
                out[x + L, y + L, i] = sum(g[i, j] * src[j] for j in range(4))
    return WalkerState(state.t + 1, out)
