"""Coins, initial coin states and the lattice amplitude container.

Everything here is an immutable value. Amplitude arrays are stored densely
over the square window ``[-L, L]^2`` with a trailing coin axis, so the
amplitude of ``|x, y, c>`` lives at ``amps[x + L, y + L, c]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

#: Normalisation tolerance used for coin states and walker states.
NORM_ATOL = 1e-12

_FORBIDDEN_GAMMA = (math.pi / 2, math.pi, 3 * math.pi / 2)
_GAMMA_GUARD = 1e-12


class InvalidParameterError(ValueError):
    """Raised when a coin angle, coin state or window is unusable."""


@dataclass(frozen=True)
class CoinParams:
    """Coin angle ``gamma`` with cached ``c = cos(gamma)`` and ``s = sin(gamma)``.

    ``gamma`` must lie in the open interval (0, 2*pi) and stay more than
    1e-12 away from pi/2, pi and 3*pi/2, where either ``c`` or ``s`` vanishes.
    """

    gamma: float = math.pi / 4

    def __post_init__(self):
        g = float(self.gamma)
        if not math.isfinite(g) or not (_GAMMA_GUARD < g < 2 * math.pi - _GAMMA_GUARD):
            raise InvalidParameterError(f"gamma must lie in (0, 2*pi), got {self.gamma!r}")
        for bad in _FORBIDDEN_GAMMA:
            if abs(g - bad) <= _GAMMA_GUARD:
                raise InvalidParameterError(f"gamma={g!r} is a forbidden value (c*s = 0)")
        object.__setattr__(self, "gamma", g)

    @property
    def c(self) -> float:
        return math.cos(self.gamma)

    @property
    def s(self) -> float:
        return math.sin(self.gamma)

    @property
    def is_hadamard(self) -> bool:
        return self.gamma == math.pi / 4


HADAMARD = CoinParams(math.pi / 4)


@dataclass(frozen=True, eq=False)
class CoinOperator:
    """A 2x2 or 4x4 unitary coin stored as a read-only complex128 matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
            raise InvalidParameterError(f"coin must be 2x2 or 4x4, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def check_unitary(m) -> float:
    """Return ``max |M^dagger M - I|`` for a square matrix or :class:`CoinOperator`."""
    if isinstance(m, CoinOperator):
        m = m.matrix
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidParameterError(f"expected a square matrix, got shape {m.shape}")
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def make_coin_2d(params: CoinParams = HADAMARD) -> CoinOperator:
    """Two-level coin ``[[c, s], [s, -c]]``; ``gamma = pi/4`` gives the Hadamard gate."""
    if params.is_hadamard:
        # exact entries so the Hadamard case matches 1/sqrt(2) bit for bit
        h = 1 / math.sqrt(2)
        return CoinOperator(np.array([[h, h], [h, -h]]))
    c, s = params.c, params.s
    return CoinOperator(np.array([[c, s], [s, -c]]))


def make_coin_grover(params: CoinParams = HADAMARD) -> CoinOperator:
    """Generalised four-level Grover coin; ``gamma = pi/4`` gives the Grover diffusion coin."""
    if params.is_hadamard:
        c2 = s2 = cs = 0.5
    else:
        c, s = params.c, params.s
        c2, s2, cs = c * c, s * s, abs(c * s)
    return CoinOperator(
        np.array(
            [
                [-c2, cs, cs, s2],
                [cs, -s2, c2, cs],
                [cs, c2, -s2, cs],
                [s2, cs, cs, -c2],
            ]
        )
    )


def _as_coin_vector(amps, dim: int) -> np.ndarray:
    v = np.array(amps, dtype=np.complex128).reshape(-1)
    if v.shape != (dim,):
        raise InvalidParameterError(f"expected {dim} coin amplitudes, got {v.shape[0]}")
    norm = float(np.sum(np.abs(v) ** 2))
    if abs(norm - 1.0) > NORM_ATOL:
        raise InvalidParameterError(f"coin state is not normalised (|v|^2 = {norm!r})")
    v.setflags(write=False)
    return v


@dataclass(frozen=True, eq=False)
class CoinState2:
    """Normalised qubit coin state ``nu0 |0> + nu1 |1>``."""

    nu0: complex
    nu1: complex

    def __post_init__(self):
        v = _as_coin_vector([self.nu0, self.nu1], 2)
        object.__setattr__(self, "nu0", complex(v[0]))
        object.__setattr__(self, "nu1", complex(v[1]))

    @classmethod
    def from_bloch(cls, theta: float, phi: float) -> "CoinState2":
        """``cos(theta/2) |0> + exp(i phi) sin(theta/2) |1>``."""
        return cls(math.cos(theta / 2), complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2))

    @classmethod
    def symmetric(cls, kappa: int = 0) -> "CoinState2":
        """``(|0> + (-1)^kappa i |1>)/sqrt(2)``: the two states giving an axis-symmetric spread."""
        h = 1 / math.sqrt(2)
        return cls(h, (-1) ** kappa * 1j * h)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.nu0, self.nu1], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class CoinState4:
    """Normalised four-level coin state ``sum_i q_i |i>``."""

    q: tuple

    def __post_init__(self):
        v = _as_coin_vector(self.q, 4)
        object.__setattr__(self, "q", tuple(complex(a) for a in v))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.q, dtype=np.complex128)


def grover_equivalent_init(params: CoinParams = HADAMARD, xi: int = 0) -> CoinState4:
    """Grover-walk coin state whose spatial distribution matches the symmetric alternate walk.

    ``q0 = q3 = (-1)^xi |cs| / (sqrt(2) s)`` and ``q1 = q2 = -(-1)^xi s / sqrt(2)``.
    """
    if xi not in (0, 1):
        raise InvalidParameterError(f"xi must be 0 or 1, got {xi!r}")
    sign = -1.0 if xi else 1.0
    if params.is_hadamard:
        edge, mid = 0.5, -0.5
    else:
        c, s = params.c, params.s
        edge = abs(c * s) / (math.sqrt(2) * s)
        mid = -s / math.sqrt(2)
    return CoinState4((sign * edge, sign * mid, sign * mid, sign * edge))


@dataclass(frozen=True, eq=False)
class WalkerState:
    """Amplitudes of a walk after ``t`` steps on the window ``[-window, window]^2``.

    ``amps`` has shape ``(2L+1, 2L+1, coin_dim)`` and is read-only. Sites off the
    parity sublattice ``x = y = t (mod 2)`` and sites with ``max(|x|,|y|) > t``
    hold exact zeros.
    """

    t: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.amps)
        if a.ndim != 3 or a.shape[0] != a.shape[1] or a.shape[0] % 2 != 1 or a.shape[2] not in (2, 4):
            raise InvalidParameterError(f"bad amplitude array shape {a.shape}")
        if self.t < 0:
            raise InvalidParameterError("t must be non-negative")
        if a.dtype != np.complex128:
            a = a.astype(np.complex128)
        if a.flags.writeable:
            a = a.copy()
            a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def window(self) -> int:
        return (self.amps.shape[0] - 1) // 2

    @property
    def coin_dim(self) -> int:
        return self.amps.shape[2]

    @property
    def coords(self) -> np.ndarray:
        """Lattice coordinates ``-L..L`` along either axis."""
        return np.arange(-self.window, self.window + 1)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def amplitude(self, x: int, y: int) -> np.ndarray:
        """Coin amplitudes at site ``(x, y)``; zeros outside the window."""
        L = self.window
        if abs(x) > L or abs(y) > L:
            return np.zeros(self.coin_dim, dtype=np.complex128)
        return self.amps[x + L, y + L]


def new_state(init, window: int) -> WalkerState:
    """Walker localised at the origin with coin ``init`` (CoinState2, CoinState4 or a vector)."""
    if isinstance(init, (CoinState2, CoinState4)):
        vec = init.vector
    else:
        vec = np.asarray(init, dtype=np.complex128).reshape(-1)
        if vec.shape[0] not in (2, 4):
            raise InvalidParameterError(f"coin vector must have 2 or 4 entries, got {vec.shape[0]}")
        vec = _as_coin_vector(vec, vec.shape[0])
    if int(window) != window or window < 0:
        raise InvalidParameterError(f"window half-width must be a non-negative integer, got {window!r}")
    window = int(window)
    amps = np.zeros((2 * window + 1, 2 * window + 1, vec.shape[0]), dtype=np.complex128)
    amps[window, window] = vec
    return WalkerState(0, amps)


def random_state(coin_dim: int, t: int, window: int, rng: np.random.Generator) -> WalkerState:
    """Random normalised state obeying the parity and support constraints of step ``t``."""
    if window < t:
        raise InvalidParameterError("window must be at least t")
    n = 2 * window + 1
    amps = np.zeros((n, n, coin_dim), dtype=np.complex128)
    sites = np.arange(-t, t + 1, 2) + window
    m = sites.size
    block = rng.standard_normal((m, m, coin_dim)) + 1j * rng.standard_normal((m, m, coin_dim))
    block /= np.sqrt(np.sum(np.abs(block) ** 2))
    amps[np.ix_(sites, sites)] = block
    return WalkerState(t, amps)
