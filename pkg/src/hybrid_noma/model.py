"""System parameters, channel realizations and the fading sampler.

All powers are linear and noise-normalized; rates are in bits per channel
use (base-2 logarithms throughout).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "InvalidParameterError",
    "SystemParams",
    "ChannelGains",
    "epsilon0",
    "tau_m",
    "tau_m_array",
    "substream",
    "sample_gains",
    "sample_gain_arrays",
    "db_to_linear",
    "linear_to_db",
    "log2p",
]

# Offset that maps numpy's [0, 1) uniforms onto the open interval (0, 1).
_HALF_ULP = 2.0 ** -54


class InvalidParameterError(ValueError):
    """Raised when a system parameter is outside its admissible range."""


@dataclass(frozen=True)
class SystemParams:
    """Transmit powers, energy budget fraction and QoS target of a user pair.

    Parameters
    ----------
    rho_n, rho_m : float
        Linear transmit powers of the rate-hungry user U_n and the
        QoS-constrained user U_m.
    eta : float
        Fraction of U_n's OMA energy that hybrid NOMA may spend, 0 < eta <= 1.
    r0 : float
        Target rate of U_m in bits per channel use.
    slot_T : float
        Slot duration in seconds.
    """

    rho_n: float
    rho_m: float
    eta: float
    r0: float
    slot_T: float = 1.0

    def __post_init__(self):
        for name in ("rho_n", "rho_m", "eta", "r0", "slot_T"):
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
                raise InvalidParameterError(f"{name} must be a finite number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.rho_n <= 0:
            raise InvalidParameterError(f"rho_n must be > 0, got {self.rho_n}")
        if self.rho_m <= 0:
            raise InvalidParameterError(f"rho_m must be > 0, got {self.rho_m}")
        if not 0 < self.eta <= 1:
            raise InvalidParameterError(f"eta must satisfy 0 < eta <= 1, got {self.eta}")
        if self.r0 <= 0:
            raise InvalidParameterError(f"r0 must be > 0, got {self.r0}")
        if self.slot_T <= 0:
            raise InvalidParameterError(f"slot_T must be > 0, got {self.slot_T}")

    @classmethod
    def from_db(cls, rho_n_db, rho_m_db, eta, r0, slot_T=1.0):
        return cls(db_to_linear(rho_n_db), db_to_linear(rho_m_db), eta, r0, slot_T)

    @property
    def eps0(self):
        return epsilon0(self.r0)

    def replace(self, **changes):
        fields = dict(rho_n=self.rho_n, rho_m=self.rho_m, eta=self.eta, r0=self.r0, slot_T=self.slot_T)
        fields.update(changes)
        return SystemParams(**fields)


@dataclass(frozen=True)
class ChannelGains:
    """One realization of the squared fading magnitudes |h_m|^2 and |h_n|^2."""

    g_m: float
    g_n: float

    def __post_init__(self):
        for name in ("g_m", "g_n"):
            value = float(getattr(self, name))
            if not value >= 0 or math.isinf(value):
                raise InvalidParameterError(f"{name} must be finite and >= 0, got {value!r}")
            object.__setattr__(self, name, value)


def epsilon0(r0):
    """SNR threshold ``2**r0 - 1`` matching a target rate ``r0``."""
    if not r0 > 0:
        raise InvalidParameterError(f"r0 must be > 0, got {r0}")
    if r0 >= 1:
        return 2.0 ** r0 - 1.0
    # expm1 keeps full relative precision as r0 -> 0
    return math.expm1(r0 * math.log(2.0))


def tau_m(params: SystemParams, g_m: float) -> float:
    """Largest interference power that still lets U_m be decoded at rate r0."""
    if not g_m >= 0:
        raise InvalidParameterError(f"g_m must be >= 0, got {g_m}")
    return max(0.0, params.rho_m * g_m / params.eps0 - 1.0)


def tau_m_array(params: SystemParams, g_m: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, params.rho_m * np.asarray(g_m, dtype=float) / params.eps0 - 1.0)


def substream(seed: int, start: int = 0) -> np.random.Generator:
    """Generator positioned at gain pair ``start`` of the stream keyed by ``seed``.

    Philox is counter-based: one counter block yields four 64-bit words, i.e.
    two gain pairs, so jumping to any pair costs O(1). Any partition of the
    stream into chunks therefore reproduces the serial draw exactly.
    """
    key = np.random.SeedSequence(int(seed)).generate_state(2, np.uint64)
    bitgen = np.random.Philox(key=key)
    bitgen.advance(int(start) // 2)
    rng = np.random.Generator(bitgen)
    if int(start) % 2:
        rng.random(2)
    return rng


def sample_gain_arrays(rng: np.random.Generator, n: int):
    """Draw ``n`` independent pairs of exp(1) gains by inverse CDF.

    Returns ``(g_m, g_n)`` arrays. Draws are strictly positive and finite.
    """
    u = rng.random((n, 2)) + _HALF_ULP
    g = -np.log(u)
    return g[:, 0], g[:, 1]


def sample_gains(rng: np.random.Generator) -> ChannelGains:
    g_m, g_n = sample_gain_arrays(rng, 1)
    return ChannelGains(float(g_m[0]), float(g_n[0]))


def db_to_linear(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0) if np.ndim(x_db) else 10.0 ** (float(x_db) / 10.0)


def linear_to_db(x):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise InvalidParameterError(f"linear_to_db requires x > 0, got {x!r}")
    return 10.0 * np.log10(arr) if arr.ndim else 10.0 * math.log10(float(arr))


def log2p(x):
    """``log2(1 + x)`` evaluated without cancellation for small ``x``."""
    return np.log1p(x) / math.log(2.0)
