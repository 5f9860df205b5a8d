"""Hybrid NOMA versus full-power OMA: win conditions and energy accounting."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .allocator import optimal_rate
from .model import ChannelGains, InvalidParameterError, SystemParams, log2p, tau_m, tau_m_array

__all__ = [
    "Case",
    "ComparisonOutcome",
    "oma_rate",
    "oma_rate_array",
    "hybrid_beats_oma",
    "classify_cases",
    "energy",
    "compare",
]


class Case(IntEnum):
    """Disjoint events partitioning the gain plane.

    The first five make up the event that hybrid NOMA does not beat OMA;
    ``WIN`` is its complement.
    """

    P1 = 0  # tau_m = 0
    P2_1 = 1  # symmetric split, gain threshold binds through the eta term
    P2_2 = 2  # symmetric split, gain threshold binds through tau_m
    P3_1 = 3  # SIC-limited split, tau_m <= 1/eta - 1
    P3_2 = 4  # SIC-limited split, tau_m > 1/eta - 1, gain below threshold
    WIN = 5


@dataclass(frozen=True)
class ComparisonOutcome:
    hybrid_rate: float
    oma_rate: float
    hybrid_wins: bool
    energy_hybrid: float
    energy_oma: float


def oma_rate(params: SystemParams, g_n: float) -> float:
    """Rate of U_n in its own slot at full power."""
    return float(log2p(params.rho_n * g_n))


def oma_rate_array(params: SystemParams, g_n):
    return log2p(params.rho_n * np.asarray(g_n, dtype=float))


def classify_cases(params: SystemParams, g_m, g_n):
    """Label each gain pair with the :class:`Case` it falls in.

    Uses the analytic win conditions only, never the rate values.
    """
    g_m = np.asarray(g_m, dtype=float)
    g_n = np.asarray(g_n, dtype=float)
    eta, rho_n = params.eta, params.rho_n
    eps0 = params.eps0
    tau = tau_m_array(params, g_m)
    x = rho_n * g_n

    zero = tau <= 0
    symmetric = ~zero & (tau >= (eta / 2.0) * x)
    capped = ~zero & ~symmetric

    symmetric_loses = symmetric & ~(g_n > 4.0 * (1.0 - eta) / (eta**2 * rho_n))
    # min{2 tau/(eta rho_n), 4(1-eta)/(eta^2 rho_n)} switches at this g_m
    g_m_switch = eps0 * (2.0 - eta) / (params.rho_m * eta)

    slope = eta + tau * eta - 1.0
    low_tau = tau < 1.0 / eta - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        g_threshold = np.where(slope > 0, tau**2 / (rho_n * np.where(slope > 0, slope, 1.0)), np.inf)
    capped_loses_high = capped & ~low_tau & ~(g_n > g_threshold)

    labels = np.full(np.broadcast(g_m, g_n).shape, int(Case.WIN), dtype=np.int8)
    labels[zero] = Case.P1
    labels[symmetric_loses & (g_m > g_m_switch)] = Case.P2_1
    labels[symmetric_loses & ~(g_m > g_m_switch)] = Case.P2_2
    labels[capped & low_tau] = Case.P3_1
    labels[capped_loses_high] = Case.P3_2
    return labels


def hybrid_beats_oma(params: SystemParams, gains: ChannelGains) -> bool:
    """Whether hybrid NOMA's optimal rate strictly exceeds the full-power OMA rate.

    Decided from the closed-form gain conditions, not by comparing rates.

    Examples
    --------
    >>> p = SystemParams(rho_n=10, rho_m=10, eta=0.8, r0=1)
    >>> hybrid_beats_oma(p, ChannelGains(g_m=1.0, g_n=1.0))
    True
    """
    eta, rho_n, g_n = params.eta, params.rho_n, gains.g_n
    tau = tau_m(params, gains.g_m)
    if tau <= 0:
        return False
    x = rho_n * g_n
    if tau >= (eta / 2.0) * x:
        return g_n > 4.0 * (1.0 - eta) / (eta**2 * rho_n)
    if tau < 1.0 / eta - 1.0:
        return False
    slope = eta + tau * eta - 1.0
    if slope <= 0:
        return False
    return g_n > tau**2 / (rho_n * slope)


def energy(params: SystemParams, scheme: str) -> float:
    """Noise-normalized energy spent by U_n over one slot pair."""
    if scheme == "hybrid":
        return params.eta * params.slot_T * params.rho_n
    if scheme == "oma":
        return params.slot_T * params.rho_n
    raise InvalidParameterError(f"scheme must be 'hybrid' or 'oma', got {scheme!r}")


def compare(params: SystemParams, gains: ChannelGains) -> ComparisonOutcome:
    hybrid = optimal_rate(params, gains)
    oma = oma_rate(params, gains.g_n)
    return ComparisonOutcome(
        hybrid_rate=hybrid,
        oma_rate=oma,
        hybrid_wins=hybrid > oma,
        energy_hybrid=energy(params, "hybrid"),
        energy_oma=energy(params, "oma"),
    )
