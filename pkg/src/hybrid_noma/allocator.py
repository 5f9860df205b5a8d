"""Closed-form power split for hybrid NOMA and a grid-search oracle.

U_n spends ``beta1 * rho_n`` in U_m's slot (decoded after SIC) and
``beta2 * rho_n`` in its own slot, subject to ``beta1 + beta2 <= eta`` and
the SIC constraint ``beta1 * rho_n * g_n <= tau_m``. The objective is
concave and symmetric in the two phases, so the optimum is the feasible
``beta1`` nearest to ``eta / 2`` with the budget exhausted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import ChannelGains, InvalidParameterError, SystemParams, log2p, tau_m, tau_m_array

__all__ = [
    "InfeasibleSplitError",
    "PowerSplit",
    "optimal_split",
    "split_rate",
    "optimal_rate",
    "grid_oracle",
    "optimal_beta1_array",
    "optimal_rate_array",
    "DEFAULT_RESOLUTION",
]

DEFAULT_RESOLUTION = 100_000

# Slack for budget checks: beta2 = eta - beta1 can round the sum up by an ulp.
_BUDGET_RTOL = 4 * np.finfo(float).eps


class InfeasibleSplitError(ValueError):
    """A power split violates the budget or the SIC decodability constraint."""


@dataclass(frozen=True)
class PowerSplit:
    """Power fractions for the NOMA phase (``beta1``) and OMA phase (``beta2``).

    When ``eta`` is given the split is checked against the budget
    ``beta1 + beta2 <= eta`` on construction.
    """

    beta1: float
    beta2: float
    eta: Optional[float] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "beta1", float(self.beta1))
        object.__setattr__(self, "beta2", float(self.beta2))
        if not (self.beta1 >= 0 and self.beta2 >= 0):
            raise InfeasibleSplitError(f"power fractions must be >= 0, got ({self.beta1}, {self.beta2})")
        if self.eta is not None and self.beta1 + self.beta2 > self.eta * (1 + _BUDGET_RTOL):
            raise InfeasibleSplitError(
                f"budget exceeded: beta1 + beta2 = {self.beta1 + self.beta2} > eta = {self.eta}"
            )

    def __iter__(self):
        return iter((self.beta1, self.beta2))


def optimal_beta1_array(x, tau, eta):
    """Optimal NOMA-phase fraction for effective SNR ``x = rho_n * g_n``.

    Vectorized over ``x`` and ``tau``. ``x == 0`` with ``tau > 0`` gives an
    unbounded ratio and therefore ``eta / 2``.
    """
    x = np.asarray(x, dtype=float)
    tau = np.asarray(tau, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(x > 0, tau / np.where(x > 0, x, 1.0), np.inf)
    half = eta / 2.0
    beta1 = np.where(tau <= 0, 0.0, np.where(ratio >= half, half, ratio))
    # (tau / x) * x may round above tau; step down so SIC feasibility is exact
    over = beta1 * x > tau
    if np.any(over):
        beta1 = np.where(over, np.nextafter(beta1, 0.0), beta1)
    return beta1


def optimal_rate_array(x, tau, eta):
    """Maximal hybrid rate of U_n, case-matched closed form, vectorized."""
    x = np.asarray(x, dtype=float)
    tau = np.asarray(tau, dtype=float)
    half = eta / 2.0
    zero_budget = tau <= 0
    # tau >= half * x  <=>  tau / x >= eta / 2 (also for x == 0)
    symmetric = ~zero_budget & (tau >= half * x)
    capped = ~zero_budget & ~symmetric
    oma_only = log2p(eta * x)
    both_equal = 2.0 * log2p(half * x)
    sic_limited = log2p(np.where(capped, tau, 0.0)) + log2p(np.where(capped, eta * x - tau, 0.0))
    return np.where(zero_budget, oma_only, np.where(symmetric, both_equal, sic_limited))


def optimal_split(params: SystemParams, gains: ChannelGains) -> PowerSplit:
    """Power split maximizing U_n's rate under the budget and SIC constraints.

    Examples
    --------
    >>> p = SystemParams(rho_n=10, rho_m=10, eta=0.8, r0=1)
    >>> tuple(optimal_split(p, ChannelGains(g_m=1.0, g_n=1.0)))
    (0.4, 0.4)
    """
    tau = tau_m(params, gains.g_m)
    beta1 = float(optimal_beta1_array(params.rho_n * gains.g_n, tau, params.eta))
    return PowerSplit(beta1, params.eta - beta1, eta=params.eta)


def split_rate(params: SystemParams, gains: ChannelGains, split: PowerSplit, strict: bool = False) -> float:
    """Rate of U_n summed over the NOMA and OMA phases for a given split.

    With ``strict=True`` the split must satisfy the budget and the SIC
    constraint, otherwise :class:`InfeasibleSplitError` is raised.
    """
    beta1, beta2 = split
    x = params.rho_n * gains.g_n
    if strict:
        PowerSplit(beta1, beta2, eta=params.eta)
        tau = tau_m(params, gains.g_m)
        if beta1 * x > tau:
            raise InfeasibleSplitError(f"SIC fails: beta1 * rho_n * g_n = {beta1 * x} > tau_m = {tau}")
    return float(log2p(beta1 * x) + log2p(beta2 * x))


def optimal_rate(params: SystemParams, gains: ChannelGains) -> float:
    tau = tau_m(params, gains.g_m)
    return float(optimal_rate_array(params.rho_n * gains.g_n, tau, params.eta))


def grid_oracle(params: SystemParams, gains: ChannelGains, resolution: int = DEFAULT_RESOLUTION):
    """Brute-force the split by sweeping ``beta1`` over the feasible segment.

    The segment is ``[0, min(eta, tau_m / (rho_n g_n))]`` with ``beta2 = eta -
    beta1``. ``eta / 2`` is added as a candidate whenever it is feasible.
    Returns ``(PowerSplit, rate)``.
    """
    if resolution < 2:
        raise InvalidParameterError(f"resolution must be >= 2, got {resolution}")
    eta = params.eta
    x = params.rho_n * gains.g_n
    tau = tau_m(params, gains.g_m)
    if tau <= 0:
        upper = 0.0
    elif x > 0:
        upper = min(eta, tau / x)
        while upper * x > tau:
            upper = math.nextafter(upper, 0.0)
    else:
        upper = eta
    candidates = np.linspace(0.0, upper, int(resolution))
    if eta / 2 <= upper:
        candidates = np.append(candidates, eta / 2)
    rates = log2p(candidates * x) + log2p((eta - candidates) * x)
    best = int(np.argmax(rates))
    beta1 = float(candidates[best])
    return PowerSplit(beta1, eta - beta1, eta=eta), float(rates[best])
