"""Probability that hybrid NOMA fails to beat OMA under Rayleigh fading.

With unit-mean exponential gains the event ``R_n* <= R_n^OMA`` splits into
five disjoint regions of the (g_m, g_n) plane. Four have closed forms; the
last leaves a one-dimensional integral over a short range of g_m that is
evaluated by adaptive quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _spi

from .model import InvalidParameterError, SystemParams

__all__ = [
    "QuadratureError",
    "ConsistencyError",
    "QuadratureConfig",
    "ProbabilityBreakdown",
    "integrate",
    "integrand",
    "integral_term",
    "p_wn_exact",
    "p_breakdown",
    "p_wn_asymptotic",
    "p_wn_limit_fixed_rho_n",
    "p_wn_limit_fixed_rho_m",
]


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""


class ConsistencyError(ArithmeticError):
    """A computed probability fell outside [0, 1] by more than the tolerance."""


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise InvalidParameterError(f"abs_tol must be > 0, got {self.abs_tol}")
        if int(self.max_subdivisions) < 1:
            raise InvalidParameterError(f"max_subdivisions must be >= 1, got {self.max_subdivisions}")


@dataclass(frozen=True)
class ProbabilityBreakdown:
    """Component probabilities of the losing event and their sum."""

    p1: float
    p2_1: float
    p2_2: float
    p3_1: float
    p3_2: float
    total: float

    def components(self):
        return {"p1": self.p1, "p2_1": self.p2_1, "p2_2": self.p2_2, "p3_1": self.p3_1, "p3_2": self.p3_2}


def integrate(f, a, b, cfg: QuadratureConfig = QuadratureConfig()):
    """Integrate ``f`` over ``[a, b]`` to absolute accuracy ``cfg.abs_tol``.

    Thin wrapper over QUADPACK's adaptive Gauss-Kronrod routine. Nodes are
    interior to each subinterval, so ``f`` is never evaluated at the
    endpoints.
    """
    if b < a:
        raise InvalidParameterError(f"need a <= b, got a={a}, b={b}")
    if a == b:
        return 0.0
    value, abserr, info, *rest = _spi.quad(
        f, a, b, epsabs=cfg.abs_tol, epsrel=0.0, limit=int(cfg.max_subdivisions), full_output=1
    )
    if rest:
        raise QuadratureError(
            f"quadrature over [{a!r}, {b!r}] did not converge: {rest[0]} "
            f"(estimate={value!r}, abserr={abserr!r}, neval={info['neval']}, "
            f"subintervals={info['last']})"
        )
    if abserr > cfg.abs_tol:
        raise QuadratureError(f"error estimate {abserr!r} exceeds abs_tol {cfg.abs_tol!r}")
    return float(value)


def integrand(params: SystemParams):
    """Return the g_m-density of the region where the g_n bound leaves a loss gap.

    ``exp(-y) * exp(-(rho_m y / eps0 - 1)**2 / (rho_n (eta rho_m y / eps0 - 1)))``.
    At the lower endpoint ``y = eps0 / (eta rho_m)`` the denominator vanishes
    while the numerator stays positive, so the value there is 0.
    """
    rho_n, rho_m, eta = params.rho_n, params.rho_m, params.eta
    eps0 = params.eps0

    def f(y):
        t = rho_m * y / eps0
        den = rho_n * (eta * t - 1.0)
        if den <= 0:
            return 0.0
        return math.exp(-y - (t - 1.0) ** 2 / den)

    return f


def _bounds(params: SystemParams):
    eps0, eta, rho_m = params.eps0, params.eta, params.rho_m
    return eps0 / (eta * rho_m), (2.0 - eta) * eps0 / (eta * rho_m)


def integral_term(params: SystemParams, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    lo, hi = _bounds(params)
    if params.eta == 1.0:
        return 0.0
    return integrate(integrand(params), lo, hi, cfg)


def _clamp(p, tol, what):
    if -tol <= p <= 1.0 + tol:
        return min(1.0, max(0.0, p))
    raise ConsistencyError(f"{what} = {p!r} lies outside [0, 1] beyond tolerance {tol!r}")


def p_wn_exact(params: SystemParams, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """Exact probability that hybrid NOMA does not beat full-power OMA.

    ``1 - exp(-(2-eta) eps0/(eta rho_m) - 4(1-eta)/(eta^2 rho_n))`` minus the
    quadrature term from :func:`integral_term`.
    """
    eta, rho_n, rho_m, eps0 = params.eta, params.rho_n, params.rho_m, params.eps0
    exponent = (2.0 - eta) * eps0 / (eta * rho_m) + 4.0 * (1.0 - eta) / (eta**2 * rho_n)
    p = -math.expm1(-exponent) - integral_term(params, cfg)
    return _clamp(p, cfg.abs_tol, "P_n^w")


def p_breakdown(params: SystemParams, cfg: QuadratureConfig = QuadratureConfig()) -> ProbabilityBreakdown:
    """The five region probabilities whose sum is :func:`p_wn_exact`.

    Region definitions follow :class:`hybrid_noma.comparator.Case`.
    """
    eta, rho_n, rho_m, eps0 = params.eta, params.rho_n, params.rho_m, params.eps0
    a = eps0 / rho_m  # tau_m > 0 boundary
    c = eps0 * (2.0 - eta) / (rho_m * eta)  # upper end of the integral
    d = eps0 / (eta * rho_m)  # tau_m = 1/eta - 1 boundary
    b = 4.0 * (1.0 - eta) / (eta**2 * rho_n)
    s = 2.0 / (eta * rho_n)
    # prefactor eta rho_n eps0 exp(s) / (2 rho_m + eta rho_n eps0); exp(s) is
    # folded into each exponent below so small rho_n cannot overflow
    k = eta * rho_n * eps0 / (2.0 * rho_m + eta * rho_n * eps0)

    e_lo = math.exp(-a)
    e_mid = math.exp(s - 2.0 / (eta**2 * rho_n) - d)
    e_hi = math.exp(s - c - (4.0 - 2.0 * eta) / (eta**2 * rho_n))

    p1 = -math.expm1(-a)
    p2_1 = math.exp(-c) * -math.expm1(-b)
    p2_2 = math.exp(-a) - math.exp(-c) - k * (e_lo - e_hi)
    p3_1 = k * (e_lo - e_mid)
    p3_2 = k * (e_mid - e_hi) - integral_term(params, cfg)
    parts = [p1, p2_1, p2_2, p3_1, p3_2]
    tol = cfg.abs_tol
    parts = [_clamp(p, tol, name) for p, name in zip(parts, ("P1", "P2,1", "P2,2", "P3,1", "P3,2"))]
    return ProbabilityBreakdown(*parts, total=_clamp(math.fsum(parts), tol, "P_n^w"))


def p_wn_asymptotic(params: SystemParams) -> float:
    """High-SNR approximation ``eps0/(eta rho_m) + 4(1-eta)/(eta^2 rho_n)``.

    Not clamped: values above 1 flag parameters outside its validity region.
    """
    eta = params.eta
    return params.eps0 / (eta * params.rho_m) + 4.0 * (1.0 - eta) / (eta**2 * params.rho_n)


def p_wn_limit_fixed_rho_n(params: SystemParams) -> float:
    """Floor of the losing probability as ``rho_m`` grows with ``rho_n`` fixed."""
    eta = params.eta
    return -math.expm1(-4.0 * (1.0 - eta) / (eta**2 * params.rho_n))


def p_wn_limit_fixed_rho_m(params: SystemParams) -> float:
    """Floor of the losing probability as ``rho_n`` grows with ``rho_m`` fixed."""
    return -math.expm1(-params.eps0 / (params.eta * params.rho_m))
