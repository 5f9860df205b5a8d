"""Seeded Monte Carlo estimators over Rayleigh fading realizations.

Samples are drawn in fixed-size chunks, each a jump into one counter-based
stream per seed. Per-chunk statistics are combined in chunk order, so
results are bit-identical for any number of workers; counts are also
independent of the chunk size.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .allocator import optimal_rate_array
from .comparator import Case, classify_cases, oma_rate_array
from .model import InvalidParameterError, SystemParams, sample_gain_arrays, substream, tau_m_array

__all__ = [
    "McConfig",
    "McEstimate",
    "CaseEstimates",
    "ErgodicRates",
    "gain_chunks",
    "estimate_p_wn",
    "estimate_case_probs",
    "ergodic_rates",
]


@dataclass(frozen=True)
class McConfig:
    samples: int
    seed: int = 0
    chunk_size: int = 2**16
    workers: int = 1

    def __post_init__(self):
        if int(self.samples) < 1:
            raise InvalidParameterError(f"samples must be >= 1, got {self.samples}")
        if int(self.chunk_size) < 1:
            raise InvalidParameterError(f"chunk_size must be >= 1, got {self.chunk_size}")
        if int(self.workers) < 1:
            raise InvalidParameterError(f"workers must be >= 1, got {self.workers}")

    @property
    def n_chunks(self):
        return -(-int(self.samples) // int(self.chunk_size))

    def chunk_start(self, index):
        return index * int(self.chunk_size)

    def chunk_length(self, index):
        return min(int(self.chunk_size), int(self.samples) - self.chunk_start(index))


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_err: float
    n: int

    @classmethod
    def from_count(cls, count, n):
        """Bernoulli frequency with its binomial standard error."""
        mean = count / n
        return cls(mean, math.sqrt(mean * (1.0 - mean) / n), int(n))


@dataclass(frozen=True)
class CaseEstimates:
    """Frequencies of each region of the losing event, plus the winning region."""

    p1: McEstimate
    p2_1: McEstimate
    p2_2: McEstimate
    p3_1: McEstimate
    p3_2: McEstimate
    wins: McEstimate
    counts: tuple

    @property
    def total(self) -> McEstimate:
        lose = sum(self.counts[: int(Case.WIN)])
        return McEstimate.from_count(lose, self.wins.n)

    def components(self):
        return {"p1": self.p1, "p2_1": self.p2_1, "p2_2": self.p2_2, "p3_1": self.p3_1, "p3_2": self.p3_2}


class ErgodicRates(NamedTuple):
    hybrid: McEstimate
    oma: McEstimate
    gap: McEstimate  # paired difference hybrid - oma


def gain_chunks(cfg: McConfig):
    """Yield ``(g_m, g_n)`` arrays chunk by chunk in stream order."""
    for i in range(cfg.n_chunks):
        yield sample_gain_arrays(substream(cfg.seed, cfg.chunk_start(i)), cfg.chunk_length(i))


def _map_chunks(cfg: McConfig, fn):
    def run(i):
        g_m, g_n = sample_gain_arrays(substream(cfg.seed, cfg.chunk_start(i)), cfg.chunk_length(i))
        return fn(g_m, g_n)

    indices = range(cfg.n_chunks)
    if cfg.workers == 1 or cfg.n_chunks == 1:
        return [run(i) for i in indices]
    with ThreadPoolExecutor(max_workers=int(cfg.workers)) as pool:
        return list(pool.map(run, indices))


def estimate_p_wn(params: SystemParams, cfg: McConfig) -> McEstimate:
    """Frequency of ``optimal_rate <= oma_rate`` over ``cfg.samples`` draws."""
    eta, rho_n = params.eta, params.rho_n

    def count(g_m, g_n):
        hybrid = optimal_rate_array(rho_n * g_n, tau_m_array(params, g_m), eta)
        return int(np.count_nonzero(hybrid <= oma_rate_array(params, g_n)))

    return McEstimate.from_count(sum(_map_chunks(cfg, count)), int(cfg.samples))


def estimate_case_probs(params: SystemParams, cfg: McConfig) -> CaseEstimates:
    """Per-region frequencies from the closed-form win conditions.

    Every draw lands in exactly one region, so the counts sum to
    ``cfg.samples``.
    """
    n_cases = len(Case)

    def count(g_m, g_n):
        return np.bincount(classify_cases(params, g_m, g_n), minlength=n_cases)

    counts = np.sum(_map_chunks(cfg, count), axis=0)
    n = int(cfg.samples)
    ests = [McEstimate.from_count(int(k), n) for k in counts]
    return CaseEstimates(*ests, counts=tuple(int(k) for k in counts))


def _moments(x):
    n = x.size
    mean = math.fsum(x) / n
    return n, mean, math.fsum((x - mean) ** 2)


def _combine(parts):
    # Chan et al. pairwise update, applied in chunk order
    n, mean, m2 = parts[0]
    for nb, mb, m2b in parts[1:]:
        total = n + nb
        delta = mb - mean
        mean = mean + delta * nb / total
        m2 = m2 + m2b + delta * delta * n * nb / total
        n = total
    std_err = math.sqrt(m2 / (n - 1) / n) if n > 1 else 0.0
    return McEstimate(mean, std_err, n)


def ergodic_rates(params: SystemParams, cfg: McConfig) -> ErgodicRates:
    """Average hybrid and OMA rates of U_n over a shared gain stream."""
    eta, rho_n = params.eta, params.rho_n

    def stats(g_m, g_n):
        hybrid = optimal_rate_array(rho_n * g_n, tau_m_array(params, g_m), eta)
        oma = oma_rate_array(params, g_n)
        return _moments(hybrid), _moments(oma), _moments(hybrid - oma)

    parts = _map_chunks(cfg, stats)
    return ErgodicRates(*(_combine([p[k] for p in parts]) for k in range(3)))
