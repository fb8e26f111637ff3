"""Closed-form run statistics, certificates, and noise-threshold quantities.

Everything here is exact arithmetic on the Bernoulli run-length process:
waiting-time mean and tail for k consecutive successes, certificate scales
derived from the success-run probability, and the label-noise blow-up of the
waiting time. run_waiting_distribution is the independent Markov-chain
oracle the closed forms are validated against; it deliberately shares no
code with them.

Large-exponent quantities are evaluated in log space (expm1/log1p) so that
noise loads up to q*k of a few hundred stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .noise import NoiseModel, effective_success  # re-exported: spec surface

__all__ = [
    "RunQuery",
    "CertificateQuery",
    "RunStatsReport",
    "RunWaitingDistribution",
    "CertificateScale",
    "run_mean",
    "run_tail_bound",
    "run_waiting_distribution",
    "run_stats_report",
    "certificate_prob",
    "eps_cert",
    "effective_success",
    "noise_blowup_mean",
    "noise_blowup_asymptote",
    "noise_cert_eps",
    "quantile_sufficient_shots",
    "ms_proxy",
    "geometric_run_pmf",
    "geometric_run_mean",
    "decomposition_upper",
    "NoiseModel",
]


@dataclass(frozen=True)
class RunQuery:
    """Waiting-time query: per-trial success probability p, run target k."""

    p: float
    k: int

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise ValueError(f"success probability must lie in (0, 1], got {self.p!r}")
        if self.k < 1:
            raise ValueError(f"run length target must be >= 1, got {self.k}")


@dataclass(frozen=True)
class CertificateQuery:
    """Certificate query: halting threshold, significance delta, label noise q."""

    halt_threshold: int
    delta: float
    q: float = 0.0

    def __post_init__(self):
        if self.halt_threshold < 1:
            raise ValueError(f"halt_threshold must be >= 1, got {self.halt_threshold}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"significance must lie in (0, 1), got {self.delta!r}")
        if not 0.0 <= self.q < 0.5:
            raise ValueError(f"label noise must lie in [0, 0.5), got {self.q!r}")


def run_mean(query: RunQuery) -> float:
    """Expected shots until k consecutive successes: (1 - p^k) / ((1-p) p^k).

    Returns k at p = 1 (the continuous limit of the ratio).
    """
    p, k = query.p, query.k
    if p == 1.0:
        return float(k)
    # (p**-k - 1) / (1 - p), stable for p near 1 and for tiny p**k.
    return math.expm1(-k * math.log(p)) / (1.0 - p)


def run_tail_bound(query: RunQuery, n: int) -> float:
    """Block upper bound P(waiting time > n) <= (1 - p^k) ** floor(n/k)."""
    if n < 0:
        raise ValueError(f"shot count must be nonnegative, got {n}")
    blocks = n // query.k
    if blocks == 0:
        return 1.0
    if query.p == 1.0:
        return 0.0
    log_pk = query.k * math.log(query.p)
    pk = math.exp(log_pk)
    if pk >= 1.0:
        return 0.0
    return math.exp(blocks * math.log1p(-pk))


@dataclass(frozen=True)
class RunWaitingDistribution:
    """Exact waiting-time law from the (k+1)-state run-length chain."""

    query: RunQuery
    survival: np.ndarray  # P(waiting time > n) for n = 0..n_max
    mean: float           # exact expectation from the linear solve


def run_waiting_distribution(query: RunQuery, n_max: int) -> RunWaitingDistribution:
    """Independent oracle: iterate the run-length Markov chain.

    States 0..k hold the current streak, k absorbing. The survival function
    comes from repeated transition application, the mean from solving the
    first-step equations E_j = 1 + p E_{j+1} + (1-p) E_0 with E_k = 0.
    No shared code with the closed forms above.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    p, k = query.p, query.k

    occ = np.zeros(k + 1)
    occ[0] = 1.0
    survival = np.empty(n_max + 1)
    survival[0] = 1.0
    for n in range(1, n_max + 1):
        live = occ[:k]
        nxt = np.empty(k + 1)
        nxt[0] = (1.0 - p) * live.sum()
        nxt[1:] = p * live
        nxt[k] += occ[k]
        occ = nxt
        survival[n] = occ[:k].sum()

    a = np.eye(k)
    for j in range(k):
        a[j, 0] -= 1.0 - p
        if j + 1 < k:
            a[j, j + 1] -= p
    expected = np.linalg.solve(a, np.ones(k))
    return RunWaitingDistribution(query=query, survival=survival,
                                  mean=float(expected[0]))


@dataclass(frozen=True)
class RunStatsReport:
    """Bundle of waiting-time quantities for one (p, k) query."""

    query: RunQuery
    mean: float

    def tail_at(self, n: int) -> float:
        return run_tail_bound(self.query, n)

    def quantile_sufficient(self, delta: float) -> int:
        return quantile_sufficient_shots(self.query, delta)


def run_stats_report(query: RunQuery) -> RunStatsReport:
    return RunStatsReport(query=query, mean=run_mean(query))


def certificate_prob(f: float, halt_threshold: int) -> float:
    """Probability of a full success run under a frozen control: f ** threshold."""
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"success probability must lie in [0, 1], got {f!r}")
    if halt_threshold < 1:
        raise ValueError(f"halt_threshold must be >= 1, got {halt_threshold}")
    return f ** halt_threshold


@dataclass(frozen=True)
class CertificateScale:
    """Certified infidelity scale with its asymptotic companion.

    ceiling is set when the exact value is nonpositive: halting then carries
    no nontrivial accuracy guarantee at the requested significance.
    """

    value: float
    approx: float
    ceiling: bool = False


def eps_cert(query: CertificateQuery) -> CertificateScale:
    """Noiseless certificate scale 1 - delta^(1/threshold).

    The companion approx is the large-threshold form ln(1/delta)/threshold.
    """
    if query.q != 0.0:
        raise ValueError("eps_cert is the noiseless scale; use noise_cert_eps for q > 0")
    m = query.halt_threshold
    exact = 1.0 - query.delta ** (1.0 / m)
    approx = math.log(1.0 / query.delta) / m
    return CertificateScale(value=exact, approx=approx, ceiling=False)


def noise_cert_eps(query: CertificateQuery) -> CertificateScale:
    """Noise-aware certificate scale (1 - q - delta^(1/threshold)) / (1 - 2q).

    Reduces to eps_cert at q = 0. A nonpositive value flags the certificate
    ceiling: the label noise alone already explains a full success run.
    """
    m = query.halt_threshold
    q = query.q
    root = query.delta ** (1.0 / m)
    value = (1.0 - q - root) / (1.0 - 2.0 * q)
    approx = (math.log(1.0 / query.delta) / m - q) / (1.0 - 2.0 * q)
    return CertificateScale(value=value, approx=approx, ceiling=value <= 0.0)


def noise_blowup_mean(q: float, halt_threshold: int) -> float:
    """Lower bound on expected halting shots under label noise q.

    Equals the waiting-time mean at success probability 1 - q, which is how
    it is computed (bit-identical to run_mean by construction).
    """
    if not 0.0 < q < 1.0:
        raise ValueError(f"flip probability must lie in (0, 1), got {q!r}")
    return run_mean(RunQuery(p=1.0 - q, k=halt_threshold))


def noise_blowup_asymptote(q: float, halt_threshold: int) -> float:
    """Small-q companion (e^(q * threshold) - 1) / q."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"flip probability must lie in (0, 1), got {q!r}")
    return math.expm1(q * halt_threshold) / q


def quantile_sufficient_shots(query: RunQuery, delta: float) -> int:
    """Smallest n with run_tail_bound(query, n) <= delta.

    The bound only moves at multiples of k, so the answer is block_count * k;
    the block count from the log-space formula is refined by direct
    evaluation to absorb floating-point edge cases.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"significance must lie in (0, 1), got {delta!r}")
    p, k = query.p, query.k
    if p == 1.0:
        return k
    log_pk = k * math.log(p)
    pk = math.exp(log_pk)
    if pk <= 0.0:
        raise ValueError(f"p**k underflows for p={p!r}, k={k}; quantile not computable")
    log_fail = math.log1p(-pk)
    blocks = max(1, math.ceil(math.log(delta) / log_fail))
    while blocks > 1 and run_tail_bound(query, (blocks - 1) * k) <= delta:
        blocks -= 1
    while run_tail_bound(query, blocks * k) > delta:
        blocks += 1
    return blocks * k


def ms_proxy(streak: int) -> float:
    """Real-time infidelity proxy 1 / (1 + streak) from the running counter."""
    if streak < 0:
        raise ValueError(f"streak must be nonnegative, got {streak}")
    return 1.0 / (1.0 + streak)


def geometric_run_pmf(eps: float, length: int) -> float:
    """P(completed run has given length) = (1 - eps)^length * eps."""
    if not 0.0 < eps <= 1.0:
        raise ValueError(f"infidelity must lie in (0, 1], got {eps!r}")
    if length < 0:
        raise ValueError(f"run length must be nonnegative, got {length}")
    return (1.0 - eps) ** length * eps


def geometric_run_mean(eps: float) -> float:
    """Mean completed-run length 1/eps - 1."""
    if not 0.0 < eps <= 1.0:
        raise ValueError(f"infidelity must lie in (0, 1], got {eps!r}")
    return 1.0 / eps - 1.0


def decomposition_upper(tau_mean: float, eps: float, halt_threshold: int) -> float:
    """Search-plus-certification bound: tau_mean + run_mean(1 - eps, threshold)."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"infidelity level must lie in (0, 1), got {eps!r}")
    if tau_mean < 0.0:
        raise ValueError(f"search time must be nonnegative, got {tau_mean!r}")
    return tau_mean + run_mean(RunQuery(p=1.0 - eps, k=halt_threshold))
