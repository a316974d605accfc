"""Likelihood-free particle filters and the exact linear-Gaussian benchmark.

The main algorithm is an ABC auxiliary particle filter (``abc_apf_run``):
at each step the previous cloud is tilted by a cheap proposal density
p_hat(y_t | xi) evaluated at the per-particle transition mean xi, resampled,
propagated through the state transition, and reweighted by an ABC kernel
applied to the gap between one simulated pseudo-observation per particle and
the recorded observation, divided by the parent's tilt (standard auxiliary
correction).

``abc_smc_run`` is the adaptive-tolerance ABC-SMC baseline: propagate first,
then keep the particles whose pseudo-observations land within the step's
distance percentile.

Models are duck-typed: anything with ``initial_sample(rng, size)``,
``transition_mean(h)``, ``transition_sample(h, rng)`` and
``observe_sample(h, rng)`` works (``SvmParams`` and ``LinearGaussianParams``
both do).  All weights live in log space; a cloud whose weights all vanish is
reset to uniform and counted rather than aborting the run.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .kernels import KernelSpec, log_kernel
from .proposals import ProposalSpec, log_phat

__all__ = [
    "DegenerateCloudError",
    "ParticleCloud",
    "FilterConfig",
    "StepDiagnostics",
    "FilterOutput",
    "LinearGaussianParams",
    "normalize",
    "ess",
    "resample",
    "resolve_epsilon",
    "abc_apf_step",
    "abc_apf_run",
    "abc_smc_run",
    "kalman_run",
]

_POLICIES = ("every_step", "ess_threshold")
_SCHEMES = ("multinomial", "systematic")


class DegenerateCloudError(RuntimeError):
    """All particle weights are log-zero."""


@dataclass
class ParticleCloud:
    """States plus normalized log weights at time index t."""

    states: np.ndarray
    log_weights: np.ndarray
    t: int = 0

    def __len__(self) -> int:
        return len(self.states)

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)


def normalize(log_weights) -> np.ndarray:
    """Normalize log weights so the plain weights sum to one.

    Raises :class:`DegenerateCloudError` when every entry is log-zero.
    """
    lw = np.asarray(log_weights, dtype=float)
    m = np.max(lw)
    if not np.isfinite(m):
        raise DegenerateCloudError("all weights are log-zero")
    return lw - (m + math.log(float(np.sum(np.exp(lw - m)))))


def ess(log_weights) -> float:
    """Effective sample size 1 / sum(w_i^2) of normalized log weights."""
    lw = 2.0 * np.asarray(log_weights, dtype=float)
    m = np.max(lw)
    return float(np.exp(-(m + math.log(float(np.sum(np.exp(lw - m)))))))


def resample(cloud: ParticleCloud, scheme: str, rng):
    """Resample a cloud; returns (uniform-weight cloud, ancestor indices).

    ``multinomial`` draws ancestors i.i.d. from the weights; ``systematic``
    uses a single uniform offset on a stratified grid.  Both give every
    particle expected copy count N w_i.  Rejects unnormalized input.
    """
    if scheme not in _SCHEMES:
        raise ValueError(f"scheme must be one of {_SCHEMES}, got {scheme!r}")
    w = np.exp(cloud.log_weights)
    if abs(float(np.sum(w)) - 1.0) > 1e-9:
        raise ValueError("resample requires normalized weights")
    n = len(w)
    if scheme == "multinomial":
        u = rng.random(n)
    else:
        u = (rng.random() + np.arange(n)) / n
    cdf = np.cumsum(w)
    cdf[-1] = 1.0
    ancestors = np.searchsorted(cdf, u, side="right")
    out = ParticleCloud(
        states=cloud.states[ancestors].copy(),
        log_weights=np.full(n, -math.log(n)),
        t=cloud.t,
    )
    return out, ancestors


def resolve_epsilon(distances: np.ndarray, percentile: float) -> float:
    """Adaptive ABC-SMC tolerance: the ceil(percentile * N)-th smallest distance."""
    d = np.asarray(distances, dtype=float)
    k = math.ceil(percentile * len(d))
    k = min(max(k, 1), len(d))
    return float(np.partition(d, k - 1)[k - 1])


@dataclass(frozen=True)
class FilterConfig:
    """Knobs shared by the filter runners."""

    n_particles: int
    kernel: KernelSpec
    proposal: ProposalSpec = ProposalSpec("shifted_t")
    resample_policy: str = "every_step"
    resample_threshold: float | None = None
    resample_scheme: str = "multinomial"
    smc_percentile: float = 0.25

    def __post_init__(self) -> None:
        if self.n_particles < 2:
            raise ValueError(f"n_particles must be >= 2, got {self.n_particles}")
        if self.resample_policy not in _POLICIES:
            raise ValueError(
                f"resample_policy must be one of {_POLICIES}, got {self.resample_policy!r}"
            )
        if self.resample_scheme not in _SCHEMES:
            raise ValueError(
                f"resample_scheme must be one of {_SCHEMES}, got {self.resample_scheme!r}"
            )
        if self.resample_threshold is not None and not (
            1.0 <= self.resample_threshold <= self.n_particles
        ):
            raise ValueError("resample_threshold must lie in [1, n_particles]")
        if not 0.0 < self.smc_percentile <= 1.0:
            raise ValueError(
                f"smc_percentile must lie in (0, 1], got {self.smc_percentile}"
            )

    @property
    def threshold(self) -> float:
        """Resolved ESS threshold (defaults to N/2)."""
        if self.resample_threshold is None:
            return self.n_particles / 2.0
        return self.resample_threshold


@dataclass
class StepDiagnostics:
    ess: float
    resampled: bool
    degenerate: bool
    ancestors: np.ndarray


@dataclass
class FilterOutput:
    """Per-step filtered means and diagnostics for one filter run."""

    filtered_mean: np.ndarray
    ess_trace: np.ndarray
    resample_count: int
    degeneracy_count: int
    elapsed: float


def _should_resample(config: FilterConfig, log_weights) -> bool:
    if config.resample_policy == "every_step":
        return True
    return ess(log_weights) < config.threshold


def _recovered_normalize(raw: np.ndarray):
    """Normalize, resetting a fully degenerate cloud to uniform weights."""
    try:
        return normalize(raw), False
    except DegenerateCloudError:
        n = len(raw)
        return np.full(n, -math.log(n)), True


def abc_apf_step(cloud: ParticleCloud, y: float, model, config: FilterConfig, rng):
    """One auxiliary-filter step; returns (new cloud, diagnostics).

    Operates on ``cloud``'s own size (which may differ from
    ``config.n_particles``).  Consumes the rng in a fixed order: first-stage
    resampling draws, then transition noise, then pseudo-observation noise.
    """
    n = len(cloud)
    constant_tilt = config.proposal.is_state_independent
    if constant_tilt:
        # A state-independent tilt cancels from both stages; skipping it keeps
        # the first-stage selection probabilities exactly the carried weights.
        lp = None
        first = cloud.log_weights
    else:
        xi = model.transition_mean(cloud.states)
        lp = log_phat(config.proposal, y, xi)
        first = normalize(cloud.log_weights + lp)

    if _should_resample(config, first):
        selected, ancestors = resample(
            ParticleCloud(cloud.states, first, cloud.t), config.resample_scheme, rng
        )
        carried = selected.log_weights
        base_states = selected.states
        parent_lp = None if constant_tilt else lp[ancestors]
        resampled = True
    else:
        carried = first
        base_states = cloud.states
        parent_lp = lp
        ancestors = np.arange(n)
        resampled = False

    new_states = model.transition_sample(base_states, rng)
    y_sim = model.observe_sample(new_states, rng)
    # The kernel bandwidth is resolved per particle: the configured epsilon is
    # multiplied by the state-dependent observation-noise scale, so the
    # discrepancy is smoothed on the scale at which the noise actually enters.
    # Because the kernel is a normalized density, evaluating it at the rescaled
    # discrepancy and subtracting log(scale) is exactly the density of the
    # scaled kernel; the change-of-scale factor keeps particles at different
    # volatility levels comparable and makes the weight approach the true
    # observation likelihood as epsilon shrinks.
    obs_scale = np.asarray(model.observation_scale(new_states), dtype=float)
    raw = carried + log_kernel(config.kernel, (y_sim - y) / obs_scale) - np.log(obs_scale)
    if not constant_tilt:
        raw = raw - parent_lp
    lw, degenerate = _recovered_normalize(raw)
    out = ParticleCloud(states=new_states, log_weights=lw, t=cloud.t + 1)
    diag = StepDiagnostics(
        ess=ess(lw), resampled=resampled, degenerate=degenerate, ancestors=ancestors
    )
    return out, diag


def _init_cloud(model, config: FilterConfig, rng) -> ParticleCloud:
    n = config.n_particles
    states = np.asarray(model.initial_sample(rng, size=n), dtype=float)
    return ParticleCloud(states=states, log_weights=np.full(n, -math.log(n)), t=0)


def _as_rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def abc_apf_run(ys, model, config: FilterConfig, rng) -> FilterOutput:
    """Run the ABC auxiliary particle filter over a full observation record."""
    ys = np.asarray(ys, dtype=float)
    if len(ys) == 0:
        raise ValueError("observation record is empty")
    rng = _as_rng(rng)
    horizon = len(ys)
    filtered_mean = np.empty(horizon)
    ess_trace = np.empty(horizon)
    resample_count = 0
    degeneracy_count = 0
    start = time.perf_counter()
    cloud = _init_cloud(model, config, rng)
    for t in range(horizon):
        cloud, diag = abc_apf_step(cloud, float(ys[t]), model, config, rng)
        filtered_mean[t] = float(np.dot(cloud.weights, cloud.states))
        ess_trace[t] = diag.ess
        resample_count += diag.resampled
        degeneracy_count += diag.degenerate
    elapsed = time.perf_counter() - start
    return FilterOutput(filtered_mean, ess_trace, resample_count, degeneracy_count, elapsed)


def abc_smc_run(ys, model, config: FilterConfig, rng) -> FilterOutput:
    """Adaptive-tolerance ABC-SMC baseline (propagate, then keep the closest
    ``smc_percentile`` of pseudo-observations, ties included)."""
    if config.kernel.kind != "uniform":
        raise ValueError("abc_smc_run uses a uniform kernel with per-step tolerance")
    ys = np.asarray(ys, dtype=float)
    if len(ys) == 0:
        raise ValueError("observation record is empty")
    rng = _as_rng(rng)
    horizon = len(ys)
    filtered_mean = np.empty(horizon)
    ess_trace = np.empty(horizon)
    resample_count = 0
    degeneracy_count = 0
    tiny = np.finfo(float).tiny
    start = time.perf_counter()
    cloud = _init_cloud(model, config, rng)
    for t in range(horizon):
        y = float(ys[t])
        states = model.transition_sample(cloud.states, rng)
        y_sim = model.observe_sample(states, rng)
        d = np.abs(y_sim - y)
        eps_t = max(resolve_epsilon(d, config.smc_percentile), tiny)
        raw = cloud.log_weights + log_kernel(KernelSpec("uniform", eps_t), d)
        lw, degenerate = _recovered_normalize(raw)
        degeneracy_count += degenerate
        cloud = ParticleCloud(states=states, log_weights=lw, t=cloud.t + 1)
        filtered_mean[t] = float(np.dot(cloud.weights, cloud.states))
        ess_trace[t] = ess(lw)
        if _should_resample(config, lw):
            cloud, _ = resample(cloud, config.resample_scheme, rng)
            resample_count += 1
    elapsed = time.perf_counter() - start
    return FilterOutput(filtered_mean, ess_trace, resample_count, degeneracy_count, elapsed)


# ---------------------------------------------------------------------------
# Linear-Gaussian benchmark model and the exact Kalman filter
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearGaussianParams:
    """AR(1) state with additive Gaussian observation noise.

    x_t = mu + phi x_{t-1} + sigma_h w_t,   y_t = x_t + sigma_y v_t.

    The same duck-typed model interface as ``SvmParams``, so the ABC filters
    run on it unchanged and can be compared to the exact Kalman answer.
    """

    mu: float
    phi: float
    sigma_h: float
    sigma_y: float

    def __post_init__(self) -> None:
        if not self.sigma_h > 0.0:
            raise ValueError(f"sigma_h must be > 0, got {self.sigma_h}")
        if not self.sigma_y > 0.0:
            raise ValueError(f"sigma_y must be > 0, got {self.sigma_y}")

    def _require_stationary(self) -> None:
        if not abs(self.phi) < 1.0:
            raise ValueError(f"|phi| must be < 1 for a stationary prior, got {self.phi}")

    @property
    def stationary_mean(self) -> float:
        self._require_stationary()
        return self.mu / (1.0 - self.phi)

    @property
    def stationary_var(self) -> float:
        self._require_stationary()
        return self.sigma_h**2 / (1.0 - self.phi**2)

    def initial_sample(self, rng, size=None):
        draw = rng.standard_normal() if size is None else rng.standard_normal(size)
        return self.stationary_mean + math.sqrt(self.stationary_var) * draw

    def transition_mean(self, h):
        return self.mu + self.phi * h

    def transition_sample(self, h, rng):
        shape = np.shape(h)
        noise = rng.standard_normal(shape) if shape else rng.standard_normal()
        return self.transition_mean(h) + self.sigma_h * noise

    def observe_sample(self, h, rng):
        shape = np.shape(h)
        noise = rng.standard_normal(shape) if shape else rng.standard_normal()
        return np.asarray(h, dtype=float) + self.sigma_y * noise

    def observation_scale(self, h):
        """Observation noise scale has no state dependence here: factor 1."""
        out = np.ones_like(np.asarray(h, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    def simulate(self, horizon: int, seed):
        """Simulate (x_{0:T}, y_{1:T}); mirrors ``svm.simulate``."""
        if horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {horizon}")
        rng = np.random.default_rng(seed)
        x = np.empty(horizon + 1)
        y = np.empty(horizon)
        x[0] = self.initial_sample(rng)
        for t in range(1, horizon + 1):
            x[t] = self.transition_sample(x[t - 1], rng)
            y[t - 1] = self.observe_sample(x[t], rng)
        return x, y


def kalman_run(lg: LinearGaussianParams, ys, prior_mean=None, prior_var=None):
    """Exact Kalman filter for the linear-Gaussian model.

    Returns (filtered means, filtered variances) for t = 1..T.  The prior on
    x_0 defaults to the stationary law (rejecting |phi| >= 1); an explicit
    (prior_mean, prior_var) pair overrides it.
    """
    ys = np.asarray(ys, dtype=float)
    if len(ys) == 0:
        raise ValueError("observation record is empty")
    if (prior_mean is None) != (prior_var is None):
        raise ValueError("prior_mean and prior_var must be given together")
    if prior_mean is None:
        m, p = lg.stationary_mean, lg.stationary_var
    else:
        m, p = float(prior_mean), float(prior_var)
        if not p >= 0.0:
            raise ValueError(f"prior_var must be >= 0, got {prior_var}")
    q, r2 = lg.sigma_h**2, lg.sigma_y**2
    means = np.empty(len(ys))
    variances = np.empty(len(ys))
    for t, y in enumerate(ys):
        m_pred = lg.mu + lg.phi * m
        p_pred = lg.phi**2 * p + q
        gain = p_pred / (p_pred + r2)
        m = m_pred + gain * (y - m_pred)
        p = (1.0 - gain) * p_pred
        means[t] = m
        variances[t] = p
    return means, variances
