"""Stochastic volatility with alpha-stable observation noise.

State (log-volatility) and observation equations:

    h_t = mu + phi h_{t-1} + sigma_h w_t,      w_t ~ N(0, 1)
    y_t = exp(h_t / 2) v_t,                    v_t ~ SD(alpha, beta, sigma_v, 0)

with |phi| < 1 and h_0 drawn from the stationary law
N(mu / (1 - phi), sigma_h^2 / (1 - phi^2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .stable import StableParams, sample as stable_sample

__all__ = ["SvmParams", "Trajectory", "simulate"]


def _normal_like(h, rng):
    """Standard normal draws shaped like h (float for scalar input)."""
    shape = np.shape(h)
    if shape == ():
        return rng.standard_normal()
    return rng.standard_normal(shape)


@dataclass(frozen=True)
class SvmParams:
    """Parameters of the stable-noise stochastic volatility model."""

    mu: float
    phi: float
    sigma_h: float
    obs_noise: StableParams

    def __post_init__(self) -> None:
        if not abs(self.phi) < 1.0:
            raise ValueError(f"|phi| must be < 1 for stationarity, got {self.phi}")
        if not self.sigma_h > 0.0:
            raise ValueError(f"sigma_h must be > 0, got {self.sigma_h}")
        if not self.obs_noise.gamma > 0.0:
            raise ValueError("obs_noise must have scale gamma > 0")
        if self.obs_noise.delta != 0.0:
            raise ValueError("obs_noise must be centered (delta = 0)")

    @property
    def stationary_mean(self) -> float:
        return self.mu / (1.0 - self.phi)

    @property
    def stationary_var(self) -> float:
        return self.sigma_h**2 / (1.0 - self.phi**2)

    def initial_sample(self, rng, size=None):
        """Draw h_0 from the stationary law of the AR(1) state."""
        draw = rng.standard_normal() if size is None else rng.standard_normal(size)
        return self.stationary_mean + math.sqrt(self.stationary_var) * draw

    def transition_mean(self, h):
        """E[h_t | h_{t-1} = h] = mu + phi h."""
        return self.mu + self.phi * h

    def transition_sample(self, h, rng):
        """Draw h_t | h_{t-1} = h."""
        return self.transition_mean(h) + self.sigma_h * _normal_like(h, rng)

    def transition_logpdf(self, h_next, h_prev):
        """log N(h_next; mu + phi h_prev, sigma_h^2)."""
        z = (np.asarray(h_next, dtype=float) - self.transition_mean(h_prev)) / self.sigma_h
        out = -0.5 * math.log(2.0 * np.pi) - math.log(self.sigma_h) - 0.5 * z * z
        return float(out) if np.ndim(out) == 0 else out

    def observe_sample(self, h, rng):
        """Draw y_t | h_t = h = exp(h/2) v with stable v."""
        size = np.shape(h) if np.ndim(h) else None
        v = stable_sample(self.obs_noise, rng, size)
        return np.exp(np.asarray(h, dtype=float) / 2.0) * v if size else math.exp(h / 2.0) * v

    def observation_scale(self, h):
        """State-dependent factor multiplying the observation noise: exp(h/2).

        Constant scale (the stable gamma) lives inside ``obs_noise`` itself;
        this returns only the part that varies with the latent state.
        """
        out = np.exp(np.asarray(h, dtype=float) / 2.0)
        return float(out) if np.ndim(out) == 0 else out


@dataclass
class Trajectory:
    """A simulated path: h has length T+1 (h_0 first), y has length T."""

    h: np.ndarray
    y: np.ndarray
    seed: int = field(default=0)

    @property
    def horizon(self) -> int:
        return len(self.y)


def simulate(params: SvmParams, horizon: int, seed) -> Trajectory:
    """Simulate a trajectory of the given horizon, deterministically per seed."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    rng = np.random.default_rng(seed)
    h = np.empty(horizon + 1)
    y = np.empty(horizon)
    h[0] = params.initial_sample(rng)
    for t in range(1, horizon + 1):
        h[t] = params.transition_sample(h[t - 1], rng)
        y[t - 1] = params.observe_sample(h[t], rng)
    return Trajectory(h=h, y=y, seed=seed)
