"""ABC comparison kernels, evaluated in log space.

A kernel K_eps weights the discrepancy u = y_sim - y_obs between a simulated
pseudo-observation and the recorded one.  Everything is returned as a log
density; impossible discrepancies map to -inf, which propagates through the
weight arithmetic without NaNs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["KernelSpec", "log_kernel"]

_KINDS = ("gaussian", "uniform")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus bandwidth.

    ``epsilon`` may be None for kernels whose bandwidth is resolved per step
    (the adaptive ABC-SMC baseline); it must be resolved before evaluation.
    """

    kind: str
    epsilon: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.epsilon is not None and not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be > 0 once resolved, got {self.epsilon}")


def log_kernel(spec: KernelSpec, u):
    """log K_eps(u) for a scalar or array discrepancy u.

    gaussian: log N(u; 0, eps^2).  uniform: log(1/(2 eps)) on |u| <= eps,
    -inf outside.
    """
    if spec.epsilon is None:
        raise ValueError("kernel bandwidth is unresolved (epsilon is None)")
    eps = spec.epsilon
    u_arr = np.asarray(u, dtype=float)
    if spec.kind == "gaussian":
        z = u_arr / eps
        out = -0.5 * math.log(2.0 * np.pi) - math.log(eps) - 0.5 * z * z
    else:
        out = np.where(np.abs(u_arr) <= eps, -math.log(2.0 * eps), -np.inf)
    return float(out) if np.ndim(u) == 0 else out
