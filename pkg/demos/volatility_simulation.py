"""Simulate the stochastic volatility model and look at what it produces.

The latent state h_t is a Gaussian AR(1) in log-volatility; the return is
y_t = exp(h_t / 2) * v_t with alpha-stable observation noise v_t.  The demo
simulates the benchmark model, prints the moments the AR(1) implies, and shows
the characteristic heavy-tail behaviour of the returns.

Run:  python3 demos/volatility_simulation.py
"""

import numpy as np

from stablevol.experiment import reference_model
from stablevol.svm import simulate


def main() -> None:
    model = reference_model()
    print("model:", model)
    print(f"stationary latent mean / sd: "
          f"{model.stationary_mean:.3f} / {np.sqrt(model.stationary_var):.3f}")

    traj = simulate(model, horizon=2000, seed=7)
    print()
    print("== simulated trajectory (T=2000) ==")
    print(f"latent h:  mean {traj.h.mean():+.3f}   sd {traj.h.std():.3f}   "
          f"lag-1 autocorr {np.corrcoef(traj.h[:-1], traj.h[1:])[0, 1]:.3f}")
    print(f"returns y: median |y| {np.median(np.abs(traj.y)):.3f}   "
          f"max |y| {np.max(np.abs(traj.y)):.1f}")

    # Volatility clustering: large |y| concentrates where h is high.
    high = traj.h[1:] > np.percentile(traj.h[1:], 80)
    print(f"median |y| when h in top quintile:    {np.median(np.abs(traj.y[high])):.3f}")
    print(f"median |y| when h in bottom quintile: "
          f"{np.median(np.abs(traj.y[traj.h[1:] < np.percentile(traj.h[1:], 20)])):.3f}")

    # The stable noise makes extreme returns far more common than Gaussian
    # noise would at the same scale.
    standardized = traj.y / np.exp(traj.h[1:] / 2.0)
    print(f"P(|v| > 5) for the stable noise:      "
          f"{np.mean(np.abs(standardized) > 5.0):.4f}  (Normal(0, 0.8^2): ~0)")


if __name__ == "__main__":
    main()
