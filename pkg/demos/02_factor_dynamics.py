"""The transcultural factor as a first-order linear recurrence.

With |alpha| < 1 every trajectory relaxes geometrically toward the fixed point
drive / (1 - alpha), whatever the starting value.
"""
import numpy as np

from culturality import FactorCoefficients, FactorInputs, NoiseSpec, fixed_point, trajectory

rng = np.random.default_rng(0)
coeffs = FactorCoefficients.default(n_x=22, n_z=6)
inputs = FactorInputs(q=0.55, x=(rng.random(22) < 0.6).astype(float), z=(rng.random(6) < 0.4).astype(float))

fp = fixed_point(coeffs, inputs)
print(f"alpha = {coeffs.alpha}, fixed point = {fp:.4f}")

for v0 in (0.0, 0.5, 1.0):
    traj = trajectory(v0, coeffs, inputs, steps=20)
    gap = np.abs(traj.values - fp)
    print(f"v0={v0:.1f}  v_20={traj.final:.6f}  gap ratio per step ~ {gap[10] / gap[9]:.3f}")

# a noisy run wanders around the same level
noisy = trajectory(0.2, coeffs, inputs, steps=200, noise=NoiseSpec("gaussian", 0.02, seed=1))
print(f"noisy mean over last 100 steps: {noisy.values[100:].mean():.4f}")

# a memoryless regime jumps straight to its drive
memoryless = FactorCoefficients.spread(0.0, 1 / 3, 1 / 3, 1 / 3, 22, 6)
print("memoryless:", trajectory(0.9, memoryless, inputs, steps=3).values.round(4))
