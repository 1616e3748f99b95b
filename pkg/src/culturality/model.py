"""Transcultural-factor recurrence.

Each individual carries a scalar factor that evolves as a first-order
autoregression driven by fixed attribute inputs::

    v[t] = alpha * v[t-1] + beta1 * q + sum_k beta_k * x_k + sum_l gamma_l * z_l + u[t]

``q`` is the prevalence level of the culture the individual receives, ``x``
the individual's modernization/intervening attributes and ``z`` the
status/outcome attributes. ``u`` is an optional i.i.d. disturbance.

For ``alpha != 1`` and no disturbance the recurrence has the stationary value
``drive / (1 - alpha)`` where ``drive`` is everything except the lagged term,
and ``v[t] = alpha**t * v[0] + (1 - alpha**t) * fixed_point``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, DimensionMismatch, DomainError, SingularAlpha

NOISE_KINDS = ("none", "uniform", "gaussian")


def _as_vector(values, name) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FactorCoefficients:
    alpha: float
    beta1: float
    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta1", float(self.beta1))
        object.__setattr__(self, "beta", _as_vector(self.beta, "beta"))
        object.__setattr__(self, "gamma", _as_vector(self.gamma, "gamma"))

    def __eq__(self, other):
        if not isinstance(other, FactorCoefficients):
            return NotImplemented
        return (
            self.alpha == other.alpha
            and self.beta1 == other.beta1
            and np.array_equal(self.beta, other.beta)
            and np.array_equal(self.gamma, other.gamma)
        )

    def __hash__(self):
        return hash((self.alpha, self.beta1, self.beta.tobytes(), self.gamma.tobytes()))

    @classmethod
    def spread(cls, alpha, beta1, beta_total, gamma_total, n_x, n_z) -> "FactorCoefficients":
        """Coefficients with ``beta_total``/``gamma_total`` split evenly over the inputs."""
        beta = np.full(n_x, beta_total / n_x) if n_x else np.zeros(0)
        gamma = np.full(n_z, gamma_total / n_z) if n_z else np.zeros(0)
        return cls(alpha, beta1, beta, gamma)

    @classmethod
    def default(cls, n_x: int, n_z: int) -> "FactorCoefficients":
        """alpha = 0.6 with the remaining 0.4 shared equally by q, x and z.

        The three drive weights sum to ``1 - alpha`` so the noiseless fixed
        point is a convex combination of inputs in [0, 1].
        """
        share = 0.4 / 3
        return cls.spread(0.6, share, share, share, n_x, n_z)


@dataclass(frozen=True, eq=False)
class FactorInputs:
    q: float
    x: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q", float(self.q))
        object.__setattr__(self, "x", _as_vector(self.x, "x"))
        object.__setattr__(self, "z", _as_vector(self.z, "z"))

    def __eq__(self, other):
        if not isinstance(other, FactorInputs):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)

    def __hash__(self):
        return hash((self.q, self.x.tobytes(), self.z.tobytes()))

    def check_unit(self) -> None:
        """Raise DomainError unless every input lies in [0, 1]."""
        for name, v in (("q", np.array([self.q])), ("x", self.x), ("z", self.z)):
            if v.size and (v.min() < 0 or v.max() > 1):
                raise DomainError(f"input {name} outside [0, 1]")


@dataclass(frozen=True)
class NoiseSpec:
    """Per-step disturbance: none, uniform on [-scale, scale], or N(0, scale**2)."""

    kind: str = "none"
    scale: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ConfigError(f"noise kind must be one of {NOISE_KINDS}, got {self.kind!r}")
        if not (self.scale >= 0):
            raise ConfigError(f"noise scale must be >= 0, got {self.scale}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("noise seed must be a 64-bit unsigned integer")

    def draw(self, steps: int, rng: np.random.Generator | None = None) -> np.ndarray:
        """``steps`` disturbances; ``rng`` overrides the generator built from ``seed``."""
        if self.kind == "none" or self.scale == 0:
            return np.zeros(steps)
        if rng is None:
            rng = np.random.default_rng(self.seed)
        if self.kind == "uniform":
            return rng.uniform(-self.scale, self.scale, size=steps)
        return rng.normal(0.0, self.scale, size=steps)


@dataclass(frozen=True, eq=False)
class Trajectory:
    values: np.ndarray
    coefficients: FactorCoefficients
    inputs: FactorInputs

    @property
    def steps(self) -> int:
        return len(self.values) - 1

    @property
    def final(self) -> float:
        return float(self.values[-1])


def _check_dims(coeffs: FactorCoefficients, inputs: FactorInputs) -> None:
    if coeffs.beta.shape != inputs.x.shape:
        raise DimensionMismatch(f"beta has {coeffs.beta.size} entries but x has {inputs.x.size}")
    if coeffs.gamma.shape != inputs.z.shape:
        raise DimensionMismatch(f"gamma has {coeffs.gamma.size} entries but z has {inputs.z.size}")


def drive(coeffs: FactorCoefficients, inputs: FactorInputs) -> float:
    """The exogenous part of the update: beta1*q + beta.x + gamma.z."""
    _check_dims(coeffs, inputs)
    return float(coeffs.beta1 * inputs.q + coeffs.beta @ inputs.x + coeffs.gamma @ inputs.z)


def step_factor(v_prev: float, coeffs: FactorCoefficients, inputs: FactorInputs, u: float = 0.0) -> float:
    return coeffs.alpha * float(v_prev) + drive(coeffs, inputs) + float(u)


def trajectory(
    v0: float,
    coeffs: FactorCoefficients,
    inputs: FactorInputs,
    steps: int,
    noise: NoiseSpec | None = None,
    shocks: Sequence[float] | None = None,
) -> Trajectory:
    """Iterate the recurrence ``steps`` times from ``v0``.

    Disturbances come from ``noise`` (deterministic in its seed) unless an
    explicit ``shocks`` sequence of length ``steps`` is given.
    """
    if steps < 0:
        raise ConfigError(f"steps must be >= 0, got {steps}")
    if shocks is None:
        shocks = (noise or NoiseSpec()).draw(steps)
    shocks = np.asarray(shocks, dtype=float)
    if shocks.shape != (steps,):
        raise DimensionMismatch(f"expected {steps} shocks, got shape {shocks.shape}")
    d = drive(coeffs, inputs)
    a = coeffs.alpha
    values = np.empty(steps + 1)
    values[0] = v = float(v0)
    for t in range(steps):
        v = a * v + d + shocks[t]
        values[t + 1] = v
    values.setflags(write=False)
    return Trajectory(values, coeffs, inputs)


def fixed_point(coeffs: FactorCoefficients, inputs: FactorInputs) -> float:
    if coeffs.alpha == 1.0:
        raise SingularAlpha("alpha = 1 has no finite fixed point")
    return drive(coeffs, inputs) / (1.0 - coeffs.alpha)
