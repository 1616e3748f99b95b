"""Run configuration file (TOML).

See ``data/run.toml`` for the bundled defaults and every recognised key.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import _toml
from .errors import ConfigError
from .model import FactorCoefficients, NoiseSpec
from .sim import DEFAULT_X, DEFAULT_Z, Shift, SimConfig
from .survey import AttributeSchema, default_schema


@dataclass(frozen=True)
class RunConfig:
    sim: SimConfig
    x_categories: tuple[str, ...] = DEFAULT_X
    z_categories: tuple[str, ...] = DEFAULT_Z
    k: int = 4
    auto_k: bool = False
    k_range: tuple[int, int] = (2, 10)

    def with_overrides(self, *, seed=None, steps=None, population=None, k=None, auto_k=None) -> "RunConfig":
        sim = self.sim
        if seed is not None or steps is not None or population is not None:
            shifts = sim.shifts
            if steps is not None:
                shifts = tuple(s for s in shifts if s.step <= steps)
            sim = replace(
                sim,
                seed=sim.seed if seed is None else seed,
                steps=sim.steps if steps is None else steps,
                population_size=sim.population_size if population is None else population,
                shifts=shifts,
            )
        out = replace(self, sim=sim)
        if k is not None:
            out = replace(out, k=k, auto_k=False)
        if auto_k:
            out = replace(out, auto_k=True)
        return out


def _coefficients(spec: dict, n_x: int, n_z: int, where: str) -> FactorCoefficients:
    try:
        alpha = float(spec["alpha"])
        beta1 = float(spec["beta1"])
    except KeyError as exc:
        raise ConfigError(f"{where}: missing key {exc.args[0]!r}") from None
    if "beta" in spec:
        beta = [float(b) for b in spec["beta"]]
    else:
        beta = FactorCoefficients.spread(0, 0, float(spec.get("beta_total", 0.0)), 0, n_x, 0).beta
    if "gamma" in spec:
        gamma = [float(g) for g in spec["gamma"]]
    else:
        gamma = FactorCoefficients.spread(0, 0, 0, float(spec.get("gamma_total", 0.0)), 0, n_z).gamma
    coeffs = FactorCoefficients(alpha, beta1, beta, gamma)
    if coeffs.beta.size != n_x or coeffs.gamma.size != n_z:
        raise ConfigError(
            f"{where}: beta/gamma lengths {coeffs.beta.size}/{coeffs.gamma.size} "
            f"do not match {n_x}/{n_z} configured inputs"
        )
    return coeffs


def parse_run_config(raw: dict, schema: AttributeSchema) -> RunConfig:
    sim = raw.get("simulation", {})
    inputs = raw.get("inputs", {})
    x_cat = tuple(str(c).lower() for c in inputs.get("x", DEFAULT_X))
    z_cat = tuple(str(c).lower() for c in inputs.get("z", DEFAULT_Z))
    n_x = len(schema.indices(*x_cat))
    n_z = len(schema.indices(*z_cat))

    coeffs = None
    if "coefficients" in raw:
        coeffs = _coefficients(raw["coefficients"], n_x, n_z, "[coefficients]")
    noise_raw = raw.get("noise", {})
    noise = NoiseSpec(str(noise_raw.get("kind", "none")).lower(), float(noise_raw.get("scale", 0.0)))
    shifts = tuple(
        Shift(int(s["step"]), _coefficients(s, n_x, n_z, f"[[shifts]] #{i + 1}"))
        for i, s in enumerate(raw.get("shifts", []))
    )
    clustering = raw.get("clustering", {})
    k_range = tuple(int(v) for v in clustering.get("k_range", (2, 10)))
    if len(k_range) != 2:
        raise ConfigError("[clustering] k_range needs two entries")
    try:
        sim_cfg = SimConfig(
            steps=int(sim.get("steps", 50)),
            population_size=int(sim.get("population", 150)),
            seed=int(sim.get("seed", 0)),
            shifts=shifts,
            coefficients=coeffs,
            noise=noise,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig(
        sim_cfg,
        x_cat,
        z_cat,
        int(clustering.get("k", 4)),
        bool(clustering.get("auto_k", False)),
        k_range,
    )


def load_run_config(path=None, schema: AttributeSchema | None = None) -> RunConfig:
    """Read a run config; ``None`` loads the bundled defaults."""
    if schema is None:
        schema = default_schema()
    raw = _toml.read(path, "run.toml")
    return parse_run_config(raw, schema)
