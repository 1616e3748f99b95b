"""Agent population synthesis and the multi-step factor simulation.

Agents are independent: each one carries binary attribute realizations drawn
from its cohort's prevalences and runs its own factor recurrence. There is no
interaction rule between agents; :func:`run` is the place to add one.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigError, EmptyTable
from .model import FactorCoefficients, FactorInputs, NoiseSpec, trajectory
from .survey import AttributeSchema, SurveyTable, cohort_vector

DEFAULT_X = ("modernization", "intervening")
DEFAULT_Z = ("resultant",)


@dataclass(frozen=True, eq=False)
class Agent:
    id: int
    society: str
    gender: str
    attributes: np.ndarray
    inputs: FactorInputs
    v0: float

    @property
    def cohort(self) -> tuple[str, str]:
        return (self.society, self.gender)


@dataclass(frozen=True, eq=False)
class Population:
    schema: AttributeSchema
    agents: tuple[Agent, ...]

    def __len__(self):
        return len(self.agents)

    def __iter__(self):
        return iter(self.agents)

    @property
    def features(self) -> np.ndarray:
        """(n_agents, n_attributes) matrix of attribute realizations."""
        return np.array([a.attributes for a in self.agents], dtype=float).reshape(len(self), len(self.schema))

    @property
    def societies(self) -> list[str]:
        return [a.society for a in self.agents]


@dataclass(frozen=True)
class Shift:
    step: int
    coefficients: FactorCoefficients


@dataclass(frozen=True)
class SimConfig:
    steps: int = 50
    population_size: int = 150
    seed: int = 0
    shifts: tuple[Shift, ...] = ()
    coefficients: FactorCoefficients | None = None
    noise: NoiseSpec = field(default_factory=NoiseSpec)

    def __post_init__(self):
        object.__setattr__(self, "shifts", tuple(self.shifts))
        if self.steps < 0:
            raise ConfigError(f"steps must be >= 0, got {self.steps}")
        if self.population_size < 1:
            raise ConfigError(f"population size must be >= 1, got {self.population_size}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        prev = 0
        for s in self.shifts:
            if not prev < s.step <= self.steps:
                raise ConfigError(
                    f"shift steps must be strictly increasing within (0, {self.steps}], got {s.step}"
                )
            prev = s.step

    def digest(self) -> str:
        def coeffs(c):
            if c is None:
                return None
            return [c.alpha, c.beta1, c.beta.tolist(), c.gamma.tolist()]

        payload = {
            "steps": self.steps,
            "population_size": self.population_size,
            "seed": int(self.seed),
            "shifts": [[s.step, coeffs(s.coefficients)] for s in self.shifts],
            "coefficients": coeffs(self.coefficients),
            "noise": [self.noise.kind, self.noise.scale],
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class SimResult:
    agents: tuple[Agent, ...]
    trajectories: np.ndarray
    seed: int
    config_digest: str

    @property
    def final(self) -> np.ndarray:
        return self.trajectories[:, -1]

    def to_csv(self, path=None) -> str:
        """Rows of agent id, society, gender, v_0 .. v_T. Writes ``path`` if given."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        steps = self.trajectories.shape[1]
        w.writerow(["agent_id", "society", "gender"] + [f"v_{t}" for t in range(steps)])
        for agent, row in zip(self.agents, self.trajectories):
            w.writerow([agent.id, agent.society, agent.gender] + [repr(float(v)) for v in row])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text


def apportion(counts: Sequence[int], total: int) -> list[int]:
    """Largest-remainder apportionment of ``total`` seats over ``counts``.

    Ties in the remainder go to the earlier entry.
    """
    counts = [int(c) for c in counts]
    denom = sum(counts)
    if denom <= 0:
        raise EmptyTable("cannot apportion over zero respondents")
    quotas = [c * total for c in counts]
    seats = [q // denom for q in quotas]
    remainders = [q % denom for q in quotas]
    left = total - sum(seats)
    order = sorted(range(len(counts)), key=lambda i: (-remainders[i], i))
    for i in order[:left]:
        seats[i] += 1
    return seats


def factor_inputs(
    attributes: np.ndarray,
    schema: AttributeSchema,
    q: float,
    x_categories: Sequence[str] = DEFAULT_X,
    z_categories: Sequence[str] = DEFAULT_Z,
) -> FactorInputs:
    """Split an attribute realization into recurrence inputs by category."""
    attributes = np.asarray(attributes, dtype=float)
    return FactorInputs(
        q, attributes[schema.indices(*x_categories)], attributes[schema.indices(*z_categories)]
    )


def weighted_level(values: np.ndarray, weights: np.ndarray) -> float:
    total = float(np.sum(weights))
    return float(np.dot(weights, values) / total)


def synthesize_population(
    table: SurveyTable,
    size: int,
    seed: int,
    per_cohort: int | None = None,
    x_categories: Sequence[str] = DEFAULT_X,
    z_categories: Sequence[str] = DEFAULT_Z,
) -> Population:
    """Draw agents whose attributes are Bernoulli in their cohort's prevalences.

    ``size`` agents are shared among cohorts in proportion to respondent
    counts. ``per_cohort`` instead gives every cohort the same number. Each
    agent's received-culture input ``q`` is its cohort's weighted prevalence
    level and its starting factor is the weighted mean of its own attributes.
    """
    if not table.cohorts:
        raise EmptyTable("survey table has no cohorts")
    if per_cohort is None:
        if size < 1:
            raise ConfigError(f"population size must be >= 1, got {size}")
        alloc = apportion([c.n for c in table.cohorts], size)
    else:
        if per_cohort < 1:
            raise ConfigError(f"per-cohort size must be >= 1, got {per_cohort}")
        alloc = [per_cohort] * len(table.cohorts)

    schema = table.schema
    weights = schema.weights
    rng = np.random.default_rng(seed)
    agents = []
    next_id = 0
    for cohort, count in zip(table.cohorts, alloc):
        p = cohort_vector(table, cohort.society, cohort.gender)
        q = weighted_level(p, weights)
        draws = (rng.random((count, len(schema))) < p).astype(float)
        for row in draws:
            row.setflags(write=False)
            agents.append(
                Agent(
                    next_id,
                    cohort.society,
                    cohort.gender,
                    row,
                    factor_inputs(row, schema, q, x_categories, z_categories),
                    weighted_level(row, weights),
                )
            )
            next_id += 1
    return Population(schema, tuple(agents))


def apply_paradigm_shift(config: SimConfig, step: int, base: FactorCoefficients | None = None):
    """Coefficients governing the update that produces ``v[step]``.

    A shift scheduled at step ``s`` is already active for the transition
    ``v[s-1] -> v[s]``.
    """
    active = config.coefficients if base is None else base
    for s in config.shifts:
        if s.step <= step:
            active = s.coefficients
        else:
            break
    return active


def agent_seed(seed: int, agent_id: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed), int(agent_id)])


def run_agent(agent: Agent, config: SimConfig, base: FactorCoefficients) -> np.ndarray:
    """One agent's trajectory, piecewise over the paradigm-shift schedule."""
    rng = np.random.default_rng(agent_seed(config.seed, agent.id))
    shocks = config.noise.draw(config.steps, rng)
    bounds = [0] + [s.step - 1 for s in config.shifts] + [config.steps]
    values = [np.array([agent.v0])]
    v = agent.v0
    for start, stop in zip(bounds[:-1], bounds[1:]):
        if stop == start:
            continue
        coeffs = apply_paradigm_shift(config, start + 1, base)
        seg = trajectory(v, coeffs, agent.inputs, stop - start, shocks=shocks[start:stop])
        values.append(seg.values[1:])
        v = seg.values[-1]
    return np.concatenate(values)


def run(population: Population, config: SimConfig) -> SimResult:
    """Run every agent for ``config.steps`` updates.

    Each agent draws its disturbances from a stream seeded by
    ``(config.seed, agent.id)``, so results do not depend on the order in
    which agents are processed.
    """
    base = config.coefficients
    if base is None:
        a = population.agents[0] if population.agents else None
        n_x = a.inputs.x.size if a else 0
        n_z = a.inputs.z.size if a else 0
        base = FactorCoefficients.default(n_x, n_z)
    rows = [run_agent(a, config, base) for a in population.agents]
    traj = np.array(rows, dtype=float).reshape(len(rows), config.steps + 1)
    traj.setflags(write=False)
    return SimResult(population.agents, traj, int(config.seed), config.digest())
