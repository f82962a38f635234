"""Agent population, propagation schedule, decay and SIR bookkeeping.

A run proceeds in discrete steps. Originators form a fixed opinion from the
shared evidence matrix; propagators start near-vacuous and update each time a
neighbour pushes an opinion to them (similarity-weighted discount followed by
consensus). Activation spreads as a frontier: originators push in step 1 and
any agent that received a push becomes a sender from the next step on.

Opinions live in flat numpy arrays during a run. The propagation loop works on
plain floats for speed and mirrors :mod:`slsim.opinion` operation for
operation; the tests hold the two paths against each other.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field
from enum import Enum, IntEnum
from typing import TextIO

import numpy as np

from .evidence import EvidenceMatrix, build_matrix, map_evidence, perceived_opinion
from .network import Graph, seed_originators
from .opinion import BETA_EPS, EvidenceCounts, Opinion, adjust_base_rate, expectation, from_evidence

METRIC_FIELDS = ("t", "mean_b", "mean_d", "mean_u", "frac_S", "frac_I", "frac_R")
SNAPSHOT_FIELDS = ("id", "role", "tc", "a_raw", "a_adj", "b", "d", "u", "status")


class Role(Enum):
    ORIGINATOR = "originator"
    PROPAGATOR = "propagator"


class Status(IntEnum):
    SUSCEPTIBLE = 0
    INFECTED = 1
    RECOVERED = 2

    @property
    def label(self) -> str:
        return self.name[0]


@dataclass(frozen=True)
class SimConfig:
    """Run parameters. Defaults follow the reference experimental setup."""

    gamma: float = 0.05
    tc_mu: float = 0.5
    tc_std: float = 0.1
    a_mu: float = 0.5
    a_std: float = 0.1
    originator_fraction: float = 0.01
    originator_count: int | None = None
    originator_strategy: str = "uniform-random"
    propagator_W: float = 100.0
    steps: int = 50
    seed: int = 0
    n_pv: int = 1000
    n_pn: int = 1000
    n_cv: int = 1000
    n_cn: int = 1000

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        for name in ("tc_mu", "a_mu"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {getattr(self, name)}")
        for name in ("tc_std", "a_std"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        if not 0.0 < self.originator_fraction <= 1.0:
            raise ValueError(f"originator_fraction must lie in (0, 1], got {self.originator_fraction}")
        if self.originator_count is not None and self.originator_count < 1:
            raise ValueError(f"originator_count must be positive, got {self.originator_count}")
        if self.originator_strategy not in ("uniform-random", "highest-degree"):
            raise ValueError(f"unknown originator_strategy {self.originator_strategy!r}")
        if self.propagator_W < 1:
            raise ValueError(f"propagator_W must be at least 1, got {self.propagator_W}")
        if self.steps < 0:
            raise ValueError(f"steps must be non-negative, got {self.steps}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        counts = self.evidence_counts
        if min(counts) < 0 or sum(counts) == 0:
            raise ValueError(f"evidence counts must be non-negative with a positive total, got {counts}")

    @property
    def evidence_counts(self) -> tuple[int, int, int, int]:
        return (self.n_pv, self.n_pn, self.n_cv, self.n_cn)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Agent:
    id: int
    role: Role
    opinion: Opinion
    tc: float
    a_raw: float
    a_adj: float
    status: Status


@dataclass(frozen=True)
class StepMetrics:
    """Population summary after a step.

    Opinion means run over all agents; the ``prop_*`` means and the status
    fractions run over propagators only.
    """

    t: int
    mean_b: float
    mean_d: float
    mean_u: float
    frac_S: float
    frac_I: float
    frac_R: float
    prop_mean_b: float = math.nan
    prop_mean_d: float = math.nan
    prop_mean_u: float = math.nan


@dataclass
class Population:
    """Mutable per-agent state arrays indexed by node ID."""

    is_originator: np.ndarray
    tc: np.ndarray
    a_raw: np.ndarray
    a_adj: np.ndarray
    b: np.ndarray
    d: np.ndarray
    u: np.ndarray
    status: np.ndarray
    active: np.ndarray

    @property
    def n(self) -> int:
        return self.b.size

    def opinion(self, i: int) -> Opinion:
        return Opinion(self.b[i], self.d[i], self.u[i], self.a_adj[i])

    def agent(self, i: int) -> Agent:
        return Agent(
            id=i,
            role=Role.ORIGINATOR if self.is_originator[i] else Role.PROPAGATOR,
            opinion=self.opinion(i),
            tc=float(self.tc[i]),
            a_raw=float(self.a_raw[i]),
            a_adj=float(self.a_adj[i]),
            status=Status(int(self.status[i])),
        )

    def agents(self) -> list[Agent]:
        return [self.agent(i) for i in range(self.n)]

    def copy(self) -> Population:
        return Population(**{k: v.copy() for k, v in self.__dict__.items()})


@dataclass
class RunResult:
    initial: StepMetrics
    metrics: list[StepMetrics]
    population: Population
    originators: frozenset[int]
    first_full_activation: int | None = None
    config: SimConfig = field(default_factory=SimConfig)

    @property
    def final(self) -> StepMetrics:
        return self.metrics[-1] if self.metrics else self.initial


def truncated_normal(
    rng: np.random.Generator, mu: float, std: float, size: int, low: float = 0.0, high: float = 1.0
) -> np.ndarray:
    """Rejection-sample ``N(mu, std)`` restricted to ``[low, high]``."""
    if std == 0:
        if not low <= mu <= high:
            raise ValueError(f"degenerate distribution at {mu} lies outside [{low}, {high}]")
        return np.full(size, float(mu))
    out = rng.normal(mu, std, size)
    bad = (out < low) | (out > high)
    while bad.any():
        out[bad] = rng.normal(mu, std, int(bad.sum()))
        bad = (out < low) | (out > high)
    return out


def classify_status(op: Opinion) -> Status:
    """S/I/R from the projected probabilities; S only when both equal 0.5."""
    e_b, e_d = expectation(op)
    if e_b > 0.5:
        return Status.INFECTED
    if e_d > 0.5:
        return Status.RECOVERED
    return Status.SUSCEPTIBLE


def classify_all(pop: Population) -> np.ndarray:
    """Vectorized :func:`classify_status` over a population."""
    e_b = pop.b + pop.a_adj * pop.u
    e_d = pop.d + (1.0 - pop.a_adj) * pop.u
    status = np.full(pop.n, Status.SUSCEPTIBLE, dtype=np.int8)
    status[e_d > 0.5] = Status.RECOVERED
    status[e_b > 0.5] = Status.INFECTED
    return status


def _streams(seed: int) -> list[np.random.SeedSequence]:
    # evidence, initialization, schedule
    return np.random.SeedSequence(seed).spawn(3)


def evidence_for(cfg: SimConfig) -> EvidenceMatrix:
    """The evidence matrix a run with ``cfg`` uses when none is supplied."""
    return build_matrix(*cfg.evidence_counts, np.random.default_rng(_streams(cfg.seed)[0]))


def init_population(
    g: Graph, cfg: SimConfig, ev: EvidenceMatrix, rng: np.random.Generator | np.random.SeedSequence
) -> tuple[Population, frozenset[int]]:
    """Sample traits, seed originators and set every agent's opening opinion.

    Each originator perceives ``ev`` with its own rng stream, spawned in
    ascending node-ID order.
    """
    ss = rng if isinstance(rng, np.random.SeedSequence) else np.random.SeedSequence(int(rng.integers(2**63)))
    trait_ss, seed_ss, perceive_ss = ss.spawn(3)
    trait_rng = np.random.default_rng(trait_ss)
    tc = truncated_normal(trait_rng, cfg.tc_mu, cfg.tc_std, g.n)
    a_raw = truncated_normal(trait_rng, cfg.a_mu, cfg.a_std, g.n)
    a_adj = np.array([adjust_base_rate(a, t) for a, t in zip(a_raw, tc)])

    originators = seed_originators(
        g,
        cfg.originator_fraction,
        cfg.originator_strategy,
        rng=np.random.default_rng(seed_ss),
        count=cfg.originator_count,
    )
    is_orig = np.zeros(g.n, dtype=bool)
    is_orig[list(originators)] = True

    fresh = from_evidence(EvidenceCounts(1, 1, cfg.propagator_W))
    b = np.full(g.n, fresh.b)
    d = np.full(g.n, fresh.d)
    u = np.full(g.n, fresh.u)
    ids = sorted(originators)
    for i, child in zip(ids, perceive_ss.spawn(len(ids))):
        pc = map_evidence(float(tc[i]), ev, np.random.default_rng(child))
        op = perceived_opinion(pc, float(a_adj[i]))
        b[i], d[i], u[i] = op.b, op.d, op.u

    pop = Population(
        is_originator=is_orig,
        tc=tc,
        a_raw=a_raw,
        a_adj=a_adj,
        b=b,
        d=d,
        u=u,
        status=np.zeros(g.n, dtype=np.int8),
        active=is_orig.copy(),
    )
    pop.status = classify_all(pop)
    return pop, originators


def _propagate(pop: Population, g: Graph, order: np.ndarray) -> np.ndarray:
    """Sequential-asynchronous push phase; returns the mask of receivers."""
    b = pop.b.tolist()
    d = pop.d.tolist()
    u = pop.u.tolist()
    fixed = pop.is_originator.tolist()
    received = np.zeros(pop.n, dtype=bool)
    adjacency = g.adjacency
    hypot = math.hypot
    for j in order.tolist():
        nbrs = adjacency[j]
        if not nbrs:
            continue
        received[list(nbrs)] = True
        for i in nbrs:
            if fixed[i]:
                continue
            bj, dj, uj = b[j], d[j], u[j]
            bi, di, ui = b[i], d[i], u[i]
            # similarity
            ni = hypot(bi, di)
            nj = hypot(bj, dj)
            if ni == 0.0 or nj == 0.0:
                s = 0.0
            else:
                s = (bi / ni) * (bj / nj) + (di / ni) * (dj / nj)
                s = 1.0 if s > 1.0 else (0.0 if s < 0.0 else s)
            # discount
            bx = s * bj
            dx = s * dj
            ux = 1.0 - s * (1.0 - uj)
            # consensus
            beta = ui + ux - ui * ux
            if beta <= BETA_EPS:
                continue
            nb = (bi * ux + bx * ui) / beta
            nd = (di * ux + dx * ui) / beta
            nu = 1.0 - nb - nd
            b[i] = nb
            d[i] = nd
            u[i] = nu if nu > 0.0 else 0.0
    pop.b[:] = b
    pop.d[:] = d
    pop.u[:] = u
    return received


def step(
    pop: Population, g: Graph, cfg: SimConfig, t: int, rng: np.random.Generator
) -> Population:
    """Advance ``pop`` in place by one step and return it.

    Active senders push in an rng-shuffled order, then every propagator decays
    by ``cfg.gamma`` and statuses are recomputed. Agents that received a push
    join the active set for the next step.
    """
    senders = np.flatnonzero(pop.active)
    order = rng.permutation(senders)
    received = _propagate(pop, g, order)

    prop = ~pop.is_originator
    keep = 1.0 - cfg.gamma
    pop.b[prop] *= keep
    pop.d[prop] *= keep
    pop.u[prop] += cfg.gamma * (1.0 - pop.u[prop])

    pop.active |= received
    pop.status = classify_all(pop)
    return pop


def measure(pop: Population, t: int) -> StepMetrics:
    prop = ~pop.is_originator
    group = prop if prop.any() else np.ones(pop.n, dtype=bool)
    status = pop.status[group]
    m = status.size
    frac_s = np.count_nonzero(status == Status.SUSCEPTIBLE) / m
    frac_i = np.count_nonzero(status == Status.INFECTED) / m
    frac_r = np.count_nonzero(status == Status.RECOVERED) / m
    return StepMetrics(
        t=t,
        mean_b=float(pop.b.mean()),
        mean_d=float(pop.d.mean()),
        mean_u=float(pop.u.mean()),
        frac_S=frac_s,
        frac_I=frac_i,
        frac_R=frac_r,
        prop_mean_b=float(pop.b[group].mean()),
        prop_mean_d=float(pop.d[group].mean()),
        prop_mean_u=float(pop.u[group].mean()),
    )


def run(g: Graph, cfg: SimConfig, ev: EvidenceMatrix | None = None) -> RunResult:
    """Initialize a population and advance it ``cfg.steps`` times.

    Everything random derives from ``cfg.seed``. When ``ev`` is omitted the
    matrix from :func:`evidence_for` is used.
    """
    if ev is None:
        ev = evidence_for(cfg)
    _, init_ss, sched_ss = _streams(cfg.seed)
    pop, originators = init_population(g, cfg, ev, init_ss)
    initial = measure(pop, 0)
    sched_rng = np.random.default_rng(sched_ss)
    metrics = []
    full_at = None
    for t in range(1, cfg.steps + 1):
        if full_at is None and pop.active.all():
            full_at = t
        step(pop, g, cfg, t, sched_rng)
        metrics.append(measure(pop, t))
    return RunResult(initial, metrics, pop, originators, full_at, cfg)


def _fmt(x: float) -> str:
    return format(float(x), ".9g")


def write_metrics_csv(metrics: list[StepMetrics], stream: TextIO) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(METRIC_FIELDS)
    for m in metrics:
        w.writerow([m.t] + [_fmt(getattr(m, f)) for f in METRIC_FIELDS[1:]])


def write_snapshot_csv(pop: Population, stream: TextIO) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(SNAPSHOT_FIELDS)
    for ag in pop.agents():
        w.writerow(
            [
                ag.id,
                ag.role.value,
                _fmt(ag.tc),
                _fmt(ag.a_raw),
                _fmt(ag.a_adj),
                _fmt(ag.opinion.b),
                _fmt(ag.opinion.d),
                _fmt(ag.opinion.u),
                ag.status.label,
            ]
        )
