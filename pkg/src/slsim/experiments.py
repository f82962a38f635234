"""Two-axis parameter sweeps with replication averaging.

Every run in a sweep is keyed by ``(cell, replication)`` and seeded from
``(master seed, cell, replication)``, so results do not depend on the number
of worker processes or the order in which runs finish.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from typing import Sequence, TextIO

import numpy as np

from .network import Graph
from .simulation import SimConfig, StepMetrics, run

SWEEP_FIELDS = (
    "axis1_name", "axis1_value", "axis2_name", "axis2_value",
    "mean_b", "std_b", "mean_d", "std_d", "mean_u", "std_u", "frac_R", "std_R", "n_r",
)

COUNT_GRID = (0, 1000, 2000, 3000, 4000, 5000, 6000)
TC_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
DESK_GRAPH = "synthetic:ba,n=200,m=5,seed=0"
FULL_GRAPH = "synthetic:ba,n=1000,m=26,seed=0"
DESK_REPLICATIONS = 30
FULL_REPLICATIONS = 100

_INT_FIELDS = {"originator_count", "steps", "seed", "n_pv", "n_pn", "n_cv", "n_cn"}
_SWEEPABLE = {
    f.name for f in fields(SimConfig) if f.name not in ("seed", "originator_strategy")
}
_CELL_BITS = 20


def derive_seed(master: int, cell: int, rep: int) -> int:
    """Pack ``(master, cell, rep)`` into one integer seed, injectively."""
    limit = 1 << _CELL_BITS
    if not (0 <= cell < limit and 0 <= rep < limit):
        raise ValueError(f"cell and replication indices must be below {limit}")
    return (master << (2 * _CELL_BITS)) | (cell << _CELL_BITS) | rep


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple

    def __post_init__(self) -> None:
        if self.name not in _SWEEPABLE:
            raise ValueError(f"cannot sweep {self.name!r}; choose from {sorted(_SWEEPABLE)}")
        if not self.values:
            raise ValueError(f"axis {self.name!r} has no values")
        cast = int if self.name in _INT_FIELDS else float
        object.__setattr__(self, "values", tuple(cast(v) for v in self.values))


@dataclass(frozen=True)
class SweepSpec:
    base: SimConfig
    axis1: Axis
    axis2: Axis
    replications: int = DESK_REPLICATIONS
    name: str = ""

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise ValueError(f"replications must be at least 1, got {self.replications}")
        if self.axis1.name == self.axis2.name:
            raise ValueError(f"both axes sweep {self.axis1.name!r}")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.axis1.values), len(self.axis2.values)

    def cell_values(self, cell: int) -> tuple:
        i, j = divmod(cell, len(self.axis2.values))
        return self.axis1.values[i], self.axis2.values[j]

    def config_for(self, cell: int, rep: int) -> SimConfig:
        v1, v2 = self.cell_values(cell)
        return replace(
            self.base,
            **{self.axis1.name: v1, self.axis2.name: v2},
            seed=derive_seed(self.base.seed, cell, rep),
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "base": self.base.to_dict(),
            "axis1": {"name": self.axis1.name, "values": list(self.axis1.values)},
            "axis2": {"name": self.axis2.name, "values": list(self.axis2.values)},
            "replications": self.replications,
        }


@dataclass(frozen=True)
class CellResult:
    cell: int
    axis1_value: float
    axis2_value: float
    seeds: tuple[int, ...]
    runs: tuple[StepMetrics, ...]

    def _stat(self, attr: str) -> tuple[float, float]:
        x = np.array([getattr(r, attr) for r in self.runs])
        return float(x.mean()), float(x.std())

    @property
    def mean_b(self) -> float:
        return self._stat("mean_b")[0]

    @property
    def mean_d(self) -> float:
        return self._stat("mean_d")[0]

    @property
    def mean_u(self) -> float:
        return self._stat("mean_u")[0]

    @property
    def frac_R(self) -> float:
        return self._stat("frac_R")[0]

    def summary(self) -> dict[str, float]:
        out: dict[str, float] = {}
        for attr, key in (("mean_b", "b"), ("mean_d", "d"), ("mean_u", "u"), ("frac_R", "R")):
            mean, std = self._stat(attr)
            out["frac_R" if key == "R" else attr] = mean
            out[f"std_{key}"] = std
        return out


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    cells: tuple[CellResult, ...]

    def grid(self, attr: str) -> np.ndarray:
        """Cell means of ``attr`` as an ``(len(axis1), len(axis2))`` array."""
        return np.array([getattr(c, attr) for c in self.cells]).reshape(self.spec.shape)

    def cell_at(self, v1, v2) -> CellResult:
        for c in self.cells:
            if c.axis1_value == v1 and c.axis2_value == v2:
                return c
        raise KeyError((v1, v2))


_worker_graph: Graph | None = None


def _init_worker(g: Graph) -> None:
    global _worker_graph
    _worker_graph = g


def _final_metrics(cfg: SimConfig) -> StepMetrics:
    return run(_worker_graph, cfg).final


def run_cell(spec: SweepSpec, g: Graph, cell: int) -> CellResult:
    """Run one cell of ``spec`` on its own, exactly as :func:`run_sweep` would."""
    cfgs = [spec.config_for(cell, r) for r in range(spec.replications)]
    v1, v2 = spec.cell_values(cell)
    finals = tuple(run(g, c).final for c in cfgs)
    return CellResult(cell, v1, v2, tuple(c.seed for c in cfgs), finals)


def run_sweep(spec: SweepSpec, g: Graph, parallelism: int = 1) -> SweepResult:
    """Run every ``(cell, replication)`` of ``spec`` on graph ``g``.

    With ``parallelism > 1`` runs are farmed out to a process pool; the result
    is identical to the serial one.
    """
    if parallelism < 1:
        raise ValueError(f"parallelism must be at least 1, got {parallelism}")
    n_cells = spec.shape[0] * spec.shape[1]
    keys = [(c, r) for c in range(n_cells) for r in range(spec.replications)]
    cfgs = [spec.config_for(c, r) for c, r in keys]
    if parallelism == 1:
        finals = [run(g, cfg).final for cfg in cfgs]
    else:
        with ProcessPoolExecutor(parallelism, initializer=_init_worker, initargs=(g,)) as pool:
            chunk = max(1, len(cfgs) // (4 * parallelism))
            finals = list(pool.map(_final_metrics, cfgs, chunksize=chunk))
    by_key = dict(zip(keys, zip(cfgs, finals)))
    cells = []
    for c in range(n_cells):
        v1, v2 = spec.cell_values(c)
        entries = [by_key[(c, r)] for r in range(spec.replications)]
        cells.append(
            CellResult(c, v1, v2, tuple(cfg.seed for cfg, _ in entries), tuple(m for _, m in entries))
        )
    return SweepResult(spec, tuple(cells))


PRESETS = ("valuable-sweep", "noisy-sweep", "tc-under-pv", "tc-under-cv")


def preset(name: str, desk_scale: bool = False, **overrides) -> SweepSpec:
    """Sweep grids for the four sensitivity studies.

    Evidence classes that are not swept stay at 1000 items. The competence
    sweeps pin ``tc_std`` to 0 so each curve has one exact competence.
    ``overrides`` replace fields of the base :class:`SimConfig`.
    """
    reps = DESK_REPLICATIONS if desk_scale else FULL_REPLICATIONS
    reps = overrides.pop("replications", reps)
    counts = Axis
    if name == "valuable-sweep":
        base = SimConfig(**overrides)
        a1, a2 = counts("n_pv", COUNT_GRID), counts("n_cv", COUNT_GRID)
    elif name == "noisy-sweep":
        base = SimConfig(**overrides)
        a1, a2 = counts("n_pn", COUNT_GRID), counts("n_cn", COUNT_GRID)
    elif name == "tc-under-pv":
        base = SimConfig(**{"tc_std": 0.0, **overrides})
        a1, a2 = Axis("tc_mu", TC_GRID), counts("n_pv", COUNT_GRID)
    elif name == "tc-under-cv":
        base = SimConfig(**{"tc_std": 0.0, **overrides})
        a1, a2 = Axis("tc_mu", TC_GRID), counts("n_cv", COUNT_GRID)
    else:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return SweepSpec(base, a1, a2, reps, name)


def _fmt(x) -> str:
    return format(float(x), ".9g")


def write_sweep_csv(result: SweepResult, stream: TextIO) -> None:
    spec = result.spec
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(SWEEP_FIELDS)
    for cell in result.cells:
        s = cell.summary()
        w.writerow(
            [spec.axis1.name, _fmt(cell.axis1_value), spec.axis2.name, _fmt(cell.axis2_value)]
            + [_fmt(s[k]) for k in SWEEP_FIELDS[4:12]]
            + [len(cell.runs)]
        )


def sweep_manifest(result: SweepResult, g: Graph) -> dict:
    return {
        "kind": "sweep",
        "spec": result.spec.to_dict(),
        "master_seed": result.spec.base.seed,
        "seed_rule": "seed = (master << 40) | (cell << 20) | replication",
        "graph": {"source": g.source, "n": g.n, "edge_count": len(g.edges)},
        "cells": [
            {"cell": c.cell, "axis1_value": c.axis1_value, "axis2_value": c.axis2_value, "seeds": list(c.seeds)}
            for c in result.cells
        ],
    }


def write_manifest(manifest: dict, stream: TextIO) -> None:
    json.dump(manifest, stream, indent=2, sort_keys=True)
    stream.write("\n")


def values_from_text(text: str) -> Sequence[float]:
    """Parse ``"0,1000,2000"`` or ``"0:6000:1000"`` (inclusive stop) into values."""
    text = text.strip()
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        if step <= 0:
            raise ValueError(f"range step must be positive in {text!r}")
        n = int(round((stop - start) / step)) + 1
        return [start + k * step for k in range(n)]
    return [float(x) for x in text.split(",") if x.strip()]
