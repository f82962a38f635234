"""Command-line entry point: ``slsim run | sweep | stats``.

Settings resolve as command-line flag, then config file, then built-in
default. Config files hold ``key = value`` lines with ``#`` comments; keys are
the :class:`~slsim.simulation.SimConfig` fields plus ``replications``,
``axis1`` and ``axis2`` (``name:v1,v2,...`` or ``name:start:stop:step``).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import fields
from pathlib import Path

from .evidence import load_matrix
from .experiments import (
    DESK_GRAPH,
    DESK_REPLICATIONS,
    FULL_GRAPH,
    FULL_REPLICATIONS,
    PRESETS,
    Axis,
    SweepSpec,
    preset,
    run_sweep,
    sweep_manifest,
    values_from_text,
    write_manifest,
    write_sweep_csv,
)
from .network import compute_stats, parse_graph_source
from .simulation import SimConfig, run, write_metrics_csv, write_snapshot_csv

OUTPUT_ENV = "SLSIM_OUTPUT_DIR"
_SIM_FIELDS = {f.name: f for f in fields(SimConfig)}
_INT_KEYS = {"originator_count", "steps", "seed", "n_pv", "n_pn", "n_cv", "n_cn", "replications"}
_STR_KEYS = {"originator_strategy", "axis1", "axis2"}
CONFIG_KEYS = set(_SIM_FIELDS) | {"replications", "axis1", "axis2"}


class StageError(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(message)
        self.stage = stage


def _convert(key: str, value: str):
    if key in _STR_KEYS:
        return value
    if key == "originator_count" and value.lower() in ("", "none"):
        return None
    return int(value) if key in _INT_KEYS else float(value)


def read_config(path: str | Path) -> dict:
    """Parse a key-value config file; unknown keys raise ``ValueError``."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, value = (p.strip() for p in line.split("=", 1))
            if key not in CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out[key] = _convert(key, value)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
    return out


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-").lower()


def _add_sim_flags(p: argparse.ArgumentParser) -> None:
    for name, f in _SIM_FIELDS.items():
        if name == "originator_count":
            p.add_argument("--originators", dest=name, type=int, help="explicit originator count")
            continue
        kind = str if name in _STR_KEYS else (int if name in _INT_KEYS else float)
        p.add_argument(_flag(name), dest=name, type=kind, help=f"default {f.default}")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--desk-scale", action="store_true", help="200-node graph, 30 replications")
    p.add_argument("--graph", help="edge-list path or synthetic:<model>,n=..,...")
    p.add_argument("--out-dir", help=f"output directory (default ${OUTPUT_ENV} or .)")


def resolve(args: argparse.Namespace, extra_keys: tuple[str, ...] = ()) -> dict:
    """Merge built-in defaults, config file values and explicit flags."""
    settings = read_config(args.config) if args.config else {}
    for key in list(_SIM_FIELDS) + list(extra_keys):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _sim_config(settings: dict) -> SimConfig:
    return SimConfig(**{k: v for k, v in settings.items() if k in _SIM_FIELDS})


def _out_dir(args) -> Path:
    out = Path(args.out_dir or os.environ.get(OUTPUT_ENV, "."))
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise StageError("write", f"cannot create output directory {out}: {exc}") from exc
    return out


def _load_graph(spec: str):
    try:
        return parse_graph_source(spec)
    except FileNotFoundError as exc:
        raise StageError("parse", str(exc)) from exc
    except (OSError, ValueError) as exc:
        raise StageError("parse", f"{spec}: {exc}") from exc


def cmd_run(args) -> int:
    try:
        settings = resolve(args)
        cfg = _sim_config(settings)
    except (OSError, ValueError, TypeError) as exc:
        raise StageError("config", str(exc)) from exc
    g = _load_graph(args.graph or (DESK_GRAPH if args.desk_scale else FULL_GRAPH))
    ev = None
    if args.evidence:
        try:
            ev = load_matrix(args.evidence)
        except (OSError, ValueError) as exc:
            raise StageError("parse", f"{args.evidence}: {exc}") from exc
    try:
        result = run(g, cfg, ev)
    except ValueError as exc:
        raise StageError("run", str(exc)) from exc
    out = _out_dir(args)
    manifest = {
        "kind": "run",
        "config": cfg.to_dict(),
        "master_seed": cfg.seed,
        "graph": {"source": g.source, "n": g.n, "edge_count": len(g.edges)},
        "evidence": args.evidence or "generated from config counts",
        "originators": sorted(result.originators),
        "first_full_activation": result.first_full_activation,
    }
    try:
        with open(out / "metrics.csv", "w", encoding="utf-8", newline="") as fh:
            write_metrics_csv(result.metrics or [result.initial], fh)
        with open(out / "snapshot.csv", "w", encoding="utf-8", newline="") as fh:
            write_snapshot_csv(result.population, fh)
        with open(out / "manifest.json", "w", encoding="utf-8") as fh:
            write_manifest(manifest, fh)
    except OSError as exc:
        raise StageError("write", str(exc)) from exc
    print(f"wrote {out / 'metrics.csv'} ({len(result.metrics)} steps)")
    return 0


def _axis(text: str) -> Axis:
    name, _, values = text.partition(":")
    if not values:
        raise ValueError(f"axis needs 'name:values', got {text!r}")
    return Axis(name.strip(), tuple(values_from_text(values)))


def cmd_sweep(args) -> int:
    if args.preset and args.preset not in PRESETS:
        raise StageError("config", f"unknown preset {args.preset!r}; valid presets: {', '.join(PRESETS)}")
    try:
        settings = resolve(args, ("replications",))
        reps = settings.pop("replications", DESK_REPLICATIONS if args.desk_scale else FULL_REPLICATIONS)
        axis1 = settings.pop("axis1", None)
        axis2 = settings.pop("axis2", None)
        if args.preset:
            spec = preset(args.preset, desk_scale=args.desk_scale, replications=reps, **settings)
        elif axis1 and axis2:
            spec = SweepSpec(_sim_config(settings), _axis(axis1), _axis(axis2), reps, "custom")
        else:
            raise ValueError("give --preset or a --config file defining axis1 and axis2")
    except (OSError, ValueError, TypeError) as exc:
        raise StageError("config", str(exc)) from exc
    g = _load_graph(args.graph or (DESK_GRAPH if args.desk_scale else FULL_GRAPH))
    try:
        result = run_sweep(spec, g, parallelism=args.parallel)
    except ValueError as exc:
        raise StageError("run", str(exc)) from exc
    out = _out_dir(args)
    stem = spec.name or "sweep"
    try:
        with open(out / f"{stem}.csv", "w", encoding="utf-8", newline="") as fh:
            write_sweep_csv(result, fh)
        with open(out / f"{stem}.manifest.json", "w", encoding="utf-8") as fh:
            write_manifest(sweep_manifest(result, g), fh)
    except OSError as exc:
        raise StageError("write", str(exc)) from exc
    print(f"wrote {out / (stem + '.csv')} ({len(result.cells)} cells)")
    return 0


def cmd_stats(args) -> int:
    g = _load_graph(args.graph)
    print(compute_stats(g).to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate once and write metrics/snapshot CSVs")
    _add_sim_flags(p_run)
    p_run.add_argument("--evidence", help="evidence matrix file (default: built from counts)")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a two-axis parameter sweep")
    _add_sim_flags(p_sweep)
    p_sweep.add_argument("--preset", help=f"one of {', '.join(PRESETS)}")
    p_sweep.add_argument("--replications", type=int)
    p_sweep.add_argument("--parallel", type=int, default=1, help="worker processes")
    p_sweep.set_defaults(func=cmd_sweep)

    p_stats = sub.add_parser("stats", help="print graph statistics as JSON")
    p_stats.add_argument("graph", help="edge-list path or synthetic:<model>,n=..,...")
    p_stats.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StageError as exc:
        print(f"slsim {args.command}: {exc.stage} error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
