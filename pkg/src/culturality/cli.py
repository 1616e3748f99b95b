"""Batch pipeline driver.

Subcommands::

    culturality ingest   --survey table.csv            validate and echo the table
    culturality simulate --population 150 --steps 50   write trajectories.csv
    culturality cluster  --k 4 | --auto-k              write assignments.csv, print silhouette
    culturality report                                 ranking.csv + cluster_map.svg (+ the above)

Every output is a deterministic function of the inputs and ``--seed``.
Exit status: 0 success, 2 invalid input, 3 numerical or clustering failure.
Log verbosity comes from ``CULTURALITY_LOG`` (error, info, debug).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .config import RunConfig, load_run_config
from .errors import CulturalityError, InputError
from .report import load_hdi, rank_cohorts, ranking_csv, render_cluster_map
from .sim import Population, SimResult, run, synthesize_population
from .similarity import auto_k, cluster_kmedoids, matrix_to_csv, purity, silhouette, similarity_matrix
from .survey import SurveyTable, load_schema, load_survey, validate

log = logging.getLogger("culturality")

LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _setup_logging() -> None:
    level = os.environ.get("CULTURALITY_LOG", "error").strip().lower()
    if level not in LOG_LEVELS:
        level = "error"
    logging.basicConfig(level=LOG_LEVELS[level], format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--survey", metavar="PATH", help="survey CSV (default: bundled table)")
    common.add_argument("--schema", metavar="PATH", help="attribute schema TOML")
    common.add_argument("--config", metavar="PATH", help="run config TOML")
    common.add_argument("--hdi", metavar="PATH", help="HDI/color config TOML")
    common.add_argument("--seed", type=int, metavar="N")
    common.add_argument("--steps", type=int, metavar="N")
    common.add_argument("--population", type=int, metavar="N")
    k = common.add_mutually_exclusive_group()
    k.add_argument("--k", type=int, metavar="N", help="number of clusters")
    k.add_argument("--auto-k", action="store_true", help="pick k in the configured range by silhouette")
    common.add_argument("--out", metavar="DIR", default="out", help="output directory (default: out)")

    parser = argparse.ArgumentParser(prog="culturality", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("ingest", parents=[common], help="validate and echo a survey table")
    sub.add_parser("simulate", parents=[common], help="synthesize agents and write factor trajectories")
    sub.add_parser("cluster", parents=[common], help="cluster agents by weighted similarity")
    sub.add_parser("report", parents=[common], help="ranking table and HDI cluster map")
    return parser


def _inputs(args) -> tuple[SurveyTable, RunConfig]:
    schema = load_schema(args.schema)
    table = load_survey(args.survey, schema)
    cfg = load_run_config(args.config, schema).with_overrides(
        seed=args.seed, steps=args.steps, population=args.population, k=args.k, auto_k=args.auto_k
    )
    return table, cfg


def _population(table: SurveyTable, cfg: RunConfig) -> Population:
    return synthesize_population(
        table, cfg.sim.population_size, cfg.sim.seed, x_categories=cfg.x_categories, z_categories=cfg.z_categories
    )


def _simulate(table, cfg, out: Path) -> tuple[Population, SimResult]:
    pop = _population(table, cfg)
    result = run(pop, cfg.sim)
    result.to_csv(out / "trajectories.csv")
    log.info("simulated %d agents for %d steps (config %s)", len(pop), cfg.sim.steps, result.config_digest)
    return pop, result


def _cluster(pop: Population, cfg: RunConfig, out: Path):
    S = similarity_matrix(pop, pop.schema.weights)
    if cfg.auto_k:
        clustering, scores = auto_k(S, cfg.k_range, cfg.sim.seed)
        log.info("silhouette by k: %s", {k: round(v, 4) for k, v in scores.items()})
    else:
        clustering = cluster_kmedoids(S, cfg.k, cfg.sim.seed)
    ids = [a.id for a in pop.agents]
    clustering.to_csv(out / "assignments.csv", ids)
    matrix_to_csv(S, out / "similarity.csv", ids)
    sil = silhouette(S, clustering) if clustering.k >= 2 else None
    return S, clustering, sil


def cmd_ingest(args) -> int:
    schema = load_schema(args.schema)
    table = load_survey(args.survey, schema)
    print(f"{len(table.cohorts)} cohorts, {len(schema)} attributes, {len(validate(table))} diagnostics")
    for c in table.cohorts:
        published = table.stored_aggregate.get(c.key)
        extra = "" if published is None else f"  aggregate (as published) {published:g}"
        print(f"{c.society}\t{c.gender}\tN={c.n}{extra}")
    return 0


def cmd_simulate(args) -> int:
    table, cfg = _inputs(args)
    out = _outdir(args)
    _simulate(table, cfg, out)
    print(f"wrote {out / 'trajectories.csv'}")
    return 0


def cmd_cluster(args) -> int:
    table, cfg = _inputs(args)
    out = _outdir(args)
    pop = _population(table, cfg)
    _, clustering, sil = _cluster(pop, cfg, out)
    print(f"k = {clustering.k}, objective = {clustering.objective:.6f}")
    print(f"purity (society) = {purity(clustering.assignments, pop.societies):.4f}")
    if sil is not None:
        print(f"silhouette = {sil:.6f}")
    print(f"wrote {out / 'assignments.csv'}")
    return 0


def cmd_report(args) -> int:
    table, cfg = _inputs(args)
    hdi = load_hdi(args.hdi)
    out = _outdir(args)
    ranking_csv(table, out / "ranking.csv")
    pop, result = _simulate(table, cfg, out)
    _, clustering, sil = _cluster(pop, cfg, out)
    _, svg = render_cluster_map(clustering, result.final, pop.societies, hdi, seed=cfg.sim.seed)
    (out / "cluster_map.svg").write_text(svg, encoding="utf-8")
    print("rank  society   gender  score   aggregate (as published)")
    for i, (society, gender, score) in enumerate(rank_cohorts(table), 1):
        published = table.stored_aggregate.get((society, gender), float("nan"))
        print(f"{i:>4}  {society:<9} {gender:<7} {score:.4f}  {published:g}")
    if sil is not None:
        print(f"silhouette (k={clustering.k}) = {sil:.6f}")
    print(f"wrote {out}")
    return 0


def _outdir(args) -> Path:
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create output directory {out}: {exc}") from None
    return out


COMMANDS = {"ingest": cmd_ingest, "simulate": cmd_simulate, "cluster": cmd_cluster, "report": cmd_report}


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CulturalityError as exc:
        print(f"culturality {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
