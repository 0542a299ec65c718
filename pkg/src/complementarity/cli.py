"""Command-line front end.

    complementarity <subcommand> --config PATH [--out DIR] [--dump-operator PATH]
                    [--dump-fields DIR] [--seed N]

Exit status: 0 check passed, 1 computed negative result, 2 usage or
configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import RunConfig, parse_config
from .construction import (
    DEFAULT_MARGIN_FLOOR_REL,
    evaluate_candidate,
    feasible_alpha,
    search_parameters,
)
from .errors import ComplementarityError, ConfigError, NumericError
from .grid import build_grid
from .operator import assemble_operator
from .outputs import (
    Lcg64,
    dumps,
    random_field,
    write_csv,
    write_field_csv,
    write_json,
    write_operator_csv,
)
from .scaling import scaling_study
from .spectral import eigendecompose, oracle_discrepancy

log = logging.getLogger("complementarity")

SUBCOMMANDS = ("spectrum", "construct", "verify", "scan-size", "scan-alpha", "oracle-check")
EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_SEED = 1


@dataclass
class Options:
    out: Path
    seed: int = DEFAULT_SEED
    dump_operator: Path | None = None
    dump_fields: Path | None = None


@dataclass
class RunReport:
    subcommand: str
    config: dict
    seed: int
    timings: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)
    exit_status: int = EXIT_OK

    def stage(self, name):
        return _Stage(self, name)

    def wrote(self, path, rows=None):
        self.artifacts.append({"path": str(path), "rows": rows})

    def as_dict(self):
        return {
            "subcommand": self.subcommand,
            "seed": self.seed,
            "config": self.config,
            "timings": self.timings,
            "artifacts": self.artifacts,
            "verdicts": self.verdicts,
            "exit_status": self.exit_status,
        }


class _Stage:
    def __init__(self, report, name):
        self.report, self.name = report, name

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        self.report.timings[self.name] = round(time.perf_counter() - self.t0, 6)


def _want(cfg: RunConfig, kind: str) -> bool:
    return kind in cfg.output_formats


def _grid(cfg: RunConfig, scale: float | None = None):
    return build_grid(cfg.grid_dimension, cfg.grid_box_side, cfg.grid_cells_per_axis,
                      cfg.grid_scale if scale is None else scale, cfg.grid_max_nodes)


def _operator(cfg, opts, report, scale=None):
    with report.stage("assemble"):
        M = assemble_operator(_grid(cfg, scale), cfg.kernel, cfg.grid_max_nodes)
    if opts.dump_operator is not None:
        rows = write_operator_csv(opts.dump_operator, M.entries)
        report.wrote(opts.dump_operator, rows)
    return M


def _dump_quartet(opts, report, candidate, dec):
    if opts.dump_fields is None:
        return
    from .construction import build_quartet

    q = build_quartet(dec, candidate.i, candidate.j, candidate.k, candidate.alpha)
    for name, f in zip(("phi", "phi_cap", "psi", "psi_cap"), q.fields):
        path = Path(opts.dump_fields) / f"{name}.csv"
        report.wrote(path, write_field_csv(path, f))


def run_spectrum(cfg, opts, report):
    M = _operator(cfg, opts, report)
    with report.stage("eigendecompose"):
        dec = eigendecompose(M, require_negative=False, residual_tol=cfg.tol_eigen_residual)
    nonneg = int(np.sum(dec.eigenvalues >= 0))
    report.verdicts.update(
        n_modes=dec.n_modes,
        nonnegative_eigenvalues=nonneg,
        max_residual=float(np.max(dec.residuals(M))),
        orthonormality_error=dec.orthonormality_error(),
    )
    if _want(cfg, "csv"):
        path = opts.out / "spectrum.csv"
        rows = write_csv(path, ["index", "lambda"], ((n + 1, lam) for n, lam in enumerate(dec.eigenvalues)))
        report.wrote(path, rows)
    return EXIT_OK if nonneg == 0 else EXIT_NEGATIVE


def run_verify(cfg, opts, report, name="report.json"):
    M = _operator(cfg, opts, report)
    i, j, k = cfg.modes
    with report.stage("eigendecompose"):
        dec = eigendecompose(M, max(cfg.modes), residual_tol=cfg.tol_eigen_residual)
    floor = cfg.tol_margin_floor
    if floor is None:
        floor = DEFAULT_MARGIN_FLOOR_REL * abs(dec.eigenvalue(1))
    with report.stage("interactions"):
        cand = evaluate_candidate(M, dec, i, j, k, cfg.alpha_value, floor)
    rep = cand.report
    doc = cand.to_dict()
    doc.update(
        margin_floor=floor,
        failing=list(rep.failing),
        worst_pair=rep.worst_pair,
        max_reconstruction_discrepancy=rep.max_discrepancy,
        config=cfg.echo(include_output=False),
    )
    report.verdicts.update(verdict=rep.verdict, worst_margin=rep.worst_margin, failing=list(rep.failing))
    if rep.failing:
        log.info("failing pairs: %s", ", ".join(rep.failing))
    if _want(cfg, "json"):
        path = opts.out / name
        write_json(path, doc)
        report.wrote(path)
    _dump_quartet(opts, report, cand, dec)
    return EXIT_OK if rep.verdict else EXIT_NEGATIVE


def run_construct(cfg, opts, report):
    base = _grid(cfg, 1.0)
    if opts.dump_operator is not None:
        _operator(cfg, opts, report)
    with report.stage("search"):
        result = search_parameters(
            cfg.kernel, base, cfg.mode_candidates, cfg.alpha_grid, cfg.search_scales,
            skip_degenerate=cfg.search_skip_degenerate,
        )
    if result.best is None:
        raise NumericError("no scale could be evaluated", result.failed_scales)
    best = result.best
    doc = best.to_dict()
    doc.update(
        witness_found=result.found,
        evaluated=result.evaluated,
        window_samples=len(result.window_checks),
        window_counterexamples=len(result.counterexamples),
        failed_scales={str(k): v for k, v in result.failed_scales.items()},
        config=cfg.echo(include_output=False),
    )
    report.verdicts.update(witness_found=result.found, worst_margin=best.report.worst_margin,
                           i=best.i, j=best.j, k=best.k, alpha=best.alpha, scale=best.scale)
    if _want(cfg, "json"):
        path = opts.out / "quartet.json"
        write_json(path, doc)
        report.wrote(path)
    if opts.dump_fields is not None:
        M = assemble_operator(_grid(cfg, best.scale), cfg.kernel, cfg.grid_max_nodes)
        _dump_quartet(opts, report, best, eigendecompose(M, max(best.i, best.j, best.k)))
    return EXIT_OK if result.found else EXIT_NEGATIVE


def run_scan_size(cfg, opts, report):
    base = _grid(cfg, 1.0)
    with report.stage("scaling"):
        study = scaling_study(cfg.kernel, base, cfg.scan_scales, cfg.modes, cfg.grid_max_nodes)
    if _want(cfg, "csv"):
        header = ["r", "mes_q", "lambda_1", "lambda_2", "lambda_3", "f_max", "r1_max", "c_ratio"]
        rows = []
        for row in study.rows:
            lam = list(row.lambdas) + [float("nan")] * (3 - len(row.lambdas))
            rows.append([row.r, row.mes_q, *lam, row.f_max, row.r1_max, row.c_ratio])
        path = opts.out / "scaling.csv"
        report.wrote(path, write_csv(path, header, rows))
    summary = {
        "slope": study.slope,
        "c_constant": study.c_constant,
        "r0": study.r0,
        "c0": study.c0,
        "c_spread": study.c_spread,
        "partial": study.partial,
        "failed": {str(r.r): r.error for r in study.rows if not r.ok},
        "modes": list(study.modes),
    }
    if _want(cfg, "json"):
        path = opts.out / "scaling_summary.json"
        write_json(path, summary)
        report.wrote(path)
    report.verdicts.update(slope=study.slope, c_constant=study.c_constant, partial=study.partial)
    return EXIT_NUMERIC if not study.good_rows else EXIT_OK


def run_scan_alpha(cfg, opts, report):
    M = _operator(cfg, opts, report)
    i, j, k = cfg.modes
    dec = eigendecompose(M, max(cfg.modes), residual_tol=cfg.tol_eigen_residual)
    floor = cfg.tol_margin_floor
    if floor is None:
        floor = DEFAULT_MARGIN_FLOOR_REL * abs(dec.eigenvalue(1))
    rows = []
    with report.stage("scan"):
        for a in cfg.alpha_grid:
            c = evaluate_candidate(M, dec, i, j, k, a, floor)
            rows.append((a, c.report.worst_margin, c.report.verdict, c.window.contains(a)))
    window = feasible_alpha(dec.eigenvalue(i), dec.eigenvalue(j), dec.eigenvalue(k),
                            c.report.f_max, floor)
    if _want(cfg, "csv"):
        path = opts.out / "alpha_scan.csv"
        report.wrote(path, write_csv(path, ["alpha", "worst_margin", "verdict", "in_window"], rows))
    if _want(cfg, "json"):
        path = opts.out / "alpha_scan.json"
        write_json(path, {"i": i, "j": j, "k": k, "scale": cfg.grid_scale, "f_max": window.f_max,
                          "margin_floor": floor, "window": window.as_dict(),
                          "passing": sum(r[2] for r in rows), "total": len(rows)})
        report.wrote(path)
    report.verdicts.update(passing=sum(r[2] for r in rows), window=window.as_dict())
    return EXIT_OK


def run_oracle_check(cfg, opts, report):
    M = _operator(cfg, opts, report)
    with report.stage("eigendecompose"):
        dec = eigendecompose(M, require_negative=False, residual_tol=cfg.tol_eigen_residual)
    rng = Lcg64(opts.seed)
    pairs = []
    for _ in range(cfg.oracle_pairs):
        f = random_field(M.grid, rng)
        g = random_field(M.grid, rng)
        direct, spectral, rel = oracle_discrepancy(M, dec, f, g)
        pairs.append({"direct": direct, "spectral": spectral, "relative_discrepancy": rel})
    worst = max(p["relative_discrepancy"] for p in pairs)
    passed = worst <= cfg.tol_oracle
    if _want(cfg, "json"):
        path = opts.out / "oracle_check.json"
        write_json(path, {"seed": opts.seed, "tolerance": cfg.tol_oracle, "max_relative_discrepancy": worst,
                          "passed": passed, "pairs": pairs})
        report.wrote(path)
    report.verdicts.update(max_relative_discrepancy=worst, passed=passed)
    return EXIT_OK if passed else EXIT_NEGATIVE


RUNNERS = {
    "spectrum": run_spectrum,
    "construct": run_construct,
    "verify": run_verify,
    "scan-size": run_scan_size,
    "scan-alpha": run_scan_alpha,
    "oracle-check": run_oracle_check,
}


def run_subcommand(name: str, cfg: RunConfig, opts: Options) -> RunReport:
    """Run one pipeline; the returned report carries the exit status."""
    report = RunReport(name, cfg.echo(), opts.seed)
    Path(opts.out).mkdir(parents=True, exist_ok=True)
    report.exit_status = RUNNERS[name](cfg, opts, report)
    return report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="complementarity", description=__doc__.splitlines()[0])
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--out", type=Path, help="output directory (overrides output.directory)")
    p.add_argument("--dump-operator", type=Path, metavar="PATH")
    p.add_argument("--dump-fields", type=Path, metavar="DIR")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = parse_config(args.config.read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    out = args.out if args.out is not None else Path(cfg.output_directory)
    opts = Options(out, args.seed, args.dump_operator, args.dump_fields)
    try:
        report = run_subcommand(args.subcommand, cfg, opts)
    except NumericError as exc:
        print(f"numeric failure: {exc} {exc.diagnostics}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ComplementarityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(dumps(report.as_dict()))
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
