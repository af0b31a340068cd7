"""
Command-line front end.

Every subcommand reads its inputs, runs one library operation and writes a
versioned report (JSON by default, CSV tables or matrices with --format csv).
Exit status: 0 when all checks pass, 1 when a mathematical check fails,
2 on usage, parse or precondition errors.
"""
from __future__ import annotations

import argparse
import io
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from ptolab.cube.experiment import MAX_SLICE_SIZE, TARGET_BUILDERS, build_instance, snowflake_obstruction_experiment
from ptolab.cube.diagonal import find_short_diagonal
from ptolab.embed.snowflake_map import ball_snowflake, sample_l1_ball
from ptolab.embed.sphere import composite_embedding, inverse_stereographic, mobius_check_map, pair_table, stereographic
from ptolab.engine.final_report import write_table_pdf
from ptolab.engine.run_checks import DEFAULT_CHECKS, PIPELINE, run_checks
from ptolab.engine.single_report import create_pdf_report, format_report
from ptolab.engine.suites import SUITES, run_suite
from ptolab.errors import PreconditionError
from ptolab.io.report_io import dumps_report, write_matrix_csv, write_table_csv
from ptolab.metric.core import check_metric_axioms, involute, mobius_equivalent, quasi_metric_space, snowflake
from ptolab.metric.generators import (
    cycle_metric,
    hyperbolic_disk_net,
    kovalev_metric,
    l1_lattice_net,
    path_metric,
    random_metric,
    random_tree_metric,
    random_ultrametric,
    star_metric,
)
from ptolab.metric.hyperbolicity import (
    basepoint_change_identity_check,
    boundary_quasimetric,
    delta_at_basepoint,
    delta_global,
    k_bound_holds,
)
from ptolab.metric.metrization import FRINK_MAX_K, chain_metric, distortion_curve, estimate_critical_exponent, frink_bound_check
from ptolab.metric.ptolemy import ptolemy_check
from ptolab.models.examples import SCAN_RANGE, admissible_parameter_scan, glued_quadrilateral, six_point_example
from ptolab.models.hyperbolic import bourdon_metric, orthogonal_frame_config
from ptolab.parsing.parse_matrix import load_matrix, parse_matrix
from ptolab.system.config import default_eq_tol, default_threads, default_tol
from ptolab.system.diagnostics import install_crash_handlers, setup_logging
from ptolab.system.wrappers import EXIT_CHECK_FAILED, EXIT_OK, safe_command
from ptolab.types import DistanceMatrix

log = logging.getLogger("Ptolab.CLI")

FORMATS = ("json", "csv", "text")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
EXAMPLE_KINDS = ("glued", "six-point", "frame", "kovalev", "path", "cycle", "star", "tree",
                 "ultrametric", "l1-net", "h2-net", "random")
FAMILY_KINDS = ("kovalev", "path", "cycle", "l1-net")
DEFAULT_SCAN_STEPS = 7

# keys of the parsed namespace that RunConfig holds as fields
_COMMON = ("command", "inputs", "out", "format", "pdf", "seed", "threads", "log_level")


@dataclass
class RunConfig:
    command: str
    inputs: List[str] = field(default_factory=list)
    params: Dict[str, Any] = field(default_factory=dict)
    out: Optional[str] = None
    fmt: str = "json"
    pdf: Optional[str] = None
    seed: int = 0
    threads: int = 0
    log_level: str = "INFO"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise PreconditionError(f"Unknown command '{self.command}' (known: {sorted(COMMANDS)})")
        if self.fmt not in FORMATS:
            raise PreconditionError(f"Unknown format '{self.fmt}' (expected one of {FORMATS})")
        if self.fmt == "text" and self.command != "check":
            raise PreconditionError("Text output is only available for 'check'")
        if not self.threads or self.threads < 1:
            self.threads = default_threads()
        if self.seed < 0:
            raise PreconditionError(f"Seed must be nonnegative, got {self.seed}")
        self.log_level = self.log_level.upper()
        if self.log_level not in LOG_LEVELS:
            raise PreconditionError(f"Unknown log level '{self.log_level}'")

    def param(self, name: str, default: Any = None) -> Any:
        value = self.params.get(name)
        return default if value is None else value

    @property
    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


# ---------------- output ----------------

def _write_text(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _emit(
    cfg: RunConfig,
    payload: Dict[str, Any],
    table: Optional[tuple] = None,
    matrix: Optional[DistanceMatrix] = None,
    title: str = "",
    notes: Sequence[str] = (),
    with_pdf: bool = True,
) -> None:
    """Write the report in the requested format; `table` is (columns, rows)."""
    if cfg.fmt == "csv":
        buf = io.StringIO()
        if matrix is not None:
            write_matrix_csv(matrix, buf)
        elif table is not None:
            write_table_csv(table[0], table[1], buf)
        else:
            raise PreconditionError(f"'{cfg.command}' has no table or matrix for CSV output")
        _write_text(cfg, buf.getvalue())
    else:
        _write_text(cfg, dumps_report(cfg.command, payload))

    if cfg.pdf and with_pdf:
        if table is None:
            raise PreconditionError(f"'{cfg.command}' has no table for a PDF report")
        write_table_pdf(title or f"ptolab {cfg.command}", table[0], table[1], cfg.pdf, notes=notes)
        log.info(f"PDF report written to {cfg.pdf}")


def _status(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_CHECK_FAILED


# ---------------- inputs ----------------

def _read_matrix(path: str) -> DistanceMatrix:
    if path == "-":
        return parse_matrix(sys.stdin.buffer.read())
    return load_matrix(path)


def _load_one(cfg: RunConfig) -> DistanceMatrix:
    if len(cfg.inputs) != 1:
        raise PreconditionError(f"'{cfg.command}' takes exactly one matrix file, got {len(cfg.inputs)}")
    return _read_matrix(cfg.inputs[0])


def _float_list(raw: Optional[str], name: str) -> Optional[List[float]]:
    if raw is None:
        return None
    try:
        return [float(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise PreconditionError(f"{name} must be a comma-separated list of numbers, got '{raw}'") from None


def _int_list(raw: Optional[str], name: str) -> Optional[List[int]]:
    values = _float_list(raw, name)
    if values is None:
        return None
    if any(v != int(v) for v in values):
        raise PreconditionError(f"{name} must be integers, got '{raw}'")
    return [int(v) for v in values]


# ---------------- commands ----------------

@safe_command
def cmd_check(cfg: RunConfig) -> int:
    D = _load_one(cfg)
    names = cfg.param("checks") or list(DEFAULT_CHECKS)
    if "all" in names:
        names = [c.name for c in PIPELINE]
    tol = cfg.param("tol", default_tol())
    eq_tol = cfg.param("eq_tol", default_eq_tol())
    selection = run_checks(D, names, tol=tol, eq_tol=eq_tol, threads=cfg.threads,
                           involution_limit=cfg.param("involution_centers"))

    if cfg.fmt == "text":
        _write_text(cfg, format_report(selection, title=f"Checks for {cfg.inputs[0]}") + "\n")
    else:
        payload = {
            "input": cfg.inputs[0],
            "n": D.n,
            "tol": tol,
            "eq_tol": eq_tol,
            "passed": selection.passed,
            "alerts": selection.alerts,
            "findings": selection.findings,
        }
        rows = [[f.name, f.passed, f.summary] for f in selection.findings]
        _emit(cfg, payload, table=(["check", "passed", "summary"], rows), with_pdf=False)
    if cfg.pdf:
        create_pdf_report(selection, cfg.pdf, title=f"Checks for {cfg.inputs[0]}")
    return _status(selection.passed)


@safe_command
def cmd_metrize(cfg: RunConfig) -> int:
    D = _load_one(cfg)
    power = cfg.param("power", 1.0)
    rho = D if power == 1.0 else snowflake(D, power)
    Q = quasi_metric_space(rho)
    result = chain_metric(Q)
    payload = {
        "input": cfg.inputs[0],
        "power": power,
        "K": Q.K,
        "distortion": result.distortion,
        "witness_pair": result.witness_pair,
        "ca": result.ca,
    }
    ok = True
    if cfg.param("frink", False):
        if Q.K <= FRINK_MAX_K + 1e-12:
            ok = frink_bound_check(Q)
            payload["frink_ok"] = ok
        else:
            log.warning(f"Frink bound needs K <= 2, this kernel has K = {Q.K:.6g}; skipped")
            payload["frink_ok"] = None
    _emit(cfg, payload, matrix=result.ca)
    return _status(ok)


def _family(kind: str, sizes: Sequence[int], dim: int) -> List[DistanceMatrix]:
    builders: Dict[str, Callable[[int], DistanceMatrix]] = {
        "kovalev": kovalev_metric,
        "path": path_metric,
        "cycle": cycle_metric,
        "l1-net": lambda k: l1_lattice_net(k, dim),
    }
    return [builders[kind](n) for n in sizes]


@safe_command
def cmd_distortion_curve(cfg: RunConfig) -> int:
    grid = _float_list(cfg.param("s_grid"), "--s-grid")
    family_kind = cfg.param("family")
    if family_kind:
        sizes = _int_list(cfg.param("sizes"), "--sizes") or [25, 50, 100, 200]
        family = _family(family_kind, sizes, cfg.param("dim", 2))
    else:
        if not cfg.inputs:
            raise PreconditionError("distortion-curve needs matrix files or --family")
        family = [_read_matrix(p) for p in cfg.inputs]

    if len(family) == 1:
        curve = distortion_curve(family[0], grid, threads=cfg.threads)
        rows = [[s, c, pair] for s, c, pair in zip(curve.s_values, curve.c_values, curve.witness_pairs)]
        _emit(cfg, {"curve": curve}, table=(["s", "distortion", "witness_pair"], rows),
              title="Distortion curve", notes=curve.findings)
        return EXIT_OK

    threshold = cfg.param("threshold", 1.1)
    est = estimate_critical_exponent(family, grid, divergence_threshold=threshold, threads=cfg.threads)
    rows = [[c.size, s, v] for c in est.curves for s, v in zip(c.s_values, c.c_values)]
    payload = {
        "family": family_kind or list(cfg.inputs),
        "lower": est.lower,
        "upper": est.upper,
        "infinite": est.infinite,
        "heuristic": est.heuristic,
        "divergence_threshold": est.divergence_threshold,
        "sizes": est.sizes,
        "curvature_bound": est.curvature_bound,
        "curves": est.curves,
    }
    upper = "infinite" if est.upper is None else f"{est.upper:g}"
    notes = [f"Critical exponent bracket: lower {est.lower}, upper {upper} (heuristic)"]
    _emit(cfg, payload, table=(["size", "s", "distortion"], rows), title="Critical exponent estimate", notes=notes)
    return EXIT_OK


@safe_command
def cmd_hyperbolicity(cfg: RunConfig) -> int:
    D = _load_one(cfg)
    report = delta_global(D, threads=cfg.threads)
    payload: Dict[str, Any] = {"input": cfg.inputs[0], "report": report}
    ok = report.doubling_ok

    o = cfg.param("basepoint")
    if o is not None:
        at = delta_at_basepoint(D, o)
        K = boundary_quasimetric(D, o).K
        k_ok = k_bound_holds(D, o)
        payload["basepoint"] = {"report": at, "boundary_K": K, "exp_delta": math.exp(at.delta), "k_bound_ok": k_ok}
        ok = ok and k_ok
        o2 = cfg.param("basepoint2")
        if o2 is not None:
            payload["basepoint"]["identity_defect"] = basepoint_change_identity_check(D, o, o2)

    rows = [[b, d] for b, d in report.delta_per_basepoint.items()]
    _emit(cfg, payload, table=(["basepoint", "delta"], rows), title="Gromov hyperbolicity")
    return _status(ok)


def _example_matrix(cfg: RunConfig, kind: str) -> tuple[DistanceMatrix, Dict[str, Any]]:
    rng = cfg.rng
    extra: Dict[str, Any] = {}
    if kind == "glued":
        a = cfg.param("a", math.sqrt(0.5))
        b = cfg.param("b", math.sqrt(0.5))
        B = glued_quadrilateral(a, b)
        extra = {"a": a, "b": b, "basepoint": B.basepoint, "cone_angle": B.cone_angle}
        return B.matrix, extra
    if kind == "six-point":
        a, b, c = cfg.param("a", 1.0), cfg.param("b", 1.0), cfg.param("c", 1.0)
        return six_point_example(a, b, c), {"a": a, "b": b, "c": c}
    if kind == "frame":
        dim = cfg.param("dim", 3)
        return bourdon_metric(orthogonal_frame_config(dim)).matrix, {"dim": dim}
    if kind == "kovalev":
        return kovalev_metric(cfg.param("n", 100)), {}
    if kind == "path":
        return path_metric(cfg.param("n", 10)), {}
    if kind == "cycle":
        return cycle_metric(cfg.param("n", 6)), {}
    if kind == "star":
        return star_metric(cfg.param("k", 4)), {}
    if kind == "tree":
        return random_tree_metric(cfg.param("n", 8), rng), {"seed": cfg.seed}
    if kind == "ultrametric":
        return random_ultrametric(cfg.param("n", 8), rng), {"seed": cfg.seed}
    if kind == "l1-net":
        k, dim = cfg.param("k", 3), cfg.param("dim", 2)
        return l1_lattice_net(k, dim), {"k": k, "dim": dim}
    if kind == "h2-net":
        radius, rings, spokes = cfg.param("radius", 3.0), cfg.param("rings", 3), cfg.param("spokes", 8)
        return hyperbolic_disk_net(radius, rings, spokes), {"radius": radius, "rings": rings, "spokes": spokes}
    if kind == "random":
        kind_ = cfg.param("metric_kind", "uniform")
        return random_metric(cfg.param("n", 6), rng, kind=kind_), {"kind": kind_, "seed": cfg.seed}
    raise PreconditionError(f"Unknown example kind '{kind}' (known: {EXAMPLE_KINDS})")


@safe_command
def cmd_examples(cfg: RunConfig) -> int:
    kind = cfg.param("kind")
    steps = cfg.param("scan")
    if kind == "six-point" and steps is not None:
        if steps < 1:
            raise PreconditionError(f"--scan needs at least one step, got {steps}")
        grid = np.linspace(SCAN_RANGE[0], SCAN_RANGE[1], steps).tolist()
        rows = admissible_parameter_scan(grid)
        cols = ["a", "b", "c", "is_metric", "ptolemaic", "admissible", "triangle_witness", "ptolemy_witness"]
        table_rows = [[r.a, r.b, r.c, r.is_metric, r.ptolemaic, r.admissible, r.triangle_witness, r.ptolemy_witness]
                      for r in rows]
        payload = {"kind": kind, "grid": grid, "admissible": sum(r.admissible for r in rows), "rows": rows}
        _emit(cfg, payload, table=(cols, table_rows), title="Six-point parameter scan")
        return EXIT_OK

    D, extra = _example_matrix(cfg, kind)
    payload = {"kind": kind, "matrix": D}
    payload.update(extra)
    _emit(cfg, payload, matrix=D)
    return EXIT_OK


_EXPERIMENT_COLUMNS = ["m", "n", "c", "b", "best_diagonal", "diagonal_bound", "long_pair_lower_bound",
                       "constraint_lhs", "constraint_rhs", "constraint_slack", "required_c", "implied_c"]


@safe_command
def cmd_cube(cfg: RunConfig) -> int:
    q = cfg.param("q", 0.8)
    strategy = cfg.param("strategy", "inductive")
    size_limit = cfg.param("size_limit", MAX_SLICE_SIZE)
    target: Any = cfg.param("target", "euclidean-snowflake")
    if cfg.inputs:
        target = _load_one(cfg)

    m_list = _int_list(cfg.param("experiment"), "--experiment")
    if m_list:
        exp = snowflake_obstruction_experiment(q, m_list, target_builder=target, strategy=strategy,
                                               threads=cfg.threads, size_limit=size_limit)
        rows = [[r.m, r.n, r.c, r.b, r.best_diagonal, r.diagonal_bound, r.long_pair_lower_bound,
                 r.constraint_lhs, r.constraint_rhs, r.constraint_slack, r.required_c, r.implied_c] for r in exp.rows]
        notes = [f"q = {q:g}, strategy {strategy}"] + [f"{k}: {v}" for k, v in sorted(exp.verdict.items())]
        _emit(cfg, {"experiment": exp}, table=(_EXPERIMENT_COLUMNS, rows),
              title="Cube snowflake obstruction experiment", notes=notes)
        return _status(bool(exp.verdict.get("all_satisfied")))

    m = cfg.param("m", 2)
    inst = build_instance(m, q, target, size_limit=size_limit)
    witness = find_short_diagonal(inst.target, m, b=inst.b, strategy=strategy, threads=cfg.threads,
                                  sample=cfg.param("sample"), rng=cfg.rng)
    payload = {
        "m": m, "n": inst.n, "q": q, "c": inst.c, "b": inst.b,
        "witness": witness, "qualifies": witness.qualifies,
    }
    row = [m, inst.n, q, inst.c, inst.b, witness.K, witness.length, witness.bound, witness.qualifies]
    cols = ["m", "n", "q", "c", "b", "K", "diagonal", "bound", "qualifies"]
    _emit(cfg, payload, table=(cols, [row]), title="Short diagonal")
    return _status(witness.qualifies)


_PAIR_COLUMNS = ["i", "j", "l1", "image", "ratio"]


@safe_command
def cmd_embed(cfg: RunConfig) -> int:
    count, dim = cfg.param("points", 100), cfg.param("dim", 3)
    N, scale = cfg.param("resolution", 512), cfg.param("scale", 0.25)
    rng = cfg.rng
    Z = sample_l1_ball(count, dim, rng)
    emb = composite_embedding(Z, N, scale=scale, threads=cfg.threads)

    S = emb.sphere.coords
    roundtrip = float(np.abs(inverse_stereographic(stereographic(S)) - S).max())
    planar = scale * ball_snowflake(Z, N)
    mobius_defect = mobius_check_map(inverse_stereographic, planar, quadruples=cfg.param("quadruples", 1000), rng=rng)

    payload = {
        "points": count, "dim": dim, "resolution": N, "scale": scale,
        "fitted_exponent": emb.fitted_exponent,
        "constant": emb.constant,
        "ptolemy": emb.ptolemy,
        "stereographic_roundtrip_error": roundtrip,
        "cross_ratio_defect": mobius_defect,
    }
    pairs = pair_table(emb, cfg.param("pairs", 20), rng)
    payload["pairs"] = [dict(zip(_PAIR_COLUMNS, row)) for row in pairs]
    notes = [f"{count} points in the l1 ball of R^{dim}, N = {N}, scale {scale:g}",
             f"fitted exponent {emb.fitted_exponent}, constant {emb.constant:.6g}"]
    _emit(cfg, payload, table=(_PAIR_COLUMNS, pairs), title="Sphere embedding: sampled pairs", notes=notes)
    return _status(emb.ptolemy.satisfied)


@safe_command
def cmd_involute(cfg: RunConfig) -> int:
    D = _load_one(cfg)
    z = cfg.param("at")
    Dz = involute(D, z)
    axioms = check_metric_axioms(Dz, limit=1)
    payload = {"input": cfg.inputs[0], "at": z, "is_metric": axioms.is_metric,
               "violation": axioms.violations[0] if axioms.violations else None, "matrix": Dz}
    _emit(cfg, payload, matrix=Dz)
    return EXIT_OK


@safe_command
def cmd_snowflake(cfg: RunConfig) -> int:
    D = _load_one(cfg)
    q = cfg.param("q")
    Dq = snowflake(D, q)
    report = ptolemy_check(Dq, threads=cfg.threads)
    payload = {
        "input": cfg.inputs[0], "q": q,
        "K": quasi_metric_space(Dq).K,
        "is_metric": check_metric_axioms(Dq, limit=1).is_metric,
        "ptolemaic": report.satisfied,
        "matrix": Dq,
    }
    _emit(cfg, payload, matrix=Dq)
    return EXIT_OK


@safe_command
def cmd_mobius(cfg: RunConfig) -> int:
    if len(cfg.inputs) != 2:
        raise PreconditionError(f"mobius compares exactly two matrix files, got {len(cfg.inputs)}")
    D, E = (_read_matrix(p) for p in cfg.inputs)
    report = mobius_equivalent(D, E, tol=cfg.param("tol", default_tol()))
    payload = {"inputs": list(cfg.inputs), "report": report}
    row = [report.equivalent, report.witness, report.value, report.other_value, report.max_relative_defect]
    _emit(cfg, payload, table=(["equivalent", "witness", "value", "other_value", "max_relative_defect"], [row]),
          title="Moebius equivalence")
    return _status(report.equivalent)


@safe_command
def cmd_suite(cfg: RunConfig) -> int:
    result = run_suite(cfg.param("name"), cfg.param("count"), seed=cfg.seed, threads=cfg.threads)
    payload = {"result": result, "passed": result.passed}
    row = [result.name, result.count, result.failures, result.worst, result.seed, result.passed]
    _emit(cfg, payload, table=(["suite", "count", "failures", "worst", "seed", "passed"], [row]),
          title=f"Suite {result.name}")
    return _status(result.passed)


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "check": cmd_check,
    "metrize": cmd_metrize,
    "distortion-curve": cmd_distortion_curve,
    "hyperbolicity": cmd_hyperbolicity,
    "examples": cmd_examples,
    "cube": cmd_cube,
    "embed": cmd_embed,
    "involute": cmd_involute,
    "snowflake": cmd_snowflake,
    "mobius": cmd_mobius,
    "suite": cmd_suite,
}


def run(cfg: RunConfig) -> int:
    log.debug(f"Running {cfg.command} inputs={cfg.inputs} params={cfg.params} seed={cfg.seed} threads={cfg.threads}")
    return COMMANDS[cfg.command](cfg)


# ---------------- parser ----------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=0, help="worker threads (default: PTOLAB_THREADS or 1)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized inputs")
    common.add_argument("--log-level", default="INFO", choices=LOG_LEVELS, help="console log level")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", default="json", choices=FORMATS, help="report format")
    common.add_argument("--pdf", default=None, help="also write a PDF report here")

    p = argparse.ArgumentParser(prog="ptolab", description="Ptolemy inequality and boundary metric laboratory")
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("check", parents=[common], help="run checks on a distance matrix")
    pc.add_argument("inputs", nargs=1, metavar="MATRIX")
    for flag, name in (("--metric", "metric"), ("--quasi", "quasi"), ("--ptolemy", "ptolemy"),
                       ("--involution", "involution"), ("--normal-form", "normal-form"), ("--all", "all")):
        pc.add_argument(flag, dest="checks", action="append_const", const=name)
    pc.add_argument("--tol", type=float, default=None)
    pc.add_argument("--eq-tol", type=float, default=None)
    pc.add_argument("--involution-centers", type=int, default=None, help="check d_z only for the first N labels")

    pm = sub.add_parser("metrize", parents=[common], help="chain-approach metric of d^power")
    pm.add_argument("inputs", nargs=1, metavar="MATRIX")
    pm.add_argument("--power", type=float, default=1.0)
    pm.add_argument("--frink", action="store_true", help="check the factor-4 bound (needs K <= 2)")

    pd_ = sub.add_parser("distortion-curve", parents=[common], help="distortion of ca(d^s) over an exponent grid")
    pd_.add_argument("inputs", nargs="*", metavar="MATRIX", help="one matrix, or a family ordered by size")
    pd_.add_argument("--s-grid", default=None, help="comma-separated exponents")
    pd_.add_argument("--family", choices=FAMILY_KINDS, default=None, help="built-in family instead of files")
    pd_.add_argument("--sizes", default=None, help="comma-separated family sizes")
    pd_.add_argument("--dim", type=int, default=None)
    pd_.add_argument("--threshold", type=float, default=None, help="divergence threshold for the bracket")

    ph = sub.add_parser("hyperbolicity", parents=[common], help="Gromov delta per basepoint and globally")
    ph.add_argument("inputs", nargs=1, metavar="MATRIX")
    ph.add_argument("--basepoint", default=None)
    ph.add_argument("--basepoint2", default=None, help="second basepoint for the change-of-basepoint identity")

    pe = sub.add_parser("examples", parents=[common], help="generate example spaces")
    pe.add_argument("kind", choices=EXAMPLE_KINDS)
    pe.add_argument("--a", type=float, default=None)
    pe.add_argument("--b", type=float, default=None)
    pe.add_argument("--c", type=float, default=None)
    pe.add_argument("--n", type=int, default=None)
    pe.add_argument("--k", type=int, default=None)
    pe.add_argument("--dim", type=int, default=None)
    pe.add_argument("--radius", type=float, default=None)
    pe.add_argument("--rings", type=int, default=None)
    pe.add_argument("--spokes", type=int, default=None)
    pe.add_argument("--metric-kind", choices=("uniform", "closure"), default=None)
    pe.add_argument("--scan", type=int, nargs="?", const=DEFAULT_SCAN_STEPS, default=None,
                    help="six-point only: scan a = b = c grids over [0.5, 2] with this many steps")

    pk = sub.add_parser("cube", parents=[common], help="short diagonal search on slice targets")
    pk.add_argument("inputs", nargs="?", metavar="TARGET", type=lambda s: [s], default=[])
    pk.add_argument("--m", type=int, default=None)
    pk.add_argument("--q", type=float, default=None)
    pk.add_argument("--target", choices=sorted(TARGET_BUILDERS), default=None)
    pk.add_argument("--strategy", choices=("inductive", "brute"), default=None)
    pk.add_argument("--sample", type=int, default=None, help="brute only: random multiindices to try")
    pk.add_argument("--size-limit", type=int, default=None)
    pk.add_argument("--experiment", default=None, help="comma-separated m values for the obstruction experiment")

    pb = sub.add_parser("embed", parents=[common], help="snowflake of the l1 ball into the sphere")
    pb.add_argument("--points", type=int, default=None)
    pb.add_argument("--dim", type=int, default=None)
    pb.add_argument("--resolution", "-N", type=int, default=None)
    pb.add_argument("--scale", type=float, default=None)
    pb.add_argument("--quadruples", type=int, default=None)
    pb.add_argument("--pairs", type=int, default=None, help="sampled pairs in the report table")

    pi = sub.add_parser("involute", parents=[common], help="involution d_z of a matrix")
    pi.add_argument("inputs", nargs=1, metavar="MATRIX")
    pi.add_argument("--at", required=True, help="label of the center z")

    ps = sub.add_parser("snowflake", parents=[common], help="d^q of a matrix")
    ps.add_argument("inputs", nargs=1, metavar="MATRIX")
    ps.add_argument("--q", type=float, required=True)

    pmb = sub.add_parser("mobius", parents=[common], help="compare cross ratios of two matrices")
    pmb.add_argument("inputs", nargs=2, metavar="MATRIX")
    pmb.add_argument("--tol", type=float, default=None)

    pu = sub.add_parser("suite", parents=[common], help="seeded randomized property suites")
    pu.add_argument("name", choices=sorted(SUITES))
    pu.add_argument("--count", type=int, default=None)

    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    ns = vars(args)
    params = {k: v for k, v in ns.items() if k not in _COMMON}
    return RunConfig(
        command=args.command,
        inputs=list(ns.get("inputs") or []),
        params=params,
        out=args.out,
        fmt=args.format,
        pdf=args.pdf,
        seed=args.seed,
        threads=args.threads,
        log_level=args.log_level,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except PreconditionError as e:
        parser.error(str(e))
    setup_logging(level=getattr(logging, cfg.log_level))
    install_crash_handlers()
    return run(cfg)
