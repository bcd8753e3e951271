"""Command-line front end.

Subcommands: ``spectrum``, ``classify``, ``perturb``, ``transform``, ``scan``,
``convergence``. Exit codes: 0 success, 2 invalid input or parameter region,
3 numerical non-convergence.

Settings may also come from ``--config FILE``, a plain ``key = value`` file
(``#`` starts a comment, keys are the long flag names without dashes, e.g.
``alpha = 0.5`` or ``conv-tol = 1e-9``). Precedence: flags > config > defaults.
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from . import fock_matrix as fm
from . import report
from .errors import InvalidInput, InvalidRegion, NumericalFailure, SwansonError
from .model import (
    CLASSIFY_TOL,
    SpectrumClass,
    SwansonParams,
    build_swanson,
    classify,
    exact_energy,
)
from .perturbation import MAX_ORDER, MIN_DIAGNOSTIC_ORDER, convergence_diagnostic, rs_corrections
from .quad_ops import exact_spectrum, is_hermitian, to_phase_basis
from .transforms import case1_hermitize, case2_chain

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3
DEFAULT_MAX_POINTS = 1_000_000


# -- scan grid -----------------------------------------------------------------


@dataclass(frozen=True)
class Axis:
    lo: float
    hi: float
    step: float | None = None

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """``"2"`` (fixed) or ``"min:max:step"``."""
        parts = str(text).split(":")
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad axis spec {text!r}") from None
        if len(values) == 1:
            return cls(values[0], values[0])
        if len(values) != 3:
            raise argparse.ArgumentTypeError(f"axis spec must be VALUE or MIN:MAX:STEP, got {text!r}")
        lo, hi, step = values
        if not all(math.isfinite(v) for v in values):
            raise argparse.ArgumentTypeError(f"non-finite axis spec {text!r}")
        if step <= 0:
            raise argparse.ArgumentTypeError(f"step must be > 0 in {text!r}")
        if lo > hi:
            raise argparse.ArgumentTypeError(f"min > max in {text!r}")
        return cls(lo, hi, step)

    def count(self) -> int:
        if self.step is None:
            return 1
        return int(math.floor((self.hi - self.lo) / self.step + 1e-9)) + 1

    def values(self) -> np.ndarray:
        return self.lo + self.step * np.arange(self.count()) if self.step else np.array([self.lo])

    def describe(self) -> str:
        if self.step is None:
            return report.fmt_float(self.lo)
        return ":".join(report.fmt_float(v) for v in (self.lo, self.hi, self.step))


@dataclass(frozen=True)
class ScanGrid:
    w: Axis
    alpha: Axis
    beta: Axis

    @property
    def point_count(self) -> int:
        return self.w.count() * self.alpha.count() * self.beta.count()

    def points(self):
        """Lexicographic order: w outer, alpha middle, beta inner."""
        for w in self.w.values():
            for a in self.alpha.values():
                for b in self.beta.values():
                    yield (float(w), float(a), float(b))


def classify_record(w: float, alpha: float, beta: float, tol: float = CLASSIFY_TOL) -> tuple:
    p = SwansonParams(w, alpha, beta)
    return (p.w, p.alpha, p.beta, p.omega_squared, p.mass_term, str(classify(p, tol)))


def _classify_chunk(args):
    chunk, tol = args
    return [classify_record(w, a, b, tol) for (w, a, b) in chunk]


def scan_records(grid: ScanGrid, tol: float = CLASSIFY_TOL, jobs: int = 1) -> list[tuple]:
    points = list(grid.points())
    if jobs <= 1 or len(points) < 2048:
        return [classify_record(w, a, b, tol) for (w, a, b) in points]
    size = max(1, len(points) // (4 * jobs))
    chunks = [(points[i : i + size], tol) for i in range(0, len(points), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map() yields in submission order, so rows stay in grid order
        return [row for part in pool.map(_classify_chunk, chunks) for row in part]


CLASSIFY_HEADER = ("w", "alpha", "beta", "omega_squared", "mass_term", "class")


# -- subcommands ---------------------------------------------------------------


def _params(args) -> SwansonParams:
    for name in ("w", "alpha", "beta"):
        if getattr(args, name) is None:
            raise InvalidInput(f"--{name} is required")
    return SwansonParams(args.w, args.alpha, args.beta)


def _params_dict(p: SwansonParams) -> dict:
    return {"w": p.w, "alpha": p.alpha, "beta": p.beta}


def _hermitized_chain(p: SwansonParams, tol: float):
    tag = classify(p, tol)
    if tag is SpectrumClass.REAL_CASE_II:
        return case2_chain(p, tol)
    if tag in (SpectrumClass.REAL_CASE_I, SpectrumClass.HERMITIAN_LIMIT):
        return case1_hermitize(p, tol)
    raise InvalidRegion(f"no hermitizing chain for {tag}")


def cmd_spectrum(args) -> tuple[str, dict]:
    p = _params(args)
    levels = args.levels
    if levels < 1:
        raise InvalidInput("--levels must be >= 1")
    rows = []
    if args.method == "analytic":
        for n in range(levels):
            rows.append((n, exact_energy(p, n, args.tol), 0.0, "analytic", 0.0, True))
    elif args.method == "hermitized":
        chain = _hermitized_chain(p, args.tol)
        energies = exact_spectrum(to_phase_basis(chain.output), levels - 1)
        rows = [(n, e, 0.0, "hermitized", 0.0, True) for n, e in enumerate(energies)]
    else:
        N = args.trunc
        if N < 2 * levels + 2:
            raise InvalidInput(f"--trunc {N} too small for {levels} levels")
        op = build_swanson(p)
        result = fm.eigenvalues(fm.materialize(op, N))
        order = np.lexsort((result.eigenvalues.imag, np.abs(result.eigenvalues.real)))[:levels]
        vals = result.eigenvalues[order]
        resid = result.residuals[order]
        half = fm.lowest_levels(fm.eigenvalues(fm.materialize(op, N // 2)).eigenvalues, levels)
        drift = np.abs(vals - half)
        for n in range(levels):
            rows.append(
                (n, float(vals[n].real), float(vals[n].imag), "raw-fock", float(resid[n]),
                 bool(drift[n] < args.conv_tol))
            )
    header = ("n", "E_real", "E_imag", "method", "residual", "converged")
    if args.format == "json":
        payload = {
            "params": _params_dict(p),
            "method": args.method,
            "rows": [dict(zip(header, r)) for r in rows],
        }
        return report.json_text("spectrum", payload), {}
    return report.csv_text(header, rows), {}


def cmd_classify(args) -> tuple[str, dict]:
    p = _params(args)
    rec = classify_record(p.w, p.alpha, p.beta, args.tol)
    if args.format == "json":
        return report.json_text("classify", dict(zip(CLASSIFY_HEADER, rec))), {}
    return report.csv_text(CLASSIFY_HEADER, [rec]), {}


def cmd_perturb(args) -> tuple[str, dict]:
    p = _params(args)
    if not 0 <= args.order <= MAX_ORDER:
        raise InvalidInput(f"--order must lie in [0, {MAX_ORDER}]")
    series = rs_corrections(p, args.level, args.order)
    try:
        exact = exact_energy(p, args.level, args.tol)
    except SwansonError:
        exact = None
    rows = []
    for k, (e, s) in enumerate(zip(series.orders, series.partial_sums)):
        err = abs(s - exact) if exact is not None else None
        rows.append((k, float(e), float(s), None if err is None else float(err)))
    w, a, b = p.w, p.alpha, p.beta
    diag = {
        "exact_radius_ok": 4 * abs(a * b) < w * w,
        "paper_condition_ok": abs(a / w) < 1 and abs(b / w) < 1,
        "ratio_flag": None,
    }
    if series.max_order >= MIN_DIAGNOSTIC_ORDER:
        d = convergence_diagnostic(series, p)
        diag["ratio_flag"] = d.ratio_flag
    diverging = diag["ratio_flag"] is False or not diag["exact_radius_ok"]
    header = ("k", "E_k", "partial_sum", "abs_error")
    if args.format == "json":
        payload = {
            "params": _params_dict(p),
            "level": args.level,
            "exact": exact,
            "rows": [dict(zip(header, r)) for r in rows],
            "diagnostics": {**diag, "divergence_flagged": diverging},
        }
        return report.json_text("perturb", payload), {}
    footer = [
        f"exact={'' if exact is None else report.fmt_float(exact)}",
        f"ratio_flag={'na' if diag['ratio_flag'] is None else report.fmt_cell(diag['ratio_flag'])}",
        f"exact_radius_ok={report.fmt_cell(diag['exact_radius_ok'])}",
        f"paper_condition_ok={report.fmt_cell(diag['paper_condition_ok'])}",
        f"divergence_flagged={report.fmt_cell(diverging)}",
    ]
    return report.csv_text(header, rows, footer), {}


def cmd_transform(args) -> tuple[str, dict]:
    p = _params(args)
    chain = case1_hermitize(p, args.tol) if args.chain == "case1" else case2_chain(p, args.tol)
    phase = to_phase_basis(chain.output)
    levels = exact_spectrum(phase, max(args.levels - 1, 0))
    slope = levels[1] - levels[0] if len(levels) > 1 else 2 * levels[0]
    doc = chain.to_dict()
    doc.update(
        {
            "chain": args.chain,
            "params": _params_dict(p),
            "hermitian": is_hermitian(chain.output),
            "spectrum_slope": slope,
            "spectrum": levels,
        }
    )
    if args.format == "json":
        return report.json_text("transform", doc), {}
    rows = []
    for i, step in enumerate(chain.steps):
        z = complex(step.parameter)
        rows.append(("step", f"{i}:{step.generator}", z.real, z.imag))
    for section in ("input", "output", "output_phase"):
        for name, val in doc[section].items():
            rows.append((section, name, val["re"], val["im"]))
    rows.append(("verdict", "hermitian", float(doc["hermitian"]), 0.0))
    rows.append(("spectrum", "slope", slope, 0.0))
    for n, e in enumerate(levels):
        rows.append(("spectrum", f"E{n}", e, 0.0))
    return report.csv_text(("section", "name", "re", "im"), rows), {}


def cmd_scan(args) -> tuple[str, dict]:
    grid = ScanGrid(args.w, args.alpha, args.beta)
    if grid.point_count > args.max_points:
        raise InvalidInput(f"grid has {grid.point_count} points, cap is {args.max_points}")
    rows = scan_records(grid, args.tol, args.jobs)
    extra = {"w": grid.w.describe(), "alpha": grid.alpha.describe(), "beta": grid.beta.describe(),
             "points": grid.point_count}
    if args.format == "json":
        return report.json_text("scan", {"grid": extra, "rows": [dict(zip(CLASSIFY_HEADER, r)) for r in rows]}), extra
    return report.csv_text(CLASSIFY_HEADER, rows), extra


def cmd_convergence(args) -> tuple[str, dict]:
    p = _params(args)
    dims = args.dims
    if args.method == "hermitized":
        op = _hermitized_chain(p, args.tol).output
    else:
        op = build_swanson(p)
    try:
        rep = fm.convergence_study(op, dims, k=args.levels, tol=args.conv_tol, jobs=args.jobs)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc
    rows = []
    for i, d in enumerate(rep.drift):
        for n in range(rep.k):
            e = rep.levels[i + 1][n]
            rows.append((rep.dims_tested[i], rep.dims_tested[i + 1], n, float(e.real), float(e.imag),
                         float(d[n]), bool(d[n] < rep.tol)))
    header = ("dim_from", "dim_to", "level", "E_real", "E_imag", "drift", "below_tol")
    if args.format == "json":
        text = report.json_text(
            "convergence",
            {"params": _params_dict(p), "method": args.method, "dims": rep.dims_tested,
             "rows": [dict(zip(header, r)) for r in rows], "stable_levels": rep.stable_levels},
        )
    else:
        text = report.csv_text(header, rows, [f"stable_levels={rep.stable_levels}"])
    return text, {"stable_levels": rep.stable_levels}


# -- argument parsing ----------------------------------------------------------


def _dims(text: str) -> list[int]:
    try:
        return [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must be comma-separated integers, got {text!r}") from None


def _add_common(sp, params=True):
    if params:
        sp.add_argument("--w", type=float)
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--beta", type=float)
    sp.add_argument("--out", default=None, help="output file (default: stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--tol", type=float, default=CLASSIFY_TOL, help="classification tolerance")
    sp.add_argument("--trunc", type=int, default=256, help="Fock truncation dimension")
    sp.add_argument("--jobs", type=int, default=1)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "classify": cmd_classify,
    "perturb": cmd_perturb,
    "transform": cmd_transform,
    "scan": cmd_scan,
    "convergence": cmd_convergence,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swanson", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    parser.subcommands = sub.choices

    sp = sub.add_parser("spectrum", help="energy levels by one of three routes")
    sp.add_argument("--config")
    _add_common(sp)
    sp.add_argument("--levels", type=int, default=5)
    sp.add_argument("--method", choices=("analytic", "raw-fock", "hermitized"), default="analytic")
    sp.add_argument("--conv-tol", type=float, default=1e-8)

    sp = sub.add_parser("classify", help="reality class of one parameter point")
    sp.add_argument("--config")
    _add_common(sp)

    sp = sub.add_parser("perturb", help="Rayleigh-Schrodinger series for one level")
    sp.add_argument("--config")
    _add_common(sp)
    sp.add_argument("--level", type=int, default=0)
    sp.add_argument("--order", type=int, default=12)

    sp = sub.add_parser("transform", help="similarity chain to a Hermitian form")
    sp.add_argument("--config")
    _add_common(sp)
    sp.add_argument("--chain", choices=("case1", "case2"), required=False, default="case1")
    sp.add_argument("--levels", type=int, default=5)

    sp = sub.add_parser("scan", help="classify every point of a parameter grid")
    sp.add_argument("--config")
    _add_common(sp, params=False)
    sp.add_argument("--w", type=Axis.parse, required=False, default=None, help="VALUE or MIN:MAX:STEP")
    sp.add_argument("--alpha", type=Axis.parse, default=None, help="VALUE or MIN:MAX:STEP")
    sp.add_argument("--beta", type=Axis.parse, default=None, help="VALUE or MIN:MAX:STEP")
    sp.add_argument("--max-points", type=int, default=DEFAULT_MAX_POINTS)

    sp = sub.add_parser("convergence", help="truncation convergence study")
    sp.add_argument("--config")
    _add_common(sp)
    sp.add_argument("--dims", type=_dims, default="64,128,256,512")
    sp.add_argument("--levels", type=int, default=5)
    sp.add_argument("--method", choices=("raw-fock", "hermitized"), default="raw-fock")
    sp.add_argument("--conv-tol", type=float, default=1e-8)
    return parser


def read_config(path: str) -> dict[str, str]:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    with open(path) as fh:
        cp.read_string("[swanson]\n" + fh.read())
    return {k.replace("-", "_"): v for k, v in cp["swanson"].items()}


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        config = read_config(args.config)
        sub = parser.subcommands[args.command]
        known = {a.dest for a in sub._actions}
        unknown = set(config) - known
        if unknown:
            parser.error(f"unknown config keys: {', '.join(sorted(unknown))}")
        # string defaults are converted by argparse with each action's type
        sub.set_defaults(**config)
        args = parser.parse_args(argv)
    return args


def resolved_config(args) -> dict:
    cfg = {}
    for key, value in sorted(vars(args).items()):
        if key in ("config", "out"):
            continue
        if isinstance(value, Axis):
            value = value.describe()
        cfg[key] = value
    return cfg


def run(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "scan":
            for name in ("w", "alpha", "beta"):
                if getattr(args, name) is None:
                    raise InvalidInput(f"--{name} is required")
        text, summary = COMMANDS[args.command](args)
        report.emit(text, args.out, args.command, resolved_config(args))
        if args.command == "convergence" and summary.get("stable_levels", 1) == 0:
            print("error: NoConvergedLevels: no level stabilized", file=sys.stderr)
            return EXIT_NUMERICAL
    except NumericalFailure as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InvalidInput, ValueError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
