"""``phase-lab`` command line front end.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 a ``--check``
threshold was violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .checks import run_selftest
from .config import COMMANDS, RunConfig, parse_beta_range
from .errors import NumericalError, TruncationWarning, ValidationError
from .holonomy import PhaseReport, berry_phase_wilson, correspondence_check, phase_report, worker_count
from .phases import circle_distance
from .purify import transport_purification

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_CHECK = 0, 2, 3, 4
CSV_HEADER = (
    "beta",
    "theta_u_numeric",
    "theta_u_closed",
    "theta_b_numeric",
    "theta_b_closed",
    "err_closed",
    "err_correspondence",
    "K",
    "Ncut",
    "estimator",
    "unitarity_defect",
)
CHECK_TOL = 1e-3
PURIFY_TOL = 1e-8


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def format_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in reports:
        writer.writerow(
            _cell(v)
            for v in (
                r.beta,
                r.theta_u_numeric,
                r.theta_u_closed,
                r.theta_b_numeric,
                r.theta_b_closed,
                r.err_closed,
                r.err_correspondence,
                r.K,
                r.n_cut,
                r.estimator,
                r.unitarity_defect,
            )
        )
    return buf.getvalue()


def emit_csv(reports, path) -> Path:
    """Write reports as UTF-8 CSV with LF endings. Refuses an empty list."""
    reports = list(reports)
    if not reports:
        raise ValidationError("no reports to write")
    path = Path(path)
    text = format_csv(reports)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def summary_table(reports) -> str:
    def fmt(x):
        return "-" if x is None else f"{x: .6f}"

    lines = [f"{'beta':>10} {'theta_u':>10} {'closed':>10} {'theta_b':>10} {'err_closed':>10} {'err_corr':>10}"]
    for r in reports:
        err_c = "-" if r.err_closed is None else f"{r.err_closed:.2e}"
        err_k = "-" if r.err_correspondence is None else f"{r.err_correspondence:.2e}"
        lines.append(
            f"{r.beta:>10.4g} {fmt(r.theta_u_numeric):>10} {fmt(r.theta_u_closed):>10} "
            f"{fmt(r.theta_b_numeric):>10} {err_c:>10} {err_k:>10}"
        )
    return "\n".join(lines)


# commands -------------------------------------------------------------------------
def _scalar(x):
    return None if x is None else (float(x.czz.real) if hasattr(x, "czz") else float(x))


def berry_reports(cfg: RunConfig) -> list[PhaseReport]:
    loop = cfg.build_loop()
    out = []
    for beta in cfg.betas:
        model = cfg.build_model(beta)
        theta_b = _scalar(berry_phase_wilson(model, loop, cfg.level))
        try:
            closed = _scalar(model.closed_form_phase(loop, cfg.level).theta_b)
        except ValidationError:
            closed = None
        err = None
        if closed is not None:
            err = abs(theta_b - closed) if model.grassmann else circle_distance(theta_b, closed)
        out.append(PhaseReport(beta, None, None, theta_b, closed, err, None, cfg.K,
                               getattr(model, "n_cut", None), cfg.estimator, 0.0, model.kind))
    return out


def uhlmann_reports(cfg: RunConfig) -> list[PhaseReport]:
    loop = cfg.build_loop()

    def job(beta):
        return phase_report(cfg.build_model(beta), loop, cfg.K, cfg.estimator, cfg.source, cfg.level)

    with ThreadPoolExecutor(max_workers=worker_count(len(cfg.betas))) as pool:
        return list(pool.map(job, cfg.betas))


def correspondence_reports(cfg: RunConfig) -> list[PhaseReport]:
    return correspondence_check(cfg.build_model(), cfg.build_loop(), cfg.betas, cfg.K, cfg.estimator, cfg.source)


def purify_reports(cfg: RunConfig) -> tuple[list[PhaseReport], list]:
    loop = cfg.build_loop()
    reports, traces = [], []
    for beta in cfg.betas:
        model = cfg.build_model(beta)
        tr = transport_purification(model, loop, cfg.K, cfg.source)
        try:
            closed = _scalar(model.closed_form_phase(loop).theta_u)
        except ValidationError:
            closed = None
        err = None if closed is None else circle_distance(tr.theta_u, closed)
        reports.append(PhaseReport(beta, tr.theta_u, closed, None, None, err, None, cfg.K,
                                   getattr(model, "n_cut", None), "connection_product", 0.0, model.kind))
        traces.append(tr)
    return reports, traces


def _violations(cfg: RunConfig, reports) -> list[str]:
    bad = []
    if cfg.command == "correspondence":
        last = reports[-1]
        if last.excluded:
            return bad
        if last.err_correspondence is None or not last.err_correspondence < CHECK_TOL:
            bad.append(f"err_correspondence {last.err_correspondence} at beta={last.beta:g} not < {CHECK_TOL:g}")
        if last.premise_defect is not None and not last.premise_defect < 1e-4:
            bad.append(f"zero-temperature premise defect {last.premise_defect:.2e} not < 1e-4")
    else:
        for r in reports:
            if r.err_closed is not None and not r.err_closed < CHECK_TOL:
                bad.append(f"err_closed {r.err_closed:.2e} at beta={r.beta:g} not < {CHECK_TOL:g}")
    return bad


# argument handling ------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phase-lab", description="Berry and Uhlmann phase experiments.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON run configuration; flags override its values")
    p.add_argument("--model", choices=("boson", "fermion", "spin", "unitary_family", "one_dim"))
    p.add_argument("--omega", type=float)
    p.add_argument("--omega0", type=float)
    p.add_argument("--j", type=float)
    p.add_argument("--Ncut", dest="n_cut", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--gap", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--loop", help="circle:<c>,<r>,<w> | latitude:<theta0>,<w> | equator | "
                                  "longitude:<phi0>[,<w>] | polygon:<z1;z2;...>")
    p.add_argument("--beta", type=float, nargs="+", help="one or more ascending beta values")
    p.add_argument("--beta-range", help="a:b:logN or a:b:N")
    p.add_argument("--K", type=int)
    p.add_argument("--estimator", choices=("connection_product", "polar_isometry"))
    p.add_argument("--source", choices=("analytic", "numeric"))
    p.add_argument("--level", type=int)
    p.add_argument("--output", help="CSV path")
    p.add_argument("--check", action="store_true", default=None, help="exit 4 if acceptance thresholds fail")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    base = RunConfig()
    if args.config:
        try:
            base = RunConfig.from_json(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ValidationError(f"cannot read config: {exc}") from None
    if args.beta and args.beta_range:
        raise ValidationError("use either --beta or --beta-range, not both")
    betas = tuple(args.beta) if args.beta else (parse_beta_range(args.beta_range) if args.beta_range else None)
    overrides = {
        "command": args.command,
        "model": args.model,
        "omega": args.omega,
        "omega0": args.omega0,
        "j": args.j,
        "n_cut": args.n_cut,
        "dim": args.dim,
        "gap": args.gap,
        "seed": args.seed,
        "loop": args.loop,
        "betas": betas,
        "K": args.K,
        "estimator": args.estimator,
        "source": args.source,
        "level": args.level,
        "output": args.output,
        "check": args.check,
    }
    return base.merged(overrides).validate()


def run(cfg: RunConfig, out=None) -> int:
    out = sys.stdout if out is None else out
    if cfg.command == "selftest":
        results = run_selftest(cfg.seed)
        for r in results:
            print(r.line(), file=out)
        return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        if cfg.command == "berry":
            reports = berry_reports(cfg)
        elif cfg.command == "uhlmann":
            reports = uhlmann_reports(cfg)
        elif cfg.command == "correspondence":
            reports = correspondence_reports(cfg)
        else:
            reports, traces = purify_reports(cfg)
    print(summary_table(reports), file=out)
    bad = []
    if cfg.command == "purify-check":
        for r, tr in zip(reports, traces):
            gap = circle_distance(tr.theta_u, tr.trace_theta_u)
            print(f"beta={r.beta:g} max_residual={tr.max_residual:.3e} max_phase_residual="
                  f"{tr.phase_residuals.max():.3e} overlap_vs_trace={gap:.2e} "
                  f"partial_trace_defect={tr.partial_trace_defect:.2e}", file=out)
            if not gap < PURIFY_TOL:
                bad.append(f"overlap phase differs from trace phase by {gap:.2e} at beta={r.beta:g}")
            if not tr.partial_trace_defect < PURIFY_TOL:
                bad.append(f"partial trace defect {tr.partial_trace_defect:.2e} at beta={r.beta:g}")
    if cfg.output:
        try:
            emit_csv(reports, cfg.output)
        except OSError as exc:
            raise ValidationError(f"cannot write {cfg.output}: {exc}") from None
    if cfg.check:
        bad += _violations(cfg, reports)
        for msg in bad:
            print(f"check failed: {msg}", file=sys.stderr)
        if bad:
            return EXIT_CHECK
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return run(cfg)
    except ValidationError as exc:
        print(f"phase-lab: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"phase-lab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
