"""Command-line front end: ``tmbounds {constants,extremal,verify,table}``.

Exit codes: 0 success, 2 domain or configuration error, 3 solver
non-convergence, 4 verification failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .numerics import ConvergenceError, DomainError, Tolerance, ValidationError, alpha_n
from .reports import ChainReport, Step, compare, dumps_csv, dumps_json

EXIT_OK, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_VERIFY = 0, 2, 3, 4
CHAINS = ("critical", "singular", "split-sub", "split-crit", "lemmas", "inequalities")


class ConfigError(ValueError):
    pass


class VerificationFailure(RuntimeError):
    def __init__(self, step: Step):
        super().__init__(f"step {step.name!r} fails: {step.lhs!r} > {step.rhs!r}")
        self.step = step


# ------------------------------------------------------------------ arguments

def _common(p: argparse.ArgumentParser, default_format: str = "json"):
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--format", choices=("json", "csv"), default=default_format)
    p.add_argument("--tol", type=float, default=1e-10, help="relative quadrature tolerance")
    p.add_argument("--config", help="key=value file; command-line flags take precedence")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tmbounds", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="closed-form bound constants for (n, beta, alpha)")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--beta", type=float, default=0.0)
    g = c.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float)
    g.add_argument("--alpha-ratio", type=float, help="alpha / alpha_n")
    _common(c)

    e = sub.add_parser("extremal", help="solve the half-line extremal problem")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--beta", type=float, default=0.0)
    e.add_argument("--method", choices=("shooting", "direct"), default="shooting")
    e.add_argument("--cells", type=int, default=800, help="grid cells of the direct method")
    _common(e)

    v = sub.add_parser("verify", help="evaluate a bound chain step by step")
    v.add_argument("--chain", choices=CHAINS, required=True)
    v.add_argument("--n", type=int, default=4)
    v.add_argument("--beta", type=float, default=0.0)
    g = v.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float)
    g.add_argument("--alpha-ratio", type=float, default=None)
    v.add_argument("--k", type=float, default=None, help="truncated-log parameter for split chains")
    v.add_argument("--delta", type=float, default=0.705)
    v.add_argument("--method", choices=("shooting", "direct"), default="shooting")
    v.add_argument("--solution", help="extremal solution JSON to verify instead of solving")
    v.add_argument("--samples", type=int, default=10_000)
    v.add_argument("--seed", type=int, default=20240601)
    _common(v)

    t = sub.add_parser("table", help="batch of bound rows, optionally with computed S values")
    t.add_argument("--n-range", default="2..6", help="inclusive range like 2..6")
    t.add_argument("--betas", default="0", help="comma-separated beta values")
    t.add_argument("--alpha-ratios", default="", help="comma-separated alpha/alpha_n values")
    t.add_argument("--solve", choices=("none", "shooting", "direct"), default="none")
    t.add_argument("--workers", type=int, default=1)
    _common(t, default_format="csv")
    return ap


def _read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for no, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = val
    return out


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    ap = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config")
    first, _ = pre.parse_known_args(argv)
    if not first.config or first.command not in COMMANDS:
        return ap.parse_args(argv)
    sub = ap._subparsers._group_actions[0].choices[first.command]
    conf = _read_config(first.config)
    known = {a.dest: a for a in sub._actions}
    for key, val in conf.items():
        if key in ("config", "help") or key not in known:
            raise ConfigError(f"unknown config key {key!r} for {first.command}")
        act = known[key]
        if act.choices is not None and act.type is None and val not in act.choices:
            raise ConfigError(f"config key {key!r}: {val!r} not in {sorted(act.choices)}")
        if act.required:
            act.required = False
        act.default = val
    # string defaults are converted by argparse with each action's type
    return ap.parse_args(argv)


# ------------------------------------------------------------------ helpers

def _tol(args) -> Tolerance:
    return Tolerance(rel_tol=args.tol)


def _alpha(args, n) -> float | None:
    if getattr(args, "alpha", None) is not None:
        return float(args.alpha)
    r = getattr(args, "alpha_ratio", None)
    return None if r is None else float(r) * alpha_n(n)


def _emit(text: str, args):
    data = text.encode("utf-8")
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _steps_csv(steps) -> str:
    cols = ["name", "lhs", "rhs", "margin", "holds", "asserted", "note"]
    return dumps_csv(cols, [s.to_json() for s in steps])


# ------------------------------------------------------------------ commands

def cmd_constants(args) -> int:
    from .bounds import BOUNDS_COLUMNS, bounds_row

    row = bounds_row(args.n, args.beta, _alpha(args, args.n))
    if args.format == "json":
        _emit(dumps_json(row.to_json()), args)
    else:
        _emit(dumps_csv(BOUNDS_COLUMNS, [row.to_json()]), args)
    return EXIT_OK


def _solution_csv(sol) -> str:
    rows = [{"t": float(t), "w": float(w), "dw": float(d)}
            for t, w, d in zip(sol.grid, sol.w_values, sol.dw_values)]
    return dumps_csv(["t", "w", "dw"], rows)


def _emit_solution(sol, args):
    if args.format == "json":
        _emit(dumps_json(sol.to_json()), args)
    else:
        _emit(_solution_csv(sol), args)


def cmd_extremal(args) -> int:
    from .extremal import GridSpec, solve_extremal

    try:
        sol = solve_extremal(args.n, args.beta, args.method, _tol(args), GridSpec(cells=args.cells))
    except ConvergenceError as exc:
        if exc.best is not None and hasattr(exc.best, "to_json"):
            _emit_solution(exc.best, args)
        raise
    _emit_solution(sol, args)
    return EXIT_OK


def _load_or_solve(args, beta):
    from .extremal import ExtremalSolution, solve_extremal

    if args.solution:
        import json
        with open(args.solution, encoding="utf-8") as fh:
            return ExtremalSolution.from_json(json.load(fh))
    return solve_extremal(args.n, beta, args.method, _tol(args))


def _split_report(kind, args) -> ChainReport:
    from .functional import FunctionalParams, split_critical, split_subcritical
    from .profiles import truncated_log_radial
    from .reduction import lebesgue_norm_radial

    n, beta, tol = args.n, args.beta, _tol(args)
    if kind == "split-sub":
        alpha = _alpha(args, n)
        alpha = 0.9 * alpha_n(n) if alpha is None else alpha
        k = 10.0 if args.k is None else args.k
        u = truncated_log_radial(n, k)
        rep = split_subcritical(u, FunctionalParams(n, beta, alpha), tol)
        params = {"n": n, "beta": beta, "alpha": alpha, "k": k}
    else:
        k = 8.0 if args.k is None else args.k
        u = truncated_log_radial(n, k)
        s = (1.0 / (1.0 + lebesgue_norm_radial(u, tol))) ** (1.0 / n)
        rep = split_critical(u.scaled(s), FunctionalParams(n, beta), tol)
        params = {"n": n, "beta": beta, "k": k, "scale": s}
    out = ChainReport(kind, params, list(rep.steps))
    out.summary = {k: v for k, v in rep.to_json().items() if k not in ("steps", "schema_version", "kind")}
    return out


def _lemma_report(args) -> ChainReport:
    from .extremal import LEMMA_RADII, lemma_identity_residual, tail_bound_check

    sol = _load_or_solve(args, args.beta)
    tol = _tol(args)
    S = sol.S_value
    rep = ChainReport("lemmas", {"n": sol.n, "beta": sol.beta, "method": sol.method, "S_value": S})
    rep.add(compare("energy_residual", sol.energy_residual, 1e-6, slack=0.0))
    rep.add(compare("multiplier_nonpositive", sol.multiplier, 0.0, slack=0.0))
    rep.add(compare("multiplier_identity", sol.multiplier_identity_residual, 1e-4 * S, slack=0.0))
    rep.add(compare("concavity", sol.residuals.get("concavity_violation", 0.0), 1e-8, slack=0.0))
    for r in LEMMA_RADII:
        rep.add(compare(f"identity_residual_r={r:g}", lemma_identity_residual(sol, r, tol), 1e-4 * S,
                        slack=0.0))
    for r in LEMMA_RADII:
        rep.add(tail_bound_check(sol, r, tol))
    return rep


def _inequality_report(args) -> ChainReport:
    from .inequalities import SPLIT_POWER_COUNTEREXAMPLE, check_split_power_as_printed, randomized_suites

    rep = ChainReport("inequalities", {"samples": args.samples, "seed": args.seed})
    for res in randomized_suites(args.samples, args.seed):
        rep.add(compare(f"{res.name}_violations", float(res.violations), 0.0, slack=0.0,
                        note=f"worst relative margin {res.worst_margin:.3e}"))
        rep.summary[res.name] = res.to_json()
    ce = check_split_power_as_printed(*SPLIT_POWER_COUNTEREXAMPLE)
    rep.add(compare("as_printed_split_power_fails", ce.rhs, ce.lhs, slack=0.0,
                    note="a=b=1, p=2, eps=1: printed right side below (a+b)^p"))
    rep.summary["as_printed_counterexample"] = ce.to_json()
    return rep


def cmd_verify(args) -> int:
    from .extremal import chain_report_critical, chain_report_singular

    chain = args.chain
    if chain == "critical":
        rep = chain_report_critical(_load_or_solve(args, 0.0), args.n, _tol(args))
    elif chain == "singular":
        sol = _load_or_solve(args, args.beta)
        rep = chain_report_singular(sol, args.n, args.beta, args.delta, _tol(args))
    elif chain in ("split-sub", "split-crit"):
        rep = _split_report(chain, args)
    elif chain == "lemmas":
        rep = _lemma_report(args)
    else:
        rep = _inequality_report(args)
    if args.format == "json":
        _emit(dumps_json(rep.to_json()), args)
    else:
        _emit(_steps_csv(rep.steps), args)
    bad = rep.first_failure()
    if bad is not None:
        raise VerificationFailure(bad)
    return EXIT_OK


def _parse_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split(".."))
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"bad n range {text!r}") from None


def _parse_list(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"bad {what} list {text!r}") from None


def _table_row(n, beta, ratio, solve, tol):
    from .bounds import bounds_row
    from .extremal import solve_extremal

    alpha = None if ratio is None else ratio * alpha_n(n)
    try:
        row = bounds_row(n, beta, alpha).to_json()
        row.pop("schema_version")
    except DomainError as exc:
        return {"n": n, "beta": beta, "alpha": alpha, "status": f"domain error: {exc}"}
    row["status"] = "ok"
    if solve != "none":
        try:
            row["S_value"] = solve_extremal(n, beta, solve, tol).S_value
        except ConvergenceError as exc:
            row["status"] = f"no convergence: {exc}"
    return row


def cmd_table(args) -> int:
    from .bounds import BOUNDS_COLUMNS

    ns = _parse_range(args.n_range)
    betas = _parse_list(args.betas, "beta")
    ratios = _parse_list(args.alpha_ratios, "alpha ratio")
    if not ns or not betas:
        raise ConfigError("n range and beta list must be nonempty")
    if args.workers < 1:
        raise ConfigError("workers must be positive")
    # lexicographic in (n, beta, alpha); None sorts as "no alpha"
    tasks = [(n, b, r) for n in sorted(set(ns)) for b in sorted(set(betas))
             for r in (sorted(set(ratios)) or [None])]
    tol = _tol(args)
    run = lambda t: _table_row(*t, args.solve, tol)
    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(run, tasks))
    else:
        rows = [run(t) for t in tasks]
    extra = ["S_value"] if args.solve != "none" else []
    failed = any(r["status"] != "ok" for r in rows)
    if extra or failed:
        extra.append("status")
    cols = BOUNDS_COLUMNS + extra
    if args.format == "json":
        doc = {"schema_version": 1, "columns": cols,
               "rows": [{c: r.get(c) for c in cols} for r in rows]}
        _emit(dumps_json(doc), args)
    else:
        _emit(dumps_csv(cols, rows), args)
    if all(r["status"] != "ok" for r in rows):
        return EXIT_DOMAIN
    return EXIT_OK


COMMANDS = {"constants": cmd_constants, "extremal": cmd_extremal, "verify": cmd_verify,
            "table": cmd_table}


def main(argv: list[str] | None = None) -> int:
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_DOMAIN
    except (DomainError, ValidationError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
