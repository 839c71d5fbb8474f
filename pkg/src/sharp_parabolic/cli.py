"""Command-line interface: config-driven sweeps and verification runs.

Commands: coeffs, kernel, sharp, solve, verify, sweep. Output is CSV with a
versioned schema comment, 17 significant digits and '\\n' line endings, so
identical configurations produce byte-identical files.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import kernels, sharp, solve, verification
from .config import COMMANDS, load_config, parse_p
from .errors import ConfigError, DomainError
from .solve import GridFunction, SolveSettings, SourceFunction

SCHEMA = "sharp-parabolic-csv/1"


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    x = float(value)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def write_csv(stream, command, header, rows):
    stream.write(f"# schema: {SCHEMA} command: {command}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(cell) for cell in row])


def _map_tasks(fn, tasks, threads):
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, tasks))
    return [fn(task) for task in tasks]


def _vector_cells(vec, size):
    if vec is None:
        return [None] * size
    return [float(v) for v in np.asarray(vec, dtype=float)]


# ---------------------------------------------------------------------------
# sharp / sweep


def _sharp_tasks(cfg, kinds):
    req = cfg.request
    ps = [parse_p(tok) for tok in req.get("p", [2.0])]
    ts = [float(t) for t in req.get("t", [cfg.T])]
    if not ps or not ts or not kinds:
        raise ConfigError("request: parameter ranges must be nonempty")
    ells = req.get("ell")
    ell_list = (
        [np.asarray(e, dtype=float) for e in ells] if ells is not None else [None]
    )
    tasks = []
    for kind in kinds:
        if kind not in sharp.KINDS:
            raise ConfigError(f"request: unknown sharp kind {kind!r}")
        needs_ell = kind in ("K_ell", "C_ell")
        if needs_ell and ells is None:
            raise ConfigError(f"request: kind {kind} requires 'ell' directions")
        for p in ps:
            for t in ts:
                for ell in ell_list if needs_ell else [None]:
                    tasks.append((kind, p, t, ell))
    return tasks


def cmd_sharp(cfg, threads, sweep=False):
    req = cfg.request
    if sweep:
        kinds = req.get("kinds")
        if not kinds:
            raise ConfigError("request: sweep needs a 'kinds' list")
    else:
        kinds = [req.get("kind", "H")]
    tasks = _sharp_tasks(cfg, kinds)
    settings = sharp.SphereSettings(seeds_per_dim=cfg.numerics.sphere_seeds)

    def evaluate(task):
        kind, p, t, ell = task
        request = sharp.SharpRequest(
            kind=kind, p=p, t=t, ell=ell, quad_tol=cfg.numerics.quad_tol,
            sphere=settings,
        )
        result = sharp.evaluate_sharp(cfg.coefficient_set, request)
        return (
            [kind, p, t]
            + _vector_cells(ell, cfg.n)
            + [result.value, result.convergent]
            + _vector_cells(result.maximizer_z, cfg.m)
            + _vector_cells(result.maximizer_ell, cfg.n)
            + [result.diagnostics.quad_error, result.diagnostics.search_residual]
        )

    header = (
        ["kind", "p", "t"]
        + [f"ell_{i + 1}" for i in range(cfg.n)]
        + ["value", "convergent"]
        + [f"maximizer_z_{i + 1}" for i in range(cfg.m)]
        + [f"maximizer_ell_{i + 1}" for i in range(cfg.n)]
        + ["quad_error", "search_residual"]
    )
    return header, _map_tasks(evaluate, tasks, threads)


# ---------------------------------------------------------------------------
# kernel / coeffs


def cmd_kernel(cfg, threads):
    req = cfg.request
    points = [np.asarray(x, dtype=float) for x in req.get("points", [[0.0] * cfg.n])]
    ts = [float(t) for t in req.get("t", [cfg.T])]
    taus = req.get("tau")
    tau_list = [None] if taus is None else [float(v) for v in taus]
    tasks = [(x, t, tau) for x in points for t in ts for tau in tau_list]

    def evaluate(task):
        x, t, tau = task
        if tau is None:
            kv = kernels.eval_G(cfg.coefficient_set, x, t, tol=cfg.numerics.quad_tol)
        else:
            kv = kernels.eval_P(cfg.coefficient_set, x, t, tau, tol=cfg.numerics.quad_tol)
        return (
            list(x)
            + [t, tau, kv.scalar_part]
            + [float(v) for v in kv.matrix.reshape(-1)]
        )

    header = (
        [f"x_{i + 1}" for i in range(cfg.n)]
        + ["t", "tau", "scalar_part"]
        + [f"g_{i + 1}{j + 1}" for i in range(cfg.m) for j in range(cfg.m)]
    )
    return header, _map_tasks(evaluate, tasks, threads)


def cmd_coeffs(cfg, threads):
    req = cfg.request
    windows = req.get("windows")
    if not windows:
        raise ConfigError("request: coeffs needs a 'windows' list of [tau, t] pairs")
    tasks = [(float(a), float(b)) for a, b in windows]

    def evaluate(task):
        tau, t = task
        acc = cfg.coefficient_set.accumulated(tau, t, cfg.numerics.quad_tol)
        upper = [acc.ia[i, j] for i in range(cfg.n) for j in range(i, cfg.n)]
        return (
            [tau, t]
            + upper
            + [float(v) for v in acc.ib]
            + [float(v) for v in acc.ic.reshape(-1)]
            + [acc.det_ia_sqrt, acc.quad_error]
        )

    header = (
        ["tau", "t"]
        + [f"ia_{i + 1}{j + 1}" for i in range(cfg.n) for j in range(i, cfg.n)]
        + [f"ib_{i + 1}" for i in range(cfg.n)]
        + [f"ic_{i + 1}{j + 1}" for i in range(cfg.m) for j in range(cfg.m)]
        + ["det_ia_sqrt", "quad_error"]
    )
    return header, _map_tasks(evaluate, tasks, threads)


# ---------------------------------------------------------------------------
# solve


def _data_callable(block, n):
    kind = block.get("type")
    if kind == "constant":
        value = np.asarray(block["value"], dtype=float)

        def fn(pts):
            return np.broadcast_to(value, pts.shape[:-1] + value.shape)

        return fn, float(np.linalg.norm(value))
    if kind == "gaussian":
        amplitude = np.asarray(block["amplitude"], dtype=float)
        width = float(block.get("width", 1.0))
        center = np.asarray(block.get("center", [0.0] * n), dtype=float)

        def fn(pts):
            d2 = np.sum((pts - center) ** 2, axis=-1)
            return np.exp(-d2 / (2.0 * width * width))[..., None] * amplitude

        return fn, float(np.linalg.norm(amplitude))
    raise ConfigError(f"request.data: unknown data type {block.get('type')!r}")


def cmd_solve(cfg, threads):
    req = cfg.request
    problem = req.get("problem", "homogeneous")
    if problem not in ("homogeneous", "nonhomogeneous"):
        raise ConfigError("request.problem must be homogeneous or nonhomogeneous")
    data_block = req.get("data")
    if not isinstance(data_block, dict):
        raise ConfigError("request: solve needs a 'data' object")
    points = [np.asarray(x, dtype=float) for x in req.get("points", [[0.0] * cfg.n])]
    ts = [float(t) for t in req.get("t", [cfg.T])]
    p = parse_p(req.get("p", "inf"))
    ell = req.get("ell")
    ell = None if ell is None else np.asarray(ell, dtype=float)
    cs = cfg.coefficient_set
    settings = SolveSettings(
        grid_points=min(cfg.numerics.grid_points, 129 if cfg.n > 1 else 257),
        truncation_sigmas=cfg.numerics.truncation_sigmas,
    )
    fn, bound = _data_callable(data_block, cfg.n)

    t_max = max(ts)
    acc = cs.accumulated(0.0, t_max, cfg.numerics.quad_tol)
    std = kernels.kernel_std(acc)
    if problem == "homogeneous":
        radius = float(
            data_block.get(
                "radius", cfg.numerics.truncation_sigmas * std + 3.0 * float(data_block.get("width", 1.0))
            )
        )
        phi = GridFunction.from_callable(
            fn, center=np.zeros(cfg.n), radius=radius,
            points_per_axis=settings.grid_points,
        )
        if phi.m != cfg.m:
            raise ConfigError("request.data produces the wrong number of components")
        norm = phi.norm(p)
    else:
        source = SourceFunction(evaluator=lambda pts, tau: fn(pts), bound=bound)

    def evaluate(task):
        x, t = task
        if problem == "homogeneous":
            if ell is None:
                res = solve.solve_homogeneous(cs, phi, x, t, tol=cfg.numerics.quad_tol)
                coef = sharp.sharp_H(cs, p, t, quad_tol=cfg.numerics.quad_tol).value
            else:
                res = solve.directional_derivative(
                    cs, problem, phi, x, t, ell, tol=cfg.numerics.quad_tol
                )
                coef = sharp.sharp_K_ell(
                    cs, p, t, ell, quad_tol=cfg.numerics.quad_tol
                ).value
            data_norm = norm
        else:
            if ell is None:
                res = solve.solve_nonhomogeneous(
                    cs, source, x, t, settings=settings, tol=cfg.numerics.quad_tol
                )
                coef = sharp.sharp_N(cs, p, t, quad_tol=cfg.numerics.quad_tol).value
            else:
                res = solve.directional_derivative(
                    cs, problem, source, x, t, ell,
                    settings=settings, tol=cfg.numerics.quad_tol,
                )
                coef = sharp.sharp_C_ell(
                    cs, p, t, ell, quad_tol=cfg.numerics.quad_tol
                ).value
            data_norm = solve.spacetime_norm(cs, source, x, t, p, settings=settings)
        bound_val = coef * data_norm
        mag = float(np.linalg.norm(res.value))
        ratio = mag / bound_val if bound_val > 0 else math.inf
        return (
            list(x)
            + [t]
            + [float(v) for v in res.value]
            + [res.error_estimate, bound_val, ratio]
        )

    tasks = [(x, t) for x in points for t in ts]
    header = (
        [f"x_{i + 1}" for i in range(cfg.n)]
        + ["t"]
        + [f"u_{i + 1}" for i in range(cfg.m)]
        + ["err_estimate", "bound", "ratio"]
    )
    return header, _map_tasks(evaluate, tasks, threads)


# ---------------------------------------------------------------------------
# verify


def cmd_verify(cfg, threads, tol_override=None):
    req = cfg.request
    selection = req.get("cases", "quick")
    try:
        cases = verification.cases_for(selection)
    except ValueError as exc:
        raise ConfigError(f"request.cases: {exc}") from exc
    tol = tol_override if tol_override is not None else req.get("tolerance")

    def evaluate(case):
        row = verification.run_case(case, tol_override=tol)
        return [
            row.name,
            row.closed_form,
            row.oracle,
            row.rel_diff,
            row.tol,
            "pass" if row.passed else "FAIL",
        ]

    rows = _map_tasks(evaluate, cases, threads)
    header = ["name", "closed_form", "oracle", "rel_diff", "tol", "status"]
    failures = sum(1 for row in rows if row[-1] == "FAIL")
    return header, rows, failures


# ---------------------------------------------------------------------------
# entry point


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sharp-parabolic",
        description="Kernels, solutions and sharp pointwise-estimate constants "
        "for weakly coupled parabolic systems.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="path to the JSON run config")
    parser.add_argument("--out", help="output CSV path (overrides output.path)")
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--tol", type=float, default=None,
                        help="override quad_tol (verify: the pass tolerance)")
    args = parser.parse_args(argv)

    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("SHARP_PARABOLIC_THREADS", "1"))
    threads = max(1, threads)

    try:
        cfg = load_config(args.config, command=args.command)
        if args.tol is not None and args.command != "verify":
            cfg.numerics.quad_tol = args.tol
        failures = 0
        if args.command == "sharp":
            header, rows = cmd_sharp(cfg, threads)
        elif args.command == "sweep":
            header, rows = cmd_sharp(cfg, threads, sweep=True)
        elif args.command == "kernel":
            header, rows = cmd_kernel(cfg, threads)
        elif args.command == "coeffs":
            header, rows = cmd_coeffs(cfg, threads)
        elif args.command == "solve":
            header, rows = cmd_solve(cfg, threads)
        else:
            header, rows, failures = cmd_verify(cfg, threads, tol_override=args.tol)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    out_path = args.out or cfg.output_path
    if out_path:
        with open(out_path, "w", newline="") as handle:
            write_csv(handle, args.command, header, rows)
    else:
        write_csv(sys.stdout, args.command, header, rows)

    if args.command == "verify":
        total = len(rows)
        print(
            f"verify: {total - failures}/{total} checks passed",
            file=sys.stderr,
        )
        if failures:
            return 1
    return 0


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
