"""Command-line front-end: polmax <degree|optimal|sweep|figures|verify>.

Every command emits machine-readable output, JSON by default (wrapped in a
versioned envelope) or CSV with a fixed column order.  All diagnostics go
to stderr; the exit code is zero exactly when the command succeeded and,
for ``verify``, every self-check passed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import degree as deg
from . import distributions as dists
from . import qpsolve as qp

SCHEMA_VERSION = "1"
VERIFY_SEED = 20260810
_CSV_FMT = ".12g"

SWEEP_COLUMNS = (
    "nbar",
    "degree_optimal",
    "degree_coherent",
    "degree_thermal",
    "degree_twin_exact",
    "mandel_q_optimal",
    "support_size",
)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"polmax: error: {exc}", file=sys.stderr)
        return 1
    try:
        if args.out is None:
            sys.stdout.write(text)
        else:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"polmax: error: {exc}", file=sys.stderr)
        return 1
    return code


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polmax",
        description="Degrees of polarization and maximally polarized "
        "photon-number distributions for two-mode quantum light.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_degree = sub.add_parser("degree", help="degree of polarization of a catalog state")
    p_degree.add_argument(
        "--state",
        required=True,
        choices=["nphoton", "su2", "coherent", "twin", "thermal", "custom"],
    )
    p_degree.add_argument("--n", type=int, help="photon number (nphoton, su2)")
    p_degree.add_argument("--k", type=int, default=0, help="horizontal photons (nphoton)")
    p_degree.add_argument("--theta", type=float, default=0.0, help="polar angle (su2)")
    p_degree.add_argument("--phi", type=float, default=0.0, help="azimuth (su2)")
    p_degree.add_argument("--nbar", type=float, help="mean photons (coherent, thermal)")
    p_degree.add_argument("--xi", type=float, help="squeezing parameter (twin)")
    p_degree.add_argument("--probs", help="comma-separated probabilities (custom)")
    p_degree.add_argument("--purity", type=float, default=1.0, help="state purity (custom)")
    _common_flags(p_degree)
    p_degree.set_defaults(handler=_cmd_degree)

    p_opt = sub.add_parser("optimal", help="maximally polarized distribution at fixed mean")
    p_opt.add_argument("--nbar", type=float, required=True)
    p_opt.add_argument("--dim", type=int, help="truncation (qp method only)")
    p_opt.add_argument("--method", choices=["qp", "closed"], default="qp")
    _common_flags(p_opt)
    p_opt.set_defaults(handler=_cmd_optimal)

    p_sweep = sub.add_parser("sweep", help="degrees and diagnostics over a mean-photon grid")
    p_sweep.add_argument("--start", type=float, required=True)
    p_sweep.add_argument("--end", type=float, required=True)
    p_sweep.add_argument("--step", type=float, default=0.2)
    _common_flags(p_sweep)
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_fig = sub.add_parser("figures", help="write fig1.csv, fig2.csv, fig3.csv data tables")
    p_fig.add_argument("--outdir", default=".")
    _common_flags(p_fig)
    p_fig.set_defaults(handler=_cmd_figures)

    p_verify = sub.add_parser("verify", help="run the KKT/oracle self-check suite")
    p_verify.add_argument("--seed", type=int, default=VERIFY_SEED)
    p_verify.add_argument("--instances", type=int, default=50)
    p_verify.add_argument("--tol", type=float, default=qp.DEFAULT_TOL)
    _common_flags(p_verify)
    p_verify.set_defaults(handler=_cmd_verify)

    return parser


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", help="write output to this path instead of stdout")


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def _cmd_degree(args) -> tuple[str, int]:
    params: dict = {"state": args.state}
    if args.state == "nphoton":
        _require(args.n is not None, "--n is required for --state nphoton")
        spec = dists.NPhotonPure(args.n, args.k)
        result = deg.degree_pure_n_photon(spec.n)
        params.update(n=spec.n, k=spec.k)
    elif args.state == "su2":
        _require(args.n is not None, "--n is required for --state su2")
        spec = dists.Su2Coherent(args.n, args.theta, args.phi)
        result = deg.degree_pure_n_photon(spec.n)
        params.update(n=spec.n, theta=spec.theta, phi=spec.phi)
    elif args.state == "coherent":
        _require(args.nbar is not None, "--nbar is required for --state coherent")
        result = deg.degree_coherent_closed_form(args.nbar)
        params.update(nbar=args.nbar)
    elif args.state == "twin":
        _require(args.xi is not None, "--xi is required for --state twin")
        result = deg.degree_twin_beam_exact(args.xi)
        params.update(xi=args.xi)
    elif args.state == "thermal":
        _require(args.nbar is not None, "--nbar is required for --state thermal")
        result = deg.degree_thermal_series(args.nbar)
        params.update(nbar=args.nbar)
    else:  # custom
        _require(args.probs is not None, "--probs is required for --state custom")
        probs = _parse_probs(args.probs)
        dist = dists.custom_distribution(probs)
        result = deg.hs_degree(dist, purity=args.purity)
        params.update(probs=probs, purity=args.purity)

    if args.format == "json":
        return _json_text("degree", params, _degree_payload(result)), 0
    return _csv_table(
        ("value", "method", "purity", "truncation_dim", "tail_bound"),
        [
            (
                result.value,
                result.method.value,
                result.purity,
                result.truncation_dim,
                result.tail_bound,
            )
        ],
    ), 0


def _cmd_optimal(args) -> tuple[str, int]:
    if args.nbar < 0:
        raise ValueError("nbar must be non-negative")
    if args.method == "closed":
        _require(args.dim is None, "--dim is only meaningful with --method qp")
        dist = deg.optimal_distribution(args.nbar)
        params = {
            "nbar": args.nbar,
            "method": "closed",
            "approximate": not (2.0 * args.nbar).is_integer(),
        }
        if args.format == "json":
            return _json_text("optimal", params, _dist_payload(dist)), 0
        return _probs_csv(dist.probs), 0

    dim = args.dim if args.dim is not None else int(math.ceil(2.0 * args.nbar)) + 4
    solution = qp.solve(qp.build_problem(args.nbar, dim))
    params = {"nbar": args.nbar, "method": "qp", "dim": dim}
    if args.format == "json":
        return _json_text("optimal", params, _solution_payload(solution)), 0
    return _probs_csv(solution.dist.probs), 0


def _cmd_sweep(args) -> tuple[str, int]:
    if not (0 <= args.start <= args.end):
        raise ValueError("need 0 <= start <= end")
    if args.step <= 0:
        raise ValueError("step must be positive")
    rows = [_sweep_record(nbar) for nbar in _grid(args.start, args.end, args.step)]
    params = {"start": args.start, "end": args.end, "step": args.step}
    if args.format == "json":
        data = [dict(zip(SWEEP_COLUMNS, row)) for row in rows]
        return _json_text("sweep", params, data), 0
    return _csv_table(SWEEP_COLUMNS, rows), 0


def _sweep_record(nbar: float) -> tuple:
    solution = qp.solve(qp.build_problem(nbar, int(math.ceil(2.0 * nbar)) + 4))
    q = dists.mandel_q(solution.dist) if nbar > 0 else None
    return (
        nbar,
        deg.degree_from_solution(solution).value,
        deg.degree_coherent_closed_form(nbar).value,
        deg.degree_thermal_series(nbar).value,
        deg.degree_twin_beam_exact(dists.twin_beam_xi_for_mean(nbar)).value,
        q,
        qp.support_size(solution),
    )


def _cmd_figures(args) -> tuple[str, int]:
    os.makedirs(args.outdir, exist_ok=True)
    written = []

    rows1 = []
    for i in range(1, 6):  # nbar = 0.2 .. 1.0
        nbar = i / 5.0
        solution = qp.solve(qp.build_problem(nbar, 4))
        rows1.extend(
            (nbar, n, p) for n, p in enumerate(solution.dist.probs)
        )
    written.append(_write_csv(args.outdir, "fig1.csv", ("nbar", "N", "p"), rows1))

    rows2 = []
    for i in range(1, 46):  # nbar = 0.2 .. 9.0
        nbar = i / 5.0
        solution = qp.solve(qp.build_problem(nbar, int(math.ceil(2.0 * nbar)) + 4))
        rows2.append((nbar, dists.mandel_q(solution.dist)))
    written.append(_write_csv(args.outdir, "fig2.csv", ("nbar", "q"), rows2))

    rows3 = []
    for nbar in range(1, 10):
        solution = qp.solve(qp.build_problem(float(nbar), 25))
        rows3.extend(
            (float(nbar), n, p) for n, p in enumerate(solution.dist.probs)
        )
    written.append(_write_csv(args.outdir, "fig3.csv", ("nbar", "N", "p"), rows3))

    params = {"outdir": args.outdir}
    if args.format == "json":
        return _json_text("figures", params, {"files": written}), 0
    return _csv_table(("file",), [(path,) for path in written]), 0


def _cmd_verify(args) -> tuple[str, int]:
    checks = run_selfchecks(seed=args.seed, instances=args.instances, tol=args.tol)
    passed = all(c["passed"] for c in checks)
    for c in checks:
        status = "pass" if c["passed"] else "FAIL"
        print(f"[{status}] {c['name']}: {c['detail']}", file=sys.stderr)
    params = {"seed": args.seed, "instances": args.instances, "tol": args.tol}
    data = {"passed": passed, "checks": checks}
    if args.format == "json":
        return _json_text("verify", params, data), 0 if passed else 1
    rows = [(c["name"], c["passed"], c["detail"]) for c in checks]
    return _csv_table(("check", "passed", "detail"), rows), 0 if passed else 1


# ---------------------------------------------------------------------------
# self-check suite
# ---------------------------------------------------------------------------


def run_selfchecks(seed: int = VERIFY_SEED, instances: int = 50, tol: float = qp.DEFAULT_TOL):
    """KKT audit on random instances plus closed-form/oracle cross-checks."""
    checks = []

    rng = np.random.default_rng(seed)
    worst = {"primal_eq": 0.0, "stationarity": 0.0, "dual_feasibility": 0.0, "complementarity": 0.0}
    ok = True
    for _ in range(instances):
        dim = int(rng.integers(2, 101))
        nbar = 0.0
        while nbar <= 0.0:
            nbar = float(rng.uniform(0.0, dim / 2.0))
        solution = qp.solve(qp.build_problem(nbar, dim), tol=tol)
        report = qp.verify_kkt(qp.build_problem(nbar, dim), solution, tol=tol)
        res = report.residuals
        worst["primal_eq"] = max(worst["primal_eq"], res.primal_eq)
        worst["stationarity"] = max(worst["stationarity"], res.stationarity)
        worst["dual_feasibility"] = max(worst["dual_feasibility"], res.dual_feasibility)
        worst["complementarity"] = max(worst["complementarity"], res.complementarity)
        ok = ok and report.passed
    checks.append(
        _check(
            "kkt_random_instances",
            ok,
            f"{instances} instances, worst residuals "
            + ", ".join(f"{k}={v:.3e}" for k, v in worst.items()),
            instances=instances,
            **worst,
        )
    )

    err = 0.0
    for m in range(1, 10):
        solution = qp.solve(qp.build_problem(float(m), 25))
        reference = np.zeros(26)
        closed = deg.optimal_distribution(float(m)).probs
        reference[: closed.size] = closed
        err = max(err, float(np.abs(solution.dist.probs - reference).max()))
    checks.append(
        _check("qp_matches_parabola", err <= 1e-8, f"max |qp - closed| = {err:.3e}", max_abs_error=err)
    )

    err = 0.0
    for m in range(0, 21):
        solution = qp.solve(qp.build_problem(float(m), 2 * m + 4))
        got = deg.hs_degree(solution.dist).value
        want = deg.degree_optimal_closed_form(float(m)).value
        err = max(err, abs(got - want))
    checks.append(
        _check("qp_degree_closed_form", err <= 1e-10, f"max degree error = {err:.3e}", max_abs_error=err)
    )

    sizes = [
        qp.support_size(qp.solve(qp.build_problem(float(m), 25))) for m in range(1, 10)
    ]
    ok = sizes == [2 * m + 1 for m in range(1, 10)]
    checks.append(_check("support_size_law", ok, f"sizes {sizes}", sizes=sizes))

    err = 0.0
    for nbar in (0.5, 1.0, 5.0, 10.0):
        dist = dists.poisson_distribution(nbar, dists.poisson_dim_for_tail(nbar))
        err = max(
            err,
            abs(deg.hs_degree(dist).value - deg.degree_coherent_closed_form(nbar).value),
        )
    checks.append(
        _check("coherent_series_vs_bessel", err <= 1e-10, f"max error = {err:.3e}", max_abs_error=err)
    )

    err = 0.0
    for nbar in (0.5, 1.0, 5.0, 10.0):
        dist = dists.thermal_distribution(nbar, dists.thermal_dim_for_tail(nbar))
        err = max(err, abs(deg.hs_degree(dist).value - deg.degree_thermal_series(nbar).value))
    for xi in (0.3, 0.8813735870195430, 1.5):
        dist = dists.twin_beam_distribution(xi, dists.twin_beam_dim_for_tail(xi))
        err = max(err, abs(deg.hs_degree(dist).value - deg.degree_twin_beam_exact(xi).value))
    checks.append(
        _check("geometric_sums_vs_series", err <= 1e-9, f"max error = {err:.3e}", max_abs_error=err)
    )

    series = deg._i1e_series(deg.BESSEL_CROSSOVER)
    asym = deg._i1e_asymptotic(deg.BESSEL_CROSSOVER)
    rel = abs(series - asym) / series
    checks.append(
        _check("bessel_crossover", rel <= 1e-12, f"relative branch gap = {rel:.3e}", relative_gap=rel)
    )

    solution = qp.solve(qp.build_problem(0.5, 4))
    grid_best = brute_force_min_objective(0.5, 4, 0.01)
    ok = solution.objective <= grid_best + 1e-12
    checks.append(
        _check(
            "brute_force_grid",
            ok,
            f"solver {solution.objective:.12g} vs grid best {grid_best:.12g}",
            solver_objective=solution.objective,
            grid_objective=grid_best,
        )
    )

    return checks


def brute_force_min_objective(nbar: float, dim: int, step: float) -> float:
    """Smallest objective over the feasible simplex grid with spacing ``step``.

    Enumerates every non-negative integer combination p_N = k_N * step with
    sum k = 1/step and mean exactly nbar, evaluating sum p_N^2/(N+1).
    Both 1/step and nbar/step must be integral for the grid to be exact.
    """
    units = round(1.0 / step)
    mean_units = round(nbar / step)
    if abs(units * step - 1.0) > 1e-9 or abs(mean_units * step - nbar) > 1e-9:
        raise ValueError("grid step must divide both 1 and nbar")
    if dim != 4:
        raise ValueError("the enumeration is written for dim = 4")
    best = math.inf
    weights = step * step / np.arange(1.0, 6.0)
    for k4 in range(0, min(units, mean_units // 4) + 1):
        for k3 in range(0, min(units - k4, (mean_units - 4 * k4) // 3) + 1):
            rem = mean_units - 4 * k4 - 3 * k3
            for k2 in range(0, min(units - k4 - k3, rem // 2) + 1):
                k1 = rem - 2 * k2
                k0 = units - k1 - k2 - k3 - k4
                if k1 < 0 or k0 < 0:
                    continue
                ks = np.array([k0, k1, k2, k3, k4], dtype=float)
                best = min(best, float((ks * ks) @ weights))
    return best


def _check(name: str, passed: bool, detail: str, **extra):
    entry = {"name": name, "passed": bool(passed), "detail": detail}
    entry.update(extra)
    return entry


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _degree_payload(result: deg.DegreeResult) -> dict:
    return {
        "value": result.value,
        "method": result.method.value,
        "purity": result.purity,
        "truncation_dim": result.truncation_dim,
        "tail_bound": result.tail_bound,
    }


def _dist_payload(dist: dists.PhotonDistribution) -> dict:
    return {
        "probs": [float(p) for p in dist.probs],
        "truncation_dim": dist.truncation_dim,
        "declared_mean": dist.declared_mean,
        "tail_bound": dist.tail_bound,
    }


def _solution_payload(solution: qp.QpSolution) -> dict:
    res = solution.kkt_residuals
    return {
        "dist": _dist_payload(solution.dist),
        "multipliers": list(solution.multipliers),
        "active_set": list(solution.active_set),
        "objective": solution.objective,
        "kkt_residuals": {
            "primal_eq": res.primal_eq,
            "stationarity": res.stationarity,
            "dual_feasibility": res.dual_feasibility,
            "complementarity": res.complementarity,
        },
        "iterations": solution.iterations,
    }


def _json_text(command: str, parameters: dict, data) -> str:
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": parameters,
        "data": data,
    }
    return json.dumps(envelope, indent=2, allow_nan=False) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, _CSV_FMT)
    return str(value)


def _csv_table(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _probs_csv(probs: np.ndarray) -> str:
    return _csv_table(("N", "p"), list(enumerate(probs)))


def _write_csv(outdir: str, name: str, header: Sequence[str], rows) -> str:
    path = os.path.join(outdir, name)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_csv_table(header, rows))
    return path


def _grid(start: float, end: float, step: float) -> list[float]:
    count = int(math.floor((end - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def _parse_probs(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValueError(f"cannot parse --probs {text!r}: {exc}") from None


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)
