"""Command-line entry point.

Exit codes: 0 success, 1 I/O or parse error, 2 domain error (genericity,
interlacing), 3 property or verification failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

import numpy as np

from .errors import SzegoError
from .experiments import run_instability
from .flow import conserved_report, exact_trajectory, integrate_direct
from .hankel import GAP_TOL, RANK_TOL, SpectralCoordinates, spectral_data
from .inverse_hankel import build_selfadjoint, build_symbol, verify_singular_values
from .symbol import FourierSymbol, symbol_from_json
from .transform import inverse_model, reconstruct_coeffs, reconstruct_rational
from .verification import SUITES

EXIT_OK, EXIT_IO, EXIT_DOMAIN, EXIT_PROPERTY = 0, 1, 2, 3


class InputError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _read_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _read_symbol(path: str, M: int | None) -> FourierSymbol:
    obj = _read_json(path)
    try:
        u = symbol_from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed symbol in {path}: {exc}") from exc
    return u.resized(M) if M else u


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_spectrum(args) -> int:
    u = _read_symbol(args.input, args.M)
    s = spectral_data(u, args.rank_tol, args.gap_tol)
    _emit(_dumps(s.to_json()), args.output)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    obj = _read_json(args.input)
    try:
        s = SpectralCoordinates.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed spectral data: {exc}") from exc
    model = inverse_model(s)
    result = {"symbol": reconstruct_coeffs(model, args.M).to_json(), "model": model.to_json()}
    if args.rational:
        result["rational"] = reconstruct_rational(model).to_json()
    _emit(_dumps(result), args.output)
    return EXIT_OK


def cmd_evolve(args) -> int:
    u = _read_symbol(args.input, args.M)
    record_every = max(1, args.record_every)
    summary = {"T": args.t, "method": args.method, "M": u.M}
    prefix = Path(args.out_prefix)
    if args.method in ("direct", "both"):
        traj = integrate_direct(u, args.t, args.dt, record_every)
        times = traj.times
    else:
        n = int(np.floor(args.t / (args.dt * record_every) + 1e-9))
        times = np.arange(n + 1) * args.dt * record_every
        traj = None
    if args.method in ("exact", "both"):
        exact = exact_trajectory(u, times)
        if traj is None:
            traj = exact
        else:
            dev = traj.distance_to(exact)
            traj.l2_deviation = dev
            summary["max_l2_deviation"] = float(np.max(dev))
            summary["exact_drift"] = conserved_report(exact).as_dict()
    summary["drift"] = conserved_report(traj).as_dict()
    summary["dt"] = args.dt
    summary["last_time"] = float(traj.times[-1])
    traj.params.update({"T": args.t, "dt": args.dt, "input": args.input})
    prefix.with_suffix(".csv").write_text(traj.to_csv())
    prefix.with_suffix(".json").write_text(_dumps({"params": traj.params, "summary": summary}))
    sys.stdout.write(_dumps(summary))
    return EXIT_OK


def cmd_hankel_build(args) -> int:
    obj = _read_json(args.input)
    try:
        if args.selfadjoint or "zeta" in obj:
            zeta = np.asarray(obj["zeta"], dtype=float)
            gamma = np.asarray(obj["gamma"], dtype=float)
            c = build_selfadjoint(zeta, gamma, args.M)
            lam, mu = np.abs(zeta), np.abs(gamma)
        else:
            lam = np.asarray(obj["lambda"], dtype=float)
            mu = np.asarray(obj["mu"], dtype=float)
            phi = np.asarray(obj.get("phi", np.zeros_like(lam)), dtype=float)
            theta = np.asarray(obj.get("theta", np.zeros_like(lam)), dtype=float)
            c = build_symbol(lam, mu, phi, theta, args.M)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed targets: {exc}") from exc
    report = verify_singular_values(c, lam, mu, args.tol)
    _emit(_dumps(c.to_json()), args.output)
    sys.stderr.write(_dumps(report.as_dict()))
    return EXIT_OK if report.passed else EXIT_PROPERTY


def cmd_experiment(args) -> int:
    run = run_instability(args.q, args.eps, args.horizon, args.samples)
    if args.csv:
        Path(args.csv).write_text(run.to_csv())
    else:
        sys.stdout.write(run.to_csv())
    summary = _dumps(run.summary(args.horizon))
    if args.summary:
        Path(args.summary).write_text(summary)
    else:
        sys.stderr.write(summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = int(os.environ.get("SZEGO_SEED", args.seed))
    case = partial(SUITES[args.suite], seed)
    indices = range(args.n)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(case, indices))
        results.sort(key=lambda r: r["case"])
    else:
        results = [case(i) for i in indices]
    ok = all(r["passed"] for r in results)
    _emit(_dumps({"suite": args.suite, "seed": seed, "n": args.n, "passed": ok, "cases": results}), args.output)
    return EXIT_OK if ok else EXIT_PROPERTY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="szego", description="Action-angle tools for the cubic Szegő equation")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="spectral coordinates of a symbol")
    sp.add_argument("input")
    sp.add_argument("-o", "--output")
    sp.add_argument("-M", type=int, default=None, help="resize the symbol to M coefficients")
    sp.add_argument("--rank-tol", type=float, default=RANK_TOL)
    sp.add_argument("--gap-tol", type=float, default=GAP_TOL)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("reconstruct", help="symbol from spectral coordinates")
    sp.add_argument("input")
    sp.add_argument("-o", "--output")
    sp.add_argument("-M", type=int, default=64)
    sp.add_argument("--rational", action="store_true", help="also emit numerator/denominator")
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("evolve", help="evolve a symbol by the Szegő flow")
    sp.add_argument("input")
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--method", choices=("exact", "direct", "both"), default="both")
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--record-every", type=int, default=100)
    sp.add_argument("-M", type=int, default=None)
    sp.add_argument("--out-prefix", default="trajectory")
    sp.set_defaults(func=cmd_evolve)

    sp = sub.add_parser("hankel-build", help="sequence with prescribed Hankel spectra")
    sp.add_argument("input")
    sp.add_argument("--selfadjoint", action="store_true")
    sp.add_argument("-M", type=int, default=None)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_hankel_build)

    sp = sub.add_parser("experiment", help="perturbed Blaschke product experiments")
    esub = sp.add_subparsers(dest="experiment", required=True)
    ip = esub.add_parser("instability", help="two-mode beat of J_1")
    ip.add_argument("--q", type=float, default=0.0)
    ip.add_argument("--eps", type=float, default=0.1)
    ip.add_argument("--horizon", type=float, default=1.0)
    ip.add_argument("--samples", type=int, default=1001)
    ip.add_argument("--csv")
    ip.add_argument("--summary")
    ip.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("verify", help="seeded property suites")
    sp.add_argument("--suite", choices=sorted(SUITES), required=True)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--n", type=int, default=20)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except SzegoError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
