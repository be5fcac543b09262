"""Command-line driver: figure data scans, count simulation and noise fitting.

Angles on the command line are in degrees.  Exit codes: 0 success, 1 I/O
error, 2 invalid input, 3 fit did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from . import benchmarks, fit, montecarlo, optics, teleport, witness

SCHEMA_VERSION = 1
EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_NONCONVERGENCE = 0, 1, 2, 3


class ValidationError(ValueError):
    pass


def parse_grid(text: str) -> list[float]:
    """``"a,b,c"`` or ``"start:stop:num"`` (inclusive, like ``numpy.linspace``)."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            values = np.linspace(float(start), float(stop), int(num)).tolist()
        else:
            values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"cannot parse grid {text!r}") from None
    if not values:
        raise ValidationError("grid is empty")
    return values


def gamma_grid(text: str) -> list[float]:
    values = parse_grid(text)
    if any(not 0.0 <= g <= 1.0 for g in values):
        raise ValidationError("gamma values must lie in [0, 1]")
    return values


def theta_grid(text: str) -> list[float]:
    values = parse_grid(text)
    if any(not 0.0 < t <= 90.0 for t in values):
        raise ValidationError("theta values (degrees) must lie in (0, 90]")
    return [math.radians(t) for t in values]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TELECERT_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn: Callable, items: Sequence) -> list:
    """Apply ``fn`` to ``items``; results keep the input order."""
    n = min(_threads(), len(items))
    if n <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def sub_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(1, np.uint64)[0])


def _params(args) -> optics.NoiseParams:
    try:
        return optics.NoiseParams(args.V, args.delta)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def _shot_config(args, index: int) -> montecarlo.ShotConfig:
    return montecarlo.ShotConfig(args.shots, sub_seed(args.seed, index), args.replicas)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def emit(rows: list[dict], args, command: str, metadata: dict | None = None) -> None:
    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "metadata": metadata or {},
            "rows": rows,
        }
        text = json.dumps(doc, indent=2, default=float) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if rows:
            writer.writerow(rows[0].keys())
            for row in rows:
                writer.writerow([_fmt(v) for v in row.values()])
        text = buf.getvalue()
    write_text(text, args.out)


def write_text(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _channel(gamma: float, params: optics.NoiseParams) -> np.ndarray:
    return optics.noisy_channel_matrix(gamma, params)


def cmd_scan_witness(args) -> int:
    gammas = gamma_grid(args.gamma_grid)
    thetas = theta_grid(args.theta_grid)
    params = _params(args)

    def per_gamma(item):
        i, g = item
        ideal = teleport.assemblage(optics.noisy_channel_matrix(g, optics.NOISELESS))
        noisy = teleport.assemblage(_channel(g, params))
        best = witness.minimize_witness_numeric(ideal)
        records = montecarlo.simulate_counts(noisy, _shot_config(args, i)) if args.shots else None
        rows = []
        for t in thetas:
            row = {
                "gamma": g,
                "theta": t,
                "W_exact": witness.witness_value(ideal, t),
                "W_noisy_model": witness.witness_value(noisy, t),
                "W_exact_min": best.value,
            }
            if records is not None:
                row["W_mc_estimate"], row["W_mc_std"] = montecarlo.estimate_witness(
                    records, t, args.replicas, sub_seed(args.seed, 10_000 + i)
                )
            rows.append(row)
        return rows

    rows = [r for block in parallel_map(per_gamma, list(enumerate(gammas))) for r in block]
    emit(rows, args, "scan-witness", {"V": params.V, "delta": params.delta})
    return EXIT_OK


def cmd_scan_min(args) -> int:
    gammas = gamma_grid(args.gamma_grid)
    params = _params(args)
    g_ent = benchmarks.gamma_entanglement_threshold(params)

    def per_gamma(item):
        i, g = item
        asm = teleport.assemblage(_channel(g, params))
        best = witness.minimize_witness_numeric(asm)
        row = {
            "gamma": g,
            "W_min_model": best.value,
            "theta_min": best.theta,
            "gamma_ent_threshold": g_ent,
            "nonclassical_flag": best.value < -witness.NONCLASSICAL_TOL,
            "W_threshold": 0.0,
        }
        if args.shots:
            records = montecarlo.simulate_counts(asm, _shot_config(args, i))
            _, row["W_min_mc"], row["W_min_mc_std"] = montecarlo.estimate_witness_min(
                records, args.replicas, sub_seed(args.seed, 10_000 + i)
            )
        return row

    rows = parallel_map(per_gamma, list(enumerate(gammas)))
    emit(rows, args, "scan-min", {"V": params.V, "delta": params.delta, "W_threshold": 0.0,
                                  "gamma_ent_threshold": g_ent})
    return EXIT_OK


def cmd_scan_fidelity(args) -> int:
    gammas = gamma_grid(args.gamma_grid)
    params = _params(args)
    bsm = teleport.partial_bsm(three_outcome=True)

    def per_gamma(item):
        i, g = item
        asm = teleport.assemblage(_channel(g, params), measurement=bsm)
        terms = benchmarks.fidelity_terms(asm)
        row = {"gamma": g, "F_model": terms.normalized, "F_raw": terms.raw,
               "classical_bound": benchmarks.CLASSICAL_FIDELITY}
        if args.shots:
            records = montecarlo.simulate_counts(asm, _shot_config(args, i))
            row["F_mc"], row["F_mc_std"] = montecarlo.estimate_fidelity(
                records, None, args.replicas, sub_seed(args.seed, 10_000 + i)
            )
        return row

    rows = parallel_map(per_gamma, list(enumerate(gammas)))
    emit(rows, args, "scan-fidelity", {"V": params.V, "delta": params.delta,
                                       "classical_bound": benchmarks.CLASSICAL_FIDELITY})
    return EXIT_OK


def cmd_ent_threshold(args) -> int:
    params = _params(args)
    g_ent = benchmarks.gamma_entanglement_threshold(params)
    rows = [{"V": params.V, "delta": params.delta, "gamma_ent_threshold": g_ent,
             "never_entangled": g_ent > 1.0}]
    emit(rows, args, "ent-threshold")
    return EXIT_OK


def cmd_simulate(args) -> int:
    params = _params(args)
    if args.alpha_deg is not None:
        if not 0.0 <= args.alpha_deg <= 45.0:
            raise ValidationError("alpha must lie in [0, 45] degrees")
        gamma = optics.gamma_from_alpha(math.radians(args.alpha_deg))
    else:
        gamma = args.gamma
    if not 0.0 <= gamma <= 1.0:
        raise ValidationError("gamma must lie in [0, 1]")
    if not args.shots:
        raise ValidationError("--shots is required for simulate")
    bsm = teleport.partial_bsm(three_outcome=args.three_outcome)
    asm = teleport.assemblage(_channel(gamma, params), measurement=bsm)
    records = montecarlo.simulate_counts(asm, montecarlo.ShotConfig(args.shots, args.seed, args.replicas))
    if args.format == "json":
        rows = [vars(r) for r in records]
        emit(rows, args, "simulate", {"gamma": gamma, "V": params.V, "delta": params.delta})
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(montecarlo.CSV_COLUMNS)
        for r in records:
            writer.writerow([r.input, r.bsm_outcome, r.basis, r.result, r.count])
        write_text(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_fit(args) -> int:
    data = fit.FitInput.from_csv(args.input)
    result = fit.fit_noise_params(data, replicas=args.replicas, seed=args.seed)
    write_text(json.dumps(result.to_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="telecert",
        description="Teleportation witness, fidelity and noise-model datasets. Angles are in degrees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grids=True, theta=False, mc=True):
        if grids:
            p.add_argument("--gamma-grid", default="0:1:11",
                           help="gamma values: 'a,b,c' or 'start:stop:num' (default 0:1:11)")
        if theta:
            p.add_argument("--theta-grid", default="6:90:15",
                           help="theta values in degrees, in (0, 90] (default 6:90:15)")
        p.add_argument("--V", type=float, default=1.0, help="source singlet weight V in [0, 1]")
        p.add_argument("--delta", type=float, default=1.0, help="calcite dephasing parameter in [0, 1]")
        if mc:
            p.add_argument("--shots", type=float, default=0,
                           help="mean coincidences per setting; 0 disables Monte-Carlo columns")
            p.add_argument("--replicas", type=int, default=200, help="bootstrap replicas")
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("scan-witness", help="W(gamma, theta) on a grid")
    common(p, theta=True)
    p.set_defaults(func=cmd_scan_witness)

    p = sub.add_parser("scan-min", help="witness minimised over theta, per gamma")
    common(p)
    p.set_defaults(func=cmd_scan_min)

    p = sub.add_parser("scan-fidelity", help="average teleportation fidelity per gamma")
    common(p)
    p.set_defaults(func=cmd_scan_fidelity)

    p = sub.add_parser("ent-threshold", help="smallest entangled gamma for the noise model")
    common(p, grids=False, mc=False)
    p.set_defaults(func=cmd_ent_threshold)

    p = sub.add_parser("simulate", help="Poissonian coincidence counts as CSV")
    common(p, grids=False)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--alpha-deg", type=float, default=None,
                   help="interferometer HWP angle in degrees; overrides --gamma")
    p.add_argument("--three-outcome", action="store_true", help="resolve psi+ as well as psi-")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="fit (V, delta) to a gamma,w_min[,sigma] CSV")
    p.add_argument("input", help="CSV with header gamma,w_min[,sigma]")
    p.add_argument("--replicas", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except fit.FitError as exc:
        print(f"telecert: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except OSError as exc:
        print(f"telecert: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"telecert: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
