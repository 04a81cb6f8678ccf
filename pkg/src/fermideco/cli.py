"""Command-line entry point.

Usage:
    fermideco evolve --state psi.json --channel dephasing --beta 10 --out series.csv
    fermideco evolve --state psi.json --channel adc --gamma-rate 1 --out adc.csv
    fermideco asymptotic --state psi.json
    fermideco sample --n 100000 --seed 7 --out atlas.csv
    fermideco classify --state psi.json

Every file written is accompanied by ``<file>.manifest.json`` recording the
command, its parameters and the SHA-256 of each output.

Exit codes: 0 success, 2 malformed state file (or bad arguments), 3 quadrature
failure, 4 output path not writable.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .adc import ADCParams, adc_time_series
from .dephasing import (
    ZERO_T,
    BathParams,
    asymptotic_coherence,
    asymptotic_concurrence,
    time_grid,
    time_series,
)
from .errors import MalformedStateFile, QuadratureFailure
from .measures import concurrence_pure
from .sampling import SamplerConfig, atlas_arrays, atlas_csv, atlas_summary, sample_amplitudes
from .states import RENORM_THRESHOLD, classify_subspace, density_from_pure, read_state_file

EXIT_OK = 0
EXIT_MALFORMED = 2
EXIT_QUADRATURE = 3
EXIT_UNWRITABLE = 4

SERIES_HEADER = ("t", "Cf", "K", "SvN", "purity")
ADC_SERIES_HEADER = ("p",) + SERIES_HEADER


class Unwritable(Exception):
    pass


def _beta(text: str):
    if text == "zero-temperature":
        return ZERO_T
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number or 'zero-temperature', got {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError("beta must be positive")
    return value


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise Unwritable(f"cannot write {path}: {exc}") from exc


def write_manifest(out: Path, command: str, parameters: dict[str, Any], outputs: list[Path], seed=None) -> Path:
    manifest = {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "version": __version__,
        "outputs": {p.name: _sha256(p) for p in outputs},
    }
    path = out.with_name(out.name + ".manifest.json")
    _write(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _series_csv(header, rows: np.ndarray) -> str:
    lines = [",".join(header)]
    for row in rows.tolist():
        lines.append(",".join(f"{v:.12g}" for v in row))
    return "\n".join(lines) + "\n"


def _load(path: str):
    state, deviation = read_state_file(path)
    if deviation > RENORM_THRESHOLD:
        print(
            f"warning: amplitudes in {path} had squared norm off by {deviation:.3g}; renormalised",
            file=sys.stderr,
        )
    return state


def _state_digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# -- subcommands ------------------------------------------------------------------


def cmd_evolve(args) -> int:
    state = _load(args.state)
    rho0 = density_from_pure(state)
    times = time_grid(args.t_min, args.t_max, args.count, args.spacing)
    params: dict[str, Any] = {
        "state": args.state,
        "state_sha256": _state_digest(args.state),
        "channel": args.channel,
        "t_min": args.t_min,
        "t_max": args.t_max,
        "count": args.count,
        "spacing": args.spacing,
    }
    if args.channel == "dephasing":
        bath = BathParams(
            beta=args.beta,
            J0=args.j0,
            omega_c=args.omega_c,
            quad_rel_tol=args.quad_rel_tol,
            strict_spectral_density=args.strict_spectral_density,
        )
        rows = time_series(rho0, times, bath)
        text = _series_csv(SERIES_HEADER, rows)
        params.update(
            beta="zero-temperature" if bath.zero_temperature else bath.beta,
            j0=bath.J0,
            omega_c=bath.omega_c,
            quad_rel_tol=bath.quad_rel_tol,
            strict_spectral_density=bath.strict_spectral_density,
        )
    else:
        rows = adc_time_series(rho0, times, ADCParams(gamma_rate=args.gamma_rate))
        text = _series_csv(ADC_SERIES_HEADER, rows)
        params.update(gamma_rate=args.gamma_rate)

    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    out = Path(args.out)
    _write(out, text)
    write_manifest(out, "evolve", params, [out])
    return EXIT_OK


def asymptotic_report(state) -> dict[str, Any]:
    cf0 = concurrence_pure(state)
    cf_inf = asymptotic_concurrence(state)
    return {
        "K_inf": asymptotic_coherence(state),
        "Cf0": cf0,
        "Cf_inf": cf_inf,
        "P": cf_inf / cf0 if cf0 > 1e-12 else None,
        "label": str(classify_subspace(state)),
    }


def cmd_asymptotic(args) -> int:
    state = _load(args.state)
    text = json.dumps(asymptotic_report(state), indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    out = Path(args.out)
    _write(out, text)
    write_manifest(
        out, "asymptotic", {"state": args.state, "state_sha256": _state_digest(args.state)}, [out]
    )
    return EXIT_OK


def cmd_sample(args) -> int:
    config = SamplerConfig(n_samples=args.n, seed=args.seed, enforce_order=not args.no_order)
    out = Path(args.out)
    # Fail before sampling if the destination cannot be written.
    _write(out, "")
    cols = atlas_arrays(sample_amplitudes(config))
    _write(out, atlas_csv(cols))
    summary = atlas_summary(cols)
    summary["seed"] = args.seed
    summary_path = out.with_name(out.name + ".summary.json")
    _write(summary_path, json.dumps(summary, indent=2, sort_keys=True) + "\n")
    write_manifest(
        out,
        "sample",
        {"n": args.n, "enforce_order": config.enforce_order},
        [out, summary_path],
        seed=args.seed,
    )
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def cmd_classify(args) -> int:
    state = _load(args.state)
    print(classify_subspace(state, args.tol))
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fermideco",
        description="Decoherence and entanglement persistence of two d=4 fermions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="time series of Cf, K, SvN and purity")
    p.add_argument("--state", required=True, help="state JSON file")
    p.add_argument("--channel", choices=("dephasing", "adc"), default="dephasing")
    p.add_argument("--beta", type=_beta, default=10.0,
                   help="inverse temperature or 'zero-temperature' (default 10)")
    p.add_argument("--j0", type=float, default=8.0, help="dimensionless coupling J0 (default 8)")
    p.add_argument("--omega-c", type=float, default=1.0, help="cutoff frequency (default 1)")
    p.add_argument("--quad-rel-tol", type=float, default=1e-10)
    p.add_argument("--strict-spectral-density", action="store_true",
                   help="apply the 4*J0 spectral-density prefactor to all bath functions")
    p.add_argument("--gamma-rate", type=float, default=1.0,
                   help="ADC decay rate, p(t) = 1 - exp(-gamma t) (default 1)")
    p.add_argument("--t-min", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=30.0)
    p.add_argument("--count", type=int, default=300)
    p.add_argument("--spacing", choices=("linear", "log"), default="linear")
    p.add_argument("--out", help="CSV output path (default: standard output)")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("asymptotic", help="long-time coherence, concurrence and persistence")
    p.add_argument("--state", required=True)
    p.add_argument("--out", help="JSON output path (default: standard output)")
    p.set_defaults(func=cmd_asymptotic)

    p = sub.add_parser("sample", help="Monte-Carlo persistence atlas")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-order", action="store_true", help="do not enforce alpha3 >= alpha6")
    p.add_argument("--out", required=True, help="atlas CSV path")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("classify", help="print the subspace label of a state")
    p.add_argument("--state", required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MalformedStateFile as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except QuadratureFailure as exc:
        print(f"error: quadrature failed: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except Unwritable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNWRITABLE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
