"""Batch driver: forward / verify / invert / daisy / opuc / scan pipelines.

Exit status: 0 on success, 1 when a certification or verification suite
fails, 2 on input errors (bad paths, invalid values, violated
preconditions).  All randomness is seeded and the seed is echoed into every
JSON report; reports carry no timestamps, so identical configs produce
byte-identical output.  The environment variable NLFT_THREADS caps internal
parallelism (it is forwarded to the compiled kernels' thread pool).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import _kernels, acceptance, daisy, opuc
from .errors import DaisyCertificationError, NlftError
from .harmonic import RealGridFunction
from .inverse import inverse_halfline, roundtrip_error
from .laurent import CircleGrid
from .nlft import forward, forward_grid, load_sequence, save_sequence


def _apply_thread_cap() -> None:
    cap = os.environ.get("NLFT_THREADS", "").strip()
    if cap and _kernels.USE_NUMBA:
        import numba

        try:
            numba.set_num_threads(max(1, min(int(cap), numba.config.NUMBA_NUM_THREADS)))
        except ValueError:
            pass


def _poly_json(p) -> dict:
    return {"lo": int(p.lo),
            "coeffs": [[float(c.real), float(c.imag)] for c in p.coeffs]}


def cmd_forward(args) -> int:
    seq = load_sequence(args.infile)
    pair = forward(seq)
    out = {
        "input": str(args.infile),
        "a": _poly_json(pair.a),
        "b": _poly_json(pair.b),
    }
    if args.grid:
        a, b = forward_grid(seq, args.grid)
        out["grid"] = args.grid
        out["sup_abs_b"] = float(np.max(np.abs(b)))
        out["sup_abs_r"] = float(np.max(np.abs(b / np.conj(a))))
    daisy.write_report_json(out, Path(args.out) / "nlft_out.json")
    return 0


def cmd_verify(args) -> int:
    report = acceptance.run_suite(args.suite, seed=args.seed, echo=print)
    daisy.write_report_json(report, Path(args.out) / f"{args.suite}_report.json")
    return 0 if report["passed"] else 1


def cmd_invert(args) -> int:
    seq = load_sequence(args.infile)
    err = roundtrip_error(seq, args.grid)
    _, b = forward_grid(seq, args.grid)
    rec = inverse_halfline(CircleGrid(b), seq.support_max + 8)
    save_sequence(rec, Path(args.out) / "inverted.json")
    daisy.write_report_json(
        {"input": str(args.infile), "grid": args.grid,
         "roundtrip_error": err},
        Path(args.out) / "invert_report.json")
    return 0


def cmd_daisy(args) -> int:
    params = daisy.params_from_toml(args.config) if args.config else daisy.DaisyParams()
    outdir = Path(args.out)
    H, hrep = daisy.assemble_H(params)
    F = daisy.finalize_F(H, params.mu)
    factor_res = daisy.mass_factor_residual(H, params.mu, params.scan_grid)
    scan = daisy.divergence_scan(H, params.scan_grid)
    scan.to_csv(outdir / "oscillation.csv")
    nus = sorted({int(s[0]) for s in params.schedule})
    rows, m = daisy.growth_table(nus, params.schedule[0][1], 2 ** 15)
    daisy.write_growth_csv(rows, outdir / "growth_table.csv")
    report = {
        "config": str(args.config) if args.config else "defaults",
        "seed": args.seed,
        "mu": params.mu,
        "assembly": hrep.to_json_dict(),
        "mass_factor_residual": factor_res,
        "growth_m": {str(k): float(v) for k, v in m.items()},
        "scan": {
            "grid": params.scan_grid,
            "min_arg_oscillation": float(np.min(scan.arg_osc)),
            "max_arg_oscillation": float(np.max(scan.arg_osc)),
            "sup_abs_r": float(np.max(scan.absr_max)),
            "var_bound_excess": scan.var_excess,
            "branch_dev": scan.branch_dev,
        },
        "final_sequence_entries": int(np.count_nonzero(F.entries)),
    }
    daisy.write_report_json(report, outdir / "report.json")
    return 0


def cmd_opuc(args) -> int:
    coeffs = opuc.VerblunskyCoeffs.load(args.infile)
    n = len(coeffs)
    conn = opuc.connection_residual(coeffs, n, args.grid)
    wall = opuc.wall_ratio_residual(coeffs, n - 1, args.grid) if n >= 1 else 0.0
    series = opuc.ortho_series_partials(coeffs, n, args.grid)
    F = coeffs.to_sequence()
    a, b = forward_grid(F, args.grid)
    f_grid = CircleGrid(-(b / np.conj(a)) / CircleGrid(a).z)
    w = opuc.weight_from_schur(f_grid)
    outdir = Path(args.out)
    w.to_csv(outdir / "weight.csv")
    state = opuc.szego_run(coeffs, n, args.grid)
    RealGridFunction(np.abs(state.phi_star.values)).to_csv(outdir / "phi_star_abs.csv")
    daisy.write_report_json(
        {"input": str(args.infile), "grid": args.grid, "n": n,
         "connection_residual": conn, "wall_residual": wall,
         "series_residual": series,
         "weight_mean": w.mean(),
         "weight_min": float(np.min(w.values)),
         "sup_dev_weight_from_one": float(np.max(np.abs(w.values - 1.0)))},
        outdir / "opuc_report.json")
    return 0


def cmd_scan(args) -> int:
    seq = load_sequence(args.infile)
    scan = daisy.divergence_scan(seq, args.grid)
    outdir = Path(args.out)
    scan.to_csv(outdir / "oscillation.csv")
    daisy.write_report_json(
        {"input": str(args.infile), "grid": args.grid,
         "min_arg_oscillation": float(np.min(scan.arg_osc)),
         "max_arg_oscillation": float(np.max(scan.arg_osc)),
         "sup_abs_r": float(np.max(scan.absr_max)),
         "var_bound_excess": scan.var_excess,
         "branch_dev": scan.branch_dev},
        outdir / "scan_report.json")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nlft",
        description="SU(1,1) transfer-transform pipelines with reproducible file IO")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, infile=False, grid=None):
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
        if infile:
            p.add_argument("--in", dest="infile", required=True)
        if grid:
            p.add_argument("--grid", type=int, default=grid)

    p = sub.add_parser("forward", help="transform a sequence file")
    common(p, infile=True)
    p.add_argument("--grid", type=int, default=0,
                   help="also sample |b| and |r| on this grid")
    p.set_defaults(fn=cmd_forward)

    p = sub.add_parser("verify", help="run a verification suite")
    common(p)
    p.add_argument("--suite", default="identities",
                   choices=sorted(acceptance.SUITES))
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("invert", help="round-trip a half-line sequence")
    common(p, infile=True, grid=4096)
    p.set_defaults(fn=cmd_invert)

    p = sub.add_parser("daisy", help="assemble and certify the level schedule")
    common(p)
    p.add_argument("--config", default=None, help="TOML schedule file")
    p.set_defaults(fn=cmd_daisy)

    p = sub.add_parser("opuc", help="recurrence bridge diagnostics for a gamma file")
    common(p, infile=True, grid=4096)
    p.set_defaults(fn=cmd_opuc)

    p = sub.add_parser("scan", help="prefix oscillation scan of a sequence file")
    common(p, infile=True, grid=4096)
    p.set_defaults(fn=cmd_scan)
    return ap


def main(argv=None) -> int:
    _apply_thread_cap()
    args = build_parser().parse_args(argv)
    outdir = Path(args.out)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        return args.fn(args)
    except DaisyCertificationError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return 1
    except (NlftError, OSError, ValueError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
