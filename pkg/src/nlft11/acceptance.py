"""The acceptance suite: ten machine-checkable criteria with pinned tolerances.

Each criterion is a zero-argument callable returning ``(passed, detail)``;
the pytest module ``tests/test_acceptance.py`` prints one PASS/FAIL line per
criterion and the CLI ``verify`` command aggregates them into a JSON report.
Random sweeps are seeded (default seed 7) and draw entry moduli as
``bound * u**2`` with uniform phases: the square law keeps the accumulated
normalisation products small enough that coefficient-level identities hold
to the stated tolerances in double precision while still exercising entries
up to the bound.
"""

from __future__ import annotations

import time
from functools import lru_cache

import numpy as np

from .daisy import (DESK_SCHEDULE, DaisyParams, assemble_H, divergence_scan,
                    growth_slope, growth_table)
from .harmonic import arg_outer, plancherel_residual
from .inverse import roundtrip_error
from .laurent import CircleGrid, eval_grid, star
from .nlft import ComplexSequence, concat_disjoint, forward, forward_grid, su11_residual
from .opuc import (VerblunskyCoeffs, connection_residual,
                   ortho_series_partials, wall_ratio_residual)

DEFAULT_SEED = 7


def _random_sequence(rng, max_len=32, bound=0.9, offset_range=(-16, 16)):
    length = int(rng.integers(1, max_len + 1))
    offset = int(rng.integers(offset_range[0], offset_range[1] + 1))
    mods = bound * rng.random(length) ** 2
    phases = 2.0 * np.pi * rng.random(length)
    return ComplexSequence.make(offset, mods * np.exp(1j * phases))


def _sweep_sequences(seed, count=200):
    rng = np.random.default_rng(seed)
    return [_random_sequence(rng) for _ in range(count)]


def criterion_1(seed=DEFAULT_SEED):
    """Normalisation identity star(a)a - star(b)b = 1 across a seeded sweep."""
    t0 = time.perf_counter()
    worst = 0.0
    for F in _sweep_sequences(seed):
        worst = max(worst, su11_residual(forward(F)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 10.0
    return ok, {"max_residual": worst, "tol": 1e-9,
                "elapsed_s": round(elapsed, 3), "runtime_cap_s": 10.0,
                "seed": seed, "count": 200}


def criterion_2(seed=DEFAULT_SEED):
    """Power identity: sweep residual at grid 8192 plus the exact single-site case."""
    worst = 0.0
    for F in _sweep_sequences(seed):
        worst = max(worst, plancherel_residual(F, 8192))
    single = ComplexSequence.single(0, 0.5)
    _, b = forward_grid(single, 8192)
    lhs = float(np.log(4.0 / 3.0))
    rhs = float(np.mean(np.log1p(np.abs(b) ** 2)))
    single_res = abs(lhs - rhs)
    ok = worst <= 1e-8 and single_res <= 1e-14
    return ok, {"max_residual": worst, "tol": 1e-8,
                "single_site_residual": single_res, "single_tol": 1e-14,
                "seed": seed}


def criterion_3(seed=DEFAULT_SEED):
    """Disjoint-support concatenation: coefficientwise prediction plus the
    samplewise ratio-stability bound."""
    rng = np.random.default_rng(seed)
    worst_coeff = 0.0
    worst_excess = -np.inf
    for _ in range(100):
        F = _random_sequence(rng, max_len=12, bound=0.8, offset_range=(-8, 4))
        G = _random_sequence(rng, max_len=12, bound=0.8, offset_range=(-4, 8))
        N1 = F.support_max
        N2 = -G.support_min
        N = N1 + N2 + 1 + int(rng.integers(0, 9))
        pred = concat_disjoint(F, G, N)
        ref = forward(F + G.shift(N))
        gap_a = (pred.a - ref.a).max_abs_coeff()
        gap_b = (pred.b - ref.b).max_abs_coeff()
        worst_coeff = max(worst_coeff, gap_a, gap_b)
        size = 2048
        aT, bT = forward_grid(F + G.shift(N), size)
        aF, bF = forward_grid(F, size)
        aG, bG = forward_grid(G, size)
        rT = bT / np.conj(aT)
        rF = bF / np.conj(aF)
        rG = np.abs(bG / np.conj(aG))
        bound = rG / (1.0 - rG)
        worst_excess = max(worst_excess,
                           float(np.max(np.abs(rT - rF) - bound)))
    ok = worst_coeff <= 1e-10 and worst_excess <= 1e-12
    return ok, {"max_coeff_gap": worst_coeff, "tol": 1e-10,
                "max_ratio_bound_excess": worst_excess, "seed": seed}


def criterion_4(seed=DEFAULT_SEED):
    """Shift covariance is an exact integer reindexing (zero tolerance)."""
    rng = np.random.default_rng(seed)
    for _ in range(50):
        F = _random_sequence(rng, max_len=16, bound=0.9)
        M = int(rng.integers(-40, 41))
        p0 = forward(F)
        p1 = forward(F.shift(M))
        same_a = (p1.a.lo == p0.a.lo and np.array_equal(p1.a.coeffs, p0.a.coeffs))
        b_shift = p0.b.shifted(M)
        same_b = (p1.b.lo == b_shift.lo and np.array_equal(p1.b.coeffs, b_shift.coeffs))
        if not (same_a and same_b):
            return False, {"failed_shift": M, "seed": seed}
    return True, {"checks": 50, "tolerance": 0.0, "seed": seed}


def criterion_5(seed=DEFAULT_SEED):
    """Inverse round trip in the small-norm regime: supp in [1,16], l1 <= 0.5."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        length = int(rng.integers(1, 17))
        mods = rng.random(length) ** 2
        phases = 2.0 * np.pi * rng.random(length)
        ent = mods * np.exp(1j * phases)
        l1 = float(np.sum(np.abs(ent)))
        target = 0.5 * float(rng.uniform(0.3, 1.0))
        if l1 > 0:
            ent *= target / l1
        F = ComplexSequence.make(1, ent)
        worst = max(worst, roundtrip_error(F, 4096))
    ok = worst <= 1e-6
    return ok, {"max_recovery_error": worst, "tol": 1e-6, "seed": seed}


def _random_gammas(rng, n=32, bound=0.8):
    mods = bound * rng.random(n) ** 2
    phases = 2.0 * np.pi * rng.random(n)
    return VerblunskyCoeffs.make(mods * np.exp(1j * phases))


def criterion_6(seed=DEFAULT_SEED):
    """Recurrence bridge and continued-fraction bridge at grid 4096."""
    rng = np.random.default_rng(seed)
    worst_conn = 0.0
    worst_wall = 0.0
    for _ in range(20):
        gam = _random_gammas(rng)
        worst_conn = max(worst_conn, connection_residual(gam, 32, 4096))
        worst_wall = max(worst_wall, wall_ratio_residual(gam, 30, 4096))
    ok = worst_conn <= 1e-9 and worst_wall <= 1e-9
    return ok, {"max_connection_residual": worst_conn,
                "max_wall_residual": worst_wall, "tol": 1e-9, "seed": seed}


def criterion_7(seed=DEFAULT_SEED):
    """Telescoped partial-sum identity of the orthogonal series."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        gam = _random_gammas(rng)
        worst = max(worst, ortho_series_partials(gam, 32, 4096))
    ok = worst <= 1e-10
    return ok, {"max_residual": worst, "tol": 1e-10, "seed": seed}


def unwrap_arg_oracle(a_poly, size: int) -> np.ndarray:
    """Independent argument branch: pointwise angles of the a^(*) samples,
    unwrapped along the grid and recentred by a whole number of turns."""
    astar_vals = np.conj(eval_grid(a_poly, size).values)
    ph = np.unwrap(np.angle(astar_vals))
    turns = np.round(np.mean(ph) / (2.0 * np.pi))
    return ph - 2.0 * np.pi * turns


def criterion_8(seed=DEFAULT_SEED):
    """The multiplier branch of arg a^(*) matches the unwrapped pointwise branch."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        F = _random_sequence(rng, max_len=24, bound=0.6, offset_range=(-12, 12))
        pair = forward(F)
        size = 8192
        oracle = unwrap_arg_oracle(pair.a, size)
        hil = arg_outer(CircleGrid(eval_grid(pair.b, size).values)).values
        worst = max(worst, float(np.max(np.abs(oracle - hil))))
    ok = worst <= 1e-6
    return ok, {"max_branch_gap": worst, "tol": 1e-6, "seed": seed}


@lru_cache(maxsize=1)
def growth_summary():
    """m(nu) table at delta=0.3, grid 2^15, for nu in {16, 64, 256}."""
    t0 = time.perf_counter()
    rows, m = growth_table((16, 64, 256), 0.3, 2 ** 15)
    elapsed = time.perf_counter() - t0
    return rows, m, elapsed


def criterion_9(seed=DEFAULT_SEED):
    """Monotone argument growth of the ideal bump products in nu.

    Deterministic; the seed argument is accepted for interface uniformity.
    """
    rows, m, elapsed = growth_summary()
    slope = growth_slope(m)
    ok = (m[16] > 0.0 and m[64] > m[16] and m[256] > m[64]
          and slope > 0.0 and elapsed < 300.0)
    return ok, {"m": {k: float(v) for k, v in m.items()},
                "ls_slope_vs_log_nu": slope,
                "elapsed_s": round(elapsed, 3), "runtime_cap_s": 300.0}


@lru_cache(maxsize=1)
def desk_h():
    """Two-level alternating-semicircle assembly used by the scan criterion."""
    params = DaisyParams(schedule=DESK_SCHEDULE[:2])
    return assemble_H(params)


def criterion_10(seed=DEFAULT_SEED):
    """Every circle point oscillates: the prefix argument scan of the desk
    two-level assembly clears a quarter of the level-0 growth floor, and the
    per-step ratio-variation bound holds along the entire sweep.

    Deterministic; the seed argument is accepted for interface uniformity.
    """
    _, m, _ = growth_summary()
    H, rep = desk_h()
    scan = divergence_scan(H, 4096)
    floor = 0.25 * m[16]
    min_osc = float(np.min(scan.arg_osc))
    ok = min_osc >= floor and scan.var_excess <= 1e-10
    return ok, {"min_arg_oscillation": min_osc, "floor": floor,
                "var_bound_excess": scan.var_excess,
                "branch_dev": scan.branch_dev,
                "levels": [r.nu for r in rep.levels]}


CRITERIA = (
    (1, "su11-identity", criterion_1),
    (2, "plancherel", criterion_2),
    (3, "concatenation", criterion_3),
    (4, "shift-covariance", criterion_4),
    (5, "inverse-roundtrip", criterion_5),
    (6, "opuc-bridges", criterion_6),
    (7, "ortho-series", criterion_7),
    (8, "argument-branch", criterion_8),
    (9, "argument-growth", criterion_9),
    (10, "oscillation-scan", criterion_10),
)

SUITES = {
    "identities": (1, 2, 3, 4),
    "inverse": (5,),
    "opuc": (6, 7),
    "harmonic": (8,),
    "growth": (9,),
    "scan": (10,),
    "acceptance": tuple(range(1, 11)),
}


def run_suite(name: str, seed: int = DEFAULT_SEED, echo=None) -> dict:
    """Run a named criterion suite; returns a JSON-ready summary."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    results = {}
    all_ok = True
    for num, label, fn in CRITERIA:
        if num not in SUITES[name]:
            continue
        ok, detail = fn(seed)
        results[f"criterion_{num:02d}_{label}"] = {"passed": bool(ok), **detail}
        all_ok &= ok
        if echo:
            echo(f"[criterion {num:2d}] {'PASS' if ok else 'FAIL'} {label}: {detail}")
    return {"suite": name, "seed": seed, "passed": bool(all_ok), "results": results}
