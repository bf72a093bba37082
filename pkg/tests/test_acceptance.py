"""One test per acceptance criterion; each prints a PASS/FAIL line.

Problems are rebuilt inside each test (no shared caches) so the recorded
runtimes cover the full computation.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from ringshaper import bounds as bnd
from ringshaper import scenario
from ringshaper.caustic import (endpoint_convergence, integrate_phase, on_axis_asymptotic,
                                solve_caustic_map)
from ringshaper.cli import EXIT_OK, main
from ringshaper.grids import OmegaGrid, SGrid
from ringshaper.gs import run_gs
from ringshaper.problem import ShapingProblem
from ringshaper.profiles import Profile
from ringshaper.pulse import chirp_parameters
from ringshaper.spectral import (TargetSpectrum, error_functional, forward_field,
                                 on_axis_field, riemann_transform)

from conftest import FRINGES, RING, smooth_bump

CONFIGS = Path(__file__).resolve().parents[1] / "scripts" / "configs"
PRESET_FILES = {"remote-bessel": "remote_bessel.toml", "oscillatory": "oscillatory.toml",
                "pulse": "pulse.toml"}
REFERENCE_DELTA = {1: -8.6, 5: -0.92, 10: 0.04, 15: 0.3}


def _preset_problem(kind):
    cfg = scenario.preset(kind)
    P = cfg.problem()
    cmap = solve_caustic_map(cfg.source.shape, P.target.shape, P.params, cfg.ode_steps)
    return cfg, P, cmap, integrate_phase(cmap)


def test_criterion_1_plancherel(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        lo = rng.uniform(0.01, 0.015)
        hi = lo + rng.uniform(0.002, 0.01)
        sgrid = SGrid(lo, hi, int(rng.integers(256, 2048)))
        x = (sgrid.s - lo) / (hi - lo)
        g = smooth_bump(sgrid.s, lo, hi) * (1 + 0.5 * np.sin(rng.uniform(1, 20) * x))
        phi = rng.normal(scale=500) * x + rng.normal(scale=200) * x ** 2 + rng.normal(scale=5) * np.cos(9 * x)
        band = OmegaGrid.full_band(sgrid, 0.0)
        F = forward_field(sgrid, g, phi, band).values
        ref = math.sqrt(2 * math.pi) * math.sqrt(np.sum(sgrid.weights * g ** 2))
        got = math.sqrt(np.sum(band.weights * np.abs(F) ** 2))
        worst = max(worst, abs(got - ref) / ref)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 1.0
    assert criterion(1, ok, f"max relative Plancherel mismatch {worst:.2e} over 20 pairs ({elapsed:.2f} s)")


def test_criterion_2_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    errs = {}
    for kind in PRESET_FILES:
        cfg, P, _, phase = _preset_problem(kind)
        idx = np.linspace(0, P.ogrid.n - 1, 128).astype(int)
        omega = P.ogrid.omega[idx]
        g_fn = lambda s, P=P: P.params.E0 * P.source(np.sqrt(s))
        ref = riemann_transform(g_fn, phase.at_s, P.sgrid.s_min, P.sgrid.s_max, 10 * (P.sgrid.n - 1) + 1, omega)
        F = forward_field(P.sgrid, P.g, phase.on_grid(P.sgrid), P.ogrid).values[idx]
        errs[kind] = float(np.max(np.abs(F - ref)) / np.max(np.abs(ref)))
    elapsed = time.perf_counter() - t0
    ok = max(errs.values()) <= 1e-8 and elapsed < 10.0
    detail = ", ".join(f"{k} {v:.1e}" for k, v in errs.items())
    assert criterion(2, ok, f"relative deviation from 10x oversampled quadrature: {detail} ({elapsed:.1f} s)")


def test_criterion_3_gs_monotone(criterion):
    t0 = time.perf_counter()
    worst = -np.inf
    for kind in PRESET_FILES:
        _, P, _, phase = _preset_problem(kind)
        v = run_gs(phase.on_grid(P.sgrid), P.sgrid, P.g, P.G, 100).values
        worst = max(worst, float(np.max(np.diff(v)) / v[0]))
    for seed in range(20):
        rng = np.random.default_rng(1000 + seed)
        sgrid = SGrid(0.01, 0.02, 512)
        g = smooth_bump(sgrid.s, 0.01, 0.02) * (1 + 0.5 * rng.random(sgrid.n))
        grid = OmegaGrid(2000.0, 2000.0 + rng.uniform(500, 5000), 384)
        G = TargetSpectrum(grid, rng.uniform(0, 1, grid.n) * rng.uniform(1e-4, 1e-2))
        v = run_gs(rng.uniform(-np.pi, np.pi, sgrid.n), sgrid, g, G, 100).values
        worst = max(worst, float(np.max(np.diff(v)) / v[0]))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 30.0
    assert criterion(3, ok, f"largest step increase {worst:.2e} x I0 over 3 presets + 20 random triples ({elapsed:.1f} s)")


def test_criterion_4_bound_soundness(criterion):
    t0 = time.perf_counter()
    configs = [scenario.preset(k) for k in PRESET_FILES]
    configs += [scenario.preset("remote-bessel", WT_prime=w) for w in (1.0, 2.0, 5.0, 100.0)]
    configs += [scenario.preset("oscillatory", m=m) for m in (1, 15)]
    checked, min_margin, skipped = 0, np.inf, 0
    for cfg in configs:
        P = cfg.problem()
        if bnd.normalization_residual(P.G, P.g_profile) > 1e-6:
            skipped += 1
            continue
        rep = bnd.bounds_report(P.G, P.g_profile, P.params)
        lower = max(rep.plancherel_lower, rep.thm2_lower, rep.thm3_lower_g, rep.thm3_lower_G,
                    rep.best_local_lower)
        cmap = solve_caustic_map(cfg.source.shape, P.target.shape, P.params, cfg.ode_steps)
        phi_sp = integrate_phase(cmap).on_grid(P.sgrid)
        trace = run_gs(phi_sp, P.sgrid, P.g, P.G, cfg.gs_iterations)
        rng = np.random.default_rng(checked)
        x = (P.sgrid.s - P.sgrid.s_min) / (P.sgrid.s_max - P.sgrid.s_min)
        phases = [phi_sp, trace.final_phase]
        for i in range(50):
            if i % 3 == 0:
                phases.append(rng.uniform(-np.pi, np.pi, P.sgrid.n))
            elif i % 3 == 1:
                phases.append(phi_sp + rng.normal(scale=rng.uniform(0.01, 2.0), size=P.sgrid.n))
            else:
                c = rng.normal(size=4)
                phases.append(P.focusing_phase() + 50 * (c[0] * x + c[1] * x ** 2 + c[2] * x ** 3)
                              + 5 * np.sin(20 * c[3] * x))
        I = np.array([error_functional(P.G, P.sgrid, P.g, phi) for phi in phases])
        min_margin = min(min_margin, float(np.min(I - lower) / P.G.norm()))
        checked += 1
    elapsed = time.perf_counter() - t0
    ok = checked == len(configs) and min_margin >= 0 and elapsed < 60.0
    assert criterion(4, ok, f"{checked} normalized problems x 52 designs; min (I - master bound)/||G|| = "
                            f"{min_margin:.3e}; {skipped} skipped ({elapsed:.1f} s)")


def test_criterion_5_endpoint_convergence(criterion):
    t0 = time.perf_counter()
    results = {}
    src = Profile.ring(RING["r0"], RING["W0_prime"])
    for WT_prime in scenario.PRESETS["remote-bessel"]["sweep_values"]:
        P = ShapingProblem.build(RING["k"], src, Profile.flat_top(RING["zd"], WT_prime, RING["n"]), n_s=64, n_omega=64)
        errs, orders = endpoint_convergence(src.shape, P.target.shape, P.params, (1024, 2048, 4096))
        results[WT_prime] = (errs[-1], orders.min())
    elapsed = time.perf_counter() - t0
    worst_err = max(e for e, _ in results.values())
    worst_order = min(o for _, o in results.values())
    ok = worst_err <= 1e-4 and worst_order >= 3.5 and elapsed < 5.0
    assert criterion(5, ok, f"endpoint error at 4096 steps <= {worst_err:.2e}; min observed order "
                            f"{worst_order:.2f} over WT' sweep ({elapsed:.1f} s)")


def test_criterion_6_asymptotic_consistency(criterion):
    t0 = time.perf_counter()
    src = Profile.ring(RING["r0"], RING["W0_prime"])
    tgt = Profile.flat_top(RING["zd"], 100.0, RING["n"])
    devs = []
    for factor in (1, 2, 4):
        P = ShapingProblem.build(factor * RING["k"], src, tgt)
        cmap = solve_caustic_map(src.shape, tgt.shape, P.params)
        phi = integrate_phase(cmap).on_grid(P.sgrid)
        z = P.ogrid.z(P.params.k)[::8]
        full = np.abs(on_axis_field(P.sgrid, P.g, phi, z, P.params.k).values)
        asym = on_axis_asymptotic(cmap, src.shape, z)
        devs.append(float(np.max(np.abs(full - asym)) / P.params.ET))
    elapsed = time.perf_counter() - t0
    ok = devs[0] > devs[1] > devs[2] and elapsed < 20.0
    assert criterion(6, ok, "sup |full - asymptotic| / E_T at k, 2k, 4k: "
                            + ", ".join(f"{d:.4f}" for d in devs) + f" ({elapsed:.1f} s)")


def test_criterion_7_regime_reproduction(criterion):
    t0 = time.perf_counter()
    results = scenario.sweep(scenario.preset("remote-bessel"))
    elapsed = time.perf_counter() - t0
    table = {r.sweep_point["value"]: r for r in results}
    sp = {w: r.summary["I_stationary_normalized"] for w, r in table.items()}
    gs = {w: r.summary["I_gs_normalized"] for w, r in table.items()}
    a = all(r.summary["I_gs"] <= r.summary["I_stationary"] for r in results)
    b = gs[100.0] <= 0.1
    first = table[1.0]
    beta_half = first.report.beta_half_width
    half_bound = bnd.thm2_lower_bound(1.0, beta_half)
    c = min(sp[1.0], gs[1.0]) >= 0.5 and half_bound >= 0.5
    ok = a and b and c and elapsed < 120.0
    assert criterion(7, ok, f"(a) I_gs <= I_sp at all WT': {a}; (b) I_gs/||G|| at 100 m = {gs[100.0]:.4f}; "
                            f"(c) I/||G|| at 1 m = {min(sp[1.0], gs[1.0]):.3f}, half-width beta bound "
                            f"{half_bound:.3f} (beta_half={beta_half:.3f}) ({elapsed:.1f} s)")


def _deltas(l1_power):
    src = Profile.ring(FRINGES["r0"], FRINGES["W0_prime"])
    out = {}
    for m in REFERENCE_DELTA:
        P = ShapingProblem.build(FRINGES["k"], src, Profile.oscillating(FRINGES["zd"], FRINGES["WT_prime"], m))
        out[m] = bnd.delta_m(P.G, P.g_profile, P.params, m, FRINGES["WT_prime"], l1_power)
    return out


def test_criterion_8_delta_signs(criterion):
    t0 = time.perf_counter()
    d = _deltas(2)
    elapsed = time.perf_counter() - t0
    signs = tuple(np.sign(d[m]) for m in REFERENCE_DELTA)
    ok = signs == (-1, -1, 1, 1) and elapsed < 30.0
    assert criterion("8 (sign pattern)", ok, "squared-L1 delta_m for m=1,5,10,15: "
                     + ", ".join(f"{d[m]:+.3f}" for m in REFERENCE_DELTA) + f" ({elapsed:.1f} s)")


@pytest.mark.xfail(strict=True, reason="reference delta magnitudes are not reproduced by either L1 "
                                       "convention; analysis in the decisions ledger")
def test_criterion_8_delta_magnitudes(criterion):
    variants = {"squared": _deltas(2), "unsquared": _deltas(1)}

    def misses(d):
        return [m for m, ref in REFERENCE_DELTA.items() if abs(d[m] - ref) > 0.3 * abs(ref)]

    best = min(variants, key=lambda k: len(misses(variants[k])))
    d = variants[best]
    ok = not misses(d)
    detail = (f"best convention '{best}': " + ", ".join(f"m={m} {d[m]:+.3f} vs {ref:+.2f}"
                                                        for m, ref in REFERENCE_DELTA.items())
              + f"; outside +-30% for m in {misses(d)}")
    assert criterion("8 (magnitudes)", ok, detail)


def test_criterion_9_chirp_numbers(criterion):
    t0 = time.perf_counter()
    c = chirp_parameters(50.0, 1000.0, 20.0)
    width_err = abs(c.width(1000.0) - 50.0) / 50.0
    h = 1e-3
    slope = (c.width(1000.0 + h) - c.width(1000.0 - h)) / (2 * h)
    elapsed = time.perf_counter() - t0
    ok = (199 <= c.alpha <= 202 and 795 <= c.tau0 <= 805 and width_err <= 1e-10
          and abs(slope) <= 1e-6 and elapsed < 1.0)
    assert criterion(9, ok, f"alpha = {c.alpha:.3f} fs, tau0 = {c.tau0:.3f} fs, |W(zd)-tau_T|/tau_T = "
                            f"{width_err:.1e}, W'(zd) = {slope:.1e} fs/m")


def test_criterion_10_determinism(criterion, tmp_path):
    t0 = time.perf_counter()
    same, worst = True, 0.0
    for kind, fname in PRESET_FILES.items():
        cfg = CONFIGS / fname
        hashes = []
        for rep in ("a", "b"):
            out = tmp_path / f"{kind}-{rep}"
            assert main(["run", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
            hashes.append(scenario.manifest_hash(out / "manifest.json"))
        same &= hashes[0] == hashes[1]
        config = scenario.load_config(cfg)
        for table in ("phase_stationary.csv", "phase_gs.csv"):
            v = scenario.verify(tmp_path / f"{kind}-a" / table, config)
            worst = max(worst, v.relative_error)
    elapsed = time.perf_counter() - t0
    ok = same and worst <= 1e-12 and elapsed < 60.0
    assert criterion(10, ok, f"identical manifest hashes: {same}; max verify relative error {worst:.1e} "
                             f"({elapsed:.1f} s)")
