"""
Acceptance criteria, each at its stated sample size and tolerance.

Every test reports one ``criterion N [PASS|FAIL]`` line (collected again in
the terminal summary). Criteria 5, 6 and 8 are hour-scale Monte-Carlo
reproductions and run only with ``--run-extended``.
"""
import math
import time

import numpy as np
import pytest

from alrmimo.alr import alr_decode, build_augmented, epsilon_diversity
from alrmimo.constellation import Constellation
from alrmimo.lattice import (alpha, integer_det, is_lll_reduced,
                             iteration_bound, lll_reduce)
from alrmimo.oracle import shortest_vector, verify_gamma_unique
from alrmimo.sim import (ExperimentConfig, diversity_slope,
                         run_complexity_sweep, run_ser_sweep, snr_at_ser)

ALPHA = alpha(0.75)


# -- 1 ---------------------------------------------------------------------

def test_criterion_1_reducedness_and_unimodularity(acceptance_report):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    bad_reduced = bad_det = bad_recon = 0
    n = 10_000
    for i in range(n):
        m = 2 + i % 7
        H = rng.standard_normal((m, m))
        r = lll_reduce(H)
        bad_reduced += not is_lll_reduced(r.h_red, 0.75)
        bad_det += abs(integer_det(r.u)) != 1
        err = np.linalg.norm(H @ r.u - r.h_red) / np.linalg.norm(r.h_red)
        bad_recon += err > 1e-9
    elapsed = time.perf_counter() - t0
    ok = bad_reduced == bad_det == bad_recon == 0 and elapsed < 60
    acceptance_report(1, "LLL reducedness and unimodularity", ok,
                      f"{n} bases m=2..8; not reduced {bad_reduced}, "
                      f"|det U| != 1 {bad_det}, HU != H_red {bad_recon}; "
                      f"{elapsed:.1f} s (limit 60)")
    assert ok


# -- 2 ---------------------------------------------------------------------

def test_criterion_2_bounds_against_oracle(acceptance_report):
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    tol = 1 + 1e-9
    counts = {"a(H) <= d_H": 0, "||h1|| <= 2^((m-1)/2) d_H": 0,
              "d_H/alpha^((m-1)/2) <= a(H_red) <= d_H": 0, "K bound": 0}
    n = 1000
    for i in range(n):
        m = 2 + i % 3
        H = rng.standard_normal((m, m))
        r = lll_reduce(H)
        _, d_h, _ = shortest_vector(H)
        if r.a_input > d_h * tol:
            counts["a(H) <= d_H"] += 1
        if np.linalg.norm(r.h_red[:, 0]) > ALPHA ** ((m - 1) / 2) * d_h * tol:
            counts["||h1|| <= 2^((m-1)/2) d_H"] += 1
        if not (d_h / ALPHA ** ((m - 1) / 2) <= r.a * tol
                and r.a <= d_h * tol):
            counts["d_H/alpha^((m-1)/2) <= a(H_red) <= d_H"] += 1
        if r.iterations > iteration_bound(r.a_input, r.big_a_input, m):
            counts["K bound"] += 1
    elapsed = time.perf_counter() - t0
    ok = sum(counts.values()) == 0 and elapsed < 300
    detail = ", ".join(f"{k}: {v} violations" for k, v in counts.items())
    acceptance_report(2, "lattice bounds vs exact oracle", ok,
                      f"{n} bases m=2..4; {detail}; {elapsed:.1f} s "
                      f"(limit 300)")
    assert ok


# -- 3 ---------------------------------------------------------------------

def test_criterion_3_alr_correctness_lemma(acceptance_report):
    rng = np.random.default_rng(3)
    S = Constellation.integer_range(-3, 3)   # index lattice is L(H) itself
    t0 = time.perf_counter()
    n, n_gamma = 10_000, 1_000
    fail = {"first": 0, "kmin": 0}
    gamma_fail = gamma_done = 0
    for i in range(n):
        m = 2 if i % 2 == 0 else 4
        eps = epsilon_diversity(m)
        H = rng.standard_normal((m, m)) * math.sqrt(0.5)
        _, d_h, _ = shortest_vector(H)
        x = S.sample(rng, m)
        w = rng.standard_normal(m)
        w *= 0.99 * eps * d_h / np.linalg.norm(w)
        y = H @ x + w
        red = lll_reduce(H)
        for variant in fail:
            out = alr_decode(H, y, S, epsilon=eps, variant=variant,
                             reduction=red)
            fail[variant] += not np.array_equal(out.x_hat, x)
        if gamma_done < n_gamma and i % (n // n_gamma) == 0:
            aug, _ = build_augmented(H, S.index_system(H, y), eps,
                                     reduction=red)
            v = np.append(-w, aug.t)
            gamma_fail += not verify_gamma_unique(aug.h_tilde, v,
                                                  ALPHA ** (m / 2))
            gamma_done += 1
    elapsed = time.perf_counter() - t0
    ok = (fail["first"] == fail["kmin"] == gamma_fail == 0
          and gamma_done == n_gamma and elapsed < 600)
    acceptance_report(3, "ALR correctness under ||w|| = 0.99 eps d_H", ok,
                      f"{n} instances m in {{2,4}}; first-column failures "
                      f"{fail['first']}, k-min failures {fail['kmin']}; "
                      f"gamma-unique failures {gamma_fail}/{gamma_done}; "
                      f"{elapsed:.1f} s (limit 600)")
    assert ok


# -- 4 ---------------------------------------------------------------------

ORDER = ("ml", "alr-v2", "alr-v1", "lll-sic", "lll-zf")


def _ordering_violations(records, order):
    """Pairs (better, worse, snr) where the better decoder's Wilson interval
    lies entirely above the worse one's."""
    out = []
    snrs = sorted({r.snr_db for r in records})
    for snr in snrs:
        pt = {r.decoder: r for r in records if r.snr_db == snr}
        for i, a in enumerate(order):
            for b in order[i + 1:]:
                lo_a, _ = pt[a].wilson()
                _, hi_b = pt[b].wilson()
                if lo_a > hi_b:
                    out.append((a, b, snr, pt[a].ser, pt[b].ser))
    return out


def test_criterion_4_desk_scale_ser_ordering(acceptance_report):
    cfg = ExperimentConfig(M=4, N=4, q=16, decoders=ORDER,
                           snr_db=(8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0),
                           trials=100_000, min_errors=0, seed=4)
    t0 = time.perf_counter()
    recs = run_ser_sweep(cfg)
    elapsed = time.perf_counter() - t0
    bad = _ordering_violations(recs, ORDER)
    table = "; ".join(
        f"{s:g} dB " + " ".join(f"{r.decoder}={r.ser:.3g}"
                                for r in recs if r.snr_db == s)
        for s in cfg.snr_db)
    viol = "; ".join(f"{a}>{b} at {s:g} dB ({sa:.4g} vs {sb:.4g})"
                     for a, b, s, sa, sb in bad) or "none"
    ok = not bad and elapsed < 1800
    acceptance_report(4, "SER ordering ML <= ALR-v2 <= ALR-v1 <= LLL-SIC "
                      "<= LLL-ZF (4x4 16-QAM)", ok,
                      f"separated violations: {viol}; {elapsed:.0f} s "
                      f"(limit 1800); SER: {table}")
    assert ok


# -- 5, 6 (extended) -------------------------------------------------------

def _gap(recs, a, b, target):
    return snr_at_ser(recs, a, target) - snr_at_ser(recs, b, target)


@pytest.mark.extended
def test_criterion_5_fig1_gaps(acceptance_report):
    cfg = ExperimentConfig(M=6, N=6, q=16,
                           decoders=("ml", "alr-v1", "alr-v2", "lll-sic"),
                           snr_db=tuple(float(s) for s in range(18, 32)),
                           trials=1_000_000, min_errors=5_000, seed=5)
    recs = run_ser_sweep(cfg)
    target = 2e-4
    v1_ml = _gap(recs, "alr-v1", "ml", target)
    sic_v1 = _gap(recs, "lll-sic", "alr-v1", target)
    v2_ml = _gap(recs, "alr-v2", "ml", target)
    checks = [abs(v1_ml - 2.5) <= 0.5, abs(sic_v1 - 1.5) <= 0.5,
              abs(v2_ml - 2.2) <= 0.5]
    ok = all(checks)
    acceptance_report(5, "6x6 16-QAM dB gaps at SER 2e-4", ok,
                      f"ALR-v1 vs ML {v1_ml:.2f} dB (want 2.5+-0.5), "
                      f"LLL-SIC vs ALR-v1 {sic_v1:.2f} dB (want 1.5+-0.5), "
                      f"ALR-v2 vs ML {v2_ml:.2f} dB (want 2.2+-0.5)")
    assert ok


@pytest.mark.extended
def test_criterion_6_mmse_gaps(acceptance_report):
    dec = ("ml", "alr-v2+mmse", "lll-sic+mmse")
    target = 1e-4
    got = {}
    for M, grid in ((6, range(14, 30)), (8, range(14, 30))):
        cfg = ExperimentConfig(M=M, N=M, q=16, decoders=dec,
                               snr_db=tuple(float(s) for s in grid),
                               trials=1_000_000, min_errors=5_000, seed=6)
        recs = run_ser_sweep(cfg)
        got[M] = (_gap(recs, "alr-v2+mmse", "ml", target),
                  _gap(recs, "lll-sic+mmse", "alr-v2+mmse", target))
    checks = [abs(got[6][0] - 0.4) <= 0.3, abs(got[6][1] - 2.3) <= 0.5,
              abs(got[8][1] - 3.5) <= 0.7, abs(got[8][0] - 0.8) <= 0.4]
    ok = all(checks)
    acceptance_report(6, "MMSE-GDFE dB gaps at SER 1e-4", ok,
                      f"6x6: ALR vs ML {got[6][0]:.2f} dB (want 0.4+-0.3), "
                      f"gain over LLL-SIC {got[6][1]:.2f} dB (want 2.3+-0.5); "
                      f"8x8: gain {got[8][1]:.2f} dB (want 3.5+-0.7), "
                      f"ALR vs ML {got[8][0]:.2f} dB (want 0.8+-0.4)")
    assert ok


# -- 7 ---------------------------------------------------------------------

def test_criterion_7_complexity(acceptance_report):
    cfg = ExperimentConfig(mode="complexity", q=16,
                           decoders=("lll-sic", "alr-v2", "calr-v2"),
                           antennas=(2, 3, 4, 5, 6, 7, 8), snr_db=(12.0,),
                           trials=2_000, seed=7)
    t0 = time.perf_counter()
    recs = run_complexity_sweep(cfg)
    elapsed = time.perf_counter() - t0
    at = {r.decoder: r for r in recs}
    it_ratio = {n: at[f"alr-v2@{n}x{n}"].mean_lll_iterations
                / at[f"lll-sic@{n}x{n}"].mean_lll_iterations
                for n in range(4, 9)}
    flop_ratio = {n: at[f"alr-v2@{n}x{n}"].mean_flops
                  / at[f"lll-sic@{n}x{n}"].mean_flops for n in range(2, 9)}
    savings = {n: 1 - at[f"calr-v2@{n}x{n}"].mean_flops
               / at[f"alr-v2@{n}x{n}"].mean_flops for n in range(2, 9)}
    k_viol = sum(r.extras["k_bound_violations"] for r in recs
                 if r.decoder.startswith("lll-sic"))
    ok_it = all(1.5 <= v <= 3 for v in it_ratio.values())
    ok_flops = 0.7 <= flop_ratio[6] <= 1.3
    ok_save = all(0.25 <= v <= 0.55 for v in savings.values())
    ok = ok_it and ok_flops and ok_save and k_viol == 0 and elapsed < 600
    fmt = lambda d: " ".join(f"n={k}:{v:.3f}" for k, v in d.items())
    acceptance_report(7, "complexity ratios", ok,
                      f"ALR/LLL iterations {fmt(it_ratio)} (want [1.5,3]); "
                      f"ALR/LLL-SIC flops {fmt(flop_ratio)} "
                      f"(want [0.7,1.3] at n=6); complex-ALR savings "
                      f"{fmt(savings)} (want [0.25,0.55]); K-bound "
                      f"violations {k_viol}; {elapsed:.0f} s (limit 600)")
    assert ok


# -- 8 (extended) ----------------------------------------------------------

@pytest.mark.extended
def test_criterion_8_diversity_slope(acceptance_report):
    cfg = ExperimentConfig(M=2, N=2, q=4, decoders=("alr-v2", "alr-v1"),
                           snr_db=tuple(float(s) for s in range(10, 42, 2)),
                           trials=2_000_000, min_errors=2_000, seed=8)
    recs = run_ser_sweep(cfg)
    slopes = {d: diversity_slope(recs, d) for d in cfg.decoders}
    ok = all(s <= -1.5 for s in slopes.values())
    acceptance_report(8, "receive diversity slope (2x2 4-QAM)", ok,
                      " ".join(f"{d}: {s:.2f}" for d, s in slopes.items())
                      + " (want <= -1.5)")
    assert ok
