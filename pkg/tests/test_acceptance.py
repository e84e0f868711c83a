"""Acceptance suite: ten end-to-end criteria, one test (and one pass/fail
line under pytest -v) per criterion.

Each test measures first, then asserts, so a failing criterion reports the
measured values in its message.  Tolerances and runtime budgets are pinned
in-line; seeds are the neutral defaults (seed0 = 0) everywhere.
"""
import math
import time

import numpy as np

from cliquewitness.decomposition import (
    ComponentKind,
    kernel_identities,
    verify_expansion_H12,
    verify_expansion_H22,
)
from cliquewitness.harness import check_records, ExperimentConfig, run
from cliquewitness.labelings import exact_expected_trace
from cliquewitness.models import sample_er
from cliquewitness.params import derive_alphas, WitnessParams
from cliquewitness.spectral import (
    eigenvalues_expected_H22,
    evaluate_W_conditions,
    expected_block,
    expected_H12_norms,
    ProjectorFamily,
)

WINDOW_C0 = 0.25


def window_kappa(n, c0=WINDOW_C0):
    return c0 * n ** (-2 / 3) / math.log(n)


def report(num, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def aggregate(records, n, name):
    for rec in records:
        if rec.n == n:
            for key, value in rec.aggregates:
                if key == name:
                    return value
    return None


def test_criterion_01_exact_expansion_identities():
    t0 = time.perf_counter()
    worst_ratio = 0.0
    for n in (15, 30, 40):
        for p in (0.1, 0.5):
            params = derive_alphas(window_kappa(n), p)
            scale = params.alpha2
            for seed in range(3):
                g = sample_er(n, p, seed=seed)
                residual = max(
                    verify_expansion_H22(g, params), verify_expansion_H12(g, params)
                )
                worst_ratio = max(worst_ratio, residual / scale)
    elapsed = time.perf_counter() - t0
    ok = worst_ratio <= 1e-12 and elapsed < 120.0
    report(
        1,
        ok,
        f"expansion residual within {worst_ratio:.3e} of scale (tol 1e-12), "
        f"{elapsed:.1f}s < 120s",
    )


def test_criterion_02_expected_spectrum_and_mixed_norms():
    t0 = time.perf_counter()
    settings = (
        derive_alphas(window_kappa(25), 0.5),
        WitnessParams(kappa=None, p=0.3, alpha=(0.3, 0.05, 0.01, 0.002)),
    )
    worst_eig = 0.0
    worst_zero = 0.0
    worst_survivor = 0.0
    for params in settings:
        for n in (6, 12, 25):
            spectrum = eigenvalues_expected_H22(n, params)
            lams = (spectrum.lambda0, spectrum.lambda1, spectrum.lambda2)
            assert spectrum.multiplicities == (1, n - 1, n * (n - 3) // 2)
            target = np.sort(
                np.concatenate(
                    [np.full(m, v) for v, m in zip(lams, spectrum.multiplicities)]
                )
            )
            dense = np.sort(np.linalg.eigvalsh(expected_block("H22", n, params)))
            rel = np.max(np.abs(dense - target)) / max(abs(v) for v in lams)
            worst_eig = max(worst_eig, rel)

            h12 = expected_block("H12", n, params)
            fam = ProjectorFamily(n)
            q = np.full((n, n), 1.0 / n)
            q_perp = np.eye(n) - q
            dense_norms = [
                np.linalg.norm(q_perp @ h12 @ fam.dense(a), 2) for a in range(3)
            ] + [np.linalg.norm(q @ h12 @ fam.dense(a), 2) for a in range(3)]
            table = expected_H12_norms(n, params)
            zeros = (dense_norms[0], dense_norms[2], dense_norms[4], dense_norms[5])
            worst_zero = max(worst_zero, max(zeros) / params.alpha2)
            closed = math.sqrt(n - 2) * abs(
                params.alpha2 - params.alpha3 * params.p**2
            )
            assert table.qperp_p1 == closed
            worst_survivor = max(
                worst_survivor, abs(dense_norms[1] - closed) / closed
            )
    elapsed = time.perf_counter() - t0
    ok = (
        worst_eig <= 1e-10
        and worst_zero <= 1e-10
        and worst_survivor <= 1e-9
        and elapsed < 60.0
    )
    report(
        2,
        ok,
        f"eigenvalue rel dev {worst_eig:.3e} <= 1e-10, vanishing compressions "
        f"{worst_zero:.3e} <= 1e-10*scale, survivor rel dev {worst_survivor:.3e} "
        f"<= 1e-9, {elapsed:.1f}s < 60s",
    )


def test_criterion_03_projector_algebra():
    t0 = time.perf_counter()
    worst_orth = 0.0
    worst_gram = 0.0
    for n in (10, 20):
        fam = ProjectorFamily(n)
        dense = [fam.dense(a) for a in range(3)]
        for a in range(3):
            for b in range(3):
                target = dense[a] if a == b else 0.0
                worst_orth = max(
                    worst_orth, np.max(np.abs(dense[a] @ dense[b] - target))
                )
        ranks = [round(np.trace(dense[a])) for a in range(3)]
        assert ranks == [1, n - 1, n * (n - 3) // 2]
        v1 = np.stack([fam.basis_v1(i) for i in range(1, n + 1)])
        gram_target = (n / (n - 1)) * np.eye(n) - np.ones((n, n)) / (n - 1)
        worst_gram = max(worst_gram, np.max(np.abs(v1 @ v1.T - gram_target)))
    elapsed = time.perf_counter() - t0
    ok = worst_orth <= 1e-10 and worst_gram <= 1e-12 and elapsed < 30.0
    report(
        3,
        ok,
        f"orthogonality dev {worst_orth:.3e} <= 1e-10, Gram dev {worst_gram:.3e} "
        f"<= 1e-12, ranks exact, {elapsed:.1f}s < 30s",
    )


def test_criterion_04_kernel_identities():
    t0 = time.perf_counter()
    n = 25
    params = derive_alphas(window_kappa(n), 0.5)
    worst = 0.0
    for seed in range(3):
        g = sample_er(n, 0.5, seed=seed)
        worst = max(worst, kernel_identities(g, params).max_norm())
    bound = 1e-9 * params.alpha4 * n
    elapsed = time.perf_counter() - t0
    ok = worst <= bound and elapsed < 60.0
    report(
        4,
        ok,
        f"kernel composition norms {worst:.3e} <= 1e-9*alpha4*n ({bound:.3e}), "
        f"{elapsed:.1f}s < 60s",
    )


def test_criterion_05_labeling_audit_and_count_bound():
    t0 = time.perf_counter()
    config = ExperimentConfig(experiment="labeling_audit", n_grid=())
    records = run(config)
    metrics = dict(records[0].aggregates)
    expected_v_star = {
        **{f"cycle,m={m}": m + 1 for m in range(1, 6)},
        **{f"bridge,m={m}": 2 * m + 1 for m in range(1, 4)},
        **{f"ribbon41,m={m}": 2 * m + 2 for m in range(1, 3)},
        **{
            f"ribbon1{nu},m={m}": 3 * m + 2
            for nu in range(1, 5)
            for m in range(1, 3)
        },
        **{f"constrained,m={m}": m + 2 for m in range(1, 4)},
    }
    mismatches = [
        tag
        for tag, want in expected_v_star.items()
        if metrics.get(f"v_star[{tag}]") != want
    ]
    star_ok = all(
        metrics.get(f"v_star[star,m={m}]", math.inf) <= m + 2 for m in range(1, 4)
    )
    bound_ok = all(
        value == 1.0 for name, value in metrics.items() if "count_bound_ok[" in name
    )
    audit_ok = check_records(config, records)
    elapsed = time.perf_counter() - t0
    ok = not mismatches and star_ok and bound_ok and audit_ok and elapsed < 300.0
    report(
        5,
        ok,
        f"v* table exact ({len(expected_v_star)} cases, mismatches {mismatches}), "
        f"star ribbons capped {star_ok}, count bound holds {bound_ok}, "
        f"{elapsed:.1f}s < 300s",
    )


def test_criterion_06_dual_trace_oracle():
    t0 = time.perf_counter()
    kinds = (
        ComponentKind("K"),
        ComponentKind("J", 4, 1),
        ComponentKind("J", 2, 1),
        ComponentKind("L", 2, 1),
    )
    p = 0.5
    worst = 0.0
    for n in (4, 5):
        params = derive_alphas(0.3, p)
        for kind in kinds:
            for m in (1, 2):
                res = exact_expected_trace(kind, m, n, p, params)
                worst = max(worst, res.rel_difference)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 600.0
    report(
        6,
        ok,
        f"labeling sum vs all-graphs average rel dev {worst:.3e} <= 1e-12, "
        f"{elapsed:.1f}s < 600s",
    )


def test_criterion_07_psd_frontier_range_and_slope():
    t0 = time.perf_counter()
    slope_grid = (40, 60, 90, 130)
    cfg = ExperimentConfig(
        experiment="psd_frontier",
        n_grid=slope_grid,
        p=0.5,
        kappa_rule="binary_search",
        trials=10,
        seed0=0,
    )
    records = run(cfg)
    cfg100 = ExperimentConfig(
        experiment="psd_frontier",
        n_grid=(100,),
        p=0.5,
        kappa_rule="binary_search",
        trials=10,
        seed0=0,
    )
    records100 = run(cfg100)
    stars = {n: aggregate(records, n, "kappa_star") for n in slope_grid}
    stars[100] = aggregate(records100, 100, "kappa_star")
    fractions = {
        60: aggregate(records, 60, "success_fraction"),
        100: aggregate(records100, 100, "success_fraction"),
    }
    slope = aggregate(records, 0, "slope")
    elapsed = time.perf_counter() - t0
    range_ok = all(
        stars[n] is not None and 1e-4 <= stars[n] <= 1e-1 and fractions[n] >= 0.9
        for n in (60, 100)
    )
    slope_ok = slope is not None and -0.85 <= slope <= -0.45
    ok = range_ok and slope_ok and elapsed < 1800.0
    report(
        7,
        ok,
        f"kappa* {{60: {stars[60]:.4g}, 100: {stars[100]:.4g}}} in [1e-4, 1e-1] "
        f"with success {fractions[60]:.2f}/{fractions[100]:.2f} >= 0.9 "
        f"({range_ok}); slope {slope:.4f} in [-0.85, -0.45] ({slope_ok}); "
        f"{elapsed:.0f}s < 1800s",
    )


def test_criterion_08_norm_scaling_ratios():
    t0 = time.perf_counter()
    grid = (50, 100, 200)
    cfg = ExperimentConfig(
        experiment="norm_scaling",
        n_grid=grid,
        p=0.5,
        kappa_rule="theorem1",
        c0=WINDOW_C0,
        trials=5,
        seed0=0,
    )
    records = run(cfg)
    spreads = {}
    for name in ("ratio_K", "ratio_J41", "ratio_L21", "ratio_J1sum"):
        meds = [aggregate(records, n, f"median_{name}") for n in grid]
        assert all(m is not None and m > 0 for m in meds), name
        spreads[name] = max(meds) / min(meds)
    elapsed = time.perf_counter() - t0
    worst = max(spreads.values())
    ok = worst <= 4.0 and elapsed < 1200.0
    detail = ", ".join(f"{k} x{v:.2f}" for k, v in spreads.items())
    report(
        8,
        ok,
        f"median-ratio spreads within factor 4: {detail} (worst x{worst:.2f}), "
        f"{elapsed:.0f}s < 1200s",
    )


def test_criterion_09_detection_behavior():
    t0 = time.perf_counter()
    n = 120
    kappa = n ** (-2 / 3) / (16.0 * math.log(n))
    sub_cfg = ExperimentConfig(
        experiment="detection",
        n_grid=(n,),
        trials=10,
        seed0=0,
        kappa_rule="fixed",
        kappa=kappa,
        extras={"test": "submatrix", "k": 6.0},
    )
    sub = run(sub_cfg)
    exceed = aggregate(sub, n, "exceed_fraction")
    verdict = aggregate(sub, n, "verdict_fraction")

    comb_cfg = ExperimentConfig(
        experiment="detection",
        n_grid=(20,),
        trials=10,
        seed0=0,
        extras={"test": "comb", "k": 6.0, "mu": 2.0},
    )
    comb = run(comb_cfg)
    h1 = aggregate(comb, 20, "h1_fraction")
    h0 = aggregate(comb, 20, "h0_fraction")
    elapsed = time.perf_counter() - t0
    null_ok = exceed >= 0.9 and verdict >= 0.9
    comb_ok = h1 >= 0.9 and h0 <= 0.1
    ok = null_ok and comb_ok and elapsed < 600.0
    report(
        9,
        ok,
        f"null weighted statistic exceeds threshold {exceed:.2f} >= 0.9 with "
        f"verdict rate {verdict:.2f} ({null_ok}); subset search H1 {h1:.2f} >= 0.9 "
        f"and H0 {h0:.2f} <= 0.1 ({comb_ok}); {elapsed:.0f}s < 600s",
    )


def test_criterion_10_deterministic_condition_evaluator():
    t0 = time.perf_counter()
    n = 10**6
    window = derive_alphas(n ** (-2 / 3) / math.log(n), 0.5)
    rep = evaluate_W_conditions(n, window, constant=1.0)
    minors = rep.sylvester
    all_positive = all(m > 0 for m in minors)
    wide = derive_alphas(n ** (-1 / 2), 0.5)
    rep_wide = evaluate_W_conditions(n, wide, constant=1.0)
    wide_not_positive = not all(m > 0 for m in rep_wide.sylvester)
    elapsed = time.perf_counter() - t0
    ok = all_positive and wide_not_positive and elapsed < 1.0
    report(
        10,
        ok,
        f"window minors {tuple(f'{m:.3e}' for m in minors)} all positive "
        f"({all_positive}); at kappa=n^(-1/2) not all positive "
        f"({wide_not_positive}); {elapsed:.2f}s < 1s",
    )
