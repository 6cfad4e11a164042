"""Acceptance gate: twelve quantitative checks of the full pipeline.

Each test prints one line `CRITERION k: <measurements> -> PASS|FAIL` before
asserting, so the verdict list survives in the captured output. The checks
assert the stated target numbers as-is; a test here failing means the
implementation, run faithfully, does not reproduce that target.
"""

import math

import numpy as np
import pytest

from openbaker.classical import (count_allowed_words, escape_rate_mc,
                                 finite_time_repeller, periodic_orbits,
                                 transition_matrix)
from openbaker.phasespace import (autocorrelation_at_points, autocorrelation,
                                  h_distribution, husimi,
                                  spectral_sum_at_points)
from openbaker.quantization import TorusHilbert, baker_closed, baker_open, OpeningSpec
from openbaker.spectral import resonance_set, weyl_count, weyl_fit


def report(k, detail, ok):
    print(f"CRITERION {k}: {detail} -> {'PASS' if ok else 'FAIL'}")


def test_criterion_01_closed_map_unitarity():
    worst = 0.0
    for family, sizes in (("dyadic", (8, 64, 160, 320, 1024)),
                          ("triadic", (3, 81, 243))):
        for N in sizes:
            U = baker_closed(TorusHilbert(N), family).matrix
            worst = max(worst, float(np.abs(U.conj().T @ U - np.eye(N)).max()))
    ok = worst < 1e-12
    report(1, f"max ||U'U - I||_max = {worst:.3e} over dyadic {{8,64,160,320,1024}} "
              f"and triadic {{3,81,243}} (tolerance 1e-12)", ok)
    assert worst < 1e-12


def test_criterion_02_null_space_dimensions():
    nd_dyadic = resonance_set("dyadic", 320, l=3).nullDim
    nd_triadic = resonance_set("triadic", 243).nullDim
    ok = nd_dyadic == 80 and nd_triadic == 162
    report(2, f"null modes (|lambda| < 1e-8): dyadic N=320 l=3 = {nd_dyadic} "
              f"(target exactly 80), triadic N=243 = {nd_triadic} (target exactly 162)", ok)
    assert nd_dyadic == 80
    assert nd_triadic == 162


def test_criterion_03_dyadic_longest_lived_resonance():
    top = resonance_set("dyadic", 320, l=3)[0].modulus
    ok = abs(top - 0.977) <= 0.005
    report(3, f"dyadic N=320 l=3 max |lambda| = {top:.6f} (target 0.977 +- 0.005)", ok)
    assert abs(top - 0.977) <= 0.005


def test_criterion_04_triadic_spectrum():
    rset = resonance_set("triadic", 243)
    lam = rset.lambdas()
    mods = rset.moduli()[:6]
    targets = np.array([0.577, 0.249, 0.249, 0.184, 0.184, 0.064])
    mod_dev = float(np.abs(mods - targets).max())
    lead_dev = abs(mods[0] - 3.0 ** -0.5)
    conj_dev = float(np.abs(lam[:, None] - lam.conj()[None, :]).min(axis=1).max())
    real_dev = max(abs(lam[0].imag), abs(lam[5].imag))
    ok = (mod_dev <= 0.005 and lead_dev <= 1e-3 and conj_dev <= 1e-8
          and real_dev <= 1e-8)
    report(4, f"triadic N=243 leading moduli {np.round(mods, 4).tolist()} "
              f"(max dev {mod_dev:.1e}, tol 5e-3); |lambda_0|-1/sqrt(3) = {lead_dev:.1e} "
              f"(tol 1e-3); conjugation distance {conj_dev:.1e} (tol 1e-8); "
              f"Im(lambda_0), Im(lambda_5) <= {real_dev:.1e} (tol 1e-8)", ok)
    assert mod_dev <= 0.005
    assert lead_dev <= 1e-3
    assert conj_dev <= 1e-8
    assert real_dev <= 1e-8


def test_criterion_05_topological_entropy():
    e3 = transition_matrix(3).entropy
    e2 = transition_matrix(2).entropy
    e4 = transition_matrix(4).entropy
    # independent growth-rate oracle for l=4 from exact word counts
    oracle4 = math.log(count_allowed_words(31, 4) / count_allowed_words(30, 4))
    ok = (abs(e3 - 0.4812) <= 1e-4 and e2 == 0.0 and abs(e4 - 0.6093) <= 1e-3
          and abs(e4 - oracle4) <= 1e-6)
    report(5, f"entropy l=3 = {e3:.6f} (target 0.4812 +- 1e-4), l=2 = {e2} "
              f"(target exactly 0), l=4 = {e4:.6f} (target 0.6093 +- 1e-3, "
              f"word-count oracle {oracle4:.6f})", ok)
    assert abs(e3 - 0.4812) <= 1e-4
    assert e2 == 0.0
    assert abs(e4 - 0.6093) <= 1e-3
    assert abs(e4 - oracle4) <= 1e-6


def test_criterion_06_tau_slope_law():
    slopes = {}
    for l in (2, 3, 4, 6):
        rset = resonance_set("dyadic", 512, l=l)
        sel = [(r.modulus, r.tau) for r in rset.resonances
               if r.modulus > 0.3 and r.tau > 0.0]
        logm = np.log([m for m, _ in sel])
        logt = np.log([t for _, t in sel])
        slopes[l] = float(np.polyfit(logm, logt, 1)[0])
    closed = resonance_set("dyadic", 512, closed=True)
    tau_dev = float(np.abs(closed.taus() - 1.0).max())
    slope_ok = {l: abs(s - (l - 1)) <= 0.1 * (l - 1) for l, s in slopes.items()}
    ok = all(slope_ok.values()) and tau_dev <= 1e-6
    detail = ", ".join(f"l={l}: slope {slopes[l]:.4f} (target {l - 1} +- {0.1 * (l - 1):.1f})"
                       for l in (2, 3, 4, 6))
    report(6, f"N=512 log tau vs log |lambda| fits over |lambda|>0.3: {detail}; "
              f"closed-map max |tau - 1| = {tau_dev:.1e} (tol 1e-6)", ok)
    assert tau_dev <= 1e-6
    for l in (2, 3, 4, 6):
        assert slope_ok[l], (f"l={l}: fitted slope {slopes[l]:.4f} outside "
                             f"{l - 1} +- 10%")


def test_criterion_07_spectral_completeness():
    hilbert = TorusHilbert(160)
    qmap = baker_open(hilbert, OpeningSpec(family="dyadic", l=3))
    rset = resonance_set("dyadic", 160, l=3)
    rng = np.random.default_rng(7)
    points = [(float(q), float(p)) for q, p in rng.random((20, 2))]
    worst = 0.0
    for n in (1, 4):
        direct = autocorrelation_at_points(qmap, points, n)
        spectral = spectral_sum_at_points(rset, hilbert, points, n)
        worst = max(worst, float(np.abs(direct - spectral).max()))
    ok = worst < 1e-8
    report(7, f"N=160 l=3 spectral sum vs direct autocorrelation, n in {{1,4}}, "
              f"20 random points: max |diff| = {worst:.3e} (tolerance 1e-8; "
              f"vCondition = {rset.vCondition:.3e})", ok)
    assert worst < 1e-8


def test_criterion_08_husimi_normalization():
    hilbert = TorusHilbert(320)
    rset = resonance_set("dyadic", 320, l=3)
    rng = np.random.default_rng(0)
    picks = rng.choice(len(rset), size=10, replace=False)
    worst = 0.0
    for i in picks:
        grid = husimi(hilbert, rset[int(i)].psiR, (256, 256))
        worst = max(worst, abs(320.0 * float(grid.values.mean()) - 1.0))
    ok = worst <= 0.01
    report(8, f"N=320 l=3, 10 random resonances on a 256x256 grid: "
              f"max |N*mean(H) - 1| = {worst:.2e} (tolerance 1e-2)", ok)
    assert worst <= 0.01


def test_criterion_09_periodic_orbit_structure():
    hilbert = TorusHilbert(160)
    closed = baker_closed(hilbert, "dyadic")
    opened = baker_open(hilbert, OpeningSpec(family="dyadic", l=3))

    all_points = [(float(p.q), float(p.p))
                  for o in periodic_orbits(4) for p in o.points]
    allowed_points = [(float(p.q), float(p.p))
                      for o in periodic_orbits(4, l=3) for p in o.points]
    pruned_points = [pt for pt in set(all_points) if pt not in set(allowed_points)]

    grid = autocorrelation(closed, 4, (256, 256)).values
    median = float(np.median(np.abs(grid)))
    peak_min = float(np.abs(autocorrelation_at_points(closed, all_points, 4)).min())

    open_allowed = float(np.abs(
        autocorrelation_at_points(opened, allowed_points, 4)).max())
    open_pruned = float(np.abs(
        autocorrelation_at_points(opened, pruned_points, 4)).max())

    ok = peak_min >= 3.0 * median and open_pruned < 0.2 * open_allowed
    report(9, f"closed N=160 n=4: weakest period-4 peak {peak_min:.4f} vs "
              f"3x grid median {3.0 * median:.4f}; open l=3: pruned-point max "
              f"{open_pruned:.4f} vs 0.2x allowed peak {0.2 * open_allowed:.4f}", ok)
    assert peak_min >= 3.0 * median
    assert open_pruned < 0.2 * open_allowed


def test_criterion_10_classical_escape_rates():
    dyadic = escape_rate_mc("dyadic", 10 ** 7, 12, seed=7, l=3).gamma
    triadic = escape_rate_mc("triadic", 10 ** 8, 10, seed=7).gamma
    target_d = math.log(2.0) - math.log((1.0 + math.sqrt(5.0)) / 2.0)
    target_t = math.log(3.0)
    dev_d = abs(dyadic - target_d)
    dev_t = abs(triadic - target_t)
    ok = dev_d <= 0.02 and dev_t <= 0.02
    report(10, f"Monte Carlo escape rates: dyadic l=3 gamma = {dyadic:.5f} "
               f"(ln(2/phi) = {target_d:.5f}, dev {dev_d:.1e}, tol 0.02); "
               f"triadic gamma = {triadic:.5f} (ln 3 = {target_t:.5f}, "
               f"dev {dev_t:.1e}, tol 0.02)", ok)
    assert dev_d <= 0.02
    assert dev_t <= 0.02


def test_criterion_11_resonance_localization_on_the_repeller():
    hilbert = TorusHilbert(320)
    rset = resonance_set("dyadic", 320, l=3)
    rep = finite_time_repeller(2, 5, l=3)
    centers = (np.arange(256) + 0.5) / 256.0
    inside = np.zeros((256, 256), dtype=bool)
    for a, b, c, d in rep.rectangles:
        inside |= ((centers[:, None] >= a) & (centers[:, None] <= b)
                   & (centers[None, :] >= c) & (centers[None, :] <= d))
    ratios = []
    for i in range(5):
        vals = np.abs(h_distribution(rset[i], hilbert, (256, 256)).values)
        ratios.append(float(vals[inside].sum() / vals.sum()))
    worst = min(ratios)
    ok = worst >= 2.0 * rep.areaFraction
    report(11, f"N=320 l=3, 5 longest-lived resonances: min |h| mass inside the "
               f"t=-2..5 rectangles = {worst:.3f} vs 2x area fraction "
               f"{2.0 * rep.areaFraction:.3f}", ok)
    assert worst >= 2.0 * rep.areaFraction


def test_criterion_12_weyl_exponent():
    counts = []
    for N in (128, 256, 512, 1024):
        counts.append((N, weyl_count(resonance_set("dyadic", N, l=3), 0.5)))
    fit = weyl_fit(counts, 0.5)
    in_band = 0.25 <= fit.exponent <= 0.55
    verdict = "PASS" if in_band else "FAIL (exploratory, not a hard gate)"
    print(f"CRITERION 12: dyadic l=3, nu_c=0.5, counts {counts} -> exponent "
          f"{fit.exponent:.4f}, band [0.25, 0.55] -> {verdict}")
    # the band is a sanity expectation, not a hard gate: assert only that
    # the fit produced a meaningful positive growth exponent
    assert np.isfinite(fit.exponent)
    assert fit.exponent > 0.0
