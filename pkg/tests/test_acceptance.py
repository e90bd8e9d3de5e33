"""Acceptance gate: every headline result at its stated tolerance.

Each test prints one PASS/FAIL line (run pytest with -s to see them all) and
enforces the stated runtime budget with the assertion itself.
"""

import math
import time

import numpy as np
import pytest

from steklovlab import geometry_iso, hadamard, rayleigh
from steklovlab.ball_spectrum import (
    ProblemParams,
    closed_form_eigenvalue,
    flat_spectrum,
    tau0_eigenvalue,
)
from steklovlab.galerkin import neumann_eigenvalues_ritz
from steklovlab.radial_solver import (
    concentration_experiment,
    make_rho_eps,
    solve_neumann_eigenvalues,
    steklov_determinant_root,
)


def report(idx: int, label: str, ok: bool, detail: str, t0: float, budget: float):
    elapsed = time.perf_counter() - t0
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {idx:2d}] {status}  {label}: {detail} ({elapsed:.2f}s / {budget:.0f}s)")
    assert ok, f"criterion {idx} failed: {detail}"
    assert elapsed < budget, f"criterion {idx} exceeded runtime budget ({elapsed:.1f}s)"


def test_criterion_1_fundamental_tone():
    t0 = time.perf_counter()
    worst = 0.0
    for tau in (0.1, 1.0, 10.0):
        for N in (2, 3, 4, 5):
            lam = closed_form_eigenvalue(ProblemParams(N, tau), 1)
            worst = max(worst, abs(lam - tau) / tau)
    report(1, "lambda_(1) = tau", worst <= 1e-10, f"max rel err {worst:.2e}", t0, 1.0)


def test_criterion_2_lambda2_bound():
    t0 = time.perf_counter()
    count, ok = 0, True
    for N in (2, 3, 4):
        for tau in np.linspace(0.1, 50.0, 17):
            count += 1
            lam = closed_form_eigenvalue(ProblemParams(N, float(tau)), 2)
            ok = ok and lam >= 2.0 * tau
    report(2, "lambda_(2) >= 2 tau", ok and count >= 50, f"{count} samples", t0, 1.0)


def test_criterion_3_tau0_spectrum():
    t0 = time.perf_counter()
    exact = all(
        tau0_eigenvalue(N, 2) == 2.0 * (N + 8.0 / 5.0) for N in (2, 3, 4)
    ) and tau0_eigenvalue(2, 2) == 7.2
    prof = rayleigh.polynomial_profile([0, 0, 6, 0, -1])
    q = rayleigh.rayleigh_quotient(prof, 2, 2, 0.0).quotient
    ok = exact and abs(q - 7.2) <= 1e-8 * 7.2
    report(3, "tau = 0 spectrum", ok, f"lambda_(N+2) exact; quotient {q:.12f}", t0, 1.0)


def test_criterion_4_determinant_vs_closed_form():
    t0 = time.perf_counter()
    worst = 0.0
    for N in (2, 3):
        for tau in (0.5, 1.0, 5.0):
            p = ProblemParams(N, tau)
            for l in range(7):
                cf = closed_form_eigenvalue(p, l)
                root = steklov_determinant_root(
                    l, N, tau, (max(0.5 * cf, 0.0), 1.5 * cf + 1.0)
                )
                worst = max(worst, abs(root - cf) / max(cf, 1e-30))
    report(4, "determinant = closed form", worst <= 1e-9, f"max rel err {worst:.2e}", t0, 10.0)


def test_criterion_5_mass_concentration():
    t0 = time.perf_counter()
    eps = (0.08, 0.04, 0.02, 0.01)
    ok, details = True, []
    for l in (1, 2):
        rows = concentration_experiment(l, 2, 1.0, 2.0 * math.pi, eps)
        errs = [r.rel_error for r in rows]
        ok = ok and all(a > b for a, b in zip(errs, errs[1:])) and errs[-1] <= 0.05
        details.append(f"l={l} final {errs[-1]:.3%}")
    # cross-validation at eps = 0.04 against the weak-form oracle
    dens = make_rho_eps(0.04, 2.0 * math.pi, 2)
    for l, lo, hi in ((1, 0.5, 2.0), (2, 4.0, 18.0)):
        lam = solve_neumann_eigenvalues(l, 2, 1.0, dens, (lo, hi), grid_points=150).roots[0].lam
        vals = neumann_eigenvalues_ritz(l, 2, 1.0, dens, n_modes=3, spans_target=0.06)
        lam_rz = float(vals[vals > 1e-4][0])
        rel = abs(lam - lam_rz) / lam_rz
        ok = ok and rel <= 1e-6
        details.append(f"oracle l={l} rel {rel:.1e}")
    report(5, "mass concentration", ok, "; ".join(details), t0, 60.0)


def test_criterion_6_rayleigh_dual_path():
    t0 = time.perf_counter()
    corpus = [
        (rayleigh.power_profile(1), 1),
        (rayleigh.power_profile(2), 2),
        (rayleigh.polynomial_profile([0, 0, 6, 0, -1]), 2),
        (rayleigh.bessel_i_profile(2, 2, 1.0), 2),
        (rayleigh.bessel_i_profile(3, 2, 2.0), 3),
    ]
    worst_dual = 0.0
    for prof, l in corpus:
        for tau in (0.0, 1.0):
            red = rayleigh.reduced_radial_numerator(prof, l, 2, tau)
            cart = rayleigh.cartesian_oracle_2d(prof, l, tau)
            worst_dual = max(worst_dual, abs(red - cart) / max(abs(cart), 1e-12))
    p = ProblemParams(2, 1.0)
    worst_opt = 0.0
    for l in range(6):
        q = rayleigh.rayleigh_quotient(rayleigh.ball_mode_profile(p, l), l, 2, 1.0).quotient
        lam = closed_form_eigenvalue(p, l)
        worst_opt = max(worst_opt, abs(q - lam) / max(lam, 1.0))
    ok = worst_dual <= 1e-6 and worst_opt <= 1e-8
    report(
        6, "Rayleigh dual path", ok,
        f"dual {worst_dual:.1e}, optimality {worst_opt:.1e}", t0, 30.0,
    )


def test_criterion_7_hadamard_vs_scaling():
    t0 = time.perf_counter()
    worst = 0.0
    for l in (1, 2, 3):
        for s in (1, 2):
            m = hadamard.steklov_multiplet(l, 2, 1.0, s=s)
            hd = hadamard.hadamard_derivative(m, hadamard.NormalSpeed.constant(1.0))
            so = hadamard.scaling_oracle(m)
            worst = max(worst, abs(hd - so) / max(abs(so), 1e-12))
    m1 = hadamard.steklov_multiplet(1, 2, 1.0)
    exact = hadamard.hadamard_derivative(m1, hadamard.NormalSpeed.constant(1.0))
    crit_s = max(
        hadamard.criticality_check(hadamard.steklov_multiplet(l, 2, 1.0)) for l in (1, 2, 3)
    )
    crit_n = hadamard.criticality_check(hadamard.neumann_multiplet(2, 2, 1.0))
    ok = worst <= 1e-6 and abs(exact + 2.0) <= 1e-10 and crit_s <= 1e-8 and crit_n <= 1e-6
    report(
        7, "Hadamard vs scaling oracle", ok,
        f"oracle {worst:.1e}; l=1 -> {exact:.10f}; crit S {crit_s:.1e}, N {crit_n:.1e}",
        t0, 30.0,
    )


def test_criterion_8_isoperimetric_chain():
    t0 = time.perf_counter()
    corpus = (
        [geometry_iso.regular_polygon(n) for n in (3, 4, 5, 6, 8, 12, 16, 32, 64, 128)]
        + [geometry_iso.rectangle(1.0, 1.0), geometry_iso.rectangle(2.0, 1.0),
           geometry_iso.rectangle(3.0, 1.0), geometry_iso.rectangle(5.0, 1.0)]
        + [geometry_iso.rectangle(2.0 * math.sqrt(math.pi / 2.0), math.sqrt(math.pi / 2.0))]
        + [geometry_iso.perturbed_disk(96, 0.15, m) for m in (2, 3, 4, 5)]
        + [geometry_iso.l_shape()]
    )
    assert len(corpus) >= 20
    ok = True
    for poly in corpus:
        rep = geometry_iso.isoperimetric_report(poly, 1.0)
        ok = ok and rep.moment_inequality_holds and rep.upper_bound_below_ball
    disk_rep = geometry_iso.isoperimetric_report(geometry_iso.regular_polygon(128), 1.0)
    gap = abs(disk_rep.lambda2_upper_bound - disk_rep.lambda2_ball) / disk_rep.lambda2_ball
    c, d = geometry_iso.stability_constants(2, 2.0)
    ok = ok and gap <= 0.005 and abs(c - 0.15533) < 5e-6 and abs(d - 0.077665) < 5e-7
    report(
        8, "quantitative isoperimetric chain", ok,
        f"{len(corpus)} polygons; disk gap {gap:.2e}; c22={c:.5f}, delta2={d:.6f}",
        t0, 60.0,
    )


def test_criterion_9_sum_rule():
    t0 = time.perf_counter()
    worst = 0.0
    for N in (2, 3, 4):
        for tau in (0.5, 1.0, 4.0):
            lams = flat_spectrum(ProblemParams(N, tau), N + 1)
            s = sum(1.0 / x for x in lams[1 : N + 1])
            worst = max(worst, abs(s - N / tau) / (N / tau))
    report(9, "reciprocal sum rule", worst <= 1e-12, f"max rel err {worst:.2e}", t0, 1.0)


def test_criterion_10_annulus_maximality_probe():
    t0 = time.perf_counter()
    ok = abs(rayleigh.annulus_trial_quotient(0.0, 1.0, 2).quotient - 7.2) <= 1e-8
    for a in (0.05, 0.1, 0.2, 0.3, 0.4, 0.5):
        aa, bb = rayleigh.equal_measure_annulus(a, 2)
        ok = ok and rayleigh.annulus_trial_quotient(aa, bb, 2).quotient < 7.2
    report(10, "annulus maximality probe", ok, "equal-area quotients below 7.2", t0, 10.0)
