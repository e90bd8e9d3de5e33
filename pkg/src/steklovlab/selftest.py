"""Runnable invariant suite: every module's key properties as pass/fail checks.

Mirrors the pytest suite in spirit but ships inside the package so the CLI
and service can certify an installation (`steklovlab selftest`).
"""

from __future__ import annotations

import math

import numpy as np

from . import ball_spectrum, geometry_iso, hadamard, harmonics, rayleigh
from . import radial_solver
from .galerkin import neumann_eigenvalues_ritz
from .specfun import BesselKind, UltrasphericalSpec, bessel_eval, ultraspherical_eval

_I = BesselKind.MODIFIED_FIRST


def _ultra(l, N, d, z):
    return ultraspherical_eval(UltrasphericalSpec(_I, l, N, d), z)


def check_wrapper_recurrences() -> tuple[bool, str]:
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(60):
        l = int(rng.integers(0, 11))
        N = int(rng.choice([2, 3, 4]))
        tau = float(rng.uniform(0.1, 25.0))
        z = math.sqrt(tau)
        i = [_ultra(l + m, N, 0, z) for m in range(4)]
        d1, d2, d3 = (_ultra(l, N, d, z) for d in (1, 2, 3))
        r1 = (l / z) * i[0] + i[1]
        r2 = (l * (l - 1) / tau) * i[0] + ((2 * l + 1) / z) * i[1] + i[2]
        r3 = (
            l * (l - 1) * (l - 2) / (tau * z) * i[0]
            + 3 * l ** 2 / tau * i[1]
            + 3 * (l + 1) / z * i[2]
            + i[3]
        )
        for d, r in ((d1, r1), (d2, r2), (d3, r3)):
            worst = max(worst, abs(d - r) / abs(r))
    return worst <= 1e-10, f"max recurrence residual {worst:.2e}"


def check_wronskian() -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(40):
        nu = float(rng.uniform(0.0, 10.0))
        z = float(rng.uniform(0.1, 50.0))
        J = bessel_eval(BesselKind.ORDINARY_FIRST, nu, z)
        Y = bessel_eval(BesselKind.ORDINARY_SECOND, nu, z)
        Jp = bessel_eval(BesselKind.ORDINARY_FIRST, nu + 1, z)
        Yp = bessel_eval(BesselKind.ORDINARY_SECOND, nu + 1, z)
        dJ = (nu / z) * J - Jp
        dY = (nu / z) * Y - Yp
        w = J * dY - dJ * Y
        worst = max(worst, abs(w - 2.0 / (math.pi * z)) / (2.0 / (math.pi * z)))
    return worst <= 1e-10, f"max Wronskian residual {worst:.2e}"


def check_domination_and_positivity() -> tuple[bool, str]:
    for l in range(11):
        for z in (0.3, 1.0, 4.0, 12.0):
            for N in (2, 3):
                if _ultra(l, N, 0, z) < _ultra(l + 1, N, 0, z):
                    return False, f"i_{l} < i_{l + 1} at z={z}, N={N}"
                for d in range(4):
                    if _ultra(l, N, d, z) <= 0.0:
                        return False, f"i_{l}^({d})({z}) not positive"
    return True, "i_l >= i_(l+1) and all derivatives positive on samples"


def check_fundamental_tone() -> tuple[bool, str]:
    worst = 0.0
    for N in (2, 3, 4, 5):
        for tau in (0.1, 1.0, 10.0):
            lam = ball_spectrum.closed_form_eigenvalue(ball_spectrum.ProblemParams(N, tau), 1)
            worst = max(worst, abs(lam - tau) / tau)
    return worst <= 1e-12, f"max |lambda_(1) - tau|/tau = {worst:.2e}"


def check_lambda2_bound_and_monotonicity() -> tuple[bool, str]:
    for N in (2, 3, 4):
        for tau in np.linspace(0.1, 50.0, 10):
            p = ball_spectrum.ProblemParams(N, float(tau))
            lams = [ball_spectrum.closed_form_eigenvalue(p, l) for l in range(2, 11)]
            if lams[0] < 2.0 * tau:
                return False, f"lambda_(2) < 2 tau at N={N}, tau={tau}"
            if any(a >= b for a, b in zip(lams, lams[1:])):
                return False, f"monotonicity broken at N={N}, tau={tau}"
    return True, "lambda_(2) >= 2 tau and lambda_(l) strictly increasing (l >= 2)"


def check_tau0_limit() -> tuple[bool, str]:
    for N, l in ((2, 2), (3, 3), (2, 5)):
        t0 = ball_spectrum.tau0_eigenvalue(N, l)
        d3 = abs(ball_spectrum.closed_form_eigenvalue(ball_spectrum.ProblemParams(N, 1e-3), l) - t0)
        d4 = abs(ball_spectrum.closed_form_eigenvalue(ball_spectrum.ProblemParams(N, 1e-4), l) - t0)
        if not (d4 < d3 and d4 < 0.2 * d3):
            return False, f"tau->0 differences not shrinking at N={N}, l={l}"
    return True, "closed form converges to the tau = 0 spectrum proportionally"


def check_sum_rule() -> tuple[bool, str]:
    worst = 0.0
    for N in (2, 3, 4):
        for tau in (0.5, 1.0, 4.0):
            s = ball_spectrum.reciprocal_sum_rule(ball_spectrum.ProblemParams(N, tau))
            worst = max(worst, abs(s - N / tau) / (N / tau))
    return worst <= 1e-12, f"max sum-rule residual {worst:.2e}"


def check_scaling_law() -> tuple[bool, str]:
    p = ball_spectrum.ProblemParams(3, 2.0)
    for radius in (0.5, 1.0, 2.0):
        lam = ball_spectrum.scaled_ball_eigenvalue(p, 1, radius)
        if abs(lam - p.tau / radius) > 1e-12 * p.tau / radius:
            return False, f"lambda_2(radius {radius}) != tau/radius"
    return True, "lambda_2(ball radius R) = tau / R"


def check_determinant_vs_closed_form(quick: bool) -> tuple[bool, str]:
    taus = (1.0,) if quick else (0.5, 1.0, 5.0)
    dims = (2,) if quick else (2, 3)
    worst = 0.0
    for N in dims:
        for tau in taus:
            p = ball_spectrum.ProblemParams(N, tau)
            for l in range(7):
                cf = ball_spectrum.closed_form_eigenvalue(p, l)
                root = radial_solver.steklov_determinant_root(
                    l, N, tau, (max(0.5 * cf, 0.0), 1.5 * cf + 1.0)
                )
                worst = max(worst, abs(root - cf) / max(cf, 1e-30))
    return worst <= 1e-9, f"max determinant/closed-form mismatch {worst:.2e}"


def check_concentration(quick: bool) -> tuple[bool, str]:
    eps = (0.08, 0.04) if quick else (0.08, 0.04, 0.02, 0.01)
    orders = (1,) if quick else (1, 2)
    for l in orders:
        rows = radial_solver.concentration_experiment(l, 2, 1.0, 2.0 * math.pi, eps)
        errs = [r.rel_error for r in rows]
        if any(a <= b for a, b in zip(errs, errs[1:])):
            return False, f"errors not strictly decreasing at l={l}: {errs}"
        if errs[-1] > 0.05 and not quick:
            return False, f"final error {errs[-1]:.3f} above 5% at l={l}"
    return True, "concentration errors strictly decreasing toward the Steklov limit"


def check_ritz_oracle() -> tuple[bool, str]:
    lam_tm = radial_solver.neumann_ball_eigenvalue(2, 2, 1.0)
    vals = neumann_eigenvalues_ritz(2, 2, 1.0, radial_solver.uniform_density(2), n_modes=3)
    lam_rz = float(vals[vals > 1e-4][0])
    rel = abs(lam_tm - lam_rz) / lam_rz
    dens = radial_solver.make_rho_eps(0.04, 2.0 * math.pi, 2)
    res = radial_solver.solve_neumann_eigenvalues(2, 2, 1.0, dens, (4.0, 18.0), grid_points=120)
    lam2 = res.roots[0].lam
    vals2 = neumann_eigenvalues_ritz(2, 2, 1.0, dens, n_modes=3, spans_target=0.06)
    lam2_rz = float(vals2[vals2 > 1e-4][0])
    rel2 = abs(lam2 - lam2_rz) / lam2_rz
    ok = rel <= 1e-6 and rel2 <= 1e-6
    return ok, f"uniform rel {rel:.1e}, layered rel {rel2:.1e}"


def check_mode_residuals() -> tuple[bool, str]:
    dens = radial_solver.make_rho_eps(0.08, 2.0 * math.pi, 2)
    res = radial_solver.solve_neumann_eigenvalues(2, 2, 1.0, dens, (5.0, 16.0), grid_points=120)
    worst = max(r.residual for r in res.roots)
    return worst <= 1e-7, f"max interface/boundary residual {worst:.2e}"


def check_rayleigh_optimality() -> tuple[bool, str]:
    p = ball_spectrum.ProblemParams(2, 1.0)
    worst = 0.0
    for l in range(6):
        q = rayleigh.rayleigh_quotient(rayleigh.ball_mode_profile(p, l), l, 2, 1.0)
        lam = ball_spectrum.closed_form_eigenvalue(p, l)
        worst = max(worst, abs(q.quotient - lam) / max(lam, 1.0))
    return worst <= 1e-8, f"max eigenfunction quotient defect {worst:.2e}"


def check_dual_path() -> tuple[bool, str]:
    corpus = [
        (rayleigh.power_profile(1), 1),
        (rayleigh.power_profile(2), 2),
        (rayleigh.polynomial_profile([0, 0, 6, 0, -1]), 2),
        (rayleigh.bessel_i_profile(3, 2, 1.0), 3),
    ]
    worst = 0.0
    for prof, l in corpus:
        for tau in (0.0, 1.0):
            red = rayleigh.reduced_radial_numerator(prof, l, 2, tau)
            cart = rayleigh.cartesian_oracle_2d(prof, l, tau)
            worst = max(worst, abs(red - cart) / max(abs(cart), 1e-12))
    return worst <= 1e-6, f"max reduced-vs-cartesian mismatch {worst:.2e}"


def check_annulus() -> tuple[bool, str]:
    q0 = rayleigh.annulus_trial_quotient(0.0, 1.0, 2).quotient
    if abs(q0 - 7.2) > 1e-8:
        return False, f"degenerate annulus quotient {q0} != 7.2"
    for a in (0.1, 0.3, 0.5):
        aa, bb = rayleigh.equal_measure_annulus(a, 2)
        if rayleigh.annulus_trial_quotient(aa, bb, 2).quotient >= 7.2:
            return False, f"annulus quotient not below ball at a={a}"
    return True, "ball recovered at a=0; equal-area annuli stay below 7.2"


def check_iso_chain(quick: bool) -> tuple[bool, str]:
    corpus = [
        geometry_iso.regular_polygon(128),
        geometry_iso.rectangle(1.0, 1.0),
        geometry_iso.rectangle(2.0, 1.0),
        geometry_iso.l_shape(),
    ]
    if not quick:
        corpus += [
            geometry_iso.regular_polygon(n) for n in (3, 5, 8, 16, 64)
        ] + [geometry_iso.perturbed_disk(96, 0.15, m) for m in (2, 3, 5)]
    for poly in corpus:
        rep = geometry_iso.isoperimetric_report(poly, 1.0)
        if not (rep.moment_inequality_holds and rep.upper_bound_below_ball and rep.quantitative_holds):
            return False, f"chain failed on polygon with area {rep.area:.4f}"
    return True, f"moment/upper-bound/quantitative chain holds on {len(corpus)} polygons"


def check_iso_constants() -> tuple[bool, str]:
    c, d = geometry_iso.stability_constants(2, 2.0)
    ok = abs(c - 0.15533008588991068) < 1e-12 and abs(d - 0.07766504294495534) < 1e-12
    mins_resolve = all(
        (N + 1) / N * (2 ** (1 / N) - 1) <= 1.0 for N in range(2, 11)
    )
    return ok and mins_resolve, f"c_22={c:.6f}, delta_2={d:.6f}, min clause resolves"


def check_hadamard_oracle(quick: bool) -> tuple[bool, str]:
    taus = (1.0,) if quick else (0.5, 1.0, 5.0)
    worst = 0.0
    for tau in taus:
        for l in (1, 2, 3):
            for s in (1, 2):
                m = hadamard.steklov_multiplet(l, 2, tau, s=s)
                hd = hadamard.hadamard_derivative(m, hadamard.NormalSpeed.constant(1.0))
                so = hadamard.scaling_oracle(m)
                worst = max(worst, abs(hd - so) / max(abs(so), 1e-9))
    m1 = hadamard.steklov_multiplet(1, 2, 1.0)
    exact = hadamard.hadamard_derivative(m1, hadamard.NormalSpeed.constant(1.0))
    ok = worst <= 1e-6 and abs(exact + 2.0) <= 1e-10
    return ok, f"max oracle mismatch {worst:.2e}; l=1 derivative {exact:.12g}"


def check_hadamard_criticality() -> tuple[bool, str]:
    for l in (1, 2, 3):
        m = hadamard.steklov_multiplet(l, 2, 1.0)
        if hadamard.criticality_check(m) > 1e-8:
            return False, f"Steklov integrand not constant at l={l}"
        d = hadamard.hadamard_derivative(m, hadamard.NormalSpeed.cosine(2))
        if abs(d) > 1e-9 * abs(m.lam) + 1e-12:
            return False, f"volume-preserving derivative not null at l={l}"
    mn = hadamard.neumann_multiplet(2, 2, 1.0)
    if hadamard.criticality_check(mn) > 1e-6:
        return False, "Neumann integrand not constant at l=2"
    return True, "summed integrands constant; volume-preserving speeds give 0"


def check_hadamard_neumann_oracle() -> tuple[bool, str]:
    worst = 0.0
    for l in (1, 2):
        m = hadamard.neumann_multiplet(l, 2, 1.0)
        hd = hadamard.hadamard_derivative(m, hadamard.NormalSpeed.constant(1.0))
        so = hadamard.scaling_oracle(m)
        worst = max(worst, abs(hd - so) / abs(so))
    return worst <= 1e-6, f"max Neumann oracle mismatch {worst:.2e}"


def run_all(quick: bool = False):
    """Yield (name, passed, detail) for every invariant check."""
    checks = [
        ("specfun.recurrences", check_wrapper_recurrences),
        ("specfun.wronskian", check_wronskian),
        ("specfun.domination-positivity", check_domination_and_positivity),
        ("ball.fundamental-tone", check_fundamental_tone),
        ("ball.lambda2-monotonicity", check_lambda2_bound_and_monotonicity),
        ("ball.tau0-limit", check_tau0_limit),
        ("ball.sum-rule", check_sum_rule),
        ("ball.scaling-law", check_scaling_law),
        ("solver.determinant-vs-closed-form", lambda: check_determinant_vs_closed_form(quick)),
        ("solver.concentration", lambda: check_concentration(quick)),
        ("solver.ritz-oracle", check_ritz_oracle),
        ("solver.mode-residuals", check_mode_residuals),
        ("rayleigh.optimality", check_rayleigh_optimality),
        ("rayleigh.dual-path", check_dual_path),
        ("rayleigh.annulus", check_annulus),
        ("iso.chain", lambda: check_iso_chain(quick)),
        ("iso.constants", check_iso_constants),
        ("hadamard.scaling-oracle", lambda: check_hadamard_oracle(quick)),
        ("hadamard.criticality", check_hadamard_criticality),
        ("hadamard.neumann-oracle", check_hadamard_neumann_oracle),
    ]
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # noqa: BLE001 - selftest reports, never crashes
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        yield name, ok, detail
