"""Rayleigh quotients for separated trial functions R(r) Y_l(theta).

With harmonics normalized on the unit sphere, the quotient numerator for
u = R Y_l on a radial domain reduces to the single radial integral

    N[R Y_l] = int [ R''^2 + tau R'^2
                     + 2k/r^4 (r R' - 3/2 R)^2 + k(k-N-1/2)/r^4 R^2
                     + (N-1)/r^2 R'^2 + tau k R^2/r^2 ] r^(N-1) dr,

k = l(l+N-2), and the boundary denominator collapses to rho R(radius)^2
radius^(N-1) summed over boundary spheres.  The 1/r^4 group is integrated in
its completed-square form (exact algebraic regrouping) to avoid catastrophic
cancellation near r = 0; an independent 2-D Cartesian Hessian oracle guards
the reduction itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidArgument, RefineNeeded
from .quadrature import adaptive_gauss
from . import ball_spectrum


@dataclass(frozen=True)
class RadialProfile:
    """Radial trial function delivering (R, R', R'') at any radius.

    ``data`` maps (array of radii, derivative order in {0,1,2}) to values.
    Breakpoints mark the finitely many points where smoothness drops.
    """

    data: Callable[[np.ndarray, int], np.ndarray]
    domain: tuple[float, float] = (0.0, 1.0)
    breakpoints: tuple[float, ...] = ()
    label: str = "profile"

    def __call__(self, r, d: int = 0):
        return self.data(np.asarray(r, dtype=float), d)


def power_profile(m: int) -> RadialProfile:
    def data(r, d):
        c = 1.0
        for j in range(d):
            c *= m - j
        return c * r ** (m - d) if d <= m else np.zeros_like(r)

    return RadialProfile(data=data, label=f"r^{m}")


def polynomial_profile(coeffs, label: str | None = None) -> RadialProfile:
    """Profile from polynomial coefficients in increasing degree order."""
    poly = np.polynomial.Polynomial(list(coeffs))

    def data(r, d):
        return poly.deriv(d)(r) if d else poly(r)

    return RadialProfile(data=data, label=label or "poly")


def ball_mode_profile(params: ball_spectrum.ProblemParams, l: int) -> RadialProfile:
    """Boundary-unit eigen-profile R_l of the unit ball."""

    def data(r, d):
        flat = np.atleast_1d(r)
        out = np.array([ball_spectrum.radial_profile(params, l, x, d) for x in flat])
        return out if np.ndim(r) else float(out[0])

    return RadialProfile(data=data, label=f"R_{l}")


def bessel_i_profile(l: int, N: int, tau: float) -> RadialProfile:
    """The wrapper profile i_l(sqrt(tau) r), un-normalized."""
    from .radial_solver import BasisMember
    from .specfun import BesselKind

    mem = BasisMember("regular-modified", "bessel", l, N, BesselKind.MODIFIED_FIRST, math.sqrt(tau))

    def data(r, d):
        flat = np.atleast_1d(r)
        out = np.array([mem.eval(x, d) for x in flat])
        return out if np.ndim(r) else float(out[0])

    return RadialProfile(data=data, label=f"i_{l}")


def annulus_trial_profile() -> RadialProfile:
    """The tension-free trial profile: 6r^2 - r^4 inside r=1, 8r - 3 beyond."""

    def data(r, d):
        r = np.asarray(r, dtype=float)
        inner = {
            0: 6.0 * r ** 2 - r ** 4,
            1: 12.0 * r - 4.0 * r ** 3,
            2: 12.0 - 12.0 * r ** 2,
        }[d]
        outer = {0: 8.0 * r - 3.0, 1: np.full_like(r, 8.0), 2: np.zeros_like(r)}[d]
        return np.where(r <= 1.0, inner, outer)

    return RadialProfile(data=data, domain=(0.0, np.inf), breakpoints=(1.0,), label="annulus-trial")


@dataclass(frozen=True)
class QuotientReport:
    numerator: float
    denominator: float
    quotient: float
    quad_error: float
    meta: dict = field(default_factory=dict)


def _numerator_integrand(profile: RadialProfile, l: int, N: int, tau: float):
    k = float(l * (l + N - 2))
    A2 = 2.0 * k + N - 1.0
    g = 3.0 * k / A2 if k else 0.0
    beta = k * (2.0 * k * k - (N + 2.0) * k + (4.0 - N) * (N - 1.0)) / A2 if k else 0.0

    def f(r):
        R = profile(r, 0)
        R1 = profile(r, 1)
        R2 = profile(r, 2)
        w = r ** (N - 1)
        val = (R2 ** 2 + tau * R1 ** 2) * w
        if k:
            q = R1 / r - g * R / r ** 2
            val += A2 * q ** 2 * w
            if beta:
                val += beta * (R / r ** 2) ** 2 * w
            val += tau * k * (R / r) ** 2 * w
        else:
            val += (N - 1.0) * (R1 / r) ** 2 * w
        return val

    return f


def reduced_radial_numerator(
    profile: RadialProfile,
    l: int,
    N: int,
    tau: float,
    domain: tuple[float, float] | None = None,
    tol: float = 1e-9,
) -> float:
    """Radial Rayleigh numerator int_B |D^2 u|^2 + tau |grad u|^2 dx for u = R Y_l.

    Raises :class:`DivergentIntegrand` when the profile does not vanish fast
    enough at r = 0 for the 1/r^4 terms.
    """
    if l < 0 or N < 2 or tau < 0.0:
        raise InvalidArgument("require l >= 0, N >= 2, tau >= 0")
    a, b = domain if domain is not None else profile.domain
    if not (0.0 <= a < b) or not math.isfinite(b):
        raise InvalidArgument(f"invalid radial domain ({a}, {b})")
    f = _numerator_integrand(profile, l, N, tau)
    val, _ = adaptive_gauss(
        f, a, b, breakpoints=profile.breakpoints, tol=tol, singular_lower=(a == 0.0)
    )
    return val


def rayleigh_quotient(
    profile: RadialProfile,
    l: int,
    N: int,
    tau: float,
    domain: tuple[float, float] | None = None,
    boundary_density: float | tuple[float, float] = 1.0,
    tol: float = 1e-9,
) -> QuotientReport:
    """Rayleigh quotient of R Y_l on the ball (a = 0) or annulus (a > 0).

    With normalized harmonics the boundary term is rho R(radius)^2
    radius^(N-1) per boundary sphere; the unit ball reduces to rho R(1)^2.
    The mean-zero admissibility constraint holds automatically for l >= 1.
    """
    a, b = domain if domain is not None else profile.domain
    if not (0.0 <= a < b) or not math.isfinite(b):
        raise InvalidArgument(f"invalid radial domain ({a}, {b})")
    if isinstance(boundary_density, (int, float)):
        rho_inner = rho_outer = float(boundary_density)
    else:
        rho_inner, rho_outer = (float(x) for x in boundary_density)
    num = reduced_radial_numerator(profile, l, N, tau, domain=(a, b), tol=tol)
    den = rho_outer * float(profile(b, 0)) ** 2 * b ** (N - 1)
    if a > 0.0:
        den += rho_inner * float(profile(a, 0)) ** 2 * a ** (N - 1)
    if den <= 0.0:
        raise InvalidArgument("trial function vanishes on the whole boundary")
    return QuotientReport(
        numerator=num,
        denominator=den,
        quotient=num / den,
        quad_error=tol * abs(num),
        meta={"l": l, "N": N, "tau": tau, "domain": (a, b)},
    )


@dataclass(frozen=True)
class PolarGrid:
    """Tensor quadrature on the unit disk: panel Gauss in r, trapezoid in theta."""

    r_panels: int = 10
    r_order: int = 16
    n_theta: int = 96


def cartesian_oracle_2d(
    profile: RadialProfile,
    l: int,
    tau: float,
    grid: PolarGrid | None = None,
    check_tol: float = 1e-6,
) -> float:
    """Numerator int_B |D^2 u|^2 + tau |grad u|^2 for u = R(r) cos(l theta)/sqrt(pi),
    assembled from Cartesian Hessian entries at polar quadrature nodes.

    Independent of the radial reduction: the Hessian is built componentwise
    (u_xx, u_xy, u_yy) from (R, R', R'') and angular derivatives.  Serves as
    the anti-typo guard on the reduced formula.  N = 2 only.
    """
    if grid is None:
        grid = PolarGrid(n_theta=max(96, 8 * l + 16))

    def compute(g: PolarGrid) -> float:
        edges = np.linspace(0.0, 1.0, g.r_panels + 1)
        for bp in profile.breakpoints:
            if 0.0 < bp < 1.0:
                edges = np.sort(np.unique(np.append(edges, bp)))
        gx, gw = np.polynomial.legendre.leggauss(g.r_order)
        rs, ws = [], []
        for lo, hi in zip(edges, edges[1:]):
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            rs.append(mid + half * gx)
            ws.append(half * gw)
        r = np.concatenate(rs)
        wr = np.concatenate(ws)
        th = np.arange(g.n_theta) * (2.0 * math.pi / g.n_theta)
        wt = 2.0 * math.pi / g.n_theta

        R = profile(r, 0)[:, None]
        R1 = profile(r, 1)[:, None]
        R2 = profile(r, 2)[:, None]
        norm = 1.0 / math.sqrt(math.pi)
        T = norm * np.cos(l * th)[None, :]
        T1 = -norm * l * np.sin(l * th)[None, :]
        T2 = -norm * l * l * np.cos(l * th)[None, :]

        rc = r[:, None]
        c, s = np.cos(th)[None, :], np.sin(th)[None, :]
        u_rr = R2 * T
        u_r = R1 * T
        u_t = R * T1
        u_rt = R1 * T1
        u_tt = R * T2

        mixed = u_rt / rc - u_t / rc ** 2
        ang = u_r / rc + u_tt / rc ** 2
        u_xx = c ** 2 * u_rr - 2.0 * c * s * mixed + s ** 2 * ang
        u_yy = s ** 2 * u_rr + 2.0 * c * s * mixed + c ** 2 * ang
        u_xy = c * s * (u_rr - ang) + (c ** 2 - s ** 2) * mixed

        hess2 = u_xx ** 2 + 2.0 * u_xy ** 2 + u_yy ** 2
        grad2 = u_r ** 2 + (u_t / rc) ** 2
        integrand = (hess2 + tau * grad2) * rc
        return float(np.sum(wr[:, None] * integrand) * wt)

    coarse = compute(grid)
    fine = compute(
        PolarGrid(r_panels=grid.r_panels + 4, r_order=grid.r_order + 8, n_theta=2 * grid.n_theta)
    )
    err = abs(fine - coarse)
    # 1e-12 absolute floor: a nonnegative integrand at roundoff level is zero
    if err > check_tol * max(abs(fine), 1e-12):
        raise RefineNeeded(
            f"cartesian oracle not converged: |delta|={err:.3e} vs value {fine:.6e}"
        )
    return fine


def annulus_trial_quotient(a: float, b: float, N: int, tau: float = 0.0) -> QuotientReport:
    """Quotient of the piecewise trial profile (l = 2) on the annulus a < r < b.

    Requires tau = 0, N in {2, 3} and the profile breakpoint r = 1 inside
    [a, b]; by the variational principle the value upper-bounds the first
    positive eigenvalue of the radial domain.
    """
    if tau != 0.0:
        raise InvalidArgument("annulus trial functions are tension-free (tau = 0)")
    if N not in (2, 3):
        raise InvalidArgument(f"annulus comparisons cover N in {{2, 3}}, got {N}")
    if not (0.0 <= a < 1.0 <= b) or b <= a:
        raise InvalidArgument(
            f"profile breakpoint r=1 must lie inside the domain, got ({a}, {b})"
        )
    profile = annulus_trial_profile()
    return rayleigh_quotient(profile, l=2, N=N, tau=0.0, domain=(a, b))


def equal_measure_annulus(a: float, N: int) -> tuple[float, float]:
    """Outer radius pairing with inner radius a so that |annulus| = |unit ball|."""
    if a < 0.0:
        raise InvalidArgument(f"inner radius must be >= 0, got {a}")
    return a, (1.0 + a ** N) ** (1.0 / N)
