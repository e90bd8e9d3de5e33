"""Shape derivatives of eigenvalue symmetric functions on the unit disk.

For a multiplet F of eigenvalues sharing the value lambda_F (one harmonic
order l, |F| = multiplicity), the derivative of the elementary symmetric
function Lambda_{F,s} under a boundary perturbation with normal speed
g = mu . nu is the boundary integral

    d Lambda_{F,s} [g] = -lambda_F^(s-1) C(|F|-1, s-1) *
        int_dB ( lambda_F K v^2 + lambda_F d(v^2)/dn - tau |grad v|^2
                 - |D^2 v|^2 )_summed  g  dsigma          (Steklov)

    d Lambda_{F,s} [g] = -lambda_F^(s-1) C(|F|-1, s-1) *
        int_dB ( lambda_F v^2 - tau |grad v|^2 - |D^2 v|^2 )_summed g dsigma
                                                           (Neumann)

with K the sum of principal curvatures (1 on the unit circle; the convention
is pinned by exact agreement with the dilation oracle at l = 1).  Steklov
multiplets are L2(dB)-orthonormal, Neumann multiplets L2(B)-orthonormal.

The independent referee is the scaling law: lambda(tau, alpha B) =
alpha^-3 lambda(alpha^2 tau, B) for Steklov (alpha^-4 for Neumann, from the
weak form); dilation has g = 1, so central differences of
Lambda_{F,s}(alpha) at alpha = 1 must reproduce the boundary integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DegenerateMode, InvalidArgument
from .harmonics import circle_harmonic, multiplicity, sphere_sample
from .quadrature import adaptive_gauss, periodic_trapezoid
from . import ball_spectrum
from . import radial_solver


@dataclass(frozen=True)
class NormalSpeed:
    """Scalar normal speed g(theta) = mu . nu on the unit circle."""

    g: Callable[[np.ndarray], np.ndarray]
    label: str = "speed"

    def __call__(self, theta):
        return np.asarray(self.g(np.asarray(theta, dtype=float)), dtype=float)

    @classmethod
    def constant(cls, value: float = 1.0) -> "NormalSpeed":
        return cls(lambda th: np.full_like(th, float(value)), label=f"const({value})")

    @classmethod
    def cosine(cls, mode: int, amplitude: float = 1.0) -> "NormalSpeed":
        return cls(lambda th: amplitude * np.cos(mode * th), label=f"cos({mode}t)")


@dataclass(frozen=True)
class MultipletSpec:
    """An eigenvalue multiplet (all of one harmonic order) on the unit disk.

    Boundary data (R(1), R'(1), R''(1)) of the shared radial profile suffices
    for every surface field; the normalization scale is already folded in.
    """

    l: int
    N: int
    tau: float
    problem: str  # 'steklov' | 'neumann'
    s: int
    lam: float
    indices: tuple[int, ...]
    boundary_data: tuple[float, float, float]

    def __post_init__(self):
        if self.problem not in ("steklov", "neumann"):
            raise InvalidArgument(f"problem must be steklov or neumann, got {self.problem!r}")
        size = multiplicity(self.l, self.N)
        if len(self.indices) != size:
            raise InvalidArgument(
                f"multiplet of order l={self.l} must carry {size} members"
            )
        if not 1 <= self.s <= size:
            raise InvalidArgument(f"s must lie in 1..{size}, got {self.s}")

    @property
    def size(self) -> int:
        return len(self.indices)


def steklov_multiplet(l: int, N: int, tau: float, s: int = 1) -> MultipletSpec:
    """Multiplet of the closed-form Steklov eigenvalue at order l.

    The boundary-unit radial profile already makes R(r) Y(theta) an
    L2(dB)-orthonormal family.
    """
    if N != 2:
        raise InvalidArgument("surface quadrature is implemented for N = 2 only")
    params = ball_spectrum.ProblemParams(N, tau)
    lam = ball_spectrum.eigenvalue(params, l)
    bdata = tuple(ball_spectrum.radial_profile(params, l, 1.0, d) for d in range(3))
    if abs(bdata[0]) < 1e-14:
        raise DegenerateMode(f"Steklov mode l={l} has zero boundary trace")
    idx = (0,) if l == 0 else (0, 1)
    return MultipletSpec(
        l=l, N=N, tau=tau, problem="steklov", s=s, lam=lam,
        indices=idx, boundary_data=bdata,
    )


def neumann_multiplet(
    l: int, N: int, tau: float, s: int = 1, near: float | None = None
) -> MultipletSpec:
    """Multiplet of the first relevant Neumann eigenvalue at order l,
    L2(B)-orthonormalized by radial quadrature of the solver's null vector."""
    if N != 2:
        raise InvalidArgument("surface quadrature is implemented for N = 2 only")
    lam = radial_solver.neumann_ball_eigenvalue(l, N, tau, near=near)
    res = radial_solver.solve_neumann_eigenvalues(
        l, N, tau, radial_solver.uniform_density(N),
        (max(lam * 0.9, 1e-9), lam * 1.1 + 1e-6), max_roots=2, grid_points=60,
    )
    mode = min(res.roots, key=lambda r: abs(r.lam - lam)).mode

    norm2, _ = adaptive_gauss(
        lambda r: np.array([mode.eval(x, 0) ** 2 * x ** (N - 1) for x in np.atleast_1d(r)]),
        0.0, 1.0, tol=1e-11,
    )
    if norm2 <= 0.0:
        raise DegenerateMode(f"Neumann mode l={l} has zero L2(B) norm")
    c = 1.0 / math.sqrt(norm2)
    bdata = tuple(c * mode.eval(1.0, d) for d in range(3))
    idx = (0,) if l == 0 else (0, 1)
    return MultipletSpec(
        l=l, N=N, tau=tau, problem="neumann", s=s, lam=lam,
        indices=idx, boundary_data=bdata,
    )


def surface_fields(multiplet: MultipletSpec, theta: np.ndarray) -> dict[str, np.ndarray]:
    """Per-point multiplet sums {v^2, d(v^2)/dn, |grad v|^2, |D^2 v|^2} on dB.

    Evaluated mode by mode from (R(1), R'(1), R''(1)) and angular
    derivatives; the theta-dependence cancels only in the sum, which is what
    the criticality check exercises.
    """
    th = np.asarray(theta, dtype=float)
    R0, R1, R2 = multiplet.boundary_data
    l = multiplet.l
    v2 = np.zeros_like(th)
    dv2 = np.zeros_like(th)
    grad2 = np.zeros_like(th)
    hess2 = np.zeros_like(th)
    for idx in multiplet.indices:
        Y = circle_harmonic(l, idx, th)
        Y1 = circle_harmonic(l, idx, th, derivative=1)
        Y2 = circle_harmonic(l, idx, th, derivative=2)
        v2 += (R0 * Y) ** 2
        dv2 += 2.0 * R0 * R1 * Y ** 2
        grad2 += (R1 * Y) ** 2 + (R0 * Y1) ** 2
        # polar-frame Hessian at r = 1: (R'' Y, (R'-R) Y', R Y'' + R' Y)
        hess2 += (R2 * Y) ** 2 + 2.0 * ((R1 - R0) * Y1) ** 2 + (R0 * Y2 + R1 * Y) ** 2
    return {"v2": v2, "dv2_dn": dv2, "grad2": grad2, "hess2": hess2}


def _integrand(multiplet: MultipletSpec, theta: np.ndarray, K: float) -> np.ndarray:
    f = surface_fields(multiplet, theta)
    if multiplet.problem == "steklov":
        return (
            multiplet.lam * (K * f["v2"] + f["dv2_dn"])
            - multiplet.tau * f["grad2"]
            - f["hess2"]
        )
    return multiplet.lam * f["v2"] - multiplet.tau * f["grad2"] - f["hess2"]


def hadamard_derivative(
    multiplet: MultipletSpec,
    speed: NormalSpeed,
    K_convention: float | None = None,
    n_nodes: int = 2048,
) -> float:
    """Boundary-integral shape derivative of Lambda_{F,s} for normal speed g.

    K defaults to the sum of principal curvatures of the unit sphere (N-1,
    i.e. 1 on the unit circle), the unique constant matching the dilation
    oracle.
    """
    K = float(K_convention) if K_convention is not None else float(multiplet.N - 1)
    th = np.arange(n_nodes) * (2.0 * math.pi / n_nodes)
    vals = _integrand(multiplet, th, K) * speed(th)
    integral = periodic_trapezoid(vals)
    prefactor = multiplet.lam ** (multiplet.s - 1) * math.comb(
        multiplet.size - 1, multiplet.s - 1
    )
    return -prefactor * integral


def volume_derivative(speed: NormalSpeed, n_nodes: int = 2048) -> float:
    """Derivative of the enclosed measure: integral of g over the circle."""
    th = np.arange(n_nodes) * (2.0 * math.pi / n_nodes)
    return periodic_trapezoid(speed(th))


def _eigenvalue_of_dilated_ball(multiplet: MultipletSpec, alpha: float) -> float:
    tau_scaled = multiplet.tau * alpha ** 2
    if multiplet.problem == "steklov":
        params = ball_spectrum.ProblemParams(multiplet.N, tau_scaled)
        return ball_spectrum.eigenvalue(params, multiplet.l) / alpha ** 3
    lam = radial_solver.neumann_ball_eigenvalue(
        multiplet.l, multiplet.N, tau_scaled, near=multiplet.lam
    )
    return lam / alpha ** 4


def scaling_oracle(multiplet: MultipletSpec, h: float = 1e-4) -> float:
    """Central finite difference of alpha -> Lambda_{F,s}(alpha ball) at 1.

    Uses lambda(tau, alpha B) = alpha^-3 lambda(alpha^2 tau, B) for Steklov
    and the weak-form exponent alpha^-4 for Neumann.
    """
    if not 1e-6 <= h <= 1e-2:
        raise InvalidArgument(f"step must lie in [1e-6, 1e-2], got {h}")

    def big_lambda(alpha: float) -> float:
        lam = _eigenvalue_of_dilated_ball(multiplet, alpha)
        return math.comb(multiplet.size, multiplet.s) * lam ** multiplet.s

    return (big_lambda(1.0 + h) - big_lambda(1.0 - h)) / (2.0 * h)


def criticality_check(
    multiplet: MultipletSpec,
    n_points: int = 1000,
    seed: int = 0,
    K_convention: float | None = None,
) -> float:
    """Max relative deviation of the summed integrand over sampled boundary
    points; <= 1e-8 certifies ball criticality numerically."""
    K = float(K_convention) if K_convention is not None else float(multiplet.N - 1)
    pts = sphere_sample(multiplet.N, n_points, seed)
    th = np.arctan2(pts[:, 1], pts[:, 0])
    vals = _integrand(multiplet, th, K)
    scale = max(abs(float(vals.mean())), 1e-300)
    return float(vals.max() - vals.min()) / scale
