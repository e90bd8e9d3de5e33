"""Interface-matching eigensolver for the free-plate problem on the unit ball.

Separating u = R(r) Y_l(theta) reduces the bulk equation
Delta^2 u - tau Delta u = lambda rho u on a layer of constant density rho to

    (L_l - mu_+)(L_l - mu_-) R = 0,     L_l R = R'' + (N-1)/r R' - k/r^2 R,

with k = l(l+N-2) and mu_+- the roots of mu^2 - tau mu - lambda rho = 0.
Each layer therefore carries a 4-dimensional fundamental system (modified /
oscillatory ultraspherical wrappers, degenerating to powers and logs when
lambda rho = 0).  Modes are glued by continuity of R, R', R'', R''' across
density jumps (local H^4 regularity) and close with the two natural rows

    R''(1) = 0,
    -R''' - (N-1) R'' + (tau + 2k + N - 1) R' - 3k R  =  lambda R   (Steklov)
                                                      =  0          (Neumann).

Determinant assembly is overflow-proof: every column is evaluated in
exponentially scaled form and rescaled, which never moves the root set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import BranchLoss, InvalidArgument
from .harmonics import ball_volume, sphere_area
from .specfun import (
    BesselKind,
    log_scale_factor,
    modified_wrapper_series,
    ultraspherical_scaled,
)
from . import ball_spectrum

_I = BesselKind.MODIFIED_FIRST
_K = BesselKind.MODIFIED_SECOND
_J = BesselKind.ORDINARY_FIRST
_Y = BesselKind.ORDINARY_SECOND


@dataclass(frozen=True)
class LayeredDensity:
    """Piecewise-constant radial density on the unit ball, innermost first."""

    interfaces: tuple[float, ...]
    values: tuple[float, ...]
    N: int

    def __post_init__(self):
        ifs = tuple(float(r) for r in self.interfaces)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "interfaces", ifs)
        object.__setattr__(self, "values", vals)
        if len(vals) != len(ifs) + 1:
            raise InvalidArgument("need exactly one more density value than interfaces")
        if any(v <= 0.0 for v in vals):
            raise InvalidArgument("densities must be positive")
        radii = (0.0,) + ifs + (1.0,)
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise InvalidArgument("interfaces must be strictly increasing inside (0, 1)")

    @property
    def layer_count(self) -> int:
        return len(self.values)

    @property
    def M(self) -> float:
        """Total mass: integral of the density over the unit ball."""
        radii = (0.0,) + self.interfaces + (1.0,)
        return sum(
            v * (ball_volume(self.N, b) - ball_volume(self.N, a))
            for v, a, b in zip(self.values, radii, radii[1:])
        )

    def value_at(self, r: float) -> float:
        for rj, v in zip(self.interfaces, self.values):
            if r < rj:
                return v
        return self.values[-1]


def uniform_density(N: int, value: float = 1.0) -> LayeredDensity:
    return LayeredDensity(interfaces=(), values=(value,), N=N)


def make_rho_eps(eps: float, M: float, N: int) -> LayeredDensity:
    """Two-layer mass-concentration density: eps inside radius 1-eps, the
    remainder of the mass spread over the boundary shell."""
    if not 0.0 < eps < 1.0:
        raise InvalidArgument(f"eps must lie in (0, 1), got {eps}")
    if M <= 0.0:
        raise InvalidArgument(f"total mass must be positive, got {M}")
    inner_vol = ball_volume(N, 1.0 - eps)
    shell_vol = ball_volume(N) - inner_vol
    outer = (M - eps * inner_vol) / shell_vol
    if outer <= 0.0:
        raise InvalidArgument(
            f"eps={eps} too large for mass M={M}: shell density would be {outer}"
        )
    return LayeredDensity(interfaces=(1.0 - eps,), values=(eps, outer), N=N)


# ---------------------------------------------------------------------------
# per-layer fundamental systems


@dataclass(frozen=True)
class BasisMember:
    """One radial fundamental solution with analytic derivatives up to 3.

    ``scaled_eval`` returns (mantissa, log_scale) with value = mantissa *
    exp(log_scale); modified wrappers carry log_scale = +-c*r, everything
    else 0.
    """

    tag: str
    kind: str  # 'bessel' | 'power' | 'log' | 'powerlog'
    l: int
    N: int
    bessel_kind: BesselKind | None = None
    c: float = 0.0  # argument scale for bessel members
    m: float = 0.0  # exponent for power members

    def scaled_eval(self, r: float, d: int) -> tuple[float, float]:
        if self.kind == "bessel":
            z = self.c * r
            if self.bessel_kind is _I and z < 1e-6:
                return modified_wrapper_series(self.l, self.N, z, d) * self.c ** d, 0.0
            val = ultraspherical_scaled(self.bessel_kind, self.l, self.N, d, z)
            return self.c ** d * val, log_scale_factor(self.bessel_kind, z)
        if self.kind == "power":
            c = 1.0
            e = self.m
            for j in range(d):
                c *= e - j
            if c == 0.0:
                return 0.0, 0.0
            return c * r ** (e - d), 0.0
        if self.kind == "log":
            if d == 0:
                return math.log(r), 0.0
            sign = -1.0 if d % 2 == 0 else 1.0
            return sign * math.factorial(d - 1) * r ** (-d), 0.0
        # r^m log r
        a, b = 1.0, 0.0
        for j in range(d):
            a, b = (self.m - j) * a, (self.m - j) * b + a
        return r ** (self.m - d) * (a * math.log(r) + b), 0.0

    def eval(self, r: float, d: int) -> float:
        v, ls = self.scaled_eval(r, d)
        return v * math.exp(ls)


@dataclass(frozen=True)
class LayerBasis:
    """Fundamental system of the layer ODE; members[0:2] are regular at 0."""

    members: tuple[BasisMember, ...]
    mu_plus: float
    mu_minus: float


def _singular_power_member(l: int, N: int, exponent: float, taken: set[float], tag: str) -> BasisMember:
    # exponent collisions with an already-present power demand a log factor
    if exponent in taken:
        if exponent == 0.0:
            return BasisMember(tag=tag, kind="log", l=l, N=N)
        return BasisMember(tag=tag, kind="powerlog", l=l, N=N, m=exponent)
    taken.add(exponent)
    return BasisMember(tag=tag, kind="power", l=l, N=N, m=exponent)


def layer_basis(l: int, N: int, tau: float, lam: float, rho: float) -> LayerBasis:
    """Fundamental system for one constant-density layer at eigenvalue lam."""
    if lam * rho < 0.0:
        raise InvalidArgument("layer_basis requires lambda * rho >= 0")
    lam_rho = lam * rho
    if lam_rho > 0.0:
        disc = math.sqrt(tau * tau + 4.0 * lam_rho)
        mu_p = 0.5 * (tau + disc)
        mu_m = 0.5 * (tau - disc)
        cp, cm = math.sqrt(mu_p), math.sqrt(-mu_m)
        members = (
            BasisMember("regular-modified", "bessel", l, N, _I, cp),
            BasisMember("regular-oscillatory", "bessel", l, N, _J, cm),
            BasisMember("singular-modified", "bessel", l, N, _K, cp),
            BasisMember("singular-oscillatory", "bessel", l, N, _Y, cm),
        )
        return LayerBasis(members, mu_p, mu_m)
    if tau > 0.0:
        taken = {float(l)}
        sing_h = _singular_power_member(l, N, float(2 - N - l), taken, "singular-harmonic")
        z = math.sqrt(tau)
        members = (
            BasisMember("regular-harmonic", "power", l, N, m=float(l)),
            BasisMember("regular-modified", "bessel", l, N, _I, z),
            sing_h,
            BasisMember("singular-modified", "bessel", l, N, _K, z),
        )
        return LayerBasis(members, tau, 0.0)
    # tau = 0 and lambda rho = 0: fully polynomial system with log degenerations
    taken = {float(l), float(l + 2)}
    sing1 = _singular_power_member(l, N, float(2 - N - l), taken, "singular-harmonic")
    sing2 = _singular_power_member(l, N, float(4 - N - l), taken, "singular-biharmonic")
    members = (
        BasisMember("regular-harmonic", "power", l, N, m=float(l)),
        BasisMember("regular-biharmonic", "power", l, N, m=float(l + 2)),
        sing1,
        sing2,
    )
    return LayerBasis(members, 0.0, 0.0)


# ---------------------------------------------------------------------------
# dispersion matrix and root finding


def _bc2_coeffs(l: int, N: int, tau: float) -> tuple[float, float, float, float]:
    """Row weights (on R, R', R'', R''') of the third-order boundary operator
    tau dR - k Delta_S-part - (Delta R)' at r = 1."""
    k = l * (l + N - 2)
    return (-3.0 * k, tau + 2.0 * k + N - 1.0, -(N - 1.0), -1.0)


def _assemble(
    l: int,
    N: int,
    tau: float,
    lam: float,
    density: LayeredDensity,
    steklov: bool = False,
) -> tuple[np.ndarray, list[float], list[tuple[int, BasisMember]]]:
    """Scaled dispersion matrix, per-column log multipliers, column layout."""
    K = density.layer_count
    # Steklov: the eigenvalue sits only in the boundary row, the bulk equation
    # is Delta^2 u - tau Delta u = 0; Neumann: lambda rho enters the bulk.
    interior_lam = 0.0 if steklov else lam
    bases = [layer_basis(l, N, tau, interior_lam, rho) for rho in density.values]
    columns: list[tuple[int, BasisMember]] = []
    for j, basis in enumerate(bases):
        take = basis.members[:2] if j == 0 else basis.members
        columns.extend((j, mem) for mem in take)

    n = 4 * K - 2
    rows_of_layer: dict[int, list[tuple[int, float, int, float]]] = {j: [] for j in range(K)}
    # (row_index, radius, derivative, weight) entries per layer
    row = 0
    for j, rj in enumerate(density.interfaces):
        for d in range(4):
            rows_of_layer[j].append((row, rj, d, 1.0))
            rows_of_layer[j + 1].append((row, rj, d, -1.0))
            row += 1
    w0, w1, w2, w3 = _bc2_coeffs(l, N, tau)
    rows_of_layer[K - 1].append((row, 1.0, 2, 1.0))  # R''(1) = 0
    lam_term = lam if steklov else 0.0
    bc2_weights = (w0 - lam_term, w1, w2, w3)
    row += 1

    M = np.zeros((n, n))
    log_mult: list[float] = []
    for cidx, (j, mem) in enumerate(columns):
        entries: list[tuple[int, float, float]] = []  # (row, mantissa, log_scale)
        for ridx, r, d, weight in rows_of_layer[j]:
            v, ls = mem.scaled_eval(r, d)
            entries.append((ridx, weight * v, ls))
        if j == K - 1:
            # second boundary row combines derivatives 0..3 at r = 1
            v_ls = [mem.scaled_eval(1.0, d) for d in range(4)]
            ls = v_ls[0][1]
            val = sum(w * v for w, (v, _) in zip(bc2_weights, v_ls))
            entries.append((row - 0, val, ls))
        lmax = max(ls for _, _, ls in entries)
        col = np.zeros(n)
        for ridx, v, ls in entries:
            col[ridx] += v * math.exp(ls - lmax)
        scale = np.max(np.abs(col))
        if scale == 0.0:
            scale = 1.0
        M[:, cidx] = col / scale
        log_mult.append(-lmax - math.log(scale))
    return M, log_mult, columns


def neumann_dispersion_matrix(
    l: int, N: int, tau: float, lam: float, density: LayeredDensity
) -> np.ndarray:
    """Column-scaled matrix whose kernel vectors are layer coefficients of
    genuine Neumann eigenmodes at eigenvalue lam."""
    if lam < 0.0:
        raise InvalidArgument(f"lambda must be >= 0, got {lam}")
    M, _, _ = _assemble(l, N, tau, lam, density, steklov=False)
    if not np.all(np.isfinite(M)):  # pragma: no cover - scaled assembly forbids this
        raise InvalidArgument("dispersion matrix contains nonfinite entries")
    return M


def _signed_det(M: np.ndarray) -> tuple[float, float]:
    sign, logabs = np.linalg.slogdet(M)
    return float(sign), float(logabs)


@dataclass(frozen=True)
class RadialMode:
    """Piecewise radial eigenmode assembled from layer coefficients."""

    l: int
    N: int
    tau: float
    lam: float
    density: LayeredDensity
    coefficients: tuple[tuple[float, ...], ...]  # per layer, per member
    bases: tuple[LayerBasis, ...] = field(repr=False, default=())

    def eval(self, r: float, d: int = 0) -> float:
        radii = (0.0,) + self.density.interfaces + (1.0,)
        j = self.density.layer_count - 1
        for idx in range(self.density.layer_count):
            if r <= radii[idx + 1]:
                j = idx
                break
        basis = self.bases[j]
        members = basis.members[:2] if j == 0 else basis.members
        return sum(c * mem.eval(r, d) for c, mem in zip(self.coefficients[j], members))

    def boundary_data(self) -> tuple[float, float, float]:
        return (self.eval(1.0, 0), self.eval(1.0, 1), self.eval(1.0, 2))


@dataclass(frozen=True)
class RootRecord:
    lam: float
    bracket: tuple[float, float]
    det_signs: tuple[float, float]
    residual: float
    multiplicity_suspect: bool
    mode: RadialMode


@dataclass(frozen=True)
class DispersionResult:
    l: int
    roots: tuple[RootRecord, ...]


def _null_vector(M: np.ndarray) -> np.ndarray:
    _, _, vt = np.linalg.svd(M)
    return vt[-1]


def _extract_mode(
    l: int, N: int, tau: float, lam: float, density: LayeredDensity, steklov: bool
) -> RadialMode:
    M, log_mult, columns = _assemble(l, N, tau, lam, density, steklov=steklov)
    c = _null_vector(M)
    # undo column multipliers; overall scale normalized via the largest weight
    logs = [lm + (math.log(abs(ci)) if ci != 0.0 else -math.inf) for lm, ci in zip(log_mult, c)]
    ref = max(logs)
    raw = [
        (math.copysign(math.exp(lg - ref), ci) if math.isfinite(lg) else 0.0)
        for lg, ci in zip(logs, c)
    ]
    interior_lam = 0.0 if steklov else lam
    bases = tuple(layer_basis(l, N, tau, interior_lam, rho) for rho in density.values)
    K = density.layer_count
    per_layer: list[tuple[float, ...]] = []
    pos = 0
    for j in range(K):
        width = 2 if j == 0 else 4
        per_layer.append(tuple(raw[pos : pos + width]))
        pos += width
    mode = RadialMode(
        l=l, N=N, tau=tau, lam=lam, density=density,
        coefficients=tuple(per_layer), bases=bases,
    )
    # positive boundary trace when possible, for reproducible signs
    if mode.eval(1.0, 0) < 0.0:
        mode = RadialMode(
            l=l, N=N, tau=tau, lam=lam, density=density,
            coefficients=tuple(tuple(-x for x in layer) for layer in per_layer),
            bases=bases,
        )
    return mode


def mode_residual(mode: RadialMode) -> float:
    """Max relative defect of the Neumann interface and boundary rows."""
    dens, l, N, tau = mode.density, mode.l, mode.N, mode.tau
    worst = 0.0
    for rj in dens.interfaces:
        for d in range(4):
            left = mode.eval(rj * (1.0 - 1e-13), d)
            right = mode.eval(rj * (1.0 + 1e-13), d)
            scale = max(abs(left), abs(right), 1e-300)
            worst = max(worst, abs(left - right) / scale)
    vals = [mode.eval(1.0, d) for d in range(4)]
    w = _bc2_coeffs(l, N, tau)
    bc2 = sum(wi * vi for wi, vi in zip(w, vals))
    scale2 = max(*(abs(wi * vi) for wi, vi in zip(w, vals)), 1e-300)
    scale1 = max(abs(vals[0]), abs(vals[1]), abs(vals[2]), 1e-300)
    worst = max(worst, abs(vals[2]) / scale1, abs(bc2) / scale2)
    return worst


def solve_neumann_eigenvalues(
    l: int,
    N: int,
    tau: float,
    density: LayeredDensity,
    lam_window: tuple[float, float],
    max_roots: int = 8,
    grid_points: int = 240,
) -> DispersionResult:
    """All determinant sign-change roots in the window, bracketed and refined.

    Empty windows return an empty result; clustered roots that the sign test
    cannot separate are reported with ``multiplicity_suspect``.
    """
    lo, hi = lam_window
    if lo < 0.0 or hi <= lo:
        raise InvalidArgument(f"invalid lambda window {lam_window}")

    def det_at(lam: float) -> tuple[float, float]:
        M, _, _ = _assemble(l, N, tau, lam, density, steklov=False)
        return _signed_det(M)

    grid = np.linspace(lo, hi, grid_points)
    dets = [det_at(x) for x in grid]
    logabs_ref = max(la for _, la in dets if math.isfinite(la))

    roots: list[RootRecord] = []

    def refined(a: float, b: float, sa: float, sb: float):
        def g(x: float) -> float:
            s, la = det_at(x)
            return s * math.exp(min(la - logabs_ref, 60.0))

        lam_star = brentq(g, a, b, xtol=1e-14 * max(1.0, b), rtol=1e-13, maxiter=200)
        delta = 1e-7 * max(1.0, lam_star)
        g_m, g_p = g(max(lam_star - delta, lo)), g(min(lam_star + delta, hi))
        suspect = (g_m != 0.0) and (g_p != 0.0) and (math.copysign(1, g_m) == math.copysign(1, g_p))
        mode = _extract_mode(l, N, tau, lam_star, density, steklov=False)
        roots.append(
            RootRecord(
                lam=lam_star,
                bracket=(a, b),
                det_signs=(sa, sb),
                residual=mode_residual(mode),
                multiplicity_suspect=suspect,
                mode=mode,
            )
        )

    # exact kernel at a grid point (e.g. lambda = 0 for l = 0)
    tiny = logabs_ref - 27.0 * math.log(10.0)
    for x, (s, la) in zip(grid, dets):
        if s == 0.0 or la < tiny:
            if not any(abs(x - r.lam) <= 1e-9 * max(1.0, x) for r in roots):
                mode = _extract_mode(l, N, tau, x, density, steklov=False)
                roots.append(
                    RootRecord(
                        lam=float(x), bracket=(float(x), float(x)), det_signs=(s, s),
                        residual=mode_residual(mode), multiplicity_suspect=False, mode=mode,
                    )
                )

    for (x0, (s0, _)), (x1, (s1, _)) in zip(zip(grid, dets), zip(grid[1:], dets[1:])):
        if len(roots) >= max_roots:
            break
        if s0 != 0.0 and s1 != 0.0 and s0 != s1:
            if any(x0 <= r.lam <= x1 for r in roots):
                continue
            refined(float(x0), float(x1), s0, s1)

    roots.sort(key=lambda r: r.lam)
    return DispersionResult(l=l, roots=tuple(roots[:max_roots]))


def steklov_determinant_root(
    l: int, N: int, tau: float, lam_window: tuple[float, float]
) -> float:
    """Root of the 2x2 boundary determinant on the uniform ball; agrees with
    the closed-form eigenvalue."""
    if tau <= 0.0:
        raise InvalidArgument("steklov_determinant_root requires tau > 0")
    lo, hi = lam_window
    if hi <= lo:
        raise InvalidArgument(f"invalid lambda window {lam_window}")
    density = uniform_density(N)

    def det_at(lam: float) -> tuple[float, float]:
        M, _, _ = _assemble(l, N, tau, lam, density, steklov=True)
        return _signed_det(M)

    grid = np.linspace(lo, hi, 160)
    dets = [det_at(x) for x in grid]
    logabs_ref = max(la for _, la in dets if math.isfinite(la))
    for x, (s, la) in zip(grid, dets):
        if s == 0.0 or la < logabs_ref - 30.0 * math.log(10.0):
            return float(x)

    def g(x: float) -> float:
        s, la = det_at(x)
        return s * math.exp(min(la - logabs_ref, 60.0))

    for (x0, (s0, _)), (x1, (s1, _)) in zip(zip(grid, dets), zip(grid[1:], dets[1:])):
        if s0 != s1:
            return float(brentq(g, float(x0), float(x1), xtol=1e-15 * max(1.0, x1), rtol=8.9e-16, maxiter=200))
    raise InvalidArgument(f"no Steklov determinant root inside window {lam_window}")


def steklov_mode(l: int, N: int, tau: float, lam: float) -> RadialMode:
    """Uniform-ball Steklov mode at eigenvalue lam (kernel of the 2x2 system)."""
    return _extract_mode(l, N, tau, lam, uniform_density(N), steklov=True)


# ---------------------------------------------------------------------------
# mass concentration


@dataclass(frozen=True)
class ConcentrationRow:
    eps: float
    lam: float
    target: float
    rel_error: float


def neumann_ball_eigenvalue(
    l: int, N: int, tau: float, near: float | None = None
) -> float:
    """Smallest relevant Neumann eigenvalue of the uniform unit ball at order l."""
    density = uniform_density(N)
    if near is None:
        # first positive eigenvalue: scan upward, widening until a root appears
        lo, hi = 1e-6, 30.0 * max(1.0, tau)
        for _ in range(7):
            res = solve_neumann_eigenvalues(
                l, N, tau, density, (lo, hi), max_roots=1,
                grid_points=max(200, int((hi - lo) / max(tau, 1.0))),
            )
            if res.roots:
                return res.roots[0].lam
            lo, hi = hi, 4.0 * hi
        raise InvalidArgument(f"no Neumann eigenvalue found below {hi} for l={l}")
    res = solve_neumann_eigenvalues(
        l, N, tau, density, (0.5 * near, 1.7 * near), max_roots=4, grid_points=160
    )
    if not res.roots:
        raise InvalidArgument(f"no Neumann eigenvalue near {near} for l={l}")
    return min((r.lam for r in res.roots), key=lambda x: abs(x - near))


def concentration_experiment(
    l: int,
    N: int,
    tau: float,
    M: float,
    eps_list: tuple[float, ...],
) -> list[ConcentrationRow]:
    """Track the Neumann eigenvalue branch of rho_eps toward its Steklov limit.

    The limiting value is the Steklov eigenvalue with constant surface density
    M/|dB|, i.e. closed_form * |dB| / M by linearity of the boundary weight.
    """
    eps_list = tuple(float(e) for e in eps_list)
    if any(e2 >= e1 for e1, e2 in zip(eps_list, eps_list[1:])):
        raise InvalidArgument("eps_list must be strictly decreasing")
    params = ball_spectrum.ProblemParams(N, tau)
    target = ball_spectrum.eigenvalue(params, l) * sphere_area(N) / M
    rows: list[ConcentrationRow] = []
    prev: float | None = None
    for eps in eps_list:
        density = make_rho_eps(eps, M, N)
        center = target if prev is None else prev
        window = (max(center / 3.0, 1e-9), 2.8 * center)
        step = target / 50.0
        pts = max(80, int((window[1] - window[0]) / step))
        res = solve_neumann_eigenvalues(l, N, tau, density, window, max_roots=12, grid_points=pts)
        if not res.roots:
            raise BranchLoss(f"no root found in window {window} at eps={eps}")
        lam = min((r.lam for r in res.roots), key=lambda x: abs(x - center))
        if prev is not None and abs(lam - prev) > 0.5 * prev:
            raise BranchLoss(
                f"eigenvalue branch jumped from {prev} to {lam} between eps steps"
            )
        rows.append(ConcentrationRow(eps=eps, lam=lam, target=target, rel_error=abs(lam - target) / target))
        prev = lam
    return rows
