"""Planar geometry and the quantitative isoperimetric chain.

Test domains are simple counterclockwise polygons.  The chain verified for
each polygon (after translating its boundary centroid to the origin):

    sum_{j=2}^{N+1} 1/lambda_j(Omega)  >=  m2 / (tau |Omega|)
        ==>  lambda_2(Omega) <= UB(Omega) := N tau |Omega| / m2,

    m2 >= m2(ball)(1 + c_{N,2} (|Omega A Omega*|/|Omega|)^2)   (moment bound)
        ==>  UB(Omega) <= lambda_2(Omega*) (1 - delta_N A(Omega)^2),

with m2 the second boundary moment about the origin, Omega* the equal-area
disk, A the Fraenkel asymmetry, and lambda_2(Omega*) = tau / R* from the
eigenvalue scaling law combined with lambda_2(B) = tau.  All areas are exact
(shoelace and Green's-theorem disk clipping), no meshes.

Explicit stability constants:

    c_{N,p}  = (N+p-1)(p-1)/4 * (2^(1/N)-1)/N * min_{t in [1, 2^(1/N)]} t^(p-1),
    delta_N  = (N+1)/(8N) (2^(1/N)-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import minimize

from .errors import InvalidArgument, InvalidPolygon


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _segments_intersect(p1, p2, p3, p4) -> bool:
    d1 = _cross(p3, p4, p1)
    d2 = _cross(p3, p4, p2)
    d3 = _cross(p1, p2, p3)
    d4 = _cross(p1, p2, p4)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True
    return False


@dataclass(frozen=True)
class PlanarPolygon:
    """Simple polygon with counterclockwise vertices and positive area."""

    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self):
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 3:
            raise InvalidPolygon("a polygon needs at least 3 vertices")
        if self._signed_area() <= 0.0:
            raise InvalidPolygon("vertices must be counterclockwise with positive area")
        n = len(verts)
        for i in range(n):
            a1, a2 = verts[i], verts[(i + 1) % n]
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue  # adjacent edges share a vertex
                b1, b2 = verts[j], verts[(j + 1) % n]
                if _segments_intersect(a1, a2, b1, b2):
                    raise InvalidPolygon(f"edges {i} and {j} intersect")

    @classmethod
    def from_vertices(cls, vertices) -> "PlanarPolygon":
        """Build a polygon, reversing clockwise input."""
        verts = [(float(x), float(y)) for x, y in vertices]
        area2 = sum(
            verts[i][0] * verts[(i + 1) % len(verts)][1]
            - verts[(i + 1) % len(verts)][0] * verts[i][1]
            for i in range(len(verts))
        )
        if area2 < 0.0:
            verts.reverse()
        return cls(tuple(verts))

    def _signed_area(self) -> float:
        v = self.vertices
        n = len(v)
        return 0.5 * sum(
            v[i][0] * v[(i + 1) % n][1] - v[(i + 1) % n][0] * v[i][1] for i in range(n)
        )

    @cached_property
    def area(self) -> float:
        return self._signed_area()

    @cached_property
    def perimeter(self) -> float:
        v = np.asarray(self.vertices)
        return float(np.sum(np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)))

    @cached_property
    def boundary_centroid(self) -> tuple[float, float]:
        """Length-weighted centroid of the boundary curve (exact per edge)."""
        v = np.asarray(self.vertices)
        nxt = np.roll(v, -1, axis=0)
        lengths = np.linalg.norm(nxt - v, axis=1)
        mids = 0.5 * (v + nxt)
        c = (lengths[:, None] * mids).sum(axis=0) / lengths.sum()
        return (float(c[0]), float(c[1]))

    def translated(self, dx: float, dy: float) -> "PlanarPolygon":
        return PlanarPolygon(tuple((x + dx, y + dy) for x, y in self.vertices))

    def scaled(self, factor: float) -> "PlanarPolygon":
        if factor <= 0.0:
            raise InvalidArgument("scale factor must be positive")
        return PlanarPolygon(tuple((factor * x, factor * y) for x, y in self.vertices))


def polygon_measures(poly: PlanarPolygon) -> tuple[float, float, tuple[float, float]]:
    """(area, perimeter, boundary centroid), all in closed form."""
    return poly.area, poly.perimeter, poly.boundary_centroid


def boundary_moment(poly: PlanarPolygon, p: float, center=(0.0, 0.0)) -> float:
    """int_{boundary} |x - center|^p dsigma; exact for p = 2, Gauss otherwise."""
    if p <= 1.0:
        raise InvalidArgument(f"moment exponent must exceed 1, got {p}")
    v = np.asarray(poly.vertices) - np.asarray(center, dtype=float)
    nxt = np.roll(v, -1, axis=0)
    d = nxt - v
    lengths = np.linalg.norm(d, axis=1)
    if p == 2.0:
        # int_0^1 |A + t d|^2 dt = |A|^2 + A.d + |d|^2/3 per unit-length param
        a2 = np.sum(v * v, axis=1)
        ad = np.sum(v * d, axis=1)
        d2 = np.sum(d * d, axis=1)
        return float(np.sum(lengths * (a2 + ad + d2 / 3.0)))
    gx, gw = np.polynomial.legendre.leggauss(24)
    t = 0.5 * (gx + 1.0)
    w = 0.5 * gw
    pts = v[:, None, :] + t[None, :, None] * d[:, None, :]
    radii = np.linalg.norm(pts, axis=2)
    return float(np.sum(lengths[:, None] * w[None, :] * radii ** p))


def disk_polygon_intersection_area(
    poly: PlanarPolygon, center=(0.0, 0.0), radius: float = 1.0
) -> float:
    """Exact area of polygon intersect disk via signed triangles and sectors."""
    if radius <= 0.0:
        raise InvalidArgument(f"radius must be positive, got {radius}")
    cx, cy = float(center[0]), float(center[1])
    verts = [(x - cx, y - cy) for x, y in poly.vertices]
    n = len(verts)
    R = radius
    total = 0.0
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        dx, dy = bx - ax, by - ay
        qa = dx * dx + dy * dy
        qb = 2.0 * (ax * dx + ay * dy)
        qc = ax * ax + ay * ay - R * R
        cuts = [0.0, 1.0]
        if qa > 0.0:
            disc = qb * qb - 4.0 * qa * qc
            if abs(disc) <= 1e-12 * max(qb * qb, abs(4.0 * qa * qc), 1e-30):
                # tangency: deterministic radius nudge re-solve
                qc_n = ax * ax + ay * ay - (R * (1.0 + 1e-12)) ** 2
                disc = qb * qb - 4.0 * qa * qc_n
            if disc > 0.0:
                sq = math.sqrt(disc)
                for t in ((-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)):
                    if 0.0 < t < 1.0:
                        cuts.append(t)
        cuts.sort()
        for t0, t1 in zip(cuts, cuts[1:]):
            if t1 <= t0:
                continue
            tm = 0.5 * (t0 + t1)
            mx, my = ax + tm * dx, ay + tm * dy
            p0 = (ax + t0 * dx, ay + t0 * dy)
            p1 = (ax + t1 * dx, ay + t1 * dy)
            if mx * mx + my * my <= R * R:
                total += 0.5 * (p0[0] * p1[1] - p1[0] * p0[1])
            else:
                ang = math.atan2(p1[1], p1[0]) - math.atan2(p0[1], p0[0])
                while ang > math.pi:
                    ang -= 2.0 * math.pi
                while ang < -math.pi:
                    ang += 2.0 * math.pi
                total += 0.5 * R * R * ang
    return abs(total)


def symmetric_difference_to_disk(poly: PlanarPolygon, center, radius: float) -> float:
    """|Omega symmetric-difference B(center, radius)|, exact."""
    inter = disk_polygon_intersection_area(poly, center, radius)
    return poly.area + math.pi * radius ** 2 - 2.0 * inter


def fraenkel_asymmetry(poly: PlanarPolygon) -> tuple[float, tuple[float, float]]:
    """Fraenkel asymmetry A(Omega) and the optimal ball center.

    The ball radius is fixed by the area constraint, so the infimum runs over
    centers only: coarse 33x33 grid over the bounding box, then Nelder-Mead.
    """
    radius = math.sqrt(poly.area / math.pi)
    v = np.asarray(poly.vertices)
    lo, hi = v.min(axis=0), v.max(axis=0)

    def objective(c):
        return symmetric_difference_to_disk(poly, (c[0], c[1]), radius)

    best_val, best_c = math.inf, None
    for x in np.linspace(lo[0], hi[0], 33):
        for y in np.linspace(lo[1], hi[1], 33):
            val = objective((x, y))
            if val < best_val:
                best_val, best_c = val, (x, y)
    res = minimize(
        objective,
        np.asarray(best_c),
        method="Nelder-Mead",
        options={"xatol": 1e-8, "fatol": 1e-12, "maxiter": 400},
    )
    c = res.x if res.fun <= best_val else np.asarray(best_c)
    val = float(min(res.fun, best_val))
    return val / poly.area, (float(c[0]), float(c[1]))


def stability_constants(N: int, p: float) -> tuple[float, float]:
    """(c_{N,p}, delta_N) from their explicit closed forms."""
    if N < 2 or p <= 1.0:
        raise InvalidArgument(f"require N >= 2 and p > 1, got N={N}, p={p}")
    two_root = 2.0 ** (1.0 / N)
    t_min = min(1.0, two_root) ** (p - 1.0)  # t^(p-1) increasing on [1, 2^(1/N)]
    c = (N + p - 1.0) * (p - 1.0) / 4.0 * (two_root - 1.0) / N * t_min
    delta = (N + 1.0) / (8.0 * N) * (two_root - 1.0)
    return c, delta


@dataclass(frozen=True)
class IsoReport:
    """Quantitative isoperimetric verdict for one polygon at tension tau."""

    area: float
    perimeter: float
    boundary_centroid: tuple[float, float]
    moment2: float
    asymmetry: float
    asymmetry_center: tuple[float, float]
    c_constant: float
    delta: float
    moment_lhs: float
    moment_rhs: float
    lambda2_upper_bound: float
    lambda2_ball: float
    quantitative_bound: float
    moment_inequality_holds: bool
    upper_bound_below_ball: bool
    quantitative_holds: bool

    def csv_row(self) -> list[float]:
        return [
            self.area, self.perimeter, self.moment2, self.asymmetry,
            self.moment_lhs, self.moment_rhs, self.lambda2_upper_bound,
            self.lambda2_ball, self.quantitative_bound,
            float(self.moment_inequality_holds),
            float(self.upper_bound_below_ball),
            float(self.quantitative_holds),
        ]

    CSV_HEADER = (
        "area,perimeter,moment2,asymmetry,moment_lhs,moment_rhs,"
        "lambda2_upper_bound,lambda2_ball,quantitative_bound,"
        "moment_inequality_holds,upper_bound_below_ball,quantitative_holds"
    )


def isoperimetric_report(poly: PlanarPolygon, tau: float) -> IsoReport:
    """Run the full N = 2 inequality chain for one polygon."""
    if tau <= 0.0:
        raise InvalidArgument(f"tension must be positive, got {tau}")
    N = 2
    cx, cy = poly.boundary_centroid
    centered = poly.translated(-cx, -cy)
    area = centered.area
    m2 = boundary_moment(centered, 2.0, (0.0, 0.0))
    r_star = math.sqrt(area / math.pi)
    ball_moment = 2.0 * math.pi * r_star ** 3

    c22, delta2 = stability_constants(N, 2.0)
    dsym0 = symmetric_difference_to_disk(centered, (0.0, 0.0), r_star)
    moment_rhs = ball_moment * (1.0 + c22 * (dsym0 / area) ** 2)

    asym, center = fraenkel_asymmetry(centered)
    ub = N * tau * area / m2
    lam2_ball = tau / r_star
    quant = lam2_ball * (1.0 - delta2 * asym ** 2)

    return IsoReport(
        area=area,
        perimeter=centered.perimeter,
        boundary_centroid=(cx, cy),
        moment2=m2,
        asymmetry=asym,
        asymmetry_center=center,
        c_constant=c22,
        delta=delta2,
        moment_lhs=m2,
        moment_rhs=moment_rhs,
        lambda2_upper_bound=ub,
        lambda2_ball=lam2_ball,
        quantitative_bound=quant,
        moment_inequality_holds=m2 >= moment_rhs * (1.0 - 1e-12),
        upper_bound_below_ball=ub <= lam2_ball * (1.0 + 1e-12),
        quantitative_holds=ub <= quant * (1.0 + 1e-12),
    )


# ---------------------------------------------------------------------------
# polygon factories for test corpora


def regular_polygon(n: int, radius: float = 1.0, center=(0.0, 0.0)) -> PlanarPolygon:
    ang = 2.0 * math.pi * np.arange(n) / n
    return PlanarPolygon(
        tuple(
            (center[0] + radius * math.cos(a), center[1] + radius * math.sin(a))
            for a in ang
        )
    )


def rectangle(width: float, height: float, center=(0.0, 0.0)) -> PlanarPolygon:
    cx, cy = center
    w, h = width / 2.0, height / 2.0
    return PlanarPolygon(
        ((cx - w, cy - h), (cx + w, cy - h), (cx + w, cy + h), (cx - w, cy + h))
    )


def perturbed_disk(n: int, amplitude: float, mode: int, radius: float = 1.0) -> PlanarPolygon:
    ang = 2.0 * math.pi * np.arange(n) / n
    r = radius * (1.0 + amplitude * np.cos(mode * ang))
    return PlanarPolygon(tuple((ri * math.cos(a), ri * math.sin(a)) for ri, a in zip(r, ang)))


def l_shape(size: float = 2.0, notch: float = 1.0) -> PlanarPolygon:
    s, t = size, notch
    return PlanarPolygon(
        ((0.0, 0.0), (s, 0.0), (s, s - t), (s - t, s - t), (s - t, s), (0.0, s))
    )
