"""Independent weak-form cross-check for the layered radial eigenproblem.

A C1-conforming B-spline Rayleigh-Ritz discretization of

    int_B D^2 u : D^2 v + tau grad u . grad v dx  =  lambda int_B rho u v dx

restricted to u = R(r) Y_l(theta).  Interface knots carry multiplicity 4 so
the trial space is exactly C1 across density jumps: no C2/C3 matching is
imposed, which makes this an honest referee for the transfer-matrix solver's
interface assumptions.  No Bessel function enters anywhere.

The radial energy form (angular part already integrated out, harmonics
L2-normalized on the unit sphere) is

    a(R, S) = int_0^1 [ R'' S''  +  tau R' S'
                        + A2 (R'/r - g R/r^2)(S'/r - g S/r^2)
                        + beta (R/r^2)(S/r^2)  + tau k (R/r)(S/r) ] r^(N-1) dr

with k = l(l+N-2), A2 = 2k+N-1, g = 3k/A2 and
beta = k(2k^2 - (N+2)k + (4-N)(N-1))/A2 >= 0; this grouping is the
cancellation-free rewrite of the usual 1/r^4 radial integrand.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.interpolate import BSpline
from scipy.linalg import eigh

from .errors import InvalidArgument
from .radial_solver import LayeredDensity

_DEGREE = 5


def _knot_vector(density: LayeredDensity, spans_target: float) -> np.ndarray:
    pieces = [0.0, *density.interfaces, 1.0]
    interior: list[float] = []
    for a, b, is_interface_end in zip(
        pieces, pieces[1:], [True] * (len(pieces) - 2) + [False]
    ):
        nsub = max(2, int(math.ceil((b - a) / spans_target)))
        cuts = np.linspace(a, b, nsub + 1)[1:-1]
        interior.extend(float(c) for c in cuts)
        if is_interface_end:
            interior.extend([b] * 4)  # C1 only across the density jump
    t = np.concatenate(
        [np.zeros(_DEGREE + 1), np.sort(interior), np.ones(_DEGREE + 1)]
    )
    return t


def _basis_matrices(t: np.ndarray, nodes: np.ndarray) -> tuple[np.ndarray, ...]:
    n = len(t) - _DEGREE - 1
    phis = []
    for d in range(3):
        mat = np.empty((len(nodes), n))
        for i in range(n):
            c = np.zeros(n)
            c[i] = 1.0
            spl = BSpline(t, c, _DEGREE)
            mat[:, i] = spl(nodes) if d == 0 else spl.derivative(d)(nodes)
        phis.append(mat)
    return tuple(phis)


def _constraint(t: np.ndarray, l: int) -> np.ndarray:
    """Rows map free coefficients to full B-spline coefficients."""
    n = len(t) - _DEGREE - 1
    eye = np.eye(n)
    c0 = np.zeros(n)
    c0[0] = 1.0
    c1 = np.zeros(n)
    c1[1] = 1.0
    d0 = BSpline(t, c0, _DEGREE).derivative(1)(0.0)
    d1 = BSpline(t, c1, _DEGREE).derivative(1)(0.0)
    if l == 0:
        merged = eye[0] - (d0 / d1) * eye[1]  # R'(0) = 0, R(0) free
        return np.vstack([merged, eye[2:]])
    if l == 1:
        return eye[1:]  # R(0) = 0
    return eye[2:]  # R(0) = R'(0) = 0


def neumann_eigenvalues_ritz(
    l: int,
    N: int,
    tau: float,
    density: LayeredDensity,
    n_modes: int = 6,
    spans_target: float = 0.08,
    quad_order: int = 12,
) -> np.ndarray:
    """Lowest Neumann eigenvalues of the order-l radial problem, ascending."""
    if l < 0 or N < 2 or tau < 0.0:
        raise InvalidArgument("require l >= 0, N >= 2, tau >= 0")
    t = _knot_vector(density, spans_target)
    spans = sorted(set(float(x) for x in t))
    gx, gw = np.polynomial.legendre.leggauss(quad_order)

    nodes_list, weights_list = [], []
    for a, b in zip(spans, spans[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        nodes_list.append(mid + half * gx)
        weights_list.append(half * gw)
    r = np.concatenate(nodes_list)
    w = np.concatenate(weights_list)

    phi0, phi1, phi2 = _basis_matrices(t, r)
    wr = w * r ** (N - 1)

    k = l * (l + N - 2)
    A2 = 2.0 * k + N - 1.0
    g = 3.0 * k / A2 if k else 0.0
    beta = k * (2.0 * k * k - (N + 2.0) * k + (4.0 - N) * (N - 1.0)) / A2 if k else 0.0

    A = phi2.T @ (wr[:, None] * phi2) + tau * (phi1.T @ (wr[:, None] * phi1))
    G = phi1 / r[:, None] - g * phi0 / (r ** 2)[:, None]
    A += A2 * (G.T @ (wr[:, None] * G))
    if beta > 0.0:
        H = phi0 / (r ** 2)[:, None]
        A += beta * (H.T @ (wr[:, None] * H))
    if tau > 0.0 and k > 0:
        P = phi0 / r[:, None]
        A += tau * k * (P.T @ (wr[:, None] * P))

    rho = np.array([density.value_at(x) for x in r])
    B = phi0.T @ ((w * rho * r ** (N - 1))[:, None] * phi0)

    C = _constraint(t, l)
    Af = C @ A @ C.T
    Bf = C @ B @ C.T
    Af = 0.5 * (Af + Af.T)
    Bf = 0.5 * (Bf + Bf.T)
    vals = eigh(Af, Bf, eigvals_only=True)
    return np.sort(vals)[:n_modes]
