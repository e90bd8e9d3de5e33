"""Closed-form Steklov plate spectrum of the unit ball.

For tension tau > 0 the eigenvalue attached to harmonic order l is

    lambda_(l) = l * [ 3(l-1) l (l+N-2) i_l
                       - (l-1) sqrt(tau) (N-1 + 2Nl + 2l(l-2) + tau) i_l'
                       + tau ((l-1)(l+2N-3) + tau) i_l''
                       + (l-1) tau sqrt(tau) i_l''' ]
                 / [ (1-l) l i_l + tau i_l'' ],

all wrappers evaluated at sqrt(tau).  The corresponding radial mode is
R_l(r) = A r^l + B i_l(sqrt(tau) r) with tau i_l''(sqrt(tau)) B = l(1-l) A.
For tau = 0 the spectrum is rational: lambda_(l) = l(l-1)(N + 2Nl +
(l-1)(2+3l)) / (1+2l), with mode A r^l + B r^(l+2), B/A = -l(l-1)/((l+2)(l+1)).

All formula evaluations use exponentially scaled wrapper values; eigenvalues
are scale-invariant ratios, so no tension is large enough to overflow them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateFormula, InvalidArgument
from .harmonics import multiplicity
from .specfun import (
    BesselKind,
    modified_wrapper_series,
    ultraspherical_scaled,
)

_I = BesselKind.MODIFIED_FIRST


@dataclass(frozen=True)
class ProblemParams:
    """Space dimension N >= 2 and lateral tension tau >= 0."""

    N: int
    tau: float

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 2:
            raise InvalidArgument(f"dimension N must be an integer >= 2, got {self.N!r}")
        if not math.isfinite(self.tau) or self.tau < 0.0:
            raise InvalidArgument(f"tension tau must be finite and >= 0, got {self.tau!r}")


@dataclass(frozen=True)
class ModeProfile:
    """Radial mode coefficients under boundary-unit normalization R(1) = 1."""

    l: int
    A: float
    B: float
    normalization: str = "boundary-unit"


@dataclass(frozen=True)
class SpectrumEntry:
    l: int
    lam: float
    m: int
    profile: ModeProfile


def _scaled_i_derivs(l: int, N: int, z: float) -> tuple[float, float, float, float]:
    """(i_l, i_l', i_l'', i_l''') at z, all scaled by e^(-z)."""
    return tuple(ultraspherical_scaled(_I, l, N, d, z) for d in range(4))


def closed_form_eigenvalue(params: ProblemParams, l: int) -> float:
    """Steklov eigenvalue lambda_(l) of the unit ball for tau > 0.

    l = 0 and l = 1 return the analytically forced values 0 and tau; the
    formula there is a 0/0 cancellation and is exercised only as a test
    invariant.
    """
    if params.tau <= 0.0:
        raise InvalidArgument("closed_form_eigenvalue requires tau > 0; use tau0_eigenvalue")
    if l < 0:
        raise InvalidArgument(f"harmonic order l must be >= 0, got {l}")
    if l == 0:
        return 0.0
    if l == 1:
        return params.tau
    N, tau = params.N, params.tau
    z = math.sqrt(tau)
    i0, i1, i2, i3 = _scaled_i_derivs(l, N, z)
    den = (1 - l) * l * i0 + tau * i2
    if abs(den) <= 1e-12 * max(abs(tau * i2), abs(l * (l - 1) * i0)):
        raise DegenerateFormula(
            f"eigenvalue denominator numerically vanishes at l={l}, tau={tau}"
        )
    bracket = (
        3.0 * (l - 1) * l * (l + N - 2) * i0
        - (l - 1) * z * (N - 1 + 2 * N * l + 2 * l * (l - 2) + tau) * i1
        + tau * ((l - 1) * (l + 2 * N - 3) + tau) * i2
        + (l - 1) * tau * z * i3
    )
    return l * bracket / den


def tau0_eigenvalue(N: int, l: int) -> float:
    """Tension-free eigenvalue, evaluated in exact rational arithmetic."""
    if N < 2 or l < 0:
        raise InvalidArgument(f"require N >= 2 and l >= 0, got N={N}, l={l}")
    val = Fraction(l * (l - 1) * (N + 2 * N * l + (l - 1) * (2 + 3 * l)), 1 + 2 * l)
    return float(val)


def eigenvalue(params: ProblemParams, l: int) -> float:
    """lambda_(l) for either branch of tau."""
    if params.tau > 0.0:
        return closed_form_eigenvalue(params, l)
    return tau0_eigenvalue(params.N, l)


def mode_coefficient_ratio(params: ProblemParams, l: int) -> float:
    """B/A for the radial mode; 0 for l in {0, 1}."""
    if l in (0, 1):
        return 0.0
    if params.tau > 0.0:
        z = math.sqrt(params.tau)
        i2s = ultraspherical_scaled(_I, l, params.N, 2, z)
        # l(1-l) / (tau * e^z * i2s); e^z overflow legitimately drives the ratio to 0
        if z > 700.0:
            return 0.0
        return l * (1 - l) / (params.tau * math.exp(z) * i2s)
    return -l * (l - 1) / ((l + 2) * (l + 1))


def mode_profile(params: ProblemParams, l: int) -> ModeProfile:
    """Boundary-unit radial mode (R(1) = 1, positive at the boundary)."""
    if l < 0:
        raise InvalidArgument(f"harmonic order l must be >= 0, got {l}")
    ratio = mode_coefficient_ratio(params, l)
    if params.tau > 0.0:
        z = math.sqrt(params.tau)
        i0s = ultraspherical_scaled(_I, l, params.N, 0, z)
        i2s = ultraspherical_scaled(_I, l, params.N, 2, z)
        # ratio * i_l(z) computed scale-free: l(1-l) i0 / (tau i2)
        r1 = 1.0 + l * (1 - l) * i0s / (params.tau * i2s)
    else:
        r1 = 1.0 + ratio
    if r1 <= 0.0:
        raise DegenerateFormula(f"boundary trace non-positive at l={l}")
    return ModeProfile(l=l, A=1.0 / r1, B=ratio / r1)


def _monomial_deriv(m: int, r: float, d: int) -> float:
    if d > m:
        return 0.0
    c = 1.0
    for j in range(d):
        c *= m - j
    return c * r ** (m - d)


def _i_wrapper_deriv_at(l: int, N: int, z: float, d: int, z_ref: float) -> float:
    """i_l^(d)(z) * e^(-z_ref), stable for z in (0, z_ref]."""
    if z < 1e-6:
        return modified_wrapper_series(l, N, max(z, 0.0), d) * math.exp(-z_ref)
    return ultraspherical_scaled(_I, l, N, d, z) * math.exp(z - z_ref)


def radial_profile(params: ProblemParams, l: int, r: float, d: int = 0) -> float:
    """d-th derivative of the boundary-unit radial mode at r in [0, 1]."""
    if not 0.0 <= r <= 1.0:
        raise InvalidArgument(f"radius must lie in [0, 1], got {r}")
    if d not in (0, 1, 2, 3):
        raise InvalidArgument(f"derivative order must be in 0..3, got {d}")
    if params.tau > 0.0:
        z = math.sqrt(params.tau)
        i0s = ultraspherical_scaled(_I, l, params.N, 0, z)
        i2s = ultraspherical_scaled(_I, l, params.N, 2, z)
        r1 = 1.0 + l * (1 - l) * i0s / (params.tau * i2s)
        a_part = _monomial_deriv(l, r, d) / r1
        if l in (0, 1):
            return a_part
        # B i_l^(d)(z r) z^d, with B = l(1-l)/(tau i_l''(z)); assembled scale-free
        b_part = (
            l
            * (1 - l)
            / (params.tau * i2s)
            * z ** d
            * _i_wrapper_deriv_at(l, params.N, z * r, d, z)
            / r1
        )
        return a_part + b_part
    profile = mode_profile(params, l)
    return profile.A * _monomial_deriv(l, r, d) + profile.B * _monomial_deriv(l + 2, r, d)


def enumerate_spectrum(params: ProblemParams, count: int) -> list[SpectrumEntry]:
    """First eigenvalues (with multiplicity) in nondecreasing order.

    Entries are per harmonic order; the cumulative multiplicity of the
    returned entries is the smallest total >= count.  Monotonicity of
    lambda_(l) for l >= 2 bounds the enumeration.
    """
    if count < 1:
        raise InvalidArgument(f"count must be >= 1, got {count}")
    entries = []
    total = 0
    l = 0
    while total < count:
        lam = eigenvalue(params, l)
        m = multiplicity(l, params.N)
        entries.append(SpectrumEntry(l=l, lam=lam, m=m, profile=mode_profile(params, l)))
        total += m
        l += 1
    entries.sort(key=lambda e: (e.lam, e.l))
    return entries


def flat_spectrum(params: ProblemParams, count: int) -> list[float]:
    """Eigenvalues repeated by multiplicity: lambda_1 <= lambda_2 <= ..."""
    out: list[float] = []
    for e in enumerate_spectrum(params, count):
        out.extend([e.lam] * e.m)
    return out[:count]


def scaled_ball_eigenvalue(params: ProblemParams, l: int, radius: float) -> float:
    """lambda_(l) of the ball of given radius: lambda(tau, aB) = a^-3 lambda(a^2 tau, B)."""
    if radius <= 0.0:
        raise InvalidArgument(f"radius must be > 0, got {radius}")
    base = ProblemParams(params.N, params.tau * radius ** 2)
    return eigenvalue(base, l) / radius ** 3


def reciprocal_sum_rule(params: ProblemParams) -> float:
    """sum_{j=2}^{N+1} 1/lambda_j(B); equals N/tau for tau > 0."""
    lams = flat_spectrum(params, params.N + 1)
    return sum(1.0 / x for x in lams[1 : params.N + 1])
