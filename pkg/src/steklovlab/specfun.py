"""Bessel functions of real order and their ultraspherical wrappers.

The radial parts of ball eigenfunctions are built from

    i_l(z) = z^(1-N/2) I_(N/2-1+l)(z),      k_l(z) = z^(1-N/2) K_(N/2-1+l)(z),

and the ordinary analogues j_l, y_l wrapping J and Y.  Derivatives up to
third order are obtained analytically from the one-step shift identity

    f_l'(z) = (l/z) f_l(z) + sigma f_{l+1}(z),

with sigma = +1 for the I-wrapper and sigma = -1 for K, J, Y.  No numerical
differencing is used anywhere.

Raw Bessel values come from scipy.special (iv/kv/jv/yv and the
exponentially scaled ive/kve); this module owns the wrapper algebra,
scaling policy and error signalling.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

from scipy import special as _sp

from .errors import InvalidArgument, OverflowSignal, PoleSignal


class BesselKind(enum.Enum):
    MODIFIED_FIRST = "I"
    MODIFIED_SECOND = "K"
    ORDINARY_FIRST = "J"
    ORDINARY_SECOND = "Y"


# sign of the f_{l+1} term in the derivative shift identity
_SHIFT_SIGN = {
    BesselKind.MODIFIED_FIRST: 1.0,
    BesselKind.MODIFIED_SECOND: -1.0,
    BesselKind.ORDINARY_FIRST: -1.0,
    BesselKind.ORDINARY_SECOND: -1.0,
}


def bessel_eval(kind: BesselKind, order: float, z: float, scaled: bool = False) -> float:
    """Evaluate a Bessel function of real order at z > 0.

    With ``scaled=True`` the modified kinds return the exponentially scaled
    forms e^(-z) I_nu and e^(+z) K_nu; J and Y are returned as-is.  Unscaled
    overflow of I raises :class:`OverflowSignal` instead of returning inf.
    """
    if not (math.isfinite(order) and math.isfinite(z)):
        raise InvalidArgument("bessel_eval requires finite order and argument")
    if z <= 0.0:
        raise InvalidArgument(f"bessel_eval requires z > 0, got z={z}")
    if order < 0.0:
        raise InvalidArgument(f"bessel_eval requires order >= 0, got {order}")

    if kind is BesselKind.MODIFIED_FIRST:
        val = _sp.ive(order, z) if scaled else _sp.iv(order, z)
    elif kind is BesselKind.MODIFIED_SECOND:
        val = _sp.kve(order, z) if scaled else _sp.kv(order, z)
    elif kind is BesselKind.ORDINARY_FIRST:
        val = _sp.jv(order, z)
    elif kind is BesselKind.ORDINARY_SECOND:
        val = _sp.yv(order, z)
    else:  # pragma: no cover
        raise InvalidArgument(f"unknown kind {kind!r}")

    val = float(val)
    if math.isinf(val):
        if kind is BesselKind.MODIFIED_FIRST and not scaled:
            raise OverflowSignal(
                f"I_{order}({z}) overflows; request the scaled form"
            )
        raise OverflowSignal(f"{kind.value}_{order}({z}) is not representable")
    if math.isnan(val):
        raise InvalidArgument(f"{kind.value}_{order}({z}) evaluated to NaN")
    return val


@dataclass(frozen=True)
class UltrasphericalSpec:
    """Request for the d-th derivative of a wrapped Bessel function."""

    kind: BesselKind
    l: int
    N: int
    derivative_order: int = 0

    def __post_init__(self):
        if self.l < 0:
            raise InvalidArgument(f"harmonic order l must be >= 0, got {self.l}")
        if self.N < 2:
            raise InvalidArgument(f"dimension N must be >= 2, got {self.N}")
        if self.derivative_order not in (0, 1, 2, 3):
            raise InvalidArgument(
                f"derivative_order must be in 0..3, got {self.derivative_order}"
            )

    @property
    def order(self) -> float:
        return self.N / 2.0 - 1.0 + self.l


@lru_cache(maxsize=None)
def _deriv_coeffs(l: int, d: int) -> tuple[tuple[int, tuple[tuple[int, float], ...]], ...]:
    """Expansion of f_l^(d)(z) over shifted wrappers.

    Returns tuples (m, ((p, c), ...)) meaning a term  c * sigma^m * z^(-p)
    * f_{l+m}(z), derived by repeated application of the shift identity.
    """
    terms: dict[int, dict[int, float]] = {0: {0: 1.0}}
    for _ in range(d):
        new: dict[int, dict[int, float]] = {}
        for m, poly in terms.items():
            for p, c in poly.items():
                # d/dz [c z^-p f_{l+m}] = c(l+m-p) z^-(p+1) f_{l+m} + c sigma z^-p f_{l+m+1}
                new.setdefault(m, {})
                new[m][p + 1] = new[m].get(p + 1, 0.0) + c * (l + m - p)
                new.setdefault(m + 1, {})
                new[m + 1][p] = new[m + 1].get(p, 0.0) + c
        terms = new
    return tuple(
        (m, tuple(sorted(poly.items()))) for m, poly in sorted(terms.items())
    )


def _wrapper_value(kind: BesselKind, l: int, N: int, z: float, scaled: bool) -> float:
    nu = N / 2.0 - 1.0 + l
    return z ** (1.0 - N / 2.0) * bessel_eval(kind, nu, z, scaled=scaled)


def _eval_deriv(kind: BesselKind, l: int, N: int, d: int, z: float, scaled: bool) -> float:
    sigma = _SHIFT_SIGN[kind]
    total = 0.0
    for m, poly in _deriv_coeffs(l, d):
        base = _wrapper_value(kind, l + m, N, z, scaled)
        coeff = 0.0
        for p, c in poly:
            coeff += c * z ** (-p)
        total += (sigma ** m) * coeff * base
    return total


def ultraspherical_eval(spec: UltrasphericalSpec, z: float) -> float:
    """d-th derivative of the wrapped function (i_l, k_l, j_l or y_l) at z > 0.

    Derivatives follow from analytic differentiation of the z^(1-N/2) product,
    never from numerical differencing.  K/Y requests that are numerically at
    the z -> 0 pole raise :class:`PoleSignal`.
    """
    if not math.isfinite(z) or z <= 0.0:
        raise InvalidArgument(f"ultraspherical_eval requires finite z > 0, got {z}")
    try:
        return _eval_deriv(spec.kind, spec.l, spec.N, spec.derivative_order, z, scaled=False)
    except OverflowSignal:
        if spec.kind in (BesselKind.MODIFIED_SECOND, BesselKind.ORDINARY_SECOND):
            raise PoleSignal(
                f"{spec.kind.value}-wrapper of order l={spec.l} diverges as z -> 0 (z={z})"
            ) from None
        raise


def ultraspherical_scaled(kind: BesselKind, l: int, N: int, d: int, z: float) -> float:
    """Exponentially scaled derivative value: e^(-z) i_l^(d) or e^(+z) k_l^(d).

    For J/Y the unscaled value is returned.  This is the overflow-safe entry
    point used by determinant assembly and by the closed-form eigenvalue
    (which is a ratio, hence scale-invariant).
    """
    if not math.isfinite(z) or z <= 0.0:
        raise InvalidArgument(f"ultraspherical_scaled requires finite z > 0, got {z}")
    return _eval_deriv(kind, l, N, d, z, scaled=True)


def log_scale_factor(kind: BesselKind, z: float) -> float:
    """log of the factor restoring unscaled from scaled: unscaled = e^(lsf) * scaled."""
    if kind is BesselKind.MODIFIED_FIRST:
        return z
    if kind is BesselKind.MODIFIED_SECOND:
        return -z
    return 0.0


def modified_wrapper_series(l: int, N: int, z: float, d: int = 0, terms: int = 12) -> float:
    """Power series for i_l^(d)(z), accurate for small z (z <= ~1).

    i_l(z) = sum_m  2^(1-N/2-l-2m) / (m! Gamma(N/2+l+m)) z^(l+2m); the series
    is differentiated term-wise.  Used near r = 0 where the z^(1-N/2) product
    form degenerates, and as an independent oracle in tests.
    """
    total = 0.0
    for m in range(terms):
        e = l + 2 * m
        c = math.exp(
            (1.0 - N / 2.0 - l - 2 * m) * math.log(2.0)
            - math.lgamma(m + 1)
            - math.lgamma(N / 2.0 + l + m)
        )
        if e < d:
            continue
        fac = 1.0
        for j in range(d):
            fac *= e - j
        total += c * fac * z ** (e - d)
    return total
