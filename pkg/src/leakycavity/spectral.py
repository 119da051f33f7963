"""Reservoir spectral-density models.

All frequencies are dimensionless, measured in units of the dressed-state
splitting 2*Omega; times elsewhere in the package are in units of
(2*Omega)^-1.  A spectral density J(omega) is one of three kinds: a flat
(white) spectrum, a single Lorentzian peak, or a Lorentzian background with
a subtracted Lorentzian gap.  The support is the whole real line.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

TWO_PI = 2.0 * np.pi


class ValidationError(ValueError):
    """A spectral-density parameter set violates its invariants."""


class NonPositiveWidth(ValidationError):
    pass


class NegativeCoupling(ValidationError):
    pass


class NegativeSpectralDensity(ValidationError):
    """J(omega) < 0 somewhere on the validation grid."""

    def __init__(self, message, omega):
        super().__init__(message)
        self.omega = omega


@dataclass(frozen=True)
class FlatSpec:
    """Constant spectrum J(omega) = level; the memoryless reference reservoir."""

    level: float


@dataclass(frozen=True)
class LorentzianSpec:
    """Single Lorentzian peak.

    J(omega) = (1/2pi) * coupling_alpha * width_lambda^2
               / ((center_omega1 - omega)^2 + width_lambda^2)

    The peak value is coupling_alpha / 2pi and 1/width_lambda is the
    reservoir memory time.
    """

    coupling_alpha: float
    width_lambda: float
    center_omega1: float


@dataclass(frozen=True)
class GapSpec:
    """Lorentzian background (alpha1, lambda1, omega1) minus a narrower,
    weaker Lorentzian (alpha2, lambda2, omega2) carving a gap at omega2."""

    alpha1: float
    lambda1: float
    omega1: float
    alpha2: float
    lambda2: float
    omega2: float


SpectralDensity = Union[FlatSpec, LorentzianSpec, GapSpec]


def _lorentz(alpha, lam, center, omega):
    return alpha * lam * lam / (TWO_PI * ((center - omega) ** 2 + lam * lam))


def evaluate(spec, omega):
    """Evaluate J(omega).  Accepts scalar or ndarray omega."""
    if isinstance(spec, FlatSpec):
        # [()] collapses the 0-d case back to a scalar
        return (spec.level * np.ones_like(np.asarray(omega, dtype=float)))[()]
    if isinstance(spec, LorentzianSpec):
        return _lorentz(spec.coupling_alpha, spec.width_lambda,
                        spec.center_omega1, omega)
    if isinstance(spec, GapSpec):
        return (_lorentz(spec.alpha1, spec.lambda1, spec.omega1, omega)
                - _lorentz(spec.alpha2, spec.lambda2, spec.omega2, omega))
    raise TypeError(f"not a spectral density: {spec!r}")


def components(spec):
    """Lorentzian components as (coupling, width, center, sign) tuples.

    FlatSpec has no finite-width component and returns ().  Used by the
    quadrature routines to place breakpoints and truncation cutoffs.
    """
    if isinstance(spec, FlatSpec):
        return ()
    if isinstance(spec, LorentzianSpec):
        return ((spec.coupling_alpha, spec.width_lambda, spec.center_omega1, +1.0),)
    if isinstance(spec, GapSpec):
        return ((spec.alpha1, spec.lambda1, spec.omega1, +1.0),
                (spec.alpha2, spec.lambda2, spec.omega2, -1.0))
    raise TypeError(f"not a spectral density: {spec!r}")


def peak_weight(spec):
    """Upper bound on max |J(omega)|, used as the scale for tolerances."""
    if isinstance(spec, FlatSpec):
        return spec.level
    return sum(abs(a) for a, _, _, _ in components(spec)) / TWO_PI


# Gap positivity is checked by sampling, not analytically: a 10^4-point scan
# over [min center - 10*lambda1, max center + 10*lambda1] catches every
# physically relevant violation at these parameter scales.
_SCAN_POINTS = 10_000


def validate(spec):
    """Enforce the invariants of a spectral density; returns the spec.

    Raises NonPositiveWidth, NegativeCoupling or NegativeSpectralDensity
    (the latter carries the offending omega).
    """
    if isinstance(spec, FlatSpec):
        if spec.level < 0:
            raise NegativeCoupling(f"level must be >= 0, got {spec.level}")
        return spec
    if isinstance(spec, LorentzianSpec):
        if spec.width_lambda <= 0:
            raise NonPositiveWidth(
                f"width_lambda must be > 0, got {spec.width_lambda}")
        if spec.coupling_alpha < 0:
            raise NegativeCoupling(
                f"coupling_alpha must be >= 0, got {spec.coupling_alpha}")
        return spec
    if isinstance(spec, GapSpec):
        if spec.lambda2 <= 0 or spec.lambda1 <= spec.lambda2:
            raise NonPositiveWidth(
                "gap spectrum requires lambda1 > lambda2 > 0, got "
                f"lambda1={spec.lambda1}, lambda2={spec.lambda2}")
        if spec.alpha2 < 0:
            raise NegativeCoupling(
                f"alpha2 must be >= 0, got {spec.alpha2}")
        # scan before the coupling-ordering check so that a spectrum dipping
        # below zero is reported with the offending frequency
        lo = min(spec.omega1, spec.omega2) - 10.0 * spec.lambda1
        hi = max(spec.omega1, spec.omega2) + 10.0 * spec.lambda1
        grid = np.linspace(lo, hi, _SCAN_POINTS)
        vals = evaluate(spec, grid)
        bad = np.argmin(vals)
        if vals[bad] < 0.0:
            raise NegativeSpectralDensity(
                f"J({grid[bad]:g}) = {vals[bad]:g} < 0", omega=float(grid[bad]))
        if spec.alpha1 <= spec.alpha2:
            raise NegativeCoupling(
                "gap spectrum requires alpha1 > alpha2 >= 0, got "
                f"alpha1={spec.alpha1}, alpha2={spec.alpha2}")
        return spec
    raise TypeError(f"not a spectral density: {spec!r}")
