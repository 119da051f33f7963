"""Time-dependent decay rates for structured reservoirs.

The central object is the rate

    gamma(omega, t) = 2 * int dw' J(w') * sin((w' - omega) t) / (w' - omega),

the integral running over the whole real line.  It vanishes at t = 0,
oscillates over the reservoir memory time and settles to the stationary
value 2*pi*J(omega).  For Lorentzian and gap spectra the integral has a
closed form (residue evaluation, pole at w' = omega circumvented from
below); `gamma_numeric` computes the same quantity by direct quadrature of
the bounded sinc-kernel integrand and serves as the independent
cross-check.  The companion integral with kernel (1 - cos)/(w' - omega) is
the time-dependent energy shift (`lamb_shift_numeric`); it is a diagnostic
only and never enters the dynamics.

Transiently negative rates are a real feature of the model at large
detuning and are never clamped.
"""

import math
import warnings
from dataclasses import dataclass

from scipy.integrate import quad

from .spectral import (FlatSpec, GapSpec, LorentzianSpec, components,
                       evaluate, peak_weight)

TWO_PI = 2.0 * math.pi

#: default relative tolerance for the quadrature routines
DEFAULT_TOL = 1e-9

_MAX_SUBDIVISIONS = 10_000


class QuadratureNonConvergence(RuntimeError):
    """Adaptive quadrature could not reach the requested tolerance."""


class NegativeRateIntegralWarning(UserWarning):
    """I(t) < 0 was detected; the exponential solution stays well defined
    but the parameters are outside the usual validated regime."""


@dataclass(frozen=True)
class RateQuery:
    """One (spectrum, Bohr frequency, time) evaluation point."""

    spec: object
    bohr_omega: float
    time: float

    def __post_init__(self):
        if self.time < 0:
            raise ValueError(f"time must be >= 0, got {self.time}")

    def gamma(self):
        return gamma_closed(self.spec, self.bohr_omega, self.time)

    def gamma_numeric(self, tol=DEFAULT_TOL):
        return gamma_numeric(self.spec, self.bohr_omega, self.time, tol)


@dataclass(frozen=True)
class RatePair:
    """Rates and running rate integrals at the two dressed Bohr frequencies
    omega0 -/+ Omega.  All four fields vanish at t = 0."""

    gamma_minus: float
    gamma_plus: float
    i_minus: float
    i_plus: float


# ----------------------------------------------------------------------
# closed forms


def _gamma_term(alpha, lam, center, omega, t):
    # alpha*lam^2/(d^2+lam^2) * {1 + [(d/lam) sin(dt) - cos(dt)] e^{-lam t}},
    # d = center - omega.  Exact residue result for one Lorentzian peak.
    d = center - omega
    pref = alpha * lam * lam / (d * d + lam * lam)
    osc = (d / lam) * math.sin(d * t) - math.cos(d * t)
    return pref * (1.0 + osc * math.exp(-lam * t))


def gamma_closed_lorentzian(spec, omega, t):
    """Closed-form gamma(omega, t) for a single Lorentzian peak."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return _gamma_term(spec.coupling_alpha, spec.width_lambda,
                       spec.center_omega1, omega, t)


def gamma_closed_gap(spec, omega, t):
    """Closed-form gamma(omega, t) for the gap spectrum: the difference of
    two single-peak terms, the subtracted peak entering with opposite sign."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return (_gamma_term(spec.alpha1, spec.lambda1, spec.omega1, omega, t)
            - _gamma_term(spec.alpha2, spec.lambda2, spec.omega2, omega, t))


def gamma_closed_flat(spec, omega, t):
    """Flat spectrum: gamma jumps from 0 to its stationary value 2*pi*J0
    immediately (zero memory time)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return TWO_PI * spec.level if t > 0 else 0.0


def gamma_closed(spec, omega, t):
    """Dispatch to the closed form for the given spectrum kind."""
    if isinstance(spec, FlatSpec):
        return gamma_closed_flat(spec, omega, t)
    if isinstance(spec, LorentzianSpec):
        return gamma_closed_lorentzian(spec, omega, t)
    if isinstance(spec, GapSpec):
        return gamma_closed_gap(spec, omega, t)
    raise TypeError(f"not a spectral density: {spec!r}")


def stationary_rate(spec, omega):
    """Long-time limit of the decay rate, 2*pi*J(omega)."""
    return TWO_PI * float(evaluate(spec, omega))


# ----------------------------------------------------------------------
# numeric oracle


def _quad_checked(f, a, b, epsabs, epsrel, what, **kw):
    out = quad(f, a, b, epsabs=epsabs, epsrel=epsrel,
               limit=_MAX_SUBDIVISIONS, full_output=1, **kw)
    value, abserr = out[0], out[1]
    if not math.isfinite(value):
        raise QuadratureNonConvergence(f"{what}: non-finite result")
    if len(out) > 3 and abserr > 10.0 * max(epsabs, abs(value) * epsrel):
        raise QuadratureNonConvergence(f"{what}: {out[3].strip()}")
    return value


def _qawo_panels(f, a, b, t, epsabs, epsrel, kind, what):
    # QAWO (Clenshaw-Curtis with oscillatory weight) degrades on intervals
    # spanning many decades; splitting into geometric panels keeps it exact.
    total = 0.0
    lo = a
    while lo < b:
        hi = min(10.0 * lo, b)
        total += _quad_checked(f, lo, hi, epsabs, epsrel, what,
                               weight=kind, wvar=t, maxp1=100)
        lo = hi
    return total


def _truncation_cutoff(spec, omega, t, budget):
    # Cutoff U such that |2 * int_{|u|>U} J(omega+u) sin(ut)/u du| < budget.
    # Lorentzian tails decay like alpha*lam^2/(2 pi u^2), so each component
    # contributes at most 4*alpha*lam^2/(pi U^2) once U clears the peak.
    U = 0.0
    comps = components(spec)
    for alpha, lam, center, _ in comps:
        uc = abs(center - omega)
        U = max(U, 2.0 * (uc + lam),
                uc + lam + math.sqrt(4.0 * abs(alpha) * lam * lam
                                     / (math.pi * budget)))
    if isinstance(spec, FlatSpec):
        # tail of the pure sine integral: |2 J0 int_{|u|>U} sin(ut)/u du|
        # <= 8 J0 / (U t)
        U = max(10.0, 8.0 * spec.level / (t * budget))
    return U


def gamma_numeric(spec, omega, t, tol=DEFAULT_TOL):
    """Decay rate by adaptive quadrature of 2*J(omega+u)*sin(ut)/u over the
    real line, independent of the residue-based closed forms.

    The integrand is bounded (value 2*t*J(omega) at u = 0).  The inner
    half-oscillation |u| <= pi/t is integrated directly; the oscillatory
    remainder uses Gauss-Kronrod/Clenshaw-Curtis quadrature with an
    explicit sin weight, truncated at a cutoff chosen from the analytic
    tail bound.  `tol` is relative to the peak stationary rate
    2*pi*max(J).
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if t == 0.0:
        return 0.0  # integrand identically zero
    scale = TWO_PI * peak_weight(spec)
    if scale == 0.0:
        return 0.0
    eps = tol * scale
    budget = 0.2 * eps
    U = _truncation_cutoff(spec, omega, t, budget)

    def bounded_integrand(u):
        x = u * t
        kernel = t * (1.0 - x * x / 6.0) if abs(x) < 1e-8 else math.sin(x) / u
        return float(evaluate(spec, omega + u)) * kernel

    features = sorted({c - omega for _, _, c, _ in components(spec)} | {0.0})
    a = math.pi / t
    if a >= U:
        pts = [p for p in features if -U < p < U]
        inner = _quad_checked(bounded_integrand, -U, U, budget, tol,
                              "gamma_numeric", points=pts or None)
        return 2.0 * inner
    pts = [p for p in features if -a < p < a]
    inner = _quad_checked(bounded_integrand, -a, a, budget, tol,
                          "gamma_numeric", points=pts or None)
    upper = _qawo_panels(lambda v: float(evaluate(spec, omega + v)) / v,
                         a, U, t, budget, tol, 'sin', "gamma_numeric")
    lower = _qawo_panels(lambda v: float(evaluate(spec, omega - v)) / v,
                         a, U, t, budget, tol, 'sin', "gamma_numeric")
    return 2.0 * (inner + upper + lower)


def lamb_shift_numeric(spec, omega, t, tol=DEFAULT_TOL):
    """Time-dependent energy shift int dw' J(w') (1 - cos((w'-omega)t))/(w'-omega).

    Principal-value sense; folding the domain about w' = omega gives the
    absolutely convergent form int_0^inf [J(omega+u) - J(omega-u)]
    * (1 - cos(ut))/u du, bounded everywhere.  Diagnostic only: the shift
    is computed so its neglect in the dynamics can be quantified, but it is
    never applied.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if t == 0.0:
        return 0.0
    scale = TWO_PI * peak_weight(spec)
    if scale == 0.0:
        return 0.0
    if isinstance(spec, FlatSpec):
        return 0.0  # odd integrand about omega for constant J
    eps = tol * scale
    widths = [lam for _, lam, _, _ in components(spec)]
    u_floor = 1e-7 * min(widths)
    U = _truncation_cutoff(spec, omega, t, 0.2 * eps)

    def antisym_over_u(u):
        # [J(omega+u) - J(omega-u)]/u, clamped below u_floor where direct
        # evaluation would lose all digits to cancellation
        if u < u_floor:
            u = u_floor
        return float(evaluate(spec, omega + u) - evaluate(spec, omega - u)) / u

    # feature breakpoints: adaptive subdivision alone can miss a Lorentzian
    # needle sitting in a tiny fraction of the truncated interval
    feats = sorted({f for _, lam, c, _ in components(spec)
                    for f in (abs(c - omega), abs(c - omega) + lam, lam)})
    smooth = _quad_checked(antisym_over_u, 0.0, U, 0.2 * eps, tol,
                           "lamb_shift_numeric",
                           points=[f for f in feats if 0.0 < f < U] or None)
    a = min(math.pi / t, U)
    osc = -_quad_checked(lambda u: antisym_over_u(u) * math.cos(u * t),
                         0.0, a, 0.2 * eps, tol, "lamb_shift_numeric",
                         points=[f for f in feats if 0.0 < f < a] or None)
    if a < U:
        osc -= _qawo_panels(antisym_over_u, a, U, t, 0.2 * eps, tol,
                            'cos', "lamb_shift_numeric")
    return smooth + osc


# ----------------------------------------------------------------------
# rate integrals


def _resonant_lorentzian_integral(alpha, lam, t):
    # int_0^t alpha (1 - e^{-lam s}) ds, written with expm1 for small lam*t
    return alpha * (t + math.expm1(-lam * t) / lam)


def rate_integral_segment(spec, omega, t0, t1, tol=DEFAULT_TOL):
    """int_{t0}^{t1} gamma(omega, s) ds of the closed-form rate."""
    if t1 < t0:
        raise ValueError(f"need t1 >= t0, got [{t0}, {t1}]")
    if t1 == t0:
        return 0.0
    if isinstance(spec, FlatSpec):
        return TWO_PI * spec.level * (t1 - t0)
    if isinstance(spec, LorentzianSpec) and omega == spec.center_omega1:
        return (_resonant_lorentzian_integral(spec.coupling_alpha,
                                              spec.width_lambda, t1)
                - _resonant_lorentzian_integral(spec.coupling_alpha,
                                                spec.width_lambda, t0))
    scale = TWO_PI * peak_weight(spec)
    # absolute budget proportional to the segment length so that grid
    # accumulation over many short segments does not pile up slack
    eps = tol * scale * min(t1 - t0, 1.0)
    # memory-time breakpoints: a fast e^{-lam t} transient is a needle on a
    # long integration window and initial sampling would step over it
    marks = sorted({m / lam for _, lam, _, _ in components(spec)
                    for m in (1.0, 10.0)})
    pts = [m for m in marks if t0 < m < t1]
    return _quad_checked(lambda s: gamma_closed(spec, omega, s), t0, t1,
                         eps, tol, "rate_integral", points=pts or None)


def rate_integral(spec, omega, t, tol=DEFAULT_TOL):
    """Running rate integral I(t) = int_0^t gamma(omega, s) ds.

    Resonant single-Lorentzian and flat spectra use the analytic
    antiderivative; everything else is adaptive quadrature of the
    closed-form integrand.  Emits NegativeRateIntegralWarning if the result
    is negative, which can happen for detunings far outside the validated
    regime.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    value = rate_integral_segment(spec, omega, 0.0, t, tol)
    if value < -tol * max(1.0, TWO_PI * peak_weight(spec) * t):
        warnings.warn(f"I({t:g}) = {value:g} < 0 at omega={omega:g}",
                      NegativeRateIntegralWarning)
    return value


def rate_pair(spec, omega0, Omega, t, tol=DEFAULT_TOL):
    """Rates and running integrals at both dressed Bohr frequencies.

    gamma_minus/i_minus belong to omega0 - Omega, gamma_plus/i_plus to
    omega0 + Omega.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    wm, wp = omega0 - Omega, omega0 + Omega
    return RatePair(
        gamma_minus=gamma_closed(spec, wm, t),
        gamma_plus=gamma_closed(spec, wp, t),
        i_minus=rate_integral(spec, wm, t, tol),
        i_plus=rate_integral(spec, wp, t, tol),
    )
