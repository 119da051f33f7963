"""One-excitation dynamics of the resonant atom-cavity system.

Everything lives in the dressed basis (|E0>, |E1,->, |E1,+>), where |E0> =
|0,g> and |E1,+/-> = (|1,g> +/- |0,e>)/sqrt(2) with energies omega0/2 -/+
Omega shifted about the ground state at -omega0/2.  With the cavity
coupled to a zero-temperature reservoir the populations decay via the
running rate integrals I_-/I_+ and the master equation is solved in closed
form:

    p_-/+ (t) = p_-/+ (0) * exp(-I_-/+ (t)/2)
    coh(t)    = coh(0) * exp(-(I_- + I_+)/4) * exp(+2i Omega t)
    p_0(t)    = 1 - p_-(t) - p_+(t)

where coh = <E1,-| rho |E1,+>, so the atom-excited initial state |0,e> has
p_-/+ = 1/2 and coh = -1/2.  The absolute value of omega0 never enters any
observable here (there are no coherences to the ground state); it is kept
only as a labeling anchor for the Bohr frequencies omega0 -/+ Omega.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import rates

TRACE_TOL = 1e-12


class InvalidInitialState(ValueError):
    """A dressed density violates positivity, normalization or Hermiticity."""


@dataclass(frozen=True)
class SystemParams:
    """Reservoir spectrum plus the dressed-frequency anchors.

    Omega is half the dressed splitting (so 2*Omega = 1 in the package's
    dimensionless units); omega0 is the bare transition frequency, kept for
    labeling only.
    """

    spec: object
    Omega: float = 0.5
    omega0: float = 0.0

    def __post_init__(self):
        if self.Omega <= 0:
            raise ValueError(f"Omega must be > 0, got {self.Omega}")

    @property
    def omega_minus(self):
        return self.omega0 - self.Omega

    @property
    def omega_plus(self):
        return self.omega0 + self.Omega


@dataclass(frozen=True)
class DressedDensity:
    """Dressed-basis state: populations p0, p_minus, p_plus and the single
    excited-sector coherence coh = <E1,-| rho |E1,+>."""

    p0: float
    p_minus: float
    p_plus: float
    coh: complex

    def check(self):
        tr = self.p0 + self.p_minus + self.p_plus
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidInitialState(f"populations sum to {tr!r}, not 1")
        for name, p in (("p0", self.p0), ("p_minus", self.p_minus),
                        ("p_plus", self.p_plus)):
            if not -TRACE_TOL <= p <= 1.0 + TRACE_TOL:
                raise InvalidInitialState(f"{name} = {p!r} outside [0, 1]")
        if abs(self.coh) ** 2 > self.p_minus * self.p_plus + TRACE_TOL:
            raise InvalidInitialState(
                f"|coh|^2 = {abs(self.coh)**2!r} exceeds p_minus*p_plus "
                f"= {self.p_minus * self.p_plus!r}")
        return self

    def as_matrix(self):
        """Full 3x3 density matrix over (|E0>, |E1,->, |E1,+>)."""
        rho = np.zeros((3, 3), dtype=complex)
        rho[0, 0] = self.p0
        rho[1, 1] = self.p_minus
        rho[2, 2] = self.p_plus
        rho[1, 2] = self.coh
        rho[2, 1] = np.conj(self.coh)
        return rho

    @staticmethod
    def from_matrix(rho):
        return DressedDensity(p0=float(rho[0, 0].real),
                              p_minus=float(rho[1, 1].real),
                              p_plus=float(rho[2, 2].real),
                              coh=complex(rho[1, 2]))


#: the atom-excited, cavity-empty initial state |0,e><0,e| in dressed form
ATOM_EXCITED = DressedDensity(p0=0.0, p_minus=0.5, p_plus=0.5, coh=-0.5 + 0.0j)


@dataclass(frozen=True)
class Observables:
    """Bare-basis populations; P_atom_excited equals P_0e in the
    one-excitation sector."""

    P_0g: float
    P_1g: float
    P_0e: float
    P_atom_excited: float


def observables(state):
    """Map a dressed state to bare-basis populations.

    Inverting the dressed transform, |0,e> = (|E1,+> - |E1,->)/sqrt(2), so
    the coherence interferes with opposite sign in P_0e and P_1g.
    """
    half = 0.5 * (state.p_minus + state.p_plus)
    re = state.coh.real
    return Observables(P_0g=state.p0, P_1g=half + re, P_0e=half - re,
                       P_atom_excited=half - re)


def state_from_integrals(init, i_minus, i_plus, Omega, t):
    """State at time t given the two accumulated rate integrals."""
    pm = init.p_minus * math.exp(-0.5 * i_minus)
    pp = init.p_plus * math.exp(-0.5 * i_plus)
    coh = init.coh * math.exp(-0.25 * (i_minus + i_plus)) \
        * cmath.exp(2j * Omega * t)
    return DressedDensity(p0=1.0 - pm - pp, p_minus=pm, p_plus=pp, coh=coh)


def analytic_state(params, t, tol=rates.DEFAULT_TOL):
    """Closed-form state at time t for the atom-excited initial condition."""
    return analytic_state_general(params, ATOM_EXCITED, t, tol)


def analytic_state_general(params, init, t, tol=rates.DEFAULT_TOL):
    """Closed-form state at time t for an arbitrary valid initial state.

    Each channel evolves independently: the populations decay with their
    own rate integral, the coherence with the mean, picking up the 2*Omega
    phase.  Cross-checked against the numerical propagator in the tests.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    init.check()
    im = rates.rate_integral(params.spec, params.omega_minus, t, tol)
    ip = rates.rate_integral(params.spec, params.omega_plus, t, tol)
    return state_from_integrals(init, im, ip, params.Omega, t)


def rate_integral_grid(params, times, tol=rates.DEFAULT_TOL, chunks=1):
    """Cumulative I_-(t), I_+(t) over an increasing time grid.

    Accumulates segment integrals, O(n) in grid size, instead of
    re-integrating from zero at every point.  With chunks > 1 the grid is
    split and every chunk re-anchors its running sums with a fresh integral
    from 0, which keeps the result independent of the chunking.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-d array")
    if times[0] < 0 or np.any(np.diff(times) < 0):
        raise ValueError("times must be non-decreasing and start at >= 0")
    im = np.empty_like(times)
    ip = np.empty_like(times)
    spec = params.spec
    bounds = np.array_split(np.arange(times.size), max(1, chunks))
    for idx in bounds:
        if idx.size == 0:
            continue
        k0 = idx[0]
        im[k0] = rates.rate_integral(spec, params.omega_minus, times[k0], tol)
        ip[k0] = rates.rate_integral(spec, params.omega_plus, times[k0], tol)
        for k in idx[1:]:
            im[k] = im[k - 1] + rates.rate_integral_segment(
                spec, params.omega_minus, times[k - 1], times[k], tol)
            ip[k] = ip[k - 1] + rates.rate_integral_segment(
                spec, params.omega_plus, times[k - 1], times[k], tol)
    return im, ip


def evolve_grid(params, times, tol=rates.DEFAULT_TOL, init=None, chunks=1):
    """States along a time grid; returns (i_minus, i_plus, states)."""
    if init is None:
        init = ATOM_EXCITED
    init.check()
    im, ip = rate_integral_grid(params, times, tol, chunks)
    states = [state_from_integrals(init, im[k], ip[k], params.Omega, t)
              for k, t in enumerate(np.asarray(times, dtype=float))]
    return im, ip, states
