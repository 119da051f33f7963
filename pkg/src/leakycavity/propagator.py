"""Direct integration of the master equation in the dressed basis.

This is the numerical cross-check for the closed-form solution in
`dynamics`: the same generator, integrated blindly as a 3x3 matrix ODE
with classical fixed-step RK4.

The dissipator coefficients follow the time-local master equation exactly
as it defines this model: the sandwich term |E0><E1,s| rho |E1,s><E0|
carries 1/2 and the anticommutator {|E1,s><E1,s|, rho} carries 1/4, so a
population decays at gamma/2 -- deliberately half the textbook Lindblad
normalization, consistent with the exp(-I/2) populations of the analytic
solution.  Probability leaves each excited dressed state for the ground
state at that rate and the generator is exactly traceless.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import rates
from .dynamics import InvalidInitialState
from .spectral import components

HERMITICITY_TOL = 1e-12
TRACE_DRIFT_LIMIT = 1e-6
EIGENVALUE_FLOOR = -1e-9


class StepSizeTooLarge(RuntimeError):
    """dt violates the stability bound or the trace drifted past 1e-6."""


class PositivityWarning(UserWarning):
    """An eigenvalue of rho dipped below the monitoring floor."""


@dataclass(frozen=True)
class SolverSettings:
    """Fixed-step RK4 settings; states are recorded every `record_every`
    steps (the initial state is always recorded)."""

    dt: float
    t_end: float
    record_every: int = 1

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.t_end <= 0:
            raise ValueError(f"t_end must be > 0, got {self.t_end}")
        if self.record_every < 1:
            raise ValueError(
                f"record_every must be >= 1, got {self.record_every}")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (n, 3, 3), complex


def check_density_matrix(rho):
    """Validate a 3x3 density matrix: Hermitian, unit trace, positive."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (3, 3):
        raise InvalidInitialState(f"expected a 3x3 matrix, got {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > HERMITICITY_TOL:
        raise InvalidInitialState("matrix is not Hermitian")
    if abs(rho.trace().real - 1.0) > 1e-9:
        raise InvalidInitialState(f"trace is {rho.trace().real!r}, not 1")
    if np.linalg.eigvalsh(rho).min() < EIGENVALUE_FLOOR:
        raise InvalidInitialState("matrix has a negative eigenvalue")
    return rho


def hamiltonian_diag(params):
    """Dressed-basis energies diag(-omega0/2, omega0/2 - Omega,
    omega0/2 + Omega)."""
    w0, Om = params.omega0, params.Omega
    return np.array([-0.5 * w0, 0.5 * w0 - Om, 0.5 * w0 + Om])


def _stability_bound(params):
    # dt <= 0.1 / max(lambda, 2*Omega, gamma_max): resolves the fastest rate
    # transient, the coherence phase and the strongest damping
    fastest = 2.0 * params.Omega
    for alpha, lam, _, _ in components(params.spec):
        fastest = max(fastest, lam, abs(alpha))
    if not components(params.spec):  # flat spectrum
        fastest = max(fastest, rates.stationary_rate(params.spec, 0.0))
    return 0.1 / fastest


def rhs(params, t, rho):
    """Right-hand side of the master equation at time t.

    -i[H, rho] plus, for each dressed state s = -/+ with rate
    gamma(omega0 s Omega, t), the dissipator
    (1/2)|E0><E1,s| rho |E1,s><E0| - (1/4){|E1,s><E1,s|, rho}.
    """
    energies = hamiltonian_diag(params)
    gm = rates.gamma_closed(params.spec, params.omega_minus, t)
    gp = rates.gamma_closed(params.spec, params.omega_plus, t)
    return _rhs_fast(energies, params.spec, params.omega_minus,
                     params.omega_plus, t, rho, gm, gp)


def _rhs_fast(energies, spec, wm, wp, t, rho, gm, gp):
    d = (-1j * (energies[:, None] - energies[None, :])) * rho
    d[0, 0] += 0.5 * (gm * rho[1, 1] + gp * rho[2, 2])
    d[1, :] -= 0.25 * gm * rho[1, :]
    d[:, 1] -= 0.25 * gm * rho[:, 1]
    d[2, :] -= 0.25 * gp * rho[2, :]
    d[:, 2] -= 0.25 * gp * rho[:, 2]
    return d


def _rk4_span(params, rho, t0, t1, n_steps):
    """Advance rho from t0 to t1 in n_steps equal RK4 steps."""
    energies = hamiltonian_diag(params)
    spec = params.spec
    wm, wp = params.omega_minus, params.omega_plus
    gamma = rates.gamma_closed
    h = (t1 - t0) / n_steps
    for k in range(n_steps):
        t = t0 + k * h
        th, tf = t + 0.5 * h, t + h
        g1m, g1p = gamma(spec, wm, t), gamma(spec, wp, t)
        g2m, g2p = gamma(spec, wm, th), gamma(spec, wp, th)
        g4m, g4p = gamma(spec, wm, tf), gamma(spec, wp, tf)
        k1 = _rhs_fast(energies, spec, wm, wp, t, rho, g1m, g1p)
        k2 = _rhs_fast(energies, spec, wm, wp, th, rho + 0.5 * h * k1,
                       g2m, g2p)
        k3 = _rhs_fast(energies, spec, wm, wp, th, rho + 0.5 * h * k2,
                       g2m, g2p)
        k4 = _rhs_fast(energies, spec, wm, wp, tf, rho + h * k3, g4m, g4p)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return rho


def _monitor(rho, t):
    if abs(rho.trace().real - 1.0) > TRACE_DRIFT_LIMIT:
        raise StepSizeTooLarge(
            f"trace drifted to {rho.trace().real!r} at t = {t:g}; "
            "reduce dt")
    low = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if low < EIGENVALUE_FLOOR:
        warnings.warn(f"eigenvalue {low:g} < 0 at t = {t:g}",
                      PositivityWarning)


def propagate(params, init, settings):
    """Integrate the master equation with fixed-step RK4.

    Rates are evaluated at t, t + dt/2 and t + dt each step.  The trace is
    monitored at every recorded point (raising StepSizeTooLarge past 1e-6
    drift) and positivity is monitored, not enforced: a warning reports any
    eigenvalue below the floor, since transiently negative rates can
    legitimately stress positivity and silent projection would mask that.
    """
    rho = check_density_matrix(init).copy()
    bound = _stability_bound(params)
    if settings.dt > bound * (1.0 + 1e-9):
        raise StepSizeTooLarge(
            f"dt = {settings.dt:g} exceeds the stability bound {bound:g}")
    n_steps = int(round(settings.t_end / settings.dt))
    n_steps = max(1, n_steps)
    times = [0.0]
    out = [rho.copy()]
    done = 0
    while done < n_steps:
        span = min(settings.record_every, n_steps - done)
        t0 = done * settings.dt
        t1 = (done + span) * settings.dt
        rho = _rk4_span(params, rho, t0, t1, span)
        done += span
        _monitor(rho, t1)
        times.append(t1)
        out.append(rho.copy())
    return Trajectory(times=np.array(times), states=np.array(out))


def propagate_times(params, init, times, dt):
    """RK4 states at the given (increasing) times, first entry at times[0].

    Each interval is covered by equal substeps no longer than dt, so
    arbitrary grids are hit exactly.  times[0] must be 0 (the initial
    state's time).
    """
    times = np.asarray(times, dtype=float)
    if times[0] != 0.0:
        raise ValueError("grid must start at t = 0")
    rho = check_density_matrix(init).copy()
    bound = _stability_bound(params)
    if dt > bound * (1.0 + 1e-9):
        raise StepSizeTooLarge(
            f"dt = {dt:g} exceeds the stability bound {bound:g}")
    out = [rho.copy()]
    for t0, t1 in zip(times[:-1], times[1:]):
        if t1 > t0:
            n = max(1, int(np.ceil((t1 - t0) / dt - 1e-12)))
            rho = _rk4_span(params, rho, t0, t1, n)
            _monitor(rho, t1)
        out.append(rho.copy())
    return Trajectory(times=times.copy(), states=np.array(out))
