"""leakycavity: lossy atom-cavity dynamics with reservoir memory.

Time-dependent decay rates for flat, Lorentzian and gapped reservoir
spectra, the closed-form one-excitation dynamics they generate, and an
independent RK4 propagator for cross-checking.  See the `cli` module for
the command-line entry point.
"""

from .dynamics import (ATOM_EXCITED, DressedDensity, Observables,
                       SystemParams, analytic_state, analytic_state_general,
                       observables)
from .propagator import SolverSettings, Trajectory, propagate, rhs
from .rates import (RatePair, RateQuery, gamma_closed, gamma_closed_gap,
                    gamma_closed_lorentzian, gamma_numeric,
                    lamb_shift_numeric, rate_integral, rate_pair,
                    stationary_rate)
from .spectral import (FlatSpec, GapSpec, LorentzianSpec, evaluate, validate)

__version__ = "0.1.0"

__all__ = [
    "ATOM_EXCITED", "DressedDensity", "FlatSpec", "GapSpec",
    "LorentzianSpec", "Observables", "RatePair", "RateQuery",
    "SolverSettings", "SystemParams", "Trajectory", "analytic_state",
    "analytic_state_general", "evaluate", "gamma_closed", "gamma_closed_gap",
    "gamma_closed_lorentzian", "gamma_numeric", "lamb_shift_numeric",
    "observables", "propagate", "rate_integral", "rate_pair", "rhs",
    "stationary_rate", "validate", "__version__",
]
