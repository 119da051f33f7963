import numpy as np
import pytest

from leakycavity import GapSpec, LorentzianSpec, SystemParams

OMEGA = 0.5          # half the dressed splitting; 2*Omega = 1
W_MINUS = -OMEGA     # omega0 = 0 anchor
W_PLUS = +OMEGA


@pytest.fixture
def gap_spec():
    """Gap scenario: broad background with a narrow gap at omega0 + Omega."""
    return GapSpec(alpha1=0.1, lambda1=100.0, omega1=W_PLUS,
                   alpha2=0.099, lambda2=0.1, omega2=W_PLUS)


@pytest.fixture
def lorentzian_spec():
    """Narrow single peak on omega0 - Omega; traps the upper dressed state."""
    return LorentzianSpec(coupling_alpha=0.1, width_lambda=0.1,
                          center_omega1=W_MINUS)


@pytest.fixture
def gap_params(gap_spec):
    return SystemParams(spec=gap_spec, Omega=OMEGA, omega0=0.0)


@pytest.fixture
def lorentzian_params(lorentzian_spec):
    return SystemParams(spec=lorentzian_spec, Omega=OMEGA, omega0=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
