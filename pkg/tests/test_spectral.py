import math

import numpy as np
import pytest

from leakycavity import spectral
from leakycavity.spectral import (FlatSpec, GapSpec, LorentzianSpec,
                                  NegativeCoupling, NegativeSpectralDensity,
                                  NonPositiveWidth, evaluate, peak_weight,
                                  validate)


def test_lorentzian_peak_value_is_alpha_over_two_pi():
    spec = LorentzianSpec(coupling_alpha=0.1, width_lambda=100.0,
                          center_omega1=1.0)
    assert evaluate(spec, 1.0) == pytest.approx(0.1 / (2 * math.pi), rel=1e-15)


def test_gap_centers_coincide_peak_cancels():
    spec = GapSpec(alpha1=0.1, lambda1=100.0, omega1=1.0,
                   alpha2=0.099, lambda2=0.1, omega2=1.0)
    assert evaluate(spec, 1.0) == pytest.approx(0.001 / (2 * math.pi),
                                                rel=1e-12)


def test_gap_value_at_unit_detuning():
    # frozen from 50-digit evaluation of the two-term formula:
    # (0.1*1e4/(1+1e4) - 0.099*0.01/(1+0.01)) / (2*pi)
    spec = GapSpec(alpha1=0.1, lambda1=100.0, omega1=0.5,
                   alpha2=0.099, lambda2=0.1, omega2=0.5)
    assert evaluate(spec, -0.5) == pytest.approx(0.015757899558837271,
                                                 rel=1e-14)


def test_flat_returns_level_everywhere():
    spec = FlatSpec(level=0.02)
    for w in (-1e6, -1.0, 0.0, 3.7, 1e9):
        assert evaluate(spec, w) == 0.02


def test_evaluate_accepts_arrays():
    spec = LorentzianSpec(coupling_alpha=0.1, width_lambda=2.0,
                          center_omega1=0.0)
    grid = np.linspace(-5, 5, 11)
    vals = evaluate(spec, grid)
    assert vals.shape == grid.shape
    assert np.isfinite(vals).all()


def test_validate_rejects_zero_width():
    with pytest.raises(NonPositiveWidth):
        validate(LorentzianSpec(coupling_alpha=0.1, width_lambda=0.0,
                                center_omega1=1.0))


def test_validate_rejects_negative_coupling():
    with pytest.raises(NegativeCoupling):
        validate(LorentzianSpec(coupling_alpha=-0.1, width_lambda=1.0,
                                center_omega1=1.0))
    with pytest.raises(NegativeCoupling):
        validate(FlatSpec(level=-1e-6))


def test_validate_gap_negative_center_reports_omega():
    spec = GapSpec(alpha1=0.01, lambda1=1.0, omega1=1.0,
                   alpha2=0.1, lambda2=0.1, omega2=1.0)
    with pytest.raises(NegativeSpectralDensity) as err:
        validate(spec)
    # the gap bottom at the common center is where J goes negative
    assert abs(err.value.omega - 1.0) < 1e-2


def test_validate_gap_requires_width_ordering():
    with pytest.raises(NonPositiveWidth):
        validate(GapSpec(alpha1=0.1, lambda1=0.1, omega1=0.0,
                         alpha2=0.05, lambda2=1.0, omega2=0.0))


def test_validate_accepts_gap_scenario(gap_spec):
    assert validate(gap_spec) is gap_spec


def test_lorentzian_symmetric_about_center(rng):
    spec = LorentzianSpec(coupling_alpha=0.13, width_lambda=0.7,
                          center_omega1=0.4)
    for delta in rng.uniform(0, 50, size=200):
        left = evaluate(spec, spec.center_omega1 - delta)
        right = evaluate(spec, spec.center_omega1 + delta)
        # center +/- delta round differently; equal up to a few ulp
        assert left == pytest.approx(right, rel=4e-16)


def test_lorentzian_monotone_in_detuning():
    spec = LorentzianSpec(coupling_alpha=0.1, width_lambda=1.5,
                          center_omega1=-0.2)
    detunings = np.linspace(0.0, 100.0, 500)
    vals = evaluate(spec, spec.center_omega1 + detunings)
    assert (np.diff(vals) < 0).all()


def test_gap_equals_difference_of_lorentzians(gap_spec, rng):
    left = LorentzianSpec(coupling_alpha=gap_spec.alpha1,
                          width_lambda=gap_spec.lambda1,
                          center_omega1=gap_spec.omega1)
    right = LorentzianSpec(coupling_alpha=gap_spec.alpha2,
                           width_lambda=gap_spec.lambda2,
                           center_omega1=gap_spec.omega2)
    for w in rng.uniform(-1000, 1000, size=300):
        assert evaluate(gap_spec, w) == evaluate(left, w) - evaluate(right, w)


def test_validated_specs_nonnegative_on_scan_range(gap_spec, rng):
    validate(gap_spec)
    lo = min(gap_spec.omega1, gap_spec.omega2) - 10 * gap_spec.lambda1
    hi = max(gap_spec.omega1, gap_spec.omega2) + 10 * gap_spec.lambda1
    assert (evaluate(gap_spec, rng.uniform(lo, hi, size=2000)) >= 0).all()


def test_peak_weight_bounds_spectrum(gap_spec):
    grid = np.linspace(-1000, 1000, 20001)
    assert peak_weight(gap_spec) >= np.abs(evaluate(gap_spec, grid)).max()
    assert peak_weight(FlatSpec(level=0.3)) == 0.3


def test_components_signs(gap_spec):
    comps = spectral.components(gap_spec)
    assert [s for _, _, _, s in comps] == [1.0, -1.0]
    assert spectral.components(FlatSpec(level=1.0)) == ()
