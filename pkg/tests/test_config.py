import numpy as np
import pytest

from leakycavity import config as cfgmod
from leakycavity.config import (COLUMNS, ConfigParseError,
                                UnknownParameter, parse_text, preset)
from leakycavity.spectral import GapSpec, LorentzianSpec


GAP_TEXT = """\
# gap scenario
spectrum.kind=gap
spectrum.alpha1=0.1
spectrum.lambda1=100
spectrum.alpha2=0.099
spectrum.lambda2=0.1
spectrum.center1=plus
spectrum.center2=plus
grid.t_end=50   # trailing comment
grid.n_points=11
"""


def test_parse_basic_gap_config():
    cfg = parse_text(GAP_TEXT).validated()
    spec = cfg.build_spec()
    assert isinstance(spec, GapSpec)
    assert spec.alpha1 == 0.1
    assert spec.omega1 == 0.5  # anchored at omega0 + Omega with omega0 = 0
    assert spec.omega2 == 0.5
    assert cfg.get("grid.t_end") == 50.0
    assert cfg.get("engine") == "analytic"  # default


def test_center_anchor_resolution():
    cfg = parse_text("spectrum.kind=lorentzian\nspectrum.alpha=0.1\n"
                     "spectrum.lambda=2\nspectrum.center=minus\n"
                     "spectrum.detuning=0.25\n")
    spec = cfg.build_spec()
    assert isinstance(spec, LorentzianSpec)
    assert spec.center_omega1 == pytest.approx(-0.5 + 0.25)


def test_parse_errors_carry_location():
    with pytest.raises(ConfigParseError, match="unknown key"):
        parse_text("spectrum.kind=flat\nspectrum.levle=1\n")
    with pytest.raises(ConfigParseError, match=":2:"):
        parse_text("spectrum.kind=flat\nnonsense line\n")
    with pytest.raises(ConfigParseError, match="duplicate"):
        parse_text("spectrum.kind=flat\nspectrum.level=1\n"
                   "spectrum.level=2\n")
    with pytest.raises(ConfigParseError, match="expected a number"):
        parse_text("spectrum.kind=flat\nspectrum.level=abc\n")
    with pytest.raises(ConfigParseError, match="one of"):
        parse_text("spectrum.kind=boxcar\n")


def test_kind_specific_keys_required():
    with pytest.raises(ConfigParseError, match="required"):
        parse_text("spectrum.kind=lorentzian\nspectrum.alpha=0.1\n")
    with pytest.raises(ConfigParseError, match="required"):
        parse_text("grid.t_end=10\n")


def test_presets_validate():
    for name in cfgmod.PRESETS:
        cfg = preset(name).validated()
        assert cfg.build_params() is not None
    with pytest.raises(ConfigParseError, match="unknown preset"):
        preset("no-such-preset")


def test_round_trip_through_text():
    for name in cfgmod.PRESETS:
        cfg = preset(name).validated()
        again = parse_text(cfg.to_text()).validated()
        assert again.to_text() == cfg.to_text()
        assert again.build_spec() == cfg.build_spec()
    custom = parse_text(GAP_TEXT).validated()
    again = parse_text(custom.to_text()).validated()
    assert again.build_spec() == custom.build_spec()
    assert np.array_equal(again.time_grid(), custom.time_grid())


def test_overrides():
    cfg = preset("figure1").with_overrides([("grid.t_end", "10"),
                                            ("engine", "rk4")])
    assert cfg.get("grid.t_end") == 10.0
    assert cfg.get("engine") == "rk4"
    with pytest.raises(UnknownParameter):
        cfg.with_overrides([("grid.t_stop", "10")])


def test_time_grid_linear_and_log():
    cfg = preset("figure1").with_overrides([("grid.t_end", "100"),
                                            ("grid.n_points", "5")])
    assert np.allclose(cfg.time_grid(), [0, 25, 50, 75, 100])
    logcfg = cfg.with_overrides([("grid.spacing", "log"),
                                 ("grid.t_min", "0.1"),
                                 ("grid.n_points", "4")])
    grid = logcfg.time_grid()
    assert grid[0] == 0.0
    assert np.allclose(grid[1:], [0.1, np.sqrt(0.1 * 100), 100.0])
    with pytest.raises(ConfigParseError):
        cfg.with_overrides([("grid.n_points", "1")]).time_grid()
    with pytest.raises(ConfigParseError):
        logcfg.with_overrides([("grid.t_min", "200")]).time_grid()


def test_column_selection_preserves_canonical_order():
    cfg = preset("figure1")
    assert cfg.columns() == list(COLUMNS)
    sub = cfg.with_overrides([("output.columns", "P_0e,t,gamma_minus")])
    assert sub.columns() == ["t", "gamma_minus", "P_0e"]
    with pytest.raises(ConfigParseError, match="unknown column"):
        cfg.with_overrides([("output.columns", "t,bogus")]).columns()


def test_dressed_initial_state():
    cfg = preset("figure1").with_overrides([
        ("initial.state", "dressed"), ("initial.p_minus", "0.25"),
        ("initial.p_plus", "0.25"), ("initial.coh_re", "0.1")])
    init = cfg.initial_state()
    assert init.p0 == 0.5
    assert init.coh == 0.1 + 0j
    bad = cfg.with_overrides([("initial.p_minus", "0.9"),
                              ("initial.p_plus", "0.9")])
    with pytest.raises(Exception):
        bad.initial_state()


def test_sweep_window_defaults():
    cfg = preset("figure1")
    assert cfg.sweep_window() == (200.0, 400.0)
    custom = cfg.with_overrides([("sweep.window_start", "10"),
                                 ("sweep.window_end", "20")])
    assert custom.sweep_window() == (10.0, 20.0)
