"""Simulation configuration: flat key=value text with section prefixes.

Example::

    spectrum.kind=gap
    spectrum.alpha1=0.1
    spectrum.lambda1=100
    grid.t_end=400

Frequencies are in units of 2*Omega, times in (2*Omega)^-1.  Spectrum
centers are given as a dressed anchor ("minus" for omega0 - Omega, "plus"
for omega0 + Omega) plus a detuning offset, so the unconstrained absolute
omega0 never needs to be chosen.  '#' starts a comment; command-line
--set overrides win over file keys.
"""

from dataclasses import dataclass, field

import numpy as np

from .dynamics import ATOM_EXCITED, DressedDensity, SystemParams


class ConfigParseError(ValueError):
    """Bad config text; message carries the line or field."""


class UnknownParameter(ValueError):
    """A sweep or override referenced a key that does not exist."""


#: canonical column order for the emitted time series
COLUMNS = ("t", "gamma_minus", "gamma_plus", "I_minus", "I_plus",
           "p_E0", "p_Eminus", "p_Eplus", "coh_re", "coh_im",
           "P_0g", "P_1g", "P_0e")

#: CSV headers carry the unit annotation; dimensionless columns stay bare
HEADERS = {"t": "t[(2Omega)^-1]",
           "gamma_minus": "gamma_minus[2Omega]",
           "gamma_plus": "gamma_plus[2Omega]"}

ENGINES = ("analytic", "rk4", "both")
SPACINGS = ("linear", "log")
KINDS = ("flat", "lorentzian", "gap")
ANCHORS = ("minus", "plus")


def _f(raw, key):
    try:
        return float(raw)
    except ValueError:
        raise ConfigParseError(f"{key}: expected a number, got {raw!r}") from None


def _i(raw, key):
    try:
        return int(raw)
    except ValueError:
        raise ConfigParseError(f"{key}: expected an integer, got {raw!r}") from None


def _enum(raw, key, allowed):
    if raw not in allowed:
        raise ConfigParseError(
            f"{key}: expected one of {', '.join(allowed)}, got {raw!r}")
    return raw


# key -> (converter, default); None default means kind-dependent/required
_SCHEMA = {
    "spectrum.kind": (lambda r, k: _enum(r, k, KINDS), None),
    "spectrum.level": (_f, None),
    "spectrum.alpha": (_f, None),
    "spectrum.lambda": (_f, None),
    "spectrum.center": (lambda r, k: _enum(r, k, ANCHORS), "minus"),
    "spectrum.detuning": (_f, 0.0),
    "spectrum.alpha1": (_f, None),
    "spectrum.lambda1": (_f, None),
    "spectrum.center1": (lambda r, k: _enum(r, k, ANCHORS), "plus"),
    "spectrum.detuning1": (_f, 0.0),
    "spectrum.alpha2": (_f, None),
    "spectrum.lambda2": (_f, None),
    "spectrum.center2": (lambda r, k: _enum(r, k, ANCHORS), "plus"),
    "spectrum.detuning2": (_f, 0.0),
    "system.Omega": (_f, 0.5),
    "system.omega0": (_f, 0.0),
    "system.two_omega": (_f, 1.0),
    "initial.state": (lambda r, k: _enum(r, k, ("atom-excited", "dressed")),
                      "atom-excited"),
    "initial.p_minus": (_f, 0.5),
    "initial.p_plus": (_f, 0.5),
    "initial.coh_re": (_f, 0.0),
    "initial.coh_im": (_f, 0.0),
    "grid.t_end": (_f, 400.0),
    "grid.n_points": (_i, 2001),
    "grid.spacing": (lambda r, k: _enum(r, k, SPACINGS), "linear"),
    "grid.t_min": (_f, 1e-3),
    "engine": (lambda r, k: _enum(r, k, ENGINES), "analytic"),
    "tolerances.quad": (_f, 1e-9),
    "solver.dt": (_f, 1e-3),
    "output.columns": (lambda r, k: r, "all"),
    "sweep.window_start": (_f, None),
    "sweep.window_end": (_f, None),
}

_KIND_KEYS = {
    "flat": ("spectrum.level",),
    "lorentzian": ("spectrum.alpha", "spectrum.lambda",
                   "spectrum.center", "spectrum.detuning"),
    "gap": ("spectrum.alpha1", "spectrum.lambda1", "spectrum.center1",
            "spectrum.detuning1", "spectrum.alpha2", "spectrum.lambda2",
            "spectrum.center2", "spectrum.detuning2"),
}

PRESETS = {
    # gap-spectrum scenario: broad background with a narrow gap carved at
    # the upper dressed frequency; stationary rate ratio ~= 1/100
    "figure1": {
        "spectrum.kind": "gap",
        "spectrum.alpha1": "0.1",
        "spectrum.lambda1": "100",
        "spectrum.alpha2": "0.099",
        "spectrum.lambda2": "0.1",
        "spectrum.center1": "plus",
        "spectrum.center2": "plus",
        "grid.t_end": "400",
        "grid.n_points": "2001",
    },
    # single narrow peak on the lower dressed frequency; the upper dressed
    # state barely decays and the atom keeps a ~25% excited population
    "lorentzian": {
        "spectrum.kind": "lorentzian",
        "spectrum.alpha": "0.1",
        "spectrum.lambda": "0.1",
        "spectrum.center": "minus",
        "grid.t_end": "400",
        "grid.n_points": "2001",
    },
}


@dataclass(frozen=True)
class SimConfig:
    """Validated simulation configuration."""

    raw: dict = field(default_factory=dict)  # normalized key -> typed value

    def get(self, key):
        if key not in _SCHEMA:
            raise UnknownParameter(f"unknown config key {key!r}")
        if key in self.raw:
            return self.raw[key]
        return _SCHEMA[key][1]

    # -- derived objects ------------------------------------------------

    def anchor_frequency(self, anchor):
        w0 = self.get("system.omega0")
        Om = self.get("system.Omega")
        return w0 - Om if anchor == "minus" else w0 + Om

    def build_spec(self):
        from . import spectral
        kind = self.get("spectrum.kind")
        if kind is None:
            raise ConfigParseError("spectrum.kind is required")
        for key in _KIND_KEYS[kind]:
            if self.get(key) is None:
                raise ConfigParseError(
                    f"{key} is required for spectrum.kind={kind}")
        if kind == "flat":
            spec = spectral.FlatSpec(level=self.get("spectrum.level"))
        elif kind == "lorentzian":
            center = (self.anchor_frequency(self.get("spectrum.center"))
                      + self.get("spectrum.detuning"))
            spec = spectral.LorentzianSpec(
                coupling_alpha=self.get("spectrum.alpha"),
                width_lambda=self.get("spectrum.lambda"),
                center_omega1=center)
        else:
            c1 = (self.anchor_frequency(self.get("spectrum.center1"))
                  + self.get("spectrum.detuning1"))
            c2 = (self.anchor_frequency(self.get("spectrum.center2"))
                  + self.get("spectrum.detuning2"))
            spec = spectral.GapSpec(
                alpha1=self.get("spectrum.alpha1"),
                lambda1=self.get("spectrum.lambda1"), omega1=c1,
                alpha2=self.get("spectrum.alpha2"),
                lambda2=self.get("spectrum.lambda2"), omega2=c2)
        return spectral.validate(spec)

    def build_params(self):
        return SystemParams(spec=self.build_spec(),
                            Omega=self.get("system.Omega"),
                            omega0=self.get("system.omega0"))

    def initial_state(self):
        if self.get("initial.state") == "atom-excited":
            return ATOM_EXCITED
        pm = self.get("initial.p_minus")
        pp = self.get("initial.p_plus")
        coh = complex(self.get("initial.coh_re"), self.get("initial.coh_im"))
        return DressedDensity(p0=1.0 - pm - pp, p_minus=pm, p_plus=pp,
                              coh=coh).check()

    def time_grid(self):
        t_end = self.get("grid.t_end")
        n = self.get("grid.n_points")
        if t_end <= 0:
            raise ConfigParseError(f"grid.t_end must be > 0, got {t_end}")
        if n < 2:
            raise ConfigParseError(f"grid.n_points must be >= 2, got {n}")
        if self.get("grid.spacing") == "linear":
            return np.linspace(0.0, t_end, n)
        t_min = self.get("grid.t_min")
        if not 0.0 < t_min < t_end:
            raise ConfigParseError(
                f"grid.t_min must be in (0, t_end), got {t_min}")
        return np.concatenate(([0.0], np.geomspace(t_min, t_end, n - 1)))

    def columns(self):
        sel = self.get("output.columns")
        if sel == "all":
            return list(COLUMNS)
        names = [s.strip() for s in sel.split(",") if s.strip()]
        for name in names:
            if name not in COLUMNS:
                raise ConfigParseError(f"output.columns: unknown column "
                                       f"{name!r}")
        # selection never reorders: canonical order is part of the format
        return [c for c in COLUMNS if c in names]

    def sweep_window(self):
        t_end = self.get("grid.t_end")
        ws = self.get("sweep.window_start")
        we = self.get("sweep.window_end")
        return (0.5 * t_end if ws is None else ws,
                t_end if we is None else we)

    # -- validation / round-trip ----------------------------------------

    def validated(self):
        """Run every cross-field check; returns self."""
        self.build_params()
        self.initial_state()
        self.time_grid()
        self.columns()
        if self.get("tolerances.quad") <= 0:
            raise ConfigParseError("tolerances.quad must be > 0")
        if self.get("solver.dt") <= 0:
            raise ConfigParseError("solver.dt must be > 0")
        ws, we = self.sweep_window()
        if not 0.0 <= ws < we:
            raise ConfigParseError(
                f"sweep window [{ws}, {we}] must satisfy 0 <= start < end")
        return self

    def with_overrides(self, pairs):
        """New config with `key=value` strings applied on top."""
        raw = dict(self.raw)
        for key, value in pairs:
            if key not in _SCHEMA:
                raise UnknownParameter(f"unknown config key {key!r}")
            raw[key] = _SCHEMA[key][0](value, key)
        return SimConfig(raw=raw)

    def to_text(self):
        """Normalized key=value text; re-parses to an equivalent config."""
        lines = []
        kind = self.get("spectrum.kind")
        keys = ["spectrum.kind", *_KIND_KEYS[kind]]
        keys += [k for k in _SCHEMA
                 if not k.startswith("spectrum.") and self.get(k) is not None]
        for key in keys:
            value = self.get(key)
            # repr of a float is its shortest exact round-trip form
            lines.append(f"{key}={value!r}" if isinstance(value, float)
                         else f"{key}={value}")
        return "\n".join(lines) + "\n"


def parse_text(text, source="<config>"):
    """Parse flat key=value config text into a SimConfig."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigParseError(
                f"{source}:{lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in body.split("=", 1))
        if key not in _SCHEMA:
            raise ConfigParseError(
                f"{source}:{lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigParseError(
                f"{source}:{lineno}: duplicate key {key!r}")
        raw[key] = _SCHEMA[key][0](value, key)
    if "spectrum.kind" not in raw:
        raise ConfigParseError(f"{source}: spectrum.kind is required")
    kind = raw["spectrum.kind"]
    for key in _KIND_KEYS[kind]:
        if _SCHEMA[key][1] is None and key not in raw:
            raise ConfigParseError(
                f"{source}: {key} is required for spectrum.kind={kind}")
    return SimConfig(raw=raw)


def parse_file(path):
    try:
        with open(path, "r", encoding="utf-8", newline=None) as fh:
            text = fh.read()
    except OSError:
        raise
    return parse_text(text, source=str(path))


def preset(name):
    if name not in PRESETS:
        raise ConfigParseError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}")
    cfg = SimConfig()
    return cfg.with_overrides(PRESETS[name].items())
