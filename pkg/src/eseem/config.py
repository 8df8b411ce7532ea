"""Run-configuration files: INI-style key/value blocks describing one
echo experiment, plus the bundled parameter presets.

Sections: ``[system]`` physical constants, ``[sequence]`` pulse angles and
model (angles in degrees, converted once at parse), ``[tau]`` the delay
grid, ``[run]`` engine/detection/decay choices, optional ``[ensemble]``
B1-inhomogeneity averaging.  Schema violations raise :class:`ConfigError`
carrying the dotted field path, which the CLI maps to exit code 2.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .engine import ENGINES, EchoExperiment
from .ensemble import AngleDistribution
from .pulses import PulseSpec, composite_pi
from .system import SpinSystemParams

PRESET_NAMES = ("nc60", "nc60_mi_minus1", "nc60_mi_0", "nc60_composite")


class ConfigError(ValueError):
    """Invalid or missing configuration value; ``field`` is a dotted path."""

    def __init__(self, field_path: str, message: str):
        self.field = field_path
        super().__init__(f"{field_path}: {message}")


def _parse_spin(text: str) -> float:
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        return float(num) / float(den)
    return float(text)


class _Section:
    """One config block with typed, error-reporting accessors."""

    def __init__(self, name: str, items: dict[str, str]):
        self.name = name
        self.items = items

    def _raw(self, key: str, default=None, required=False):
        if key in self.items and self.items[key].strip() != "":
            return self.items[key].strip()
        if required:
            raise ConfigError(f"{self.name}.{key}", "required value missing")
        return default

    def get_float(self, key: str, default=None, required=False):
        raw = self._raw(key, required=required)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{self.name}.{key}", f"not a number: {raw!r}")

    def get_int(self, key: str, default=None, required=False):
        raw = self._raw(key, required=required)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{self.name}.{key}", f"not an integer: {raw!r}")

    def get_bool(self, key: str, default=False):
        raw = self._raw(key)
        if raw is None:
            return default
        low = raw.lower()
        if low in ("true", "yes", "on", "1"):
            return True
        if low in ("false", "no", "off", "0"):
            return False
        raise ConfigError(f"{self.name}.{key}", f"not a boolean: {raw!r}")

    def get_str(self, key: str, default=None, required=False):
        return self._raw(key, default=default, required=required)

    def get_spin(self, key: str, required=True):
        raw = self._raw(key, required=required)
        try:
            return _parse_spin(raw)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"{self.name}.{key}", f"not a spin value: {raw!r}")


def _parse_composite(text: str, name: str) -> tuple[tuple[float, float], ...] | None:
    """'none', 'cp3', or custom 'angle@phase,angle@phase,...' in degrees."""
    low = text.lower()
    if low in ("none", ""):
        return None
    if low == "cp3":
        return composite_pi().composite
    segments = []
    for part in text.split(","):
        try:
            angle, _, phase = part.partition("@")
            segments.append((np.deg2rad(float(angle)), np.deg2rad(float(phase))))
        except ValueError:
            raise ConfigError(name, f"bad composite segment {part!r}; "
                                    "expected 'angle_deg@phase_deg,...'")
    return tuple(segments)


@dataclass
class RunConfig:
    """Parsed, validated configuration for one run."""

    system: SpinSystemParams
    pulse1: PulseSpec
    pulse2: PulseSpec
    tau_grid: np.ndarray
    detect_m_i: list[float]
    engine: str
    resonance_offset_hz: float | None
    t2_s: float | None
    distribution: AngleDistribution | None
    shared_b1: bool
    steps_per_period: int
    echo: dict = field(default_factory=dict)   # flattened raw items

    def experiment(self, m_i: float) -> EchoExperiment:
        return EchoExperiment(
            system=self.system, pulse1=self.pulse1, pulse2=self.pulse2,
            tau_grid=self.tau_grid, detect_m_i=m_i, engine=self.engine,
            resonance_offset_hz=self.resonance_offset_hz, t2_s=self.t2_s,
            steps_per_period=self.steps_per_period)


def parse_config(path: str | Path) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as err:
        raise ConfigError("file", f"cannot read {path}: {err}")
    except configparser.Error as err:
        raise ConfigError("file", f"cannot parse {path}: {err}")

    sections = {name: _Section(name, dict(parser[name]))
                for name in parser.sections()}
    for required in ("system", "sequence", "tau", "run"):
        if required not in sections:
            raise ConfigError(required, "required block missing")

    sys_sec = sections["system"]
    try:
        system = SpinSystemParams(
            s=sys_sec.get_spin("s"),
            i=sys_sec.get_spin("i"),
            a_hz=sys_sec.get_float("a_hz", required=True),
            f_e_hz=sys_sec.get_float("f_e_hz", required=True),
            f_i_hz=sys_sec.get_float("f_i_hz"),
            g=sys_sec.get_float("g", default=2.0036),
            f_mw_hz=sys_sec.get_float("f_mw_hz"),
        )
    except ValueError as err:
        if isinstance(err, ConfigError):
            raise
        raise ConfigError("system", str(err))

    seq = sections["sequence"]
    model = seq.get_str("pulse_model", default="ideal")
    theta1 = np.deg2rad(seq.get_float("theta1_deg", required=True))
    theta2 = np.deg2rad(seq.get_float("theta2_deg", required=True))
    phase1 = np.deg2rad(seq.get_float("phase1_deg", default=0.0))
    phase2 = np.deg2rad(seq.get_float("phase2_deg", default=0.0))
    composite = _parse_composite(seq.get_str("composite", default="none"),
                                 "sequence.composite")
    try:
        pulse1 = PulseSpec(angle=theta1, phase=phase1, model=model,
                           duration_s=seq.get_float("t_p1_s"))
        pulse2 = PulseSpec(angle=theta2, phase=phase2, model=model,
                           duration_s=seq.get_float("t_p2_s"),
                           composite=composite)
    except ValueError as err:
        raise ConfigError("sequence", str(err))

    tau_sec = sections["tau"]
    start = tau_sec.get_float("start_s", required=True)
    stop = tau_sec.get_float("stop_s", required=True)
    points = tau_sec.get_int("points", required=True)
    if points < 2:
        raise ConfigError("tau.points", "need at least 2 points")
    if not 0 <= start < stop:
        raise ConfigError("tau", "need 0 <= start_s < stop_s")
    tau_grid = np.linspace(start, stop, points)

    run = sections["run"]
    engine = run.get_str("engine", default="average-hamiltonian")
    if engine not in ENGINES:
        raise ConfigError("run.engine",
                          f"unknown engine {engine!r}; choose from {ENGINES}")
    raw_mi = run.get_str("detect_m_i", required=True)
    try:
        detect_m_i = [_parse_spin(tok) for tok in raw_mi.split(",")]
    except ValueError:
        raise ConfigError("run.detect_m_i", f"bad projection list {raw_mi!r}")
    t2_s = run.get_float("t2_s")
    if t2_s is not None and t2_s <= 0:
        raise ConfigError("run.t2_s", "must be positive")
    offset = run.get_float("resonance_offset_hz")
    if offset is not None and system.f_mw_hz is not None:
        raise ConfigError("run.resonance_offset_hz",
                          "give either this or system.f_mw_hz, not both")
    if offset is None and system.f_mw_hz is None:
        offset = 0.0
    steps = run.get_int("steps_per_period", default=40)

    dist = None
    shared_b1 = False
    if "ensemble" in sections:
        ens = sections["ensemble"]
        sigma = ens.get_float("sigma_rad", default=0.0)
        nodes = ens.get_int("nodes", default=41)
        shared_b1 = ens.get_bool("shared_b1", default=False)
        try:
            if sigma > 0:
                dist = AngleDistribution(kind="gaussian", mean=pulse2.angle,
                                         sigma=sigma, nodes=nodes)
        except ValueError as err:
            raise ConfigError("ensemble", str(err))

    echo = {f"{sec}.{key}": value
            for sec, section in sections.items()
            for key, value in section.items.items()}
    return RunConfig(system=system, pulse1=pulse1, pulse2=pulse2,
                     tau_grid=tau_grid, detect_m_i=detect_m_i, engine=engine,
                     resonance_offset_hz=offset, t2_s=t2_s,
                     distribution=dist, shared_b1=shared_b1,
                     steps_per_period=steps, echo=echo)


def preset_path(name: str) -> Path:
    if name not in PRESET_NAMES:
        raise ConfigError("preset", f"unknown preset {name!r}; "
                                    f"choose from {PRESET_NAMES}")
    fname = "nc60_mi_minus1.cfg" if name == "nc60" else f"{name}.cfg"
    return Path(str(resources.files("eseem.presets").joinpath(fname)))


def load_preset(name: str) -> RunConfig:
    return parse_config(preset_path(name))
