"""Run configurations: TOML files and the bundled scenario presets.

A configuration is a single TOML document; the recognized keys are

========  =======================  ==========================================
key       type                     meaning
========  =======================  ==========================================
levels        array of numbers     admissible sample values, increasing
n_samples     integer              time resolution N of one period
harmonics     array of [k, re, im] prescribed harmonic targets
half_wave     bool (false)         force x[i + N/2] = -x[i]
zero_dc       bool (true)          constrain the average to zero
output_dir    string (optional)    where artifacts are written
emit_plot_data bool (true)         also write spectrum.csv stem data
verbose       bool (false)         stream solver iterations to stderr
period        number (optional)    period in seconds, labeling only
========  =======================  ==========================================

Unknown keys are rejected.  The eight bundled presets reproduce the
published three/five/eight/eleven-level scenarios at N = 2048 with a zero
average: ``she-*`` prescribe only the fundamental, ``hc-*`` add nonzero
higher-order targets.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .exceptions import ParseError, ValidationError
from .model import HarmonicSpec, LevelSet, harmonic_spec, validate_level_set

#: Harmonic numbers prescribed by every bundled preset.
PRESET_HARMONIC_NUMBERS = (1, 5, 7, 11, 13, 17, 19, 23, 25, 29, 31)


@dataclass(frozen=True)
class RunConfig:
    """A validated design scenario."""

    levels: tuple
    n_samples: int
    harmonics: tuple  # rows (k, re, im)
    half_wave: bool = False
    zero_dc: bool = True
    output_dir: Optional[str] = None
    emit_plot_data: bool = True
    verbose: bool = False
    period: Optional[float] = None
    name: str = "custom"

    def level_set(self) -> LevelSet:
        return validate_level_set(self.levels)

    def spec(self) -> HarmonicSpec:
        return harmonic_spec(
            self.n_samples, self.harmonics, half_wave=self.half_wave, zero_dc=self.zero_dc
        )

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "levels": list(self.levels),
            "n_samples": self.n_samples,
            "harmonics": [list(row) for row in self.harmonics],
            "half_wave": self.half_wave,
            "zero_dc": self.zero_dc,
        }


_SCHEMA = {
    "levels": (list, True),
    "n_samples": (int, True),
    "harmonics": (list, True),
    "half_wave": (bool, False),
    "zero_dc": (bool, False),
    "output_dir": (str, False),
    "emit_plot_data": (bool, False),
    "verbose": (bool, False),
    "period": ((int, float), False),
}


def _config_from_mapping(data: dict, name: str) -> RunConfig:
    unknown = sorted(set(data) - set(_SCHEMA))
    if unknown:
        raise ValidationError(f"unknown configuration keys: {', '.join(unknown)}")
    for key, (types, required) in _SCHEMA.items():
        if required and key not in data:
            raise ValidationError(f"missing required configuration key: {key!r}")
        if key in data and not isinstance(data[key], types):
            raise ValidationError(f"configuration key {key!r} has the wrong type")
    try:
        levels = tuple(float(v) for v in data["levels"])
    except (TypeError, ValueError):
        raise ValidationError("configuration key 'levels' must hold numbers") from None
    rows = []
    for row in data["harmonics"]:
        if not isinstance(row, list) or len(row) != 3:
            raise ValidationError("configuration key 'harmonics' must hold [k, re, im] rows")
        rows.append((int(row[0]), float(row[1]), float(row[2])))
    cfg = RunConfig(
        levels=levels,
        n_samples=int(data["n_samples"]),
        harmonics=tuple(rows),
        half_wave=bool(data.get("half_wave", False)),
        zero_dc=bool(data.get("zero_dc", True)),
        output_dir=data.get("output_dir"),
        emit_plot_data=bool(data.get("emit_plot_data", True)),
        verbose=bool(data.get("verbose", False)),
        period=float(data["period"]) if "period" in data else None,
        name=name,
    )
    # Fail fast on model-level problems so errors name the offending field.
    try:
        cfg.level_set()
    except ValidationError as exc:
        raise type(exc)(f"levels: {exc}") from None
    try:
        cfg.spec()
    except ValidationError as exc:
        raise type(exc)(f"harmonics: {exc}") from None
    return cfg


def load_config(path) -> RunConfig:
    """Parse and validate a TOML configuration file.

    Raises
    ------
    ParseError
        On malformed TOML (message carries line/column from the parser).
    ValidationError
        On schema or value problems, naming the offending key.
    """
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {p}: {exc}") from None
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"{p}: {exc}") from None
    return _config_from_mapping(data, name=p.stem)


def _preset(name: str, levels: tuple, hc: tuple, hs: tuple) -> RunConfig:
    rows = tuple(
        (k, float(re), float(im)) for k, re, im in zip(PRESET_HARMONIC_NUMBERS, hc, hs)
    )
    return RunConfig(levels=levels, n_samples=2048, harmonics=rows, zero_dc=True, name=name)


PRESETS: dict[str, RunConfig] = {
    "she-3level": _preset(
        "she-3level",
        (-2.0, 0.0, 2.0),
        (1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
        (-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    ),
    "she-5level": _preset(
        "she-5level",
        (-4.0, -2.0, 0.0, 2.0, 4.0),
        (3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
        (-3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    ),
    "she-8level": _preset(
        "she-8level",
        (-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0),
        (5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
        (-5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    ),
    "she-11level": _preset(
        "she-11level",
        (-10.0, -8.0, -6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0, 10.0),
        (7, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
        (-7, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    ),
    "hc-3level": _preset(
        "hc-3level",
        (-2.0, 0.0, 2.0),
        (1, 0, 0, 0, 0, 0.5, 0, 0, 1, 0, 0),
        (-1, 0, 0, 0.5, 0, 0, 0, 0, 0, 0, 0),
    ),
    "hc-5level": _preset(
        "hc-5level",
        (-4.0, -2.0, 0.0, 2.0, 4.0),
        (2, 0, -1, 0, 1, 0, 0, 0, 0, 1, 0),
        (-2, 0, 0, -1, 0, 0, 1, 0, 0, 0, 1),
    ),
    "hc-8level": _preset(
        "hc-8level",
        (-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0),
        (3, 1, 0, 0, -2, 0, 1, 0, 0, 2, 2),
        (-3, 0, 1, 0, -1, 0, 0, 2, 0, 0, 1),
    ),
    "hc-11level": _preset(
        "hc-11level",
        (-10.0, -8.0, -6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0, 10.0),
        (3, 1, 0, 0, -3, 0, 1, 0, 0, 2, 2),
        (-3, 0, 1, 0, -1, 0, 0, 2, 0, 0, 1),
    ),
}


def preset(name: str) -> RunConfig:
    """Look up a bundled preset by name."""
    try:
        return PRESETS[name]
    except KeyError:
        raise ValidationError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None


def with_profile(cfg: RunConfig, n_samples: int) -> RunConfig:
    """A copy of ``cfg`` at a different time resolution (for smoke profiles)."""
    return replace(cfg, n_samples=n_samples, name=f"{cfg.name}-n{n_samples}")
