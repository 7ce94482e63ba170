"""System configuration: physical constants, link parameters, config-file loading.

All internal quantities are linear-scale SI units; dB values are converted
once, at load time.
"""
from __future__ import annotations

import dataclasses
import math
from pathlib import Path

import yaml

SPEED_OF_LIGHT = 2.99792458e8  # m/s
BOLTZMANN = 1.380649e-23  # J/K


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


@dataclasses.dataclass(frozen=True)
class SystemConfig:
    """Satellite/link parameters. Gains and Rician factor are linear ratios."""

    nt_x: int = 6
    nt_y: int = 6
    altitude: float = 600e3          # m
    coverage_radius: float = 120e3   # m
    carrier_freq: float = 20e9       # Hz
    bandwidth: float = 10e6          # Hz
    tx_gain: float = db_to_linear(6.0)
    rx_gain: float = db_to_linear(25.0)
    sys_noise_temp: float = 150.0    # K
    noise_var: float = 1.0
    tx_power: float = 50.0           # W
    rician_k: float = db_to_linear(12.0)

    def __post_init__(self):
        for name in ("altitude", "coverage_radius", "carrier_freq", "bandwidth",
                     "tx_gain", "rx_gain", "sys_noise_temp", "noise_var", "tx_power",
                     "rician_k"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.nt_x < 1 or self.nt_y < 1:
            raise ValueError("antenna counts must be >= 1")

    @property
    def n_t(self) -> int:
        return self.nt_x * self.nt_y

    @property
    def sigma2_over_p(self) -> float:
        return self.noise_var / self.tx_power


# Config-file schema: a flat YAML mapping. Linear keys match SystemConfig
# field names; the *_db variants below take precedence over their linear
# counterparts when both are present.
_DB_KEYS = {"tx_gain_db": "tx_gain", "rx_gain_db": "rx_gain", "rician_k_db": "rician_k"}
_INT_KEYS = {"nt_x", "nt_y"}


def load_config(path: str | Path) -> SystemConfig:
    """Load a SystemConfig from a YAML key-value file."""
    with open(path) as fh:
        raw = yaml.safe_load(fh) or {}
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: expected a mapping of config keys")
    fields = {f.name for f in dataclasses.fields(SystemConfig)}
    kwargs = {}
    for key, value in raw.items():
        if key in _DB_KEYS:
            kwargs[_DB_KEYS[key]] = db_to_linear(float(value))
        elif key in fields:
            kwargs[key] = int(value) if key in _INT_KEYS else float(value)
        elif key in ("angle_unit", "users", "demands"):
            continue  # consumed by load_users / load_demands
        else:
            raise ValueError(f"{path}: unknown config key {key!r}")
    # linear key loses to its dB variant
    for db_key, lin_key in _DB_KEYS.items():
        if db_key in raw and lin_key in raw:
            kwargs[lin_key] = db_to_linear(float(raw[db_key]))
    return SystemConfig(**kwargs)


def load_users(path: str | Path):
    """Load optional fixed user geometries from a config file.

    Angles are radians unless the file sets ``angle_unit: degrees``.
    Returns None when the file has no ``users`` section.
    """
    from .geometry import UserGeometry

    with open(path) as fh:
        raw = yaml.safe_load(fh) or {}
    users = raw.get("users")
    if users is None:
        return None
    scale = math.pi / 180.0 if raw.get("angle_unit", "radians").startswith("deg") else 1.0
    return [
        UserGeometry(
            azimuth=float(u["azimuth"]) * scale,
            off_nadir=float(u["off_nadir"]) * scale,
            distance=float(u["distance"]),
        )
        for u in users
    ]
