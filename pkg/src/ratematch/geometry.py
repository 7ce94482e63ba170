"""User placement, planar-array response, link-budget gain, Rician fading."""
from __future__ import annotations

import dataclasses

import numpy as np

from .config import BOLTZMANN, SPEED_OF_LIGHT, SystemConfig


@dataclasses.dataclass(frozen=True)
class UserGeometry:
    azimuth: float    # rad
    off_nadir: float  # rad
    distance: float   # m

    def __post_init__(self):
        if not 0.0 <= self.off_nadir < np.pi / 2:
            raise ValueError("off_nadir must lie in [0, pi/2)")


@dataclasses.dataclass(frozen=True)
class ChannelStats:
    array_response: np.ndarray  # (N_t,), unit-modulus entries, first entry 1
    gamma: float                # average channel power E|g|^2
    kappa: float                # linear Rician factor


def place_users(config: SystemConfig, count: int, rng: np.random.Generator):
    """Drop `count` users uniformly on the coverage disk (local tangent plane)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    radius = config.coverage_radius * np.sqrt(rng.uniform(size=count))
    theta = rng.uniform(0.0, 2 * np.pi, size=count)
    return [
        UserGeometry(
            azimuth=float(t),
            off_nadir=float(np.arctan2(r, config.altitude)),
            distance=float(np.hypot(config.altitude, r)),
        )
        for r, t in zip(radius, theta)
    ]


def array_response(geom: UserGeometry, config: SystemConfig) -> np.ndarray:
    """UPA steering vector a = a_x kron a_y for half-wavelength spacing.

    Entry ordering is x-major: index = n_x * nt_y + n_y.
    """
    s = np.sin(geom.off_nadir)
    ax = np.exp(-1j * np.pi * np.arange(config.nt_x) * s * np.cos(geom.azimuth))
    ay = np.exp(-1j * np.pi * np.arange(config.nt_y) * s * np.sin(geom.azimuth))
    return np.kron(ax, ay)


def link_budget_gamma(geom: UserGeometry, config: SystemConfig) -> float:
    """Average channel power from the free-space link budget."""
    path = (4 * np.pi * config.carrier_freq * geom.distance / SPEED_OF_LIGHT) ** 2
    noise = BOLTZMANN * config.sys_noise_temp * config.bandwidth
    return config.tx_gain * config.rx_gain / (path * noise)


def channel_stats(geoms, config: SystemConfig):
    """Per-user array response, average gain and Rician factor."""
    return [
        ChannelStats(
            array_response=array_response(g, config),
            gamma=link_budget_gamma(g, config),
            kappa=config.rician_k,
        )
        for g in geoms
    ]


def sample_gain(stats: ChannelStats, rng: np.random.Generator) -> complex:
    """One Rician draw of the scalar channel gain g.

    Re and Im are i.i.d. Gaussian with mean sqrt(kappa*gamma/(2(kappa+1)))
    and variance gamma/(2(kappa+1)), so E|g|^2 = gamma.
    """
    mean = np.sqrt(stats.kappa * stats.gamma / (2 * (stats.kappa + 1)))
    std = np.sqrt(stats.gamma / (2 * (stats.kappa + 1)))
    re, im = rng.normal(mean, std, size=2)
    return complex(re, im)


def sample_gains(stats_list, rng: np.random.Generator) -> np.ndarray:
    return np.array([sample_gain(s, rng) for s in stats_list])
