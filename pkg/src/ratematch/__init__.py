"""Rate-matching precoder design for joint unicast+multicast LEO downlink."""

from .baselines import OumDesign, SchemeId, solve_ldm, solve_oum
from .config import SystemConfig, load_config
from .estimators import ESTIMATORS, GpiRsNoum, LdmRmNoum, RateMatchingPrecoder, RmOum
from .geometry import ChannelStats, UserGeometry, channel_stats, place_users, sample_gains
from .harness import ExperimentPlan, RunRecord, mae, run_experiment
from .objective import objective_value, residuals, smoothed_min_common
from .quadforms import DemandProfile, QuadFormSet, instantaneous_rates
from .solver import SmoothingParams, SolverReport, solve

__all__ = [
    "ChannelStats",
    "DemandProfile",
    "ESTIMATORS",
    "ExperimentPlan",
    "GpiRsNoum",
    "LdmRmNoum",
    "OumDesign",
    "QuadFormSet",
    "RateMatchingPrecoder",
    "RmOum",
    "RunRecord",
    "SchemeId",
    "SmoothingParams",
    "SolverReport",
    "SystemConfig",
    "UserGeometry",
    "channel_stats",
    "instantaneous_rates",
    "load_config",
    "mae",
    "objective_value",
    "place_users",
    "residuals",
    "run_experiment",
    "sample_gains",
    "smoothed_min_common",
    "solve",
    "solve_ldm",
    "solve_oum",
]
