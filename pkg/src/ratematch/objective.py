"""Smoothed minimum common rate, portions, and the rate-matching objective."""
from __future__ import annotations

import numpy as np

from .quadforms import DemandProfile, QuadFormSet

RESIDUAL_FLOOR = 1e-15


def lse_min(values, alpha: float) -> float:
    """Smooth minimum -alpha*ln(mean(exp(-x/alpha))), evaluated with a
    min-shift so no exponential under- or overflows.

    Satisfies min(x) <= result <= min(x) + alpha*ln(len(x)).
    """
    x = np.asarray(values, dtype=float)
    lo = float(np.min(x))
    return lo - alpha * float(np.log(np.mean(np.exp(-(x - lo) / alpha))))


def smoothed_min_common(f_stacked, q: QuadFormSet, alpha: float) -> float:
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return lse_min(q.rates_common(f_stacked), alpha)


def portions(v) -> np.ndarray:
    """p_j = v_j^2 / ||v||^2; non-negative and summing to one."""
    v = np.asarray(v, dtype=float)
    nrm2 = float(v @ v)
    if nrm2 <= 0:
        raise ValueError("portion vector must be nonzero")
    return v * v / nrm2


def residuals(f_stacked, v, q: QuadFormSet, demands: DemandProfile, alpha: float):
    """Signed gaps (target - offered) for unicast messages and multicast."""
    p = portions(v)
    smin = smoothed_min_common(f_stacked, q, alpha)
    offered_uc = q.rates_private(f_stacked) + p[:-1] * smin
    r_uc = demands.r_target_uc - offered_uc
    r_mc = demands.r_target_mc - p[-1] * smin
    r_uc[np.abs(r_uc) < RESIDUAL_FLOOR] = 0.0
    if abs(r_mc) < RESIDUAL_FLOOR:
        r_mc = 0.0
    return r_uc, r_mc


def objective_value(f_stacked, v, q: QuadFormSet, demands: DemandProfile,
                    alpha: float) -> float:
    r_uc, r_mc = residuals(f_stacked, v, q, demands, alpha)
    return float(r_uc @ r_uc + demands.eta_mc * r_mc**2)


def eigenvalue_lambda(f_stacked, v, q: QuadFormSet, demands: DemandProfile,
                      alpha: float) -> float:
    """The NEPv eigenvalue exp(-objective), in (0, 1]."""
    return float(np.exp(-objective_value(f_stacked, v, q, demands, alpha)))
