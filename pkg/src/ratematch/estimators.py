"""Estimator-style front end so precoder design composes with sklearn tooling.

``fit`` consumes per-user channel statistics and a demand profile and
exposes the designed precoder; ``predict`` maps sampled channel gains to
achieved rates; ``score`` is the negative mean absolute rate-matching error.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from . import baselines, quadforms, solver
from .quadforms import DemandProfile, QuadFormSet


def _as_quadforms(X, sigma2_over_p) -> QuadFormSet:
    if isinstance(X, QuadFormSet):
        return X
    steering = np.array([s.array_response for s in X])
    gammas = np.array([s.gamma for s in X])
    return QuadFormSet(steering, gammas, sigma2_over_p)


class RateMatchingPrecoder(BaseEstimator):
    """Base estimator for the rate-matching precoder family.

    Parameters mirror the solver knobs; subclasses pick the scheme.
    """

    def __init__(self, alpha=1e-2, alpha_growth=10.0, max_escalations=3,
                 eps=1e-4, t_max=1000, sigma2_over_p=0.02):
        self.alpha = alpha
        self.alpha_growth = alpha_growth
        self.max_escalations = max_escalations
        self.eps = eps
        self.t_max = t_max
        self.sigma2_over_p = sigma2_over_p

    def _params(self):
        return solver.SmoothingParams(
            alpha=self.alpha, alpha_growth=self.alpha_growth,
            max_escalations=self.max_escalations)

    def _solve(self, q, demands):
        raise NotImplementedError

    def fit(self, X, y: DemandProfile):
        """Design the precoder for channel statistics X and demands y."""
        q = _as_quadforms(X, self.sigma2_over_p)
        self.quadforms_ = q
        self.report_ = self._solve(q, y)
        self.precoder_ = self.report_.f
        self.portions_ = (
            np.asarray(self.report_.v, dtype=float) ** 2
            / float(self.report_.v @ self.report_.v))
        self.demands_ = y
        return self

    def predict(self, gains):
        """Achieved (unicast rates, multicast rate) per gain realization."""
        gains = np.atleast_2d(np.asarray(gains))
        out_uc, out_mc = [], []
        for g in gains:
            r_uc, c_mc = quadforms.instantaneous_rates(
                self.precoder_, self.portions_, g, self.quadforms_)
            out_uc.append(r_uc)
            out_mc.append(c_mc)
        return np.array(out_uc), np.array(out_mc)

    def score(self, gains, y: DemandProfile | None = None):
        """Negative MAE between demands and achieved rates (higher is better)."""
        demands = y or self.demands_
        r_uc, c_mc = self.predict(gains)
        err = (np.sum(np.abs(demands.r_target_uc - r_uc), axis=1)
               + np.abs(demands.r_target_mc - c_mc))
        return -float(np.mean(err) / (len(demands.r_target_uc) + 1))


class GpiRsNoum(RateMatchingPrecoder):
    """Joint precoder and common-rate-portion design (the full scheme)."""

    def _solve(self, q, demands):
        return solver.solve(q, demands, params=self._params(),
                            eps=self.eps, t_max=self.t_max)


class LdmRmNoum(RateMatchingPrecoder):
    """Layered-division baseline: portion vector frozen at multicast-only."""

    def _solve(self, q, demands):
        return baselines.solve_ldm(q, demands, params=self._params(),
                                   eps=self.eps, t_max=self.t_max)


class RmOum(RateMatchingPrecoder):
    """Orthogonal baseline: half-resource unicast and multicast designs."""

    def _solve(self, q, demands):
        self.design_ = baselines.OumDesign(q, demands, params=self._params(),
                                           eps=self.eps, t_max=self.t_max)
        return self.design_.report

    def predict(self, gains):
        gains = np.atleast_2d(np.asarray(gains))
        out = [self.design_.instantaneous_rates(g) for g in gains]
        return np.array([r for r, _ in out]), np.array([c for _, c in out])


ESTIMATORS = {
    baselines.SchemeId.GPI_RS_NOUM: GpiRsNoum,
    baselines.SchemeId.LDM_RM_NOUM: LdmRmNoum,
    baselines.SchemeId.RM_OUM: RmOum,
}
