"""Reference schemes: layered-division and orthogonal unicast/multicast."""
from __future__ import annotations

import enum

import numpy as np

from .objective import lse_min
from .quadforms import DemandProfile, QuadFormSet
from .solver import (
    BlockCoef,
    NumericalBreakdownError,
    SmoothingParams,
    SolverReport,
    _normalize,
    _solve_blocks,
    build_la_lb,
    default_init,
    solve,
)


class SchemeId(enum.Enum):
    GPI_RS_NOUM = "gpi-rs"
    LDM_RM_NOUM = "ldm"
    RM_OUM = "oum"


def ldm_portion_vector(n_users: int) -> np.ndarray:
    """Multicast-only split: the common stream carries no unicast portions."""
    v = np.zeros(n_users + 1)
    v[-1] = 1.0
    return v


def solve_ldm(q: QuadFormSet, demands: DemandProfile,
              params: SmoothingParams | None = None, init=None,
              eps: float = 1e-4, t_max: int = 1000,
              collect_trace: bool = False) -> SolverReport:
    """Layered-division baseline: the full solver with the portion vector
    frozen at the multicast-only configuration."""
    f0 = default_init(q)[0] if init is None else init[0]
    return solve(q, demands, params=params, init=(f0, ldm_portion_vector(q.n_users)),
                 eps=eps, t_max=t_max, v_fixed=True, collect_trace=collect_trace)


# ---------------------------------------------------------------------------
# orthogonal baseline: unicast and multicast each get half the resource


def multicast_quadforms(q: QuadFormSet) -> QuadFormSet:
    """Single-stream, interference-free quadforms over an N_t precoder."""
    q_mc = QuadFormSet(q.steering, q.gammas, q.sigma2_over_p, n_streams=1)
    q_mc.mask_c_num[:] = 1.0
    q_mc.mask_c_den[:] = 0.0
    return q_mc


def _unicast_kkt(f, q, targets):
    """KKT pair for private-only matching of targets to 0.5 * private rate."""
    _, _, ap, bp = q.quad_values(f)
    r_priv = np.log2(ap / bp)
    a_mat = BlockCoef(q.n_users, q.n_streams)
    b_mat = BlockCoef(q.n_users, q.n_streams)
    for j in range(q.n_users):
        a_mat.add_quadform(j, q.mask_p_num[j], targets[j] / ap[j])
        a_mat.add_quadform(j, q.mask_p_den[j], 0.5 * r_priv[j] / bp[j])
        b_mat.add_quadform(j, q.mask_p_den[j], targets[j] / bp[j])
        b_mat.add_quadform(j, q.mask_p_num[j], 0.5 * r_priv[j] / ap[j])
    return a_mat, b_mat


def _multicast_kkt(f, q_mc, target, alpha):
    """KKT pair for matching target to 0.5 * smoothed min single-stream rate."""
    smin = lse_min(q_mc.rates_common(f), alpha)
    la, lb = build_la_lb(f, q_mc, alpha)
    a_mat = BlockCoef(q_mc.n_users, 1)
    b_mat = BlockCoef(q_mc.n_users, 1)
    a_mat.add(la, target)
    a_mat.add(lb, 0.5 * smin)
    b_mat.add(lb, target)
    b_mat.add(la, 0.5 * smin)
    return a_mat, b_mat


def _phase_residual(f, q, a_mat, b_mat, obj):
    """||B^-1 A f - lambda f|| with lambda = exp(-obj), prefactors applied
    to the A side (the mirrored exp(+obj) on B is equivalent up to scale)."""
    lam = float(np.exp(-obj))
    a_mat.coef *= lam
    a_mat.ident *= lam
    return float(np.linalg.norm(_solve_blocks(b_mat, q, a_mat.matvec(q, f)) - lam * f))


class OumDesign:
    """Orthogonal baseline: independent half-resource unicast and multicast
    designs, each solved with the reduced power iteration."""

    def __init__(self, q: QuadFormSet, demands: DemandProfile,
                 params: SmoothingParams | None = None,
                 eps: float = 1e-4, t_max: int = 1000):
        self.q = q
        params = params or SmoothingParams()

        # unicast phase: common block starts (and provably stays) zero
        f, _ = default_init(q)
        blocks = q.split(f.copy())
        blocks[0] = 0.0
        f = _normalize(blocks.ravel())
        targets = demands.r_target_uc
        it_uc = 0
        conv_uc = False
        for _ in range(t_max):
            a_mat, b_mat = _unicast_kkt(f, q, targets)
            f_new = _normalize(_solve_blocks(b_mat, q, a_mat.matvec(q, f)))
            it_uc += 1
            step = np.linalg.norm(f_new - f)
            f = f_new
            if step < eps:
                conv_uc = True
                break
        self.f_uc = f
        self.offered_uc = 0.5 * q.rates_private(f)
        obj_uc = float(np.sum((targets - self.offered_uc) ** 2))
        kkt_uc = _phase_residual(f, q, *_unicast_kkt(f, q, targets), obj_uc)

        # multicast phase: single interference-free stream
        q_mc = multicast_quadforms(q)
        g = _normalize(q_mc.steering.sum(axis=0).astype(complex))
        alpha = params.alpha
        it_mc = 0
        conv_mc = False
        for _ in range(params.max_escalations + 1):
            for _ in range(t_max):
                a_mat, b_mat = _multicast_kkt(g, q_mc, demands.r_target_mc, alpha)
                try:
                    g_new = _normalize(_solve_blocks(b_mat, q_mc, a_mat.matvec(q_mc, g)))
                except NumericalBreakdownError:
                    break
                it_mc += 1
                step = np.linalg.norm(g_new - g)
                g = g_new
                if step < eps:
                    conv_mc = True
                    break
            if conv_mc:
                break
            alpha *= params.alpha_growth
        self.f_mc = g
        self._alpha_mc = alpha
        self.offered_mc = 0.5 * lse_min(q_mc.rates_common(g), alpha)
        obj_mc = float((demands.r_target_mc - self.offered_mc) ** 2)
        kkt_mc = _phase_residual(
            g, q_mc, *_multicast_kkt(g, q_mc, demands.r_target_mc, alpha), obj_mc)

        self.report = SolverReport(
            converged=conv_uc and conv_mc,
            iterations=max(it_uc, it_mc),
            final_objective=obj_uc + demands.eta_mc * obj_mc,
            kkt_residual=max(kkt_uc, kkt_mc),
            alpha_used=alpha,
            offered_uc=self.offered_uc,
            offered_mc=self.offered_mc,
            f=self.f_uc,
            v=ldm_portion_vector(q.n_users),
        )

    def instantaneous_rates(self, gains):
        """Achieved half-resource rates for one fading realization."""
        g2 = np.abs(np.asarray(gains)) ** 2
        r_uc = 0.5 * self.q.with_gains(g2).rates_private(self.f_uc)
        q_mc = multicast_quadforms(self.q).with_gains(g2)
        c_mc = 0.5 * float(np.min(q_mc.rates_common(self.f_mc)))
        return r_uc, c_mc


def solve_oum(q: QuadFormSet, demands: DemandProfile,
              params: SmoothingParams | None = None,
              eps: float = 1e-4, t_max: int = 1000) -> SolverReport:
    return OumDesign(q, demands, params=params, eps=eps, t_max=t_max).report
