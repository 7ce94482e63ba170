"""Fixed-point precoder solver on the nonlinear eigenvalue formulation.

The first-order stationarity condition of the rate-matching objective takes
the form B(f,v)^-1 A(f,v) f = lambda f for the stacked precoder and
E(f,v)^-1 D(f,v) v = lambda v for the portion vector, with lambda =
exp(-objective). The solver runs a generalized power iteration on both
blocks simultaneously, normalizing each to unit norm after every update.

All f-side matrices are block-diagonal with n_streams blocks of size N_t
that share the structure sum_k c_k gamma_k a_k a_k^H + d * sigma2/P * I, so
they are assembled and inverted per block (O(N_t^3 K) per iteration). The
v-side matrices are diagonal and inverted entrywise.
"""
from __future__ import annotations

import dataclasses

import numpy as np

from .objective import lse_min, objective_value, portions
from .quadforms import LOG2, DemandProfile, QuadFormSet

DIAG_FLOOR = 1e-12  # keeps D/E positive definite in degenerate corners


class NumericalBreakdownError(RuntimeError):
    """A KKT matrix lost positive definiteness or a linear solve failed."""


@dataclasses.dataclass
class SmoothingParams:
    alpha: float = 1e-2
    alpha_growth: float = 10.0
    max_escalations: int = 3

    def __post_init__(self):
        if self.alpha <= 0 or self.alpha_growth <= 1:
            raise ValueError("require alpha > 0 and alpha_growth > 1")


@dataclasses.dataclass
class SolverState:
    f: np.ndarray  # stacked precoder, ||f|| = 1
    v: np.ndarray  # portion vector, ||v|| = 1
    iteration: int = 0
    residual_f: float = np.inf
    residual_v: float = np.inf
    objective_trace: list = dataclasses.field(default_factory=list)


@dataclasses.dataclass
class SolverReport:
    converged: bool
    iterations: int
    final_objective: float
    kkt_residual: float
    alpha_used: float
    offered_uc: np.ndarray
    offered_mc: float
    f: np.ndarray
    v: np.ndarray
    trace: list = dataclasses.field(default_factory=list)


# ---------------------------------------------------------------------------
# block-coefficient representation of the stacked matrices


class BlockCoef:
    """A block-diagonal matrix sum_k coef[k, b] * rank1_k + ident * s2p * I."""

    def __init__(self, n_users, n_streams):
        self.coef = np.zeros((n_users, n_streams))
        self.ident = 0.0

    def add_quadform(self, user, mask_row, scale):
        self.coef[user] += scale * mask_row
        self.ident += scale

    def add(self, other: "BlockCoef", scale):
        self.coef += scale * other.coef
        self.ident += scale * other.ident

    def blocks(self, q: QuadFormSet) -> np.ndarray:
        """(n_streams, N_t, N_t) dense diagonal blocks."""
        out = np.einsum("kb,kij->bij", self.coef, q.rank1)
        out += (self.ident * q.sigma2_over_p) * np.eye(q.n_t)
        return out

    def dense(self, q: QuadFormSet) -> np.ndarray:
        """Full stacked matrix; for tests and diagnostics only."""
        from scipy.linalg import block_diag

        return block_diag(*self.blocks(q))

    def matvec(self, q: QuadFormSet, f_stacked) -> np.ndarray:
        f = q.split(f_stacked)
        out = np.einsum("bij,bj->bi", self.blocks(q), f)
        return out.ravel()


def softmax_weights(f_stacked, q: QuadFormSet, alpha: float) -> np.ndarray:
    """w_i = exp(-Rc_i/alpha) / sum_l exp(-Rc_l/alpha), min-shifted."""
    rates = q.rates_common(f_stacked)
    z = np.exp(-(rates - rates.min()) / alpha)
    return z / z.sum()


def build_la_lb(f_stacked, q: QuadFormSet, alpha: float):
    """Softmax-weighted sums of normalized common quadforms (the smoothed-min
    gradient pair); both satisfy f^H L f = 1 at the evaluation point."""
    w = softmax_weights(f_stacked, q, alpha)
    ac, bc, _, _ = q.quad_values(f_stacked)
    la = BlockCoef(q.n_users, q.n_streams)
    lb = BlockCoef(q.n_users, q.n_streams)
    for k in range(q.n_users):
        la.add_quadform(k, q.mask_c_num[k], w[k] / ac[k])
        lb.add_quadform(k, q.mask_c_den[k], w[k] / bc[k])
    return la, lb


def _scalars(f_stacked, v, q, demands, alpha):
    """Common per-state scalars shared by the KKT builders."""
    _, _, ap, bp = q.quad_values(f_stacked)
    r_priv = np.log2(ap / bp)
    p = portions(v)
    smin = lse_min(q.rates_common(f_stacked), alpha)
    c = p * smin  # c[:-1] = unicast portions, c[-1] = multicast
    res_uc = demands.r_target_uc - (r_priv + c[:-1])
    res_mc = demands.r_target_mc - c[-1]
    return ap, bp, r_priv, p, smin, c, res_uc, res_mc


def _prefactors(demands, res_uc, res_mc):
    lam_num = float(np.exp(-np.sum(res_uc**2)))
    lam_den = float(np.exp(demands.eta_mc * res_mc**2))
    return lam_num, lam_den


def build_kkt_f(f_stacked, v, q: QuadFormSet, demands: DemandProfile,
                alpha: float, include_prefactors: bool = False):
    """KKT matrix pair (A, B) for the precoder block, in factored form.

    Stationarity A f = lambda B f is equivalent to a zero gradient of the
    objective w.r.t. f. The positive scalar prefactors exp(-sum res_uc^2)
    and exp(eta*res_mc^2) cannot change a normalized iteration direction
    and are dropped unless requested (diagnostic path).
    """
    ap, bp, r_priv, p, smin, c, res_uc, res_mc = _scalars(f_stacked, v, q, demands, alpha)
    la, lb = build_la_lb(f_stacked, q, alpha)

    a_mat = BlockCoef(q.n_users, q.n_streams)
    b_mat = BlockCoef(q.n_users, q.n_streams)
    for j in range(q.n_users):
        a_mat.add_quadform(j, q.mask_p_num[j], demands.r_target_uc[j] / ap[j])
        a_mat.add_quadform(j, q.mask_p_den[j], (r_priv[j] + c[j]) / bp[j])
        b_mat.add_quadform(j, q.mask_p_den[j], demands.r_target_uc[j] / bp[j])
        b_mat.add_quadform(j, q.mask_p_num[j], (r_priv[j] + c[j]) / ap[j])
    s_target = float(p[:-1] @ demands.r_target_uc + demands.eta_mc * demands.r_target_mc * p[-1])
    s_offered = float(p[:-1] @ (c[:-1] + r_priv) + demands.eta_mc * p[-1] * c[-1])
    a_mat.add(la, s_target)
    a_mat.add(lb, s_offered)
    b_mat.add(lb, s_target)
    b_mat.add(la, s_offered)

    if include_prefactors:
        lam_num, lam_den = _prefactors(demands, res_uc, res_mc)
        a_mat.coef *= lam_num
        a_mat.ident *= lam_num
        b_mat.coef *= lam_den
        b_mat.ident *= lam_den
    return a_mat, b_mat


def build_kkt_v(f_stacked, v, q: QuadFormSet, demands: DemandProfile,
                alpha: float, include_prefactors: bool = False,
                diag_floor: float = DIAG_FLOOR):
    """KKT matrix pair (D, E) for the portion block; both are diagonal.

    Returns the diagonals as (K+1,) arrays. A small floor keeps both
    positive definite when a row degenerates (e.g. zero demands with a
    frozen multicast-only split).
    """
    _, _, r_priv, p, smin, c, res_uc, res_mc = _scalars(f_stacked, v, q, demands, alpha)
    v = np.asarray(v, dtype=float)
    nrm2 = float(v @ v)
    K = q.n_users

    d_diag = np.full(K + 1, np.sum((smin * p[:-1] + r_priv) * p[:-1]) / nrm2
                     + demands.eta_mc * smin * p[-1] ** 2 / nrm2)
    d_diag[:K] += demands.r_target_uc / nrm2
    d_diag[K] += demands.eta_mc * demands.r_target_mc / nrm2

    e_diag = np.full(K + 1, float(p[:-1] @ demands.r_target_uc) / nrm2
                     + demands.eta_mc * demands.r_target_mc * p[-1] / nrm2)
    e_diag[:K] += (smin * p[:-1] + r_priv) / nrm2
    e_diag[K] += demands.eta_mc * smin * p[-1] / nrm2

    d_diag += diag_floor
    e_diag += diag_floor
    if include_prefactors:
        lam_num, lam_den = _prefactors(demands, res_uc, res_mc)
        d_diag = d_diag * lam_num
        e_diag = e_diag * lam_den
    return d_diag, e_diag


# ---------------------------------------------------------------------------
# analytic gradients reconstructed from the KKT pairs (finite-difference
# checked in the test suite)


def grad_f_real(f_stacked, v, q, demands, alpha) -> np.ndarray:
    """Objective gradient w.r.t. stacked [Re(f); Im(f)] coordinates."""
    a_mat, b_mat = build_kkt_f(f_stacked, v, q, demands, alpha)
    gap = a_mat.matvec(q, f_stacked) - b_mat.matvec(q, f_stacked)
    wirtinger = -(2.0 / LOG2) * gap  # d obj / d conj(f)
    return np.concatenate([2 * wirtinger.real, 2 * wirtinger.imag])


def grad_v(f_stacked, v, q, demands, alpha) -> np.ndarray:
    """Objective gradient w.r.t. the (real) portion vector."""
    d_diag, e_diag = build_kkt_v(f_stacked, v, q, demands, alpha, diag_floor=0.0)
    smin = lse_min(q.rates_common(f_stacked), alpha)
    return -4.0 * smin * (d_diag - e_diag) * np.asarray(v, dtype=float)


# ---------------------------------------------------------------------------
# the iteration


def _normalize(x):
    nrm = np.linalg.norm(x)
    if not np.isfinite(nrm) or nrm == 0:
        raise NumericalBreakdownError("iterate collapsed to zero or non-finite norm")
    return x / nrm


def default_init(q: QuadFormSet):
    """Steered start: common block at the user-average direction, private
    blocks at each user's steering vector; uniform portions."""
    f = np.zeros(q.n_streams * q.n_t, dtype=complex)
    blocks = f.reshape(q.n_streams, q.n_t)
    blocks[0] = _normalize(q.steering.sum(axis=0))
    for k in range(q.n_users):
        blocks[k + 1] = _normalize(q.steering[k])
    v = np.ones(q.n_users + 1)
    return _normalize(f), _normalize(v)


def random_init(q: QuadFormSet, rng: np.random.Generator):
    dim = q.n_streams * q.n_t
    f = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v = np.abs(rng.standard_normal(q.n_users + 1))
    return _normalize(f), _normalize(v)


def _solve_blocks(b_mat: BlockCoef, q: QuadFormSet, y_stacked) -> np.ndarray:
    """x = B^-1 y exploiting the block-diagonal structure of B."""
    blocks = b_mat.blocks(q)
    y = q.split(y_stacked)
    try:
        x = np.linalg.solve(blocks, y[..., None])[..., 0]
    except np.linalg.LinAlgError as exc:
        raise NumericalBreakdownError(f"f-block linear solve failed: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise NumericalBreakdownError("non-finite f-block solve result")
    return x.ravel()


def gpi_step(state: SolverState, q: QuadFormSet, demands: DemandProfile,
             alpha: float, v_fixed: bool = False) -> SolverState:
    """One power-iteration update of both blocks from the shared old state."""
    a_mat, b_mat = build_kkt_f(state.f, state.v, q, demands, alpha)
    f_new = _normalize(_solve_blocks(b_mat, q, a_mat.matvec(q, state.f)))
    if v_fixed:
        v_new = state.v
    else:
        d_diag, e_diag = build_kkt_v(state.f, state.v, q, demands, alpha)
        if np.any(e_diag <= 0):
            raise NumericalBreakdownError("E diagonal lost positivity")
        v_new = _normalize(d_diag / e_diag * state.v)
    return SolverState(
        f=f_new,
        v=v_new,
        iteration=state.iteration + 1,
        residual_f=float(np.linalg.norm(f_new - state.f)),
        residual_v=float(np.linalg.norm(v_new - state.v)),
        objective_trace=state.objective_trace,
    )


def kkt_residual(f_stacked, v, q, demands, alpha) -> float:
    """||U^-1 W x - lambda x|| / ||x|| with the scalar prefactors retained."""
    a_mat, b_mat = build_kkt_f(f_stacked, v, q, demands, alpha, include_prefactors=True)
    d_diag, e_diag = build_kkt_v(f_stacked, v, q, demands, alpha, include_prefactors=True)
    lam = np.exp(-objective_value(f_stacked, v, q, demands, alpha))
    top = _solve_blocks(b_mat, q, a_mat.matvec(q, f_stacked)) - lam * f_stacked
    bottom = d_diag / e_diag * v - lam * v
    x_norm = np.sqrt(np.linalg.norm(f_stacked) ** 2 + np.linalg.norm(v) ** 2)
    return float(np.sqrt(np.linalg.norm(top) ** 2 + np.linalg.norm(bottom) ** 2) / x_norm)


def solve(q: QuadFormSet, demands: DemandProfile,
          params: SmoothingParams | None = None, init=None,
          eps: float = 1e-4, t_max: int = 1000, v_fixed: bool = False,
          collect_trace: bool = False) -> SolverReport:
    """Iterate to the leading NEPv eigenvector; escalate alpha on stall.

    `init` is an (f, v) pair; defaults to the steered start. With `v_fixed`
    the portion vector is frozen at its initial value (the layered-division
    baseline freezes it at the multicast-only split).
    """
    params = params or SmoothingParams()
    f, v = default_init(q) if init is None else (init[0].copy(), init[1].copy())
    f, v = _normalize(f), _normalize(v)
    alpha = params.alpha
    trace = []
    converged = False
    total_iters = 0
    state = SolverState(f=f, v=v)

    for escalation in range(params.max_escalations + 1):
        for _ in range(t_max):
            try:
                state = gpi_step(state, q, demands, alpha, v_fixed=v_fixed)
            except NumericalBreakdownError:
                break
            total_iters += 1
            obj = objective_value(state.f, state.v, q, demands, alpha)
            state.objective_trace.append(obj)
            if collect_trace:
                trace.append((total_iters, state.residual_f, state.residual_v,
                              obj, float(np.exp(-obj))))
            if state.residual_f < eps and state.residual_v < eps:
                converged = True
                break
        if converged:
            break
        alpha *= params.alpha_growth  # warm restart with a smoother surrogate

    p = portions(state.v)
    smin = lse_min(q.rates_common(state.f), alpha)
    offered_uc = q.rates_private(state.f) + p[:-1] * smin
    return SolverReport(
        converged=converged,
        iterations=total_iters,
        final_objective=objective_value(state.f, state.v, q, demands, alpha),
        kkt_residual=kkt_residual(state.f, state.v, q, demands, alpha),
        alpha_used=alpha,
        offered_uc=offered_uc,
        offered_mc=float(p[-1] * smin),
        f=state.f,
        v=state.v,
        trace=trace,
    )
