"""Per-user quadratic forms over the stacked precoder and rate evaluation.

Every matrix in the formulation is block-diagonal with `n_streams` blocks of
size N_t, and every block is sigma2/P * I plus a subset of the per-user
rank-one terms gamma_k a_k a_k^H. A QuadFormSet therefore stores only the
steering vectors, gains and inclusion masks; dense blocks are materialized
on demand by the solver.
"""
from __future__ import annotations

import dataclasses

import numpy as np

LOG2 = np.log(2.0)


@dataclasses.dataclass(frozen=True)
class DemandProfile:
    """Unicast targets (bps/Hz per user), multicast target, multicast weight."""

    r_target_uc: np.ndarray
    r_target_mc: float
    eta_mc: float

    def __post_init__(self):
        object.__setattr__(self, "r_target_uc", np.asarray(self.r_target_uc, dtype=float))
        if np.any(self.r_target_uc < 0) or self.r_target_mc < 0:
            raise ValueError("traffic demands must be non-negative")
        if self.eta_mc <= 0:
            raise ValueError("eta_mc must be positive")

    @classmethod
    def with_default_weight(cls, r_target_uc, r_target_mc):
        """Weight = mean unicast demand over multicast demand."""
        uc = np.asarray(r_target_uc, dtype=float)
        return cls(uc, float(r_target_mc), float(np.mean(uc) / r_target_mc))


class QuadFormSet:
    """Quadratic-form matrices {Ac_k, Bc_k, Ap_k, Bp_k} in factored form.

    Block b of each matrix is sum_k mask[k, b] * gamma_k a_k a_k^H
    + sigma2/P * I; the four mask families encode which rank-one terms each
    matrix keeps (common/private numerator/denominator).
    """

    def __init__(self, steering, gammas, sigma2_over_p, n_streams=None):
        self.steering = np.atleast_2d(np.asarray(steering, dtype=complex))
        self.gammas = np.asarray(gammas, dtype=float)
        if not np.all(np.isfinite(self.gammas)) or not np.all(np.isfinite(self.steering)):
            raise ValueError("non-finite channel statistics")
        if np.any(self.gammas <= 0):
            raise ValueError("gammas must be positive")
        self.sigma2_over_p = float(sigma2_over_p)
        self.n_users, self.n_t = self.steering.shape
        self.n_streams = self.n_users + 1 if n_streams is None else n_streams

        K, S = self.n_users, self.n_streams
        cols = np.arange(S)
        self.mask_c_num = np.ones((K, S))
        self.mask_c_den = np.ones((K, S)) * (cols != 0)
        self.mask_p_num = self.mask_c_den.copy()
        self.mask_p_den = np.array(
            [(cols != 0) & (cols != k + 1) for k in range(K)], dtype=float
        )
        self._rank1 = None

    @classmethod
    def from_stats(cls, stats, config):
        return cls(
            steering=[s.array_response for s in stats],
            gammas=[s.gamma for s in stats],
            sigma2_over_p=config.sigma2_over_p,
        )

    def with_gains(self, gains2) -> "QuadFormSet":
        """Same geometry with the average powers replaced (e.g. by |g_k|^2)."""
        return QuadFormSet(self.steering, gains2, self.sigma2_over_p, self.n_streams)

    @property
    def rank1(self) -> np.ndarray:
        """(K, N_t, N_t) array of gamma_k a_k a_k^H."""
        if self._rank1 is None:
            a = self.steering
            self._rank1 = self.gammas[:, None, None] * (a[:, :, None] * a.conj()[:, None, :])
        return self._rank1

    # -- scalar evaluation path: O(N_t K S) per call ------------------------

    def split(self, f_stacked) -> np.ndarray:
        """Stacked precoder as (n_streams, N_t) blocks."""
        f = np.asarray(f_stacked, dtype=complex).reshape(self.n_streams, self.n_t)
        return f

    def stream_powers(self, f_stacked) -> np.ndarray:
        """S[k, b] = gamma_k |a_k^H f_b|^2."""
        f = self.split(f_stacked)
        g = self.steering.conj() @ f.T  # (K, n_streams)
        return self.gammas[:, None] * np.abs(g) ** 2

    def quad_values(self, f_stacked):
        """The four quadratic forms f^H M f per user, as (K,) arrays.

        Returns (ac, bc, ap, bp). The sigma2/P identity term scales with
        ||f||^2, which makes all rate ratios exactly power-scale invariant.
        """
        powers = self.stream_powers(f_stacked)
        noise = self.sigma2_over_p * float(np.vdot(f_stacked, f_stacked).real)
        ac = np.sum(powers * self.mask_c_num, axis=1) + noise
        bc = np.sum(powers * self.mask_c_den, axis=1) + noise
        ap = np.sum(powers * self.mask_p_num, axis=1) + noise
        bp = np.sum(powers * self.mask_p_den, axis=1) + noise
        return ac, bc, ap, bp

    def rates_common(self, f_stacked) -> np.ndarray:
        ac, bc, _, _ = self.quad_values(f_stacked)
        return np.log2(ac / bc)

    def rates_private(self, f_stacked) -> np.ndarray:
        _, _, ap, bp = self.quad_values(f_stacked)
        return np.log2(ap / bp)

    # -- dense path, used only where the solver and tests need matrices -----

    def _dense(self, mask_row, user) -> np.ndarray:
        K1, N = self.n_streams, self.n_t
        out = np.zeros((K1 * N, K1 * N), dtype=complex)
        for b in range(K1):
            blk = self.sigma2_over_p * np.eye(N) + mask_row[b] * self.rank1[user]
            out[b * N:(b + 1) * N, b * N:(b + 1) * N] = blk
        return out

    def dense_ac(self, k):
        return self._dense(self.mask_c_num[k], k)

    def dense_bc(self, k):
        return self._dense(self.mask_c_den[k], k)

    def dense_ap(self, k):
        return self._dense(self.mask_p_num[k], k)

    def dense_bp(self, k):
        return self._dense(self.mask_p_den[k], k)


def build_quadforms(stats, config) -> QuadFormSet:
    return QuadFormSet.from_stats(stats, config)


def rate_common(k, f_stacked, q: QuadFormSet) -> float:
    return float(q.rates_common(f_stacked)[k])


def rate_private(k, f_stacked, q: QuadFormSet) -> float:
    return float(q.rates_private(f_stacked)[k])


def instantaneous_rates(f_stacked, portions, gains, q: QuadFormSet):
    """Achieved rates for one fading realization.

    The statistical gains gamma_k are replaced by |g_k|^2 and the common
    rate is the true minimum over users (not the smoothed surrogate).
    Returns (per-user unicast rates R_k, multicast rate C_mc).
    """
    q_ins = q.with_gains(np.abs(np.asarray(gains)) ** 2)
    c_tot = float(np.min(q_ins.rates_common(f_stacked)))
    r_priv = q_ins.rates_private(f_stacked)
    portions = np.asarray(portions, dtype=float)
    r_uc = portions[:-1] * c_tot + r_priv
    return r_uc, portions[-1] * c_tot
