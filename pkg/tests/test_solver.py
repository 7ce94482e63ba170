import numpy as np
import pytest

from ratematch import solver
from ratematch.objective import objective_value, portions
from ratematch.quadforms import DemandProfile, QuadFormSet
from conftest import make_problem, random_state

ALPHA = 0.01


def fd_grad_f(f, v, q, d, alpha, h=1e-6):
    """Central finite differences in stacked [Re(f); Im(f)] coordinates."""
    x0 = np.concatenate([f.real, f.imag])
    n = len(f)

    def obj(x):
        return objective_value(x[:n] + 1j * x[n:], v, q, d, alpha)

    g = np.zeros_like(x0)
    for i in range(len(x0)):
        xp, xm = x0.copy(), x0.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (obj(xp) - obj(xm)) / (2 * h)
    return g


def fd_grad_v(f, v, q, d, alpha, h=1e-6):
    g = np.zeros_like(v)
    for i in range(len(v)):
        vp, vm = v.copy(), v.copy()
        vp[i] += h
        vm[i] -= h
        g[i] = (objective_value(f, vp, q, d, alpha)
                - objective_value(f, vm, q, d, alpha)) / (2 * h)
    return g


def rel_err(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b))


@pytest.mark.parametrize("n_t,k", [(2, 2), (4, 3), (9, 4)])
def test_gradient_f_matches_fd(n_t, k):
    rng = np.random.default_rng(100 * n_t + k)
    q, d = make_problem(n_t, k, rng)
    for _ in range(5):
        f, v = random_state(q, rng)
        assert rel_err(solver.grad_f_real(f, v, q, d, ALPHA),
                       fd_grad_f(f, v, q, d, ALPHA)) < 1e-4


@pytest.mark.parametrize("n_t,k", [(2, 2), (4, 3), (9, 4)])
def test_gradient_v_matches_fd(n_t, k):
    rng = np.random.default_rng(200 * n_t + k)
    q, d = make_problem(n_t, k, rng)
    for _ in range(5):
        f, v = random_state(q, rng)
        assert rel_err(solver.grad_v(f, v, q, d, ALPHA),
                       fd_grad_v(f, v, q, d, ALPHA)) < 1e-4


def test_rayleigh_identity(rng):
    # f^H (A - B) f == 0 identically: the KKT pair shares its Rayleigh
    # quotient, which is what makes every fixed point a unit-eigenvalue
    # eigenvector. Same for the diagonal pair.
    q, d = make_problem(4, 3, rng)
    for _ in range(10):
        f, v = random_state(q, rng)
        a_mat, b_mat = solver.build_kkt_f(f, v, q, d, ALPHA)
        gap = (f.conj() @ a_mat.matvec(q, f) - f.conj() @ b_mat.matvec(q, f))
        assert abs(gap) < 1e-10
        dd, ee = solver.build_kkt_v(f, v, q, d, ALPHA, diag_floor=0.0)
        assert abs(v @ (dd * v) - v @ (ee * v)) < 1e-10


def test_prefactors_do_not_change_direction(rng):
    q, d = make_problem(3, 3, rng)
    f, v = random_state(q, rng)
    a0, b0 = solver.build_kkt_f(f, v, q, d, ALPHA)
    a1, b1 = solver.build_kkt_f(f, v, q, d, ALPHA, include_prefactors=True)
    x0 = solver._solve_blocks(b0, q, a0.matvec(q, f))
    x1 = solver._solve_blocks(b1, q, a1.matvec(q, f))
    np.testing.assert_allclose(x0 / np.linalg.norm(x0),
                               x1 / np.linalg.norm(x1), atol=1e-10)


def test_block_solve_matches_dense(rng):
    q, d = make_problem(3, 2, rng)
    f, v = random_state(q, rng)
    _, b_mat = solver.build_kkt_f(f, v, q, d, ALPHA)
    y = random_state(q, rng)[0]
    x = solver._solve_blocks(b_mat, q, y)
    np.testing.assert_allclose(b_mat.dense(q) @ x, y, atol=1e-10)


def test_kkt_blocks_positive_definite(rng):
    q, d = make_problem(3, 3, rng)
    for _ in range(5):
        f, v = random_state(q, rng)
        for mat in solver.build_kkt_f(f, v, q, d, ALPHA):
            for blk in mat.blocks(q):
                assert np.linalg.eigvalsh(blk).min() > 0
        for diag in solver.build_kkt_v(f, v, q, d, ALPHA):
            assert np.all(diag > 0)


def test_solve_small_instance_converges(rng):
    q, d = make_problem(4, 3, rng)
    rep = solver.solve(q, d, collect_trace=True)
    assert rep.converged
    assert rep.final_objective >= 0
    assert abs(np.linalg.norm(rep.f) - 1) < 1e-12
    assert abs(np.linalg.norm(rep.v) - 1) < 1e-12
    # eigenvalue column of the trace is exp(-objective) throughout
    for _, _, _, obj, lam in rep.trace:
        assert lam == pytest.approx(np.exp(-obj), abs=1e-12)


def test_solve_objective_decreases_broadly(rng):
    q, d = make_problem(4, 3, rng)
    rep = solver.solve(q, d, collect_trace=True)
    objs = [t[3] for t in rep.trace]
    assert objs[-1] < objs[0]


def test_v_fixed_freezes_portions(rng):
    q, d = make_problem(3, 2, rng)
    f0, _ = solver.default_init(q)
    v0 = np.array([0.0, 0.0, 1.0])
    rep = solver.solve(q, d, init=(f0, v0), v_fixed=True)
    np.testing.assert_array_equal(rep.v, v0)


def test_fixed_point_is_unit_eigenvector(rng):
    # after convergence B^-1 A f ~ f and D/E * v ~ v
    q, d = make_problem(4, 3, rng)
    rep = solver.solve(q, d, eps=1e-8, t_max=3000)
    a_mat, b_mat = solver.build_kkt_f(rep.f, rep.v, q, d, rep.alpha_used)
    fn = solver._solve_blocks(b_mat, q, a_mat.matvec(q, rep.f))
    assert np.linalg.norm(fn / np.linalg.norm(fn) - rep.f) < 1e-5
    dd, ee = solver.build_kkt_v(rep.f, rep.v, q, d, rep.alpha_used)
    vn = dd / ee * rep.v
    assert np.linalg.norm(vn / np.linalg.norm(vn) - rep.v) < 1e-5


def test_default_init_shapes(rng):
    q, _ = make_problem(5, 3, rng)
    f, v = solver.default_init(q)
    assert f.shape == (q.n_streams * q.n_t,)
    assert v.shape == (q.n_users + 1,)
    assert np.linalg.norm(f) == pytest.approx(1.0)
    assert np.linalg.norm(v) == pytest.approx(1.0)


def test_smoothing_params_validation():
    with pytest.raises(ValueError):
        solver.SmoothingParams(alpha=0.0)
    with pytest.raises(ValueError):
        solver.SmoothingParams(alpha_growth=1.0)
