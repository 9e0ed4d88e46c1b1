import numpy as np
import pytest

from locopush.solvers import (EvaluationError, NLPProblem, QPProblem,
                              check_nlp_kkt, check_qp_kkt, inequality_rows,
                              solve_nlp, solve_qp)
from oracles import qp_enumeration_oracle


def test_projection_onto_hyperplane():
    n = 5
    A_eq = np.zeros((1, n))
    A_eq[0, 0] = 1.0
    p = QPProblem(H=2 * np.eye(n), f=np.zeros(n), A_eq=A_eq, b_eq=[1.0])
    x, rep, duals = solve_qp(p)
    assert rep.status == "optimal"
    np.testing.assert_allclose(x, [1, 0, 0, 0, 0], atol=1e-10)
    assert check_qp_kkt(p, x, duals, tol=1e-8)["pass"]


def test_unconstrained_matches_normal_equations():
    rng = np.random.default_rng(20)
    for _ in range(20):
        n = rng.integers(2, 8)
        M = rng.standard_normal((n, n))
        H = M @ M.T + n * np.eye(n)
        f = rng.standard_normal(n)
        x, rep, duals = solve_qp(QPProblem(H=H, f=f))
        assert rep.status == "optimal"
        np.testing.assert_allclose(x, -np.linalg.solve(H, f), atol=1e-10)


def test_box_bound_activation():
    # min (x-2)^2 with x <= 1 -> x = 1, multiplier 2
    p = QPProblem(H=np.array([[2.0]]), f=np.array([-4.0]),
                  lb=np.array([-np.inf]), ub=np.array([1.0]))
    x, rep, duals = solve_qp(p)
    assert rep.status == "optimal"
    np.testing.assert_allclose(x, [1.0], atol=1e-12)
    assert check_qp_kkt(p, x, duals)["pass"]


def test_infeasible_reports_constraint():
    p = QPProblem(H=np.eye(1), f=np.zeros(1),
                  A_in=np.array([[1.0], [-1.0]]),
                  lb_in=np.array([1.0, 0.0]),
                  ub_in=np.array([np.inf, np.inf]))
    x, rep, duals = solve_qp(p)
    assert rep.status == "infeasible"
    assert rep.message


def _random_qp(rng):
    n = int(rng.integers(2, 7))
    M = rng.standard_normal((n, n))
    H = M @ M.T + (0.5 + n) * np.eye(n)
    f = rng.standard_normal(n) * 2
    m = int(rng.integers(1, 9 - 2))
    A = rng.standard_normal((m, n))
    # anchor the inequalities around a random feasible point
    x_feas = rng.standard_normal(n) * 0.5
    lb_in = A @ x_feas - rng.uniform(0.05, 1.5, m)
    lb = x_feas - rng.uniform(0.3, 2.0, n)
    ub = x_feas + rng.uniform(0.3, 2.0, n)
    return QPProblem(H=H, f=f, A_in=A, lb_in=lb_in,
                     ub_in=np.full(m, np.inf), lb=lb, ub=ub)


def test_random_qps_match_enumeration_oracle():
    rng = np.random.default_rng(21)
    n_checked = 0
    for _ in range(220):
        p = _random_qp(rng)
        x, rep, duals = solve_qp(p, tol=1e-9)
        C, d, _ = inequality_rows(p)
        x_ref, obj_ref = qp_enumeration_oracle(p.H, p.f, None, None, C, d)
        assert rep.status == "optimal"
        assert x_ref is not None
        np.testing.assert_allclose(x, x_ref, atol=1e-8)
        kkt = check_qp_kkt(p, x, duals, tol=1e-8)
        assert kkt["pass"], kkt
        n_checked += 1
    assert n_checked >= 200


def test_qp_deterministic():
    rng = np.random.default_rng(22)
    p = _random_qp(rng)
    x1, _, _ = solve_qp(p)
    x2, _, _ = solve_qp(QPProblem(H=p.H.copy(), f=p.f.copy(),
                                  A_in=p.A_in.copy(), lb_in=p.lb_in.copy(),
                                  ub_in=p.ub_in.copy(), lb=p.lb.copy(),
                                  ub=p.ub.copy()))
    assert np.array_equal(x1, x2)


def test_qp_with_equalities_and_inequalities():
    rng = np.random.default_rng(23)
    for _ in range(50):
        n = int(rng.integers(3, 7))
        M = rng.standard_normal((n, n))
        H = M @ M.T + n * np.eye(n)
        f = rng.standard_normal(n)
        x_feas = rng.standard_normal(n) * 0.3
        A_eq = rng.standard_normal((1, n))
        b_eq = A_eq @ x_feas
        m = int(rng.integers(1, 5))
        A = rng.standard_normal((m, n))
        lb_in = A @ x_feas - rng.uniform(0.1, 1.0, m)
        p = QPProblem(H=H, f=f, A_eq=A_eq, b_eq=b_eq, A_in=A, lb_in=lb_in)
        x, rep, duals = solve_qp(p, tol=1e-9)
        assert rep.status == "optimal"
        C, d, _ = inequality_rows(p)
        x_ref, _ = qp_enumeration_oracle(H, f, A_eq, b_eq, C, d)
        np.testing.assert_allclose(x, x_ref, atol=1e-8)
        assert check_qp_kkt(p, x, duals)["pass"]


def test_nlp_rosenbrock():
    def f(x):
        return (1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2

    def g(x):
        return np.array([
            -2 * (1 - x[0]) - 400 * x[0] * (x[1] - x[0] ** 2),
            200 * (x[1] - x[0] ** 2)])

    p = NLPProblem(n=2, objective=f, gradient=g, x0=[-1.2, 1.0])
    x, rep, duals = solve_nlp(p, tol=1e-8)
    assert rep.status == "optimal"
    np.testing.assert_allclose(x, [1.0, 1.0], atol=1e-6)


def test_nlp_equality_constrained():
    # min x^2 + y^2 s.t. xy = 1 -> |x| = |y| = 1
    p = NLPProblem(
        n=2,
        objective=lambda x: x[0] ** 2 + x[1] ** 2,
        gradient=lambda x: 2 * x,
        c_eq=lambda x: np.array([x[0] * x[1] - 1.0]),
        jac_eq=lambda x: np.array([[x[1], x[0]]]),
        x0=[1.5, 0.5])
    x, rep, duals = solve_nlp(p, tol=1e-8)
    assert rep.status == "optimal"
    np.testing.assert_allclose(np.abs(x), [1.0, 1.0], atol=1e-6)
    assert check_nlp_kkt(p, x, duals, tol=1e-6)["pass"]


def test_nlp_inequality_active():
    # min (x+1)^2 s.t. x >= 0 -> x = 0 with multiplier 2
    p = NLPProblem(
        n=1,
        objective=lambda x: (x[0] + 1.0) ** 2,
        gradient=lambda x: np.array([2 * (x[0] + 1.0)]),
        c_in=lambda x: np.array([x[0]]),
        jac_in=lambda x: np.array([[1.0]]),
        x0=[2.0])
    x, rep, duals = solve_nlp(p, tol=1e-8)
    assert rep.status == "optimal"
    np.testing.assert_allclose(x, [0.0], atol=1e-8)


def test_nlp_infeasible_pair():
    p = NLPProblem(
        n=1,
        objective=lambda x: float(x[0] ** 2),
        gradient=lambda x: 2 * x,
        c_in=lambda x: np.array([x[0] - 1.0, -x[0]]),
        jac_in=lambda x: np.array([[1.0], [-1.0]]),
        x0=[0.5])
    x, rep, duals = solve_nlp(p, tol=1e-6, max_iter=60)
    assert rep.status == "infeasible"


def test_nlp_crossed_bounds_infeasible():
    p = NLPProblem(n=1, objective=lambda x: float(x[0] ** 2),
                   x0=[0.5], lb=[1.0], ub=[0.0])
    x, rep, duals = solve_nlp(p)
    assert rep.status == "infeasible"


def test_nlp_nan_raises():
    p = NLPProblem(n=1, objective=lambda x: float("nan"), x0=[0.0])
    with pytest.raises(EvaluationError):
        solve_nlp(p)


def test_nlp_fd_fallback_warns():
    p = NLPProblem(n=2, objective=lambda x: float((x[0] - 1) ** 2 + x[1] ** 2),
                   x0=[3.0, -2.0])
    with pytest.warns(RuntimeWarning):
        x, rep, duals = solve_nlp(p, tol=1e-5)
    assert rep.status == "optimal"
    np.testing.assert_allclose(x, [1.0, 0.0], atol=1e-4)


def test_nlp_deterministic():
    def make():
        return NLPProblem(
            n=2,
            objective=lambda x: (x[0] - 2) ** 2 + (x[1] + 1) ** 2,
            gradient=lambda x: np.array([2 * (x[0] - 2), 2 * (x[1] + 1)]),
            c_in=lambda x: np.array([x[0] + x[1]]),
            jac_in=lambda x: np.array([[1.0, 1.0]]),
            x0=[0.0, 0.0])
    x1, _, _ = solve_nlp(make())
    x2, _, _ = solve_nlp(make())
    assert np.array_equal(x1, x2)
