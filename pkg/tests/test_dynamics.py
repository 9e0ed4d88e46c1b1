import numpy as np
import pytest

from locopush.dynamics import (ControlInput, EulerSingularityError,
                               ObjectParams, UnifiedState, build_state_space,
                               discretize, euler_rate_map, object_friction,
                               GRAV, V_O, W_O)
from locopush.kinematics import BasePose, forward_kinematics
from conftest import random_configuration
from oracles import unified_derivative_oracle


def random_state_and_points(rng, model):
    p_c, theta, q = random_configuration(rng, model, margin=0.1)
    theta[1] = np.clip(theta[1], -0.8, 0.8)
    pts = forward_kinematics(model, BasePose(p_c, theta), q)
    x = UnifiedState(
        theta_c=theta, p_c=p_c,
        omega_c=rng.uniform(-1, 1, 3), pdot_c=rng.uniform(-1, 1, 3),
        theta_o=[0.0, 0.0, rng.uniform(-np.pi, np.pi)],
        p_o=p_c + [rng.uniform(0.3, 0.8), rng.uniform(-0.2, 0.2), 0.25],
        omega_o=[0.0, 0.0, rng.uniform(-1, 1)],
        pdot_o=rng.uniform(-1, 1, 3))
    u = ControlInput(rng.uniform(-50, 50, 16))
    return x, u, pts


def test_euler_rate_map_identity():
    np.testing.assert_array_equal(euler_rate_map(np.zeros(3)), np.eye(3))


def test_euler_rate_map_yaw_quarter_turn():
    S = euler_rate_map(np.array([0.0, 0.0, np.pi / 2]))
    np.testing.assert_allclose(
        S, [[0, -1, 0], [1, 0, 0], [0, 0, 1]], atol=1e-15)


def test_euler_rate_map_invertible():
    rng = np.random.default_rng(12)
    for _ in range(50):
        theta = rng.uniform(-1.0, 1.0, 3)
        S = euler_rate_map(theta)
        np.testing.assert_allclose(S @ np.linalg.inv(S), np.eye(3),
                                   atol=1e-12)


def test_euler_rate_map_singularity():
    with pytest.raises(EulerSingularityError):
        euler_rate_map(np.array([0.0, np.pi / 2, 0.0]))


def test_object_friction_values():
    p = ObjectParams(l=0.5, w=0.5, h=0.5, m_o=10.0, mu_g=0.5)
    np.testing.assert_allclose(object_friction(p, 0.0), [49.05, 0, 0],
                               atol=1e-12)
    np.testing.assert_allclose(object_friction(p, np.pi / 2), [0, 49.05, 0],
                               atol=1e-12)
    tiny = ObjectParams(l=0.5, w=0.5, h=0.5, m_o=10.0, mu_g=1e-12)
    np.testing.assert_allclose(object_friction(tiny, 0.3), np.zeros(3),
                               atol=1e-9)


def test_state_space_matches_newton_euler_oracle(model, box10):
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(1000):
        x, u, pts = random_state_and_points(rng, model)
        ss = build_state_space(model, box10, x, pts)
        xv = x.as_vector()
        got = ss.A @ xv + ss.B @ u.vec
        ref = unified_derivative_oracle(model, box10, xv, u.vec,
                                        pts.p_h, pts.p_f)
        err = np.max(np.abs(got - ref))
        worst = max(worst, err / (1.0 + np.max(np.abs(ref))))
    assert worst <= 1e-9


def test_free_fall_and_friction_structure(model, box10):
    x = UnifiedState(p_c=[0, 0, 0.55], p_o=[0.6, 0, 0.25])
    pts = forward_kinematics(model, BasePose(x.p_c, x.theta_c),
                             model.nominal_q())
    ss = build_state_space(model, box10, x, pts)
    xdot = ss.A @ x.as_vector()
    np.testing.assert_allclose(xdot[9:12], [0, 0, -9.81], atol=1e-12)
    # object x row shows only the kinetic friction pull, z row empty
    np.testing.assert_allclose(xdot[21], -box10.mu_g * 9.81, atol=1e-12)
    assert xdot[23] == 0.0


def test_object_z_acceleration_always_zero(model, box10):
    rng = np.random.default_rng(14)
    for _ in range(50):
        x, u, pts = random_state_and_points(rng, model)
        ss = build_state_space(model, box10, x, pts)
        assert np.all(ss.B[V_O, :][2] == 0.0)
        assert abs((ss.A @ x.as_vector() + ss.B @ u.vec)[23]) == 0.0


def test_gravity_rows_fixed_point(model, box10):
    rng = np.random.default_rng(15)
    x, u, pts = random_state_and_points(rng, model)
    ss = build_state_space(model, box10, x, pts)
    assert np.all(ss.A[GRAV, :] == 0.0)
    assert np.all(ss.B[GRAV, :] == 0.0)


def test_friction_moment_vanishes(model):
    rng = np.random.default_rng(16)
    x, u, pts = random_state_and_points(rng, model)
    flat = ObjectParams(l=0.5, w=0.5, h=1e-9, m_o=10.0, mu_g=0.5)
    ss = build_state_space(model, flat, x, pts)
    assert np.max(np.abs(ss.A[W_O, GRAV])) < 1e-6
    slick = ObjectParams(l=0.5, w=0.5, h=0.5, m_o=10.0, mu_g=1e-9)
    ss = build_state_space(model, slick, x, pts)
    assert np.max(np.abs(ss.A[W_O, GRAV])) < 1e-6


def test_discretize_identities(model, box10):
    rng = np.random.default_rng(17)
    x, u, pts = random_state_and_points(rng, model)
    ss = build_state_space(model, box10, x, pts)
    A_d, B_d = discretize(ss, 0.0)
    np.testing.assert_array_equal(A_d, np.eye(27))
    np.testing.assert_array_equal(B_d, np.zeros((27, 16)))
    # one discrete step == explicit Euler with the continuous model (up to
    # float association order)
    A_d, B_d = discretize(ss, 0.025)
    xv = x.as_vector()
    step = A_d @ xv + B_d @ u.vec
    euler = xv + 0.025 * (ss.A @ xv + ss.B @ u.vec)
    np.testing.assert_allclose(step, euler, rtol=1e-14, atol=1e-14)


def test_control_input_layout():
    u = ControlInput.from_parts(
        f_h=[[1, 2, 3], [4, 5, 6]], f_f=[[7, 8, 9], [10, 11, 12]],
        m_f=[[13, 14], [15, 16]])
    np.testing.assert_array_equal(u.vec, np.arange(1.0, 17.0))
    np.testing.assert_array_equal(u.f_h[1], [4, 5, 6])
    np.testing.assert_array_equal(u.m_f[0], [13, 14])


def test_unified_state_round_trip():
    rng = np.random.default_rng(18)
    vec = rng.uniform(-1, 1, 27)
    vec[24:27] = [0, 0, -9.81]
    x = UnifiedState.from_vector(vec)
    np.testing.assert_array_equal(x.as_vector(), vec)


def test_object_params_default_inertia():
    p = ObjectParams(l=0.6, w=0.4, h=0.2, m_o=12.0, mu_g=0.3)
    np.testing.assert_allclose(np.diag(p.I_o_body),
                               [0.2, 0.4, 0.52])
    with pytest.raises(ValueError):
        ObjectParams(l=0.5, w=0.5, h=0.5, m_o=-1.0, mu_g=0.5)
    with pytest.raises(ValueError):
        ObjectParams(l=0.5, w=0.5, h=0.5, m_o=1.0, mu_g=2.5)
