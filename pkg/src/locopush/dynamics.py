"""Unified robot-object rigid-body dynamics and its linear state-space form.

Sign conventions (used consistently by the whole package):

* ``F_h`` is the force each hand applies TO the object, world frame.  The
  robot feels the reaction ``-F_h``.  With this choice pushing forces are
  positive along the push direction, which is what the hand force bounds
  and friction cones require.
* Ground friction on the object while pushing is ``-R_oz @ [mu_g*m_o*g,0,0]``
  (kinetic, opposing the push), applied as the single-contact approximation
  at the CoM ground projection.  The friction moment uses the same vector
  scaled by h/2, applied as printed in the source model (see pose_opt notes).
* Gravity lives inside the state as the constant ``[0, 0, -g]`` subvector,
  so the free-fall rows of A are an identity against it.

State layout (27): [theta_c(3); p_c(3); omega_c(3); pdot_c(3);
                    theta_o(3); p_o(3); omega_o(3); pdot_o(3); g(3)]
Input layout (16): [F_h_left(3); F_h_right(3); F_f_left(3); F_f_right(3);
                    M_f_left(2); M_f_right(2)]
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import yaml

from .kinematics import (GRAVITY, BodyPoints, RobotModel, euler_to_rot,
                         rot_z, skew, MOMENT_SELECTION)

N_STATES = 27
N_INPUTS = 16

# state slices
TH_C = slice(0, 3)
P_C = slice(3, 6)
W_C = slice(6, 9)
V_C = slice(9, 12)
TH_O = slice(12, 15)
P_O = slice(15, 18)
W_O = slice(18, 21)
V_O = slice(21, 24)
GRAV = slice(24, 27)

# input slices
FH = (slice(0, 3), slice(3, 6))
FF = (slice(6, 9), slice(9, 12))
MF = (slice(12, 14), slice(14, 16))

# z acceleration of the object is constrained to zero on flat ground
D_PLANAR = np.diag([1.0, 1.0, 0.0])


class EulerSingularityError(ValueError):
    """Euler-rate map requested too close to the pitch singularity."""


@dataclass
class ObjectParams:
    """Box object: dimensions l (along push), w, h, mass, inertia, friction."""

    l: float
    w: float
    h: float
    m_o: float
    mu_g: float
    I_o_body: np.ndarray | None = None

    def __post_init__(self):
        if min(self.l, self.w, self.h) <= 0:
            raise ValueError("object side lengths must be positive")
        if self.m_o <= 0:
            raise ValueError("object mass must be positive")
        if not 0.0 < self.mu_g < 2.0:
            raise ValueError("mu_g must lie in (0, 2)")
        if self.I_o_body is None:
            # uniform-density box about its CoM
            self.I_o_body = self.m_o / 12.0 * np.diag([
                self.w ** 2 + self.h ** 2,
                self.l ** 2 + self.h ** 2,
                self.l ** 2 + self.w ** 2,
            ])
        self.I_o_body = np.asarray(self.I_o_body, dtype=float)
        if not np.allclose(self.I_o_body, self.I_o_body.T):
            raise ValueError("object inertia must be symmetric")
        if np.any(np.linalg.eigvalsh(self.I_o_body) <= 0):
            raise ValueError("object inertia must be positive definite")

    def to_dict(self) -> dict:
        return {"l": self.l, "w": self.w, "h": self.h, "m_o": self.m_o,
                "mu_g": self.mu_g, "I_o_body": self.I_o_body.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "ObjectParams":
        return cls(**d)

    def save_yaml(self, path) -> None:
        with open(path, "w") as fh:
            yaml.safe_dump(self.to_dict(), fh, sort_keys=False)

    @classmethod
    def load_yaml(cls, path) -> "ObjectParams":
        with open(path) as fh:
            return cls.from_dict(yaml.safe_load(fh))


@dataclass
class ControlInput:
    """16-entry control input; hand forces precede foot wrenches."""

    vec: np.ndarray = field(default_factory=lambda: np.zeros(N_INPUTS))

    def __post_init__(self):
        self.vec = np.asarray(self.vec, dtype=float).reshape(N_INPUTS).copy()

    @classmethod
    def from_parts(cls, f_h, f_f, m_f) -> "ControlInput":
        vec = np.zeros(N_INPUTS)
        f_h = np.asarray(f_h, dtype=float).reshape(2, 3)
        f_f = np.asarray(f_f, dtype=float).reshape(2, 3)
        m_f = np.asarray(m_f, dtype=float).reshape(2, 2)
        for i in range(2):
            vec[FH[i]] = f_h[i]
            vec[FF[i]] = f_f[i]
            vec[MF[i]] = m_f[i]
        return cls(vec)

    @property
    def f_h(self) -> np.ndarray:
        return np.stack([self.vec[FH[0]], self.vec[FH[1]]])

    @property
    def f_f(self) -> np.ndarray:
        return np.stack([self.vec[FF[0]], self.vec[FF[1]]])

    @property
    def m_f(self) -> np.ndarray:
        return np.stack([self.vec[MF[0]], self.vec[MF[1]]])


@dataclass
class UnifiedState:
    """27-entry stacked robot/object state with the constant gravity tail."""

    theta_c: np.ndarray = field(default_factory=lambda: np.zeros(3))
    p_c: np.ndarray = field(default_factory=lambda: np.zeros(3))
    omega_c: np.ndarray = field(default_factory=lambda: np.zeros(3))
    pdot_c: np.ndarray = field(default_factory=lambda: np.zeros(3))
    theta_o: np.ndarray = field(default_factory=lambda: np.zeros(3))
    p_o: np.ndarray = field(default_factory=lambda: np.zeros(3))
    omega_o: np.ndarray = field(default_factory=lambda: np.zeros(3))
    pdot_o: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        for name in ("theta_c", "p_c", "omega_c", "pdot_c",
                     "theta_o", "p_o", "omega_o", "pdot_o"):
            setattr(self, name, np.asarray(getattr(self, name),
                                           dtype=float).reshape(3).copy())

    def as_vector(self) -> np.ndarray:
        return np.concatenate([
            self.theta_c, self.p_c, self.omega_c, self.pdot_c,
            self.theta_o, self.p_o, self.omega_o, self.pdot_o,
            [0.0, 0.0, -GRAVITY]])

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "UnifiedState":
        x = np.asarray(x, dtype=float).reshape(N_STATES)
        return cls(theta_c=x[TH_C], p_c=x[P_C], omega_c=x[W_C], pdot_c=x[V_C],
                   theta_o=x[TH_O], p_o=x[P_O], omega_o=x[W_O], pdot_o=x[V_O])

    def copy(self) -> "UnifiedState":
        return UnifiedState.from_vector(self.as_vector())


@dataclass
class StateSpace:
    """Continuous-time linear model xdot = A x + B u at a fixed evaluation point."""

    A: np.ndarray
    B: np.ndarray
    object_yaw: float
    points: BodyPoints


def euler_rate_map(theta: np.ndarray) -> np.ndarray:
    """S(theta) mapping Euler-angle rates to world angular velocity.

    Singular at pitch = +-pi/2; callers must stay clear of it.
    """
    pitch, yaw = float(theta[1]), float(theta[2])
    if abs(pitch) >= math.pi / 2 - 1e-3:
        raise EulerSingularityError(
            f"pitch {pitch:.4f} rad too close to +-pi/2")
    ct, st = math.cos(pitch), math.sin(pitch)
    cp, sp = math.cos(yaw), math.sin(yaw)
    return np.array([
        [ct * cp, -sp, 0.0],
        [ct * sp, cp, 0.0],
        [-st, 0.0, 1.0],
    ])


def object_friction(params: ObjectParams, yaw_o: float) -> np.ndarray:
    """Nominal kinetic ground-friction vector rotated into the world frame.

    This is the magnitude-and-direction vector f_o; the object equation of
    motion subtracts it (friction opposes the push direction).
    """
    return rot_z(float(yaw_o)) @ np.array(
        [params.mu_g * params.m_o * GRAVITY, 0.0, 0.0])


def world_inertia(I_body: np.ndarray, R: np.ndarray) -> np.ndarray:
    return R @ I_body @ R.T


def build_state_space(model: RobotModel, params: ObjectParams,
                      x: UnifiedState, points: BodyPoints) -> StateSpace:
    """Assemble the 27x27 / 27x16 unified model at the given state and contacts.

    World-frame inertias are recomputed from the current orientations each
    call; the ground-friction terms enter through the gravity columns so the
    constant kinetic friction is representable in a linear model.
    """
    R_c = euler_to_rot(x.theta_c)
    yaw_o = float(x.theta_o[2])
    R_oz = rot_z(yaw_o)
    I_c = world_inertia(model.I_c_body, R_c)
    I_o = world_inertia(params.I_o_body, rot_z(yaw_o))
    I_c_inv = np.linalg.inv(I_c)
    I_o_inv = np.linalg.inv(I_o)

    A = np.zeros((N_STATES, N_STATES))
    A[TH_C, W_C] = np.linalg.inv(euler_rate_map(x.theta_c))
    A[P_C, V_C] = np.eye(3)
    A[V_C, GRAV] = np.eye(3)
    A[TH_O, W_O] = np.linalg.inv(euler_rate_map(x.theta_o))
    A[P_O, V_O] = np.eye(3)
    # Friction enters against the gravity state [0,0,-g]: the blocks below
    # reproduce -mu*m*g*R_oz@x_hat (force) and the h/2 lever moment when
    # multiplied by it.
    e13 = np.zeros((3, 3))
    e13[0, 2] = 1.0
    A[V_O, GRAV] = D_PLANAR @ (params.mu_g * R_oz @ e13)
    A[W_O, GRAV] = params.mu_g * params.m_o * params.h / 2.0 * (I_o_inv @ R_oz @ e13)

    B = np.zeros((N_STATES, N_INPUTS))
    for i in range(2):
        r_h_c = points.p_h[i] - x.p_c
        r_f_c = points.p_f[i] - x.p_c
        r_h_o = points.p_h[i] - x.p_o
        B[W_C, FH[i]] = -I_c_inv @ skew(r_h_c)   # hand reaction on the robot
        B[W_C, FF[i]] = I_c_inv @ skew(r_f_c)
        B[W_C, MF[i]] = I_c_inv @ MOMENT_SELECTION
        B[V_C, FH[i]] = -np.eye(3) / model.m_b
        B[V_C, FF[i]] = np.eye(3) / model.m_b
        B[W_O, FH[i]] = I_o_inv @ skew(r_h_o)
        B[V_O, FH[i]] = D_PLANAR / params.m_o
    return StateSpace(A=A, B=B, object_yaw=yaw_o, points=points)


def discretize(ss: StateSpace, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Forward-Euler discretization: A_d = I + A dt, B_d = B dt."""
    if dt < 0:
        raise ValueError("dt must be nonnegative")
    return np.eye(N_STATES) + ss.A * dt, ss.B * dt
