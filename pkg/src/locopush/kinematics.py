"""Forward kinematics, contact Jacobians and limb IK for the 16-joint humanoid.

Joint ordering used everywhere in this package:

    [left leg (5), right leg (5), left arm (3), right arm (3)]

Leg chain:  hip yaw (z), hip roll (x), hip pitch (y), knee (y), ankle (y).
Arm chain:  shoulder pitch (y), shoulder roll (x), elbow (y).

Index 0 of every per-limb pair is the left side (+y), index 1 the right.
The foot is a single contact point at the ankle; the ankle joint orients a
line foot that carries the 2-D (y, z) moment input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import yaml

N_JOINTS = 16
GRAVITY = 9.81

LIMB_SLICES = {
    "left_leg": slice(0, 5),
    "right_leg": slice(5, 10),
    "left_arm": slice(10, 13),
    "right_arm": slice(13, 16),
}

JOINT_NAMES = (
    "l_hip_yaw", "l_hip_roll", "l_hip_pitch", "l_knee", "l_ankle",
    "r_hip_yaw", "r_hip_roll", "r_hip_pitch", "r_knee", "r_ankle",
    "l_shoulder_pitch", "l_shoulder_roll", "l_elbow",
    "r_shoulder_pitch", "r_shoulder_roll", "r_elbow",
)

# Joint axes in the parent frame, per chain position.
_LEG_AXES = ("z", "x", "y", "y", "y")
_ARM_AXES = ("y", "x", "y")

_AXIS_VEC = {
    "x": np.array([1.0, 0.0, 0.0]),
    "y": np.array([0.0, 1.0, 0.0]),
    "z": np.array([0.0, 0.0, 1.0]),
}


class JointLimitError(ValueError):
    """A joint angle violates its limits beyond tolerance."""


class PitchSingularityError(ValueError):
    """Base pitch too close to +-pi/2 where the Euler-rate map degenerates."""


def rot_x(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


_AXIS_ROT = {"x": rot_x, "y": rot_y, "z": rot_z}


def euler_to_rot(theta: np.ndarray) -> np.ndarray:
    """ZYX body rotation from (roll, pitch, yaw): R = Rz(yaw) Ry(pitch) Rx(roll)."""
    roll, pitch, yaw = float(theta[0]), float(theta[1]), float(theta[2])
    return rot_z(yaw) @ rot_y(pitch) @ rot_x(roll)


def euler_rot_derivatives(theta: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """dR/droll, dR/dpitch, dR/dyaw for the ZYX convention."""
    roll, pitch, yaw = float(theta[0]), float(theta[1]), float(theta[2])
    Rx, Ry, Rz = rot_x(roll), rot_y(pitch), rot_z(yaw)
    cr, sr = math.cos(roll), math.sin(roll)
    cp, sp = math.cos(pitch), math.sin(pitch)
    cy, sy = math.cos(yaw), math.sin(yaw)
    dRx = np.array([[0.0, 0.0, 0.0], [0.0, -sr, -cr], [0.0, cr, -sr]])
    dRy = np.array([[-sp, 0.0, cp], [0.0, 0.0, 0.0], [-cp, 0.0, -sp]])
    dRz = np.array([[-sy, -cy, 0.0], [cy, -sy, 0.0], [0.0, 0.0, 0.0]])
    return Rz @ Ry @ dRx, Rz @ dRy @ Rx, dRz @ Ry @ Rx


def skew(v: np.ndarray) -> np.ndarray:
    x, y, z = float(v[0]), float(v[1]), float(v[2])
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


@dataclass
class RobotModel:
    """Kinematic and inertial description of the humanoid.

    All quantities are SI (kg, m, rad, N*m).  The geometry defaults are a
    documented stand-in for the real robot (the hardware drawings are not
    public); every value can be overridden via a YAML config.
    """

    m_b: float = 17.0
    I_c_body: np.ndarray = field(
        default_factory=lambda: np.diag([0.35, 0.30, 0.12]))
    # trunk-mounted frames, offsets from the CoM in the base frame
    shoulder_offset: np.ndarray = field(
        default_factory=lambda: np.array([0.0, 0.15, 0.175]))
    hip_offset: np.ndarray = field(
        default_factory=lambda: np.array([0.0, 0.10, -0.175]))
    thigh_length: float = 0.22
    shank_length: float = 0.22
    upper_arm_length: float = 0.20
    lower_arm_length: float = 0.20
    standing_height: float = 0.55
    joint_lower: np.ndarray = field(default_factory=lambda: np.array(
        [-1.0, -1.0, -1.6, 0.0, -1.4] * 2 + [-2.8, -1.6, -2.6] * 2))
    joint_upper: np.ndarray = field(default_factory=lambda: np.array(
        [1.0, 1.0, 1.6, 2.6, 1.4] * 2 + [2.8, 1.6, 2.6] * 2))
    tau_max: np.ndarray = field(default_factory=lambda: np.array(
        [33.5, 33.5, 33.5, 67.0, 33.5] * 2 + [33.5, 33.5, 33.5] * 2))
    qdot_max: np.ndarray = field(default_factory=lambda: np.full(16, 21.0))

    def __post_init__(self):
        self.I_c_body = np.asarray(self.I_c_body, dtype=float)
        for name in ("shoulder_offset", "hip_offset", "joint_lower",
                     "joint_upper", "tau_max", "qdot_max"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=float))
        if self.m_b <= 0:
            raise ValueError("robot mass must be positive")
        if not np.all(self.joint_lower < self.joint_upper):
            raise ValueError("joint_lower must be < joint_upper elementwise")
        if not np.all(self.tau_max > 0):
            raise ValueError("tau_max must be positive")
        if not np.allclose(self.I_c_body, self.I_c_body.T):
            raise ValueError("body inertia must be symmetric")
        if np.any(np.linalg.eigvalsh(self.I_c_body) <= 0):
            raise ValueError("body inertia must be positive definite")

    def nominal_leg_q(self, com_height: float | None = None) -> np.ndarray:
        """Bent-knee leg configuration putting the CoM at the given height."""
        if com_height is None:
            com_height = self.standing_height
        hip_h = com_height + self.hip_offset[2]
        reach = self.thigh_length + self.shank_length
        hip_h = float(np.clip(hip_h, 0.3 * reach, 0.999 * reach))
        # symmetric bend: foot directly below the hip
        hp = -math.acos(hip_h / reach)
        return np.array([0.0, 0.0, hp, -2.0 * hp, hp])

    def nominal_q(self, com_height: float | None = None) -> np.ndarray:
        """Standing configuration: bent knees, arms reaching forward."""
        leg = self.nominal_leg_q(com_height)
        arm = np.array([-1.2, 0.0, 0.4])
        return np.concatenate([leg, leg, arm, arm])

    def arm_reach(self) -> float:
        return self.upper_arm_length + self.lower_arm_length

    def to_dict(self) -> dict:
        return {
            "m_b": float(self.m_b),
            "I_c_body": self.I_c_body.tolist(),
            "shoulder_offset": self.shoulder_offset.tolist(),
            "hip_offset": self.hip_offset.tolist(),
            "thigh_length": float(self.thigh_length),
            "shank_length": float(self.shank_length),
            "upper_arm_length": float(self.upper_arm_length),
            "lower_arm_length": float(self.lower_arm_length),
            "standing_height": float(self.standing_height),
            "joint_lower": self.joint_lower.tolist(),
            "joint_upper": self.joint_upper.tolist(),
            "tau_max": self.tau_max.tolist(),
            "qdot_max": self.qdot_max.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RobotModel":
        return cls(**d)

    def save_yaml(self, path) -> None:
        with open(path, "w") as fh:
            yaml.safe_dump(self.to_dict(), fh, sort_keys=False)

    @classmethod
    def load_yaml(cls, path) -> "RobotModel":
        with open(path) as fh:
            return cls.from_dict(yaml.safe_load(fh))


@dataclass
class BasePose:
    """Floating-base pose: CoM position and ZYX Euler angles (roll, pitch, yaw)."""

    p_c: np.ndarray
    theta_c: np.ndarray

    def __post_init__(self):
        self.p_c = np.asarray(self.p_c, dtype=float).reshape(3)
        self.theta_c = np.asarray(self.theta_c, dtype=float).reshape(3)

    def rotation(self) -> np.ndarray:
        return euler_to_rot(self.theta_c)


@dataclass
class BodyPoints:
    """World-frame contact and trunk points; index 0 = left, 1 = right."""

    p_h: np.ndarray   # hands (2, 3)
    p_f: np.ndarray   # feet (2, 3)
    p_s: np.ndarray   # shoulders (2, 3)
    p_hip: np.ndarray  # hips (2, 3)


def _check_pitch(base: BasePose) -> None:
    if abs(float(base.theta_c[1])) >= math.pi / 2 - 1e-3:
        raise PitchSingularityError(
            f"base pitch {base.theta_c[1]:.4f} rad too close to +-pi/2")


def _check_limits(model: RobotModel, q: np.ndarray, tol: float) -> None:
    lo = q - model.joint_lower
    hi = model.joint_upper - q
    bad = np.where((lo < -tol) | (hi < -tol))[0]
    if bad.size:
        j = int(bad[0])
        raise JointLimitError(
            f"joint '{JOINT_NAMES[j]}' = {q[j]:.4f} rad outside "
            f"[{model.joint_lower[j]:.4f}, {model.joint_upper[j]:.4f}]")


def _limb_spec(model: RobotModel, limb: str):
    """Mount offset, joint axes and per-joint child offsets in the base frame."""
    side = 1.0 if limb.startswith("left") else -1.0
    if limb.endswith("leg"):
        mount = model.hip_offset * np.array([1.0, side, 1.0])
        offsets = [
            np.zeros(3), np.zeros(3), np.zeros(3),
            np.array([0.0, 0.0, -model.thigh_length]),
            np.array([0.0, 0.0, -model.shank_length]),
        ]
        return mount, _LEG_AXES, offsets
    mount = model.shoulder_offset * np.array([1.0, side, 1.0])
    offsets = [
        np.zeros(3), np.zeros(3),
        np.array([0.0, 0.0, -model.upper_arm_length]),
    ]
    return mount, _ARM_AXES, offsets


def _limb_tip_offset(model: RobotModel, limb: str) -> np.ndarray:
    if limb.endswith("leg"):
        return np.zeros(3)  # foot point at the ankle
    return np.array([0.0, 0.0, -model.lower_arm_length])


def limb_chain_base(model: RobotModel, limb: str, q_limb: np.ndarray):
    """Walk one limb chain in the base frame.

    Returns (tip point, joint origins, world-less joint axes, tip rotation),
    all expressed in the base frame.
    """
    mount, axes, offsets = _limb_spec(model, limb)
    p = mount.copy()
    R = np.eye(3)
    origins, ax_world = [], []
    for qi, ax, off in zip(q_limb, axes, offsets):
        p = p + R @ off
        origins.append(p.copy())
        ax_world.append(R @ _AXIS_VEC[ax])
        R = R @ _AXIS_ROT[ax](float(qi))
    tip = p + R @ _limb_tip_offset(model, limb)
    return tip, origins, ax_world, R


def limb_point_and_jacobian_base(model: RobotModel, limb: str, q_limb: np.ndarray):
    """Tip point plus translational/rotational Jacobians, base frame.

    Geometric Jacobian of a revolute chain: column j is axis_j x (tip - origin_j)
    for translation and axis_j for rotation.
    """
    tip, origins, axes, R = limb_chain_base(model, limb, q_limb)
    n = len(axes)
    Jv = np.zeros((3, n))
    Jw = np.zeros((3, n))
    for j in range(n):
        Jv[:, j] = np.cross(axes[j], tip - origins[j])
        Jw[:, j] = axes[j]
    return tip, Jv, Jw, R


def forward_kinematics(model: RobotModel, base: BasePose, q: np.ndarray,
                       limit_tol: float = 1e-6) -> BodyPoints:
    """World-frame hand/foot/shoulder/hip points for a full configuration."""
    q = np.asarray(q, dtype=float).reshape(N_JOINTS)
    _check_pitch(base)
    _check_limits(model, q, limit_tol)
    R = base.rotation()
    p_h = np.zeros((2, 3))
    p_f = np.zeros((2, 3))
    p_s = np.zeros((2, 3))
    p_hip = np.zeros((2, 3))
    for i, side in enumerate(("left", "right")):
        sgn = np.array([1.0, 1.0 if side == "left" else -1.0, 1.0])
        p_s[i] = base.p_c + R @ (model.shoulder_offset * sgn)
        p_hip[i] = base.p_c + R @ (model.hip_offset * sgn)
        leg_tip, _, _, _ = limb_chain_base(model, f"{side}_leg",
                                           q[LIMB_SLICES[f"{side}_leg"]])
        arm_tip, _, _, _ = limb_chain_base(model, f"{side}_arm",
                                           q[LIMB_SLICES[f"{side}_arm"]])
        p_f[i] = base.p_c + R @ leg_tip
        p_h[i] = base.p_c + R @ arm_tip
    return BodyPoints(p_h=p_h, p_f=p_f, p_s=p_s, p_hip=p_hip)


def point_jacobians(model: RobotModel, base: BasePose, q: np.ndarray):
    """Per-point translational Jacobians w.r.t. (p_c, theta_c, q).

    Returns a dict keyed by 'hand_left', ..., 'foot_right' with (3, 22)
    arrays, plus (3, 16) rotational Jacobians for the feet (used for the
    foot-moment columns of the contact Jacobian).  Shoulders/hips are rigid
    trunk points so only the base columns are nonzero for them.
    """
    q = np.asarray(q, dtype=float).reshape(N_JOINTS)
    R = base.rotation()
    dRs = euler_rot_derivatives(base.theta_c)
    out = {}
    foot_jw = {}
    for side in ("left", "right"):
        for kind in ("arm", "leg"):
            limb = f"{side}_{kind}"
            sl = LIMB_SLICES[limb]
            tip_b, Jv_b, Jw_b, _ = limb_point_and_jacobian_base(model, limb, q[sl])
            J = np.zeros((3, 3 + 3 + N_JOINTS))
            J[:, 0:3] = np.eye(3)
            for k in range(3):
                J[:, 3 + k] = dRs[k] @ tip_b
            J[:, 6 + sl.start:6 + sl.stop] = R @ Jv_b
            key = ("hand_" if kind == "arm" else "foot_") + side
            out[key] = J
            if kind == "leg":
                Jw = np.zeros((3, N_JOINTS))
                Jw[:, sl] = R @ Jw_b
                foot_jw[f"foot_{side}"] = Jw
    # trunk points
    for side, sgn in (("left", 1.0), ("right", -1.0)):
        for key, off in ((f"shoulder_{side}", model.shoulder_offset),
                         (f"hip_{side}", model.hip_offset)):
            v = off * np.array([1.0, sgn, 1.0])
            J = np.zeros((3, 3 + 3 + N_JOINTS))
            J[:, 0:3] = np.eye(3)
            for k in range(3):
                J[:, 3 + k] = dRs[k] @ v
            out[key] = J
    return out, foot_jw


# Moment selection: maps the 2-D foot moment input (M_y, M_z) into a 3-D
# world moment with zero x component (line foot along the walking direction).
MOMENT_SELECTION = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


def contact_jacobian(model: RobotModel, base: BasePose, q: np.ndarray,
                     limit_tol: float = 1e-6) -> np.ndarray:
    """16x16 map from the stacked control input to joint torques, tau = J_c^T u.

    Input layout: [F_h_left(3); F_h_right(3); F_f_left(3); F_f_right(3);
    M_f_left(2); M_f_right(2)].  Row block i of J_c is the Jacobian through
    which input component i does work on the joints; each limb's joints
    respond only to that limb's wrench.
    """
    q = np.asarray(q, dtype=float).reshape(N_JOINTS)
    _check_pitch(base)
    _check_limits(model, q, limit_tol)
    jacs, foot_jw = point_jacobians(model, base, q)
    J_c = np.zeros((16, N_JOINTS))
    J_c[0:3] = jacs["hand_left"][:, 6:]
    J_c[3:6] = jacs["hand_right"][:, 6:]
    J_c[6:9] = jacs["foot_left"][:, 6:]
    J_c[9:12] = jacs["foot_right"][:, 6:]
    J_c[12:14] = MOMENT_SELECTION.T @ foot_jw["foot_left"]
    J_c[14:16] = MOMENT_SELECTION.T @ foot_jw["foot_right"]
    return J_c


def solve_limb_ik(model: RobotModel, base: BasePose, limb: str,
                  target: np.ndarray, q_seed: np.ndarray,
                  max_iter: int = 30, tol: float = 1e-10):
    """Damped-least-squares IK for one limb tip point.

    Redundant joints (the leg has 5 for a 3-D point task) are pulled toward
    the seed through the nullspace, which keeps solutions continuous across
    control steps.  Returns (q_limb, converged).
    """
    target = np.asarray(target, dtype=float).reshape(3)
    sl = LIMB_SLICES[limb]
    lo, hi = model.joint_lower[sl], model.joint_upper[sl]
    R = base.rotation()
    q = np.clip(np.asarray(q_seed, dtype=float).reshape(sl.stop - sl.start), lo, hi)
    seed = q.copy()
    err = np.inf
    for _ in range(max_iter):
        tip_b, Jv_b, _, _ = limb_point_and_jacobian_base(model, limb, q)
        tip = base.p_c + R @ tip_b
        e = target - tip
        err = float(np.linalg.norm(e))
        if err < tol:
            break
        J = R @ Jv_b
        JJt = J @ J.T + 1e-8 * np.eye(3)
        J_pinv = J.T @ np.linalg.inv(JJt)
        dq = J_pinv @ e
        if J.shape[1] > 3:
            dq = dq + 0.2 * (np.eye(J.shape[1]) - J_pinv @ J) @ (seed - q)
        q = np.clip(q + dq, lo, hi)
    return q, err < max(tol, 1e-7)
