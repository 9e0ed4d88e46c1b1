"""Whole-body pushing pose optimization.

Solves one steady-state pose plus contact forces per object setup: decision
vector X = [p_c(3); theta(3); q(16); u(16)].  The problem is posed in the
frame aligned with the push direction (object yaw zero, push along +x);
``solve_pose`` rotates the result back if the object starts at nonzero yaw.

The steady-state constraint set keeps the robot's full force/moment balance
and the object's planar rows (force x/y, moment y/z, normal-force
nonnegativity).  The object roll row is intentionally not constrained: the
object is modeled planar and the ground contact patch supplies the roll
reaction, which the single-point friction model cannot represent.  Ground
reaction solutions are deliberately not exported as MPC references; only
the hand forces are.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import ControlInput, ObjectParams, FH, FF, MF
from .kinematics import (GRAVITY, BasePose, MOMENT_SELECTION, RobotModel,
                         forward_kinematics, point_jacobians, skew,
                         solve_limb_ik, rot_z)
from .solvers import NLPProblem, SolveReport, check_nlp_kkt, solve_nlp

N_VARS = 38
_PC = slice(0, 3)
_TH = slice(3, 6)
_Q = slice(6, 22)
_U = slice(22, 38)

CONSTRAINT_FAMILIES = (
    "steady_state", "joint_limits", "shoulder_clearance",
    "hand_friction_cone", "foot_friction_cone", "hand_on_face",
    "feet_behind_hips", "feet_on_ground",
)


class PoseInfeasibleError(RuntimeError):
    """Pose problem rejected before or during the solve.

    ``family`` names the offending constraint family (one of
    CONSTRAINT_FAMILIES).
    """

    def __init__(self, message: str, family: str = "", solution=None,
                 residuals: dict | None = None):
        super().__init__(message)
        self.family = family
        self.solution = solution
        self.residuals = residuals or {}


@dataclass
class PoseProblemInputs:
    object: ObjectParams
    p_o_init: np.ndarray
    p_c_ref: np.ndarray
    mu_f: float = 0.7
    mu_h: float = 0.8
    alpha: float = 50.0
    beta: np.ndarray = field(default_factory=lambda: np.array([50.0, 5.0, 50.0]))
    gamma: np.ndarray = field(default_factory=lambda: np.array([1.0] * 12 + [5.0] * 4))
    posture_reg: float = 1e-4  # removes kinematic null directions; << alpha
    # walkable-envelope bounds: the pose must remain trackable by the gait
    # controller, which the cost terms alone do not guarantee
    pitch_max: float = 0.40
    roll_max: float = 0.30
    yaw_max: float = 0.60
    com_z_range: tuple = (0.40, 0.72)

    def __post_init__(self):
        self.p_o_init = np.asarray(self.p_o_init, dtype=float).reshape(3)
        self.p_c_ref = np.asarray(self.p_c_ref, dtype=float).reshape(3)
        self.beta = np.asarray(self.beta, dtype=float).reshape(3)
        self.gamma = np.asarray(self.gamma, dtype=float).reshape(16)
        for mu in (self.mu_f, self.mu_h):
            if not 0.0 < mu < 2.0:
                raise ValueError("friction coefficients must lie in (0, 2)")
        if self.alpha < 0 or np.any(self.beta < 0) or np.any(self.gamma < 0):
            raise ValueError("weights must be nonnegative")

    @classmethod
    def for_object(cls, obj: ObjectParams, model: RobotModel,
                   p_o_init=None, standoff: float = 0.30, **kw):
        """Place the robot reference CoM behind the object's near face."""
        p_o = (np.array([obj.l / 2 + standoff + 0.05, 0.0, obj.h / 2])
               if p_o_init is None else np.asarray(p_o_init, dtype=float))
        face_x = p_o[0] - obj.l / 2
        p_c_ref = np.array([face_x - standoff, p_o[1], model.standing_height])
        return cls(object=obj, p_o_init=p_o, p_c_ref=p_c_ref, **kw)


@dataclass
class PoseSolution:
    theta_opt: np.ndarray
    q_opt: np.ndarray
    p_c_opt: np.ndarray
    u_opt: ControlInput
    p_h_opt: np.ndarray     # (2, 3) hand contact points
    p_f_opt: np.ndarray     # (2, 3) foot contact points
    f_h_ref: np.ndarray     # (2, 3) reference hand forces for the MPC
    p_o: np.ndarray         # object CoM the pose was solved for
    report: SolveReport

    def to_dict(self) -> dict:
        return {
            "theta_opt": self.theta_opt.tolist(),
            "q_opt": self.q_opt.tolist(),
            "p_c_opt": self.p_c_opt.tolist(),
            "u_opt": self.u_opt.vec.tolist(),
            "p_h_opt": self.p_h_opt.tolist(),
            "p_f_opt": self.p_f_opt.tolist(),
            "f_h_ref": self.f_h_ref.tolist(),
            "p_o": self.p_o.tolist(),
            "status": self.report.status,
            "solve_time_ms": self.report.solve_time_ms,
            "iterations": self.report.iterations,
        }

    def save_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> "PoseSolution":
        rep = SolveReport(status=d.get("status", "optimal"),
                          iterations=int(d.get("iterations", 0)),
                          primal_residual=0.0, dual_residual=0.0,
                          solve_time_ms=float(d.get("solve_time_ms", 0.0)))
        return cls(theta_opt=np.array(d["theta_opt"]),
                   q_opt=np.array(d["q_opt"]),
                   p_c_opt=np.array(d["p_c_opt"]),
                   u_opt=ControlInput(np.array(d["u_opt"])),
                   p_h_opt=np.array(d["p_h_opt"]),
                   p_f_opt=np.array(d["p_f_opt"]),
                   f_h_ref=np.array(d["f_h_ref"]),
                   p_o=np.array(d["p_o"]), report=rep)

    @classmethod
    def load_json(cls, path) -> "PoseSolution":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


class _PoseNLP:
    """Constraint/cost evaluation with analytic derivatives and caching."""

    def __init__(self, inputs: PoseProblemInputs, model: RobotModel):
        self.inp = inputs
        self.model = model
        # dynamics rows stay in raw N / N*m (keeps QP multipliers O(1-100));
        # the quadratic cone rows are brought to force scale
        self.cone_scale = 1.0 / (model.m_b * GRAVITY)
        self._cache_key = None
        self._cache = None
        self.x0 = self._build_initial_guess()
        self.q_anchor = self.x0[_Q].copy()
        self.xy_anchor = self.x0[0:2].copy()

    # -- evaluation ---------------------------------------------------------
    def _kin(self, x):
        key = x.tobytes()
        if key != self._cache_key:
            base = BasePose(x[_PC], x[_TH])
            pts = forward_kinematics(self.model, base, x[_Q], limit_tol=10.0)
            jacs, _ = point_jacobians(self.model, base, x[_Q])
            self._cache_key = key
            self._cache = (pts, jacs)
        return self._cache

    def objective(self, x):
        inp = self.inp
        dz = inp.p_c_ref[2] - x[2]
        th = x[_TH]
        u = x[_U]
        reg = (np.sum((x[_Q] - self.q_anchor) ** 2)
               + np.sum((x[0:2] - self.xy_anchor) ** 2))
        return (inp.alpha * dz ** 2 + th @ (inp.beta * th)
                + u @ (inp.gamma * u) + inp.posture_reg * reg)

    def gradient(self, x):
        inp = self.inp
        g = np.zeros(N_VARS)
        g[2] = -2.0 * inp.alpha * (inp.p_c_ref[2] - x[2])
        g[_TH] = 2.0 * inp.beta * x[_TH]
        g[_U] = 2.0 * inp.gamma * x[_U]
        g[_Q] += 2.0 * inp.posture_reg * (x[_Q] - self.q_anchor)
        g[0:2] += 2.0 * inp.posture_reg * (x[0:2] - self.xy_anchor)
        return g

    def c_eq(self, x):
        obj = self.inp.object
        pts, _ = self._kin(x)
        u = x[_U]
        f_h = [u[FH[0]], u[FH[1]]]
        f_f = [u[FF[0]], u[FF[1]]]
        m_f = [u[MF[0]], u[MF[1]]]
        g_vec = np.array([0.0, 0.0, -GRAVITY])
        p_c = x[_PC]
        p_o = self.inp.p_o_init

        force_c = f_f[0] + f_f[1] - f_h[0] - f_h[1] + self.model.m_b * g_vec
        mom_c = np.zeros(3)
        mom_o = np.zeros(3)
        for i in range(2):
            mom_c += np.cross(pts.p_f[i] - p_c, f_f[i])
            mom_c += np.cross(pts.p_h[i] - p_c, -f_h[i])
            mom_c += MOMENT_SELECTION @ m_f[i]
            mom_o += np.cross(pts.p_h[i] - p_o, f_h[i])
        fric = obj.mu_g * obj.m_o * GRAVITY
        force_o_xy = f_h[0][:2] + f_h[1][:2] - np.array([fric, 0.0])

        c = np.concatenate([
            force_c,
            mom_c,
            force_o_xy,
            mom_o[1:3],
            [pts.p_h[0][0] - (p_o[0] - obj.l / 2),
             pts.p_h[1][0] - (p_o[0] - obj.l / 2),
             pts.p_f[0][2], pts.p_f[1][2]],
        ])
        return c

    def jac_eq(self, x):
        obj = self.inp.object
        pts, jacs = self._kin(x)
        u = x[_U]
        p_c = x[_PC]
        p_o = self.inp.p_o_init
        s = 1.0
        J = np.zeros((14, N_VARS))
        Jpc = np.zeros((3, 22))
        Jpc[:, 0:3] = np.eye(3)
        hand_keys = ("hand_left", "hand_right")
        foot_keys = ("foot_left", "foot_right")
        for i in range(2):
            fh = u[3 * i:3 * i + 3]
            ff = u[6 + 3 * i:9 + 3 * i]
            # robot force rows: u columns only
            J[0:3, 22 + 6 + 3 * i:22 + 9 + 3 * i] += s * np.eye(3)
            J[0:3, 22 + 3 * i:22 + 3 * i + 3] += -s * np.eye(3)
            # robot moment rows
            Jf = jacs[foot_keys[i]]
            Jh = jacs[hand_keys[i]]
            J[3:6, 0:22] += -s * skew(ff) @ (Jf - Jpc)
            J[3:6, 0:22] += s * skew(fh) @ (Jh - Jpc)
            J[3:6, 22 + 6 + 3 * i:22 + 9 + 3 * i] += s * skew(pts.p_f[i] - p_c)
            J[3:6, 22 + 3 * i:22 + 3 * i + 3] += -s * skew(pts.p_h[i] - p_c)
            J[3:6, 22 + 12 + 2 * i:22 + 14 + 2 * i] += s * MOMENT_SELECTION
            # object force rows (x, y)
            J[6:8, 22 + 3 * i:22 + 3 * i + 3] += s * np.eye(3)[0:2]
            # object moment rows (y, z)
            J[8:10, 0:22] += (-s * skew(fh) @ Jh)[1:3]
            J[8:10, 22 + 3 * i:22 + 3 * i + 3] += s * skew(pts.p_h[i] - p_o)[1:3]
            # hand-on-face x rows
            J[10 + i, 0:22] = Jh[0]
            # feet-on-ground rows
            J[12 + i, 0:22] = Jf[2]
        return J

    def c_in(self, x):
        obj = self.inp.object
        inp = self.inp
        pts, _ = self._kin(x)
        u = x[_U]
        p_o = inp.p_o_init
        s2 = self.cone_scale
        rows = []
        for i in range(2):
            rows.append(pts.p_h[i][0] - pts.p_s[i][0])          # clearance
        for i in range(2):
            fh = u[3 * i:3 * i + 3]
            rows.append(s2 * (inp.mu_h ** 2 * fh[0] ** 2
                              - fh[1] ** 2 - fh[2] ** 2))        # hand cone
        for i in range(2):
            ff = u[6 + 3 * i:9 + 3 * i]
            rows.append(s2 * (inp.mu_f ** 2 * ff[2] ** 2
                              - ff[0] ** 2 - ff[1] ** 2))        # foot cone
        for i in range(2):
            rows.append(pts.p_h[i][1] - (p_o[1] - obj.w / 2))    # face y
            rows.append((p_o[1] + obj.w / 2) - pts.p_h[i][1])
        for i in range(2):
            rows.append(pts.p_h[i][2])                           # face z
            rows.append((p_o[2] + obj.h / 2) - pts.p_h[i][2])
        for i in range(2):
            rows.append(pts.p_hip[i][0] - pts.p_f[i][0])         # feet back
        rows.append(obj.m_o * GRAVITY - u[2] - u[5])             # normal >= 0
        return np.array(rows)

    def jac_in(self, x):
        inp = self.inp
        pts, jacs = self._kin(x)
        u = x[_U]
        s2 = self.cone_scale
        J = np.zeros((17, N_VARS))
        hand_keys = ("hand_left", "hand_right")
        for i in range(2):
            J[i, 0:22] = jacs[hand_keys[i]][0] - jacs[f"shoulder_{('left', 'right')[i]}"][0]
        for i in range(2):
            fh = u[3 * i:3 * i + 3]
            J[2 + i, 22 + 3 * i:25 + 3 * i] = s2 * np.array(
                [2 * inp.mu_h ** 2 * fh[0], -2 * fh[1], -2 * fh[2]])
        for i in range(2):
            ff = u[6 + 3 * i:9 + 3 * i]
            J[4 + i, 22 + 6 + 3 * i:22 + 9 + 3 * i] = s2 * np.array(
                [-2 * ff[0], -2 * ff[1], 2 * inp.mu_f ** 2 * ff[2]])
        for i in range(2):
            J[6 + 2 * i, 0:22] = jacs[hand_keys[i]][1]
            J[7 + 2 * i, 0:22] = -jacs[hand_keys[i]][1]
        for i in range(2):
            J[10 + 2 * i, 0:22] = jacs[hand_keys[i]][2]
            J[11 + 2 * i, 0:22] = -jacs[hand_keys[i]][2]
        for i in range(2):
            J[14 + i, 0:22] = (jacs[f"hip_{('left', 'right')[i]}"][0]
                               - jacs[f"foot_{('left', 'right')[i]}"][0])
        J[16, 22 + 2] = -1.0
        J[16, 22 + 5] = -1.0
        return J

    # -- bounds and start point ---------------------------------------------
    def bounds(self):
        inp = self.inp
        lb = np.full(N_VARS, -np.inf)
        ub = np.full(N_VARS, np.inf)
        lb[_PC] = [inp.p_c_ref[0] - 1.0, inp.p_c_ref[1] - 1.0,
                   inp.com_z_range[0]]
        ub[_PC] = [inp.p_c_ref[0] + 1.0, inp.p_c_ref[1] + 1.0,
                   inp.com_z_range[1]]
        lb[_TH] = [-inp.roll_max, -inp.pitch_max, -inp.yaw_max]
        ub[_TH] = [inp.roll_max, inp.pitch_max, inp.yaw_max]
        lb[_Q] = self.model.joint_lower
        ub[_Q] = self.model.joint_upper
        lb[_U] = np.concatenate([[0.0, -400, -400] * 2,
                                 [-400, -400, 0.0] * 2, [-50] * 4])
        ub[_U] = np.concatenate([[400, 400, 400] * 2,
                                 [400, 400, 600] * 2, [50] * 4])
        return lb, ub

    def hessian0(self):
        """Exact objective Hessian (the cost is quadratic) plus force-scale
        curvature on the kinematic block.

        The steady-state rows are bilinear in (points, forces), so the
        Lagrangian curvature along kinematic directions is of order
        multiplier * force ~ m_b*g.  Seeding it keeps the first SQP steps
        at an acceptable length instead of overshooting along the
        linearized manifold.
        """
        inp = self.inp
        h = np.zeros(N_VARS)
        h[0:2] = 2.0 * inp.posture_reg
        h[2] = 2.0 * inp.alpha
        h[_TH] = 2.0 * inp.beta
        h[_Q] = 2.0 * inp.posture_reg
        h[_U] = 2.0 * inp.gamma
        h[0:22] += self.model.m_b * GRAVITY
        return np.diag(h)

    def lagrangian_hessian(self, x, lam, mu):
        """Exact objective Hessian plus finite differences of the analytic
        constraint-gradient field J(x)^T multipliers.

        The objective is quadratic, so only the constraint curvature needs
        differencing; the solver convexifies the result.
        """
        inp = self.inp
        h = np.zeros(N_VARS)
        h[0:2] = 2.0 * inp.posture_reg
        h[2] = 2.0 * inp.alpha
        h[_TH] = 2.0 * inp.beta
        h[_Q] = 2.0 * inp.posture_reg
        h[_U] = 2.0 * inp.gamma
        H = np.diag(h)
        if (lam.size and np.max(np.abs(lam)) > 0) or \
           (mu.size and np.max(np.abs(mu)) > 0):
            def grad_c(v):
                return self.jac_eq(v).T @ lam + self.jac_in(v).T @ mu
            step = 1e-6
            g0 = grad_c(x)
            Hc = np.zeros((N_VARS, N_VARS))
            for k in range(N_VARS):
                xp = x.copy()
                xp[k] += step
                Hc[:, k] = (grad_c(xp) - g0) / step
            H = H + 0.5 * (Hc + Hc.T)
        return H

    def initial_guess(self):
        return self.x0.copy()

    def _build_initial_guess(self):
        """Kinematically consistent start: stand where the face is in reach,
        hands on the face near the object CoM height."""
        inp = self.inp
        obj = inp.object
        model = self.model
        p_o = inp.p_o_init
        face_x = p_o[0] - obj.l / 2
        reach = model.arm_reach()

        p_cz = float(np.clip(p_o[2] + 0.125, inp.com_z_range[0],
                             min(model.standing_height, inp.com_z_range[1])))
        shoulder_z = p_cz + model.shoulder_offset[2]
        hand_z = float(np.clip(p_o[2],
                               max(0.03, shoulder_z - 0.95 * reach),
                               p_o[2] + obj.h / 2 - 0.02))
        dz = hand_z - shoulder_z
        dx = 0.9 * math.sqrt(max(reach ** 2 - dz ** 2, 1e-4))
        p_cx = face_x - dx - model.shoulder_offset[0]

        x0 = np.zeros(N_VARS)
        x0[_PC] = [p_cx, p_o[1], p_cz]
        q = model.nominal_q(p_cz).copy()
        base = BasePose(x0[_PC], np.zeros(3))
        hand_y = min(obj.w / 2 - 0.02, model.shoulder_offset[1])
        for i, (limb, sgn) in enumerate((("left_arm", 1.0), ("right_arm", -1.0))):
            target = np.array([face_x, p_o[1] + sgn * hand_y, hand_z])
            sl = slice(10 + 3 * i, 13 + 3 * i)
            q_ik, _ = solve_limb_ik(model, base, limb, target, q[sl])
            q[sl] = q_ik
        x0[_Q] = q
        fric = obj.mu_g * obj.m_o * GRAVITY
        u0 = np.zeros(16)
        u0[0] = u0[3] = fric / 2.0
        u0[8] = u0[11] = model.m_b * GRAVITY / 2.0
        x0[_U] = u0
        return x0


def reachability_check(inputs: PoseProblemInputs, model: RobotModel) -> None:
    """Coarse workspace test before building the NLP."""
    obj = inputs.object
    face_x = inputs.p_o_init[0] - obj.l / 2
    shoulder_x = inputs.p_c_ref[0] + model.shoulder_offset[0]
    gap = face_x - shoulder_x
    if gap > model.arm_reach() + 0.75:
        raise PoseInfeasibleError(
            f"object front face is {gap:.2f} m ahead of the shoulder, beyond "
            f"arm workspace (hand_on_face constraints unsatisfiable)",
            family="hand_on_face")
    if gap < -obj.l:
        raise PoseInfeasibleError(
            "object front face is behind the robot (hand_on_face constraints "
            "unsatisfiable)", family="hand_on_face")


def build_pose_nlp(inputs: PoseProblemInputs, model: RobotModel) -> NLPProblem:
    reachability_check(inputs, model)
    nlp = _PoseNLP(inputs, model)
    lb, ub = nlp.bounds()
    trust = np.concatenate([np.full(22, 0.6), np.full(16, 150.0)])
    return NLPProblem(
        n=N_VARS,
        objective=nlp.objective, gradient=nlp.gradient,
        c_eq=nlp.c_eq, jac_eq=nlp.jac_eq,
        c_in=nlp.c_in, jac_in=nlp.jac_in,
        lb=lb, ub=ub, x0=nlp.initial_guess(), hessian0=nlp.hessian0(),
        trust_box=trust, lagrangian_hessian=nlp.lagrangian_hessian)


def steady_state_residual(model: RobotModel, inputs: PoseProblemInputs,
                          sol: "PoseSolution") -> dict:
    """Force/moment residuals of the steady-state model rows, scaled by m_b*g.

    Evaluated directly from the solution fields (not through the NLP
    machinery): robot force/moment balance, object planar force and
    moment (y, z) balance.
    """
    obj = inputs.object
    g_vec = np.array([0.0, 0.0, -GRAVITY])
    f_h = sol.u_opt.f_h
    f_f = sol.u_opt.f_f
    m_f = sol.u_opt.m_f
    force_c = f_f[0] + f_f[1] - f_h[0] - f_h[1] + model.m_b * g_vec
    mom_c = np.zeros(3)
    mom_o = np.zeros(3)
    for i in range(2):
        mom_c += np.cross(sol.p_f_opt[i] - sol.p_c_opt, f_f[i])
        mom_c += np.cross(sol.p_h_opt[i] - sol.p_c_opt, -f_h[i])
        mom_c += MOMENT_SELECTION @ m_f[i]
        mom_o += np.cross(sol.p_h_opt[i] - sol.p_o, f_h[i])
    fric = obj.mu_g * obj.m_o * GRAVITY
    force_o = f_h[0][:2] + f_h[1][:2] - np.array([fric, 0.0])
    s = 1.0 / (model.m_b * GRAVITY)
    return {
        "robot_force": float(np.max(np.abs(force_c))) * s,
        "robot_moment": float(np.max(np.abs(mom_c))) * s,
        "object_force_xy": float(np.max(np.abs(force_o))) * s,
        "object_moment_yz": float(np.max(np.abs(mom_o[1:3]))) * s,
    }


def solve_pose(inputs: PoseProblemInputs, model: RobotModel,
               tol: float = 1e-6, max_iter: int = 200) -> PoseSolution:
    """Solve the pushing-pose NLP and package the solution.

    Raises PoseInfeasibleError when the solver does not reach an optimal
    certificate; the exception carries the best iterate and its residuals.
    """
    problem = build_pose_nlp(inputs, model)
    x, report, duals = solve_nlp(problem, tol=tol, max_iter=max_iter)
    sol = _package(inputs, model, x, report)
    if report.status != "optimal":
        res = steady_state_residual(model, inputs, sol)
        raise PoseInfeasibleError(
            f"pose optimization did not converge (status={report.status}, "
            f"feasibility={report.primal_residual:.2e}); "
            f"steady-state residuals: {res}",
            family="steady_state", solution=sol, residuals=res)
    return sol


def _package(inputs, model, x, report) -> PoseSolution:
    base = BasePose(x[_PC], x[_TH])
    pts = forward_kinematics(model, base, x[_Q], limit_tol=1e-3)
    u = ControlInput(x[_U])
    return PoseSolution(
        theta_opt=x[_TH].copy(), q_opt=x[_Q].copy(), p_c_opt=x[_PC].copy(),
        u_opt=u, p_h_opt=pts.p_h.copy(), p_f_opt=pts.p_f.copy(),
        f_h_ref=u.f_h.copy(), p_o=inputs.p_o_init.copy(), report=report)


def nominal_pose(model: RobotModel, obj: ObjectParams, p_o_init,
                 standoff: float = 0.28) -> PoseSolution:
    """Non-optimized standing pose with hands placed on the near face.

    Used by the ablation variants that skip pose optimization: upright
    trunk, bent-knee stance, hands put on the face by IK at a convenient
    height, and a statically split hand-force reference.
    """
    p_o = np.asarray(p_o_init, dtype=float).reshape(3)
    face_x = p_o[0] - obj.l / 2
    p_c = np.array([face_x - standoff, p_o[1], model.standing_height])
    q = model.nominal_q().copy()
    base = BasePose(p_c, np.zeros(3))
    hand_y = min(obj.w / 2 - 0.02, model.shoulder_offset[1])
    hand_z = float(np.clip(model.standing_height + model.shoulder_offset[2]
                           - 0.25, 0.05, p_o[2] + obj.h / 2 - 0.02))
    for i, (limb, sgn) in enumerate((("left_arm", 1.0), ("right_arm", -1.0))):
        target = np.array([face_x, p_o[1] + sgn * hand_y, hand_z])
        sl = slice(10 + 3 * i, 13 + 3 * i)
        q[sl], _ = solve_limb_ik(model, base, limb, target, q[sl])
    pts = forward_kinematics(model, base, q, limit_tol=1e-3)
    fric = obj.mu_g * obj.m_o * GRAVITY
    u = ControlInput.from_parts(
        f_h=[[fric / 2, 0, 0], [fric / 2, 0, 0]],
        f_f=[[fric / 2, 0, model.m_b * GRAVITY / 2],
             [fric / 2, 0, model.m_b * GRAVITY / 2]],
        m_f=np.zeros((2, 2)))
    rep = SolveReport(status="nominal", iterations=0, primal_residual=0.0,
                      dual_residual=0.0, solve_time_ms=0.0)
    return PoseSolution(theta_opt=np.zeros(3), q_opt=q, p_c_opt=p_c,
                        u_opt=u, p_h_opt=pts.p_h.copy(),
                        p_f_opt=pts.p_f.copy(), f_h_ref=u.f_h.copy(),
                        p_o=p_o.copy(), report=rep)
