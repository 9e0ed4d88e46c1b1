"""Humanoid box pushing: pose optimization, loco-manipulation MPC, simulator."""

from .kinematics import (BasePose, BodyPoints, RobotModel, contact_jacobian,
                         forward_kinematics)
from .dynamics import (ControlInput, ObjectParams, StateSpace, UnifiedState,
                       build_state_space, discretize, euler_rate_map,
                       object_friction)
from .solvers import (NLPProblem, QPProblem, SolveReport, check_nlp_kkt,
                      check_qp_kkt, solve_nlp, solve_qp)

__version__ = "0.1.0"
