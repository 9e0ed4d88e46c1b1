import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from locopush.kinematics import RobotModel
from locopush.dynamics import ObjectParams


@pytest.fixture
def model():
    return RobotModel()


@pytest.fixture
def box10():
    return ObjectParams(l=0.5, w=0.5, h=0.5, m_o=10.0, mu_g=0.5)


def random_configuration(rng, model, margin=0.05):
    """Random base pose + joint vector strictly inside the limits."""
    lo = model.joint_lower + margin
    hi = model.joint_upper - margin
    q = lo + (hi - lo) * rng.random(16)
    p_c = rng.uniform(-1.0, 1.0, 3)
    theta = np.array([rng.uniform(-0.6, 0.6), rng.uniform(-0.8, 0.8),
                      rng.uniform(-np.pi, np.pi)])
    return p_c, theta, q
