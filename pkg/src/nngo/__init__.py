"""Deterministic global optimization of problems with trained feed-forward
neural networks embedded.

The solver works in the space of the network inputs only: bounds come from
propagating McCormick relaxations through the network equations, built on
the convex/concave hulls of the activation functions, and a best-first
branch-and-bound closes the gap.
"""

import os

from .bnb import Node, SolveConfig, SolveReport, Status, solve
from .envelopes import (ActivationMode, TangentPoints, TanhHull,
                        sigmoid_envelope, solve_tangent_points, tanh_envelope,
                        tanh_reformulated)
from .interval import Interval
from .localopt import LocalResult, local_solve
from .mccormick import McCormickValue, mc_affine, mc_constant, mc_mul, mc_variable
from .mlp import Layer, Mlp, mlp_load, mlp_save
from .problem import Problem, problem_load
from .train import Dataset, TrainConfig, lhc_sample, train_mlp

__version__ = "0.1.0"


def fixtures_dir() -> str:
    """Directory holding the committed model and problem fixtures."""
    return os.path.join(os.path.dirname(__file__), "fixtures")
