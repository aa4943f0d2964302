"""
MDCON: Mirror Descent for CONstrained problems

MDCON solves convex minimization problems with a convex functional
inequality constraint by mirror descent with productive and
non-productive steps. It provides the adaptive and partially adaptive
methods, a restarted variant for strongly convex problems, and
numerical checks of the accuracy guarantees of each run.
"""

__version__ = '1.0.0'

from .geometry import ProxSetup, EuclideanBox, EuclideanBall, EntropySimplex
from .oracles import ConvexOracle, MaxOfQuadratics, PiecewiseMaxAffine
from .instances import ProblemInstance, load_instance, save_instance
from .solvers import run_adaptive, run_partial_adaptive, run_restarted
from . import params
