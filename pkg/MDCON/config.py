"""
MDCON configurations

This module contains global configurations used in the MDCON code.
"""
from pathlib import Path

MEMBERSHIP_TOL = 1e-12
"""
Tolerance used when checking that a point belongs to a feasible set.

Box bounds, the simplex sum and the ball radius are all compared with
this slack (relative to the size of the set).

:type: float
"""

ENTROPY_FLOOR = 1e-300
"""
Lower bound applied to the coordinates of an entropy mirror step.

The gradient of the entropy d.g.f. needs strictly positive coordinates,
so every coordinate of the normalized step is floored at this value.

:type: float
"""

TIE_TOL = 1e-12
"""
Two pieces of a max-type oracle whose values differ by less than this
are considered tied. Finite-difference checks refuse to run at ties.

:type: float
"""

STEP_TOL = 1e-8
"""
Absolute tolerance of the per-step mirror descent inequality.

A step passes if its residual is at most ``STEP_TOL * (1 + scale)``
where ``scale`` is the magnitude of the terms involved.

:type: float
"""

GAP_TOL = 1e-9
"""
Slack added to the right-hand side of the objective-gap and
localization checks.

:type: float
"""

TELESCOPE_TOL = 1e-8
"""
Slack of the telescoping check on the Bregman distances to the solution.

:type: float
"""

DEFAULT_CAP_MULTIPLIER = 10.0
"""
The iteration cap of the adaptive method is this multiple of its
theoretical iteration bound.

:type: float
"""

OMEGA_GRID = 401
"""
Default number of grid points per axis for the estimation of the
objective growth function.

:type: int
"""

OMEGA_MAX_DIM = 3
"""
The growth-function estimator is a grid search and is restricted to
problems of at most this dimension.

:type: int
"""

REFERENCE_MAX_DIM = 10
"""
Largest dimension accepted by the reference solver.

:type: int
"""

REFERENCE_BUDGET = 20000
"""
Default number of projected subgradient iterations of the reference
solver before the SLSQP polish.

:type: int
"""

REFERENCE_TOL = 1e-7
"""
Target accuracy (in objective value) of the reference solver.

:type: float
"""

REAL_FORMAT = '.17g'
"""
Format specification of every real written to disk.

Seventeen significant digits make the decimal representation of an
IEEE double round-trip exactly.

:type: str
"""

INSTANCE_VERSION = 1
"""
Version tag written to, and required in, instance files.

:type: int
"""

EXIT_OK = 0
"""
Exit code of a successful command.

:type: int
"""

EXIT_CHECK_FAILED = 1
"""
Exit code of a command that detected a mathematical failure: a failed
check or a violated invariant.

:type: int
"""

EXIT_USAGE = 2
"""
Exit code of a usage, I/O or parse failure.

:type: int
"""

LOG_ENV_VAR = 'MD_LOG'
"""
Name of the environment variable selecting the log level of the
command line interface. One of ``quiet``, ``info`` or ``debug``.

:type: str
"""

LOGGER_NAME = 'MDCON'
"""
Name of the package logger. Every module logs to a child of it.

:type: str
"""

PRESET_PATH = Path(__file__).parent / 'presets'
"""
The path to run configuration presets.

:type: pathlib.Path
"""
