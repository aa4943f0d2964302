"""
Configuration for pytest.
"""
from pathlib import Path
import logging
import numpy as np
import pytest

from MDCON.geometry import EuclideanBox
from MDCON.oracles import MaxOfQuadratics, PiecewiseMaxAffine
from MDCON import config
from MDCON.instances import ProblemInstance, make_known_solution_instance, save_instance


@pytest.fixture
def active_linear() -> ProblemInstance:
    """
    Half-plane constrained quadratic with an active constraint.
    """
    return make_known_solution_instance('active_linear')


@pytest.fixture
def strongly_convex_ball() -> ProblemInstance:
    """
    Strongly convex objective and constraint.
    """
    return make_known_solution_instance('strongly_convex_ball')


@pytest.fixture
def max_quadratic_active() -> ProblemInstance:
    """
    Two quadratic pieces, half-plane constraint.
    """
    return make_known_solution_instance('max_quadratic_active')


@pytest.fixture
def interior_optimum() -> ProblemInstance:
    """
    Inactive constraint, zero gradient at the solution.
    """
    return make_known_solution_instance('interior_optimum')


@pytest.fixture
def infeasible_everywhere() -> ProblemInstance:
    """
    ``g(x) = x_1 + 5 >= 4`` on ``[-1, 1]^2``, so no step is ever productive.
    """
    return ProblemInstance(
        setup=EuclideanBox([-1., -1.], [1., 1.]),
        objective=MaxOfQuadratics([np.eye(2)], [[0., 0.]], [0.]),
        constraint=PiecewiseMaxAffine([[1., 0.]], [5.]),
        M_g=1.,
        L=1.,
        name='infeasible_everywhere'
    )


@pytest.fixture
def rng() -> np.random.Generator:
    """
    A seeded random generator.
    """
    return np.random.default_rng(42)


@pytest.fixture
def active_linear_file(tmp_path: Path, active_linear: ProblemInstance) -> Path:
    """
    The ``active_linear`` fixture written to disk.
    """
    path = tmp_path / 'active_linear.json'
    save_instance(active_linear, path)
    return path


@pytest.fixture
def strongly_convex_ball_file(tmp_path: Path, strongly_convex_ball: ProblemInstance) -> Path:
    """
    The ``strongly_convex_ball`` fixture written to disk.
    """
    path = tmp_path / 'strongly_convex_ball.json'
    save_instance(strongly_convex_ball, path)
    return path


@pytest.fixture(autouse=True)
def detach_cli_handlers():
    """
    Remove the stderr handler ``mdcon`` attaches, so later tests do not
    write to a closed capture stream.
    """
    yield
    logger = logging.getLogger(config.LOGGER_NAME)
    for handler in list(logger.handlers):
        if getattr(handler, '_mdcon_cli', False):
            logger.removeHandler(handler)
