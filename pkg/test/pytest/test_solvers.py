#!/usr/bin/env python

"""
Tests for `MDCON.solvers` module
"""

import logging
import math
import pytest
import numpy as np

from MDCON.geometry import EuclideanBox
from MDCON.oracles import MaxOfQuadratics, PiecewiseMaxAffine
from MDCON.instances import ProblemInstance
from MDCON.solvers import (
    InvariantViolation, iteration_bound_adaptive, iteration_bound_partial,
    run_adaptive, run_partial_adaptive, run_restarted,
    tau, phi_inverse, number_of_restarts
)


def test_iteration_bound_adaptive():
    """
    Test `iteration_bound_adaptive()`
    """
    assert iteration_bound_adaptive(1., 0.5, 0.1) == 100
    assert iteration_bound_adaptive(2., 1., 1.) == 8
    assert iteration_bound_adaptive(0.5, 1., 1.) == 2
    with pytest.raises(ValueError):
        iteration_bound_adaptive(1., 1., 0.)


def test_iteration_bound_partial():
    """
    Test `iteration_bound_partial()`
    """
    assert iteration_bound_partial(math.sqrt(2), 0.25, 0.1) == 100
    assert iteration_bound_partial(math.sqrt(2), 0.25, 0.2) == 25
    assert iteration_bound_partial(math.sqrt(2), 0.25, 0.05) == 400
    assert iteration_bound_partial(1., 1., 1.) == 2
    assert iteration_bound_partial(0.5, 1., 1.) == 1
    with pytest.raises(ValueError):
        iteration_bound_partial(0., 1., 1.)


def test_partial_active_linear(active_linear: ProblemInstance):
    """
    Partially adaptive run on the half-plane fixture.
    """
    eps = 0.1
    trace = run_partial_adaptive(active_linear, eps)
    assert trace.n_iterations == 100
    assert trace.stop_reason == 'completed'
    assert trace.productive_count + trace.nonproductive_count == 100
    assert trace.productive_count >= 1
    x_bar = trace.output_point
    assert active_linear.constraint.value(x_bar) <= eps
    assert trace.min_productive_vf() < eps/math.sqrt(2)
    assert active_linear.objective.value(x_bar) - 0.25 <= 0.0525
    assert trace.f_values[trace.output_index] == active_linear.objective.value(x_bar)
    assert np.all(trace.step_sizes[~trace.productive] == pytest.approx(eps/2))
    assert np.max(trace.step_residuals) <= 1e-12


def test_partial_deterministic(active_linear: ProblemInstance):
    """
    Two runs give the same trace.
    """
    a = run_partial_adaptive(active_linear, 0.1)
    b = run_partial_adaptive(active_linear, 0.1)
    assert np.all(a.points == b.points)
    assert np.all(a.step_sizes == b.step_sizes)


def test_partial_step_size():
    """
    Productive steps are eps/(M_g |grad f|).
    """
    inst = ProblemInstance(
        setup=EuclideanBox([-1., -1.], [1., 1.]),
        objective=PiecewiseMaxAffine([[4., 0.]], [0.]),
        constraint=PiecewiseMaxAffine([[2., 0.]], [-10.]),
        M_g=2.,
    )
    trace = run_partial_adaptive(inst, 0.1, keep_points=False)
    assert trace.productive[0]
    assert trace.step_sizes[0] == pytest.approx(0.0125)
    assert trace.nonproductive_count == 0
    assert not trace.has_points


def test_adaptive_active_linear(active_linear: ProblemInstance):
    """
    Adaptive run on the half-plane fixture.
    """
    eps = 0.1
    trace = run_adaptive(active_linear, eps)
    assert trace.stop_reason == 'criterion_met'
    assert trace.n_iterations <= iteration_bound_adaptive(active_linear.M_g, active_linear.theta0_sq, eps)
    assert trace.min_productive_vf() < eps
    assert active_linear.constraint.value(trace.output_point) <= eps
    # the stopping sum
    norms = trace.grad_dual_norms[~trace.productive]
    total = 0.5*eps**2*trace.productive_count + np.sum(0.5*eps**2/norms**2)
    assert total >= active_linear.theta0_sq - 1e-12


def test_adaptive_all_productive():
    """
    With an inactive constraint every step is productive and the run
    stops after 2 theta0_sq/eps^2 steps.
    """
    c = np.array([0.5, -0.25])
    inst = ProblemInstance(
        setup=EuclideanBox([-2., -2.], [2., 2.]),
        objective=MaxOfQuadratics([np.eye(2)], [c], [0.5*float(c @ c)]),
        constraint=PiecewiseMaxAffine([[1., 0.]], [-10.]),
        M_g=1.,
        L=1.,
        theta0_sq=4.,
    )
    trace = run_adaptive(inst, 0.7)
    assert trace.nonproductive_count == 0
    assert trace.n_iterations == 17
    assert trace.stop_reason == 'criterion_met'


def test_adaptive_zero_gradient():
    """
    A zero objective gradient gives a zero productive step.
    """
    inst = ProblemInstance(
        setup=EuclideanBox([-2., -2.], [2., 2.]),
        objective=MaxOfQuadratics([np.eye(2)], [[0., 0.]], [0.]),
        constraint=PiecewiseMaxAffine([[1., 0.]], [-1.]),
        M_g=1.,
        L=1.,
        theta0_sq=1.,
        known_solution=[0., 0.],
        known_value=0.,
        grad_at_solution_norm=0.,
    )
    trace = run_adaptive(inst, 0.5)
    assert trace.productive[0]
    assert trace.step_sizes[0] == 0
    assert trace.vf_values[0] == 0
    assert np.all(trace.output_point == inst.setup.center)
    assert trace.output_index == 0
    assert trace.n_iterations == 8
    assert np.all(trace.step_residuals == 0)


def test_adaptive_cap(interior_optimum: ProblemInstance):
    """
    Hitting the cap is reported, not raised.
    """
    trace = run_adaptive(interior_optimum, 0.1, cap=3)
    assert trace.stop_reason == 'cap_reached'
    assert trace.n_iterations == 3
    with pytest.raises(ValueError):
        run_adaptive(interior_optimum, 0.1, cap=0)
    with pytest.raises(ValueError):
        run_adaptive(interior_optimum, 0.1, cap_multiplier=0.5)


def test_no_productive_step(infeasible_everywhere: ProblemInstance):
    """
    A run without productive steps is an invariant violation.
    """
    with pytest.raises(InvariantViolation):
        run_partial_adaptive(infeasible_everywhere, 1.)
    with pytest.raises(InvariantViolation):
        run_adaptive(infeasible_everywhere, 1.)


def test_vanishing_constraint_gradient():
    """
    g > eps with a zero subgradient is an invariant violation.
    """
    inst = ProblemInstance(
        setup=EuclideanBox([-1., -1.], [1., 1.]),
        objective=MaxOfQuadratics([np.eye(2)], [[0., 0.]], [0.]),
        constraint=PiecewiseMaxAffine([[0., 0.]], [5.]),
        M_g=1.,
    )
    with pytest.raises(InvariantViolation, match='vanishes'):
        run_adaptive(inst, 0.1)


def test_trace_table(active_linear: ProblemInstance):
    """
    Test `SolveTrace.to_table()`
    """
    trace = run_partial_adaptive(active_linear, 0.2)
    table = trace.to_table()
    assert table.colnames == ['k', 'kind', 'h', 'f', 'g', 'grad_dual_norm', 'vf_if_known']
    assert len(table) == 25
    assert set(table['kind']) <= {'productive', 'nonproductive'}
    assert np.all(table['vf_if_known'].mask == ~trace.productive)
    summary = trace.summary()
    assert summary['N'] == 25
    assert summary['productive'] == trace.productive_count


def test_tau_phi():
    """
    Test `tau()` and `phi_inverse()`
    """
    phi = phi_inverse(1., 2., 2., 1.)
    assert phi == pytest.approx(math.sqrt(2) - 1)
    assert tau(phi, 2., 2., 1.) == pytest.approx(1., rel=1e-12)
    phi = phi_inverse(1., 0.5, 2., 2.)
    assert phi == 0.5
    assert tau(0.5, 0.5, 2., 2.) == 1.
    # no objective growth: only the constraint branch
    assert phi_inverse(0.3, 0., 0., 3.) == pytest.approx(0.1)
    assert phi_inverse(0.3, 2., 0., 1.) == pytest.approx(0.15)
    with pytest.raises(ValueError):
        phi_inverse(1., 1., 1., 0.)
    with pytest.raises(ValueError):
        phi_inverse(0., 1., 1., 1.)


@pytest.mark.parametrize('eps', [1e-4, 1e-2, 1., 100.])
def test_phi_inverts_tau(eps):
    """
    tau(phi(eps)) = eps.
    """
    for G, L, M_g in [(0.7, 1.3, 2.), (0., 4., 0.5), (3., 0., 1.), (1e-3, 1e3, 1e-2)]:
        assert tau(phi_inverse(eps, G, L, M_g), G, L, M_g) == pytest.approx(eps, rel=1e-12)


def test_phi_random_constants():
    """
    tau(phi(eps)) = eps for 100 seeded constant tuples, and phi is
    strictly increasing in eps.
    """
    rng = np.random.default_rng(100)
    grid = np.logspace(-4, 1, 40)
    for _ in range(100):
        G = rng.uniform(0, 5)
        L = rng.uniform(0, 10)
        M_g = rng.uniform(0.1, 10)
        eps = 10**rng.uniform(-4, 1)
        delta = phi_inverse(eps, G, L, M_g)
        assert tau(delta, G, L, M_g) == pytest.approx(eps, rel=1e-10)
        if delta < eps/M_g:
            assert delta*G + 0.5*L*delta**2 == pytest.approx(eps, rel=1e-10)
        else:
            assert delta*M_g == pytest.approx(eps, rel=1e-10)
        phis = np.array([phi_inverse(e, G, L, M_g) for e in grid])
        assert np.all(np.diff(phis) > 0)


def test_number_of_restarts():
    """
    Test `number_of_restarts()`
    """
    assert number_of_restarts(1., 4., 0.5) == 2
    assert number_of_restarts(1., 0.5, 1e-3) == 8
    assert number_of_restarts(1., 0.5, 10.) == 1
    with pytest.raises(ValueError):
        number_of_restarts(0., 4., 0.5)


def test_restarted_requires_mu(active_linear: ProblemInstance):
    """
    Restarts need strong convexity.
    """
    with pytest.raises(ValueError, match='mu'):
        run_restarted(active_linear, 0.1)


def test_restarted_structure(strongly_convex_ball: ProblemInstance):
    """
    Radii halve and the iteration count respects its bound.
    """
    report = run_restarted(strongly_convex_ball, 0.05, R0_sq=0.5)
    assert report.p_hat == 3
    assert [r.p for r in report.restarts] == [1, 2, 3]
    assert [r.R_p_sq for r in report.restarts] == [0.25, 0.125, 0.0625]
    assert [r.eps_p for r in report.restarts] == [0.125, 0.0625, 0.03125]
    for r in report.restarts:
        assert r.inner_iterations == r.iteration_bound
        assert r.dist_sq <= r.R_p_sq + 1e-9
    assert report.total_inner_iterations <= report.iteration_bound_total
    diff = report.final_point - strongly_convex_ball.known_solution
    assert diff @ diff <= 2*0.05
    table = report.to_table()
    assert table.colnames == ['p', 'R_p_sq', 'eps_p', 'inner_accuracy', 'inner_iterations', 'dist_sq_if_known']


def test_restarted_scaled(strongly_convex_ball: ProblemInstance):
    """
    The scaled inner accuracy uses fewer iterations per restart early on.
    """
    phi = run_restarted(strongly_convex_ball, 0.1, R0_sq=0.5)
    scaled = run_restarted(strongly_convex_ball, 0.1, R0_sq=0.5, inner_accuracy='scaled', keep_traces=True)
    assert scaled.restarts[0].inner_iterations == pytest.approx(576, abs=1)
    assert phi.restarts[0].inner_iterations == pytest.approx(5184, abs=1)
    assert len(scaled.traces) == scaled.p_hat
    for r in scaled.restarts:
        assert r.dist_sq <= r.R_p_sq + 1e-9
    with pytest.raises(ValueError):
        run_restarted(strongly_convex_ball, 0.1, inner_accuracy='loose')


@pytest.mark.slow
def test_restarted_localization(strongly_convex_ball: ProblemInstance):
    """
    Every restart ends inside its localization ball.
    """
    eps = 1e-3
    report = run_restarted(strongly_convex_ball, eps, x0=[0., 0.], R0_sq=0.5)
    assert report.p_hat == 8
    for r in report.restarts:
        assert r.dist_sq <= math.ldexp(0.5, -r.p) + 1e-9
        assert r.step_residual_worst <= 1e-8
    diff = report.final_point - strongly_convex_ball.known_solution
    assert diff @ diff <= 2*eps/strongly_convex_ball.mu
    assert report.total_inner_iterations <= report.iteration_bound_total


def test_step_logging(active_linear: ProblemInstance, caplog):
    """
    Every step is logged at debug level.
    """
    with caplog.at_level(logging.DEBUG, logger='MDCON.solvers'):
        trace = run_partial_adaptive(active_linear, 0.2)
    steps = [r for r in caplog.records if r.levelno == logging.DEBUG and r.getMessage().startswith('step ')]
    assert len(steps) == trace.n_iterations == 25
    kinds = [' productive' in r.getMessage() for r in steps]
    assert kinds == list(trace.productive)
