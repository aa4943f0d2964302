"""MDCON reference module

This module contains an independent solver for small instances and the
checks that compare solver runs with the convergence guarantees:

- the per-step mirror descent inequality, replayed from the trace
- the bound on :math:`\\min_{k \\in I} v_f(x^k, x_*)`
- the objective gap bound for smooth objectives
- the growth-function bound :math:`f(y) - f_* \\leq \\omega(v_f(y, x_*))`
- the strong convexity localization used by restarts
"""
from dataclasses import dataclass
from typing import List, Tuple
import logging
import math
import warnings
import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import minimize

from MDCON import config
from MDCON.geometry import EuclideanBox, EuclideanBall, EntropySimplex, as_point, Point
from MDCON.instances import ProblemInstance
from MDCON.solvers import SolveTrace, RestartReport
from MDCON.helpers import wrap_iterator

logger = logging.getLogger(__name__)

SOLUTION_REQUIRED = 'known solution required'


class ReferenceSolverWarning(RuntimeWarning):
    """
    Warning raised when the reference solver does not reach its target
    accuracy within its budget.
    """


@dataclass
class CheckReport:
    """
    Outcome of a check of the form ``lhs <= rhs``.

    Attributes
    ----------
    name : str
        The check.
    passed : bool
        Whether the inequality holds within the check's tolerance.
    lhs : float
        The measured quantity.
    rhs : float
        The bound.
    margin : float
        ``rhs - lhs``.
    details : str
        A human readable explanation.
    applicable : bool
        ``False`` if the premises of the check do not hold. Such a
        report is neither a pass nor a failure.
    """
    name: str
    passed: bool
    lhs: float
    rhs: float
    margin: float
    details: str = ''
    applicable: bool = True

    @property
    def ok(self) -> bool:
        """
        ``True`` unless the check applies and fails.
        """
        return self.passed or not self.applicable

    @property
    def status(self) -> str:
        """
        ``'pass'``, ``'FAIL'`` or ``'n/a'``.
        """
        if not self.applicable:
            return 'n/a'
        return 'pass' if self.passed else 'FAIL'

    @classmethod
    def compare(cls, name: str, lhs: float, rhs: float, tol: float = 0.,
                details: str = '', strict: bool = False) -> 'CheckReport':
        """
        Build a report for ``lhs <= rhs + tol``, or ``lhs < rhs`` if ``strict``.
        """
        passed = bool(lhs < rhs) if strict else bool(lhs <= rhs + tol)
        return cls(name, passed, float(lhs), float(rhs), float(rhs - lhs), details)

    @classmethod
    def missing(cls, name: str, what: str = SOLUTION_REQUIRED) -> 'CheckReport':
        """
        A failed report for a check that lacks required data.
        """
        return cls(name, False, math.nan, math.nan, math.nan, what)


def _require_points(trace: SolveTrace):
    if not trace.has_points:
        raise ValueError('The trace has no retained iterates; rerun with keep_points=True')


def _known_value(inst: ProblemInstance) -> float:
    if inst.known_value is not None:
        return inst.known_value
    return inst.objective.value(inst.known_solution)


def _set_constraints(setup, n: int) -> Tuple[list, list]:
    """
    SLSQP bounds and constraints describing the feasible set, for the
    variables ``(x, t)``.
    """
    if isinstance(setup, EuclideanBox):
        bounds = [(lo, hi) for lo, hi in zip(setup.lower, setup.upper)] + [(None, None)]
        return bounds, []
    if isinstance(setup, EuclideanBall):
        a, r = setup.ball_center, setup.radius

        def ball(z):
            diff = z[:n] - a
            return np.array([r**2 - diff @ diff])

        def ball_jac(z):
            jac = np.zeros((1, n + 1))
            jac[0, :n] = -2*(z[:n] - a)
            return jac
        return [(None, None)]*(n + 1), [{'type': 'ineq', 'fun': ball, 'jac': ball_jac}]
    if isinstance(setup, EntropySimplex):
        jac = np.zeros((1, n + 1))
        jac[0, :n] = 1.0
        simplex = {'type': 'eq', 'fun': lambda z: np.array([np.sum(z[:n]) - 1.0]), 'jac': lambda z: jac}
        return [(0., 1.)]*n + [(None, None)], [simplex]
    raise NotImplementedError(f'No reference constraints for setup {setup.kind}')


def _all_piece_gradients(oracle, x: Point) -> NDArray:
    m = oracle.n_pieces
    return oracle.piece_gradients(np.tile(x, (m, 1)), np.arange(m))


def _polish(inst: ProblemInstance, x_start: Point) -> Tuple[Point, bool]:
    """
    Solve the epigraph form :math:`\\min t` s.t. :math:`f_i(x) \\leq t`,
    :math:`g_j(x) \\leq 0`, :math:`x \\in X` with SLSQP.
    """
    n = inst.dim
    f, g = inst.objective, inst.constraint
    bounds, constraints = _set_constraints(inst.setup, n)

    def epigraph(z):
        return z[n] - f.piece_values(z[:n])

    def epigraph_jac(z):
        jac = np.ones((f.n_pieces, n + 1))
        jac[:, :n] = -_all_piece_gradients(f, z[:n])
        return jac

    def feasible(z):
        return -g.piece_values(z[:n])

    def feasible_jac(z):
        jac = np.zeros((g.n_pieces, n + 1))
        jac[:, :n] = -_all_piece_gradients(g, z[:n])
        return jac

    constraints = constraints + [
        {'type': 'ineq', 'fun': epigraph, 'jac': epigraph_jac},
        {'type': 'ineq', 'fun': feasible, 'jac': feasible_jac},
    ]
    z0 = np.append(x_start, f.value(x_start))
    result = minimize(
        lambda z: z[n], z0,
        jac=lambda z: np.eye(n + 1)[n],
        method='SLSQP',
        bounds=bounds,
        constraints=constraints,
        options={'ftol': 1e-14, 'maxiter': 500}
    )
    x = inst.setup.project(result.x[:n])
    return x, bool(result.success)


def reference_solve(inst: ProblemInstance, budget: int = config.REFERENCE_BUDGET) -> Tuple[Point, float]:
    """
    Solve a small instance to high accuracy without mirror descent.

    The first phase is a projected subgradient method with steps
    :math:`D/(\\|s\\|_2\\sqrt{k+1})` on the exact penalty
    :math:`\\max\\{f(x) - f_{best}, g(x)\\}`, where :math:`f_{best}` is the
    best objective value seen at a feasible point. The best feasible
    point is then polished with SLSQP on the epigraph form of the problem.

    Parameters
    ----------
    inst : ProblemInstance
        The problem, of dimension at most ``config.REFERENCE_MAX_DIM``.
    budget : int, default=config.REFERENCE_BUDGET
        Iterations of the first phase.

    Returns
    -------
    x_ref : numpy.ndarray
        The reference solution.
    f_ref : float
        :math:`f(x_{ref})`.

    Raises
    ------
    ValueError
        If the dimension is too large or ``budget`` is not positive.

    Warns
    -----
    ReferenceSolverWarning
        If the polish fails or returns an infeasible point. The first
        phase result is returned with the achieved accuracy in the message.
    """
    if inst.dim > config.REFERENCE_MAX_DIM:
        raise ValueError(f'The reference solver handles dimension <= {config.REFERENCE_MAX_DIM}, got {inst.dim}')
    if budget < 1:
        raise ValueError(f'budget must be positive, got {budget}')
    setup, f, g = inst.setup, inst.objective, inst.constraint
    diameter = max(math.sqrt(setup.max_sq_distance(setup.center)), config.MEMBERSHIP_TOL)
    x = setup.center
    best_x, best_f = None, math.inf
    for k in range(budget):
        f_val, f_grad = f._evaluate(x)
        g_val, g_grad = g._evaluate(x)
        if g_val <= 0 and f_val < best_f:
            best_x, best_f = x, f_val
        direction = f_grad if f_val - best_f >= g_val else g_grad
        norm = float(np.linalg.norm(direction))
        if norm == 0:
            if direction is f_grad:
                break
            continue
        x = setup.project(x - diameter/(norm*math.sqrt(k + 1))*direction)
    if best_x is None:
        best_x = x
        best_f = f.value(x)
    x_ref, converged = _polish(inst, best_x)
    g_ref = g.value(x_ref)
    if converged and g_ref <= config.REFERENCE_TOL:
        f_ref = f.value(x_ref)
        if f_ref <= best_f + config.REFERENCE_TOL:
            return x_ref, f_ref
    warnings.warn(
        f'Reference polish did not converge (g = {g_ref:.3g}); returning the subgradient '
        f'phase result, whose accuracy is only about {diameter/math.sqrt(budget):.3g}',
        ReferenceSolverWarning
    )
    return best_x, best_f


def _omega_candidates(setup, x_star: Point, half_width: float, center: Point, per_axis: int) -> NDArray:
    """
    Grid points within ``half_width`` of ``center`` in every coordinate.
    For the simplex the last coordinate is determined by the others.
    """
    simplex = isinstance(setup, EntropySimplex)
    dims = setup.dim - 1 if simplex else setup.dim
    axes = [np.linspace(c - half_width, c + half_width, per_axis) for c in center[:dims]]
    mesh = np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1).reshape(-1, dims)
    if simplex:
        mesh = np.hstack([mesh, 1.0 - np.sum(mesh, axis=1, keepdims=True)])
    return mesh


def estimate_omega(inst: ProblemInstance, tau: float, grid: int = config.OMEGA_GRID) -> float:
    """
    Grid estimate of the growth function

    .. math::

        \\omega(\\tau) = \\max\\{f(x) - f(x_*) : x \\in X, \\|x - x_*\\| \\leq \\tau\\}

    A grid of ``grid`` points per axis covers the bounding box of the
    :math:`\\tau`-ball and is refined once around its maximizer.

    Parameters
    ----------
    inst : ProblemInstance
        The problem, with a known solution and dimension at most
        ``config.OMEGA_MAX_DIM``.
    tau : float
        The radius, nonnegative.
    grid : int, default=config.OMEGA_GRID
        Points per axis. Three-dimensional problems use at most 101.

    Returns
    -------
    float
        The estimate, nonnegative.

    Raises
    ------
    ValueError
        If the solution is unknown, the dimension is too large, ``tau``
        is negative or ``grid < 2``.
    """
    if not inst.has_solution:
        raise ValueError(f'estimate_omega: {SOLUTION_REQUIRED}')
    if inst.dim > config.OMEGA_MAX_DIM:
        raise ValueError(f'estimate_omega handles dimension <= {config.OMEGA_MAX_DIM}, got {inst.dim}')
    if not tau >= 0:
        raise ValueError(f'tau must be nonnegative, got {tau}')
    if grid < 2:
        raise ValueError(f'grid must be at least 2, got {grid}')
    setup, f = inst.setup, inst.objective
    x_star = inst.known_solution
    f_star = _known_value(inst)
    if tau == 0:
        return max(0.0, f.value(x_star) - f_star)
    per_axis = grid if inst.dim <= 2 else min(grid, 101)
    best = max(0.0, f.value(x_star) - f_star)
    center = x_star
    half_width = tau
    for _ in range(2):
        points = _omega_candidates(setup, x_star, half_width, center, per_axis)
        mask = setup.contains_many(points) & (setup._norm(points - x_star) <= tau)
        if not np.any(mask):
            break
        points = points[mask]
        values = f.values(points) - f_star
        i = int(np.argmax(values))
        best = max(best, float(values[i]))
        # refine around the maximizer
        center = points[i]
        half_width = 2*half_width/(per_axis - 1)
    return best


def check_md_step_inequality(trace: SolveTrace, inst: ProblemInstance) -> CheckReport:
    """
    Replay the per-step mirror descent inequality with :math:`x = x_*`,

    .. math::

        h_k\\langle \\nabla_k, x^k - x_* \\rangle \\leq
        \\frac{h_k^2}{2}\\|\\nabla_k\\|_*^2 + V(x^k, x_*) - V(x^{k+1}, x_*)

    Subgradients are recomputed with the solver's tie-break.

    Parameters
    ----------
    trace : SolveTrace
        A run with retained iterates.
    inst : ProblemInstance
        The instance of the run.

    Returns
    -------
    CheckReport
        ``lhs`` is the largest residual, ``rhs`` the tolerance
        ``config.STEP_TOL*(1 + scale)``.

    Raises
    ------
    ValueError
        If the trace has no retained iterates.
    """
    name = 'md_step_inequality'
    _require_points(trace)
    if not inst.has_solution:
        return CheckReport.missing(name)
    setup = inst.setup
    x_star = inst.known_solution
    x = trace.points[:-1]
    x_next = trace.points[1:]
    grads = np.empty_like(x)
    prod = trace.productive
    if np.any(prod):
        grads[prod] = inst.objective.subgradients(x[prod])
    if np.any(~prod):
        grads[~prod] = inst.constraint.subgradients(x[~prod])
    h = trace.step_sizes
    lin = h*np.einsum('ki,ki->k', grads, x - x_star)
    quad = 0.5*h**2*setup._dual_norm(grads)**2
    v_now = setup._bregman(x, x_star)
    v_next = setup._bregman(x_next, x_star)
    residuals = lin - quad - v_now + v_next
    scale = float(np.max(np.abs(lin) + quad + v_now + v_next))
    worst = int(np.argmax(residuals))
    return CheckReport.compare(
        name, residuals[worst], config.STEP_TOL*(1 + scale),
        details=f'worst step k={worst} of {trace.n_iterations}'
    )


def _vf_target(trace: SolveTrace, inst: ProblemInstance) -> float:
    if trace.algorithm == 'partial':
        return trace.eps/inst.M_g
    return trace.eps


def check_vf_bound(trace: SolveTrace, inst: ProblemInstance) -> CheckReport:
    """
    :math:`\\min_{k \\in I} v_f(x^k, x_*) < \\varepsilon/M_g` for the
    partially adaptive method, :math:`< \\varepsilon` for the adaptive one.
    """
    name = 'vf_bound'
    if not inst.has_solution:
        return CheckReport.missing(name)
    if trace.vf_values is None:
        trace.attach_solution(inst)
    if trace.vf_values is None:
        raise ValueError('The trace has no retained iterates; rerun with keep_points=True')
    bound = _vf_target(trace, inst)
    return CheckReport.compare(
        name, trace.min_productive_vf(), bound, strict=True,
        details=f'min over |I|={trace.productive_count} productive steps'
    )


def check_productive_exists(trace: SolveTrace) -> CheckReport:
    """
    :math:`|I| \\geq 1`.
    """
    return CheckReport.compare(
        'productive_exists', 1, trace.productive_count,
        details=f'|I|={trace.productive_count} |J|={trace.nonproductive_count}'
    )


def check_feasibility(trace: SolveTrace, inst: ProblemInstance) -> CheckReport:
    """
    :math:`g(\\bar x) \\leq \\varepsilon`.
    """
    return CheckReport.compare(
        'feasibility', inst.constraint.value(trace.output_point), trace.eps,
        details='g at the output point'
    )


def check_gap_bound(trace: SolveTrace, inst: ProblemInstance, eps: float = None) -> CheckReport:
    """
    The objective gap bound for objectives with Lipschitz gradient,

    .. math::

        f(\\bar x) - f_* \\leq \\|\\nabla f(x_*)\\|_* \\delta + \\frac{L}{2}\\delta^2

    with :math:`\\delta = \\varepsilon/M_g` for the partially adaptive
    method and :math:`\\delta = \\varepsilon` for the adaptive one.

    Parameters
    ----------
    trace : SolveTrace
        The run.
    inst : ProblemInstance
        The instance, with known solution and gradient norm at it.
    eps : float, optional
        The accuracy. Defaults to ``trace.eps``.

    Returns
    -------
    CheckReport
        The report, with tolerance ``config.GAP_TOL``.
    """
    name = 'gap_bound'
    if not inst.has_solution:
        return CheckReport.missing(name)
    if inst.grad_at_solution_norm is None:
        return CheckReport.missing(name, 'gradient norm at the solution required')
    eps = trace.eps if eps is None else eps
    delta = eps/inst.M_g if trace.algorithm == 'partial' else eps
    bound = inst.grad_at_solution_norm*delta + 0.5*inst.L*delta**2
    gap = inst.objective.value(trace.output_point) - _known_value(inst)
    return CheckReport.compare(name, gap, bound, config.GAP_TOL, details=f'delta={delta:.6g} L={inst.L:.6g}')


def check_telescoping(trace: SolveTrace, inst: ProblemInstance) -> CheckReport:
    """
    :math:`\\sum_k (V(x^k, x_*) - V(x^{k+1}, x_*)) = V(x^0, x_*) - V(x^N, x_*) \\leq \\Theta_0^2`.
    """
    name = 'telescoping'
    _require_points(trace)
    if not inst.has_solution:
        return CheckReport.missing(name)
    v = inst.setup._bregman(trace.points, inst.known_solution)
    total = float(np.sum(v[:-1] - v[1:]))
    closed = float(v[0] - v[-1])
    tol = config.TELESCOPE_TOL*(1 + float(np.max(v)))
    if abs(total - closed) > tol:
        return CheckReport(name, False, total, closed, closed - total, 'sum does not telescope')
    return CheckReport.compare(name, closed, inst.theta0_sq, tol, details='V(x0,x*) - V(xN,x*)')


def check_growth_bound(trace: SolveTrace, inst: ProblemInstance, grid: int = 101) -> CheckReport:
    """
    For every productive iterate,
    :math:`f(x^k) - f_* \\leq \\omega(v_f(x^k, x_*))` up to the grid resolution.
    """
    name = 'growth_bound'
    if not inst.has_solution:
        return CheckReport.missing(name)
    _require_points(trace)
    if trace.vf_values is None:
        trace.attach_solution(inst)
    f_star = _known_value(inst)
    G = inst.grad_at_solution_norm or 0.0
    worst_excess, worst_k = -math.inf, -1
    cache = {}
    for k in np.flatnonzero(trace.productive):
        gap = trace.f_values[k] - f_star
        v = float(trace.vf_values[k])
        if v <= 0:
            bound, slack = 0.0, config.GAP_TOL
        else:
            if v not in cache:
                cache[v] = estimate_omega(inst, v, grid)
            spacing = 2*v/(grid - 1)
            bound = cache[v]
            slack = (G + inst.L*v)*spacing*math.sqrt(inst.dim) + config.GAP_TOL
        excess = gap - bound - slack
        if excess > worst_excess:
            worst_excess, worst_k = excess, int(k)
    return CheckReport.compare(name, worst_excess, 0.0, details=f'worst productive step k={worst_k}')


def check_strong_convexity_localization(
    x: ArrayLike,
    inst: ProblemInstance,
    eps_f: float,
    eps_g: float
) -> CheckReport:
    """
    Localization by strong convexity: if :math:`f(x) - f_* \\leq \\varepsilon_f`
    and :math:`g(x) \\leq \\varepsilon_g` then

    .. math::

        \\frac{\\mu}{2}\\|x - x_*\\|^2 \\leq \\max\\{\\varepsilon_f, \\varepsilon_g\\}

    Parameters
    ----------
    x : array-like
        The point.
    inst : ProblemInstance
        The instance, with ``mu > 0`` and a known solution.
    eps_f : float
        Objective accuracy.
    eps_g : float
        Constraint accuracy.

    Returns
    -------
    CheckReport
        Marked not applicable if ``x`` violates the premises.

    Raises
    ------
    ValueError
        If ``inst.mu`` is not positive.
    """
    name = 'strong_convexity_localization'
    if not inst.mu > 0:
        raise ValueError(f'Localization requires mu > 0, got {inst.mu}')
    if not inst.has_solution:
        return CheckReport.missing(name)
    x = as_point(x, inst.dim)
    gap = inst.objective.value(x) - _known_value(inst)
    g_val = inst.constraint.value(x)
    diff = x - inst.known_solution
    lhs = 0.5*inst.mu*float(diff @ diff)
    rhs = max(eps_f, eps_g)
    if gap > eps_f or g_val > eps_g:
        return CheckReport(name, False, lhs, rhs, rhs - lhs,
                           f'premises fail: f gap {gap:.3g}, g {g_val:.3g}', applicable=False)
    return CheckReport.compare(name, lhs, rhs, config.GAP_TOL)


def check_restart_radii(report: RestartReport) -> CheckReport:
    """
    :math:`R_p^2 = R_0^2 2^{-p}` and :math:`\\varepsilon_p = \\mu R_p^2/2`
    exactly, so consecutive radii halve.
    """
    worst = 0.0
    previous = report.R0_sq
    for r in report.restarts:
        worst = max(
            worst,
            abs(r.R_p_sq - math.ldexp(report.R0_sq, -r.p)),
            abs(r.R_p_sq/previous - 0.5),
            abs(r.eps_p - 0.5*report.mu*r.R_p_sq)
        )
        previous = r.R_p_sq
    return CheckReport.compare('restart_radii', worst, 0.0, details=f'{len(report.restarts)} restarts')


def check_restart_distances(report: RestartReport, inst: ProblemInstance) -> List[CheckReport]:
    """
    :math:`\\|x_p - x_*\\|^2 \\leq R_p^2` at every restart and
    :math:`\\|x_{\\hat p} - x_*\\|^2 \\leq 2\\varepsilon/\\mu` at the end.
    """
    if not inst.has_solution:
        return [CheckReport.missing('restart_distances'), CheckReport.missing('restart_final')]
    excess = max(r.dist_sq - r.R_p_sq for r in report.restarts)
    diff = report.final_point - inst.known_solution
    return [
        CheckReport.compare('restart_distances', excess, 0.0, config.GAP_TOL,
                            details='max over p of |x_p - x*|^2 - R_p^2'),
        CheckReport.compare('restart_final', float(diff @ diff), 2*report.eps/report.mu, config.GAP_TOL,
                            details=f'p_hat={report.p_hat}')
    ]


def check_restart_iterations(report: RestartReport) -> CheckReport:
    """
    Total inner iterations at most
    :math:`\\hat p + \\sum_p \\lceil 2\\Theta_0^2\\tilde M_g^2/\\text{accuracy}_p^2 \\rceil`.
    """
    return CheckReport.compare(
        'restart_iterations', report.total_inner_iterations, report.iteration_bound_total,
        details=f'p_hat={report.p_hat}'
    )


def check_restart_localization(report: RestartReport, inst: ProblemInstance) -> CheckReport:
    """
    ``check_strong_convexity_localization`` at every restart with
    :math:`\\varepsilon_f = \\varepsilon_g = \\varepsilon_p`.
    """
    name = 'restart_localization'
    if not inst.has_solution:
        return CheckReport.missing(name)
    reports = [check_strong_convexity_localization(r.x_p, inst, r.eps_p, r.eps_p) for r in report.restarts]
    applicable = [r for r in reports if r.applicable]
    if len(applicable) == 0:
        return CheckReport(name, False, math.nan, math.nan, math.nan, 'premises fail at every restart', False)
    worst = min(applicable, key=lambda r: r.margin)
    passed = all(r.passed for r in applicable)
    return CheckReport(name, passed, worst.lhs, worst.rhs, worst.margin,
                       f'{len(applicable)} of {len(reports)} restarts applicable')


def check_restart_md_steps(report: RestartReport, inst: ProblemInstance) -> CheckReport:
    """
    The worst per-step mirror descent residual over all inner solves.
    """
    name = 'restart_md_steps'
    if not inst.has_solution:
        return CheckReport.missing(name)
    worst = max(r.step_residual_worst for r in report.restarts)
    return CheckReport.compare(name, worst, config.STEP_TOL, details='inner solves, rescaled coordinates')


def check_reference_agreement(inst: ProblemInstance, budget: int = config.REFERENCE_BUDGET) -> CheckReport:
    """
    :math:`|f_{ref} - f_*| \\leq 10^{-6}` for the reference solution.
    """
    name = 'reference_agreement'
    if not inst.has_solution:
        return CheckReport.missing(name)
    _, f_ref = reference_solve(inst, budget)
    return CheckReport.compare(name, abs(f_ref - _known_value(inst)), 1e-6, details=f'f_ref={f_ref:.10g}')


def run_checks(
    inst: ProblemInstance,
    trace: SolveTrace = None,
    report: RestartReport = None,
    reference: bool = True,
    verbose: bool = False
) -> List[CheckReport]:
    """
    Run every check that applies to a solver result.

    Parameters
    ----------
    inst : ProblemInstance
        The instance.
    trace : SolveTrace, optional
        The result of ``run_adaptive`` or ``run_partial_adaptive``.
    report : RestartReport, optional
        The result of ``run_restarted``.
    reference : bool, default=True
        Whether to compare with ``reference_solve``.
    verbose : bool, default=False
        Whether to show a progress bar.

    Returns
    -------
    list of CheckReport
        In a fixed order.

    Raises
    ------
    ValueError
        If neither or both of ``trace`` and ``report`` are given.
    """
    if (trace is None) == (report is None):
        raise ValueError('Exactly one of trace and report is required')
    checks = []
    if trace is not None:
        checks += [
            lambda: check_productive_exists(trace),
            lambda: check_feasibility(trace, inst),
            lambda: check_md_step_inequality(trace, inst),
            lambda: check_vf_bound(trace, inst),
            lambda: check_gap_bound(trace, inst),
            lambda: check_telescoping(trace, inst),
        ]
        if inst.dim <= config.OMEGA_MAX_DIM:
            checks.append(lambda: check_growth_bound(trace, inst))
    else:
        checks += [
            lambda: check_restart_radii(report),
            lambda: check_restart_iterations(report),
            lambda: check_restart_distances(report, inst),
            lambda: check_restart_localization(report, inst),
            lambda: check_restart_md_steps(report, inst),
        ]
    if reference and inst.dim <= config.REFERENCE_MAX_DIM:
        checks.append(lambda: check_reference_agreement(inst))
    results = []
    for check in wrap_iterator(checks, verbose, desc='Checks', total=len(checks)):
        result = check()
        if isinstance(result, list):
            results += result
        else:
            results.append(result)
    for r in results:
        logger.debug('%s: %s lhs=%g rhs=%g', r.name, r.status, r.lhs, r.rhs)
    return results
