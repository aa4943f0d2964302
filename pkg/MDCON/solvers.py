"""MDCON solvers module

This module contains the mirror descent methods for constrained
problems. Each iteration is either *productive* (the constraint is
:math:`\\varepsilon`-satisfied and the step follows :math:`\\nabla f`) or
*non-productive* (the step follows :math:`\\nabla g`).

- ``run_adaptive`` uses step sizes built from the current subgradient
  norms and stops by an accumulated criterion.
- ``run_partial_adaptive`` needs :math:`M_g` and runs a fixed number of
  iterations.
- ``run_restarted`` halves the squared localization radius of a strongly
  convex problem by repeated calls to ``run_partial_adaptive``.
"""
from typing import List
import logging
import math
import warnings
import numpy as np
from numpy.typing import ArrayLike
from astropy.table import Table, MaskedColumn

from MDCON import config
from MDCON.geometry import Point
from MDCON.instances import ProblemInstance
from MDCON.helpers import wrap_iterator

logger = logging.getLogger(__name__)


class InvariantViolation(RuntimeError):
    """
    Raised when a run contradicts the convergence theory, for example no
    productive step after the full iteration count. This signals a
    wrong constant or a broken instance.
    """


class RestartLocalizationWarning(RuntimeWarning):
    """
    Warning raised when a restart ends outside its localization ball
    :math:`\\|x_p - x_*\\|^2 \\leq R_p^2` on an instance with a known
    solution.
    """


PRODUCTIVE = 'productive'
NONPRODUCTIVE = 'nonproductive'


def _check_constants(M_g: float, theta0_sq: float, eps: float):
    for value, name in ((M_g, 'M_g'), (theta0_sq, 'theta0_sq'), (eps, 'eps')):
        if not (np.isfinite(value) and value > 0):
            raise ValueError(f'{name} must be positive and finite, got {value}')


def iteration_bound_adaptive(M_g: float, theta0_sq: float, eps: float) -> int:
    """
    Iteration bound of the adaptive method,
    :math:`N = \\lceil 2\\max\\{1, M_g^2\\}\\Theta_0^2/\\varepsilon^2 \\rceil`.

    Parameters
    ----------
    M_g : float
        Lipschitz constant of the constraint.
    theta0_sq : float
        :math:`\\Theta_0^2`.
    eps : float
        The accuracy.

    Returns
    -------
    int
        The bound.

    Raises
    ------
    ValueError
        If an input is not positive.
    """
    _check_constants(M_g, theta0_sq, eps)
    return math.ceil(2*max(1.0, M_g**2)*theta0_sq/eps**2)


def iteration_bound_partial(M_g: float, theta0_sq: float, eps: float) -> int:
    """
    Iteration count of the partially adaptive method,
    :math:`N = \\lceil 2 M_g^2\\Theta_0^2/\\varepsilon^2 \\rceil`.

    Raises
    ------
    ValueError
        If an input is not positive.
    """
    _check_constants(M_g, theta0_sq, eps)
    return math.ceil(2*M_g**2*theta0_sq/eps**2)


class SolveTrace:
    """
    Record of a mirror descent run, stored column by column.

    Parameters
    ----------
    algorithm : str
        ``'adaptive'`` or ``'partial'``.
    eps : float
        The accuracy the run used.
    productive : array-like of bool
        ``True`` for productive iterations.
    step_sizes : array-like
        :math:`h_k`.
    f_values : array-like
        :math:`f(x^k)`.
    g_values : array-like
        :math:`g(x^k)`.
    grad_dual_norms : array-like
        Dual norm of the subgradient that was stepped along.
    output_point : numpy.ndarray
        :math:`\\bar x`, the productive iterate with the smallest objective.
    output_index : int
        The iteration :math:`\\bar x` was taken at.
    stop_reason : str
        ``'criterion_met'``, ``'cap_reached'`` or ``'completed'``.
    points : numpy.ndarray, optional
        The iterates :math:`x^0, \\dots, x^N`, shape ``(N+1, n)``.
    grads : numpy.ndarray, optional
        The subgradients stepped along, shape ``(N, n)``.

    Attributes
    ----------
    vf_values : numpy.ndarray or None
        :math:`v_f(x^k, x_*)` on productive iterations, NaN elsewhere.
        Filled by ``attach_solution``.
    step_residuals : numpy.ndarray or None
        Per-step residual of the mirror descent inequality with
        :math:`x = x_*`. Filled by ``attach_solution``.
    """

    def __init__(
        self,
        algorithm: str,
        eps: float,
        productive: ArrayLike,
        step_sizes: ArrayLike,
        f_values: ArrayLike,
        g_values: ArrayLike,
        grad_dual_norms: ArrayLike,
        output_point: Point,
        output_index: int,
        stop_reason: str,
        points: np.ndarray = None,
        grads: np.ndarray = None,
    ):
        self.algorithm = algorithm
        self.eps = float(eps)
        self.productive = np.asarray(productive, dtype=bool)
        self.step_sizes = np.asarray(step_sizes, dtype=float)
        self.f_values = np.asarray(f_values, dtype=float)
        self.g_values = np.asarray(g_values, dtype=float)
        self.grad_dual_norms = np.asarray(grad_dual_norms, dtype=float)
        self.output_point = output_point
        self.output_index = int(output_index)
        self.stop_reason = stop_reason
        self.points = points
        self.grads = grads
        self.vf_values = None
        self.step_residuals = None

    @property
    def n_iterations(self) -> int:
        """
        The number of iterations :math:`N = |I| + |J|`.

        :type: int
        """
        return int(self.productive.shape[0])

    @property
    def productive_count(self) -> int:
        """
        :math:`|I|`.

        :type: int
        """
        return int(np.count_nonzero(self.productive))

    @property
    def nonproductive_count(self) -> int:
        """
        :math:`|J|`.

        :type: int
        """
        return self.n_iterations - self.productive_count

    @property
    def has_points(self) -> bool:
        """
        ``True`` if the iterates were retained.

        :type: bool
        """
        return self.points is not None

    @property
    def kinds(self) -> np.ndarray:
        """
        ``'productive'`` or ``'nonproductive'`` for each iteration.

        :type: numpy.ndarray
        """
        return np.where(self.productive, PRODUCTIVE, NONPRODUCTIVE)

    def attach_solution(self, inst: ProblemInstance) -> None:
        """
        Compute :math:`v_f(x^k, x_*)` and the per-step residuals

        .. math::

            h_k\\langle \\nabla_k, x^k - x_* \\rangle - \\frac{h_k^2}{2}\\|\\nabla_k\\|_*^2
            - V(x^k, x_*) + V(x^{k+1}, x_*)

        which are nonpositive up to rounding. Does nothing if the
        instance has no known solution or the iterates were not kept.

        Parameters
        ----------
        inst : ProblemInstance
            The instance the trace was produced on.
        """
        if not inst.has_solution or not self.has_points:
            return
        setup = inst.setup
        x_star = inst.known_solution
        x = self.points[:-1]
        x_next = self.points[1:]
        inner = np.einsum('ki,ki->k', self.grads, x - x_star)
        h = self.step_sizes
        self.step_residuals = (
            h*inner - 0.5*h**2*self.grad_dual_norms**2
            - setup._bregman(x, x_star) + setup._bregman(x_next, x_star)
        )
        vf = np.full(self.n_iterations, np.nan)
        nonzero = self.productive & (self.grad_dual_norms > 0)
        vf[nonzero] = inner[nonzero]/self.grad_dual_norms[nonzero]
        vf[self.productive & (self.grad_dual_norms == 0)] = 0.0
        self.vf_values = vf

    def min_productive_vf(self) -> float:
        """
        :math:`\\min_{k \\in I} v_f(x^k, x_*)`, or ``None`` before
        ``attach_solution``.
        """
        if self.vf_values is None or self.productive_count == 0:
            return None
        return float(np.min(self.vf_values[self.productive]))

    def to_table(self) -> Table:
        """
        The trace as a table with columns
        ``k, kind, h, f, g, grad_dual_norm, vf_if_known``.

        Returns
        -------
        astropy.table.Table
            One row per iteration. ``vf_if_known`` is masked where unknown.
        """
        n = self.n_iterations
        if self.vf_values is None:
            vf = MaskedColumn(np.zeros(n), name='vf_if_known', mask=np.ones(n, dtype=bool))
        else:
            vf = MaskedColumn(self.vf_values, name='vf_if_known', mask=np.isnan(self.vf_values))
        return Table(
            [
                np.arange(n),
                self.kinds,
                self.step_sizes,
                self.f_values,
                self.g_values,
                self.grad_dual_norms,
                vf
            ],
            names=('k', 'kind', 'h', 'f', 'g', 'grad_dual_norm', 'vf_if_known')
        )

    def summary(self) -> dict:
        """
        Counts and the output of the run.
        """
        return {
            'algorithm': self.algorithm,
            'eps': self.eps,
            'N': self.n_iterations,
            'productive': self.productive_count,
            'nonproductive': self.nonproductive_count,
            'stop_reason': self.stop_reason,
            'output_index': self.output_index,
            'output_point': self.output_point.copy(),
            'f_output': float(self.f_values[self.output_index]),
            'g_output': float(self.g_values[self.output_index]),
        }


class _TraceRecorder:
    """
    Accumulates iterations and tracks the best productive iterate.
    """

    def __init__(self, x0: Point, keep_points: bool):
        self.keep_points = keep_points
        self.productive = []
        self.step_sizes = []
        self.f_values = []
        self.g_values = []
        self.grad_dual_norms = []
        self.points = [x0.copy()] if keep_points else None
        self.grads = [] if keep_points else None
        self.best_f = np.inf
        self.best_x = None
        self.best_index = -1
        self.n_productive = 0

    def record(self, productive: bool, h: float, f: float, g: float,
               norm: float, grad: Point, x: Point, x_next: Point):
        k = len(self.productive)
        self.productive.append(productive)
        logger.debug(
            'step %d %s: h=%.6g f=%.6g g=%.6g |grad|_*=%.6g',
            k, 'productive' if productive else 'non-productive', h, f, g, norm
        )
        self.step_sizes.append(h)
        self.f_values.append(f)
        self.g_values.append(g)
        self.grad_dual_norms.append(norm)
        if self.keep_points:
            self.points.append(x_next)
            self.grads.append(grad)
        if productive:
            self.n_productive += 1
            if f < self.best_f:
                self.best_f = f
                self.best_x = x
                self.best_index = k

    def build(self, algorithm: str, eps: float, stop_reason: str) -> SolveTrace:
        return SolveTrace(
            algorithm=algorithm,
            eps=eps,
            productive=self.productive,
            step_sizes=self.step_sizes,
            f_values=self.f_values,
            g_values=self.g_values,
            grad_dual_norms=self.grad_dual_norms,
            output_point=self.best_x.copy(),
            output_index=self.best_index,
            stop_reason=stop_reason,
            points=np.array(self.points) if self.keep_points else None,
            grads=np.array(self.grads).reshape(-1, len(self.best_x)) if self.keep_points else None,
        )


def run_adaptive(
    inst: ProblemInstance,
    eps: float,
    cap: int = None,
    cap_multiplier: float = config.DEFAULT_CAP_MULTIPLIER,
    keep_points: bool = True,
    verbose: bool = False
) -> SolveTrace:
    """
    Adaptive mirror descent.

    Starting from the d.g.f. center, a point with :math:`g(x^k) \\leq \\varepsilon`
    takes the productive step :math:`h_k = \\varepsilon/\\|\\nabla f(x^k)\\|_*`
    along :math:`\\nabla f`; otherwise the step is
    :math:`h_k = \\varepsilon/\\|\\nabla g(x^k)\\|_*^2` along :math:`\\nabla g`.
    The run stops once

    .. math::

        \\Theta_0^2 \\leq \\frac{\\varepsilon^2}{2}|I| +
        \\sum_{k \\notin I} \\frac{\\varepsilon^2}{2\\|\\nabla g(x^k)\\|_*^2}

    A productive point with :math:`\\nabla f = 0` takes a zero step.

    Parameters
    ----------
    inst : ProblemInstance
        The problem.
    eps : float
        The accuracy :math:`\\varepsilon > 0`.
    cap : int, optional
        Maximum number of iterations. Defaults to ``cap_multiplier``
        times ``iteration_bound_adaptive``.
    cap_multiplier : float, default=config.DEFAULT_CAP_MULTIPLIER
        Used when ``cap`` is not given.
    keep_points : bool, default=True
        Whether to retain the iterates and subgradients.
    verbose : bool, default=False
        Whether to show a progress bar.

    Returns
    -------
    SolveTrace
        The trace, with ``stop_reason`` ``'criterion_met'`` or ``'cap_reached'``.

    Raises
    ------
    ValueError
        If ``eps`` or ``cap`` is not positive.
    InvariantViolation
        If :math:`\\nabla g = 0` at a point with :math:`g > \\varepsilon`,
        or if no productive step was taken.
    """
    bound = iteration_bound_adaptive(inst.M_g, inst.theta0_sq, eps)
    if cap is None:
        if not cap_multiplier >= 1:
            raise ValueError(f'cap_multiplier must be at least 1, got {cap_multiplier}')
        cap = math.ceil(cap_multiplier*bound)
    if cap < 1:
        raise ValueError(f'cap must be positive, got {cap}')
    setup, f, g = inst.setup, inst.objective, inst.constraint
    x = setup.center
    rec = _TraceRecorder(x, keep_points)
    half_eps_sq = 0.5*eps**2
    nonproductive_sum = 0.0
    stop_reason = 'cap_reached'
    for k in wrap_iterator(range(cap), verbose, desc='Adaptive MD', total=cap):
        g_val, g_grad = g._evaluate(x)
        if g_val <= eps:
            f_val, f_grad = f._evaluate(x)
            norm = float(setup._dual_norm(f_grad))
            if norm == 0:
                h = 0.0
                x_next = x.copy()
            else:
                h = eps/norm
                x_next = setup._mirror(x, h*f_grad)
            rec.record(True, h, f_val, g_val, norm, f_grad, x, x_next)
        else:
            norm = float(setup._dual_norm(g_grad))
            if norm == 0:
                raise InvariantViolation(
                    f'Iteration {k}: g(x) = {g_val:.6g} > eps but the subgradient of g vanishes, '
                    'so the constraint set is empty'
                )
            h = eps/norm**2
            x_next = setup._mirror(x, h*g_grad)
            nonproductive_sum += half_eps_sq/norm**2
            rec.record(False, h, f.value(x), g_val, norm, g_grad, x, x_next)
        x = x_next
        if inst.theta0_sq <= half_eps_sq*rec.n_productive + nonproductive_sum:
            stop_reason = 'criterion_met'
            break
    if rec.n_productive == 0:
        raise InvariantViolation(
            f'No productive step in {len(rec.productive)} iterations of adaptive mirror descent '
            f'({stop_reason}); the stopping criterion guarantees |I| >= 1'
        )
    trace = rec.build('adaptive', eps, stop_reason)
    trace.attach_solution(inst)
    logger.info(
        'adaptive on %s: eps=%g N=%d |I|=%d |J|=%d bound=%d stop=%s',
        inst.name, eps, trace.n_iterations, trace.productive_count,
        trace.nonproductive_count, bound, stop_reason
    )
    return trace


def run_partial_adaptive(
    inst: ProblemInstance,
    eps: float,
    keep_points: bool = True,
    verbose: bool = False
) -> SolveTrace:
    """
    Partially adaptive mirror descent.

    Runs exactly :math:`N = \\lceil 2M_g^2\\Theta_0^2/\\varepsilon^2 \\rceil`
    iterations with productive steps
    :math:`h_k = \\varepsilon/(M_g\\|\\nabla f(x^k)\\|_*)` and the constant
    non-productive step :math:`h_k = \\varepsilon/M_g^2`. A productive
    point with :math:`\\nabla f = 0` takes a zero step.

    Parameters
    ----------
    inst : ProblemInstance
        The problem. ``inst.M_g`` must be a valid Lipschitz constant of
        the constraint.
    eps : float
        The accuracy :math:`\\varepsilon > 0`.
    keep_points : bool, default=True
        Whether to retain the iterates and subgradients.
    verbose : bool, default=False
        Whether to show a progress bar.

    Returns
    -------
    SolveTrace
        The trace, with ``stop_reason='completed'``.

    Raises
    ------
    ValueError
        If ``eps`` or ``inst.M_g`` is not positive.
    InvariantViolation
        If no iteration was productive.

    Examples
    --------
    >>> from MDCON.instances import make_known_solution_instance
    >>> trace = run_partial_adaptive(make_known_solution_instance('active_linear'), 0.1)
    >>> trace.n_iterations
    100
    """
    n_iter = iteration_bound_partial(inst.M_g, inst.theta0_sq, eps)
    setup, f, g = inst.setup, inst.objective, inst.constraint
    M_g = inst.M_g
    h_nonproductive = eps/M_g**2
    x = setup.center
    rec = _TraceRecorder(x, keep_points)
    for _ in wrap_iterator(range(n_iter), verbose, desc='Partial adaptive MD', total=n_iter):
        g_val, g_grad = g._evaluate(x)
        if g_val <= eps:
            f_val, f_grad = f._evaluate(x)
            norm = float(setup._dual_norm(f_grad))
            if norm == 0:
                h = 0.0
                x_next = x.copy()
            else:
                h = eps/(M_g*norm)
                x_next = setup._mirror(x, h*f_grad)
            rec.record(True, h, f_val, g_val, norm, f_grad, x, x_next)
        else:
            x_next = setup._mirror(x, h_nonproductive*g_grad)
            norm = float(setup._dual_norm(g_grad))
            rec.record(False, h_nonproductive, f.value(x), g_val, norm, g_grad, x, x_next)
        x = x_next
    if rec.n_productive == 0:
        raise InvariantViolation(
            f'No productive step after N = {n_iter} iterations of partially adaptive mirror descent. '
            'The bound N = ceil(2 M_g^2 Theta0^2 / eps^2) guarantees |I| >= 1, '
            'so M_g or Theta0^2 is wrong for this instance'
        )
    trace = rec.build('partial', eps, 'completed')
    trace.attach_solution(inst)
    logger.info(
        'partial on %s: eps=%g N=%d |I|=%d |J|=%d',
        inst.name, eps, trace.n_iterations, trace.productive_count, trace.nonproductive_count
    )
    return trace


def tau(delta: float, grad_norm_star: float, L: float, M_g: float) -> float:
    """
    The accuracy reached at distance :math:`\\delta` from the solution,

    .. math::

        \\tau(\\delta) = \\max\\{\\delta\\|\\nabla f(x_*)\\|_* + \\frac{L\\delta^2}{2}, \\delta M_g\\}

    Parameters
    ----------
    delta : float
        The distance, nonnegative.
    grad_norm_star : float
        :math:`\\|\\nabla f(x_*)\\|_*`.
    L : float
        Lipschitz constant of :math:`\\nabla f`.
    M_g : float
        Lipschitz constant of :math:`g`.

    Returns
    -------
    float
        :math:`\\tau(\\delta)`.
    """
    return max(delta*grad_norm_star + 0.5*L*delta**2, delta*M_g)


def phi_inverse(eps: float, grad_norm_star: float, L: float, M_g: float) -> float:
    """
    The inverse :math:`\\varphi(\\varepsilon)` of ``tau``.

    .. math::

        \\varphi(\\varepsilon) = \\min\\left\\{
        \\frac{2\\varepsilon}{\\sqrt{\\|\\nabla f(x_*)\\|_*^2 + 2\\varepsilon L} + \\|\\nabla f(x_*)\\|_*},
        \\frac{\\varepsilon}{M_g} \\right\\}

    The first term equals
    :math:`(\\sqrt{\\|\\nabla f(x_*)\\|_*^2 + 2\\varepsilon L} - \\|\\nabla f(x_*)\\|_*)/L`
    and is written without the cancellation. It is infinite when both
    :math:`L` and :math:`\\|\\nabla f(x_*)\\|_*` vanish.

    Parameters
    ----------
    eps : float
        The target accuracy, positive.
    grad_norm_star : float
        :math:`\\|\\nabla f(x_*)\\|_* \\geq 0`.
    L : float
        :math:`L \\geq 0`.
    M_g : float
        :math:`M_g > 0`.

    Returns
    -------
    float
        :math:`\\varphi(\\varepsilon)`, with
        :math:`\\tau(\\varphi(\\varepsilon)) = \\varepsilon`.

    Raises
    ------
    ValueError
        If an input is out of range.

    Examples
    --------
    >>> round(phi_inverse(1.0, 2.0, 2.0, 1.0), 5)
    0.41421
    """
    if not (np.isfinite(eps) and eps > 0):
        raise ValueError(f'eps must be positive, got {eps}')
    if not (np.isfinite(grad_norm_star) and grad_norm_star >= 0):
        raise ValueError(f'grad_norm_star must be nonnegative, got {grad_norm_star}')
    if not (np.isfinite(L) and L >= 0):
        raise ValueError(f'L must be nonnegative, got {L}')
    if not (np.isfinite(M_g) and M_g > 0):
        raise ValueError(f'M_g must be positive, got {M_g}; tau is degenerate')
    denominator = math.sqrt(grad_norm_star**2 + 2*eps*L) + grad_norm_star
    objective_branch = math.inf if denominator == 0 else 2*eps/denominator
    return min(objective_branch, eps/M_g)


class RestartRecord:
    """
    Summary of one restart.

    Parameters
    ----------
    p : int
        The restart index, starting at 1.
    R_p_sq : float
        :math:`R_p^2 = R_0^2 2^{-p}`.
    eps_p : float
        :math:`\\varepsilon_p = \\mu R_p^2/2`.
    inner_accuracy : float
        The accuracy the inner solve was run with.
    inner_iterations : int
        Iterations of the inner solve.
    iteration_bound : int
        :math:`\\lceil 2\\Theta_0^2 \\tilde M_g^2/\\text{accuracy}^2 \\rceil` of the inner solve.
    x_p : numpy.ndarray
        The point after the restart.
    f_value : float
        :math:`f(x_p)`.
    g_value : float
        :math:`g(x_p)`.
    dist_sq : float or None
        :math:`\\|x_p - x_*\\|^2` when the solution is known.
    step_residual_worst : float or None
        Largest mirror descent residual of the inner solve.
    """

    def __init__(self, p, R_p_sq, eps_p, inner_accuracy, inner_iterations,
                 iteration_bound, x_p, f_value, g_value, dist_sq=None, step_residual_worst=None):
        self.p = p
        self.R_p_sq = R_p_sq
        self.eps_p = eps_p
        self.inner_accuracy = inner_accuracy
        self.inner_iterations = inner_iterations
        self.iteration_bound = iteration_bound
        self.x_p = x_p
        self.f_value = f_value
        self.g_value = g_value
        self.dist_sq = dist_sq
        self.step_residual_worst = step_residual_worst


class RestartReport:
    """
    Result of ``run_restarted``.

    Parameters
    ----------
    restarts : list of RestartRecord
        One record per restart.
    final_point : numpy.ndarray
        :math:`x_{\\hat p}`.
    p_hat : int
        The number of restarts.
    x0 : numpy.ndarray
        The starting point.
    R0_sq : float
        :math:`R_0^2`.
    mu : float
        The strong convexity.
    eps : float
        The target accuracy.
    inner_mode : str
        ``'phi'`` or ``'scaled'``.
    traces : list of SolveTrace, optional
        The inner traces, in rescaled coordinates.
    """

    def __init__(self, restarts: List[RestartRecord], final_point: Point, p_hat: int,
                 x0: Point, R0_sq: float, mu: float, eps: float, inner_mode: str,
                 traces: List[SolveTrace] = None):
        self.restarts = restarts
        self.final_point = final_point
        self.p_hat = p_hat
        self.x0 = x0
        self.R0_sq = R0_sq
        self.mu = mu
        self.eps = eps
        self.inner_mode = inner_mode
        self.traces = traces

    @property
    def total_inner_iterations(self) -> int:
        """
        :math:`\\sum_p N_p`.

        :type: int
        """
        return sum(r.inner_iterations for r in self.restarts)

    @property
    def iteration_bound_total(self) -> int:
        """
        :math:`\\hat p + \\sum_p \\lceil 2\\Theta_0^2 \\tilde M_g^2/\\text{accuracy}_p^2 \\rceil`.

        :type: int
        """
        return self.p_hat + sum(r.iteration_bound for r in self.restarts)

    def to_table(self) -> Table:
        """
        One row per restart with columns
        ``p, R_p_sq, eps_p, inner_accuracy, inner_iterations, dist_sq_if_known``.
        """
        known = [r.dist_sq is not None for r in self.restarts]
        dist = MaskedColumn(
            [r.dist_sq if r.dist_sq is not None else 0.0 for r in self.restarts],
            name='dist_sq_if_known',
            mask=[not k for k in known],
            dtype=float
        )
        return Table(
            [
                np.array([r.p for r in self.restarts], dtype=int),
                np.array([r.R_p_sq for r in self.restarts], dtype=float),
                np.array([r.eps_p for r in self.restarts], dtype=float),
                np.array([r.inner_accuracy for r in self.restarts], dtype=float),
                np.array([r.inner_iterations for r in self.restarts], dtype=int),
                dist
            ],
            names=('p', 'R_p_sq', 'eps_p', 'inner_accuracy', 'inner_iterations', 'dist_sq_if_known')
        )


def number_of_restarts(mu: float, R0_sq: float, eps: float) -> int:
    """
    :math:`\\hat p = \\lceil \\log_2(\\mu R_0^2/(2\\varepsilon)) \\rceil`, at least 1.

    Examples
    --------
    >>> number_of_restarts(1.0, 4.0, 0.5)
    2
    """
    for value, name in ((mu, 'mu'), (R0_sq, 'R0_sq'), (eps, 'eps')):
        if not (np.isfinite(value) and value > 0):
            raise ValueError(f'{name} must be positive, got {value}')
    return max(1, math.ceil(math.log2(mu*R0_sq/(2*eps))))


def _grad_norm_bound(inst: ProblemInstance, rng: np.random.Generator, samples: int = 1000) -> float:
    """
    :math:`\\|\\nabla f(x_*)\\|_*` if stored, else the largest sampled
    :math:`\\|\\nabla f\\|_*` over the feasible set.
    """
    if inst.grad_at_solution_norm is not None:
        return inst.grad_at_solution_norm
    points = np.vstack([inst.setup.center, inst.setup.sample(rng, samples)])
    return float(np.max(inst.setup._dual_norm(inst.objective.subgradients(points))))


def run_restarted(
    inst: ProblemInstance,
    eps: float,
    x0: ArrayLike = None,
    R0_sq: float = None,
    inner_accuracy: str = 'phi',
    seed: int = 0,
    keep_traces: bool = False,
    verbose: bool = False
) -> RestartReport:
    """
    Restarted partially adaptive mirror descent for strongly convex problems.

    Restart :math:`p = 1, \\dots, \\hat p` sets :math:`R_p^2 = R_0^2 2^{-p}`
    and :math:`\\varepsilon_p = \\mu R_p^2/2`, then solves the problem in
    the coordinates :math:`y = (x - x_{p-1})/R_{p-1}`, where the constants
    become :math:`\\tilde M_g = M_g R_{p-1}`, :math:`\\tilde L = L R_{p-1}^2`,
    :math:`\\|\\nabla \\tilde f(y_*)\\|_* = R_{p-1}\\|\\nabla f(x_*)\\|_*`, and
    :math:`\\Theta_0^2` is the d.g.f. bound on the unit ball. The inner
    accuracy is :math:`\\varphi(\\varepsilon_p)` computed with these
    constants (``'phi'``) or :math:`\\tilde M_g\\varphi(\\varepsilon_p)`
    (``'scaled'``).

    Parameters
    ----------
    inst : ProblemInstance
        The problem, with ``inst.mu > 0`` and a Euclidean setup.
    eps : float
        The target accuracy.
    x0 : array-like, optional
        The starting point. Defaults to the d.g.f. center.
    R0_sq : float, optional
        :math:`R_0^2 \\geq \\|x_0 - x_*\\|^2`. Defaults to
        :math:`\\max_{x \\in X}\\|x - x_0\\|^2`.
    inner_accuracy : str, default='phi'
        ``'phi'`` or ``'scaled'``.
    seed : int, default=0
        Seed for sampling :math:`\\|\\nabla f\\|_*` when
        :math:`\\|\\nabla f(x_*)\\|_*` is not stored.
    keep_traces : bool, default=False
        Whether to keep the inner traces in the report.
    verbose : bool, default=False
        Whether to show a progress bar over the restarts.

    Returns
    -------
    RestartReport
        The per-restart records and the final point.

    Raises
    ------
    ValueError
        If ``inst.mu`` is not positive, the setup is not Euclidean, or
        an input is out of range.
    InvariantViolation
        If an inner solve has no productive step.

    Warns
    -----
    RestartLocalizationWarning
        If the solution is known and a restart ends with
        :math:`\\|x_p - x_*\\|^2 > R_p^2`.
    """
    if not inst.mu > 0:
        raise ValueError(f'Restarts require strong convexity, got mu = {inst.mu}')
    if inst.setup.norm_name != 'l2':
        raise ValueError(f'Restarts require a Euclidean setup, got {inst.setup.kind}')
    if inner_accuracy not in ('phi', 'scaled'):
        raise ValueError(f'inner_accuracy must be "phi" or "scaled", got {inner_accuracy}')
    x0 = inst.setup.center if x0 is None else inst.setup.check_point(x0, 'x0')
    if R0_sq is None:
        R0_sq = inst.setup.max_sq_distance(x0)
    R0_sq = float(R0_sq)
    p_hat = number_of_restarts(inst.mu, R0_sq, eps)
    grad_norm = _grad_norm_bound(inst, np.random.default_rng(seed))
    records = []
    traces = [] if keep_traces else None
    x_prev = x0
    for p in wrap_iterator(range(1, p_hat + 1), verbose, desc='Restarts', total=p_hat):
        R_prev_sq = math.ldexp(R0_sq, -(p - 1))
        R_prev = math.sqrt(R_prev_sq)
        R_p_sq = math.ldexp(R0_sq, -p)
        eps_p = 0.5*inst.mu*R_p_sq
        inner_theta = inst.setup.rescaled(x_prev, R_prev).unit_ball_dgf_bound()
        inner = inst.rescaled(x_prev, R_prev, theta0_sq=inner_theta)
        phi = phi_inverse(eps_p, grad_norm*R_prev, inner.L, inner.M_g)
        accuracy = phi if inner_accuracy == 'phi' else inner.M_g*phi
        trace = run_partial_adaptive(inner, accuracy)
        x_p = inst.setup.project(x_prev + R_prev*trace.output_point)
        dist_sq = None
        step_residual_worst = None
        if inst.has_solution:
            diff = x_p - inst.known_solution
            dist_sq = float(diff @ diff)
            step_residual_worst = float(np.max(trace.step_residuals))
            if dist_sq > R_p_sq + config.GAP_TOL:
                warnings.warn(
                    f'Restart {p}: |x_p - x*|^2 = {dist_sq:.6g} exceeds R_p^2 = {R_p_sq:.6g}',
                    RestartLocalizationWarning
                )
        records.append(RestartRecord(
            p=p,
            R_p_sq=R_p_sq,
            eps_p=eps_p,
            inner_accuracy=accuracy,
            inner_iterations=trace.n_iterations,
            iteration_bound=iteration_bound_partial(inner.M_g, inner.theta0_sq, accuracy),
            x_p=x_p,
            f_value=inst.objective.value(x_p),
            g_value=inst.constraint.value(x_p),
            dist_sq=dist_sq,
            step_residual_worst=step_residual_worst
        ))
        if keep_traces:
            traces.append(trace)
        logger.info(
            'restart %d/%d: R_p^2=%g eps_p=%g accuracy=%g N_p=%d',
            p, p_hat, R_p_sq, eps_p, accuracy, trace.n_iterations
        )
        x_prev = x_p
    report = RestartReport(
        restarts=records,
        final_point=x_prev.copy(),
        p_hat=p_hat,
        x0=x0,
        R0_sq=R0_sq,
        mu=inst.mu,
        eps=eps,
        inner_mode=inner_accuracy,
        traces=traces
    )
    logger.info('restarted on %s: p_hat=%d total inner iterations=%d',
                inst.name, p_hat, report.total_inner_iterations)
    return report
