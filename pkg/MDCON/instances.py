"""MDCON instances module

This module assembles constrained problems

.. math::

    \\min_{x \\in X} f(x) \\quad \\text{s.t.} \\quad g(x) \\leq 0

from a proximal setup and two oracles, generates random and analytic
instances, and reads and writes the instance file format.
"""
from typing import Dict, Union
from pathlib import Path
import json
import re
import numpy as np
from numpy.typing import ArrayLike

from MDCON import config
from MDCON.geometry import ProxSetup, EuclideanBox, as_point, Point
from MDCON.oracles import (
    ConvexOracle, MaxOfQuadratics, PiecewiseMaxAffine,
    StronglyConvexAugmented, RescaledOracle
)


class InstanceParseError(ValueError):
    """
    Raised when an instance file cannot be parsed. The message names the
    line and column or the missing field.
    """


class InstanceValidationError(ValueError):
    """
    Raised when an instance is well formed but inconsistent: dimension
    mismatches, indefinite matrices or an infeasible stored solution.
    """


SOLUTION_TOL = 1e-9
"""
Tolerance of the consistency checks on a stored solution.

:type: float
"""


class ProblemInstance:
    """
    A constrained convex problem together with the constants the
    solvers need.

    Parameters
    ----------
    setup : ProxSetup
        The feasible set and its geometry.
    objective : ConvexOracle
        The objective :math:`f`.
    constraint : ConvexOracle
        The functional constraint :math:`g`.
    M_g : float
        The Lipschitz constant of :math:`g` on the feasible set, in the
        setup norm.
    L : float, default=0.
        The Lipschitz constant of :math:`\\nabla f`, 0 if unknown.
    mu : float, default=0.
        The common strong convexity of :math:`f` and :math:`g`, 0 if
        they are not strongly convex.
    theta0_sq : float, optional
        An upper bound :math:`\\Theta_0^2 \\geq d(x_*)`. Defaults to
        :math:`\\max_{x \\in X} d(x)`.
    known_solution : array-like, optional
        The solution :math:`x_*`.
    known_value : float, optional
        The optimal value :math:`f(x_*)`.
    grad_at_solution_norm : float, optional
        :math:`\\|\\nabla f(x_*)\\|_*`.
    name : str, default='instance'
        A label used in logs and tables.
    """

    def __init__(
        self,
        setup: ProxSetup,
        objective: ConvexOracle,
        constraint: ConvexOracle,
        M_g: float,
        L: float = 0.,
        mu: float = 0.,
        theta0_sq: float = None,
        known_solution: ArrayLike = None,
        known_value: float = None,
        grad_at_solution_norm: float = None,
        name: str = 'instance'
    ):
        self.setup = setup
        self.objective = objective
        self.constraint = constraint
        self.M_g = float(M_g)
        self.L = float(L)
        self.mu = float(mu)
        self.theta0_sq = setup.max_dgf() if theta0_sq is None else float(theta0_sq)
        self.known_solution = None if known_solution is None else as_point(
            known_solution, setup.dim, 'known_solution')
        self.known_value = None if known_value is None else float(known_value)
        self.grad_at_solution_norm = None if grad_at_solution_norm is None else float(grad_at_solution_norm)
        self.name = name

    @property
    def dim(self) -> int:
        """
        The dimension of the problem.

        :type: int
        """
        return self.setup.dim

    @property
    def has_solution(self) -> bool:
        """
        ``True`` if :math:`x_*` is stored.

        :type: bool
        """
        return self.known_solution is not None

    def validate(self) -> None:
        """
        Check the instance for consistency.

        Raises
        ------
        InstanceValidationError
            If dimensions disagree, a constant is out of range, or the
            stored solution is infeasible or inconsistent with the
            stored value, gradient norm or :math:`\\Theta_0^2`.
        """
        if self.objective.dim != self.dim:
            raise InstanceValidationError(
                f'objective has dimension {self.objective.dim}, setup has {self.dim}')
        if self.constraint.dim != self.dim:
            raise InstanceValidationError(
                f'constraint has dimension {self.constraint.dim}, setup has {self.dim}')
        if not (np.isfinite(self.M_g) and self.M_g > 0):
            raise InstanceValidationError(f'M_g must be positive, got {self.M_g}')
        if not (np.isfinite(self.L) and self.L >= 0):
            raise InstanceValidationError(f'L must be nonnegative, got {self.L}')
        if not (np.isfinite(self.mu) and self.mu >= 0):
            raise InstanceValidationError(f'mu must be nonnegative, got {self.mu}')
        if not (np.isfinite(self.theta0_sq) and self.theta0_sq > 0):
            raise InstanceValidationError(f'theta0_sq must be positive, got {self.theta0_sq}')
        if not self.has_solution:
            return
        x = self.known_solution
        if not self.setup.contains(x):
            raise InstanceValidationError('known solution is outside the feasible set')
        g_star = self.constraint.value(x)
        if g_star > SOLUTION_TOL:
            raise InstanceValidationError(f'known solution is infeasible: g(x*) = {g_star:.6g}')
        d_star = float(self.setup._dgf(x))
        if d_star > self.theta0_sq*(1 + SOLUTION_TOL) + SOLUTION_TOL:
            raise InstanceValidationError(
                f'd(x*) = {d_star:.6g} exceeds theta0_sq = {self.theta0_sq:.6g}')
        f_star, grad = self.objective.evaluate(x)
        if self.known_value is not None and abs(f_star - self.known_value) > SOLUTION_TOL*(1 + abs(f_star)):
            raise InstanceValidationError(
                f'stored value {self.known_value:.17g} differs from f(x*) = {f_star:.17g}')
        if self.grad_at_solution_norm is not None:
            norm = float(self.setup._dual_norm(grad))
            if abs(norm - self.grad_at_solution_norm) > SOLUTION_TOL*(1 + norm):
                raise InstanceValidationError(
                    f'stored gradient norm {self.grad_at_solution_norm:.17g} differs from {norm:.17g}')

    def rescaled(self, shift: ArrayLike, scale: float, theta0_sq: float) -> 'ProblemInstance':
        """
        The instance in the coordinates :math:`y = (x - \\text{shift})/\\text{scale}`.

        Function values are unchanged; :math:`M_g` scales with ``scale``,
        :math:`L` and :math:`\\mu` with ``scale**2``.

        Parameters
        ----------
        shift : array-like
            The new origin, a feasible point.
        scale : float
            The new unit length.
        theta0_sq : float
            :math:`\\Theta_0^2` of the new problem.

        Returns
        -------
        ProblemInstance
            The rescaled instance. It is not validated.
        """
        shift = self.setup.check_point(shift, 'shift')
        solution = None if self.known_solution is None else (self.known_solution - shift)/scale
        grad_norm = None if self.grad_at_solution_norm is None else self.grad_at_solution_norm*scale
        return ProblemInstance(
            setup=self.setup.rescaled(shift, scale),
            objective=RescaledOracle(self.objective, shift, scale),
            constraint=RescaledOracle(self.constraint, shift, scale),
            M_g=self.M_g*scale,
            L=self.L*scale**2,
            mu=self.mu*scale**2,
            theta0_sq=theta0_sq,
            known_solution=solution,
            known_value=self.known_value,
            grad_at_solution_norm=grad_norm,
            name=f'{self.name}_rescaled'
        )

    def to_dict(self) -> Dict:
        """
        Dictionary representation with numpy arrays and Python floats.
        Use ``save_instance`` for the file format.
        """
        d = {
            'version': config.INSTANCE_VERSION,
            'name': self.name,
            'setup': self.setup.to_dict(),
            'objective': self.objective.to_dict(),
            'constraint': self.constraint.to_dict(),
            'constants': {
                'Mg': self.M_g,
                'L': self.L,
                'mu': self.mu,
                'theta0_sq': self.theta0_sq
            }
        }
        if self.has_solution:
            d['solution'] = {
                'x': self.known_solution,
                'f': self.known_value,
                'grad_norm': self.grad_at_solution_norm
            }
        return d


def _format_real(value: float) -> str:
    return format(float(value), config.REAL_FORMAT)


def _encode(obj):
    if isinstance(obj, dict):
        return {key: _encode(value) for key, value in obj.items()}
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return [_encode(value) for value in obj]
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    return _format_real(obj)


def _get(d: dict, key: str, where: str):
    if not isinstance(d, dict):
        raise InstanceParseError(f'field {where}: expected an object')
    try:
        return d[key]
    except KeyError as exc:
        field = f'{where}.{key}' if where else key
        raise InstanceParseError(f'missing field {field}') from exc


def _real(value, where: str):
    """
    Decode a real, or a nested list of reals, written by ``_encode``.
    """
    if isinstance(value, list):
        return [_real(v, f'{where}[{i}]') for i, v in enumerate(value)]
    if value is None:
        return None
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise InstanceParseError(f'field {where}: {value!r} is not a real number') from exc


def _decode_setup(d: dict) -> dict:
    kind = _get(d, 'kind', 'setup')
    params = _get(d, 'params', 'setup')
    if not isinstance(params, dict):
        raise InstanceParseError('field setup.params: expected an object')
    decoded = {}
    for key, value in params.items():
        if key == 'dim':
            try:
                decoded[key] = int(value)
            except (TypeError, ValueError) as exc:
                raise InstanceParseError(f'field setup.params.dim: {value!r} is not an integer') from exc
        else:
            decoded[key] = _real(value, f'setup.params.{key}')
    return {'kind': kind, 'params': decoded}


def _decode_oracle(d: dict, where: str) -> dict:
    decoded = {'type': _get(d, 'type', where)}
    for key, value in d.items():
        if key == 'type':
            continue
        if key == 'base':
            decoded[key] = _decode_oracle(value, f'{where}.base')
        else:
            decoded[key] = _real(value, f'{where}.{key}')
    return decoded


def instance_from_dict(d: dict) -> ProblemInstance:
    """
    Build and validate an instance from the decoded contents of an
    instance file.

    Parameters
    ----------
    d : dict
        The parsed JSON document.

    Returns
    -------
    ProblemInstance
        The validated instance.

    Raises
    ------
    InstanceParseError
        If a field is missing, malformed, or the version is unsupported.
    InstanceValidationError
        If the components are inconsistent.
    """
    version = _get(d, 'version', '')
    if version != config.INSTANCE_VERSION:
        raise InstanceParseError(f'unsupported instance version {version!r}')
    setup_d = _decode_setup(_get(d, 'setup', ''))
    objective_d = _decode_oracle(_get(d, 'objective', ''), 'objective')
    constraint_d = _decode_oracle(_get(d, 'constraint', ''), 'constraint')
    constants = _get(d, 'constants', '')
    solution = d.get('solution')
    parts = {}
    for name, builder, data in (
        ('setup', ProxSetup.from_dict, setup_d),
        ('objective', ConvexOracle.from_dict, objective_d),
        ('constraint', ConvexOracle.from_dict, constraint_d),
    ):
        try:
            parts[name] = builder(data)
        except NotImplementedError as exc:
            raise InstanceParseError(f'field {name}: {exc}') from exc
        except (TypeError, KeyError) as exc:
            raise InstanceParseError(f'field {name}: malformed parameters ({exc})') from exc
        except ValueError as exc:
            raise InstanceValidationError(f'{name}: {exc}') from exc
    kwargs = dict(
        M_g=_real(_get(constants, 'Mg', 'constants'), 'constants.Mg'),
        L=_real(_get(constants, 'L', 'constants'), 'constants.L'),
        mu=_real(_get(constants, 'mu', 'constants'), 'constants.mu'),
        theta0_sq=_real(_get(constants, 'theta0_sq', 'constants'), 'constants.theta0_sq'),
    )
    if solution is not None:
        kwargs['known_solution'] = _real(_get(solution, 'x', 'solution'), 'solution.x')
        kwargs['known_value'] = _real(solution.get('f'), 'solution.f')
        kwargs['grad_at_solution_norm'] = _real(solution.get('grad_norm'), 'solution.grad_norm')
    try:
        inst = ProblemInstance(**parts, **kwargs, name=str(d.get('name', 'instance')))
    except ValueError as exc:
        raise InstanceValidationError(str(exc)) from exc
    inst.validate()
    return inst


def dumps_instance(inst: ProblemInstance) -> str:
    """
    Serialize an instance to the JSON file format. Reals are written as
    decimal strings with 17 significant digits.
    """
    return json.dumps(_encode(inst.to_dict()), indent=2) + '\n'


def save_instance(inst: ProblemInstance, path: Union[str, Path]) -> None:
    """
    Write an instance file.

    Parameters
    ----------
    inst : ProblemInstance
        The instance to write.
    path : str or pathlib.Path
        The destination.
    """
    Path(path).write_text(dumps_instance(inst), encoding='UTF-8', newline='\n')


def load_instance(path: Union[str, Path]) -> ProblemInstance:
    """
    Read an instance file.

    Parameters
    ----------
    path : str or pathlib.Path
        The file to read.

    Returns
    -------
    ProblemInstance
        The validated instance.

    Raises
    ------
    InstanceParseError
        If the file is not valid JSON or misses a field.
    InstanceValidationError
        If the instance is inconsistent.
    OSError
        If the file cannot be read.
    """
    path = Path(path)
    text = path.read_text(encoding='UTF-8')
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f'{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}') from exc
    try:
        return instance_from_dict(data)
    except InstanceParseError as exc:
        raise InstanceParseError(f'{path}: {exc}') from exc


def _random_constraint(rng: np.random.Generator, dim: int, rows: int) -> PiecewiseMaxAffine:
    C = rng.normal(size=(rows, dim))
    d = rng.normal(size=rows)
    # the box center is the origin; force g(0) <= -0.1
    excess = float(np.max(d)) + 0.1
    if excess > 0:
        d = np.minimum(d - excess, -0.1)
    return PiecewiseMaxAffine(C, d)


def _random_quadratics(rng: np.random.Generator, dim: int, pieces: int) -> MaxOfQuadratics:
    G = rng.normal(size=(pieces, dim, dim))
    A = np.einsum('mki,mkj->mij', G, G)
    b = rng.normal(size=(pieces, dim))
    alpha = rng.normal(size=pieces)
    return MaxOfQuadratics(A, b, alpha)


def generate_max_quadratic(dim: int, pieces: int, seed: int) -> ProblemInstance:
    """
    A random max-of-quadratics problem on the box :math:`[-1, 1]^n`.

    The matrices are :math:`A_i = G_i^T G_i` with Gaussian :math:`G_i`,
    the constraint is a maximum of ``pieces`` random affine functions
    shifted so that :math:`g(0) \\leq -0.1`.

    Parameters
    ----------
    dim : int
        The dimension, at least 1.
    pieces : int
        The number of quadratic (and affine) pieces, at least 1.
    seed : int
        The seed of ``numpy.random.default_rng``.

    Returns
    -------
    ProblemInstance
        An instance without a known solution.
    """
    if dim < 1 or pieces < 1:
        raise ValueError(f'dim and pieces must be at least 1, got {dim} and {pieces}')
    rng = np.random.default_rng(seed)
    setup = EuclideanBox(-np.ones(dim), np.ones(dim))
    objective = _random_quadratics(rng, dim, pieces)
    constraint = _random_constraint(rng, dim, pieces)
    inst = ProblemInstance(
        setup=setup,
        objective=objective,
        constraint=constraint,
        M_g=constraint.lipschitz_value_const(setup.norm_name),
        L=objective.lipschitz_grad_const(setup.norm_name),
        mu=0.,
        theta0_sq=setup.max_dgf(),
        name=f'max_quadratic_n{dim}_m{pieces}_s{seed}'
    )
    inst.validate()
    return inst


def generate_strongly_convex(dim: int, pieces: int, seed: int, mu: float = 1.0) -> ProblemInstance:
    """
    A random problem where both the objective and the constraint are
    :math:`\\mu`-strongly convex.

    The objective and constraint of ``generate_max_quadratic`` are both
    augmented with :math:`\\frac{\\mu}{2}\\|x\\|_2^2`.

    Parameters
    ----------
    dim : int
        The dimension, at least 1.
    pieces : int
        The number of pieces, at least 1.
    seed : int
        The seed of ``numpy.random.default_rng``.
    mu : float, default=1.0
        The strong convexity, positive.

    Returns
    -------
    ProblemInstance
        An instance without a known solution.
    """
    if not mu > 0:
        raise ValueError(f'mu must be positive, got {mu}')
    base = generate_max_quadratic(dim, pieces, seed)
    anchor = base.setup.center
    objective = StronglyConvexAugmented(base.objective, mu, anchor)
    constraint = StronglyConvexAugmented(base.constraint, mu, anchor)
    radius = float(np.sqrt(base.setup.max_sq_distance(anchor)))
    inst = ProblemInstance(
        setup=base.setup,
        objective=objective,
        constraint=constraint,
        M_g=base.M_g + mu*radius,
        L=base.L + mu,
        mu=mu,
        theta0_sq=base.theta0_sq,
        name=f'strongly_convex_n{dim}_m{pieces}_s{seed}'
    )
    inst.validate()
    return inst


KNOWN_SOLUTION_KINDS = ('active_linear', 'strongly_convex_ball', 'max_quadratic_active', 'interior_optimum')
"""
The analytic fixtures built by ``make_known_solution_instance``.

:type: tuple of str
"""


def _snake_case(name: str) -> str:
    return re.sub(r'(?<!^)(?=[A-Z])', '_', name).lower()


def make_known_solution_instance(kind: str) -> ProblemInstance:
    """
    An analytic two-dimensional problem with a known solution.

    All fixtures use the box :math:`X = [-2, 2]^2` with the Euclidean
    d.g.f. centered at the origin.

    ``active_linear``
        :math:`f = \\frac{1}{2}\\|x\\|^2`, :math:`g = 1 - x_1 - x_2`;
        :math:`x_* = (1/2, 1/2)`, :math:`f_* = 1/4`.
    ``strongly_convex_ball``
        :math:`f = \\frac{1}{2}\\|x\\|^2`,
        :math:`g = \\frac{1}{2}\\|x - (1, 1)\\|^2 - 1/4`; :math:`\\mu = 1`,
        :math:`x_* = (1/2, 1/2)`.
    ``max_quadratic_active``
        :math:`f = \\max\\{\\frac{1}{2}\\|x\\|^2, \\|x\\|^2 - 1\\}`,
        :math:`g = 1 - x_1 - x_2`; :math:`L = 2`,
        :math:`x_* = (1/2, 1/2)`.
    ``interior_optimum``
        :math:`f = \\frac{1}{2}\\|x - c\\|^2` with :math:`c = (0.5, -0.25)`,
        :math:`g = x_1 - 1.5`; :math:`x_* = c`, :math:`f_* = 0`.

    Parameters
    ----------
    kind : str
        One of ``KNOWN_SOLUTION_KINDS``. CamelCase names such as
        ``'ActiveLinear'`` are accepted.

    Returns
    -------
    ProblemInstance
        The validated fixture.

    Raises
    ------
    ValueError
        If ``kind`` is unknown.
    """
    name = _snake_case(kind)
    setup = EuclideanBox([-2., -2.], [2., 2.], center=[0., 0.])
    half_plane = PiecewiseMaxAffine([[-1., -1.]], [1.])
    x_star = np.array([0.5, 0.5])
    match name:
        case 'active_linear':
            inst = ProblemInstance(
                setup=setup,
                objective=MaxOfQuadratics([np.eye(2)], [[0., 0.]], [0.]),
                constraint=half_plane,
                M_g=np.sqrt(2),
                L=1.,
                theta0_sq=0.25,
                known_solution=x_star,
                known_value=0.25,
                grad_at_solution_norm=np.sqrt(2)/2,
                name=name
            )
        case 'strongly_convex_ball':
            zero = PiecewiseMaxAffine([[0., 0.]], [0.])
            inst = ProblemInstance(
                setup=setup,
                objective=StronglyConvexAugmented(zero, 1., [0., 0.]),
                constraint=StronglyConvexAugmented(PiecewiseMaxAffine([[0., 0.]], [-0.25]), 1., [1., 1.]),
                M_g=3*np.sqrt(2),
                L=1.,
                mu=1.,
                theta0_sq=0.25,
                known_solution=x_star,
                known_value=0.25,
                grad_at_solution_norm=np.sqrt(2)/2,
                name=name
            )
        case 'max_quadratic_active':
            inst = ProblemInstance(
                setup=setup,
                objective=MaxOfQuadratics([np.eye(2), 2*np.eye(2)], [[0., 0.], [0., 0.]], [0., -1.]),
                constraint=half_plane,
                M_g=np.sqrt(2),
                L=2.,
                theta0_sq=0.25,
                known_solution=x_star,
                known_value=0.25,
                grad_at_solution_norm=np.sqrt(2)/2,
                name=name
            )
        case 'interior_optimum':
            c = np.array([0.5, -0.25])
            inst = ProblemInstance(
                setup=setup,
                objective=MaxOfQuadratics([np.eye(2)], [c], [0.5*float(c @ c)]),
                constraint=PiecewiseMaxAffine([[1., 0.]], [-1.5]),
                M_g=1.,
                L=1.,
                theta0_sq=0.5*float(c @ c),
                known_solution=c,
                known_value=0.,
                grad_at_solution_norm=0.,
                name=name
            )
        case _:
            raise ValueError(f'Unknown fixture kind {kind}. Expected one of {KNOWN_SOLUTION_KINDS}')
    inst.validate()
    return inst
