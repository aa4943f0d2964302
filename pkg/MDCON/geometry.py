"""MDCON geometry module

This module stores the proximal setups used by the mirror descent
solvers: a feasible set, a norm, a distance generating function (d.g.f.)
that is 1-strongly convex with respect to that norm, its Bregman
divergence and the mirror (prox-mapping) step

.. math::

    \\mathrm{Mirr}_x(p) = \\arg\\min_{u \\in X} \\{ \\langle p, u \\rangle + V(x, u) \\}

Every setup has a closed-form mirror step. Methods without a leading
underscore validate their input; the underscored variants are unchecked,
broadcast over the last axis and are what the solvers call in their
inner loops.
"""
from typing import Dict
import numpy as np
from numpy.typing import NDArray, ArrayLike
from scipy.special import xlogy, rel_entr, softmax

from MDCON import config

Point = NDArray[np.float64]
"""
A point of the primal space (or a dual vector), stored as a 1-D float array.
"""


class InputError(ValueError):
    """
    Raised when a point or dual vector is malformed: wrong shape or
    non-finite entries.
    """


class DomainError(ValueError):
    """
    Raised when a point lies outside the domain where an operation is
    defined, e.g. outside the feasible set.
    """


def as_point(x: ArrayLike, dim: int = None, name: str = 'x') -> Point:
    """
    Cast ``x`` to a finite 1-D float array.

    Parameters
    ----------
    x : array-like
        The input vector.
    dim : int, optional
        The required length.
    name : str, default='x'
        Name used in error messages.

    Returns
    -------
    numpy.ndarray
        A float copy of ``x``.

    Raises
    ------
    InputError
        If ``x`` is not 1-D, has the wrong length or non-finite entries.
    """
    arr = np.array(x, dtype=float)
    if arr.ndim != 1:
        raise InputError(f'{name} must be a 1-D vector, got shape {arr.shape}')
    if dim is not None and arr.shape[0] != dim:
        raise InputError(f'{name} has dimension {arr.shape[0]}, expected {dim}')
    if not np.all(np.isfinite(arr)):
        raise InputError(f'{name} has non-finite entries')
    return arr


class ProxSetup:
    """
    Base class of a proximal setup.

    Parameters
    ----------
    dim : int
        The dimension of the space.
    center : array-like
        The minimizer of the d.g.f. over the feasible set.

    Attributes
    ----------
    kind : str
        Identifier of the setup, used in instance files.
    norm_name : str
        ``'l2'`` or ``'l1'``, the norm the d.g.f. is strongly convex in.
    """
    kind = ''
    norm_name = 'l2'

    def __init__(self, dim: int, center: ArrayLike):
        if int(dim) < 1:
            raise ValueError(f'Dimension must be at least 1, got {dim}')
        self._dim = int(dim)
        self._center = as_point(center, self._dim, 'center')
        self._center.setflags(write=False)

    @property
    def dim(self) -> int:
        """
        The dimension of the space.

        :type: int
        """
        return self._dim

    @property
    def center(self) -> Point:
        """
        The d.g.f. minimizer :math:`x^0 = \\arg\\min_{x \\in X} d(x)`.

        :type: numpy.ndarray
        """
        return self._center.copy()

    def check_point(self, x: ArrayLike, name: str = 'x') -> Point:
        """
        Validate that ``x`` is a finite point of the feasible set.

        Raises
        ------
        InputError
            If ``x`` is malformed.
        DomainError
            If ``x`` is outside the feasible set.
        """
        arr = as_point(x, self._dim, name)
        if not self.contains(arr):
            raise DomainError(f'{name} is outside the feasible set of {self.kind}')
        return arr

    def contains(self, x: Point) -> bool:
        """
        Check membership in the feasible set, up to ``config.MEMBERSHIP_TOL``.
        """
        return bool(self.contains_many(np.asarray(x, dtype=float)))

    def contains_many(self, points: NDArray) -> NDArray:
        """
        Membership of each row of ``points`` (shape ``(..., n)``).
        """
        raise NotImplementedError

    def is_interior(self, x: Point) -> bool:
        """
        Check if ``x`` is in the interior of the feasible set.
        """
        raise NotImplementedError

    def is_degenerate(self) -> bool:
        """
        ``True`` if the feasible set is a single point.
        """
        raise NotImplementedError

    def dgf_value(self, x: ArrayLike) -> float:
        """
        The d.g.f. value :math:`d(x)`.

        Parameters
        ----------
        x : array-like
            A point of the feasible set.

        Returns
        -------
        float
            :math:`d(x)`.
        """
        return float(self._dgf(self.check_point(x)))

    def dgf_gradient(self, x: ArrayLike) -> Point:
        """
        The d.g.f. gradient :math:`\\nabla d(x)`.
        """
        return self._dgf_grad(self.check_point(x))

    def norm(self, x: ArrayLike) -> float:
        """
        The primal norm of ``x``.
        """
        return float(self._norm(as_point(x, self._dim)))

    def dual_norm(self, p: ArrayLike) -> float:
        """
        The dual norm :math:`\\|p\\|_* = \\max \\{\\langle p, x \\rangle : \\|x\\| \\leq 1\\}`.
        """
        return float(self._dual_norm(as_point(p, self._dim, 'p')))

    def bregman(self, x: ArrayLike, y: ArrayLike) -> float:
        """
        The Bregman divergence
        :math:`V(x, y) = d(y) - d(x) - \\langle \\nabla d(x), y - x \\rangle`.

        Parameters
        ----------
        x : array-like
            The base point.
        y : array-like
            The second point.

        Returns
        -------
        float
            A nonnegative number.
        """
        x = self.check_point(x, 'x')
        y = self.check_point(y, 'y')
        return float(self._bregman(x, y))

    def mirror_step(self, x: ArrayLike, p: ArrayLike) -> Point:
        """
        The prox-mapping :math:`\\mathrm{Mirr}_x(p)`.

        Parameters
        ----------
        x : array-like
            The current point.
        p : array-like
            The (scaled) dual vector to step along.

        Returns
        -------
        numpy.ndarray
            The new point, always inside the feasible set.
        """
        x = self.check_point(x, 'x')
        p = as_point(p, self._dim, 'p')
        return self._mirror(x, p)

    def project(self, x: ArrayLike) -> Point:
        """
        Euclidean projection of ``x`` onto the feasible set.
        """
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size: int) -> NDArray:
        """
        Draw ``size`` random points of the feasible set, shape ``(size, dim)``.
        """
        raise NotImplementedError

    def max_dgf(self) -> float:
        """
        :math:`\\max_{x \\in X} d(x)`, a valid :math:`\\Theta_0^2` for any solution.
        """
        raise NotImplementedError

    def unit_ball_dgf_bound(self) -> float:
        """
        An upper bound of :math:`d(x)` over the feasible points with
        :math:`\\|x\\| \\leq 1`.
        """
        raise NotImplementedError

    def max_sq_distance(self, x0: ArrayLike) -> float:
        """
        :math:`\\max_{x \\in X} \\|x - x_0\\|^2`.
        """
        raise NotImplementedError

    def rescaled(self, shift: ArrayLike, scale: float) -> 'ProxSetup':
        """
        The image of the setup under :math:`y = (x - \\text{shift})/\\text{scale}`,
        with the d.g.f. centered at the origin.
        """
        raise DomainError(f'Setup {self.kind} cannot be rescaled')

    def to_dict(self) -> Dict:
        """
        Dictionary representation, the inverse of ``from_dict``.
        """
        return {'kind': self.kind, 'params': self._params()}

    def _params(self) -> Dict:
        raise NotImplementedError

    @staticmethod
    def _get_subtype(kind: str) -> type:
        match kind:
            case 'euclidean_box':
                return EuclideanBox
            case 'euclidean_ball':
                return EuclideanBall
            case 'entropy_simplex':
                return EntropySimplex
            case _:
                raise NotImplementedError(f'Setup kind {kind} not implemented.')

    @classmethod
    def from_dict(cls, d: dict) -> 'ProxSetup':
        """
        Construct a setup from its dictionary representation.

        Parameters
        ----------
        d : dict
            Must have keys ``kind`` and ``params``.

        Returns
        -------
        ProxSetup
            An instance of the subclass named by ``kind``.
        """
        return cls._get_subtype(d['kind'])._from_params(d['params'])

    @classmethod
    def _from_params(cls, params: dict) -> 'ProxSetup':
        return cls(**params)

    # unchecked kernels, broadcasting over the last axis
    def _dgf(self, x):
        raise NotImplementedError

    def _dgf_grad(self, x):
        raise NotImplementedError

    def _norm(self, x):
        raise NotImplementedError

    def _dual_norm(self, p):
        raise NotImplementedError

    def _bregman(self, x, y):
        raise NotImplementedError

    def _mirror(self, x, p):
        raise NotImplementedError


class _EuclideanSetup(ProxSetup):
    """
    Shared code of the setups with :math:`d(x) = \\frac{1}{2}\\|x - x^0\\|_2^2`.

    For these, :math:`V(x, y) = \\frac{1}{2}\\|y - x\\|_2^2` and the mirror
    step is the Euclidean projection of :math:`x - p`.
    """
    norm_name = 'l2'

    def _dgf(self, x):
        diff = x - self._center
        return 0.5*np.sum(diff*diff, axis=-1)

    def _dgf_grad(self, x):
        return x - self._center

    def _norm(self, x):
        return np.linalg.norm(x, axis=-1)

    def _dual_norm(self, p):
        return np.linalg.norm(p, axis=-1)

    def _bregman(self, x, y):
        diff = y - x
        return 0.5*np.sum(diff*diff, axis=-1)

    def _mirror(self, x, p):
        return self._project(x - p)

    def _project(self, x):
        raise NotImplementedError

    def project(self, x: ArrayLike) -> Point:
        return self._project(as_point(x, self._dim))

    def unit_ball_dgf_bound(self) -> float:
        return 0.5*(1.0 + float(np.linalg.norm(self._center)))**2


class EuclideanBox(_EuclideanSetup):
    """
    A box :math:`\\{x : l \\leq x \\leq u\\}` with the Euclidean d.g.f.

    Parameters
    ----------
    lower : array-like
        The lower bound of each coordinate.
    upper : array-like
        The upper bound of each coordinate.
    center : array-like, optional
        The d.g.f. minimizer. Defaults to the midpoint of the box.

    Examples
    --------
    >>> box = EuclideanBox([0, 0], [1, 1])
    >>> box.mirror_step([0.2, 0.2], [1, 0])
    array([0. , 0.2])
    """
    kind = 'euclidean_box'

    def __init__(self, lower: ArrayLike, upper: ArrayLike, center: ArrayLike = None):
        lower = as_point(lower, name='lower')
        upper = as_point(upper, lower.shape[0], 'upper')
        if np.any(lower > upper):
            raise ValueError('Box lower bounds must not exceed upper bounds')
        self.lower = lower
        self.upper = upper
        self.lower.setflags(write=False)
        self.upper.setflags(write=False)
        if center is None:
            center = 0.5*(lower + upper)
        super().__init__(lower.shape[0], center)
        if not self.contains(self._center):
            raise DomainError('The d.g.f. center must lie in the box')

    def _slack(self) -> float:
        scale = max(1.0, float(np.max(np.abs(self.lower))), float(np.max(np.abs(self.upper))))
        return config.MEMBERSHIP_TOL*scale

    def contains_many(self, points: NDArray) -> NDArray:
        slack = self._slack()
        return np.all((points >= self.lower - slack) & (points <= self.upper + slack), axis=-1)

    def is_interior(self, x: Point) -> bool:
        return bool(np.all(x > self.lower) and np.all(x < self.upper))

    def is_degenerate(self) -> bool:
        return bool(np.all(self.lower == self.upper))

    def _project(self, x):
        return np.minimum(np.maximum(x, self.lower), self.upper)

    def sample(self, rng: np.random.Generator, size: int) -> NDArray:
        return rng.uniform(self.lower, self.upper, size=(size, self._dim))

    def max_dgf(self) -> float:
        far = np.maximum((self.lower - self._center)**2, (self.upper - self._center)**2)
        return 0.5*float(np.sum(far))

    def max_sq_distance(self, x0: ArrayLike) -> float:
        x0 = as_point(x0, self._dim, 'x0')
        return float(np.sum(np.maximum((self.lower - x0)**2, (self.upper - x0)**2)))

    def rescaled(self, shift: ArrayLike, scale: float) -> 'EuclideanBox':
        shift = self.check_point(shift, 'shift')
        if scale <= 0:
            raise ValueError(f'Scale must be positive, got {scale}')
        return EuclideanBox(
            lower=(self.lower - shift)/scale,
            upper=(self.upper - shift)/scale,
            center=np.zeros(self._dim)
        )

    def _params(self) -> Dict:
        return {'lower': self.lower, 'upper': self.upper, 'center': self._center}


class EuclideanBall(_EuclideanSetup):
    """
    A Euclidean ball :math:`\\{x : \\|x - a\\|_2 \\leq r\\}` with the Euclidean d.g.f.

    Parameters
    ----------
    ball_center : array-like
        The center :math:`a` of the ball.
    radius : float
        The radius :math:`r`.
    center : array-like, optional
        The d.g.f. minimizer. Defaults to ``ball_center``.
    """
    kind = 'euclidean_ball'

    def __init__(self, ball_center: ArrayLike, radius: float, center: ArrayLike = None):
        ball_center = as_point(ball_center, name='ball_center')
        radius = float(radius)
        if not np.isfinite(radius) or radius < 0:
            raise ValueError(f'Radius must be finite and nonnegative, got {radius}')
        self.ball_center = ball_center
        self.ball_center.setflags(write=False)
        self.radius = radius
        if center is None:
            center = ball_center
        super().__init__(ball_center.shape[0], center)
        if not self.contains(self._center):
            raise DomainError('The d.g.f. center must lie in the ball')

    def contains_many(self, points: NDArray) -> NDArray:
        dist = np.linalg.norm(points - self.ball_center, axis=-1)
        return dist <= self.radius*(1 + config.MEMBERSHIP_TOL) + config.MEMBERSHIP_TOL

    def is_interior(self, x: Point) -> bool:
        return float(np.linalg.norm(x - self.ball_center)) < self.radius

    def is_degenerate(self) -> bool:
        return self.radius == 0

    def _project(self, x):
        v = x - self.ball_center
        dist = np.linalg.norm(v, axis=-1, keepdims=True)
        outside = dist > self.radius
        factor = np.where(outside, self.radius/np.where(outside, dist, 1.0), 1.0)
        return self.ball_center + v*factor

    def sample(self, rng: np.random.Generator, size: int) -> NDArray:
        direction = rng.normal(size=(size, self._dim))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        radii = self.radius*rng.uniform(size=(size, 1))**(1/self._dim)
        return self.ball_center + radii*direction

    def max_dgf(self) -> float:
        return 0.5*(float(np.linalg.norm(self.ball_center - self._center)) + self.radius)**2

    def max_sq_distance(self, x0: ArrayLike) -> float:
        x0 = as_point(x0, self._dim, 'x0')
        return (float(np.linalg.norm(x0 - self.ball_center)) + self.radius)**2

    def rescaled(self, shift: ArrayLike, scale: float) -> 'EuclideanBall':
        shift = self.check_point(shift, 'shift')
        if scale <= 0:
            raise ValueError(f'Scale must be positive, got {scale}')
        return EuclideanBall(
            ball_center=(self.ball_center - shift)/scale,
            radius=self.radius/scale,
            center=np.zeros(self._dim)
        )

    def _params(self) -> Dict:
        return {'ball_center': self.ball_center, 'radius': self.radius, 'center': self._center}


class EntropySimplex(ProxSetup):
    """
    The probability simplex with the entropy d.g.f.

    .. math::

        d(x) = \\ln n + \\sum_i x_i \\ln x_i

    which is 1-strongly convex with respect to :math:`\\|\\cdot\\|_1`.
    The mirror step is the exponentiated gradient update.

    Parameters
    ----------
    dim : int
        The number of coordinates :math:`n`.
    """
    kind = 'entropy_simplex'
    norm_name = 'l1'

    def __init__(self, dim: int):
        if int(dim) < 1:
            raise ValueError(f'Dimension must be at least 1, got {dim}')
        super().__init__(dim, np.full(int(dim), 1/int(dim)))

    def _slack(self) -> float:
        return config.MEMBERSHIP_TOL*self._dim

    def contains_many(self, points: NDArray) -> NDArray:
        slack = self._slack()
        return np.all(points >= -slack, axis=-1) & (np.abs(np.sum(points, axis=-1) - 1.0) <= slack)

    def is_interior(self, x: Point) -> bool:
        return bool(np.all(x > 0))

    def is_degenerate(self) -> bool:
        return self._dim == 1

    def _check_positive(self, x: Point, name: str):
        if not np.all(x > 0):
            raise DomainError(f'{name} must be strictly positive for the entropy setup')

    def _dgf(self, x):
        return np.log(self._dim) + np.sum(xlogy(x, x), axis=-1)

    def dgf_gradient(self, x: ArrayLike) -> Point:
        x = self.check_point(x)
        self._check_positive(x, 'x')
        return self._dgf_grad(x)

    def _dgf_grad(self, x):
        return 1.0 + np.log(x)

    def _norm(self, x):
        return np.sum(np.abs(x), axis=-1)

    def _dual_norm(self, p):
        return np.max(np.abs(p), axis=-1)

    def bregman(self, x: ArrayLike, y: ArrayLike) -> float:
        x = self.check_point(x, 'x')
        self._check_positive(x, 'x')
        y = self.check_point(y, 'y')
        return float(self._bregman(x, y))

    def _bregman(self, x, y):
        return np.sum(rel_entr(y, x), axis=-1) - np.sum(y, axis=-1) + np.sum(x, axis=-1)

    def mirror_step(self, x: ArrayLike, p: ArrayLike) -> Point:
        x = self.check_point(x, 'x')
        self._check_positive(x, 'x')
        p = as_point(p, self._dim, 'p')
        return self._mirror(x, p)

    def _mirror(self, x, p):
        # softmax subtracts the max before exponentiating
        u = softmax(np.log(x) - p, axis=-1)
        return np.maximum(u, config.ENTROPY_FLOOR)

    def project(self, x: ArrayLike) -> Point:
        # sort-based Euclidean projection onto the simplex
        x = as_point(x, self._dim)
        u = np.sort(x)[::-1]
        css = np.cumsum(u)
        rho = self._dim - 1 - np.argmax(((u + (1. - css)/np.arange(1, self._dim + 1)) > 0)[::-1])
        lam = (1. - css[rho])/(rho + 1)
        return np.maximum(x + lam, 0)

    def sample(self, rng: np.random.Generator, size: int) -> NDArray:
        return rng.dirichlet(np.ones(self._dim), size=size)

    def max_dgf(self) -> float:
        return float(np.log(self._dim))

    def unit_ball_dgf_bound(self) -> float:
        return float(np.log(self._dim))

    def max_sq_distance(self, x0: ArrayLike) -> float:
        x0 = as_point(x0, self._dim, 'x0')
        return (2.0*(1.0 - float(np.min(x0))))**2

    def _params(self) -> Dict:
        return {'dim': self._dim}
