"""MDCON oracles module

This module contains the first-order oracles of convex functionals.
Every oracle is a pointwise maximum of smooth pieces

.. math::

    F(x) = \\max_i F_i(x)

and its subgradient is the gradient of the achieving piece with the
lowest index. Smooth functions are the single-piece case.
"""
from typing import Dict, Tuple
import numpy as np
from numpy.typing import NDArray, ArrayLike
from scipy.linalg import eigvalsh

from MDCON import config
from MDCON.geometry import ProxSetup, DomainError, as_point, Point


class NonDifferentiablePointError(ValueError):
    """
    Raised when a finite-difference check is requested at a point where
    two pieces of a max-type oracle are tied.
    """


class ConvexOracle:
    """
    Base class of a convex first-order oracle.

    Subclasses implement ``piece_values`` and ``piece_gradients``.
    ``value``, ``subgradient`` and their batched versions are derived
    from them.

    Parameters
    ----------
    dim : int
        The dimension of the domain.
    """
    kind = ''

    def __init__(self, dim: int):
        self.dim = int(dim)

    @property
    def n_pieces(self) -> int:
        """
        The number of smooth pieces.

        :type: int
        """
        raise NotImplementedError

    def piece_values(self, x: ArrayLike) -> NDArray:
        """
        Values of every piece.

        Parameters
        ----------
        x : array-like
            A point of shape ``(n,)`` or a batch of shape ``(K, n)``.

        Returns
        -------
        numpy.ndarray
            Shape ``(m,)`` or ``(K, m)``.
        """
        raise NotImplementedError

    def piece_gradients(self, x: ArrayLike, index: ArrayLike) -> NDArray:
        """
        Gradients of selected pieces.

        Parameters
        ----------
        x : array-like
            A point of shape ``(n,)`` or a batch of shape ``(K, n)``.
        index : int or array-like of int
            The piece to differentiate at each point.

        Returns
        -------
        numpy.ndarray
            Same shape as ``x``.
        """
        raise NotImplementedError

    def lipschitz_value_const(self, norm_name: str = 'l2') -> float:
        """
        A global Lipschitz constant of the value, or ``None`` if the
        oracle is not globally Lipschitz.
        """
        return None

    def lipschitz_grad_const(self, norm_name: str = 'l2') -> float:
        """
        A Lipschitz constant of the gradient of every piece, measured
        from ``norm_name`` to its dual norm.
        """
        raise NotImplementedError

    @property
    def strong_convexity(self) -> float:
        """
        The Euclidean strong convexity modulus :math:`\\mu \\geq 0`.

        :type: float
        """
        return 0.0

    def _check(self, x: ArrayLike) -> Point:
        return as_point(x, self.dim)

    def evaluate(self, x: ArrayLike) -> Tuple[float, Point]:
        """
        Value and subgradient at ``x`` in one call.

        Parameters
        ----------
        x : array-like
            The point.

        Returns
        -------
        float
            The value.
        numpy.ndarray
            The subgradient of the lowest-index achieving piece.

        Raises
        ------
        InputError
            If ``x`` is malformed.
        """
        x = self._check(x)
        return self._evaluate(x)

    def _evaluate(self, x: Point) -> Tuple[float, Point]:
        pv = self.piece_values(x)
        i = int(np.argmax(pv))
        return float(pv[i]), self.piece_gradients(x, i)

    def value(self, x: ArrayLike) -> float:
        """
        The value :math:`F(x)`.
        """
        return float(np.max(self.piece_values(self._check(x))))

    def subgradient(self, x: ArrayLike) -> Point:
        """
        A subgradient at ``x``: the gradient of the achieving piece with
        the lowest index.
        """
        return self.evaluate(x)[1]

    def values(self, points: ArrayLike) -> NDArray:
        """
        Values at a batch of points of shape ``(K, n)``.
        """
        return np.max(self.piece_values(np.asarray(points, dtype=float)), axis=-1)

    def subgradients(self, points: ArrayLike) -> NDArray:
        """
        Subgradients at a batch of points of shape ``(K, n)``, with the same
        tie-break as ``subgradient``.
        """
        points = np.asarray(points, dtype=float)
        index = np.argmax(self.piece_values(points), axis=-1)
        return self.piece_gradients(points, index)

    def to_dict(self) -> Dict:
        """
        Dictionary representation. Arrays are left as numpy arrays.
        """
        raise NotImplementedError

    @staticmethod
    def _get_subtype(kind: str) -> type:
        match kind:
            case 'max_quadratic':
                return MaxOfQuadratics
            case 'max_affine':
                return PiecewiseMaxAffine
            case 'strongly_convex':
                return StronglyConvexAugmented
            case 'rescaled':
                return RescaledOracle
            case _:
                raise NotImplementedError(f'Oracle type {kind} not implemented.')

    @classmethod
    def from_dict(cls, d: dict) -> 'ConvexOracle':
        """
        Construct an oracle from its dictionary representation.

        Parameters
        ----------
        d : dict
            Must have a ``type`` key naming the oracle.

        Returns
        -------
        ConvexOracle
            An instance of the subclass named by ``type``.
        """
        return cls._get_subtype(d['type'])._from_dict(d)

    @classmethod
    def _from_dict(cls, d: dict) -> 'ConvexOracle':
        raise NotImplementedError


class MaxOfQuadratics(ConvexOracle):
    """
    Pointwise maximum of convex quadratics

    .. math::

        f(x) = \\max_i \\left\\{ \\frac{1}{2}\\langle A_i x, x \\rangle
        - \\langle b_i, x \\rangle + \\alpha_i \\right\\}

    Parameters
    ----------
    A : array-like
        The matrices, shape ``(m, n, n)``. Each is symmetrized.
    b : array-like
        The linear terms, shape ``(m, n)``.
    alpha : array-like
        The offsets, shape ``(m,)``.

    Raises
    ------
    ValueError
        If the shapes disagree, an entry is not finite, or a matrix is
        not positive semidefinite. The message names the piece.
    """
    kind = 'max_quadratic'
    psd_tol = 1e-10

    def __init__(self, A: ArrayLike, b: ArrayLike, alpha: ArrayLike):
        A = np.array(A, dtype=float)
        b = np.array(b, dtype=float)
        alpha = np.array(alpha, dtype=float)
        if A.ndim != 3 or A.shape[1] != A.shape[2]:
            raise ValueError(f'A must have shape (m, n, n), got {A.shape}')
        m, n, _ = A.shape
        if m < 1:
            raise ValueError('At least one piece is required')
        if b.shape != (m, n):
            raise ValueError(f'b must have shape {(m, n)}, got {b.shape}')
        if alpha.shape != (m,):
            raise ValueError(f'alpha must have shape {(m,)}, got {alpha.shape}')
        for arr, name in ((A, 'A'), (b, 'b'), (alpha, 'alpha')):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f'{name} has non-finite entries')
        A = 0.5*(A + np.transpose(A, (0, 2, 1)))
        self._eigenvalues = np.array([eigvalsh(a) for a in A])
        for i, eig in enumerate(self._eigenvalues):
            if eig[0] < -self.psd_tol:
                raise ValueError(
                    f'piece {i}: matrix is not positive semidefinite '
                    f'(smallest eigenvalue {eig[0]:.6g})'
                )
        super().__init__(n)
        self.A = A
        self.b = b
        self.alpha = alpha

    @property
    def n_pieces(self) -> int:
        return self.A.shape[0]

    def piece_values(self, x: ArrayLike) -> NDArray:
        x = np.asarray(x, dtype=float)
        quad = 0.5*np.einsum('mij,...i,...j->...m', self.A, x, x)
        return quad - x @ self.b.T + self.alpha

    def piece_gradients(self, x: ArrayLike, index: ArrayLike) -> NDArray:
        x = np.asarray(x, dtype=float)
        A = self.A[index]
        return np.einsum('...ij,...j->...i', A, x) - self.b[index]

    def piece_lipschitz(self) -> NDArray:
        """
        The Euclidean gradient Lipschitz constant of each piece,
        :math:`L_i = \\lambda_{\\max}(A_i)`.
        """
        return self._eigenvalues[:, -1].copy()

    def lipschitz_grad_const(self, norm_name: str = 'l2') -> float:
        if norm_name == 'l1':
            # ||A x||_inf <= max|A_ij| ||x||_1
            return float(np.max(np.abs(self.A)))
        return float(np.max(self.piece_lipschitz()))

    @property
    def strong_convexity(self) -> float:
        return max(0.0, float(np.min(self._eigenvalues[:, 0])))

    def to_dict(self) -> Dict:
        return {'type': self.kind, 'A': self.A, 'b': self.b, 'alpha': self.alpha}

    @classmethod
    def _from_dict(cls, d: dict) -> 'MaxOfQuadratics':
        return cls(A=d['A'], b=d['b'], alpha=d['alpha'])


class PiecewiseMaxAffine(ConvexOracle):
    """
    Pointwise maximum of affine functions
    :math:`g(x) = \\max_j \\{ \\langle c_j, x \\rangle + d_j \\}`.

    Parameters
    ----------
    C : array-like
        The rows :math:`c_j`, shape ``(r, n)``.
    d : array-like
        The offsets, shape ``(r,)``.

    Examples
    --------
    >>> g = PiecewiseMaxAffine([[1, 0], [0, 1]], [0, 0])
    >>> g.subgradient([1, 1])
    array([1., 0.])
    """
    kind = 'max_affine'

    def __init__(self, C: ArrayLike, d: ArrayLike):
        C = np.array(C, dtype=float)
        d = np.array(d, dtype=float)
        if C.ndim != 2 or C.shape[0] < 1:
            raise ValueError(f'C must have shape (r, n) with r >= 1, got {C.shape}')
        if d.shape != (C.shape[0],):
            raise ValueError(f'd must have shape {(C.shape[0],)}, got {d.shape}')
        if not (np.all(np.isfinite(C)) and np.all(np.isfinite(d))):
            raise ValueError('C and d must be finite')
        super().__init__(C.shape[1])
        self.C = C
        self.d = d

    @property
    def n_pieces(self) -> int:
        return self.C.shape[0]

    def piece_values(self, x: ArrayLike) -> NDArray:
        return np.asarray(x, dtype=float) @ self.C.T + self.d

    def piece_gradients(self, x: ArrayLike, index: ArrayLike) -> NDArray:
        return self.C[index] + np.zeros_like(np.asarray(x, dtype=float))

    def lipschitz_value_const(self, norm_name: str = 'l2') -> float:
        if norm_name == 'l1':
            return float(np.max(np.abs(self.C)))
        return float(np.max(np.linalg.norm(self.C, axis=1)))

    def lipschitz_grad_const(self, norm_name: str = 'l2') -> float:
        return 0.0

    def to_dict(self) -> Dict:
        return {'type': self.kind, 'C': self.C, 'd': self.d}

    @classmethod
    def _from_dict(cls, d: dict) -> 'PiecewiseMaxAffine':
        return cls(C=d['C'], d=d['d'])


class StronglyConvexAugmented(ConvexOracle):
    """
    A base oracle plus a Euclidean quadratic,
    :math:`F(x) + \\frac{\\mu}{2}\\|x - x_c\\|_2^2`.

    The quadratic is added to every piece, so the subgradient selection
    is the one of ``base``.

    Parameters
    ----------
    base : ConvexOracle
        The oracle to augment.
    mu : float
        The added strong convexity, :math:`\\mu \\geq 0`.
    anchor : array-like
        The point :math:`x_c`.
    """
    kind = 'strongly_convex'

    def __init__(self, base: ConvexOracle, mu: float, anchor: ArrayLike):
        mu = float(mu)
        if not np.isfinite(mu) or mu < 0:
            raise ValueError(f'mu must be finite and nonnegative, got {mu}')
        super().__init__(base.dim)
        self.base = base
        self.mu = mu
        self.anchor = as_point(anchor, base.dim, 'anchor')

    @property
    def n_pieces(self) -> int:
        return self.base.n_pieces

    def piece_values(self, x: ArrayLike) -> NDArray:
        x = np.asarray(x, dtype=float)
        diff = x - self.anchor
        extra = 0.5*self.mu*np.sum(diff*diff, axis=-1)
        return self.base.piece_values(x) + extra[..., np.newaxis]

    def piece_gradients(self, x: ArrayLike, index: ArrayLike) -> NDArray:
        x = np.asarray(x, dtype=float)
        return self.base.piece_gradients(x, index) + self.mu*(x - self.anchor)

    def lipschitz_grad_const(self, norm_name: str = 'l2') -> float:
        return self.base.lipschitz_grad_const(norm_name) + self.mu

    @property
    def strong_convexity(self) -> float:
        return self.base.strong_convexity + self.mu

    def to_dict(self) -> Dict:
        return {'type': self.kind, 'mu': self.mu, 'anchor': self.anchor, 'base': self.base.to_dict()}

    @classmethod
    def _from_dict(cls, d: dict) -> 'StronglyConvexAugmented':
        return cls(base=ConvexOracle.from_dict(d['base']), mu=d['mu'], anchor=d['anchor'])


class RescaledOracle(ConvexOracle):
    """
    A base oracle in the coordinates :math:`y = (x - c)/R`,
    :math:`\\tilde F(y) = F(c + R y)`.

    Gradients are multiplied by :math:`R`, gradient Lipschitz constants
    by :math:`R^2` and value Lipschitz constants by :math:`R`.

    Parameters
    ----------
    base : ConvexOracle
        The oracle in the original coordinates.
    shift : array-like
        The origin :math:`c` of the new coordinates.
    scale : float
        The scale :math:`R > 0`.
    """
    kind = 'rescaled'

    def __init__(self, base: ConvexOracle, shift: ArrayLike, scale: float):
        scale = float(scale)
        if not np.isfinite(scale) or scale <= 0:
            raise ValueError(f'scale must be positive, got {scale}')
        super().__init__(base.dim)
        self.base = base
        self.shift = as_point(shift, base.dim, 'shift')
        self.scale = scale

    @property
    def n_pieces(self) -> int:
        return self.base.n_pieces

    def to_original(self, y: ArrayLike) -> NDArray:
        """
        Map ``y`` back to the original coordinates.
        """
        return self.shift + self.scale*np.asarray(y, dtype=float)

    def piece_values(self, x: ArrayLike) -> NDArray:
        return self.base.piece_values(self.to_original(x))

    def piece_gradients(self, x: ArrayLike, index: ArrayLike) -> NDArray:
        return self.scale*self.base.piece_gradients(self.to_original(x), index)

    def lipschitz_value_const(self, norm_name: str = 'l2') -> float:
        m = self.base.lipschitz_value_const(norm_name)
        return None if m is None else m*self.scale

    def lipschitz_grad_const(self, norm_name: str = 'l2') -> float:
        return self.base.lipschitz_grad_const(norm_name)*self.scale**2

    @property
    def strong_convexity(self) -> float:
        return self.base.strong_convexity*self.scale**2

    def to_dict(self) -> Dict:
        return {'type': self.kind, 'shift': self.shift, 'scale': self.scale, 'base': self.base.to_dict()}

    @classmethod
    def _from_dict(cls, d: dict) -> 'RescaledOracle':
        return cls(base=ConvexOracle.from_dict(d['base']), shift=d['shift'], scale=d['scale'])


def v_f(oracle: ConvexOracle, setup: ProxSetup, x: ArrayLike, y: ArrayLike) -> float:
    """
    The normalized merit

    .. math::

        v_f(x, y) = \\left\\langle \\frac{\\nabla f(x)}{\\|\\nabla f(x)\\|_*}, x - y \\right\\rangle

    and 0 when :math:`\\nabla f(x) = 0`.

    Parameters
    ----------
    oracle : ConvexOracle
        The objective.
    setup : ProxSetup
        The setup whose dual norm normalizes the gradient.
    x : array-like
        The point where the subgradient is taken.
    y : array-like
        The comparison point, usually the solution.

    Returns
    -------
    float
        :math:`v_f(x, y)`.
    """
    x = as_point(x, setup.dim, 'x')
    y = as_point(y, setup.dim, 'y')
    grad = oracle.subgradient(x)
    norm = setup.dual_norm(grad)
    if norm == 0:
        return 0.0
    return float(np.dot(grad, x - y))/norm


def check_gradient_fd(oracle: ConvexOracle, x: ArrayLike, h: float = 1e-6) -> float:
    """
    Compare the subgradient with central finite differences.

    Parameters
    ----------
    oracle : ConvexOracle
        The oracle to check.
    x : array-like
        The point, which must not be a tie between pieces.
    h : float, default=1e-6
        The finite-difference step.

    Returns
    -------
    float
        The largest absolute difference over the coordinates.

    Raises
    ------
    ValueError
        If ``h`` is not positive.
    NonDifferentiablePointError
        If two pieces achieve the maximum within ``config.TIE_TOL``.
    """
    if not h > 0:
        raise ValueError(f'h must be positive, got {h}')
    x = as_point(x, oracle.dim)
    pv = np.sort(oracle.piece_values(x))
    if pv.shape[0] > 1 and pv[-1] - pv[-2] <= config.TIE_TOL:
        raise NonDifferentiablePointError(f'Pieces are tied at {x}')
    grad = oracle.subgradient(x)
    steps = h*np.eye(oracle.dim)
    fd = (oracle.values(x + steps) - oracle.values(x - steps))/(2*h)
    return float(np.max(np.abs(fd - grad)))


def estimate_lipschitz_constants(
    oracle: ConvexOracle,
    setup: ProxSetup,
    samples: int,
    rng: np.random.Generator = None
) -> Tuple[float, float]:
    """
    Sampled lower bounds on the Lipschitz constants of a function and its
    gradient over the feasible set.

    Parameters
    ----------
    oracle : ConvexOracle
        The oracle.
    setup : ProxSetup
        The feasible set and norm.
    samples : int
        The number of random pairs.
    rng : numpy.random.Generator, optional
        The random generator. Defaults to ``np.random.default_rng(0)``.

    Returns
    -------
    M_est : float
        :math:`\\max |F(x) - F(y)|/\\|x - y\\|`.
    L_est : float
        :math:`\\max \\|\\nabla F(x) - \\nabla F(y)\\|_*/\\|x - y\\|`.

    Raises
    ------
    ValueError
        If ``samples < 2``.
    DomainError
        If the feasible set is a single point.
    """
    if samples < 2:
        raise ValueError(f'At least 2 samples are required, got {samples}')
    if setup.is_degenerate():
        raise DomainError('Lipschitz constants are undefined on a single point')
    if rng is None:
        rng = np.random.default_rng(0)
    x = setup.sample(rng, samples)
    y = setup.sample(rng, samples)
    dist = setup._norm(x - y)
    keep = dist > 0
    x, y, dist = x[keep], y[keep], dist[keep]
    if dist.shape[0] == 0:
        return 0.0, 0.0
    dv = np.abs(oracle.values(x) - oracle.values(y))
    dg = setup._dual_norm(oracle.subgradients(x) - oracle.subgradients(y))
    return float(np.max(dv/dist)), float(np.max(dg/dist))
