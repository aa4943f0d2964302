#!/usr/bin/env python

"""
Tests for `MDCON.oracles` module
"""

import pytest
import numpy as np

from MDCON.geometry import EuclideanBox, EntropySimplex, DomainError
from MDCON.oracles import (
    ConvexOracle, MaxOfQuadratics, PiecewiseMaxAffine,
    StronglyConvexAugmented, RescaledOracle, NonDifferentiablePointError,
    v_f, check_gradient_fd, estimate_lipschitz_constants
)
from MDCON.instances import (
    generate_max_quadratic, generate_strongly_convex, make_known_solution_instance
)


def half_norm_sq() -> MaxOfQuadratics:
    return MaxOfQuadratics([np.eye(2)], [[0., 0.]], [0.])


def test_subgradient():
    """
    Test `ConvexOracle.subgradient()`
    """
    f = half_norm_sq()
    assert np.all(f.subgradient([2., 3.]) == np.array([2., 3.]))
    assert f.value([2., 3.]) == pytest.approx(6.5)
    g = PiecewiseMaxAffine([[1., 0.], [0., 1.]], [0., 0.])
    # tie: lowest index wins
    assert np.all(g.subgradient([1., 1.]) == np.array([1., 0.]))
    assert np.all(g.subgradient([0., 1.]) == np.array([0., 1.]))


def test_batched_evaluation(rng):
    """
    Batched values and subgradients match pointwise ones.
    """
    f = generate_max_quadratic(3, 4, 2).objective
    points = rng.uniform(-1, 1, size=(20, 3))
    values = f.values(points)
    grads = f.subgradients(points)
    for x, value, grad in zip(points, values, grads):
        assert value == pytest.approx(f.value(x), rel=1e-14)
        assert grad == pytest.approx(f.subgradient(x), rel=1e-14)


def test_not_psd():
    """
    Indefinite matrices are refused with the piece named.
    """
    with pytest.raises(ValueError, match='piece 1'):
        MaxOfQuadratics([np.eye(2), np.diag([1., -0.5])], np.zeros((2, 2)), [0., 0.])
    # semidefinite is accepted
    f = MaxOfQuadratics([np.diag([1., 0.])], [[0., 0.]], [0.])
    assert f.strong_convexity == 0


def test_bad_shapes():
    """
    Shape mismatches are refused.
    """
    with pytest.raises(ValueError):
        MaxOfQuadratics([np.eye(2)], [[0., 0., 0.]], [0.])
    with pytest.raises(ValueError):
        PiecewiseMaxAffine([[1., 0.]], [0., 1.])
    with pytest.raises(ValueError):
        PiecewiseMaxAffine([[np.nan, 0.]], [0.])


def test_lipschitz_grad_const():
    """
    The gradient Lipschitz constant is the largest eigenvalue over the pieces.
    """
    f = MaxOfQuadratics([np.diag([1., 2.]), [[2., 1.], [1., 2.]]], np.zeros((2, 2)), [0., 0.])
    assert f.piece_lipschitz() == pytest.approx([2., 3.])
    assert f.lipschitz_grad_const() == pytest.approx(3.)
    assert f.strong_convexity == pytest.approx(1.)
    assert f.lipschitz_grad_const('l1') == 2.


def test_max_affine_lipschitz(rng):
    """
    |g(x) - g(y)| <= M_g |x - y| with M_g the largest row norm.
    """
    g = PiecewiseMaxAffine(rng.normal(size=(5, 3)), rng.normal(size=5))
    M_g = g.lipschitz_value_const()
    assert M_g == pytest.approx(np.max(np.linalg.norm(g.C, axis=1)))
    x = rng.uniform(-3, 3, size=(500, 3))
    y = rng.uniform(-3, 3, size=(500, 3))
    diff = np.abs(g.values(x) - g.values(y))
    assert np.all(diff <= M_g*np.linalg.norm(x - y, axis=1) + 1e-10)


INSTANCES = {
    'max_quadratic_s1': lambda: generate_max_quadratic(3, 3, 1),
    'max_quadratic_s7': lambda: generate_max_quadratic(5, 4, 7),
    'strongly_convex_s2': lambda: generate_strongly_convex(3, 2, 2, mu=0.5),
    'active_linear': lambda: make_known_solution_instance('active_linear'),
    'strongly_convex_ball': lambda: make_known_solution_instance('strongly_convex_ball'),
    'max_quadratic_active': lambda: make_known_solution_instance('max_quadratic_active'),
    'interior_optimum': lambda: make_known_solution_instance('interior_optimum'),
}


@pytest.mark.parametrize('name', list(INSTANCES))
def test_convexity_and_subgradient_inequality(name):
    """
    Oracles are convex and their subgradients support them on 1000
    seeded pairs.
    """
    inst = INSTANCES[name]()
    rng = np.random.default_rng(1000)
    for oracle in (inst.objective, inst.constraint):
        x = inst.setup.sample(rng, 1000)
        y = inst.setup.sample(rng, 1000)
        lam = rng.uniform(size=(1000, 1))
        fx, fy = oracle.values(x), oracle.values(y)
        tol = 1e-9*(1 + np.abs(fx) + np.abs(fy))
        mid = oracle.values(lam*x + (1 - lam)*y)
        chord = lam[:, 0]*fx + (1 - lam[:, 0])*fy
        assert np.all(mid <= chord + tol)
        linear = fx + np.einsum('ki,ki->k', oracle.subgradients(x), y - x)
        assert np.all(fy >= linear - tol)


def test_v_f(rng):
    """
    Test `v_f()`
    """
    box = EuclideanBox([-2., -2.], [2., 2.])
    f = half_norm_sq()
    assert v_f(f, box, [0., 0.], [1., 1.]) == 0
    assert v_f(f, box, [1., 0.], [0., 0.]) == pytest.approx(1.)
    x = box.sample(rng, 100)
    y = box.sample(rng, 100)
    for xi, yi in zip(x, y):
        assert v_f(f, box, xi, yi) <= np.linalg.norm(xi - yi) + 1e-12


def test_v_f_entropy():
    """
    The entropy setup normalizes with the max norm.
    """
    simplex = EntropySimplex(2)
    g = PiecewiseMaxAffine([[2., -4.]], [0.])
    assert v_f(g, simplex, [0.5, 0.5], [1., 0.]) == pytest.approx(((2*-0.5) + (-4*0.5))/4)


def test_check_gradient_fd(rng):
    """
    Test `check_gradient_fd()`
    """
    assert check_gradient_fd(half_norm_sq(), [1., 2.], h=1e-4) <= 1e-7
    affine = PiecewiseMaxAffine([[3., 4.]], [1.])
    assert check_gradient_fd(affine, [0.3, -0.2], h=1e-4) <= 1e-10
    f = generate_max_quadratic(2, 3, 4).objective
    x = rng.uniform(-1, 1, size=2)
    assert check_gradient_fd(f, x, h=1e-5) <= 1e-6
    with pytest.raises(NonDifferentiablePointError):
        check_gradient_fd(PiecewiseMaxAffine([[1., 0.], [0., 1.]], [0., 0.]), [1., 1.])
    with pytest.raises(ValueError):
        check_gradient_fd(affine, [0., 0.], h=0.)


def test_estimate_lipschitz_constants():
    """
    Test `estimate_lipschitz_constants()`
    """
    box = EuclideanBox([-1., -1.], [1., 1.])
    affine = PiecewiseMaxAffine([[3., 4.]], [0.])
    M_est, L_est = estimate_lipschitz_constants(affine, box, 2000)
    assert 4.9 < M_est <= 5 + 1e-12
    assert L_est == 0
    _, L_est = estimate_lipschitz_constants(half_norm_sq(), box, 500)
    assert L_est == pytest.approx(1.)
    diag = MaxOfQuadratics([np.diag([1., 2.])], [[0., 0.]], [0.])
    _, L_est = estimate_lipschitz_constants(diag, box, 2000)
    assert 1.9 < L_est <= 2 + 1e-12
    with pytest.raises(ValueError):
        estimate_lipschitz_constants(affine, box, 1)
    with pytest.raises(DomainError):
        estimate_lipschitz_constants(affine, EuclideanBox([1., 1.], [1., 1.]), 10)


def test_strongly_convex_augmented():
    """
    Test `StronglyConvexAugmented`
    """
    base = PiecewiseMaxAffine([[1., 0.]], [0.])
    f = StronglyConvexAugmented(base, 2., [1., 1.])
    assert f.value([1., 1.]) == pytest.approx(1.)
    assert f.value([0., 0.]) == pytest.approx(2.)
    assert f.subgradient([0., 0.]) == pytest.approx([-1., -2.])
    assert f.strong_convexity == 2
    assert f.lipschitz_grad_const() == 2
    with pytest.raises(ValueError):
        StronglyConvexAugmented(base, -1., [0., 0.])


def test_rescaled_oracle():
    """
    Test `RescaledOracle`
    """
    f = RescaledOracle(half_norm_sq(), [1., 0.], 2.)
    assert f.value([0., 0.]) == pytest.approx(0.5)
    assert f.value([1., 1.]) == pytest.approx(0.5*(9 + 4))
    assert f.subgradient([1., 1.]) == pytest.approx([6., 4.])
    assert f.lipschitz_grad_const() == pytest.approx(4.)
    assert f.to_original([1., 1.]) == pytest.approx([3., 2.])
    g = RescaledOracle(PiecewiseMaxAffine([[3., 4.]], [0.]), [0., 0.], 0.5)
    assert g.lipschitz_value_const() == pytest.approx(2.5)


def test_from_dict():
    """
    Test `ConvexOracle.from_dict()`
    """
    f = StronglyConvexAugmented(half_norm_sq(), 1., [0.5, 0.])
    new = ConvexOracle.from_dict(f.to_dict())
    assert isinstance(new, StronglyConvexAugmented)
    assert isinstance(new.base, MaxOfQuadratics)
    assert new.value([1., 2.]) == f.value([1., 2.])
    with pytest.raises(NotImplementedError):
        ConvexOracle.from_dict({'type': 'huber'})
