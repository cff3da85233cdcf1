import math

import numpy as np
import pytest

import nusl


def test_version():
    assert nusl.__version__


def test_support_model_and_sampling():
    model = nusl.build_support_model(np.array([0.5, 0.5, 1.0]))
    assert model.S == 2
    seen = set()
    for stream in range(200):
        s = nusl.rejective_sample(model, seed=1, stream=stream)
        assert len(s) == 2
        seen.add(tuple(s.indices))
    assert seen == {(0, 2), (1, 2)}


def test_enumerations_sum_to_one():
    model = nusl.build_support_model(np.array([0.8, 0.6, 0.4, 0.2]))
    poisson = nusl.enumerate_poisson(model)
    rejective = nusl.enumerate_rejective(model)
    assert math.isclose(sum(poisson.values()), 1.0, abs_tol=1e-12)
    assert math.isclose(sum(rejective.values()), 1.0, abs_tol=1e-12)
    assert math.isclose(rejective[(0, 1)], 0.535315985130111524, rel_tol=1e-12)


def test_median_property():
    model = nusl.build_support_model(np.array([0.5, 0.5]))
    tail, holds = nusl.verify_median_property(model)
    assert holds
    assert math.isclose(tail, 0.75, rel_tol=1e-12)


def test_gram_and_bounds():
    phi = nusl.validate_dictionary(np.eye(4), require_unit_norm=True)
    h = nusl.hollow_gram(phi)
    model = nusl.build_support_model(np.full(4, 0.5))
    q = nusl.gram_quantities(h, model)
    assert q.mu == 0.0
    assert nusl.theorem1_bound(q, 0.5, symmetric=True) == 0.0

    qq = nusl.gram_quantities(
        nusl.hollow_gram(nusl.gen_gaussian_dictionary(16, 32, seed=3)),
        nusl.build_support_model(np.full(32, 4 / 32)),
    )
    floor = 2 * math.e**2 * qq.whw_op
    assert nusl.theorem1_bound(qq, floor + 1.0, symmetric=True) > 0.0
    with pytest.raises(ValueError):
        nusl.theorem1_bound(qq, floor * 0.5, symmetric=True)


def test_recovery_algorithms():
    phi = nusl.validate_dictionary(np.eye(6))
    y = 2.0 * np.eye(6)[:, 1] - 1.5 * np.eye(6)[:, 4]
    for runner in (nusl.thresholding, nusl.omp):
        out = runner(phi, y, 2)
        assert out["support"] == [1, 4]
        assert math.isclose(out["coefficients"][1], 2.0, abs_tol=1e-9)

    bp = nusl.basis_pursuit(phi.entries, y)
    assert bp["converged"]
    assert bp["support"] == [1, 4]


def test_sensing_fixed_point():
    phi = nusl.validate_dictionary(np.eye(5))
    model = nusl.build_support_model(np.array([0.9, 0.5, 0.3, 0.2, 0.1]))
    psi = nusl.greedy_sensing(phi, model)
    assert np.abs(psi.entries - np.eye(5)).max() < 1e-10
    pc = nusl.preconditioner(phi, model)
    assert np.abs(pc.psi.entries - np.eye(5)).max() < 1e-10


def test_distribution_families():
    model = nusl.gen_distribution("linear", K=4, S=2)
    assert np.allclose(model.p, [0.8, 0.6, 0.4, 0.2])
    quad = nusl.gen_distribution("quadratic", K=3, S=2)
    assert np.allclose(quad.p, [1.0, 0.8, 0.2])


def test_signal_generation_is_deterministic():
    phi = nusl.gen_gaussian_dictionary(16, 32, seed=5)
    model = nusl.gen_distribution("quadratic", K=32, S=3)
    a = nusl.gen_signal(phi, model, seed=7, stream=1)
    b = nusl.gen_signal(phi, model, seed=7, stream=1)
    assert np.array_equal(a["y"], b["y"])
    assert a["support"] == b["support"]
    rec = nusl.omp(phi, a["y"], 3)
    assert rec["support"] == a["support"]
