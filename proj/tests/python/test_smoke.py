import math

import numpy as np
import pytest

import fracvia


def test_covariance_closed_form():
    assert fracvia.covariance(1.0, 1.0, 0.7) == pytest.approx(1.0)
    assert fracvia.covariance(0.25, 0.75, 0.5) == pytest.approx(0.25)
    assert fracvia.covariance(0.3, 0.8, 0.75) == pytest.approx(0.26315256472910439, rel=1e-14)


def test_sample_fbm_shapes_and_determinism():
    a = fracvia.sample_fbm(0.7, 65, seed=3, paths=2, channels=2)
    b = fracvia.sample_fbm(0.7, 65, seed=3, paths=2, channels=2)
    assert len(a) == 2
    assert a[0].shape == (65, 2)
    assert np.array_equal(a[1], b[1])
    assert np.all(a[0][0] == 0.0)


def test_integral_of_one_is_the_increment():
    t = np.linspace(0.0, 1.0, 257)
    g = (np.sin(3 * t) + t)[:, None]
    one = np.ones_like(g)
    val = fracvia.stieltjes_integral(one, g, 0.3)
    assert val[0] == pytest.approx(g[-1, 0] - g[0, 0], rel=10 / 257)


def test_lambda_of_identity():
    t = np.linspace(0.0, 1.0, 1024)[:, None]
    a = 0.25
    exact = 1.0 / (math.gamma(1 + a) * math.gamma(1 - a))
    assert fracvia.lambda_alpha(t, a) == pytest.approx(exact, rel=0.02)


def test_solve_linear_closed_form():
    t = np.linspace(0.0, 1.0, 513)
    g = (t + 0.5 * np.sin(2 * np.pi * t))[:, None]
    X = fracvia.solve("linear", {"a": 0.0, "c": 0.0, "s": 0.5, "s0": 0.0}, g, np.array([1.0]))
    exact = np.exp(0.5 * (g[:, 0] - g[0, 0]))
    assert np.max(np.abs(X[:, 0] - exact)) < 1e-3


def test_viability_controls():
    g = fracvia.sample_fbm(0.75, 1025, seed=1)[0]
    ok = fracvia.build_viable("ball-control", {"kappa": 0.2, "s0": 0.02}, g, "ball:2", np.array([0.0]), 0.05, alpha=0.26)
    assert ok["viable"] and ok["membership_ok"] and ok["xi_bound_ok"]
    assert np.all(np.abs(ok["X"]) <= 2.0)

    g = fracvia.sample_fbm(0.75, 2049, seed=9)[0]
    bad = fracvia.build_viable("constant-noise", {"kappa": 0.05}, g, "ball:2", np.array([1.99]), 2.0, alpha=0.26)
    assert not bad["viable"]
    assert bad["violations"][0]["q_growth_exponent"] < 1 + bad["gamma"]


def test_cli_usage_error():
    assert fracvia.run_cli(["fbm", "--not-a-flag"]) == 64
    assert "ball-control" in fracvia.builtin_names()
