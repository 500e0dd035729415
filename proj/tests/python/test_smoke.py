import pathlib

import numpy as np
import pytest
import scipy.sparse as sp

import svmscreen

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def random_dataset(rng, n, m, density=1.0):
    X = rng.standard_normal((n, m)) * (rng.random((n, m)) < density)
    y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
    y[0], y[1] = 1.0, -1.0
    return svmscreen.Dataset(sp.csc_matrix(X), y)


def test_two_sample_lambda_max():
    d = svmscreen.read_sparse_file(str(DATA / "two_sample.txt"))
    lm = svmscreen.lambda_max(d)
    assert lm.value == pytest.approx(2.0, rel=1e-12)
    assert abs(lm.bias) < 1e-12
    assert lm.first_features == [0]


def test_tie_and_one_class():
    lm = svmscreen.lambda_max(svmscreen.parse_sparse_text("+1 1:1\n+1 2:1\n-1 1:1 2:1\n"))
    assert lm.value == pytest.approx(2 / 3)
    assert lm.first_features == [0, 1]
    assert svmscreen.lambda_max(svmscreen.read_sparse_file(str(DATA / "all_positive.txt"))).value == 0.0


def test_parse_error_is_value_error():
    with pytest.raises(ValueError):
        svmscreen.read_sparse_file(str(DATA / "bad_label.txt"))
    with pytest.raises(svmscreen.ParseError):
        svmscreen.parse_sparse_text("+1 2:1 1:3\n")


def test_dense_and_sparse_agree():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((6, 4))
    y = np.array([1.0, -1, 1, -1, 1, 1])
    a = svmscreen.Dataset.from_dense(X, y)
    b = svmscreen.Dataset(sp.csc_matrix(X), y)
    assert (a.n_samples, a.n_features) == (6, 4)
    assert svmscreen.lambda_max(a).value == pytest.approx(svmscreen.lambda_max(b).value, rel=1e-14)
    np.testing.assert_allclose(a.features.toarray(), X)


def test_solve_converges_and_zero_above_lambda_max():
    rng = np.random.default_rng(1)
    d = random_dataset(rng, 20, 30)
    lmax = svmscreen.lambda_max(d).value
    top = svmscreen.solve(d, 1.01 * lmax)
    assert np.all(top.weights == 0)
    model = svmscreen.solve(d, 0.5 * lmax, tol=1e-10, record_trace=True)
    assert model.converged
    assert model.kkt_residual <= 1e-10
    assert svmscreen.kkt_residual(d, model.weights, model.bias, 0.5 * lmax) <= 1e-10
    trace = np.asarray(model.objective_trace)
    assert np.all(np.diff(trace) <= 1e-12 * np.abs(trace[:-1]))
    assert svmscreen.objective(d, 0.5 * lmax, model.weights, model.bias) == pytest.approx(model.objective)


def test_screen_is_safe():
    rng = np.random.default_rng(2)
    for density in (1.0, 0.2):
        d = random_dataset(rng, 25, 120, density)
        lmax = svmscreen.lambda_max(d).value
        for l1 in (None, 0.7 * lmax):
            top = l1 if l1 is not None else lmax
            report = svmscreen.screen(d, 0.6 * top, lambda1=l1)
            full = svmscreen.solve(d, 0.6 * top, tol=1e-10)
            active = set(np.flatnonzero(np.abs(full.weights) > 1e-8))
            assert active <= set(report.kept)
            assert len(report.bounds) == 120
            assert sum(report.branch_counts.values()) == 240
            assert 0.0 <= report.rejection_rate() <= 1.0


def test_constant_feature_dropped():
    d = svmscreen.read_sparse_file(str(DATA / "constant_feature.txt"))
    lmax = svmscreen.lambda_max(d).value
    report = svmscreen.screen(d, 0.5 * lmax)
    assert 4 not in report.kept
    assert report.bounds[4] <= 1e-12


def test_bounds_match_oracle_for_small_n():
    d = svmscreen.read_sparse_file(str(DATA / "three_sample.txt"))
    lmax = svmscreen.lambda_max(d).value
    th = svmscreen.theta(d, np.zeros(d.n_features), svmscreen.lambda_max(d).bias, lmax)
    report = svmscreen.screen(d, 0.5 * lmax, theta1=th)
    for j in range(d.n_features):
        ref = svmscreen.oracle_bound(d, th, lmax, 0.5 * lmax, j)
        assert report.bounds[j] == pytest.approx(ref, abs=1e-6)


def test_path_verify():
    rng = np.random.default_rng(3)
    d = random_dataset(rng, 10, 100)
    steps = svmscreen.path(d, grid_size=8, ratio=0.8, verify=True)
    assert len(steps) == 8
    assert all(s.violations == 0 for s in steps)
    assert all(s.verified for s in steps)
    lams = [s.lambda_ for s in steps]
    assert all(a > b for a, b in zip(lams, lams[1:]))


def test_invalid_inputs():
    d = svmscreen.read_sparse_file(str(DATA / "two_sample.txt"))
    with pytest.raises(ValueError):
        svmscreen.screen(d, 3.0)
    with pytest.raises(ValueError):
        svmscreen.solve(d, -1.0)
    with pytest.raises(ValueError):
        svmscreen.Dataset.from_dense(np.ones((2, 2)), np.array([1.0, 0.5]))
