import math

import numpy as np
import pytest

import mbtfit


def test_single_phase_closed_form():
    m = mbtfit.atmmpp(gamma=[], mu=[0.5], lambda_=[2.0])
    c = mbtfit.curves(m, [0.0, 3.0], l=1.0)
    assert c["mortality"][0] == pytest.approx(1 - math.exp(-0.5), abs=1e-12)
    assert c["fertility"][1] == pytest.approx(2.0 * (1 - math.exp(-0.5)) / 0.5, abs=1e-12)
    assert mbtfit.extinction_vector(m)[0] == pytest.approx(0.25, abs=1e-10)
    assert mbtfit.mean_offspring(m) == pytest.approx(4.0)


def test_model_arrays_and_json_round_trip():
    m = mbtfit.preset("example1")
    assert m.n == 3
    assert np.allclose((m.D0 + m.D1).sum(axis=1) + m.d, 0.0)
    again = mbtfit.Model.from_json(m.to_json())
    assert np.array_equal(again.D0, m.D0)


def test_simulate_and_fit_are_deterministic():
    truth = mbtfit.atmmpp(gamma=[], mu=[0.3], lambda_=[1.5])
    vectors = mbtfit.simulate(truth, N=300, T=10, seed=3)
    assert vectors == mbtfit.simulate(truth, N=300, T=10, seed=3)
    a = mbtfit.fit_individual(vectors, n=1, seeds=3, seed=5)
    b = mbtfit.fit_individual(vectors, n=1, seeds=3, seed=5)
    assert a["objective"] == b["objective"]
    assert a["objective"] == pytest.approx(-mbtfit.log_likelihood(a["model"], vectors), rel=1e-12)
    d = a["model"].d[0]
    assert abs(d - 0.3) < 0.1


def test_global_fit_reduces_objective():
    truth = mbtfit.atmmpp(gamma=[], mu=[0.3], lambda_=[1.5])
    ages = list(range(8))
    c = mbtfit.curves(truth, ages)
    fit = mbtfit.fit_global(c["fertility"], c["mortality"], n=1, seeds=2)
    assert fit["objective"] < 1e-8


def test_errors_map_to_python_exceptions():
    with pytest.raises(mbtfit.StructuralError):
        mbtfit.atmmpp(gamma=[], mu=[-1.0], lambda_=[1.0])
    with pytest.raises(mbtfit.Error):
        mbtfit.log_likelihood(mbtfit.preset("example1"), [[1, -1, 3]])
