import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from relgd.core import (
    IterationRecord,
    Objective,
    ParameterError,
    RunTrace,
    SolverConfig,
    ConfigurationError,
    TraceError,
    as_vector,
    descent_test,
    euclidean_norm,
    record_iteration,
)
from relgd.testbed import rosenbrock


class TestEuclideanNorm:
    def test_zero(self):
        assert euclidean_norm(np.zeros(2)) == 0.0

    def test_pythagorean(self):
        assert euclidean_norm(np.array([3.0, 4.0])) == 5.0

    def test_ones_100(self):
        assert euclidean_norm(np.ones(100)) == 10.0


class TestVector:
    def test_rejects_nan(self):
        with pytest.raises(ParameterError):
            as_vector([1.0, math.nan])

    def test_rejects_empty(self):
        with pytest.raises(ParameterError):
            as_vector([])

    def test_copies(self):
        src = np.array([1.0, 2.0])
        v = as_vector(src)
        v[0] = 5.0
        assert src[0] == 1.0


class TestDescentTest:
    def test_zero_displacement(self):
        g = np.array([1.0, -2.0])
        assert descent_test(3.0, 3.0, g, np.zeros(2), 1.0, 0.2)

    def test_quadratic_full_step_equality(self):
        # f = 1/2 |x|^2 at (1, 0), exact gradient, step to the origin
        x = np.array([1.0, 0.0])
        g = x.copy()
        d = -x
        assert descent_test(0.0, 0.5, g, d, 1.0, 0.0)
        assert not descent_test(1e-12, 0.5, g, d, 1.0, 0.0)

    def test_rosenbrock_origin_rejects_L1(self):
        # trial step from (0,0) with L=1, alpha=0.001: f(x1) ~ 1594.6 vs
        # right-hand side 1 - 4h + 2h^2 + (a/(1-a)) 4h ~ -0.996
        alpha = 0.001
        h = (1 - 2 * alpha) / (1 - alpha)
        g = np.array([-2.0, 0.0])
        x1 = -h * g
        f1 = rosenbrock(x1)
        rhs = 1.0 + (-2.0) * x1[0] + 0.5 * x1[0] ** 2 + alpha / (1 - alpha) * 2.0 * abs(x1[0])
        assert f1 == pytest.approx(1594.5992064088082, rel=1e-12)
        assert rhs == pytest.approx(-0.995998000002004, rel=1e-12)
        assert f1 > rhs
        assert descent_test(f1, 1.0, g, x1, 1.0, alpha) is False

    def test_slack_widens(self):
        g = np.array([1.0])
        d = np.array([-1.0])
        # rhs = 1 - 1 + 0.5 = 0.5
        assert not descent_test(0.5 + 1e-13, 1.0, g, d, 1.0, 0.0)
        assert descent_test(0.5 + 1e-13, 1.0, g, d, 1.0, 0.0, slack=1e-12)

    @given(
        st.lists(st.floats(-10, 10), min_size=2, max_size=2),
        st.lists(st.floats(-10, 10), min_size=2, max_size=2),
        st.floats(-100, 100),
        st.floats(-100, 100),
        st.floats(1e-3, 1e3),
        st.floats(1.0, 10.0),
        st.floats(0.0, 0.49),
    )
    def test_monotone_in_L_and_alpha(self, g, d, f_next, f_curr, L, scale, alpha):
        g, d = np.array(g), np.array(d)
        if descent_test(f_next, f_curr, g, d, L, alpha):
            assert descent_test(f_next, f_curr, g, d, L * scale, alpha)
            assert descent_test(f_next, f_curr, g, d, L, min(0.499, alpha * scale))


def _rec(k):
    return IterationRecord(k, 1.0, None, 1.0, 1.0, 1.0, 0.0, 1.0, 0, 0.0)


class TestTrace:
    def test_append_first(self):
        t = record_iteration(RunTrace(np.zeros(1)), _rec(0))
        assert len(t) == 1

    def test_append_consecutive(self):
        t = RunTrace(np.zeros(1))
        for k in range(4):
            record_iteration(t, _rec(k))
        assert len(t) == 4

    def test_out_of_order(self):
        t = RunTrace(np.zeros(1))
        for k in range(3):
            record_iteration(t, _rec(k))
        with pytest.raises(TraceError):
            record_iteration(t, _rec(5))


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(L_min=0.0),
            dict(L_min=1.0, L_0=0.5),
            dict(alpha=0.5),
            dict(alpha_min=0.2, alpha_0=0.1),
            dict(epsilon=0.0),
            dict(max_iterations=0),
            dict(seed=-1),
            dict(seed=2**64),
        ],
    )
    def test_rejects(self, kwargs):
        with pytest.raises(ConfigurationError):
            SolverConfig(**kwargs)

    def test_L_min_below_mu(self):
        obj = Objective(1, lambda x: 0.0, lambda x: x, mu_hint=0.5)
        with pytest.raises(ConfigurationError):
            SolverConfig(L_min=0.1).check_against(obj)
