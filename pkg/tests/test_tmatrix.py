import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from tomofit import (
    DegenerateParametersError,
    PureStateLimitError,
    StokesVector,
    TParams,
    density_from_t,
    eigenvalues,
    is_mixed,
    seed_from_stokes,
    stokes_from_density,
    t2_from_t1,
    t_from_pure_angles,
)

from oracles import pure_state_rho, rho_from_t


def assert_matrix(rho, expected, tol=1e-12):
    np.testing.assert_allclose(rho.to_numpy(), np.asarray(expected, dtype=complex), atol=tol, rtol=0)


@pytest.mark.parametrize(
    "t, expected",
    [
        ((1, 0, 0, 0), [[1, 0], [0, 0]]),
        ((1, 1, 0, 0), [[0.5, 0], [0, 0.5]]),
        ((0, 1, 1, 0), [[0.5, 0.5], [0.5, 0.5]]),
    ],
)
def test_density_from_t_golden(t, expected):
    assert_matrix(density_from_t(TParams(*t)), expected)


@given(st.lists(st.floats(-10, 10), min_size=4, max_size=4))
def test_density_from_t_matches_gram_oracle(t):
    assume(sum(v * v for v in t) > 1e-6)
    assert_matrix(density_from_t(t), rho_from_t(t), 1e-12)


def test_degenerate_parameters():
    with pytest.raises(DegenerateParametersError):
        TParams(0, 0, 0, 0)
    with pytest.raises(DegenerateParametersError):
        density_from_t((0.0, 0.0, 0.0, 0.0))


@pytest.mark.parametrize(
    "theta, phi, t_expected, rho_expected",
    [
        (0, 0, (0, 0, 1, 0), [[1, 0], [0, 0]]),
        (math.pi, 0, (0, 1, 0, 0), [[0, 0], [0, 1]]),
        (math.pi / 2, 0, (0, math.sqrt(2) / 2, math.sqrt(2) / 2, 0), [[0.5, 0.5], [0.5, 0.5]]),
    ],
)
def test_t_from_pure_angles(theta, phi, t_expected, rho_expected):
    t = t_from_pure_angles(theta, phi, 1.0)
    assert t.as_tuple() == pytest.approx(t_expected, abs=1e-15)
    assert_matrix(density_from_t(t), rho_expected)


@given(st.floats(0, math.pi), st.floats(0, 2 * math.pi), st.floats(0.1, 10))
def test_pure_angles_give_pure_state(theta, phi, a):
    t = t_from_pure_angles(theta, phi, a)
    assert t.t1 == 0.0
    assert_matrix(density_from_t(t), pure_state_rho(theta, phi))


@pytest.mark.parametrize(
    "s, t_expected, clamped, branch",
    [
        ((1, 0, 0), (0, 1, 1, 0), False, "generic"),
        ((0, 1, 0), (0, 1, 0, 1), False, "generic"),
        ((0, 0, 0), (1, 1, 0, 0), False, "generic"),
        ((0, 0, 0.95), (1, 0, 1, 1), False, "near_zero_state"),
        ((0.8, 0.8, 0), (0, 1, 0.8, 0.8), True, "generic"),
    ],
)
def test_seed_golden(s, t_expected, clamped, branch):
    seed = seed_from_stokes(StokesVector(*s), 0.1)
    assert seed.t.as_tuple() == pytest.approx(t_expected, abs=1e-15)
    assert seed.clamped is clamped
    assert seed.branch == branch


def test_seed_edge_branches():
    # s3 = 1 with epsilon = 0 must not divide by zero
    assert seed_from_stokes(StokesVector(0, 0, 1), 0.0).branch == "near_zero_state"
    # unphysical s3 > 1 routes to the near-|0> branch too
    seed = seed_from_stokes(StokesVector(0, 0, 1.1), 0.0)
    assert seed.branch == "near_zero_state"
    assert_matrix(density_from_t(seed.t), [[1, 0], [0, 0]])
    # predominantly |1> is regular in the generic branch
    seed = seed_from_stokes(StokesVector(0.01, 0, -0.99))
    assert seed.branch == "generic"
    assert tuple(stokes_from_density(density_from_t(seed.t))) == pytest.approx((0.01, 0, -0.99), abs=1e-12)


@pytest.mark.parametrize(
    "s, t1, expected",
    [((0, 0, 0), 1, 1.0), ((0, 0, 0.5), 1, 0.5773502691896258), ((0.5, 0, 0), 2, 2.3094010767585034)],
)
def test_t2_from_t1(s, t1, expected):
    assert t2_from_t1(StokesVector(*s), t1) == pytest.approx(expected, abs=1e-15)


def test_t2_from_t1_pure_limit():
    with pytest.raises(PureStateLimitError):
        t2_from_t1(StokesVector(1, 0, 0), 1.0)


def test_t2_from_t1_consistent_with_seed():
    s = StokesVector(0.2, -0.3, 0.4)
    seed = seed_from_stokes(s)
    assert t2_from_t1(s, seed.t.t1) == pytest.approx(seed.t.t2, abs=1e-14)


ts = st.tuples(*[st.floats(-10, 10)] * 4).filter(lambda t: any(t))


@given(ts, st.floats(-10, 10).filter(lambda c: abs(c) > 1e-3))
def test_scale_invariance(t, c):
    a = density_from_t(TParams(*t))
    b = density_from_t(TParams(*t).scaled(c))
    np.testing.assert_allclose(a.to_numpy(), b.to_numpy(), atol=1e-12, rtol=0)


@given(ts)
def test_physical_by_construction(t):
    rho = density_from_t(TParams(*t))
    assert abs(rho.r00 + rho.r11 - 1) <= 1e-12
    assert eigenvalues(rho)[1] >= -1e-12


def ball(max_s3=0.9):
    def make(u):
        r, th, ph = u
        return StokesVector(r * math.sin(th) * math.cos(ph), r * math.sin(th) * math.sin(ph), r * math.cos(th))

    return st.tuples(st.floats(0, 0.999999), st.floats(0, math.pi), st.floats(0, 2 * math.pi)).map(make).filter(
        lambda s: s.s3 < max_s3
    )


@given(ball())
def test_seed_is_exact_preimage(s):
    seed = seed_from_stokes(s, 0.1)
    assert not seed.clamped and seed.branch == "generic"
    back = stokes_from_density(density_from_t(seed.t))
    assert tuple(back) == pytest.approx(tuple(s), abs=1e-10)
    assert density_from_t(seed.t).determinant() == pytest.approx((1 - s.norm_squared()) / 4, abs=1e-10)


@given(st.floats(0.5, math.pi), st.floats(0, 2 * math.pi))
def test_pure_state_inversion(theta, phi):
    # theta >= 0.5 keeps s3 = cos(theta) below 1 - epsilon
    s = StokesVector(math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))
    seed = seed_from_stokes(s, 0.1)
    assert seed.t.t1 == pytest.approx(0.0, abs=1e-6)
    assert_matrix(density_from_t(seed.t), pure_state_rho(theta, phi), 1e-10)


@given(st.tuples(*[st.floats(-10, 10).filter(lambda v: v == 0 or abs(v) > 1e-2)] * 4).filter(lambda t: any(t)))
def test_mixedness_diagnostic(t):
    t = TParams(*t)
    lo = eigenvalues(density_from_t(t))[1]
    assert (lo > 1e-12) == is_mixed(t)
