import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwalk2d import (
    CoinOperator,
    CoinParams,
    CoinState2,
    CoinState4,
    InvalidParameterError,
    check_unitary,
    grover_equivalent_init,
    make_coin_2d,
    make_coin_grover,
    new_state,
    random_state,
)

SQ2 = math.sqrt(2)
SQ3 = math.sqrt(3)

valid_gamma = st.floats(min_value=1e-3, max_value=2 * math.pi - 1e-3).filter(
    lambda g: all(abs(g - b) > 1e-6 for b in (math.pi / 2, math.pi, 3 * math.pi / 2))
)


@pytest.mark.parametrize("gamma", [0.0, math.pi / 2, math.pi, 3 * math.pi / 2, 2 * math.pi, -1.0, 7.0, math.nan])
def test_forbidden_gamma_rejected(gamma):
    with pytest.raises(InvalidParameterError):
        CoinParams(gamma)


@pytest.mark.parametrize("bad", [math.pi / 2, math.pi, 3 * math.pi / 2])
def test_gamma_guard_band(bad):
    with pytest.raises(InvalidParameterError):
        CoinParams(bad + 5e-13)
    CoinParams(bad + 1e-9)


def test_hadamard_matches_reference_matrix():
    H = np.array([[1, 1], [1, -1]]) / SQ2
    assert np.max(np.abs(make_coin_2d(CoinParams(math.pi / 4)).matrix - H)) <= 1e-15


def test_coin_2d_pi_over_3():
    expected = np.array([[0.5, SQ3 / 2], [SQ3 / 2, -0.5]])
    np.testing.assert_allclose(make_coin_2d(CoinParams(math.pi / 3)).matrix, expected, atol=1e-15)


def test_grover_coin_matches_reference_matrix():
    G = 0.5 * (np.ones((4, 4)) - 2 * np.eye(4))
    assert np.max(np.abs(make_coin_grover(CoinParams(math.pi / 4)).matrix - G)) <= 1e-15


def test_grover_coin_pi_over_3_first_row():
    row = make_coin_grover(CoinParams(math.pi / 3)).matrix[0]
    np.testing.assert_allclose(row, [-0.25, SQ3 / 4, SQ3 / 4, 0.75], atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(valid_gamma)
def test_generated_coins_are_unitary_and_real(gamma):
    p = CoinParams(gamma)
    for coin in (make_coin_2d(p), make_coin_grover(p)):
        assert check_unitary(coin) <= 1e-12
        assert np.all(coin.matrix.imag == 0)
        assert not coin.matrix.flags.writeable


def test_check_unitary_witnesses():
    assert check_unitary(make_coin_2d()) <= 1e-15
    assert check_unitary(make_coin_grover()) <= 1e-15
    assert check_unitary(np.array([[1, 1], [0, 1]])) == 1.0
    with pytest.raises(InvalidParameterError):
        check_unitary(np.ones((2, 3)))


def test_coin_operator_rejects_bad_shapes():
    with pytest.raises(InvalidParameterError):
        CoinOperator(np.eye(3))


def test_grover_equivalent_init_hadamard():
    assert grover_equivalent_init(CoinParams(math.pi / 4), 0).q == (0.5, -0.5, -0.5, 0.5)
    assert grover_equivalent_init(CoinParams(math.pi / 4), 1).q == (-0.5, 0.5, 0.5, -0.5)


def test_grover_equivalent_init_pi_over_3():
    q = np.array(grover_equivalent_init(CoinParams(math.pi / 3), 0).q)
    np.testing.assert_allclose(q, [1 / (2 * SQ2), -SQ3 / (2 * SQ2), -SQ3 / (2 * SQ2), 1 / (2 * SQ2)], atol=1e-15)
    assert abs(np.sum(np.abs(q) ** 2) - 1) <= 1e-12


def test_grover_equivalent_init_rejects_bad_xi():
    with pytest.raises(InvalidParameterError):
        grover_equivalent_init(CoinParams(1.0), 2)


def test_grover_equivalent_init_norm_random_gamma(rng):
    for gamma in rng.uniform(0.01, 2 * math.pi - 0.01, 100):
        if min(abs(gamma - b) for b in (math.pi / 2, math.pi, 3 * math.pi / 2)) < 1e-6:
            continue
        for xi in (0, 1):
            q = grover_equivalent_init(CoinParams(gamma), xi).vector
            assert abs(np.sum(np.abs(q) ** 2) - 1) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(0, math.pi), st.floats(0, 2 * math.pi))
def test_bloch_states_are_normalised(theta, phi):
    s = CoinState2.from_bloch(theta, phi)
    assert abs(abs(s.nu0) ** 2 + abs(s.nu1) ** 2 - 1) <= 1e-12


def test_bloch_special_points():
    s = CoinState2.from_bloch(math.pi / 2, math.pi / 2)
    np.testing.assert_allclose(s.vector, CoinState2.symmetric().vector, atol=1e-15)
    np.testing.assert_allclose(CoinState2.from_bloch(math.pi, 0).vector, [0, 1], atol=1e-15)


def test_coin_states_reject_unnormalised():
    with pytest.raises(InvalidParameterError):
        CoinState2(1, 1)
    with pytest.raises(InvalidParameterError):
        CoinState4((1, 0, 0, 0.1))


def test_new_state_alternate(symmetric):
    st0 = new_state(symmetric, 3)
    assert st0.t == 0 and st0.window == 3 and st0.coin_dim == 2
    np.testing.assert_array_equal(st0.amplitude(0, 0), [1 / SQ2, 1j / SQ2])
    assert np.count_nonzero(st0.amps) == 2
    assert abs(st0.norm() - 1) <= 1e-15


def test_new_state_grover(nonlocalized):
    st0 = new_state(nonlocalized, 2)
    np.testing.assert_array_equal(st0.amplitude(0, 0), [0.5, -0.5, -0.5, 0.5])
    assert st0.norm() == 1.0


def test_new_state_errors():
    with pytest.raises(InvalidParameterError):
        new_state([1, 1], 2)
    with pytest.raises(InvalidParameterError):
        new_state([1, 0, 0], 2)
    with pytest.raises(InvalidParameterError):
        new_state([1, 0], -1)


def test_walker_state_is_read_only(symmetric):
    s = new_state(symmetric, 1)
    with pytest.raises(ValueError):
        s.amps[1, 1, 0] = 0


def test_random_state_respects_constraints(rng):
    s = random_state(4, 3, 5, rng)
    assert abs(s.norm() - 1) <= 1e-12
    xs = s.coords
    for i, x in enumerate(xs):
        for j, y in enumerate(xs):
            if (x - 3) % 2 or (y - 3) % 2 or max(abs(x), abs(y)) > 3:
                assert np.all(s.amps[i, j] == 0)
