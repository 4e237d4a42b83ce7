"""Validation and construction of the shared value types."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import prefgame as pg

RPS = [[0.5, 0.9, 0.1], [0.1, 0.5, 0.9], [0.9, 0.1, 0.5]]


def test_validate_accepts_strict_cycle():
    pref = pg.validate_preferences(RPS)
    assert pref.n == 3
    assert pref.no_tie
    np.testing.assert_array_equal(pref.p, np.asarray(RPS, dtype=float))


def test_validated_matrix_is_read_only():
    pref = pg.validate_preferences(RPS)
    with pytest.raises(ValueError):
        pref.p[0, 1] = 0.3


def test_entries_are_kept_as_given():
    # Accepted matrices must not be renormalized, even when the complement
    # only holds up to tolerance.
    raw = [[0.5, 0.6200000001], [0.38, 0.5]]
    pref = pg.validate_preferences(raw)
    assert pref.p[0, 1] == 0.6200000001
    assert pref.p[1, 0] == 0.38


def test_tie_flag():
    tied = [[0.5, 0.5], [0.5, 0.5]]
    assert pg.validate_preferences(tied).no_tie is False
    strict = [[0.5, 0.7], [0.3, 0.5]]
    assert pg.validate_preferences(strict).no_tie is True


def test_single_alternative():
    pref = pg.validate_preferences([[0.5]])
    assert pref.n == 1
    assert pref.no_tie


@pytest.mark.parametrize(
    "raw",
    [
        [[0.5, 0.6]],
        [[0.5, 1.2], [-0.2, 0.5]],
        [[0.5, 0.7], [0.2, 0.5]],
        [[0.6, 0.7], [0.3, 0.4]],
        [[0.5, float("nan")], [0.5, 0.5]],
        [],
    ],
)
def test_validate_rejects_malformed(raw):
    with pytest.raises(pg.ValidationError):
        pg.validate_preferences(raw)


def test_complement_tolerance_boundary():
    ok = [[0.5, 0.7 + 5e-10], [0.3, 0.5]]
    pg.validate_preferences(ok)
    bad = [[0.5, 0.7 + 5e-9], [0.3, 0.5]]
    with pytest.raises(pg.ValidationError):
        pg.validate_preferences(bad)


def test_exception_hierarchy():
    assert issubclass(pg.ValidationError, pg.PrefGameError)
    assert issubclass(pg.ValidationError, ValueError)
    assert issubclass(pg.MappingError, pg.PrefGameError)
    assert issubclass(pg.SolverError, RuntimeError)
    assert issubclass(pg.TieError, pg.PrefGameError)
    assert issubclass(pg.GenerationError, pg.PrefGameError)


class TestPolicy:
    def test_uniform_and_delta(self):
        u = pg.Policy.uniform(4)
        np.testing.assert_allclose(u.w, 0.25)
        d = pg.Policy.delta(2, 4)
        np.testing.assert_array_equal(d.w, [0.0, 0.0, 1.0, 0.0])
        assert d.support() == [2]

    def test_negative_snap(self):
        # Tiny negatives from float arithmetic snap to zero.
        p = pg.make_policy([1.0 + 5e-10, -5e-10])
        assert p.w[1] == 0.0
        assert p.w.min() >= 0.0

    def test_rejects_real_negative(self):
        with pytest.raises(pg.ValidationError):
            pg.make_policy([1.001, -0.001])

    def test_rejects_bad_mass(self):
        with pytest.raises(pg.ValidationError):
            pg.make_policy([0.6, 0.3])

    def test_support_threshold(self):
        p = pg.make_policy([0.5, 0.5 - 1e-8, 1e-8])
        assert p.support() == [0, 1]
        assert p.support(threshold=1e-9) == [0, 1, 2]

    def test_read_only(self):
        p = pg.Policy.uniform(3)
        with pytest.raises(ValueError):
            p.w[0] = 0.9


def test_make_payoff_rejects_nonfinite():
    with pytest.raises(pg.ValidationError):
        pg.make_payoff([[0.0, np.inf], [0.0, 0.0]])
    with pytest.raises(pg.ValidationError):
        pg.make_payoff([[0.0, 1.0, 2.0]])


def test_apply_mapping_entrywise():
    pref = pg.validate_preferences(RPS)
    pay = pg.apply_mapping(pref, pg.identity())
    np.testing.assert_array_equal(pay.a, pref.p)


def test_apply_mapping_diagonal_uses_exact_midpoint():
    pref = pg.validate_preferences(RPS)
    pay = pg.apply_mapping(pref, pg.affine(2.0, 1.0))
    np.testing.assert_array_equal(np.diag(pay.a), [2.0, 2.0, 2.0])
    assert pay.a[0, 1] == 2.0 * 0.9 + 1.0


def test_apply_mapping_log_odds_antisymmetry():
    pref = pg.validate_preferences(RPS)
    pay = pg.apply_mapping(pref, pg.log_odds())
    assert np.abs(pay.a + pay.a.T).max() <= 1e-12


def test_apply_mapping_nonfinite_result_raises():
    pref = pg.validate_preferences([[0.5, 1.0], [0.0, 0.5]])
    with pytest.raises(pg.MappingError):
        pg.apply_mapping(pref, pg.log_odds(clamp_epsilon=0.0))


def test_total_payoff_known_value():
    pay = pg.make_payoff([[1.0, 2.0], [3.0, 4.0]])
    x = pg.make_policy([0.25, 0.75])
    y = pg.make_policy([0.5, 0.5])
    assert pg.total_payoff(pay, x, y) == pytest.approx(0.25 * 1.5 + 0.75 * 3.5)


@settings(deadline=None)
@given(
    a=arrays(np.float64, (3, 3), elements=st.floats(-10.0, 10.0)),
    u=arrays(np.float64, (3,), elements=st.floats(0.1, 10.0)),
    v=arrays(np.float64, (3,), elements=st.floats(0.1, 10.0)),
    y=arrays(np.float64, (3,), elements=st.floats(0.1, 10.0)),
    alpha=st.floats(0.0, 1.0),
)
def test_total_payoff_bilinear(a, u, v, y, alpha):
    pay = pg.make_payoff(a)
    pu = pg.make_policy(u / u.sum())
    pv = pg.make_policy(v / v.sum())
    py = pg.make_policy(y / y.sum())
    mix = pg.make_policy(alpha * pu.w + (1.0 - alpha) * pv.w)
    left = pg.total_payoff(pay, mix, py)
    right = alpha * pg.total_payoff(pay, pu, py) + (1.0 - alpha) * pg.total_payoff(pay, pv, py)
    assert left == pytest.approx(right, abs=1e-9)
