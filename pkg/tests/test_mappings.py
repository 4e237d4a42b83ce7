"""Mapping evaluation, the midpoint shape conditions, and serialization."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import prefgame as pg
from prefgame.mappings import eval_mapping, eval_mapping_array, mapping_from_dict, mapping_to_dict


def test_identity_values():
    spec = pg.identity()
    ts = np.linspace(0.0, 1.0, 11)
    np.testing.assert_array_equal(eval_mapping_array(spec, ts), ts)


def test_affine_values():
    spec = pg.affine(2.0, 1.0)
    assert eval_mapping(spec, 0.3) == pytest.approx(1.6)
    assert eval_mapping(spec, 0.5) == 2.0


def test_power_values():
    assert eval_mapping(pg.power(2.0), 0.7) == pytest.approx(0.49)
    assert eval_mapping(pg.power(0.5), 0.25) == pytest.approx(0.5)


def test_piecewise_linear_interpolates_and_extends():
    spec = pg.piecewise_linear([(0.0, 0.0), (0.6, 1.2)])
    assert eval_mapping(spec, 0.3) == pytest.approx(0.6)
    # Past the last knot the value holds constant.
    assert eval_mapping(spec, 0.9) == pytest.approx(1.2)


def test_piecewise_constant_zones():
    spec = pg.piecewise_constant(-1.0, 0.0, 1.0)
    assert eval_mapping(spec, 0.49999) == -1.0
    assert eval_mapping(spec, 0.5) == 0.0
    assert eval_mapping(spec, 0.50001) == 1.0


def test_log_odds_clamp():
    spec = pg.log_odds()
    assert eval_mapping(spec, 0.0) == pytest.approx(np.log(1e-9))
    assert eval_mapping(spec, 1.0) == pytest.approx(-np.log(1e-9))
    assert eval_mapping(spec, 0.3) == pytest.approx(np.log(0.3) - np.log(0.7))


def test_log_odds_midpoint_is_zero():
    assert eval_mapping(pg.log_odds(), 0.5) == 0.0


@pytest.mark.parametrize(
    "factory",
    [
        lambda: pg.power(float("nan")),
        lambda: pg.affine(float("inf"), 1.0),
        lambda: pg.piecewise_linear([(0.1, 0.0), (0.6, 1.0)]),
        lambda: pg.piecewise_linear([(0.0, 0.0), (0.0, 1.0), (0.6, 2.0)]),
        lambda: pg.piecewise_linear([(0.0, 0.0), (0.4, 1.0)]),
        lambda: pg.piecewise_linear([]),
        lambda: pg.piecewise_constant(float("nan"), 0.0, 1.0),
        lambda: pg.log_odds(-1e-3),
        lambda: pg.log_odds(0.7),
    ],
)
def test_factory_rejects_malformed(factory):
    with pytest.raises(pg.MappingError):
        factory()


def test_shape_judgment_is_not_the_factory_job():
    # Decreasing or flat maps construct fine; the condition checker is what
    # rejects their shape.
    flat = pg.power(0.0)
    falling = pg.affine(-2.0, 0.0)
    assert not pg.check_conditions(flat, grid_resolution=101).condorcet_ok
    assert not pg.check_conditions(falling, grid_resolution=101).condorcet_ok


def test_out_of_domain_raises():
    with pytest.raises(pg.MappingError):
        eval_mapping(pg.identity(), -0.2)
    with pytest.raises(pg.MappingError):
        eval_mapping(pg.identity(), 1.0 + 1e-6)
    # A sub-tolerance overshoot clips instead of raising.
    assert eval_mapping(pg.identity(), 1.0 + 1e-13) == 1.0


def test_scalar_nonfinite_raises():
    with pytest.raises(pg.MappingError):
        eval_mapping(pg.log_odds(clamp_epsilon=0.0), 0.0)


class TestSymmetricExtension:
    def test_pinned_value(self):
        ext = pg.symmetric_extension(pg.power(2.0))
        assert eval_mapping(ext, 0.75) == pytest.approx(0.4375)

    def test_matches_base_below_midpoint(self):
        base = pg.power(2.0)
        ext = pg.symmetric_extension(base)
        ts = np.linspace(0.0, 0.5, 101)
        np.testing.assert_allclose(eval_mapping_array(ext, ts), eval_mapping_array(base, ts))

    def test_exact_antisymmetry_about_midpoint(self):
        ext = pg.symmetric_extension(pg.power(2.0))
        ts = np.linspace(0.0, 1.0, 2001)
        vals = eval_mapping_array(ext, ts)
        mirrored = eval_mapping_array(ext, 1.0 - ts)
        mid = eval_mapping(ext, 0.5)
        assert np.abs(vals + mirrored - 2.0 * mid).max() <= 1e-14

    def test_extension_of_identity_is_identity(self):
        ext = pg.symmetric_extension(pg.identity())
        ts = np.linspace(0.0, 1.0, 501)
        np.testing.assert_allclose(eval_mapping_array(ext, ts), ts, atol=1e-15)

    def test_rejects_base_not_below_midpoint(self):
        flat = pg.piecewise_linear([(0.0, 0.4), (0.5, 0.4)])
        with pytest.raises(pg.MappingError):
            pg.symmetric_extension(flat)

    def test_half_domain_base_is_accepted(self):
        base = pg.piecewise_linear([(0.0, -1.0), (0.5, 0.25)])
        ext = pg.symmetric_extension(base)
        assert eval_mapping(ext, 1.0) == pytest.approx(1.5)


class TestConditions:
    def test_identity_passes_all(self):
        report = pg.check_conditions(pg.identity())
        assert report.condorcet_ok and report.mixed_ok and report.smith_ok
        assert report.witnesses == ()
        assert report.grid_resolution == 10_001

    def test_log_odds_passes_all(self):
        report = pg.check_conditions(pg.log_odds())
        assert report.condorcet_ok and report.mixed_ok and report.smith_ok

    def test_affine_passes_all(self):
        report = pg.check_conditions(pg.affine(2.0, 1.0))
        assert report.condorcet_ok and report.mixed_ok and report.smith_ok

    def test_step_passes_all(self):
        report = pg.check_conditions(pg.piecewise_constant(-1.0, 0.0, 1.0))
        assert report.condorcet_ok and report.mixed_ok and report.smith_ok
        assert report.jump_below == pytest.approx(1.0)
        assert report.jump_above == pytest.approx(1.0)

    def test_square_fails_only_the_exact_symmetry(self):
        report = pg.check_conditions(pg.power(2.0))
        assert report.condorcet_ok
        assert report.mixed_ok
        assert not report.smith_ok
        assert len(report.witnesses) == 1
        t_bad, reason = report.witnesses[0]
        assert t_bad == pytest.approx(0.0)
        assert "0.5" in reason

    def test_flipped_step_fails_everything(self):
        report = pg.check_conditions(pg.piecewise_constant(1.0, 0.0, 0.0))
        assert not report.condorcet_ok
        assert not report.mixed_ok
        assert not report.smith_ok
        assert report.witnesses

    def test_decreasing_map_fails_everything(self):
        spec = pg.piecewise_linear([(0.0, 1.0), (0.5, 0.5), (1.0, 0.0)])
        report = pg.check_conditions(spec)
        assert not report.condorcet_ok
        assert not report.mixed_ok
        assert not report.smith_ok

    def test_smooth_jump_estimate_shrinks_with_grid(self):
        coarse = pg.check_conditions(pg.identity(), grid_resolution=101)
        fine = pg.check_conditions(pg.identity(), grid_resolution=10_001)
        assert fine.jump_below < coarse.jump_below

    def test_bad_arguments(self):
        with pytest.raises(pg.MappingError):
            pg.check_conditions(pg.identity(), grid_resolution=2)
        with pytest.raises(pg.MappingError):
            pg.check_conditions(pg.identity(), margin=0.0)

    def test_report_dict_shape(self):
        d = pg.check_conditions(pg.identity()).to_dict()
        assert set(d) >= {"condorcet_ok", "mixed_ok", "smith_ok", "witnesses", "margin"}


@pytest.mark.parametrize(
    "spec",
    [
        pg.identity(),
        pg.log_odds(),
        pg.log_odds(1e-6),
        pg.affine(3.0, -1.0),
        pg.power(2.5),
        pg.piecewise_linear([(0.0, -4.5), (0.5, 0.5), (1.0, 1.0)]),
        pg.piecewise_constant(-1.0, 0.0, 1.0),
        pg.symmetric_extension(pg.power(2.0)),
    ],
)
def test_serialization_round_trip(spec):
    data = mapping_to_dict(spec)
    parsed = mapping_from_dict(data)
    ts = np.linspace(0.0, 1.0, 257)
    np.testing.assert_array_equal(eval_mapping_array(parsed, ts), eval_mapping_array(spec, ts))


def test_log_odds_parse_fills_default_clamp():
    parsed = mapping_from_dict({"kind": "log_odds"})
    assert parsed.clamp_epsilon == 1e-9


def test_unknown_kind_rejected():
    with pytest.raises(pg.MappingError):
        mapping_from_dict({"kind": "cubic_spline"})


# Strictly increasing maps always give the first condition: every value at or
# above 1/2 beats every value strictly below, with room against the margin.
KNOT_VALUES = st.lists(st.floats(0.05, 1.0), min_size=3, max_size=6)


@settings(deadline=None, max_examples=40)
@given(increments=KNOT_VALUES, start=st.floats(-2.0, 2.0))
def test_increasing_piecewise_linear_passes_condorcet(increments, start):
    knots_t = np.linspace(0.0, 1.0, len(increments) + 1)
    values = start + np.concatenate([[0.0], np.cumsum(increments)])
    spec = pg.piecewise_linear(list(zip(knots_t, values)))
    report = pg.check_conditions(spec, grid_resolution=2001)
    assert report.condorcet_ok
