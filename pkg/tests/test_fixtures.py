"""Tests for the pinned-constant registry and its oracles."""

import math

import pytest

from hetnet_handover import fixtures
from hetnet_handover.fixtures import (
    ORACLES,
    SLOW_ORACLES,
    checks_to_text,
    fixture_value,
    load_fixtures,
    recompute,
    recompute_all,
)


def test_every_fixture_has_an_oracle_and_vice_versa():
    stored = load_fixtures()
    assert set(stored) == set(ORACLES)
    assert SLOW_ORACLES <= set(stored)
    for entry in stored.values():
        assert math.isfinite(entry["value"])
        assert 0 < entry["rel_tolerance"] < 1
        assert entry["oracle"]


def test_fast_oracles_reproduce_pinned_values():
    checks = recompute_all(include_slow=False)
    assert len(checks) == len(ORACLES) - len(SLOW_ORACLES)
    drifted = [c for c in checks if not c.ok]
    assert drifted == [], checks_to_text(drifted)


def test_recompute_single():
    value = recompute("i0_at_1")
    assert value == pytest.approx(fixture_value("i0_at_1"), rel=1e-14)


def test_unknown_fixture_name_raises():
    with pytest.raises(KeyError):
        fixture_value("no_such_constant")
    with pytest.raises(KeyError):
        recompute("no_such_constant")


def test_report_formatting_flags_drift():
    checks = recompute_all(include_slow=False)
    text = checks_to_text(checks)
    lines = text.splitlines()
    assert "fixture" in lines[0] and "status" in lines[0]
    assert len(lines) == 2 + len(checks)
    assert all(ln.endswith("OK") for ln in lines[2:])


def test_default_builders_are_self_consistent():
    macro = fixtures.default_macro_params()
    small = fixtures.default_small_params()
    hotspot = fixtures.default_hotspot_params()
    # Urban path-loss intercepts: 128.1 dB and 140.7 dB at 1 km.
    pl_m = -10.0 * math.log10(macro.pathloss_intercept * 1000.0 ** -macro.pathloss_exponent)
    pl_s = -10.0 * math.log10(small.pathloss_intercept * 1000.0 ** -small.pathloss_exponent)
    assert pl_m == pytest.approx(128.1, abs=1e-9)
    assert pl_s == pytest.approx(140.7, abs=1e-9)
    # The hotspot tier shares the small-cell propagation model but transmits
    # at lower power, which keeps every boundary circle well-defined.
    assert hotspot.pathloss_exponent == small.pathloss_exponent
    assert hotspot.tx_power < small.tx_power

    mob = fixtures.default_mobility()
    assert mob.velocity == pytest.approx(60.0 / 3.6)
    thr = fixtures.default_thresholds()
    assert thr.q_out == pytest.approx(10.0 ** (-0.3))


def test_reference_config_is_reproducible():
    a = fixtures.reference_sim_config()
    b = fixtures.reference_sim_config()
    assert a == b
    assert a.n_trials == 200
    assert a.master_seed == 0
    c = fixtures.reference_sim_config(master_seed=1)
    assert c.master_seed == 1
