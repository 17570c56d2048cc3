import json
import math

import jsonschema
import pytest

from cascadehash import harness
from cascadehash.core import CascadeConfig, Growth
from cascadehash.harness import (
    REPORT_JSON_SCHEMA,
    crisis_rate_estimate,
    emit_report,
    equivalent_single_table_probes,
    fill_until_crisis,
    parse_csv,
    sweep,
    trial_seeds,
)
from cascadehash.sizing import ConfigError


# --- crisis rate arithmetic ----------------------------------------------


def test_crisis_rate_product():
    # exact product, frozen from independent computation:
    # 0.95^4 * 0.72^4 * 0.1^4
    assert crisis_rate_estimate([0.95, 0.72, 0.1], 4) == pytest.approx(
        2.18889236736e-05, rel=1e-12
    )


def test_crisis_rate_edge_cases():
    assert crisis_rate_estimate([0.5, 0.0, 0.9], 3) == 0.0
    assert crisis_rate_estimate([1.0, 1.0], 5) == 1.0
    assert crisis_rate_estimate([], 4) == 1.0


def test_crisis_rate_validation():
    with pytest.raises(ValueError):
        crisis_rate_estimate([1.5], 4)
    with pytest.raises(ValueError):
        crisis_rate_estimate([-0.1], 4)
    with pytest.raises(ValueError):
        crisis_rate_estimate([0.5], 0)


def test_crisis_rate_monotonicity():
    base = crisis_rate_estimate([0.9, 0.7, 0.1], 4)
    assert crisis_rate_estimate([0.95, 0.7, 0.1], 4) > base
    assert crisis_rate_estimate([0.9, 0.7, 0.1], 5) < base


def test_equivalent_probes():
    assert equivalent_single_table_probes(0.76, 0.000024) == 39
    assert equivalent_single_table_probes(0.5, 0.25) == 2
    for load in [0.3, 0.5, 0.76, 0.9]:
        assert equivalent_single_table_probes(load, load) == 1


def test_equivalent_probes_validation():
    for load, target in [(0.0, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.0), (-1, 0.5)]:
        with pytest.raises(ValueError):
            equivalent_single_table_probes(load, target)


# --- fill until crisis ----------------------------------------------------


def test_fill_requires_report_crisis():
    cfg = CascadeConfig(
        levels=2, base_exponent=8, seed=0, growth=Growth.GROW_ON_CRISIS
    )
    with pytest.raises(ConfigError):
        fill_until_crisis(cfg, 0)


def test_fill_toy_pigeonhole():
    cfg = CascadeConfig(
        levels=2, base_exponent=18, seed=1, probe_budget=2,
        size_override=(3, 2),
    )
    for accelerated in (True, False):
        r = fill_until_crisis(cfg, 7, accelerated=accelerated)
        assert r.items_at_crisis <= 5
        assert r.total_capacity == 5
        assert sum(n for n, _ in r.level_stats) == r.items_at_crisis


@pytest.mark.parametrize("m,budget", [(1, 12), (2, 12), (4, 12), (3, 6)])
def test_kernel_matches_table_fill(m, budget):
    # the jitted fill and the object-level fill must agree exactly
    cfg = CascadeConfig(levels=m, base_exponent=8, seed=123, probe_budget=budget)
    fast = fill_until_crisis(cfg, 99, accelerated=True)
    slow = fill_until_crisis(cfg, 99, accelerated=False)
    assert fast.items_at_crisis == slow.items_at_crisis
    assert fast.level_stats == slow.level_stats


def test_fill_deterministic():
    cfg = CascadeConfig(levels=3, base_exponent=10, seed=5)
    a = fill_until_crisis(cfg, 11)
    b = fill_until_crisis(cfg, 11)
    assert a.items_at_crisis == b.items_at_crisis
    assert a.level_stats == b.level_stats


def test_fill_seed_sensitivity():
    cfg = CascadeConfig(levels=3, base_exponent=10, seed=5)
    results = {fill_until_crisis(cfg, ks).items_at_crisis for ks in range(8)}
    assert len(results) > 1


# --- sweep ----------------------------------------------------------------


def test_sweep_single_trial_aggregates():
    rep = sweep(base_exponent=8, m_values=[2, 3], trials=1, seed=4)
    for row in rep.rows:
        assert row.mean_load == row.reports[0].load_factor
        assert row.std_load == 0.0
        assert row.min_load == row.max_load == row.mean_load


def test_sweep_bad_m_reported_not_fatal():
    rep = sweep(base_exponent=8, m_values=[2, 5, 3], trials=1, seed=4)
    assert [row.levels for row in rep.rows] == [2, 3]
    assert len(rep.errors) == 1
    assert rep.errors[0][0] == 5


def test_sweep_rejects_zero_trials():
    with pytest.raises(ConfigError):
        sweep(trials=0)


def test_trial_seeds_distinct():
    seeds = {trial_seeds(0, m, t) for m in (1, 2, 3) for t in range(5)}
    assert len(seeds) == 15


# --- report emission ------------------------------------------------------


@pytest.fixture(scope="module")
def small_sweep():
    return sweep(base_exponent=8, m_values=[1, 2, 4], trials=2, seed=0)


def test_emit_table_percentage(small_sweep):
    text = emit_report(small_sweep, "table")
    assert "%" in text
    first = small_sweep.rows[0].reports[0]
    assert f"{first.load_factor * 100:.2f}%" in text


def test_emit_csv_roundtrip(small_sweep):
    text = emit_report(small_sweep, "csv")
    assert text.splitlines()[0] == ",".join(harness.CSV_HEADER)
    rows = parse_csv(text)
    flat = [(row.levels, t, r) for row in small_sweep.rows for t, r in enumerate(row.reports)]
    assert len(rows) == len(flat)
    for parsed, (m, trial, r) in zip(rows, flat):
        assert parsed["m"] == m
        assert parsed["trial"] == trial
        assert parsed["seed"] == r.seed
        assert parsed["total_capacity"] == r.total_capacity
        assert parsed["items_at_crisis"] == r.items_at_crisis
        assert parsed["load_factor"] == r.load_factor
        assert parsed["level_occupancies"] == [tuple(ls) for ls in r.level_stats]


def test_emit_json_schema(small_sweep):
    doc = json.loads(emit_report(small_sweep, "json"))
    jsonschema.validate(doc, REPORT_JSON_SCHEMA)
    assert [row["m"] for row in doc["rows"]] == [1, 2, 4]


def test_emit_fill_report(small_sweep):
    r = small_sweep.rows[0].reports[0]
    for fmt in ("table", "csv", "json"):
        assert emit_report(r, fmt)


def test_emit_unknown_format(small_sweep):
    with pytest.raises(ValueError):
        emit_report(small_sweep, "xml")


def test_sweep_csv_deterministic():
    a = emit_report(sweep(base_exponent=8, m_values=[1, 3], trials=2, seed=77), "csv")
    b = emit_report(sweep(base_exponent=8, m_values=[1, 3], trials=2, seed=77), "csv")
    assert a == b
    c = emit_report(sweep(base_exponent=8, m_values=[1, 3], trials=2, seed=78), "csv")
    assert a != c
