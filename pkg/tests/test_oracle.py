import numpy as np
import pytest

from conftest import EQUAL_DEMAND, TYRE, scenario
from oracles import trapezoid
from rlinv.model import DecisionVector, SystemParameters, derive, inventory_cost, parallel_flow_cost
from rlinv.oracle import (
    TraceInconsistency,
    build_trace,
    random_instance,
    refine,
    simulated_cost,
    trace_areas,
)

FIXTURES = TYRE + EQUAL_DEMAND + ["two_market"]
ANALYTIC = {"serial": inventory_cost, "parallel": parallel_flow_cost}


@pytest.mark.parametrize("variant", ["serial", "parallel"])
@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_residual(name, variant):
    sc = scenario(name)
    tr = build_trace(sc.params, sc.decision, variant)
    sim = simulated_cost(tr, sc.params, sc.decision)
    ref = ANALYTIC[variant](sc.params, sc.decision).total_rate
    assert abs(sim - ref) / ref <= 0.005
    # exact geometry, so in practice the match is to rounding
    assert sim == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("variant", ["serial", "parallel"])
def test_random_instances(variant):
    rng = np.random.default_rng(20240611)
    for _ in range(100):
        P, d = random_instance(rng)
        sim = simulated_cost(build_trace(P, d, variant), P, d)
        ref = ANALYTIC[variant](P, d).total_rate
        assert abs(sim - ref) <= 0.005 * abs(ref)


def test_random_instances_are_seeded():
    a = [random_instance(np.random.default_rng(3)) for _ in range(3)]
    b = [random_instance(np.random.default_rng(3)) for _ in range(3)]
    assert a == b


def test_known_costs(tyre1, two_market):
    for sc, want in ((tyre1, 51.78), (two_market, 6372.5)):
        sim = simulated_cost(build_trace(sc.params, sc.decision), sc.params, sc.decision)
        assert abs(sim - want) / want <= 0.005


def _jump_times(tr, which, sign):
    left, right = (tr.supply_left, tr.supply_right) if which == "supply" else (tr.repair_left, tr.repair_right)
    jump = right - left
    return tr.times[sign * jump > 1e-9]


def test_tooth_counts(tyre1):
    tr = build_trace(tyre1.params, tyre1.decision)
    sch = derive(tyre1.params, tyre1.decision)
    up = _jump_times(tr, "supply", +1)
    assert np.sum(up < sch.Tp - 1e-12) == 3
    assert np.sum(up >= sch.Tp - 1e-12) == 3
    assert len(_jump_times(tr, "repair", -1)) == 3
    assert tr.T == pytest.approx(1.05 + 45 / 43)


def test_single_teeth_peaks():
    P = SystemParameters(100, 50, 0.5, 1, 0.5, 1, 1, 1, 1)
    d = DecisionVector(100, 40, 1, 1, 0.5)
    tr = build_trace(P, d)
    assert tr.supply_right[0] == 100
    k = np.flatnonzero(np.isclose(tr.times, 1.0))[0]
    assert tr.supply_left[k] == pytest.approx(0.0, abs=1e-9)
    assert tr.supply_right[k] == pytest.approx(40.0)
    assert tr.supply_left[-1] == pytest.approx(0.0, abs=1e-9)


def test_repair_level_at_end_of_procurement(two_market):
    tr = build_trace(two_market.params, two_market.decision)
    k = np.flatnonzero(np.isclose(tr.times, 1.0))[0]
    assert tr.repair_left[k] == pytest.approx(960.0)
    # the XYF ramp area from the same rate and duration
    assert 960.0 * 1.0 / 2 == pytest.approx(two_market.params.R1 * 1.0**2 / 2)


def test_supply_rates(two_market):
    tr = build_trace(two_market.params, two_market.decision)
    slopes = (tr.supply_left[1:] - tr.supply_right[:-1]) / np.diff(tr.times)
    mid = 0.5 * (tr.times[1:] + tr.times[:-1])
    assert np.allclose(slopes[mid < 1.0], -1500)
    assert np.allclose(slopes[mid > 1.0], -2500)


@pytest.mark.parametrize("variant", ["serial", "parallel"])
def test_areas_against_exact_rational_trapezoid(tyre1, variant):
    tr = build_trace(tyre1.params, tyre1.decision, variant)
    sup, rep = trace_areas(tr)
    assert sup == pytest.approx(trapezoid(tr.times, tr.supply_left, tr.supply_right), rel=1e-12)
    assert rep == pytest.approx(trapezoid(tr.times, tr.repair_left, tr.repair_right), rel=1e-12)


@pytest.mark.parametrize("k", [2, 7, 50])
def test_refine_keeps_areas(two_market, k):
    tr = build_trace(two_market.params, two_market.decision, "parallel")
    a = trace_areas(tr)
    b = trace_areas(refine(tr, k))
    assert b[0] == pytest.approx(a[0], rel=1e-9)
    assert b[1] == pytest.approx(a[1], rel=1e-9)


def test_setup_only_when_holding_free(tyre1):
    P = tyre1.params.with_(hp=0.0, hr=0.0)
    tr = build_trace(P, tyre1.decision)
    T = derive(P, tyre1.decision).T
    assert simulated_cost(tr, P, tyre1.decision) == (3 * P.Sr + 3 * P.Sp) / T


def test_reported_optimum_is_flagged_not_rejected(tyre1):
    # the closed form lets the repair depot dip below zero at this decision
    tr = build_trace(tyre1.params, tyre1.decision)
    assert not tr.consistent
    assert tr.min_level < 0
    with pytest.raises(TraceInconsistency):
        build_trace(tyre1.params, tyre1.decision, strict=True)


def test_consistent_schedule_passes_strict():
    P = SystemParameters(100, 50, 0.8, 1, 0.5, 1, 1, 1, 1)
    d = DecisionVector(100, 20, 2, 1, 0.5)
    tr = build_trace(P, d, strict=True)
    assert tr.consistent and tr.min_level >= 0


def test_model_check_rejects_infeasible():
    P = SystemParameters(10, 10, 0.5, 1, 0.5, 1, 1, 1, 1)
    with pytest.raises(TraceInconsistency):
        build_trace(P, DecisionVector(10, 20, 1, 1, 0.5), model=1)


def test_unknown_variant(tyre1):
    with pytest.raises(ValueError):
        build_trace(tyre1.params, tyre1.decision, "diagonal")


def test_text_export(tyre1):
    tr = build_trace(tyre1.params, tyre1.decision)
    lines = tr.to_text().strip().splitlines()
    assert lines[0] == "time,supply,repair"
    rows = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])
    assert rows[0, 0] == 0.0 and rows[-1, 0] == pytest.approx(tr.T)
    assert np.all(np.diff(rows[:, 0]) >= 0)
    # the exported polyline integrates to the same areas
    t, s = rows[:, 0], rows[:, 1]
    assert np.sum(np.diff(t) * (s[1:] + s[:-1]) / 2) == pytest.approx(trace_areas(tr)[0], rel=1e-12)
    assert ";" in tr.to_text(";").splitlines()[0]
