import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairloc.core import Instance, Objective, mge_value
from fairloc.optimal import (SolverConfig, SolverError, grid_error_bound, grid_oracle_single,
                             grid_oracle_two, opt_single, opt_two, single_candidates, solve,
                             two_agent_opt_wmgc)

from conftest import build, instances, random_instances

WTGC, WMGC = Objective.WTGC, Objective.WMGC


def one_center_value(xs, ws):
    """Weighted 1-center value on a line: the worst pair's balanced cost."""
    best = 0.0
    for a, b in combinations(range(len(xs)), 2):
        best = max(best, ws[a] * ws[b] * abs(xs[b] - xs[a]) / (ws[a] + ws[b]))
    return best


# --------------------------------------------------------------- closed form

def test_two_agent_examples():
    r = two_agent_opt_wmgc(0, 1, 1, 3, False)
    assert r.placement.locations == (0.75,) and r.value == 0.75
    r = two_agent_opt_wmgc(0, 1, 5, 5, True)
    assert r.placement.locations == (0.5,) and r.value == 2.5
    for same in (True, False):
        r = two_agent_opt_wmgc(2, 2, 1.5, 4, same)
        assert r.placement.locations == (2,) and r.value == 0


def test_two_agent_rejects_unsorted():
    with pytest.raises(ValueError):
        two_agent_opt_wmgc(1, 0, 1, 1, False)


# -------------------------------------------------------------------- k = 1

def test_opt_single_med_tight_instance():
    inst = build([(0, [1]), (0, [2]), (1, [0]), (1, [0])], [2, 1, 1])
    r = opt_single(inst, WTGC)
    assert r.placement[0] == pytest.approx(0.8, abs=1e-12)
    assert r.value == pytest.approx(0.8, abs=1e-12)


def test_opt_single_two_agent_instance_is_exact():
    inst = build([(0, [0]), (1, [1])], [1, 3])
    r = opt_single(inst, WMGC)
    ref = two_agent_opt_wmgc(0, 1, 1, 3, False)
    assert r.placement == ref.placement and r.value == ref.value


def test_opt_single_coincident():
    inst = build([(2.5, [0]), (2.5, [1])], [1, 4])
    for obj in (WTGC, WMGC):
        r = opt_single(inst, obj)
        assert r.placement.locations == (2.5,) and r.value == 0


def test_opt_single_flat_optimum_takes_smallest():
    # social cost of two agents is flat on [0, 1]
    inst = build([(0, [0]), (1, [0])], [1])
    assert opt_single(inst, WTGC).placement.locations == (0,)


@settings(max_examples=300, deadline=None)
@given(instances(dyadic=False), st.sampled_from([WTGC, WMGC]))
def test_opt_single_dominated_by_grid(inst, obj):
    r = opt_single(inst, obj)
    g = grid_oracle_single(inst, obj, 801)
    assert r.value == mge_value(inst, r.placement, obj)
    assert r.value <= g.value + 1e-9 * max(1, g.value)
    assert g.value - r.value <= g.error_bound + 1e-12


@given(instances(), st.sampled_from([WTGC, WMGC]))
def test_opt_single_local_optimality(inst, obj):
    r = opt_single(inst, obj)
    y = r.placement[0]
    for c in single_candidates(inst, obj):
        assert mge_value(inst, c, obj) >= r.value - 1e-12
    for d in (1e-3, 1e-6):
        assert mge_value(inst, y - d, obj) >= r.value - 1e-12
        assert mge_value(inst, y + d, obj) >= r.value - 1e-12


@given(st.floats(-5, 5), st.floats(0, 5), st.sampled_from([1, 2, 3, 5]),
       st.sampled_from([1, 2, 3, 5]), st.booleans())
def test_opt_single_matches_closed_form(x1, gap, w1, w2, same):
    x2 = x1 + gap
    if same:
        inst = build([(x1, [0]), (x2, [0])], [w1])
        ref = two_agent_opt_wmgc(x1, x2, w1, w1, True)
    else:
        inst = build([(x1, [0]), (x2, [1])], [w1, w2])
        ref = two_agent_opt_wmgc(inst.locations[0], inst.locations[1],
                                 inst.agent_weights[0], inst.agent_weights[1], False)
    r = opt_single(inst, WMGC)
    assert r.placement[0] == pytest.approx(ref.placement[0], abs=1e-12)
    assert r.value == pytest.approx(ref.value, abs=1e-12)


@given(instances(dyadic=False))
def test_wmgc_single_matches_pairwise_formula(inst):
    r = opt_single(inst, WMGC)
    assert r.value == pytest.approx(one_center_value(inst.locations, inst.agent_weights),
                                    rel=1e-12, abs=1e-12)


# -------------------------------------------------------------------- k = 2

def test_opt_two_endpoint_wtgc_n4(endpoint_wtgc_n4):
    r = opt_two(endpoint_wtgc_n4, WTGC)
    assert r.placement[0] == pytest.approx(0.4, abs=1e-12)
    assert r.placement[1] == 1
    assert r.value == pytest.approx(0.4, abs=1e-12)


def test_opt_two_endpoint_wmgc_instance():
    inst = build([(0, [0]), (0, [0]), (0.5, [1]), (1, [1])], [1, 3])
    r = opt_two(inst, WMGC)
    assert r.placement[0] == pytest.approx(0.375, abs=1e-12)
    assert r.placement[1] == 1
    assert r.value == pytest.approx(0.375, abs=1e-12)


def test_opt_two_heavy_agent_stacked_at_zero():
    # a heavy-group agent at 0 pins the left facility: the optimum is 3 * 0.25
    inst = build([(0, [0]), (0, [1]), (0.5, [1]), (1, [1])], [1, 3])
    r = opt_two(inst, WMGC)
    assert r.value == pytest.approx(0.75, abs=1e-12)
    g = grid_oracle_two(inst, WMGC, 401)
    assert g.value == pytest.approx(0.75, abs=g.error_bound)


def test_opt_two_one_facility_per_agent():
    inst = build([(-2, [0]), (3, [1])], [1, 2])
    for obj in (WTGC, WMGC):
        r = opt_two(inst, obj)
        assert r.placement.locations == (-2, 3) and r.value == 0


def test_degenerate_single_agent():
    inst = build([(4, [0])], [2])
    for obj in (WTGC, WMGC):
        assert opt_single(inst, obj).value == 0
        r = opt_two(inst, obj)
        assert r.placement.locations == (4, 4) and r.value == 0


@settings(max_examples=150, deadline=None)
@given(instances(n_max=6), st.sampled_from([WTGC, WMGC]))
def test_opt_two_against_grid(inst, obj):
    r = opt_two(inst, obj)
    g = grid_oracle_two(inst, obj, 81)
    assert r.value == mge_value(inst, r.placement, obj)
    assert r.value <= g.value + 1e-9 * max(1, g.value)
    assert g.value - r.value <= g.error_bound + 1e-12
    x = inst.locations
    assert x[0] <= r.placement[0] <= r.placement[1] <= x[-1]


@settings(max_examples=60, deadline=None)
@given(instances(n_max=6))
def test_nested_search_agrees_with_vertex_enumeration(inst):
    exact = opt_two(inst, WTGC)
    nested = opt_two(inst, WTGC, method="nested")
    assert nested.method == ("nested-search" if inst.span > 0 else "split-exact")
    assert exact.value <= nested.value + 1e-12
    assert nested.value - exact.value <= 1e-6 * max(1, exact.value)


@given(instances(n_max=7, dyadic=False), st.data())
def test_wmgc_split_decomposition(inst, data):
    xs, ws = inst.locations, inst.agent_weights
    per_split = []
    for s in range(1, inst.n):
        per_split.append(max(one_center_value(xs[:s], ws[:s]), one_center_value(xs[s:], ws[s:])))
        y1 = data.draw(st.floats(-10, 10))
        y2 = data.draw(st.floats(-10, 10))
        forced = max(max(w * abs(y1 - x) for x, w in zip(xs[:s], ws[:s])),
                     max(w * abs(y2 - x) for x, w in zip(xs[s:], ws[s:])))
        assert forced >= mge_value(inst, (y1, y2), WMGC)
    best = min(per_split) if per_split else 0.0
    assert opt_two(inst, WMGC).value == pytest.approx(best, rel=1e-12, abs=1e-12)


def test_optimal_tie_break_smallest_split():
    inst = build([(0, [0]), (1, [0]), (2, [0])], [1])
    # WTGC: splits s=1 and s=2 both give value 1; s=1 wins with (0, 1)
    r = opt_two(inst, WTGC)
    assert r.value == 1 and r.placement.locations == (0, 1)


# -------------------------------------------------------------- grid oracles

def test_grid_single_examples():
    inst = build([(0, [0]), (1, [1])], [1, 3])
    g = grid_oracle_single(inst, WMGC, 2001)
    assert g.error_bound == pytest.approx(3 / 2000)
    assert abs(g.value - 0.75) <= g.error_bound
    g = grid_oracle_single(build([(0.7, [0])], [1]), WTGC, 11)
    assert g.value == 0 and g.placement.locations == (0.7,)
    g = grid_oracle_single(build([(0, [0]), (1, [0])], [1]), WMGC, 2001)
    assert g.value == pytest.approx(0.5) and g.placement[0] == pytest.approx(0.5)


def test_grid_two_examples(endpoint_wtgc_n4):
    t5 = build([(0, [0]), (0, [0]), (0.5, [1]), (1, [1])], [1, 3])
    g = grid_oracle_two(t5, WMGC, 401)
    assert abs(g.value - 0.375) <= g.error_bound
    assert grid_oracle_two(build([(0, [0]), (1, [1])], [1, 1]), WTGC, 11).value == 0
    g = grid_oracle_two(endpoint_wtgc_n4, WTGC, 401)
    assert abs(g.value - 0.4) <= g.error_bound


def test_grid_error_bound_scales_with_group_size():
    inst = build([(0, [0]), (1, [0]), (1, [0])], [2])
    assert grid_error_bound(inst, WMGC, 101) == pytest.approx(2 / 100)
    assert grid_error_bound(inst, WTGC, 101) == pytest.approx(3 * 2 / 100)


def test_grid_points_validated():
    inst = build([(0, [0])], [1])
    with pytest.raises(ValueError):
        grid_oracle_single(inst, WTGC, 2)
    with pytest.raises(ValueError):
        SolverConfig(grid_points=2)
    with pytest.raises(ValueError):
        SolverConfig(location_tol=0)


def test_solver_config_value_tol():
    inst = build([(0, [0]), (4, [0])], [1])
    assert SolverConfig().tol_for(inst) == pytest.approx(4e-9)
    assert SolverConfig().tol_for(build([(1, [0])], [1])) == 1e-12
    assert SolverConfig(value_tol=1e-3).tol_for(inst) == 1e-3


def test_cross_check_runs_oracle():
    cfg = SolverConfig(cross_check=True, grid_points=201, cross_check_points=41)
    for inst in random_instances(3, 20):
        for obj in (WTGC, WMGC):
            opt_single(inst, obj, cfg)
            opt_two(inst, obj, cfg)


def test_cross_check_detects_bad_value(monkeypatch):
    import fairloc.optimal as optimal
    inst = build([(0, [0]), (1, [1])], [1, 1])
    fake = optimal.OptResult(optimal.Placement((0.0,)), 0.0, "grid")
    monkeypatch.setattr(optimal, "grid_oracle_single", lambda *a, **k: fake)
    with pytest.raises(SolverError):
        optimal.opt_single(inst, WTGC, SolverConfig(cross_check=True))


def test_solve_dispatch_and_refusal():
    from fairloc.multi import UnsupportedFacilityCount
    inst = build([(0, [0]), (1, [1])], [1, 3])
    assert solve(inst, WMGC, 1).value == 0.75
    assert solve(inst, "wmgc", 2).value == 0
    with pytest.raises(UnsupportedFacilityCount):
        solve(inst, WMGC, 3)
