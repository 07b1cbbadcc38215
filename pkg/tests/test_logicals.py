import pytest

from helpers import exhaustive_logicals, support_is_connected
from treedec import (
    BoundConfig,
    CheckMatrix,
    DecodingProblem,
    WeightVector,
    all_min_weight_logicals,
    enclosing_logicals,
    find_distance,
    syndrome_of,
)


def test_steane_line_enumeration_matches_exhaustive(steane):
    problem = steane.problem_x()
    oracle = exhaustive_logicals(problem, 3)
    assert len(oracle) == 7
    result = all_min_weight_logicals(problem, 3, s=1)
    assert result.operators == frozenset(oracle)
    for op in result.operators:
        assert len(op) == 3
        assert syndrome_of(problem.H, op) == frozenset()
        assert any(len(rs & op) % 2 for rs in problem.A.row_sets)


def test_enclosing_from_single_qubit(steane):
    problem = steane.problem_x()
    oracle = exhaustive_logicals(problem, 3)
    for j in range(7):
        through_j = {op for op in oracle if j in op}
        assert enclosing_logicals(frozenset({j}), problem, 3) == through_j


def test_trivial_syndrome_intermediates_are_dropped():
    # columns 0 and 1 are identical, so {0, 1} is a weight-2 stabilizer;
    # expansion must not grow through it
    H = CheckMatrix.from_rows([[0, 1, 2]], 3)
    A = CheckMatrix.from_rows([[2]], 3)
    problem = DecodingProblem(H, A, WeightVector.uniform(3))
    out = enclosing_logicals(frozenset({0}), problem, 3)
    for op in out:
        assert syndrome_of(H, op) == frozenset()
        assert not any(syndrome_of(H, sub) == frozenset() for sub in [frozenset(list(op)[:2])])


def test_no_logicals_below_distance(steane):
    problem = steane.problem_x()
    assert enclosing_logicals(frozenset({0}), problem, 2) == set()
    assert all_min_weight_logicals(problem, 2, s=1).count == 0


def test_separation_point_independence(steane, cc5):
    for code, d in ((steane, 3), (cc5, 5)):
        problem = code.problem_x()
        reference = all_min_weight_logicals(problem, d, s=1).operators
        for s in (2, 3):
            assert all_min_weight_logicals(problem, d, s=s).operators == reference


def test_cc5_completeness_against_exhaustive(cc5):
    problem = cc5.problem_x()
    oracle = exhaustive_logicals(problem, 5)
    result = all_min_weight_logicals(problem, 5, s=2)
    assert result.operators == frozenset(oracle)


def test_h2_only_configuration_matches_default(cc5):
    problem = cc5.problem_x()
    h2_only = BoundConfig(use_h2=True, color_subset=False, cluster=False, coloring=None)
    assert (
        all_min_weight_logicals(problem, 5, s=2, cfg=h2_only).operators
        == all_min_weight_logicals(problem, 5, s=2).operators
    )


def test_enumerated_operators_are_connected(cc5):
    problem = cc5.problem_x()
    for op in all_min_weight_logicals(problem, 5, s=2).operators:
        assert support_is_connected(problem.H, op)


def test_find_distance_color_codes(steane, cc5):
    assert find_distance(steane.problem_x()).d == 3
    res = find_distance(cc5.problem_x())
    assert res.d == 5 and res.status == "exact"
    for row in res.per_row:
        assert row["status"] == "found"
        witness = frozenset(row["witness"])
        assert syndrome_of(cc5.hx, witness) == frozenset()


def test_find_distance_timeout_reports_partial(cc7):
    res = find_distance(cc7.problem_x(), time_budget=0.0)
    assert res.d is None and res.status == "unknown"
    assert all(row["weight"] is None for row in res.per_row)


def test_find_distance_requires_logical_action(steane):
    problem = DecodingProblem(steane.hx, None, WeightVector.uniform(7))
    with pytest.raises(ValueError):
        find_distance(problem)
