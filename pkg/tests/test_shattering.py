import numpy as np
import pytest

from solspace.formulas import CnfFormula, gen_random_ksat
from solspace.shattering import (cluster_assign, default_tau, forced_probe_sample, get_shatter_table,
                                 probe_size, shatter_report)
from solspace.solver import brute_force, check_assignment
from solspace.topology import connected_components
from conftest import as_bits


def test_default_tau():
    assert default_tau(10) == 4
    assert default_tau(41) == 5
    assert default_tau(100) == 10


def test_probe_size():
    assert probe_size(100, 0.05) == 5
    # half to even
    assert probe_size(50, 0.05) == 2
    assert probe_size(10, 0.0) == 0


def test_cluster_assign_threshold():
    points = [as_bits("0000000000"), as_bits("0000000001"), as_bits("1111111111")]
    assert list(cluster_assign(points, 1)) == [0, 0, 1]
    assert list(cluster_assign(points, 0)) == [0, 1, 2]
    assert list(cluster_assign(points, 10)) == [0, 0, 0]


def test_cluster_assign_transitive():
    # 000 - 001 - 011 - 111 is a chain of distance-1 links
    points = [as_bits(b) for b in ["111", "000", "011", "001"]]
    assert list(cluster_assign(points, 1)) == [0, 0, 0, 0]


def test_cluster_assign_order_invariant():
    rng = np.random.default_rng(0)
    points = rng.integers(0, 2, size=(30, 12)).astype(np.uint8)
    labels = cluster_assign(points, 3)
    permutation = rng.permutation(len(points))
    shuffled = cluster_assign(points[permutation], 3)
    assert np.array_equal(shuffled, labels[permutation])


def test_cluster_assign_empty():
    assert len(cluster_assign(np.zeros((0, 5)), 2)) == 0


def test_cluster_assign_monotone_in_tau():
    rng = np.random.default_rng(4)
    points = rng.integers(0, 2, size=(40, 16)).astype(np.uint8)
    previous = cluster_assign(points, 0)
    assert previous.max() + 1 == len(np.unique(points, axis=0))
    for tau in range(1, 17):
        labels = cluster_assign(points, tau)
        assert labels.max() <= previous.max()
        # a larger threshold only merges clusters
        for label in np.unique(previous):
            assert len(np.unique(labels[previous == label])) == 1
        previous = labels
    assert previous.max() == 0


def test_probes_are_reproducible(easy_3sat):
    a = forced_probe_sample(easy_3sat, probes=12, seed=3)
    b = forced_probe_sample(easy_3sat, probes=12, seed=3, workers=2)
    assert [r.probe_id for r in b] == list(range(12))
    for ra, rb in zip(a, b):
        assert ra.fixed_vars == rb.fixed_vars
        assert ra.outcome == rb.outcome
        assert np.array_equal(ra.witness, rb.witness)


def test_probes_fix_the_requested_variables(easy_3sat):
    records = forced_probe_sample(easy_3sat, fraction=0.2, probes=10, seed=1)
    for record in records:
        assert len(record.fixed_vars) == probe_size(easy_3sat.num_vars, 0.2)
        assert len({v for v, _ in record.fixed_vars}) == len(record.fixed_vars)
        if record.outcome == "SAT":
            assert check_assignment(easy_3sat, record.witness)
            for v, b in record.fixed_vars:
                assert record.witness[v-1] == b


def test_probe_arguments(easy_3sat):
    with pytest.raises(ValueError):
        forced_probe_sample(easy_3sat, fraction=1.0)
    with pytest.raises(ValueError):
        forced_probe_sample(easy_3sat, probes=0)
    with pytest.raises(ValueError):
        shatter_report(easy_3sat, method="survey")
    with pytest.raises(ValueError):
        shatter_report(easy_3sat, tau=-1)


def test_shatter_report(easy_3sat):
    report = shatter_report(easy_3sat, probes=30, seed=2)
    assert report.probes_run == 30
    assert report.sat_probes + report.unsat_probes + report.budget_probes == 30
    assert 1 <= report.solutions_found <= report.sat_probes
    assert 1 <= report.cluster_count_lower_bound <= report.solutions_found
    assert report.linkage_threshold == default_tau(easy_3sat.num_vars)
    for witness in report.witnesses:
        assert check_assignment(easy_3sat, witness)
    if report.has_inter:
        assert report.inter_over_n == pytest.approx(report.inter_mean / easy_3sat.num_vars)
    assert set(report.get_row()) == set(report.ROW_KEYS)
    assert len(report.to_dict()["probes"]) == 30


def test_shatter_report_independent_of_workers(easy_3sat):
    a = shatter_report(easy_3sat, probes=16, seed=5, workers=1)
    b = shatter_report(easy_3sat, probes=16, seed=5, workers=2)
    assert np.array_equal(a.witnesses, b.witnesses)
    assert np.array_equal(a.labels, b.labels)
    assert a.cluster_count_lower_bound == b.cluster_count_lower_bound


def test_single_solution():
    formula = CnfFormula(8, [(v,) for v in range(1, 9)])
    report = shatter_report(formula, probes=10, seed=0)
    assert report.solutions_found == 1
    assert report.cluster_count_lower_bound == 1
    assert np.isnan(report.intra_mean)
    assert np.isnan(report.inter_mean)
    assert np.isnan(report.ratio)


def test_unsatisfiable(contradiction):
    report = shatter_report(contradiction, probes=5, seed=0)
    assert report.solutions_found == 0
    assert report.cluster_count_lower_bound == 0
    assert report.unsat_probes == 5
    assert np.isnan(report.inter_over_n)


def test_blocking_baseline(small_sat):
    report = shatter_report(small_sat, probes=10, method="blocking", tau=0)
    assert report.solutions_found == 2
    assert report.cluster_count_lower_bound == 2


def get_two_chains(n=20):
    """ x1, x2 free, x3 = ... = x11 and x12 = ... = x20: 4 components of 4 solutions, 9 flips apart """
    clauses = []
    for first, last in [(3, 11), (12, n)]:
        for v in range(first, last):
            clauses += [(-v, v + 1), (v, -(v + 1))]
    return CnfFormula(n, clauses)


def test_cluster_count_on_compact_components():
    formula = get_two_chains()
    solutions = brute_force(formula)
    assert len(solutions) == 16
    assert connected_components(solutions).max() + 1 == 4

    report = shatter_report(formula, probes=40, seed=3)
    assert report.solutions_found >= 1
    # every component has diameter 2 <= tau, so clusters are components
    sampled = {(int(w[2]), int(w[11])) for w in report.witnesses}
    assert report.cluster_count_lower_bound == len(sampled)
    assert report.cluster_count_lower_bound <= 4


def test_linkage_never_splits_components():
    for seed in range(20):
        n = 10 + seed % 5
        solutions = brute_force(gen_random_ksat(n, 3.0, seed=seed))
        if len(solutions) == 0:
            continue
        components = connected_components(solutions)
        # tau = 1 is the Hamming-1 graph itself
        assert np.array_equal(cluster_assign(solutions.members, 1), components)
        for tau in [2, default_tau(n)]:
            assert cluster_assign(solutions.members, tau).max() <= components.max()


def test_shatter_table(easy_3sat):
    reports = [shatter_report(easy_3sat, probes=8, seed=s) for s in range(3)]
    table = get_shatter_table(reports)
    assert list(table["n"]) == [easy_3sat.num_vars]
    assert table["seeds"].iloc[0] == 3
    assert table["clusters"].iloc[0].endswith("+")
    assert len(get_shatter_table([])) == 0


@pytest.mark.slow
def test_shattering_near_threshold():
    from conftest import get_satisfiable_3sat
    for n in [100, 200]:
        reports = [shatter_report(get_satisfiable_3sat(n, 4.0, seed=100*s), probes=200, seed=s, workers=4)
                   for s in range(5)]
        table = get_shatter_table(reports)
        assert 0.30 <= table["inter_over_n"].iloc[0] <= 0.45
        assert table["intra"].iloc[0] <= 4
        assert table["ratio"].iloc[0] >= 10
        assert np.median([r.cluster_count_lower_bound for r in reports]) >= 10
