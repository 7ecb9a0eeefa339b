import numpy as np
import pytest

from solspace.formulas import CnfFormula, margulis_expander, parity_clauses, random_charges, tseitin
from solspace.lineartest import (InsufficientSample, gaussian_decide, get_solution_pool,
                                 xor_closure_test)
from solspace.solver import brute_force, check_assignment
from solspace.utils.tools import derive_seed
from conftest import get_consistent_xorsat, get_satisfiable_3sat


def test_xorsat_is_closed(xorsat):
    report = xor_closure_test(xorsat, triples=200, seed=1)
    assert report.pool_source == "enumerate"
    assert report.pool_size == len(brute_force(xorsat))
    assert report.triples_tested == 200
    assert report.violations == 0
    assert report.violation_rate == 0


def test_xorsat_controls_are_closed():
    for seed in range(10):
        formula = get_consistent_xorsat(14, 7, seed=50*seed)
        assert xor_closure_test(formula, triples=100, seed=seed).violations == 0


def test_random_3sat_is_not_closed():
    rates = []
    for seed in range(5):
        formula = get_satisfiable_3sat(14, 3.5, seed=20*seed)
        try:
            report = xor_closure_test(formula, triples=100, seed=seed)
        except InsufficientSample:
            continue
        rates.append(report.violation_rate)
        for combo in report.violating:
            combined = np.bitwise_xor.reduce(get_solution_pool(formula)[0][list(combo)], axis=0)
            assert not check_assignment(formula, combined)
    assert len(rates) > 0
    assert np.mean(rates) > 0.2


def test_linear_form():
    # x1 = x2: a linear space
    formula = CnfFormula(4, parity_clauses([1, 2], 0))
    report = xor_closure_test(formula, triples=10, form="linear")
    assert report.violations == 0
    assert report.pool_size == 8
    # x1 != x2: affine, not linear
    shifted = CnfFormula(4, parity_clauses([1, 2], 1))
    assert xor_closure_test(shifted, triples=10, form="affine").violations == 0
    assert xor_closure_test(shifted, triples=10, form="linear").violation_rate == 1.0


def test_insufficient_sample(small_sat, contradiction):
    with pytest.raises(InsufficientSample):
        xor_closure_test(small_sat, form="affine")
    assert xor_closure_test(small_sat, form="linear").triples_tested == 1
    with pytest.raises(InsufficientSample):
        xor_closure_test(contradiction)


def test_all_combinations_when_few():
    formula = CnfFormula(2)
    report = xor_closure_test(formula, triples=200)
    # C(4, 3)
    assert report.triples_tested == 4
    assert len(set(map(tuple, report.violating))) == report.violations


def test_pool_order_does_not_matter(xorsat):
    pool, _ = get_solution_pool(xorsat)
    shuffled = pool[np.random.default_rng(0).permutation(len(pool))]
    a = xor_closure_test(xorsat, triples=50, seed=3, pool=pool)
    b = xor_closure_test(xorsat, triples=50, seed=3, pool=shuffled)
    assert a.get_row() == b.get_row()
    assert a.pool_source == "given"


def test_deterministic():
    formula = get_satisfiable_3sat(14, 3.5, seed=0)
    a = xor_closure_test(formula, triples=30, seed=4, form="linear")
    b = xor_closure_test(formula, triples=30, seed=4, form="linear")
    assert a.to_dict() == b.to_dict()


def test_probe_pool(easy_3sat):
    pool, source = get_solution_pool(easy_3sat, probes=20, seed=1)
    assert source == "probes"
    assert 1 <= len(pool) <= 20
    assert all(check_assignment(easy_3sat, p) for p in pool)
    assert len(np.unique(pool, axis=0)) == len(pool)


def test_pool_and_combinations_use_separate_streams(easy_3sat):
    report = xor_closure_test(easy_3sat, triples=25, seed=6, probes=20)
    assert report.pool_source == "probes"
    pool, _ = get_solution_pool(easy_3sat, probes=20, seed=derive_seed(6, 0))
    given = xor_closure_test(easy_3sat, triples=25, seed=6, pool=pool)
    assert given.pool_size == report.pool_size
    assert given.violating == report.violating


def test_invalid_arguments(xorsat):
    with pytest.raises(ValueError):
        xor_closure_test(xorsat, form="quadratic")
    with pytest.raises(ValueError):
        xor_closure_test(xorsat, triples=0)
    with pytest.raises(ValueError):
        get_solution_pool(xorsat, source="survey")


def test_report_record(xorsat):
    record = xor_closure_test(xorsat, triples=20).to_dict()
    assert record["violation_rate"] == 0
    assert "triples" in record["sampling"]
    assert record["violating"] == []


# ---------- #
#  GF(2)     #
# ---------- #
def test_gaussian_decide_tseitin():
    for m in [2, 3, 5, 8]:
        graph = margulis_expander(m)
        odd = tseitin(graph, random_charges(graph, parity=1, seed=m))
        result = gaussian_decide(odd.cnf)
        assert result.is_unsat
        assert result.stats["rank"] == graph.num_vertices - 1
        assert result.stats["equations"] == graph.num_vertices

        even = tseitin(graph, random_charges(graph, parity=0, seed=m))
        result = gaussian_decide(even.cnf)
        assert result.is_sat
        assert check_assignment(even.cnf, result.witness)


def test_gaussian_decide_xorsat(xorsat):
    result = gaussian_decide(xorsat)
    assert result.is_sat
    assert check_assignment(xorsat, result.witness)
    assert gaussian_decide(xorsat.parity_system).is_sat


def test_gaussian_decide_refuses(easy_3sat):
    with pytest.raises(ValueError):
        gaussian_decide(easy_3sat)
    with pytest.raises(TypeError):
        gaussian_decide([[1, 2]])


@pytest.mark.slow
@pytest.mark.parametrize("n,alpha", [(50, 4.0), (100, 4.0), (200, 4.25)])
def test_random_3sat_violates_closure(n, alpha):
    formula = get_satisfiable_3sat(n, alpha)
    report = xor_closure_test(formula, triples=200, seed=1, probes=200, workers=4)
    assert report.pool_source == "probes"
    assert report.violation_rate >= 0.99
