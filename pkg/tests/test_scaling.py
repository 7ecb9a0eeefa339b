import numpy as np
import pytest

from solspace.formulas import CnfFormula
from solspace.scaling import (FamilySpec, FitRefused, ScalingPoint, conjoined_scaling, fit_scaling,
                              get_scaling_table, run_scaling)
from conftest import get_satisfiable_3sat


def planted_points(coefficient, intercept, sizes, transform=lambda n: n, repeats=3):
    return [ScalingPoint(n=n, size=n, seed=j, conflicts=2**(coefficient*transform(n) + intercept),
                         status="UNSAT")
            for n in sizes for j in range(repeats)]


# ---------- #
#  Fits      #
# ---------- #
def test_planted_linear_fit():
    points = planted_points(0.25, 1.5, [10, 20, 30, 40, 50])
    fit = fit_scaling(points, "exp-linear")
    assert fit.coefficient == pytest.approx(0.25, abs=1e-9)
    assert fit.intercept == pytest.approx(1.5, abs=1e-9)
    assert fit.r_squared == pytest.approx(1)
    assert fit.points_used == 15
    assert fit.sizes_used == 5
    assert fit.predict(60) == pytest.approx(2**(0.25*60 + 1.5))


def test_planted_two_thirds_fit():
    points = planted_points(0.8, 0.0, [8, 27, 64, 125], transform=lambda n: n**(2/3))
    fit = fit_scaling(points, "exp-two-thirds")
    assert fit.coefficient == pytest.approx(0.8, abs=1e-9)
    assert fit.intercept == pytest.approx(0.0, abs=1e-9)


def test_constant_conflicts():
    points = [ScalingPoint(n=n, size=n, seed=0, conflicts=7, status="UNSAT") for n in [5, 10, 15, 20]]
    fit = fit_scaling(points)
    assert fit.coefficient == pytest.approx(0, abs=1e-12)
    assert fit.intercept == pytest.approx(np.log2(7))


def test_zero_conflicts_count_as_one():
    points = [ScalingPoint(n=n, size=n, seed=0, conflicts=0, status="UNSAT") for n in [5, 10, 15]]
    fit = fit_scaling(points)
    assert fit.coefficient == pytest.approx(0, abs=1e-12)
    assert fit.intercept == pytest.approx(0, abs=1e-12)


def test_median_per_size():
    points = planted_points(0.5, 0, [10, 20, 30], repeats=1)
    # an outlier at each size does not move the median of three
    points += [ScalingPoint(n=n, size=n, seed=1, conflicts=2**(0.5*n), status="UNSAT") for n in [10, 20, 30]]
    points += [ScalingPoint(n=n, size=n, seed=2, conflicts=1e9, status="UNSAT") for n in [10, 20, 30]]
    assert fit_scaling(points).coefficient == pytest.approx(0.5, abs=1e-9)


def test_fit_refused():
    with pytest.raises(FitRefused):
        fit_scaling(planted_points(0.5, 0, [10, 20]))
    with pytest.raises(FitRefused):
        fit_scaling(planted_points(0.5, 0, [10, 20, 30], repeats=1)[:2])
    with pytest.raises(FitRefused):
        fit_scaling([])
    with pytest.raises(ValueError):
        fit_scaling(planted_points(0.5, 0, [10, 20, 30]), model="polynomial")


def test_censored_and_excluded_points_are_left_out():
    points = planted_points(0.5, 0, [10, 20, 30, 40], repeats=1)
    points.append(ScalingPoint(n=50, size=50, seed=0, conflicts=100, status="BUDGET",
                               excluded=True, reason="censored"))
    points.append(ScalingPoint(n=40, size=40, seed=1, conflicts=1, status="SAT",
                               excluded=True, reason="status SAT"))
    fit = fit_scaling(points)
    assert fit.coefficient == pytest.approx(0.5, abs=1e-9)
    assert fit.points_used == 4
    assert fit.censored == 1
    assert fit.excluded == 1
    assert points[-2].censored


# ---------- #
#  Runs      #
# ---------- #
def test_tseitin_sizes_are_unsat():
    points = run_scaling(FamilySpec("tseitin"), [2, 3], seeds_per_size=2, seed=1)
    assert [p.size for p in points] == [2, 2, 3, 3]
    assert [p.n for p in points] == [16, 16, 36, 36]
    assert all(p.status == "UNSAT" for p in points)
    assert not any(p.excluded for p in points)


@pytest.mark.slow
def test_tseitin_scaling_fit():
    points = run_scaling(FamilySpec("tseitin"), [2, 3, 4, 5], seeds_per_size=3, seed=1, workers=4)
    assert all(p.status == "UNSAT" for p in points if not p.censored)
    medians = get_scaling_table(points)["median_conflicts"]
    assert all(b > a for a, b in zip(medians[:-1], medians[1:]))
    fit = fit_scaling(points)
    assert fit.coefficient > 0.1
    assert fit.r_squared >= 0.8


@pytest.mark.slow
def test_random_3sat_two_thirds_fit():
    family = FamilySpec("random-ksat", {"alpha": 4.5}, target_status="UNSAT")
    points = run_scaling(family, [60, 80, 100, 120, 140], seeds_per_size=5, seed=2, workers=4)
    # satisfiable instances at this density are excluded from the fit
    assert all(p.status == "UNSAT" for p in points if not p.excluded)
    fit = fit_scaling(points, "exp-two-thirds")
    assert 0.1 <= fit.coefficient <= 0.9
    assert fit.r_squared >= 0.8


def test_sizes_are_independent():
    family = FamilySpec("random-ksat", {"alpha": 4.5}, target_status=None)
    a = run_scaling(family, [10, 14], seeds_per_size=2, seed=3)
    b = run_scaling(family, [14], seeds_per_size=2, seed=3)
    assert [(p.seed, p.conflicts) for p in a[2:]] == [(p.seed, p.conflicts) for p in b]


def test_run_independent_of_workers():
    family = FamilySpec("random-ksat", {"alpha": 4.5}, target_status=None)
    a = run_scaling(family, [10, 12, 14], seeds_per_size=2, seed=0, workers=1)
    b = run_scaling(family, [10, 12, 14], seeds_per_size=2, seed=0, workers=2)
    assert [(p.seed, p.conflicts, p.status) for p in a] == [(p.seed, p.conflicts, p.status) for p in b]


def test_censoring():
    points = run_scaling(FamilySpec("tseitin"), [3, 4], seeds_per_size=2, budget=1)
    assert all(p.censored and p.excluded for p in points)
    table = get_scaling_table(points)
    assert list(table["censored"]) == [2, 2]
    assert list(table["used"]) == [0, 0]
    with pytest.raises(FitRefused):
        fit_scaling(points)


def test_status_mismatch_warns():
    family = FamilySpec("random-ksat", {"alpha": 1.0}, target_status="UNSAT")
    with pytest.warns(UserWarning):
        points = run_scaling(family, [10, 12], seeds_per_size=1)
    assert all(p.excluded and p.reason == "status SAT" for p in points)


def test_invalid_sizes():
    family = FamilySpec("tseitin")
    with pytest.raises(ValueError):
        run_scaling(family, [])
    with pytest.raises(ValueError):
        run_scaling(family, [3, 2])
    with pytest.raises(ValueError):
        run_scaling(family, [2, 2])
    with pytest.raises(ValueError):
        FamilySpec("pigeonhole")


def test_empty_payload_changes_nothing():
    family = FamilySpec("tseitin")
    plain = run_scaling(family, [2, 3], seeds_per_size=2, seed=5)
    conjoined = conjoined_scaling(family, CnfFormula(0), [2, 3], seeds_per_size=2, seed=5)
    assert [p.conflicts for p in plain] == [p.conflicts for p in conjoined]
    assert [p.n for p in plain] == [p.n for p in conjoined]


def test_payload_keeps_core_status():
    payload = get_satisfiable_3sat(20, 3.0, seed=0)
    points = conjoined_scaling(FamilySpec("tseitin"), payload, [2, 3], seeds_per_size=1)
    assert all(p.status == "UNSAT" for p in points)
    # n counts the core variables only
    assert [p.n for p in points] == [16, 36]


def test_unsatisfiable_payload_refused(contradiction):
    with pytest.raises(ValueError):
        conjoined_scaling(FamilySpec("tseitin"), contradiction, [2, 3])


def test_family_record():
    family = FamilySpec("random-ksat", {"alpha": 4.2, "k": 3})
    again = FamilySpec.from_dict(family.to_dict())
    assert again.kind == family.kind
    assert again.params == family.params
    formula, n = family.build(20, seed=1)
    assert n == 20
    assert formula.nclauses == 84


def test_scaling_table():
    points = planted_points(0.5, 0, [10, 20, 30], repeats=3)
    table = get_scaling_table(points)
    assert list(table["size"]) == [10, 20, 30]
    assert list(table["used"]) == [3, 3, 3]
    assert table["median_conflicts"].iloc[0] == pytest.approx(2**5)
