import os
import sys

import numpy as np
import pytest

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), os.pardir))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from solspace.formulas import CnfFormula, gen_random_ksat, gen_control_family


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale reproduction runs (minutes)")


@pytest.fixture
def root_dir():
    return ROOT


@pytest.fixture
def output_dir(tmp_path):
    path = tmp_path / "runs"
    path.mkdir()
    return str(path)


@pytest.fixture
def contradiction():
    """ (x1) and (not x1) """
    return CnfFormula(1, [(1,), (-1,)])


@pytest.fixture
def small_sat():
    """ (x1 or x2) and (not x1 or x2): solutions 01 and 11 """
    return CnfFormula(2, [(1, 2), (-1, 2)])


@pytest.fixture
def easy_3sat():
    """ satisfiable random 3-SAT, 30 variables at density 3 """
    return get_satisfiable_3sat(30, 3.0)


def get_satisfiable_3sat(n, alpha, seed=0):
    from solspace.solver import solve
    for s in range(seed, seed + 1000):
        formula = gen_random_ksat(n, alpha, seed=s)
        if solve(formula).is_sat:
            return formula
    raise RuntimeError("no satisfiable instance found")


@pytest.fixture
def xorsat():
    """ consistent XOR-SAT control, 12 variables, 6 equations """
    return get_consistent_xorsat(12, 6)


def get_consistent_xorsat(n, m, seed=0):
    for s in range(seed, seed + 1000):
        formula = gen_control_family("xorsat", n, m, seed=s)
        if formula.parity_system.solve()[0]:
            return formula
    raise RuntimeError("no consistent system found")


def as_bits(text):
    return np.asarray([int(c) for c in text], dtype=np.uint8)


@pytest.fixture
def solver_script(tmp_path):
    """ executable answering like a SAT-competition solver (solspace.py solve --competition) """
    script = tmp_path / "competition-solver"
    script.write_text('#!/bin/sh\nPYTHONPATH="%s" exec "%s" "%s" solve --competition "$1"\n'
                      % (ROOT, sys.executable, os.path.join(ROOT, "bin", "solspace.py")))
    script.chmod(0o755)
    return str(script)
