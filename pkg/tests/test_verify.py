import numpy as np

from fiedlersys import MatrixPoly, StateSpaceSystem
from fiedlersys import index as ix
from fiedlersys.fiedler import BlockPencil, companion_pencil, fiedler_pencil
from fiedlersys.pgf import pgf_pencil, proper_permutations, tridiagonal_pgf
from fiedlersys.system import random_system
from fiedlersys.verify import (VerificationReport, check_controllability,
                               check_observability, decoupling_zeros, same_zero_lists,
                               system_decoupling_zeros, transfer_of_pencil, verify_all,
                               verify_det_ratio, verify_transfer_equal)


def test_transfer_scalar(scalar_sys):
    pencil = companion_pencil(scalar_sys, 1)
    assert np.isclose(transfer_of_pencil(pencil, 1)[0, 0], 2)
    assert verify_transfer_equal(scalar_sys, pencil).passed


def test_transfer_with_zero_B():
    rng = np.random.default_rng(0)
    sys = StateSpaceSystem(random_system(2, 2, 1, rng).P, np.zeros((2, 1)), [[1, 2]], [[3]])
    pencil = companion_pencil(sys, 1)
    assert np.isclose(transfer_of_pencil(pencil, 0.3 + 1j)[0, 0], 3)


def test_both_branches_pass():
    sys = random_system(2, 4, 2, np.random.default_rng(1))
    seen = set()
    for order in [ix.first_companion(4), ix.second_companion(4), (1, 0, 3, 2), (2, 3, 1, 0)]:
        check = verify_transfer_equal(sys, fiedler_pencil(sys, order))
        assert check.passed and check.samples == 20
        seen.add(check.detail["branch"])
    assert seen == {"c1>0", "c1=0"}


def test_det_ratio():
    sys = random_system(2, 1, 1, np.random.default_rng(2))
    check = verify_det_ratio(sys, fiedler_pencil(sys, (0,)))
    assert check.passed and abs(abs(check.detail["ratio"]) - 1) < 1e-10
    sys = random_system(2, 3, 1, np.random.default_rng(3))
    pencil = companion_pencil(sys, 1)
    assert verify_det_ratio(sys, pencil).passed
    N = np.array(pencil.N)
    N[:2, 2:4] = 0
    bad = BlockPencil(pencil.T, N, 2, 3, 1)
    assert not verify_det_ratio(sys, bad).passed
    assert not verify_transfer_equal(sys, bad).passed


def test_zero_samples_fail():
    sys = random_system(1, 1, 1, np.random.default_rng(4))
    assert not verify_transfer_equal(sys, fiedler_pencil(sys, (0,)), samples=0).passed
    assert not verify_det_ratio(sys, fiedler_pencil(sys, (0,)), samples=0).passed
    assert not VerificationReport([], 0).passed


def test_controllability_examples():
    rng = np.random.default_rng(5)
    P = random_system(2, 2, 2, rng).P
    sys = StateSpaceSystem(P, np.eye(2), rng.standard_normal((2, 2)), np.eye(2))
    assert check_controllability(sys, (0, 1)).passed
    sys_c0 = StateSpaceSystem(P, np.eye(2), np.zeros((2, 2)), np.eye(2))
    obs = check_observability(sys_c0, (1, 0))
    assert not obs.passed and len(obs.detail["failing"]) == 4


def test_scalar_input_decoupling_zero():
    sys = StateSpaceSystem(MatrixPoly([[[-1]], [[1]]]), [[0]], [[1]], [[0]], check_regular=True)
    dz = decoupling_zeros(sys, (0,))
    assert len(dz.input) == 1 and abs(dz.input[0] - 1) < 1e-12
    assert dz.output == [] and dz.io == []


def test_minimal_and_fully_decoupled():
    rng = np.random.default_rng(6)
    sys = random_system(2, 2, 1, rng)
    assert decoupling_zeros(sys, (1, 0)) == ([], [], [])
    dead = StateSpaceSystem(sys.P, np.zeros((2, 1)), np.zeros((1, 2)), [[1]])
    dz = decoupling_zeros(dead, (1, 0))
    assert len(dz.io) == 4 and len(dz.input) == 4 and len(dz.output) == 4


def test_decoupling_lists_agree_across_linearizations():
    rng = np.random.default_rng(7)
    P = random_system(2, 3, 1, rng).P
    B = np.array([[1.0], [0.0]])
    sys = StateSpaceSystem(P, B, rng.standard_normal((1, 2)), [[0.5]])
    ref = system_decoupling_zeros(sys)
    pencils = [fiedler_pencil(sys, o) for o in [(2, 1, 0), (0, 1, 2), (1, 0, 2), (0, 2, 1)]]
    pencils += [pgf_pencil(sys, w) for w in list(proper_permutations(3))[::7]]
    pencils.append(tridiagonal_pgf(sys))
    for pencil in pencils:
        assert same_zero_lists(decoupling_zeros(sys, pencil), ref)


def test_report_is_deterministic_and_sorted():
    sys = random_system(2, 2, 1, np.random.default_rng(8))
    pencil = fiedler_pencil(sys, (0, 1))
    a = verify_all(sys, pencil, seed=3)
    b = verify_all(sys, pencil, seed=3)
    assert a.to_text() == b.to_text() and a.to_json() == b.to_json()
    assert [c.name for c in a.checks] == sorted(c.name for c in a.checks)
    assert a.passed and a.to_dict()["passed"]
