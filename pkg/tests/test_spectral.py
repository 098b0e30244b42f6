import numpy as np
import pytest
from hypothesis import given

from fiedlersys import SingularSystemError
from fiedlersys.fiedler import companion_pencil, fiedler_pencil
from fiedlersys.pgf import pgf_pencil, proper_permutations
from fiedlersys.spectral import det_poly, match_multisets, rank_at, solve_pencil
from fiedlersys.system import invariant_zeros_oracle, random_system

from strategies import system_and_order


def test_scalar_first_companion(scalar_sys):
    spec = solve_pencil(companion_pencil(scalar_sys, 1))
    assert spec.num_infinite == 1
    gap, _ = match_multisets(spec.eigenvalues, [1j, -1j])
    assert gap < 1e-12
    assert np.all(spec.residual_right < 1e-14) and np.all(spec.residual_left < 1e-14)


def test_diagonal_and_all_infinite():
    spec = solve_pencil((np.eye(3), np.diag([1.0, 2.0, 3.0])))
    assert np.allclose(spec.eigenvalues, [1, 2, 3]) and spec.num_infinite == 0
    spec = solve_pencil((np.zeros((2, 2)), np.eye(2)))
    assert len(spec) == 0 and spec.num_infinite == 2


def test_singular_pencil_rejected():
    with pytest.raises(SingularSystemError):
        solve_pencil((np.diag([1.0, 0.0]), np.diag([1.0, 0.0])))


def test_det_poly_examples(scalar_sys):
    c = det_poly(companion_pencil(scalar_sys, 1))
    c = c / c[0]
    assert np.allclose(c, [1, 0, 1, 0], atol=1e-12)
    assert np.allclose(det_poly((np.eye(2), np.zeros((2, 2)))), [0, 0, 1], atol=1e-12)
    # det(z diag(1, 0) - I) = (z - 1)(-1) = 1 - z
    assert np.allclose(det_poly((np.diag([1.0, 0.0]), np.eye(2))), [1, -1, 0], atol=1e-12)


def test_rank_at_examples():
    assert rank_at(np.eye(3)) == 3
    assert rank_at(np.outer([1, 2, 3], [4, 5, 6])) == 1
    assert rank_at(np.diag([1.0, 1e-18])) == 1
    assert rank_at(np.zeros((2, 3))) == 0


def test_match_multisets():
    gap, pairs = match_multisets([1, 2j], [2j + 1e-9, 1])
    assert gap < 2e-9 and len(pairs) == 2
    assert match_multisets([1], [1, 2])[0] == np.inf


@given(system_and_order(r=(1, 2)))
def test_spectrum_matches_oracle(case):
    sys, order = case
    spec = solve_pencil(fiedler_pencil(sys, order))
    oracle = invariant_zeros_oracle(sys, with_multiplicity=True)
    flat = [z for z, k in oracle for _ in range(k)]
    gap, _ = match_multisets(spec.eigenvalues, flat)
    assert gap <= 1e-7
    assert len(spec) + spec.num_infinite == fiedler_pencil(sys, order).dim
    assert np.all(spec.residual_right <= 1e-8) and np.all(spec.residual_left <= 1e-8)


@given(system_and_order(r=(1, 2)))
def test_shift_independence(case):
    sys, order = case
    pencil = fiedler_pencil(sys, order)
    a = solve_pencil(pencil, seed=1).eigenvalues
    b = solve_pencil(pencil, seed=2).eigenvalues
    gap, _ = match_multisets(a, b)
    assert gap <= 1e-8


def test_pgf_spectra_match_oracle():
    rng = np.random.default_rng(3)
    sys = random_system(2, 3, 1, rng)
    oracle = invariant_zeros_oracle(sys)
    for w in list(proper_permutations(3))[::5]:
        spec = solve_pencil(pgf_pencil(sys, w))
        assert match_multisets(spec.eigenvalues, oracle)[0] <= 1e-7


def test_seed_is_reproducible(scalar_sys):
    a = solve_pencil(companion_pencil(scalar_sys, 2), seed=5)
    b = solve_pencil(companion_pencil(scalar_sys, 2), seed=5)
    assert a.shift == b.shift and np.array_equal(a.eigenvalues, b.eigenvalues)
