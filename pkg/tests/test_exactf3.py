"""Exact linear algebra over F3 and Jordan splittings."""

from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from f3super.exactf3 import (
    CoordinateSystem,
    IncrementalBasis,
    JordanSplitting,
    block_diag,
    equivariant_homs,
    identity,
    indecomposable,
    inverse,
    is_equivariant,
    is_negligible,
    matmul,
    nilpotent_splitting,
    nullspace,
    random_splitting,
    rank,
    rref,
    solve_linear,
)


def f3_matrices(rows, cols):
    return st.lists(st.integers(0, 2), min_size=rows * cols, max_size=rows * cols).map(
        lambda v: np.array(v, dtype=np.int64).reshape(rows, cols))


def brute_kernel_size(a):
    cols = a.shape[1]
    return sum(1 for x in product(range(3), repeat=cols) if not (a @ np.array(x) % 3).any())


@settings(max_examples=60, deadline=None)
@given(f3_matrices(3, 4))
def test_rank_matches_brute_force_kernel(a):
    assert 3 ** (a.shape[1] - rank(a)) == brute_kernel_size(a)


@settings(max_examples=60, deadline=None)
@given(f3_matrices(4, 5))
def test_nullspace_rows_are_independent_solutions(a):
    ns = nullspace(a)
    assert not np.mod(a @ ns.T, 3).any()
    assert rank(ns) == len(ns) == a.shape[1] - rank(a)


@settings(max_examples=60, deadline=None)
@given(f3_matrices(3, 3), st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_solve_linear_against_enumeration(a, b):
    b = np.array(b)
    sols = [x for x in product(range(3), repeat=3) if ((a @ np.array(x) - b) % 3 == 0).all()]
    res = solve_linear(a, b)
    assert res.consistent == bool(sols)
    if sols:
        assert ((a @ res.particular - b) % 3 == 0).all()
        assert 3 ** len(res.nullspace) == len(sols)


def test_solve_linear_shape_mismatch():
    with pytest.raises(ValueError):
        solve_linear(np.eye(3, dtype=int), [1, 2])


@settings(max_examples=40, deadline=None)
@given(f3_matrices(4, 4))
def test_inverse_or_singular(a):
    if rank(a) == 4:
        assert (matmul(a, inverse(a)) == identity(4)).all()
    else:
        with pytest.raises(ZeroDivisionError):
            inverse(a)


def test_rref_pivots():
    a = np.array([[0, 2, 1], [0, 1, 2], [1, 0, 0]])
    r, piv = rref(a)
    assert piv == [0, 1]
    assert (r[:2] == [[1, 0, 0], [0, 1, 2]]).all()


def test_incremental_basis_express():
    ib = IncrementalBasis(3)
    assert ib.add([1, 1, 0]) and ib.add([0, 1, 1])
    assert not ib.add([1, 2, 1])
    c = ib.express([1, 2, 1])
    assert c is not None
    assert (np.mod(c[0] * np.array([1, 1, 0]) + c[1] * np.array([0, 1, 1]), 3) == [1, 2, 1]).all()
    assert ib.express([0, 0, 1]) is None


def test_coordinate_system_outside_span():
    cs = CoordinateSystem(np.array([[1, 0, 0], [0, 1, 0]]))
    assert (cs.coords([2, 1, 0]) == [2, 1]).all()
    with pytest.raises(ValueError):
        cs.coords([0, 0, 1])


def random_nilpotent(rng, blocks):
    """``delta = P J P^-1`` for Jordan blocks of the given sizes."""
    n = sum(blocks)
    j = block_diag(*[np.mod(indecomposable(k - 1) - identity(k), 3) for k in blocks])
    while True:
        p = rng.integers(0, 3, size=(n, n))
        if rank(p) == n:
            return matmul(p, j, inverse(p))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=5), st.integers(0, 2 ** 32 - 1))
def test_splitting_recovers_block_sizes(blocks, seed):
    rng = np.random.default_rng(seed)
    d = random_nilpotent(rng, blocks)
    want = (blocks.count(1), blocks.count(2), blocks.count(3))
    for sp in (nilpotent_splitting(d), random_splitting(d, rng)):
        sp.validate()
        assert sp.counts == want
        assert (sp.delta_matrix() == d).all()


def test_from_heads_rejects_bad_chain():
    d = np.mod(indecomposable(1) - identity(2), 3)
    with pytest.raises(ValueError):
        JordanSplitting.from_heads(d, fixed=[[1, 0]])
    sp = JordanSplitting.from_heads(d, heads2=[[1, 0]])
    assert sp.counts == (0, 1, 0)


def test_splitting_rejects_non_nilpotent():
    with pytest.raises(ValueError):
        nilpotent_splitting(identity(2))


class TestNegligible:
    def test_identity_on_v2_is_negligible(self):
        s = indecomposable(2)
        assert is_negligible(identity(3), s, s)

    def test_identity_on_v1_is_not(self):
        s = indecomposable(1)
        assert not is_negligible(identity(2), s, s)

    def test_identity_on_v0_is_not(self):
        s = indecomposable(0)
        assert not is_negligible(identity(1), s, s)

    def test_nilpotent_endomorphisms_of_v1(self):
        s = indecomposable(1)
        homs = equivariant_homs(s, s)
        assert len(homs) == 2
        for c in range(3):
            f = np.mod(c * (s - identity(2)), 3)
            assert is_equivariant(f, s, s)
            assert is_negligible(f, s, s)

    def test_non_equivariant_raises(self):
        s = indecomposable(1)
        with pytest.raises(ValueError):
            is_negligible(np.array([[0, 1], [0, 0]]), s, s)

    def test_every_map_into_v2_is_negligible(self):
        # V_2 is projective; all morphisms through it are negligible
        s1, s2 = indecomposable(1), indecomposable(2)
        for f in equivariant_homs(s1, s2):
            assert is_negligible(f, s1, s2)
