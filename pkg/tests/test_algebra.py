"""Structure-constant algebras, automorphisms and operator Lie algebras."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from f3super.algebra import (
    Algebra,
    check_antisymmetry,
    check_automorphism,
    check_composition,
    check_jacobi,
    derivations,
    find_unit,
    lie_from_operators,
    map_outputs,
    matrix_order,
    multiply,
    norm_value,
    para_hurwitz,
    products,
    skew_transformations,
    standard_conjugation,
    transform_tensor,
)
from f3super.cayley import ad_operator, split_cayley
from f3super.exactf3 import VerificationError, identity, inverse, matmul, rank


@pytest.fixture(scope="module")
def cayley():
    return split_cayley()


def test_algebra_validates_shapes():
    with pytest.raises(ValueError):
        Algebra(np.zeros((2, 2, 3)), ["a", "b"])
    with pytest.raises(ValueError):
        Algebra(np.zeros((2, 2, 2)), ["a"])
    with pytest.raises(ValueError):
        Algebra(np.zeros((2, 2, 2)), ["a", "b"], parity=[1, 0])


def test_arrays_are_frozen(cayley):
    with pytest.raises(ValueError):
        cayley.mult[0, 0, 0] = 2


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_products_agree_with_einsum(seed):
    rng = np.random.default_rng(seed)
    c = split_cayley()
    xs = rng.integers(0, 3, size=(4, 8))
    ys = rng.integers(0, 3, size=(5, 8))
    want = np.mod(np.einsum("ai,bj,ijk->abk", xs, ys, c.mult), 3)
    assert (products(c.mult, xs, ys) == want).all()
    s = rng.integers(0, 3, size=(8, 8))
    assert (map_outputs(c.mult, s) == np.mod(np.einsum("ijk,lk->ijl", c.mult, s), 3)).all()


def test_unit_is_found(cayley):
    assert (find_unit(cayley) == cayley.unit).all()


def test_transform_tensor_is_isomorphism(cayley):
    rng = np.random.default_rng(1)
    while True:
        m = rng.integers(0, 3, size=(8, 8))
        if rank(m) == 8:
            break
    new = Algebra(transform_tensor(cayley.mult, m), cayley.labels)
    # m maps new coordinates to old ones
    x, y = rng.integers(0, 3, size=(2, 8))
    lhs = np.mod(m @ multiply(new, x, y), 3)
    assert (lhs == multiply(cayley, m @ x % 3, m @ y % 3)).all()


def test_norm_is_multiplicative(cayley):
    rng = np.random.default_rng(2)
    for _ in range(50):
        x, y = rng.integers(0, 3, size=(2, 8))
        xy = multiply(cayley, x, y)
        b = cayley.form
        assert norm_value(b, xy) == norm_value(b, x) * norm_value(b, y) % 3


def test_composition_check_counts(cayley):
    rep = check_composition(cayley)
    assert rep.ok and rep.checked == 8 ** 4


def test_composition_check_detects_corruption(cayley):
    m = np.array(cayley.mult)
    m[2, 5, 0] = 0
    rep = check_composition(cayley.replace(mult=m))
    assert not rep.ok and rep.witness is not None


def test_automorphism_report(cayley):
    assert check_automorphism(cayley, identity(8)).order == 1
    bad = identity(8)
    bad[0, 0] = 2
    assert not check_automorphism(cayley, bad).valid
    assert matrix_order(np.array([[0, 1], [1, 0]])) == 2


def test_derivations_dimension(cayley):
    der = derivations(cayley)
    assert der.dim == 14
    for d in der.matrices:
        lhs = np.mod(np.einsum("ijl,kl->ijk", cayley.mult, d), 3)
        rhs = np.mod(np.einsum("li,ljk->ijk", d, cayley.mult) + np.einsum("lj,ilk->ijk", d, cayley.mult), 3)
        assert (lhs == rhs).all()


def test_inner_derivations_form_ideal(cayley):
    der = derivations(cayley)
    ads = np.array([ad_operator(np.eye(8, dtype=int)[k]) for k in range(8)])
    co = der.coordinates(ads)
    assert rank(co) == 7
    brackets = [np.mod(matmul(a, d) - matmul(d, a), 3) for a in ads for d in der.matrices]
    co2 = der.coordinates(np.array(brackets))
    assert rank(np.vstack([co, co2])) == 7


def test_skew_transformations(cayley):
    so = skew_transformations(cayley.form)
    assert so.dim == 28
    for t in so.matrices:
        assert not np.mod(t.T @ cayley.form + cayley.form @ t, 3).any()
    with pytest.raises(ValueError):
        skew_transformations(np.zeros((2, 2), dtype=int))


def test_lie_from_operators_rejects_non_closed_span():
    e = np.array([[[0, 1], [0, 0]]])
    f = np.array([[[0, 0], [1, 0]]])
    with pytest.raises(VerificationError):
        lie_from_operators(np.concatenate([e, f]))


def test_jacobi_detects_mutation():
    so = skew_transformations(split_cayley().form).algebra
    assert check_jacobi(so).ok
    m = np.array(so.mult)
    i, j, k = np.argwhere(m)[0]
    m[i, j, k] = (m[i, j, k] + 1) % 3
    m[j, i, k] = (m[j, i, k] - 1) % 3
    bad = so.replace(mult=m)
    assert check_antisymmetry(bad).ok
    rep = check_jacobi(bad)
    assert not rep.ok and len(rep.witness) == 3


def test_jacobi_workers_agree():
    so = skew_transformations(split_cayley().form).algebra
    assert check_jacobi(so, workers=2).ok


def test_para_hurwitz(cayley):
    pc = para_hurwitz(cayley)
    cj = standard_conjugation(cayley)
    assert (matmul(cj, cj) == identity(8)).all()
    one = cayley.unit
    # 1 . x = conj(x)
    for k in range(8):
        x = np.eye(8, dtype=int)[k]
        assert (multiply(pc, one, x) == cj @ x % 3).all()
    assert check_composition(pc).ok
