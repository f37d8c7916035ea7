import numpy as np
import pytest

from f3super.algebra import multiply
from f3super.cayley import (
    DER_CHAIN_HEADS,
    E1,
    E2,
    U1,
    U2,
    U3,
    V1,
    V2,
    V3,
    cayley_splitting,
    conjugation,
    delta_squared_vanishes,
    is_isotropic_basis,
    named_operator,
    order3_automorphism,
    sl3_operator,
    split_cayley,
)
from f3super.exactf3 import identity, matmul
from f3super.superalg import cayley_derivations


def basis(k):
    return np.eye(8, dtype=np.int64)[k]


@pytest.fixture(scope="module")
def c():
    return split_cayley()


def test_table_spot_values(c):
    assert (multiply(c, basis(U1), basis(U2)) == basis(V3)).all()
    assert (multiply(c, basis(U1), basis(V1)) == (-basis(E1)) % 3).all()
    assert (multiply(c, basis(V1), basis(V2)) == basis(U3)).all()
    assert (multiply(c, basis(E1), basis(U1)) == basis(U1)).all()
    assert (multiply(c, basis(U1), basis(E1)) == 0).all()


def test_unit_and_isotropy(c):
    one = c.unit
    for k in range(8):
        assert (multiply(c, one, basis(k)) == basis(k)).all()
        assert (multiply(c, basis(k), one) == basis(k)).all()
    assert is_isotropic_basis()


def test_conjugation_is_involution():
    cj = conjugation()
    assert (matmul(cj, cj) == identity(8)).all()
    assert (cj @ basis(E1) % 3 == basis(E2)).all()


@pytest.mark.parametrize("case", [1, 2, 3, 4])
def test_automorphisms_have_order_three(case):
    assert order3_automorphism(case).order == 3


def test_delta_squared_only_vanishes_for_class_one():
    assert delta_squared_vanishes(1)
    assert not any(delta_squared_vanishes(k) for k in (2, 3, 4))


def test_class_one_on_v2():
    s = order3_automorphism(1).matrix
    assert (s @ basis(V2) % 3 == (basis(V2) - basis(V3)) % 3).all()


def test_class_two_is_cyclic():
    s = order3_automorphism(2).matrix
    assert (s @ basis(U1) % 3 == basis(U2)).all()
    assert (s @ basis(V3) % 3 == basis(V1)).all()


def test_unknown_class():
    with pytest.raises(ValueError):
        order3_automorphism(5)


@pytest.mark.parametrize("case", [1, 3, 4])
def test_tabulated_splittings_validate(case):
    cayley_splitting(case).validate()


def test_sl3_operators():
    e12 = sl3_operator(1, 2)
    assert (e12 @ basis(U2) % 3 == basis(U1)).all()
    assert (e12 @ basis(V1) % 3 == (-basis(V2)) % 3).all()
    with pytest.raises(ValueError):
        sl3_operator(0, 1)


def test_named_operators_are_derivations():
    der = cayley_derivations()
    names = {nm for groups in DER_CHAIN_HEADS.values() for g in groups for nm in g}
    for nm in sorted(names):
        der.coordinates(named_operator(nm))  # raises when outside Der(C)


def test_ad_of_difference():
    # ad_{e1 - e2} acts as 2 on u_i and -2 on v_i
    d = named_operator("ad_e1-e2")
    i3 = named_operator("E11+E22+E33")
    assert (d == 2 * i3 % 3).all()
