"""The split Cayley algebra over F3 and its four classes of order-3 automorphisms."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .algebra import Algebra, Automorphism, extend_hom_from_generators, standard_conjugation
from .exactf3 import DTYPE, P, VerificationError, identity, matmul

LABELS = ("e1", "e2", "u1", "u2", "u3", "v1", "v2", "v3")
E1, E2, U1, U2, U3, V1, V2, V3 = range(8)

# (left, right) -> (sign, result) for every nonzero product of basis vectors
_TABLE = {
    ("e1", "e1"): (1, "e1"), ("e1", "u1"): (1, "u1"), ("e1", "u2"): (1, "u2"), ("e1", "u3"): (1, "u3"),
    ("e2", "e2"): (1, "e2"), ("e2", "v1"): (1, "v1"), ("e2", "v2"): (1, "v2"), ("e2", "v3"): (1, "v3"),
    ("u1", "e2"): (1, "u1"), ("u1", "u2"): (1, "v3"), ("u1", "u3"): (-1, "v2"), ("u1", "v1"): (-1, "e1"),
    ("u2", "e2"): (1, "u2"), ("u2", "u1"): (-1, "v3"), ("u2", "u3"): (1, "v1"), ("u2", "v2"): (-1, "e1"),
    ("u3", "e2"): (1, "u3"), ("u3", "u1"): (1, "v2"), ("u3", "u2"): (-1, "v1"), ("u3", "v3"): (-1, "e1"),
    ("v1", "e1"): (1, "v1"), ("v1", "u1"): (-1, "e2"), ("v1", "v2"): (1, "u3"), ("v1", "v3"): (-1, "u2"),
    ("v2", "e1"): (1, "v2"), ("v2", "u2"): (-1, "e2"), ("v2", "v1"): (-1, "u3"), ("v2", "v3"): (1, "u1"),
    ("v3", "e1"): (1, "v3"), ("v3", "u3"): (-1, "e2"), ("v3", "v1"): (1, "u2"), ("v3", "v2"): (-1, "u1"),
}


@lru_cache(maxsize=None)
def split_cayley() -> Algebra:
    """Split Cayley algebra in the canonical basis e1, e2, u1..u3, v1..v3."""
    mult = np.zeros((8, 8, 8), dtype=DTYPE)
    for (a, b), (s, c) in _TABLE.items():
        mult[LABELS.index(a), LABELS.index(b), LABELS.index(c)] = s % P
    form = np.zeros((8, 8), dtype=DTYPE)
    for a, b in ((E1, E2), (U1, V1), (U2, V2), (U3, V3)):
        form[a, b] = form[b, a] = 1
    unit = np.zeros(8, dtype=DTYPE)
    unit[[E1, E2]] = 1
    return Algebra(mult, LABELS, form=form, unit=unit)


def _vec(**coeffs) -> np.ndarray:
    v = np.zeros(8, dtype=DTYPE)
    for lab, c in coeffs.items():
        v[LABELS.index(lab)] = c % P
    return v


# images of u1, u2, u3 for each class
_GENERATOR_IMAGES = {
    1: (_vec(u1=1), _vec(u2=1), _vec(u3=1, u2=1)),
    2: (_vec(u2=1), _vec(u3=1), _vec(u1=1)),
    3: (_vec(u1=1), _vec(u2=1), _vec(u3=1, v3=1, e1=-1, e2=1)),
    4: (_vec(u1=1), _vec(u2=1), _vec(u3=1, u2=1, v3=1, e1=-1, e2=1)),
}


@lru_cache(maxsize=None)
def order3_automorphism(case: int) -> Automorphism:
    """Representative order-3 automorphism of the given class (1-4).

    Class 2 uses the cyclic normal form ``u_i -> u_{i+1}``, which is already
    defined over F3.
    """
    if case not in _GENERATOR_IMAGES:
        raise ValueError(f"unknown automorphism class {case!r}; expected 1, 2, 3 or 4")
    imgs = _GENERATOR_IMAGES[case]
    sigma = extend_hom_from_generators(split_cayley(), list(zip((U1, U2, U3), imgs)))
    if sigma.order != 3:
        raise VerificationError(f"class {case} map has order {sigma.order}")
    return sigma


def conjugation() -> np.ndarray:
    return standard_conjugation(split_cayley())


def is_isotropic_basis() -> bool:
    """Every canonical basis vector has zero norm (diagonal of the polar form vanishes)."""
    return not split_cayley().form.diagonal().any()


def delta_squared_vanishes(case: int) -> bool:
    d = order3_automorphism(case).delta
    return not matmul(d, d).any()


def identity_automorphism() -> Automorphism:
    return Automorphism(identity(8), 1)


# -- named derivations --------------------------------------------------------


def sl3_operator(i: int, j: int) -> np.ndarray:
    """``E_ij``: ``u_j -> u_i`` and ``v_i -> -v_j``, zero on e1, e2 and other basis vectors."""
    if not (1 <= i <= 3 and 1 <= j <= 3):
        raise ValueError("indices must lie in 1..3")
    m = np.zeros((8, 8), dtype=DTYPE)
    m[U1 + i - 1, U1 + j - 1] = 1
    m[V1 + j - 1, V1 + i - 1] = P - 1
    return m


def ad_operator(x) -> np.ndarray:
    """``ad_x = l_x - r_x``; a derivation of the split Cayley algebra in characteristic 3."""
    c = split_cayley()
    if isinstance(x, str):
        x = c.vec(x)
    return np.mod(c.left_mult(x) - c.right_mult(x), P)


def named_operator(name: str) -> np.ndarray:
    """Parse names such as ``E12``, ``E11-E22``, ``ad_u3`` or ``ad_e1-e2``."""
    name = name.strip()
    if name.startswith("ad_"):
        c = split_cayley()
        body = name[3:]
        v = np.zeros(8, dtype=DTYPE)
        for sign, lab in _terms(body):
            v[c.index(lab)] += sign
        return ad_operator(v % P)
    out = np.zeros((8, 8), dtype=DTYPE)
    for sign, lab in _terms(name):
        if len(lab) != 3 or lab[0] != "E":
            raise ValueError(f"cannot parse operator {name!r}")
        out = out + sign * sl3_operator(int(lab[1]), int(lab[2]))
    return out % P


def _terms(expr: str) -> list[tuple[int, str]]:
    out, sign, cur = [], 1, ""
    for ch in expr:
        if ch in "+-":
            if cur:
                out.append((sign, cur))
            sign, cur = (1 if ch == "+" else -1), ""
        else:
            cur += ch
    if cur:
        out.append((sign, cur))
    return out


# Jordan chain heads (fixed, length 2, length 3) used for the displayed tables.
CAYLEY_CHAIN_HEADS = {
    1: (("e1", "e2", "u1", "v1"), ("u3", "v2"), ()),
    3: (("e1+e2",), ("v1", "v2"), ("u3",)),
    4: (("e1+e2",), ("v1", "v2"), ("u3",)),
}

DER_CHAIN_HEADS = {
    1: (("ad_e1-e2", "ad_u1", "ad_v1"), ("ad_u3", "ad_v2", "E12", "E31"), ("E32",)),
    3: (("E12", "E21", "E11-E22", "E13", "E23"), (), ("E31", "E32", "ad_u3")),
    4: (("E21",), ("E12", "ad_v2"), ("E32", "E31", "ad_u3")),
}


def cayley_splitting(case: int):
    """Jordan splitting of the Cayley algebra with the tabulated chain heads."""
    from .exactf3 import JordanSplitting

    if case not in CAYLEY_CHAIN_HEADS:
        raise ValueError(f"no tabulated chain heads for class {case!r}")
    c = split_cayley()

    def vecs(names):
        rows = []
        for nm in names:
            v = np.zeros(8, dtype=DTYPE)
            for sign, lab in _terms(nm):
                v[c.index(lab)] += sign
            rows.append(v % P)
        return np.array(rows, dtype=DTYPE).reshape(-1, 8)

    fixed, h2, h3 = (vecs(n) for n in CAYLEY_CHAIN_HEADS[case])
    return JordanSplitting.from_heads(order3_automorphism(case).delta, fixed, h2, h3)
