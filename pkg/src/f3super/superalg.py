"""Lie superalgebras from superalgebras and supersymmetric forms.

Graded operators are ``n x n`` matrices on a graded basis (evens first); an
operator of parity ``p`` has nonzero entries only where the row and column
parities differ by ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian

import numpy as np

from .algebra import (
    Algebra,
    CheckReport,
    OperatorLieAlgebra,
    _solve_operators,
    _var_leibniz_system,
    adjoint_automorphism,
    check_automorphism,
    check_jacobi,
    derivations,
    lie_from_operators,
)
from .exactf3 import (
    DTYPE,
    P,
    CoordinateSystem,
    JordanSplitting,
    VerificationError,
    det_nonzero,
    f3,
    identity,
    inverse,
    matmul,
    nullspace,
    rank,
    solve_linear,
)
from .ssfunctor import semisimplify_algebra, semisimplify_bimap


def _koszul(a, b) -> np.ndarray:
    return np.where((np.asarray(a) * np.asarray(b)) % 2 == 1, -1, 1)


def super_derivations(salg: Algebra) -> OperatorLieAlgebra:
    """Super-derivations ``D(xy) = D(x)y + (-1)^{|D||x|} x D(y)``, even ones first."""
    n = salg.dim
    mats, par = [], []
    for p in (0, 1):
        eqs, allowed = _var_leibniz_system(salg.mult, salg.parity, p)
        sol = _solve_operators(eqs, allowed, n)
        mats.extend(sol)
        par.extend([p] * len(sol))
    mats = np.array(mats, dtype=DTYPE).reshape(-1, n, n)
    labels = tuple(f"D{k}{'_odd' if p else ''}" for k, p in enumerate(par))
    return lie_from_operators(mats, parity=np.array(par, dtype=DTYPE), labels=labels)


def osp(form, parity) -> OperatorLieAlgebra:
    """Graded maps skew for a supersymmetric form: ``b(Tx,y) + (-1)^{|T||x|} b(x,Ty) = 0``."""
    b = f3(form)
    par = np.asarray(parity) % 2
    n = b.shape[0]
    sym = _koszul(par[:, None], par[None, :])
    if (np.mod(b - sym * b.T, P) != 0).any():
        raise ValueError("form is not supersymmetric")
    if (b[par[:, None] != par[None, :]] != 0).any():
        raise ValueError("form is not even")
    if not det_nonzero(b):
        raise ValueError("form is degenerate")
    eye = identity(n)
    mats, out_par = [], []
    for p in (0, 1):
        s = _koszul(p, par)
        # (i, j) equation; unknown T[a, c]
        eqs = np.einsum("aj,ci->ijac", b, eye) + s[:, None, None, None] * np.einsum("ia,cj->ijac", b, eye)
        eqs = np.mod(eqs.reshape(n * n, n * n), P)
        allowed = [a * n + c for a in range(n) for c in range(n) if (par[a] ^ par[c]) == p]
        sol = _solve_operators(eqs[:, allowed], allowed, n)
        mats.extend(sol)
        out_par.extend([p] * len(sol))
    mats = np.array(mats, dtype=DTYPE).reshape(-1, n, n)
    labels = tuple(f"T{k}{'_odd' if p else ''}" for k, p in enumerate(out_par))
    return lie_from_operators(mats, parity=np.array(out_par, dtype=DTYPE), labels=labels)


def check_super_jacobi(lsa, workers: int = 1) -> CheckReport:
    """Graded antisymmetry and super-Jacobi on all basis triples."""
    alg = lsa.algebra if isinstance(lsa, OperatorLieAlgebra) else lsa
    return check_jacobi(alg, workers=workers)


def check_composition_super(salg: Algebra) -> CheckReport:
    """Super composition axioms on homogeneous basis tuples.

    Symmetry ``n(y, x) (-1)^{|x||y|} = n(x, y)`` and multiplicativity
    ``n(xy, zt) + (-1)^{|x||y|+|x||z|+|y||z|} n(zy, xt) = (-1)^{|y||z|} n(x, z) n(y, t)``,
    together with evenness of product and form and nondegeneracy.
    """
    if salg.form is None:
        raise ValueError("composition check needs a form")
    n = salg.dim
    b, c, par = salg.form, salg.mult, salg.parity
    lab = salg.labels
    if not det_nonzero(b):
        return CheckReport(False, 0, None, "form is degenerate")
    if (b[par[:, None] != par[None, :]] != 0).any():
        return CheckReport(False, n * n, None, "form is not even")
    wrong = (par[:, None, None] + par[None, :, None] + par[None, None, :]) % 2 == 1
    bad = np.argwhere(wrong & (c != 0))
    if bad.size:
        i, j, _ = bad[0]
        return CheckReport(False, n ** 3, (lab[i], lab[j]), "product is not even")
    bad = np.argwhere(np.mod(b - _koszul(par[:, None], par[None, :]) * b.T, P) != 0)
    if bad.size:
        i, j = bad[0]
        return CheckReport(False, n * n, (lab[i], lab[j]), "form is not supersymmetric")
    x, y, z = par[:, None, None, None], par[None, :, None, None], par[None, None, :, None]
    t = np.mod(np.einsum("xya,ab,ztb->xyzt", c, b, c), P)
    sign = _koszul(x, y) * _koszul(x, z) * _koszul(y, z)
    lhs = np.mod(t + sign * t.transpose(2, 1, 0, 3), P)
    rhs = np.mod(_koszul(y, z) * np.einsum("xz,yt->xyzt", b, b), P)
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        return CheckReport(False, n ** 4, tuple(lab[i] for i in bad[0]), "multiplicativity fails")
    return CheckReport(True, n ** 4)


# -- subalgebras, ideals and isomorphisms ------------------------------------


def bracket(alg: Algebra, x, y) -> np.ndarray:
    return np.mod(np.einsum("i,j,ijk->k", f3(x), f3(y), alg.mult), P)


def is_ideal(alg: Algebra, vecs) -> bool:
    """Whether the span of ``vecs`` is a two-sided ideal."""
    v = f3(vecs).reshape(-1, alg.dim)
    r = rank(v)
    prods = np.mod(np.einsum("ai,bj,ijk->abk", v, identity(alg.dim), alg.mult), P)
    prods = np.vstack([prods.reshape(-1, alg.dim),
                       np.mod(np.einsum("ai,bj,ijk->abk", identity(alg.dim), v, alg.mult), P).reshape(-1, alg.dim)])
    return rank(np.vstack([v, prods])) == r


def restrict(alg: Algebra, vecs, labels=None) -> Algebra:
    """Structure constants of the subalgebra spanned by ``vecs`` (homogeneous, evens first)."""
    v = f3(vecs).reshape(-1, alg.dim)
    par = np.array([int(alg.parity[np.nonzero(r)[0]].max()) if r.any() else 0 for r in v], dtype=DTYPE)
    for r, p in zip(v, par):
        if (alg.parity[np.nonzero(r)[0]] != p).any():
            raise ValueError("spanning vectors must be homogeneous")
    cs = CoordinateSystem(v)
    m = len(v)
    prods = np.mod(np.einsum("ai,bj,ijk->abk", v, v, alg.mult), P).reshape(m * m, -1)
    try:
        mult = cs.coords(prods).reshape(m, m, m)
    except ValueError as exc:
        raise ValueError("span is not closed under the product") from exc
    labels = labels or tuple(f"w{k}" for k in range(m))
    return Algebra(mult, labels, parity=par)


def is_homomorphism(a: Algebra, b: Algebra, f) -> bool:
    """``f`` (columns = images of a's basis in b's coordinates) preserves products."""
    f = f3(f)
    lhs = np.mod(np.einsum("ijk,lk->ijl", a.mult, f), P)
    rhs = np.mod(np.einsum("li,mj,lmk->ijk", f, f, b.mult), P)
    return bool((lhs == rhs).all())


def find_odd_generated_isomorphism(a: Algebra, b: Algebra) -> np.ndarray | None:
    """An isomorphism of Lie superalgebras whose even parts are spanned by ``[odd, odd]``.

    Every linear map on the odd parts is tried; the even part of the map is
    then forced by the brackets.  Returns the matrix or ``None``.
    """
    if a.sdim != b.sdim:
        return None
    p, q = a.sdim
    odd_pairs = list(cartesian(range(p, p + q), repeat=2))
    src = np.array([a.mult[i, j, :p] for i, j in odd_pairs], dtype=DTYPE).reshape(-1, p)
    if rank(src) != p:
        raise ValueError("even part is not generated by brackets of odd elements")
    for entries in cartesian(range(P), repeat=q * q):
        g = np.array(entries, dtype=DTYPE).reshape(q, q)
        if not det_nonzero(g):
            continue
        # bracket in b of images of odd basis vectors
        bo = b.mult[p:, p:, :p]
        tgt = np.mod(np.einsum("xi,yj,xyk->ijk", g, g, bo), P).reshape(-1, p)
        # src @ h.T = tgt with h the even block (columns = images)
        sol = solve_linear(np.kron(identity(p), src), tgt.T.reshape(-1))
        if not sol.consistent:
            continue
        h = sol.particular.reshape(p, p)
        f = np.zeros((p + q, p + q), dtype=DTYPE)
        f[:p, :p] = h
        f[p:, p:] = g
        if det_nonzero(f) and is_homomorphism(a, b, f):
            return f
    return None


def find_sl2_triple(alg: Algebra) -> tuple[np.ndarray, np.ndarray, np.ndarray] | None:
    """A basis ``e, f, h = [e, f]`` with ``[h, e] = 2e`` and ``[h, f] = -2f`` of a 3-dim algebra."""
    if alg.dim != 3:
        return None
    vecs = [np.array(v, dtype=DTYPE) for v in cartesian(range(P), repeat=3)]
    for e in vecs[1:]:
        for f in vecs[1:]:
            h = bracket(alg, e, f)
            if (bracket(alg, h, e) != (2 * e) % P).any():
                continue
            if (bracket(alg, h, f) != (-2 * f) % P).any():
                continue
            if rank(np.array([e, f, h])) == 3:
                return e, f, h
    return None


# -- semisimplified actions ------------------------------------------------


@dataclass(frozen=True)
class SemisimplifiedAction:
    """Image of a Lie algebra acting on a space, after semisimplification.

    ``source`` is the semisimplified Lie superalgebra; ``operators[a]`` is the
    graded operator on the semisimplified space attached to ``source`` basis
    element ``a``.
    """

    source: Algebra
    operators: np.ndarray
    space: Algebra | None
    splitting_lie: JordanSplitting
    splitting_space: JordanSplitting

    def rank(self) -> int:
        return rank(self.operators.reshape(len(self.operators), self.operators.shape[1] ** 2))

    def kernel(self) -> np.ndarray:
        """Basis (rows, source coordinates) of the kernel."""
        return nullspace(self.operators.reshape(len(self.operators), self.operators.shape[1] ** 2).T)

    def is_homomorphism(self) -> bool:
        ops = self.operators
        par = self.source.parity
        ab = np.mod(np.einsum("aij,bjk->abik", ops, ops), P)
        sgn = _koszul(par[:, None], par[None, :])
        comm = np.mod(ab - sgn[:, :, None, None] * ab.transpose(1, 0, 2, 3), P)
        img = np.mod(np.einsum("abc,cij->abij", self.source.mult, ops), P)
        return bool((comm == img).all())

    def image_in(self, target: OperatorLieAlgebra) -> bool:
        n2 = self.operators.shape[1] ** 2
        flat = target.matrices.reshape(target.dim, n2)
        return rank(np.vstack([flat, self.operators.reshape(-1, n2)])) == rank(flat)


def semisimplify_action(lie: OperatorLieAlgebra, sigma, split_lie=None, split_space=None,
                        space: Algebra | None = None) -> SemisimplifiedAction:
    """Semisimplify the action ``L x V -> V`` of operators ``lie`` with ``V`` carrying ``sigma``.

    The action on ``L`` is ``Ad_sigma``; the result pairs the semisimplified
    bracket with the semisimplified action maps.
    """
    s = f3(getattr(sigma, "matrix", sigma))
    ad = adjoint_automorphism(s, lie.matrices)
    mu = lie.matrices.transpose(0, 2, 1)  # mu[a, i, k] = coefficient of e_k in D_a(e_i)
    bm = semisimplify_bimap(mu, (ad, s, s), (split_lie, split_space, split_space))
    spl, spv = bm.splittings[0], bm.splittings[1]
    src = semisimplify_algebra(lie.algebra, ad, spl)
    ops = bm.tensor.transpose(0, 2, 1)
    return SemisimplifiedAction(src, ops, space, spl, spv)


def lie_splitting(lie: OperatorLieAlgebra, sigma, fixed=(), heads2=(), heads3=()) -> JordanSplitting:
    """Splitting of ``Ad_sigma`` on ``lie`` from chain heads given as operators."""
    ad = adjoint_automorphism(sigma, lie.matrices)
    delta = np.mod(ad - identity(lie.dim), P)

    def co(ops):
        ops = list(ops)
        if not ops:
            return np.zeros((0, lie.dim), dtype=DTYPE)
        return lie.coordinates(np.array(ops, dtype=DTYPE)).reshape(-1, lie.dim)

    return JordanSplitting.from_heads(delta, co(fixed), co(heads2), co(heads3))


def cayley_derivations():
    """Derivation algebra of the split Cayley algebra."""
    from .cayley import split_cayley

    return derivations(split_cayley())


def der_splitting(case: int) -> JordanSplitting:
    """Tabulated chain heads of ``Ad_sigma`` on the Cayley derivations."""
    from .cayley import DER_CHAIN_HEADS, named_operator, order3_automorphism

    if case not in DER_CHAIN_HEADS:
        raise ValueError(f"no tabulated chain heads for class {case!r}")
    names = DER_CHAIN_HEADS[case]
    ops = [[named_operator(nm) for nm in group] for group in names]
    return lie_splitting(cayley_derivations(), order3_automorphism(case), *ops)


def der_semisimplified(case: int, splitting: JordanSplitting | None = None) -> Algebra:
    """Semisimplified derivation algebra of the Cayley algebra, tabulated heads by default."""
    from .cayley import DER_CHAIN_HEADS, order3_automorphism
    from .ssfunctor import vector_label

    sigma = order3_automorphism(case)
    lie = cayley_derivations()
    ad = adjoint_automorphism(sigma, lie.matrices)
    if splitting is None and case in DER_CHAIN_HEADS:
        splitting = der_splitting(case)
    out = semisimplify_algebra(lie.algebra, ad, splitting)
    if splitting is not None and case in DER_CHAIN_HEADS:
        fixed, h2, _ = DER_CHAIN_HEADS[case]
        out = out.replace(labels=tuple(fixed) + tuple(h2))
    return out
