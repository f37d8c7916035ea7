"""Finite-dimensional algebras over F3 given by structure constants.

One presentation type covers ordinary algebras, superalgebras and Lie
(super)algebras: ``mult[i, j, k]`` is the coefficient of ``e_k`` in
``e_i e_j`` and ``parity[i]`` is 0 or 1.  Graded bases list even vectors first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian

import numpy as np

from .exactf3 import (
    DTYPE,
    P,
    CoordinateSystem,
    IncrementalBasis,
    VerificationError,
    det_nonzero,
    f3,
    identity,
    inverse,
    matmul,
    nullspace,
    rank,
)


def _frozen(a) -> np.ndarray | None:
    if a is None:
        return None
    a = f3(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Algebra:
    """Structure constants, optional polar form, unit and grading."""

    mult: np.ndarray
    labels: tuple[str, ...]
    form: np.ndarray | None = None
    unit: np.ndarray | None = None
    parity: np.ndarray | None = None

    def __post_init__(self):
        mult = _frozen(self.mult)
        n = mult.shape[0]
        if mult.shape != (n, n, n):
            raise ValueError(f"structure tensor must be (n, n, n), got {mult.shape}")
        if len(self.labels) != n:
            raise ValueError("one label per basis vector is required")
        parity = np.zeros(n, dtype=DTYPE) if self.parity is None else self.parity
        parity = _frozen(np.asarray(parity) % 2)
        if (np.diff(parity) < 0).any():
            raise ValueError("graded bases must list even vectors first")
        object.__setattr__(self, "mult", mult)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "parity", parity)
        object.__setattr__(self, "form", _frozen(self.form))
        object.__setattr__(self, "unit", _frozen(self.unit))
        if self.form is not None and self.form.shape != (n, n):
            raise ValueError("form must be an n x n matrix")

    @property
    def dim(self) -> int:
        return self.mult.shape[0]

    @property
    def even_dim(self) -> int:
        return int((self.parity == 0).sum())

    @property
    def odd_dim(self) -> int:
        return int(self.parity.sum())

    @property
    def sdim(self) -> tuple[int, int]:
        return (self.even_dim, self.odd_dim)

    @property
    def is_super(self) -> bool:
        return self.odd_dim > 0

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def vec(self, *terms) -> np.ndarray:
        """Vector from ``(coefficient, label)`` pairs or bare labels."""
        v = np.zeros(self.dim, dtype=DTYPE)
        for t in terms:
            c, lab = (1, t) if isinstance(t, str) else t
            v[self.index(lab)] += c
        return v % P

    def left_mult(self, x) -> np.ndarray:
        """Matrix of ``z -> x z``."""
        return np.mod(np.einsum("i,ijk->kj", f3(x), self.mult), P)

    def right_mult(self, x) -> np.ndarray:
        """Matrix of ``z -> z x``."""
        return np.mod(np.einsum("j,ijk->ki", f3(x), self.mult), P)

    def replace(self, **kw) -> "Algebra":
        args = dict(mult=self.mult, labels=self.labels, form=self.form,
                    unit=self.unit, parity=self.parity)
        args.update(kw)
        return Algebra(**args)


def multiply(alg: Algebra, x, y) -> np.ndarray:
    x, y = f3(x), f3(y)
    if x.shape != (alg.dim,) or y.shape != (alg.dim,):
        raise ValueError(f"vectors must have length {alg.dim}")
    return np.mod(np.einsum("i,j,ijk->k", x, y, alg.mult), P)


def products(mult: np.ndarray, xs, ys) -> np.ndarray:
    """All products ``xs[a] * ys[b]`` as an array of shape (len(xs), len(ys), n).

    Contractions run in floating point, which is exact for these sizes
    (partial sums stay far below 2**24), and are reduced modulo 3 after each step.
    """
    c = mult.astype(np.float32)
    xs = f3(xs).astype(np.float32)
    ys = f3(ys).astype(np.float32)
    n1, n2, n3 = c.shape
    t = np.mod(xs @ c.reshape(n1, n2 * n3), P).reshape(-1, n2, n3)
    out = np.mod(np.einsum("bj,ajk->abk", ys, t, optimize=True), P)
    return out.astype(DTYPE)


def map_outputs(mult: np.ndarray, s) -> np.ndarray:
    """``s`` applied to every product: ``out[i, j] = s(e_i e_j)``."""
    n1, n2, n3 = mult.shape
    s = f3(s).astype(np.float32)
    out = mult.reshape(n1 * n2, n3).astype(np.float32) @ s.T
    return np.mod(out, P).astype(DTYPE).reshape(n1, n2, -1)


def transform_tensor(mult: np.ndarray, change) -> np.ndarray:
    """Structure tensor after the change of basis whose columns are new vectors."""
    m = f3(change)
    inv = inverse(m)
    prod = products(mult, m.T, m.T)
    return np.mod(prod.astype(np.float32) @ inv.T.astype(np.float32), P).astype(DTYPE)


def find_unit(alg: Algebra) -> np.ndarray | None:
    """A two-sided unit, found by solving the linear unit equations."""
    n = alg.dim
    # u e_j = e_j and e_j u = e_j, unknown u
    left = alg.mult.transpose(2, 1, 0).reshape(n * n, n)   # [(k, j), i] = c[i, j, k]
    right = alg.mult.transpose(2, 0, 1).reshape(n * n, n)  # [(k, i), j] = c[i, j, k]
    rhs = identity(n).reshape(-1)
    a = np.vstack([left, right])
    b = np.concatenate([rhs, rhs])
    from .exactf3 import solve_linear

    sol = solve_linear(a, b)
    return sol.particular


# -- automorphisms --------------------------------------------------------


@dataclass(frozen=True)
class AutomorphismReport:
    valid: bool
    order: int | None
    violation: str | None = None


@dataclass(frozen=True)
class Automorphism:
    """An invertible matrix preserving product and form, with its order."""

    matrix: np.ndarray
    order: int

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))

    @property
    def delta(self) -> np.ndarray:
        return np.mod(self.matrix - identity(self.matrix.shape[0]), P)

    @property
    def inverse(self) -> np.ndarray:
        return inverse(self.matrix)

    @classmethod
    def verified(cls, alg: Algebra, matrix) -> "Automorphism":
        rep = check_automorphism(alg, matrix)
        if not rep.valid:
            raise ValueError(f"not an automorphism: {rep.violation}")
        return cls(f3(matrix), rep.order)


def matrix_order(m, limit: int = 10_000) -> int | None:
    m = f3(m)
    eye = identity(m.shape[0])
    p = m
    for k in range(1, limit + 1):
        if (p == eye).all():
            return k
        p = matmul(p, m)
    return None


def check_automorphism(alg: Algebra, sigma) -> AutomorphismReport:
    s = f3(sigma)
    n = alg.dim
    if s.shape != (n, n):
        return AutomorphismReport(False, None, f"shape {s.shape} != {(n, n)}")
    if not det_nonzero(s):
        return AutomorphismReport(False, None, "matrix is singular")
    lhs = map_outputs(alg.mult, s)  # sigma(e_i e_j)
    rhs = products(alg.mult, s.T, s.T)  # sigma(e_i) sigma(e_j)
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        i, j = bad[0][:2]
        return AutomorphismReport(
            False, None, f"product of ({alg.labels[i]}, {alg.labels[j]}) not preserved")
    if alg.form is not None:
        g = np.mod(s.T @ alg.form @ s, P)
        bad = np.argwhere(g != alg.form)
        if bad.size:
            i, j = bad[0]
            return AutomorphismReport(
                False, None, f"form on ({alg.labels[i]}, {alg.labels[j]}) not preserved")
    return AutomorphismReport(True, matrix_order(s))


def extend_hom_from_generators(alg: Algebra, partial) -> Automorphism:
    """Close the images of some generators under products and verify the result.

    ``partial`` is a sequence of ``(basis index, image vector)`` pairs.
    """
    n = alg.dim
    dom = IncrementalBasis(n)
    src: list[np.ndarray] = []
    img: list[np.ndarray] = []
    for idx, image in partial:
        v = np.zeros(n, dtype=DTYPE)
        v[idx] = 1
        if dom.add(v):
            src.append(v)
            img.append(f3(image))
    grew = True
    while len(dom) < n and grew:
        grew = False
        k = len(src)
        for a, b in cartesian(range(k), repeat=2):
            xy = multiply(alg, src[a], src[b])
            if dom.add(xy):
                src.append(xy)
                img.append(multiply(alg, img[a], img[b]))
                grew = True
    if len(dom) < n:
        raise ValueError("the given generators do not generate the algebra")
    # sigma @ S = I_mg  with S columns the domain vectors
    s_mat = np.array(src).T
    sigma = matmul(np.array(img).T, inverse(s_mat))
    rep = check_automorphism(alg, sigma)
    if not rep.valid:
        raise ValueError(f"images admit no homomorphic extension: {rep.violation}")
    return Automorphism(sigma, rep.order)


# -- operator Lie (super)algebras -----------------------------------------


@dataclass(frozen=True)
class OperatorLieAlgebra:
    """A Lie (super)algebra realised by matrices, with its bracket tensor.

    ``matrices[a]`` is the operator of basis element ``a``; the bracket is the
    supercommutator ``[A, B] = AB - (-1)^{|A||B|} BA``.
    """

    algebra: Algebra
    matrices: np.ndarray
    _coords: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def coordinates(self, ops) -> np.ndarray:
        """Coordinates of one operator (2-D) or a stack of operators (3-D)."""
        if "cs" not in self._coords:
            self._coords["cs"] = CoordinateSystem(self.matrices.reshape(self.dim, -1))
        ops = f3(ops)
        if ops.ndim == 2:
            return self._coords["cs"].coords(ops.reshape(-1))
        return self._coords["cs"].coords(ops.reshape(ops.shape[0], -1))


def supercommutator(a, b, sign: int = 1) -> np.ndarray:
    return np.mod(matmul(a, b) - sign * matmul(b, a), P)


def lie_from_operators(matrices, parity=None, labels=None, check: bool = True) -> OperatorLieAlgebra:
    """Bracket tensor of the span of ``matrices`` under the supercommutator."""
    mats = f3(matrices)
    m = mats.shape[0]
    parity = np.zeros(m, dtype=DTYPE) if parity is None else np.asarray(parity) % 2
    labels = labels or tuple(f"d{k}" for k in range(m))
    flat = mats.reshape(m, int(np.prod(mats.shape[1:])))
    cs = CoordinateSystem(flat) if m else None
    mult = np.zeros((m, m, m), dtype=DTYPE)
    if m:
        ab = np.mod(np.einsum("aij,bjk->abik", mats, mats), P)
        sgn = np.where(np.outer(parity, parity) == 1, -1, 1)
        comm = np.mod(ab - sgn[:, :, None, None] * ab.transpose(1, 0, 2, 3), P)
        try:
            mult = cs.coords(comm.reshape(m * m, -1)).reshape(m, m, m)
        except ValueError as exc:
            raise VerificationError("span of operators is not closed under the bracket") from exc
    lie = OperatorLieAlgebra(Algebra(mult, labels, parity=parity), mats)
    if check:
        rep = check_jacobi(lie.algebra)
        if not rep.ok:
            raise VerificationError(f"Jacobi identity fails: {rep.witness}")
    return lie


def _var_leibniz_system(mult: np.ndarray, parity: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Linear system for super-derivations of parity ``p``.

    ``D(e_i e_j) = D(e_i) e_j + (-1)^{p|i|} e_i D(e_j)`` with ``D[k, l]`` the
    coefficient of ``e_k`` in ``D(e_l)``; only entries of parity ``p`` are unknowns.
    """
    n = mult.shape[0]
    eye = identity(n)
    # Equation (i, j, k); unknown (a, b) -> D[a, b]
    e1 = np.einsum("ijl,ka->ijkal", mult, eye)          # sum_l c[i,j,l] D[k,l]
    e2 = np.einsum("ljk,ib->ijklb", mult, eye)          # sum_l D[l,i] c[l,j,k]
    e3 = np.einsum("ilk,jb->ijklb", mult, eye)          # sum_l c[i,l,k] D[l,j]
    sgn = np.where((parity * p) % 2 == 1, -1, 1)
    eqs = e1 - e2 - sgn[:, None, None, None, None] * e3
    eqs = np.mod(eqs.reshape(n ** 3, n * n), P)
    allowed = [a * n + b for a in range(n) for b in range(n) if (parity[a] ^ parity[b]) == p]
    return eqs[:, allowed], allowed


def _solve_operators(eqs: np.ndarray, allowed: list[int], n: int) -> np.ndarray:
    ns = nullspace(eqs) if eqs.shape[1] else np.zeros((0, 0), dtype=DTYPE)
    out = np.zeros((ns.shape[0], n * n), dtype=DTYPE)
    if ns.shape[0]:
        out[:, allowed] = ns
    return out.reshape(-1, n, n)


def derivations(alg: Algebra) -> OperatorLieAlgebra:
    """Lie algebra of derivations of an ungraded algebra, echelonized basis."""
    n = alg.dim
    eqs, allowed = _var_leibniz_system(alg.mult, np.zeros(n, dtype=DTYPE), 0)
    return lie_from_operators(_solve_operators(eqs, allowed, n))


def skew_transformations(form) -> OperatorLieAlgebra:
    """so(V, b): operators with ``b(Tx, y) + b(x, Ty) = 0``."""
    b = f3(form)
    n = b.shape[0]
    if (b != b.T).any():
        raise ValueError("form is not symmetric")
    if not det_nonzero(b):
        raise ValueError("form is degenerate")
    # sum_l T[l,i] b[l,j] + sum_l b[i,l] T[l,j] = 0
    eye = identity(n)
    eqs = np.einsum("lj,ia->ijla", b, eye) + np.einsum("il,jb->ijlb", b, eye)
    mats = nullspace(eqs.reshape(n * n, n * n)).reshape(-1, n, n)
    return lie_from_operators(mats, labels=tuple(f"s{k}" for k in range(len(mats))))


def adjoint_automorphism(sigma, sub) -> np.ndarray:
    """Matrix of ``d -> sigma d sigma^-1`` on the span of the operators ``sub``.

    Column ``a`` holds the coordinates of the image of ``sub[a]``.
    """
    s = f3(getattr(sigma, "matrix", sigma))
    sinv = inverse(s)
    sub = f3(sub)
    imgs = np.mod(np.einsum("ij,ajk,kl->ail", s, sub, sinv), P)
    cs = CoordinateSystem(sub.reshape(sub.shape[0], -1))
    try:
        return cs.coords(imgs.reshape(sub.shape[0], -1)).T
    except ValueError as exc:
        raise ValueError("operator span is not stable under Ad_sigma") from exc


# -- para-Hurwitz and composition -----------------------------------------


def standard_conjugation(alg: Algebra) -> np.ndarray:
    """Matrix of ``x -> n(x, 1) 1 - x``."""
    if alg.unit is None or alg.form is None:
        raise ValueError("standard conjugation needs a unit and a form")
    one = alg.unit
    return np.mod(np.outer(one, alg.form @ one) - identity(alg.dim), P)


def para_hurwitz(alg: Algebra) -> Algebra:
    """Same space and form, product ``x . y = conj(x) conj(y)``."""
    cj = standard_conjugation(alg)
    mult = np.mod(np.einsum("ai,bj,abk->ijk", cj, cj, alg.mult), P)
    return Algebra(mult, alg.labels, form=alg.form)


def norm_value(form, x) -> int:
    """Quadratic norm recovered from its polar form: ``n(x) = b(x, x) / 2``."""
    x = f3(x)
    return int(2 * (x @ f3(form) @ x)) % P


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    checked: int
    witness: tuple | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_composition(alg: Algebra) -> CheckReport:
    """Linearized multiplicativity ``n(xy,zt) + n(zy,xt) = n(x,z) n(y,t)`` on basis quadruples."""
    if alg.form is None:
        raise ValueError("composition check needs a form")
    n = alg.dim
    c, b = alg.mult, alg.form
    if not det_nonzero(b):
        return CheckReport(False, 0, None, "form is degenerate")
    t = np.mod(np.einsum("xya,ab,ztb->xyzt", c, b, c), P)
    lhs = np.mod(t + t.transpose(2, 1, 0, 3), P)
    rhs = np.mod(np.einsum("xz,yt->xyzt", b, b), P)
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        w = tuple(alg.labels[i] for i in bad[0])
        return CheckReport(False, n ** 4, w, "linearized multiplicativity fails")
    return CheckReport(True, n ** 4)


# -- Jacobi sweeps ----------------------------------------------------------


def _sign_matrix(parity: np.ndarray) -> np.ndarray:
    return np.where(np.outer(parity, parity) == 1, -1, 1).astype(DTYPE)


def check_antisymmetry(alg: Algebra) -> CheckReport:
    """``[x, y] = -(-1)^{|x||y|} [y, x]`` and parity of brackets, on basis pairs."""
    c = alg.mult
    n = alg.dim
    s = _sign_matrix(alg.parity)
    bad = np.argwhere(np.mod(c + s[:, :, None] * c.transpose(1, 0, 2), P).any(axis=2))
    if bad.size:
        i, j = bad[0]
        return CheckReport(False, n * n, (alg.labels[i], alg.labels[j]), "antisymmetry")
    par = alg.parity
    wrong = (par[:, None, None] + par[None, :, None] + par[None, None, :]) % 2 == 1
    bad = np.argwhere(wrong & (c != 0))
    if bad.size:
        i, j, _ = bad[0]
        return CheckReport(False, n * n, (alg.labels[i], alg.labels[j]), "grading")
    return CheckReport(True, n * n)


def _jacobi_rows(args) -> tuple | None:
    """Check ``ad[x,y] = ad_x ad_y - (-1)^{|x||y|} ad_y ad_x`` for x in ``rows``.

    This is the super-Jacobi identity for every triple ``(x, y, z)`` with x in
    ``rows``. Returns the first failing triple of indices or ``None``.
    """
    from scipy import sparse

    mult, parity, rows = args
    n = mult.shape[0]
    # stack[(j, m), l] = ad_j[m, l] = c[j, l, m]
    stack = sparse.csr_matrix(mult.transpose(0, 2, 1).reshape(n * n, n).astype(np.int64))
    eye = sparse.identity(n, dtype=np.int64, format="csr")
    for i in rows:
        ad_i = sparse.csr_matrix(mult[i].T.astype(np.int64))
        c_i = sparse.csr_matrix(mult[i].astype(np.int64))
        left = sparse.kron(eye, ad_i, format="csr") @ stack          # ad_i ad_j
        right = stack @ ad_i                                          # ad_j ad_i
        sgn = np.where(parity * parity[i] == 1, -1, 1).astype(np.int64)
        right = sparse.diags(np.repeat(sgn, n)) @ right
        target = sparse.kron(c_i, eye, format="csr") @ stack         # ad_[i, j]
        diff = (left - right - target).tocoo()
        bad = np.nonzero(diff.data % P)[0]
        if bad.size:
            r, lcol = diff.row[bad[0]], diff.col[bad[0]]
            return (int(i), int(r // n), int(lcol))
    return None


def check_jacobi(alg: Algebra, workers: int = 1) -> CheckReport:
    """Graded antisymmetry plus the (super-)Jacobi identity on all basis triples.

    ``workers > 1`` partitions the sweep over processes by first index.
    """
    anti = check_antisymmetry(alg)
    if not anti.ok:
        return anti
    n = alg.dim
    mult = np.asarray(alg.mult, dtype=np.int8)
    parity = np.asarray(alg.parity)
    chunks = [list(range(k, n, max(workers, 1))) for k in range(max(workers, 1))]
    if workers > 1 and n > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_jacobi_rows, [(mult, parity, c) for c in chunks]))
    else:
        results = [_jacobi_rows((mult, parity, range(n)))]
    hits = [r for r in results if r is not None]
    if hits:
        w = min(hits)
        return CheckReport(False, n ** 3, tuple(alg.labels[k] for k in w), "Jacobi identity")
    return CheckReport(True, n ** 3)
