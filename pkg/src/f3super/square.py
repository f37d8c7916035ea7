"""Triality algebras and the symmetric construction of the magic square.

The Lie algebra ``g(C, C')`` is laid out in five blocks::

    tri(C) | tri(C') | iota_0(C x C') | iota_1(C x C') | iota_2(C x C')

with ``iota_i(e_a x e'_b)`` at offset ``a * dim C' + b`` inside its block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import (
    Algebra,
    Automorphism,
    CheckReport,
    OperatorLieAlgebra,
    check_automorphism,
    check_jacobi,
    lie_from_operators,
    para_hurwitz,
    skew_transformations,
)
from .exactf3 import (
    DTYPE,
    P,
    CoordinateSystem,
    JordanSplitting,
    VerificationError,
    block_diag,
    det_nonzero,
    f3,
    identity,
    inverse,
    matmul,
    nilpotent_splitting,
    nullspace,
    rank,
    solve_linear,
)
from .ssfunctor import semisimplify_algebra

HALF = 2  # inverse of 2 modulo 3


def s_operator(form, x, y) -> np.ndarray:
    """``s_{x,y}: z -> n(x, z) y - n(y, z) x``."""
    b = f3(form)
    x, y = f3(x), f3(y)
    return np.mod(np.outer(y, x @ b) - np.outer(x, y @ b), P)


def _half_spin(para: Algebra, x, y) -> tuple[np.ndarray, np.ndarray]:
    """``(1/2 (r_y l_x - r_x l_y), 1/2 (l_y r_x - l_x r_y))``."""
    lx, ly = para.left_mult(x), para.left_mult(y)
    rx, ry = para.right_mult(x), para.right_mult(y)
    d1 = HALF * (matmul(ry, lx) - matmul(rx, ly))
    d2 = HALF * (matmul(ly, rx) - matmul(lx, ry))
    return np.mod(d1, P), np.mod(d2, P)


def t_triple(para: Algebra, x, y) -> np.ndarray:
    """The triple ``t_{x,y}`` as an array of shape (3, n, n)."""
    if para.form is None:
        raise ValueError("para algebra needs a form")
    d1, d2 = _half_spin(para, x, y)
    return np.stack([s_operator(para.form, x, y), d1, d2])


def _solve_matrix(a, b) -> np.ndarray:
    """``X`` with ``a @ X = b``; raises if some column is inconsistent."""
    a, b = f3(a), f3(b)
    cols = []
    for k in range(b.shape[1]):
        sol = solve_linear(a, b[:, k])
        if not sol.consistent:
            raise VerificationError("overdetermined system is inconsistent")
        cols.append(sol.particular)
    return np.array(cols, dtype=DTYPE).T


@dataclass(frozen=True)
class TrialityAlgebra:
    """``tri(C) = {(d0, d1, d2) in so(C)^3 : d0(x.y) = d1(x).y + x.d2(y)}``.

    ``components[a]`` holds the three matrices of basis element ``a``;
    ``lie`` is the componentwise bracket.
    """

    para: Algebra
    so: OperatorLieAlgebra
    components: np.ndarray
    lie: Algebra
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def n(self) -> int:
        return self.para.dim

    def coordinates(self, triples) -> np.ndarray:
        """Coordinates of one triple (3, n, n) or a stack (m, 3, n, n)."""
        if "cs" not in self._cache:
            self._cache["cs"] = CoordinateSystem(self.components.reshape(self.dim, -1))
        t = f3(triples)
        flat = t.reshape(-1, 3 * self.n * self.n)
        co = self._cache["cs"].coords(flat)
        return co[0] if t.ndim == 3 else co

    def theta(self) -> np.ndarray:
        """``(d0, d1, d2) -> (d2, d0, d1)`` on coordinates (columns are images)."""
        if "theta" not in self._cache:
            rolled = self.components[:, [2, 0, 1]]
            self._cache["theta"] = self.coordinates(rolled).T
        return self._cache["theta"]

    def pi0(self) -> np.ndarray:
        """First projection as a matrix from tri coordinates to so coordinates."""
        if "pi0" not in self._cache:
            self._cache["pi0"] = self.so.coordinates(self.components[:, 0]).T
        return self._cache["pi0"]

    def t_coordinates(self) -> np.ndarray:
        """``tc[x, y]`` = coordinates of ``t_{e_x, e_y}``, shape (n, n, dim)."""
        if "tc" not in self._cache:
            n = self.n
            eye = identity(n)
            ts = np.array([t_triple(self.para, eye[x], eye[y]) for x in range(n) for y in range(n)])
            self._cache["tc"] = self.coordinates(ts).reshape(n, n, self.dim)
        return self._cache["tc"]


def triality_algebra(para: Algebra, labels_prefix: str = "t") -> TrialityAlgebra:
    """Solve the triality constraint inside ``so(C, n)^3``."""
    if para.form is None or not det_nonzero(para.form):
        raise ValueError("triality needs a nondegenerate form")
    so = skew_transformations(para.form)
    s = so.matrices
    c = para.mult
    n, m = para.dim, so.dim
    e0 = np.einsum("ijl,akl->ijka", c, s)
    e1 = np.einsum("ali,ljk->ijka", s, c)
    e2 = np.einsum("alj,ilk->ijka", s, c)
    eqs = np.concatenate([e0, -e1, -e2], axis=3).reshape(n ** 3, 3 * m)
    sol = nullspace(np.mod(eqs, P))
    comps = np.mod(np.einsum("kta,aij->ktij", sol.reshape(-1, 3, m), s), P)
    big = np.array([block_diag(*t) for t in comps], dtype=DTYPE)
    labels = tuple(f"{labels_prefix}{k}" for k in range(len(comps)))
    lie = lie_from_operators(big, labels=labels).algebra
    return TrialityAlgebra(para, so, comps, lie)


def vartheta(tri: TrialityAlgebra) -> np.ndarray:
    """Matrix of ``s_{x,y} -> 1/2 (l_y r_x - l_x r_y)`` on so coordinates.

    Solved from all basis generators; the consistency of the overdetermined
    system is the well-definedness check.
    """
    n = tri.n
    eye = identity(n)
    b = tri.para.form
    gens, imgs = [], []
    for x in range(n):
        for y in range(n):
            gens.append(s_operator(b, eye[x], eye[y]))
            imgs.append(_half_spin(tri.para, eye[x], eye[y])[1])
    try:
        g = tri.so.coordinates(np.array(gens))
        h = tri.so.coordinates(np.array(imgs))
    except ValueError as exc:
        raise VerificationError("a half-spin image is not skew") from exc
    return _solve_matrix(g, h).T


def check_theta_diagram(tri: TrialityAlgebra) -> CheckReport:
    """``vartheta . pi0 = pi0 . theta`` and ``theta^3 = id``."""
    th, p0, vt = tri.theta(), tri.pi0(), vartheta(tri)
    if not det_nonzero(p0):
        return CheckReport(False, 0, None, "pi0 is not invertible")
    if (matmul(th, th, th) != identity(tri.dim)).any():
        return CheckReport(False, 0, None, "theta^3 != id")
    ok = (matmul(vt, p0) == matmul(p0, th)).all()
    return CheckReport(bool(ok), tri.dim ** 2, None, "" if ok else "diagram does not commute")


def _skew_tensor(form, d) -> np.ndarray:
    """``w`` in ``C x C`` with ``d(z) = sum w[a, b] n(e_b, z) e_a``."""
    return matmul(d, inverse(form))


def spin_actions(para: Algebra, d) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Natural and half-spin actions of ``d`` in so(C), as matrices on C.

    ``d`` is read as a skew tensor; the half-spin actions are
    ``-1/2 sum w_ab (e_a . z) . e_b`` and ``1/2 sum w_ab e_a . (z . e_b)``.
    """
    w = _skew_tensor(para.form, d)
    c = para.mult
    phi0 = np.mod(np.einsum("ab,bz,ak->kz", w, para.form, identity(para.dim)), P)
    az = np.einsum("azl,lbk->abzk", c, c)   # (e_a . e_z) . e_b
    za = np.einsum("zbl,alk->abzk", c, c)   # e_a . (e_z . e_b)
    phi1 = np.mod(-HALF * np.einsum("ab,abzk->kz", w, az), P)
    phi2 = np.mod(HALF * np.einsum("ab,abzk->kz", w, za), P)
    return phi0, phi1, phi2


def check_spin_diagrams(tri: TrialityAlgebra) -> CheckReport:
    """``Phi_i(vartheta^i(s) x z) = s(z)`` for every basis generator ``s_{x,y}``, ``z`` and i = 1, 2."""
    n = tri.n
    eye = identity(n)
    vt = vartheta(tri)
    mats = tri.so.matrices
    checked = 0
    for x in range(n):
        for y in range(n):
            s = s_operator(tri.para.form, eye[x], eye[y])
            co = tri.so.coordinates(s)
            for i in (1, 2):
                ci = co
                for _ in range(i):
                    ci = np.mod(vt @ ci, P)
                di = np.mod(np.einsum("a,aij->ij", ci, mats), P)
                phi = spin_actions(tri.para, di)[i]
                checked += n
                if (phi != s).any():
                    lab = tri.para.labels
                    return CheckReport(False, checked, (lab[x], lab[y], i), "half-spin diagram")
    return CheckReport(True, checked)


# -- the square -----------------------------------------------------------


@dataclass(frozen=True)
class SquareAlgebra:
    """``g(C, C')`` with its block layout."""

    algebra: Algebra
    left: TrialityAlgebra
    right: TrialityAlgebra

    @property
    def blocks(self) -> dict[str, slice]:
        t, u = self.left.dim, self.right.dim
        m = self.left.n * self.right.n
        out = {"tri": slice(0, t), "tri'": slice(t, t + u)}
        for i in range(3):
            out[f"iota{i}"] = slice(t + u + i * m, t + u + (i + 1) * m)
        return out

    def iota_index(self, i: int, a: int, b: int) -> int:
        return self.blocks[f"iota{i}"].start + a * self.right.n + b


def magic_square(left: Algebra, right: Algebra, tri_left: TrialityAlgebra | None = None,
                 tri_right: TrialityAlgebra | None = None) -> SquareAlgebra:
    """Bracket tensor of ``g(C, C')`` from two para-Hurwitz algebras."""
    tl = tri_left or triality_algebra(left)
    tr = tri_right or triality_algebra(right, labels_prefix="t'")
    n, n2 = left.dim, right.dim
    t, u, m = tl.dim, tr.dim, left.dim * right.dim
    dim = t + u + 3 * m
    mult = np.zeros((dim, dim, dim), dtype=np.int16)
    sq = slice(0, t), slice(t, t + u)
    io = [slice(t + u + i * m, t + u + (i + 1) * m) for i in range(3)]

    mult[sq[0], sq[0], sq[0]] = tl.lie.mult
    mult[sq[1], sq[1], sq[1]] = tr.lie.mult
    q = np.einsum("xyz,pqr->xpyqzr", left.mult, right.mult).reshape(m, m, m)
    tc_l, tc_r = tl.t_coordinates(), tr.t_coordinates()
    th_l, th_r = identity(t), identity(u)
    for i in range(3):
        rl = np.einsum("ayx,pq->axpyq", tl.components[:, i], identity(n2)).reshape(t, m, m)
        rr = np.einsum("xy,aqp->axpyq", identity(n), tr.components[:, i]).reshape(u, m, m)
        mult[sq[0], io[i], io[i]] = rl
        mult[io[i], sq[0], io[i]] = -rl.transpose(1, 0, 2)
        mult[sq[1], io[i], io[i]] = rr
        mult[io[i], sq[1], io[i]] = -rr.transpose(1, 0, 2)
        j, k = (i + 1) % 3, (i + 2) % 3
        mult[io[i], io[j], io[k]] = q
        mult[io[j], io[i], io[k]] = -q.transpose(1, 0, 2)
        a = np.einsum("pq,xyt->xpyqt", right.form, tc_l @ th_l.T).reshape(m, m, t)
        b = np.einsum("xy,pqt->xpyqt", left.form, tc_r @ th_r.T).reshape(m, m, u)
        mult[io[i], io[i], sq[0]] = a
        mult[io[i], io[i], sq[1]] = b
        th_l, th_r = matmul(tl.theta(), th_l), matmul(tr.theta(), th_r)
    labels = list(tl.lie.labels) + list(tr.lie.labels)
    for i in range(3):
        labels += [f"i{i}({x}*{y})" for x in left.labels for y in right.labels]
    alg = Algebra(np.mod(mult, P), labels)
    return SquareAlgebra(alg, tl, tr)


def para_cayley() -> Algebra:
    from .cayley import split_cayley

    return para_hurwitz(split_cayley())


_SQUARE_CACHE: dict = {}


def cayley_square() -> SquareAlgebra:
    """``g(C, C)`` for the para-Cayley algebra on both sides (cached)."""
    if "cc" not in _SQUARE_CACHE:
        pc = para_cayley()
        tl = triality_algebra(pc)
        tr = triality_algebra(pc, labels_prefix="t'")
        _SQUARE_CACHE["cc"] = magic_square(pc, pc, tl, tr)
    return _SQUARE_CACHE["cc"]


def _tri_adjoint(tri: TrialityAlgebra, sigma) -> np.ndarray:
    s = f3(sigma)
    si = inverse(s)
    imgs = np.mod(np.einsum("ij,atjk,kl->atil", s, tri.components, si), P)
    return tri.coordinates(imgs).T


def induced_automorphism(square: SquareAlgebra, sig_left=None, sig_right=None,
                         verify: bool = True) -> Automorphism:
    """Block-diagonal automorphism ``Ad_sigma`` on tri blocks, ``sigma x sigma'`` on iota blocks."""
    sl = identity(square.left.n) if sig_left is None else f3(getattr(sig_left, "matrix", sig_left))
    sr = identity(square.right.n) if sig_right is None else f3(getattr(sig_right, "matrix", sig_right))
    ss = np.kron(sl, sr) % P
    mat = block_diag(_tri_adjoint(square.left, sl), _tri_adjoint(square.right, sr), ss, ss, ss)
    if not verify:
        return Automorphism(mat, 3 if (mat != identity(len(mat))).any() else 1)
    rep = check_automorphism(square.algebra, mat)
    if not rep.valid:
        raise VerificationError(f"induced map does not preserve the bracket: {rep.violation}")
    return Automorphism(mat, rep.order)


def _block_splitting(delta, blocks: list[slice]) -> JordanSplitting:
    """Jordan splitting assembled block by block for block-diagonal ``delta``."""
    n = delta.shape[0]
    parts = {"fixed": [], "h2": [], "h3": []}
    for bl in blocks:
        sp = nilpotent_splitting(delta[bl, bl])
        for key, rows in (("fixed", sp.fixed), ("h2", sp.heads2), ("h3", sp.heads3)):
            for r in rows:
                v = np.zeros(n, dtype=DTYPE)
                v[bl] = r
                parts[key].append(v)
    arr = {k: np.array(v, dtype=DTYPE).reshape(-1, n) for k, v in parts.items()}
    return JordanSplitting.from_heads(delta, arr["fixed"], arr["h2"], arr["h3"])


@dataclass(frozen=True)
class ExtendedSquare:
    """Semisimplified ``g(C, C')`` with the graded dimension of each block."""

    algebra: Algebra
    block_sdims: dict[str, tuple[int, int]]


def _case_matrix(case) -> np.ndarray:
    from .cayley import order3_automorphism

    if case in ("unit", "id", None):
        return identity(8)
    return order3_automorphism(int(case)).matrix


def extended_square(case_left, case_right) -> ExtendedSquare:
    """Semisimplification of ``g(C, C)`` under the automorphism induced by two Cayley classes.

    ``"unit"`` on a side means the identity automorphism there.
    """
    keys = []
    for c in (case_left, case_right):
        if c not in ("unit", 1, 2, 3, 4, "1", "2", "3", "4"):
            raise ValueError(f"unknown side {c!r}; expected 1, 2, 3, 4 or 'unit'")
        keys.append("unit" if c == "unit" else int(c))
    return _extended(*keys)


@lru_cache(maxsize=8)
def _extended(case_left, case_right) -> ExtendedSquare:
    sq = cayley_square()
    sigma = induced_automorphism(sq, _case_matrix(case_left), _case_matrix(case_right))
    names = list(sq.blocks)
    split = _block_splitting(sigma.delta, [sq.blocks[k] for k in names])
    ss = semisimplify_algebra(sq.algebra, sigma, split)
    sdims = {}
    for k in names:
        bl = sq.blocks[k]
        inside = lambda rows: int(sum(1 for r in rows if r[bl].any()))
        sdims[k] = (inside(split.fixed), inside(split.heads2))
    return ExtendedSquare(ss, sdims)


def check_square_jacobi(square, workers: int = 1) -> CheckReport:
    alg = square.algebra if hasattr(square, "algebra") else square
    return check_jacobi(alg, workers=workers)
