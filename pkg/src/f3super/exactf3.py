"""Exact linear algebra over the field with three elements.

Vectors and matrices are plain numpy integer arrays with entries in {0, 1, 2}.
Matrices act on column vectors; a basis is stored as a 2-D array whose *rows*
are the basis vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

P = 3
DTYPE = np.int64


class VerificationError(RuntimeError):
    """A construction that is guaranteed by theory failed its own check."""


def f3(a) -> np.ndarray:
    """Coerce ``a`` to an integer array reduced modulo 3."""
    return np.mod(np.asarray(a, dtype=DTYPE), P)


def inv_scalar(a: int) -> int:
    a %= P
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in F3")
    # 1*1 = 1 and 2*2 = 4 = 1: every unit is its own inverse.
    return a


def _mm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # float64 BLAS is exact here: partial sums are at most 4 * inner dimension
    if a.ndim == 2 and b.ndim <= 2:
        return np.mod(a.astype(np.float64) @ b.astype(np.float64), P).astype(DTYPE)
    return np.mod(a @ b, P)


def matmul(*mats) -> np.ndarray:
    """Product of matrices modulo 3 (reducing after each factor)."""
    out = f3(mats[0])
    for m in mats[1:]:
        out = _mm(out, f3(m))
    return out


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=DTYPE)


def rref(a) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` and its pivot columns."""
    m = f3(a).copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = (m[r] * inv_scalar(int(m[r, c]))) % P
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % P
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a) -> int:
    a = np.atleast_2d(f3(a))
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def nullspace(a) -> np.ndarray:
    """Basis (rows, in reduced echelon form) of ``{x : a @ x = 0}``."""
    a = np.atleast_2d(f3(a))
    cols = a.shape[1]
    if a.shape[0] == 0:
        return identity(cols)
    r, pivots = rref(a)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=DTYPE)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = (-r[row, fc]) % P
    if basis.shape[0]:
        basis = rref(basis)[0]
    return basis


def row_space(a) -> np.ndarray:
    """Echelonized basis of the row space of ``a``."""
    r, pivots = rref(np.atleast_2d(a))
    return r[: len(pivots)]


def inverse(a) -> np.ndarray:
    a = f3(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"inverse needs a square matrix, got {a.shape}")
    r, pivots = rref(np.hstack([a, identity(n)]))
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular over F3")
    return r[:, n:]


def det_nonzero(a) -> bool:
    a = f3(a)
    return a.shape[0] == a.shape[1] and rank(a) == a.shape[0]


@dataclass(frozen=True)
class LinearSolution:
    """Solution set of ``A x = b``: ``particular + span(nullspace)``.

    ``particular`` is ``None`` when the system is inconsistent.
    """

    particular: np.ndarray | None
    nullspace: np.ndarray

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def solve_linear(a, b) -> LinearSolution:
    a = np.atleast_2d(f3(a))
    b = f3(b).reshape(-1)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row count {a.shape[0]} does not match rhs length {b.shape[0]}")
    cols = a.shape[1]
    r, pivots = rref(np.hstack([a, b[:, None]]))
    ns = nullspace(a)
    if cols in pivots:
        return LinearSolution(None, ns)
    x = np.zeros(cols, dtype=DTYPE)
    for row, pc in enumerate(pivots):
        x[pc] = r[row, cols]
    return LinearSolution(x, ns)


class IncrementalBasis:
    """Echelon basis of a growing span that remembers how to express members.

    Every inserted vector ``v_k`` gets an index; ``express(w)`` returns
    coefficients ``c`` with ``w = sum_k c[k] v_k`` or ``None`` when ``w`` lies
    outside the span.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: list[np.ndarray] = []  # reduced rows, leading entry 1
        self._combo: list[np.ndarray] = []  # row k = sum_j combo[k][j] v_j
        self._pivots: list[int] = []
        self.vectors: list[np.ndarray] = []

    def __len__(self) -> int:
        return len(self.vectors)

    def _reduce(self, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        w = f3(w).copy()
        c = np.zeros(len(self._rows), dtype=DTYPE)
        for k, (row, p) in enumerate(zip(self._rows, self._pivots)):
            a = w[p]
            if a:
                w = (w - a * row) % P
                c[k] = a
        return w, c

    def contains(self, w) -> bool:
        return not self._reduce(w)[0].any()

    def express(self, w) -> np.ndarray | None:
        rest, c = self._reduce(w)
        if rest.any():
            return None
        n = len(self.vectors)
        out = np.zeros(n, dtype=DTYPE)
        for k, a in enumerate(c):
            if a:
                out[: len(self._combo[k])] += a * self._combo[k]
        return out % P

    def add(self, v) -> bool:
        """Insert ``v`` if it is independent of the current span."""
        v = f3(v)
        rest, c = self._reduce(v)
        nz = np.nonzero(rest)[0]
        if nz.size == 0:
            return False
        n = len(self.vectors)
        combo = np.zeros(n + 1, dtype=DTYPE)
        for k, a in enumerate(c):
            if a:
                combo[: len(self._combo[k])] -= a * self._combo[k]
        combo[n] = 1
        p = int(nz[0])
        s = inv_scalar(int(rest[p]))
        self._rows.append((rest * s) % P)
        self._combo.append((combo * s) % P)
        self._pivots.append(p)
        self.vectors.append(v)
        return True


class CoordinateSystem:
    """Coordinates with respect to a fixed list of independent vectors.

    ``basis`` rows are the vectors; ``coords(v)`` solves ``c @ basis = v`` and
    raises ``ValueError`` when ``v`` is not in the span.
    """

    def __init__(self, basis):
        basis = np.atleast_2d(f3(basis))
        self.basis = basis
        m = basis.shape[0]
        if m == 0:
            self._cols: list[int] = []
            self._inv = np.zeros((0, 0), dtype=DTYPE)
            return
        _, piv = rref(basis.T)
        if len(piv) != m:
            raise ValueError("basis vectors are linearly dependent")
        # Columns where the basis is invertible.
        _, cols = rref(basis)
        self._cols = cols
        self._inv = inverse(basis[:, cols])

    def __len__(self) -> int:
        return self.basis.shape[0]

    def coords(self, v) -> np.ndarray:
        """Coordinates of one vector (1-D) or many (2-D, one per row)."""
        v = f3(v)
        single = v.ndim == 1
        vv = np.atleast_2d(v)
        if len(self) == 0:
            if vv.any():
                raise ValueError("vector not in span of empty basis")
            out = np.zeros((vv.shape[0], 0), dtype=DTYPE)
        else:
            out = _mm(vv[:, self._cols], self._inv)
            if (_mm(out, self.basis) != vv).any():
                raise ValueError("vector not in span")
        return out[0] if single else out


# -- Jordan chains of nilpotent operators ---------------------------------


@dataclass(frozen=True)
class JordanSplitting:
    """Chain decomposition of ``F3^dim`` under a nilpotent ``delta``.

    ``fixed`` are length-1 chains, ``chains2`` rows hold heads ``x`` of
    chains ``x -> delta x -> 0`` and ``chains3`` rows hold heads of
    ``x -> delta x -> delta^2 x -> 0``.  The full chains are recomputed from
    the heads, so only heads are stored.
    """

    delta: np.ndarray
    fixed: np.ndarray
    heads2: np.ndarray
    heads3: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        n = self.delta.shape[0]
        for name in ("delta", "fixed", "heads2", "heads3"):
            arr = getattr(self, name)
            arr = f3(arr).reshape(-1, n) if name != "delta" else f3(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.delta.shape[0]

    @property
    def counts(self) -> tuple[int, int, int]:
        return (len(self.fixed), len(self.heads2), len(self.heads3))

    @property
    def tails2(self) -> np.ndarray:
        return np.mod(self.heads2 @ self.delta.T, P)

    @property
    def chains2(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return list(zip(self.heads2, self.tails2))

    @property
    def chains3(self) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
        d1 = np.mod(self.heads3 @ self.delta.T, P)
        d2 = np.mod(d1 @ self.delta.T, P)
        return list(zip(self.heads3, d1, d2))

    @property
    def basis(self) -> np.ndarray:
        """Rows: fixed, chain-2 heads, chain-2 tails, then each length-3 chain."""
        parts = [self.fixed, self.heads2, self.tails2]
        parts += [np.stack(c) for c in self.chains3]
        return np.vstack(parts) if self.dim else np.zeros((0, 0), dtype=DTYPE)

    def _coordinate_matrix(self) -> np.ndarray:
        if "inv" not in self._cache:
            self._cache["inv"] = inverse(self.basis.T)
        return self._cache["inv"]

    def coordinates(self, v) -> np.ndarray:
        """Coordinates in :attr:`basis` of ``v`` (or of each row of ``v``)."""
        v = f3(v)
        if v.ndim == 1:
            return np.mod(v @ self._coordinate_matrix().T, P)
        return _mm(v, self._coordinate_matrix().T)

    @property
    def even_slice(self) -> slice:
        return slice(0, len(self.fixed))

    @property
    def odd_slice(self) -> slice:
        a = len(self.fixed)
        return slice(a, a + len(self.heads2))

    def delta_matrix(self) -> np.ndarray:
        """Rebuild delta from the chain data alone."""
        b = self.basis
        images = [np.zeros_like(self.fixed), self.tails2, np.zeros_like(self.heads2)]
        for x, dx, ddx in self.chains3:
            images.append(np.stack([dx, ddx, np.zeros_like(x)]))
        img = np.vstack(images)
        return np.mod(img.T @ inverse(b.T), P)

    def validate(self) -> None:
        """Raise ``ValueError`` unless every invariant of a splitting holds."""
        n = self.dim
        d = self.delta
        if np.mod(matmul(d, d, d), P).any():
            raise ValueError("delta is not nilpotent of index <= 3")
        f, h2, h3 = self.counts
        if f + 2 * h2 + 3 * h3 != n:
            raise ValueError(f"chain counts {self.counts} do not add up to {n}")
        if rank(self.basis) != n:
            raise ValueError("chain vectors are not a basis")
        if np.mod(self.fixed @ d.T, P).any():
            raise ValueError("a fixed vector is not killed by delta")
        if np.mod(self.tails2 @ d.T, P).any():
            raise ValueError("a length-2 chain does not terminate")
        for _, _, ddx in self.chains3:
            if np.mod(d @ ddx, P).any():
                raise ValueError("a length-3 chain does not terminate")

    @classmethod
    def from_heads(cls, delta, fixed=(), heads2=(), heads3=()) -> "JordanSplitting":
        """Build and validate a splitting from explicitly chosen chain heads."""
        delta = f3(delta)
        n = delta.shape[0]
        s = cls(
            delta,
            np.reshape(f3(fixed), (-1, n)),
            np.reshape(f3(heads2), (-1, n)),
            np.reshape(f3(heads3), (-1, n)),
        )
        s.validate()
        return s


def _check_nilpotent(delta) -> np.ndarray:
    delta = f3(delta)
    if delta.ndim != 2 or delta.shape[0] != delta.shape[1]:
        raise ValueError(f"delta must be square, got shape {delta.shape}")
    if matmul(delta, delta, delta).any():
        raise ValueError("delta^3 != 0")
    return delta


def _split(delta: np.ndarray, candidates) -> JordanSplitting:
    """Greedy chain selection; ``candidates()`` yields trial vectors."""
    n = delta.shape[0]
    dT = delta.T
    d2T = np.mod(dT @ dT, P)
    r1, r2 = rank(delta), rank(np.mod(delta @ delta, P))
    n3, n2 = r2, r1 - 2 * r2

    heads3: list[np.ndarray] = []
    im2 = IncrementalBasis(n)
    for v in candidates():
        if len(heads3) == n3:
            break
        if im2.add(np.mod(v @ d2T, P)):
            heads3.append(v)

    # image of delta, spanned by delta x, delta^2 x, delta y; preimages kept
    im1 = IncrementalBasis(n)
    pre: list[np.ndarray] = []
    for x in heads3:
        dx = np.mod(x @ dT, P)
        ok = im1.add(dx) and im1.add(np.mod(dx @ dT, P))
        if not ok:
            raise VerificationError("length-3 chain images are dependent")
        pre += [x, dx]
    heads2: list[np.ndarray] = []
    h3 = np.array(heads3, dtype=DTYPE).reshape(-1, n)
    for v in candidates():
        if len(heads2) == n2:
            break
        # move v into ker delta^2 using the length-3 heads
        c = im2.express(np.mod(v @ d2T, P))
        y = np.mod(v - c @ h3, P) if len(heads3) else v
        if im1.add(np.mod(y @ dT, P)):
            heads2.append(y)
            pre.append(y)

    allv = IncrementalBasis(n)
    for x in heads3:
        dx = np.mod(x @ dT, P)
        for w in (x, dx, np.mod(dx @ dT, P)):
            allv.add(w)
    for y in heads2:
        allv.add(y)
        allv.add(np.mod(y @ dT, P))
    fixed: list[np.ndarray] = []
    prem = np.array(pre, dtype=DTYPE).reshape(-1, n)
    for v in candidates():
        if len(allv) == n:
            break
        c = im1.express(np.mod(v @ dT, P))
        f = np.mod(v - c @ prem, P) if len(pre) else v
        if allv.add(f):
            fixed.append(f)

    return JordanSplitting.from_heads(delta, fixed, heads2, heads3)


def nilpotent_splitting(delta) -> JordanSplitting:
    """Deterministic Jordan-chain splitting of a nilpotent ``delta`` (delta^3 = 0).

    Candidate chain heads are the standard basis vectors in order. Length-3
    chains are completed first, then length-2 chains (heads corrected into
    ``ker delta^2``), then fixed vectors (corrected into ``ker delta``).
    """
    delta = _check_nilpotent(delta)
    n = delta.shape[0]
    eye = identity(n)
    return _split(delta, lambda: iter(eye))


def random_splitting(delta, rng: np.random.Generator) -> JordanSplitting:
    """A valid splitting built from uniformly random candidate vectors."""
    delta = _check_nilpotent(delta)
    n = delta.shape[0]

    def candidates():
        while True:
            yield rng.integers(0, P, size=n, dtype=DTYPE)

    return _split(delta, candidates)


# -- Representations of the cyclic group of order 3 -----------------------


def _check_order3(s, name: str) -> np.ndarray:
    s = f3(s)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"{name} must be square")
    if (matmul(s, s, s) != identity(s.shape[0])).any():
        raise ValueError(f"{name}^3 != id")
    return s


def equivariant_homs(sigma_x, sigma_y) -> np.ndarray:
    """Basis of ``{f : f sigma_x = sigma_y f}`` as an array of shape (k, dimY, dimX)."""
    sx = _check_order3(sigma_x, "sigma_x")
    sy = _check_order3(sigma_y, "sigma_y")
    nx, ny = sx.shape[0], sy.shape[0]
    # row-major vec: vec(A f B) = kron(A, B^T) vec(f)
    eq = np.kron(sy, identity(nx)) - np.kron(identity(ny), sx.T)
    return nullspace(eq).reshape(-1, ny, nx)


def is_equivariant(f, sigma_x, sigma_y) -> bool:
    return not np.mod(matmul(sigma_y, f) - matmul(f, sigma_x), P).any()


def is_negligible(f, sigma_x, sigma_y) -> bool:
    """True iff ``tr(f g) = 0`` for every equivariant ``g: Y -> X``."""
    f = f3(f)
    if np.mod(matmul(sigma_y, f) - matmul(f, sigma_x), P).any():
        raise ValueError("f is not equivariant")
    for g in equivariant_homs(sigma_y, sigma_x):
        if np.trace(matmul(f, g)) % P:
            return False
    return True


def indecomposable(k: int) -> np.ndarray:
    """Matrix of sigma on V_k (dimension k+1): sigma(w_i) = w_i + w_{i+1}."""
    n = k + 1
    s = identity(n)
    for i in range(n - 1):
        s[i + 1, i] = 1
    return s


def block_diag(*blocks) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = np.zeros((n, m), dtype=DTYPE)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out
