"""Semisimplification of algebras with an order-3 automorphism.

An object with an automorphism ``sigma`` (``sigma^3 = id``) is split into
Jordan chains of ``delta = sigma - id``.  The even part of the resulting
superspace is spanned by the fixed vectors (length-1 chains), the odd part by
the heads of length-2 chains; length-3 chains are discarded.  Products are
projected along the decomposition ``fixed + heads + delta(heads) + length-3``,
and an odd-by-odd product ``x y`` is replaced by the projection of
``x delta(y)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, check_automorphism, map_outputs, products
from .exactf3 import (
    DTYPE,
    P,
    JordanSplitting,
    VerificationError,
    f3,
    identity,
    matmul,
    nilpotent_splitting,
)


def vector_label(v, labels) -> str:
    """Readable name of a vector such as ``e1-e2`` or ``2*u3+v1``."""
    terms = []
    for c, lab in zip(f3(v), labels):
        if c == 0:
            continue
        if not terms:
            terms.append(lab if c == 1 else f"-{lab}")
        else:
            terms.append(f"+{lab}" if c == 1 else f"-{lab}")
    return "".join(terms) or "0"


def _delta(sigma) -> np.ndarray:
    s = f3(getattr(sigma, "matrix", sigma))
    if (matmul(s, s, s) != identity(s.shape[0])).any():
        raise ValueError("sigma^3 != id")
    return np.mod(s - identity(s.shape[0]), P)


def _splitting_for(sigma, splitting: JordanSplitting | None) -> JordanSplitting:
    d = _delta(sigma)
    if splitting is None:
        return nilpotent_splitting(d)
    if (splitting.delta != d).any():
        raise ValueError("splitting was built for a different delta")
    splitting.validate()
    return splitting


@dataclass(frozen=True)
class SuperBimap:
    """A parity-preserving bilinear map ``A x B -> C`` between superspaces.

    ``sdims`` holds the (even, odd) dimensions of A, B, C; ``tensor[a, b, c]``
    is the coefficient of the c-th basis vector of C in ``m(a, b)``; bases list
    even vectors first.
    """

    tensor: np.ndarray
    sdims: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]
    splittings: tuple[JordanSplitting, JordanSplitting, JordanSplitting]

    def parity(self, slot: int) -> np.ndarray:
        p, q = self.sdims[slot]
        return np.array([0] * p + [1] * q, dtype=DTYPE)


def _even_odd(s: JordanSplitting) -> np.ndarray:
    return np.vstack([s.fixed, s.heads2])


def _project(s: JordanSplitting, vecs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Components of ``vecs`` (last axis) along fixed vectors and chain-2 heads."""
    shape = vecs.shape[:-1]
    co = s.coordinates(vecs.reshape(-1, s.dim))
    even = co[:, s.even_slice].reshape(*shape, -1)
    odd = co[:, s.odd_slice].reshape(*shape, -1)
    return even, odd


def semisimplify_bimap(mu, sigmas, splittings=(None, None, None)) -> SuperBimap:
    """Semisimplification of an equivariant bilinear map ``mu: A x B -> C``.

    ``mu[i, j, k]`` is the coefficient of ``c_k`` in ``mu(a_i, b_j)``;
    ``sigmas`` are the three order-3 actions.  The even-even and odd-odd
    blocks land in the even part of C, the mixed blocks in the odd part, with
    the odd-odd block evaluated on ``(x, delta y)``.
    """
    mu = f3(mu)
    sa, sb, sc = (f3(getattr(s, "matrix", s)) for s in sigmas)
    if mu.shape != (sa.shape[0], sb.shape[0], sc.shape[0]):
        raise ValueError(f"tensor shape {mu.shape} does not match the three actions")
    lhs = map_outputs(mu, sc)
    rhs = products(mu, sa.T, sb.T)
    if (lhs != rhs).any():
        raise ValueError("mu is not equivariant")
    spa, spb, spc = (_splitting_for(s, sp) for s, sp in zip((sa, sb, sc), splittings))

    pa, qa = len(spa.fixed), len(spa.heads2)
    pb, qb = len(spb.fixed), len(spb.heads2)
    pc, qc = len(spc.fixed), len(spc.heads2)
    xa, xb = _even_odd(spa), _even_odd(spb)
    prod = products(mu, xa, xb)
    even, odd = _project(spc, prod)

    m = np.zeros((pa + qa, pb + qb, pc + qc), dtype=DTYPE)
    m[:pa, :pb, :pc] = even[:pa, :pb]
    m[:pa, pb:, pc:] = odd[:pa, pb:]
    m[pa:, :pb, pc:] = odd[pa:, :pb]
    if qa and qb:
        x_dy = products(mu, spa.heads2, spb.tails2)
        dx_y = products(mu, spa.tails2, spb.heads2)
        dx_dy = products(mu, spa.tails2, spb.tails2)
        e1 = _project(spc, x_dy)[0]
        e2 = _project(spc, dx_y)[0]
        e3 = _project(spc, dx_dy)[0]
        if np.mod(e1 + e2, P).any() or e3.any():
            raise VerificationError("odd-odd projections violate the delta-compatibility relation")
        m[pa:, pb:, :pc] = e1
    return SuperBimap(m, ((pa, qa), (pb, qb), (pc, qc)), (spa, spb, spc))


def semisimplify_form(form, sigma, splitting: JordanSplitting | None = None) -> np.ndarray:
    """Graded form: restriction to fixed vectors, and ``(x, y) -> n(x, delta y)`` on heads."""
    b = f3(form)
    s = f3(getattr(sigma, "matrix", sigma))
    if (np.mod(s.T @ b @ s, P) != b).any():
        raise ValueError("form is not sigma-invariant")
    sp = _splitting_for(s, splitting)
    p, q = len(sp.fixed), len(sp.heads2)
    out = np.zeros((p + q, p + q), dtype=DTYPE)
    out[:p, :p] = np.mod(sp.fixed @ b @ sp.fixed.T, P)
    odd = np.mod(sp.heads2 @ b @ sp.tails2.T, P)
    out[p:, p:] = odd
    if (np.mod(odd + odd.T, P) != 0).any() or odd.diagonal().any():
        raise VerificationError("odd block of the semisimplified form is not alternating")
    return out


def semisimplify_algebra(alg: Algebra, sigma, splitting: JordanSplitting | None = None) -> Algebra:
    """Superalgebra attached to ``alg`` with the order-3 automorphism ``sigma``.

    The form (when present) is transported by :func:`semisimplify_form` and
    the unit by projection onto the fixed part.
    """
    s = f3(getattr(sigma, "matrix", sigma))
    if alg.is_super:
        raise ValueError("input must be an ungraded algebra")
    rep = check_automorphism(alg, s)
    if not rep.valid:
        raise ValueError(f"sigma is not an automorphism: {rep.violation}")
    if rep.order not in (1, 3):
        raise ValueError("sigma^3 != id")
    sp = _splitting_for(s, splitting)
    bm = semisimplify_bimap(alg.mult, (s, s, s), (sp, sp, sp))
    p, q = bm.sdims[0]
    labels = [vector_label(v, alg.labels) for v in _even_odd(sp)]
    labels = _dedupe(labels)
    form = semisimplify_form(alg.form, s, sp) if alg.form is not None else None
    unit = None
    if alg.unit is not None:
        co = sp.coordinates(alg.unit)
        if (np.mod(alg.unit @ sp.delta.T, P)).any():
            raise VerificationError("unit is not fixed by sigma")
        unit = np.concatenate([co[sp.even_slice], np.zeros(q, dtype=DTYPE)])
    return Algebra(bm.tensor, labels, form=form, unit=unit, parity=bm.parity(0))


def _dedupe(labels: list[str]) -> list[str]:
    seen: dict[str, int] = {}
    out = []
    for lab in labels:
        k = seen.get(lab, 0)
        seen[lab] = k + 1
        out.append(lab if k == 0 else f"{lab}#{k}")
    return out


# -- back from superspaces ------------------------------------------------


def inflate(salg: Algebra) -> tuple[Algebra, np.ndarray]:
    """Ordinary algebra with order-3 automorphism realising a superalgebra.

    Each odd basis vector ``x`` is doubled to ``x(v0), x(v1)`` with
    ``sigma: x(v0) -> x(v0) + x(v1)``; odd-by-odd products pick up the
    pairing ``(v0, v1) -> 1, (v1, v0) -> -1``.
    """
    p, q = salg.sdim
    n = p + 2 * q
    m = salg.mult
    # position of x(v_r) for odd index k = p + a
    def pos(k: int, r: int) -> int:
        return k if k < p else p + 2 * (k - p) + r

    ev, od = range(p), range(p, p + q)
    mult = np.zeros((n, n, n), dtype=DTYPE)
    lam = {(0, 1): 1, (1, 0): -1}
    for i in ev:
        for j in ev:
            mult[i, j, :p] = m[i, j, :p]
        for j in od:
            for r in (0, 1):
                for k in od:
                    mult[i, pos(j, r), pos(k, r)] = m[i, j, k]
                    mult[pos(j, r), i, pos(k, r)] = m[j, i, k]
    for i in od:
        for j in od:
            for (r, t), c in lam.items():
                mult[pos(i, r), pos(j, t), :p] = (c * m[i, j, :p]) % P
    labels = list(salg.labels[:p])
    for k in od:
        labels += [f"{salg.labels[k]}(v0)", f"{salg.labels[k]}(v1)"]
    sigma = identity(n)
    for k in od:
        sigma[pos(k, 1), pos(k, 0)] = 1
    form = None
    if salg.form is not None:
        b = salg.form
        form = np.zeros((n, n), dtype=DTYPE)
        form[:p, :p] = b[:p, :p]
        for i in od:
            for j in od:
                for (r, t), c in lam.items():
                    form[pos(i, r), pos(j, t)] = (c * b[i, j]) % P
    unit = None
    if salg.unit is not None:
        unit = np.concatenate([salg.unit[:p], np.zeros(2 * q, dtype=DTYPE)])
    return Algebra(mult, labels, form=form, unit=unit), sigma


def canonical_inflation_splitting(salg: Algebra) -> JordanSplitting:
    """Splitting of an inflated algebra whose heads are the ``x(v0)`` copies."""
    p, q = salg.sdim
    n = p + 2 * q
    eye = identity(n)
    delta = np.zeros((n, n), dtype=DTYPE)
    for a in range(q):
        delta[p + 2 * a + 1, p + 2 * a] = 1
    return JordanSplitting.from_heads(delta, eye[:p], eye[[p + 2 * a for a in range(q)]])


def roundtrip_check(salg: Algebra) -> bool:
    """``semisimplify(inflate(X)) == X`` for the canonical chain heads."""
    big, sigma = inflate(salg)
    back = semisimplify_algebra(big, sigma, canonical_inflation_splitting(salg))
    same = back.sdim == salg.sdim and (back.mult == salg.mult).all()
    if salg.form is not None:
        same = same and back.form is not None and (back.form == salg.form).all()
    if salg.unit is not None:
        same = same and back.unit is not None and (back.unit == salg.unit).all()
    return bool(same)
