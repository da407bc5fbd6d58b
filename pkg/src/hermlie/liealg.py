"""Real Lie algebras given by structure constants, and subspace arithmetic.

A :class:`RealLieAlgebra` stores the dense tensor ``f[k, i, j]`` with
``[u_i, u_j] = sum_k f[k, i, j] u_k`` for the standard basis ``u``.
Indices are 0-based, in code and in the instance file format.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from hermlie.linalg import DEFAULT_TOL, Tolerance, null_space


def span_residual_tol(v) -> float:
    return 1e-9 * (1.0 + float(np.linalg.norm(v)))


@dataclass(frozen=True, eq=False)
class RealLieAlgebra:
    f: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.f, dtype=float)
        if f.ndim != 3 or len(set(f.shape)) != 1:
            raise ValueError("structure constants must have shape (d, d, d)")
        if f.shape[0] % 2:
            raise ValueError("dimension must be even")
        if not np.all(np.isfinite(f)):
            raise ValueError("structure constants must be finite")
        f = (f - f.transpose(0, 2, 1)) / 2
        f.setflags(write=False)
        object.__setattr__(self, "f", f)

    @classmethod
    def abelian(cls, dim: int) -> "RealLieAlgebra":
        return cls(np.zeros((dim, dim, dim)))

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable) -> "RealLieAlgebra":
        """Build from ``(i, j, k, value)`` with 0-based ``i < j``."""
        f = np.zeros((dim, dim, dim))
        for i, j, k, val in entries:
            f[k, i, j] += val
            f[k, j, i] -= val
        return cls(f)

    @property
    def dim(self) -> int:
        return self.f.shape[0]

    @property
    def n(self) -> int:
        return self.dim // 2

    def bracket(self, x, y):
        x = np.asarray(x)
        y = np.asarray(y)
        if x.shape != (self.dim,) or y.shape != (self.dim,):
            raise ValueError(f"vectors must have length {self.dim}")
        return np.einsum("kij,i,j->k", self.f, x, y)

    def bracket_many(self, xs, ys):
        """Brackets of column vectors: result[:, a, b] = [xs[:, a], ys[:, b]]."""
        return np.einsum("kij,ia,jb->kab", self.f, xs, ys)

    def ad(self, x):
        """Matrix of ``ad_x`` in the standard basis."""
        return np.einsum("kij,i->kj", self.f, np.asarray(x))

    def change_basis(self, q) -> "RealLieAlgebra":
        """Structure constants in the basis given by the columns of ``q``."""
        q = np.asarray(q, dtype=float)
        qinv = np.linalg.inv(q)
        return RealLieAlgebra(np.einsum("ak,kij,ib,jc->abc", qinv, self.f, q, q))


def bracket(g: RealLieAlgebra, x, y):
    return g.bracket(x, y)


def jacobi_defect(g: RealLieAlgebra) -> float:
    """Max Euclidean norm of the Jacobiator over basis triples."""
    f = g.f
    # jac[l, i, j, k] = [[u_i, u_j], u_k]
    jac = np.einsum("mij,lmk->lijk", f, f)
    cyc = jac + jac.transpose(0, 2, 3, 1) + jac.transpose(0, 3, 1, 2)
    if cyc.size == 0:
        return 0.0
    return float(np.sqrt((cyc**2).sum(axis=0)).max())


def ad_traces(g: RealLieAlgebra):
    return np.einsum("jij->i", g.f)


def is_unimodular(g: RealLieAlgebra, tol: Tolerance = DEFAULT_TOL) -> bool:
    tr = ad_traces(g)
    scale = float(np.abs(g.f).max()) if g.f.size else 0.0
    return bool(np.all(np.abs(tr) <= tol.bound(scale)))


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace stored by a standard-orthonormal basis (columns)."""

    ambient_dim: int
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float).reshape(self.ambient_dim, -1)
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.zeros((ambient_dim, 0)))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim))

    @classmethod
    def span(cls, vectors, ambient_dim: int | None = None, tol: float = 1e-9) -> "Subspace":
        """Span of the given vectors (rows of a list, or columns of an array).

        Basis selection is deterministic: at each step the candidate with the
        largest residual is taken, ties going to the lowest index.
        """
        if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
            cand = np.array(vectors, dtype=float)
        else:
            vecs = [np.asarray(v, dtype=float) for v in vectors]
            if not vecs:
                if ambient_dim is None:
                    raise ValueError("ambient_dim required for an empty span")
                return cls.zero(ambient_dim)
            cand = np.stack(vecs, axis=1)
        d = cand.shape[0] if ambient_dim is None else ambient_dim
        cand = cand.reshape(d, -1)
        thresh = tol * (1.0 + np.linalg.norm(cand, axis=0))
        basis = []
        res = cand.copy()
        for _ in range(min(cand.shape)):
            norms = np.linalg.norm(res, axis=0)
            ok = norms > thresh
            if not np.any(ok):
                break
            scores = np.where(ok, norms, -1.0)
            best = int(np.argmax(scores))  # argmax returns the lowest index on ties
            q = res[:, best] / norms[best]
            basis.append(q)
            res = res - np.outer(q, q @ res)
            res = res - np.outer(q, q @ res)
        if not basis:
            return cls.zero(d)
        return cls(d, np.stack(basis, axis=1))

    def project(self, v):
        b = self.basis
        return b @ (b.T @ v)

    def residual(self, v):
        return np.asarray(v) - self.project(v)

    def contains(self, v, tol: float | None = None) -> bool:
        r = float(np.linalg.norm(self.residual(v)))
        return r <= (span_residual_tol(v) if tol is None else tol)

    def contains_space(self, other: "Subspace", tol: float | None = None) -> bool:
        return all(self.contains(other.basis[:, i], tol) for i in range(other.dim))

    def apply(self, m) -> "Subspace":
        """Image of the subspace under the linear map ``m``."""
        return Subspace.span(np.asarray(m) @ self.basis, self.ambient_dim)


def _check_ambient(s: Subspace, t: Subspace):
    if s.ambient_dim != t.ambient_dim:
        raise ValueError(f"ambient dimension mismatch: {s.ambient_dim} vs {t.ambient_dim}")


def subspace_sum(s: Subspace, t: Subspace) -> Subspace:
    _check_ambient(s, t)
    return Subspace.span(np.hstack([s.basis, t.basis]), s.ambient_dim)


def intersect(s: Subspace, t: Subspace) -> Subspace:
    _check_ambient(s, t)
    if s.dim == 0 or t.dim == 0:
        return Subspace.zero(s.ambient_dim)
    ns = null_space(np.hstack([s.basis, -t.basis]), rtol=1e-9)
    return Subspace.span(s.basis @ ns[: s.dim], s.ambient_dim)


def ortho_complement_in(s: Subspace, t: Subspace, metric=None) -> Subspace:
    """``{v in s : metric(v, w) = 0 for all w in t}``."""
    _check_ambient(s, t)
    g = np.eye(s.ambient_dim) if metric is None else np.asarray(metric)
    if t.dim == 0 or s.dim == 0:
        return s
    ns = null_space(t.basis.T @ g @ s.basis, rtol=1e-9)
    return Subspace.span(s.basis @ ns, s.ambient_dim)


def is_ideal(g: RealLieAlgebra, s: Subspace, tol: float | None = None) -> bool:
    if s.ambient_dim != g.dim:
        raise ValueError("subspace and algebra dimensions differ")
    if s.dim == 0:
        return True
    br = g.bracket_many(np.eye(g.dim), s.basis).reshape(g.dim, -1)
    return all(s.contains(br[:, c], tol) for c in range(br.shape[1]))


def is_abelian_on(g: RealLieAlgebra, s: Subspace, tol: float = 1e-9) -> bool:
    if s.ambient_dim != g.dim:
        raise ValueError("subspace and algebra dimensions differ")
    if s.dim == 0:
        return True
    br = g.bracket_many(s.basis, s.basis)
    return float(np.abs(br).max()) <= tol


def derived_algebra(g: RealLieAlgebra, tol: float = 1e-9) -> Subspace:
    d = g.dim
    iu, ju = np.triu_indices(d, 1)
    vecs = g.f[:, iu, ju]
    return Subspace.span(vecs, d, tol=tol)


def quotient_bracket_norm(g: RealLieAlgebra, a: Subspace) -> float:
    """Size of the bracket induced on ``g / a`` (zero iff the quotient is abelian)."""
    comp = ortho_complement_in(Subspace.full(g.dim), a)
    if comp.dim < 2:
        return 0.0
    br = g.bracket_many(comp.basis, comp.basis).reshape(g.dim, -1)
    res = br - a.basis @ (a.basis.T @ br)
    return float(np.abs(res).max())
