"""Small dense complex/real matrix kernel.

Everything here works on plain numpy arrays; matrices are 2-d arrays and
vectors are 1-d arrays. The Frobenius norm is the matrix norm used
throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from hermlie.errors import DegenerateInput, InvalidFactor


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance pair.

    ``abs_eps`` must be positive; ``rel_eps`` may be zero.
    """

    abs_eps: float = 1e-10
    rel_eps: float = 1e-8

    def __post_init__(self):
        if not self.abs_eps > 0:
            raise ValueError("abs_eps must be positive")
        if self.rel_eps < 0:
            raise ValueError("rel_eps must be non-negative")

    def bound(self, scale: float = 0.0) -> float:
        return self.abs_eps + self.rel_eps * scale


DEFAULT_TOL = Tolerance()


def fro(m) -> float:
    return float(np.linalg.norm(np.asarray(m).ravel()))


def _square(m, name="m"):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def adjoint(m):
    """Conjugate transpose."""
    m = np.asarray(m)
    return m.conj().T


def commutator(a, b):
    """Return ``ab - ba`` for square matrices of equal size."""
    a = _square(a, "a")
    b = _square(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def herm_skew_split(m):
    """Split ``m`` into its Hermitian and skew-Hermitian parts ``(H, S)``."""
    m = _square(m)
    ma = adjoint(m)
    return (m + ma) / 2, (m - ma) / 2


def is_nilpotent(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Decide nilpotency from the k-th power of the normalized matrix.

    With ``k`` the size of ``m``, the test is ``||m^k|| <= abs_eps *
    max(1, ||m||^k)``; it is evaluated on ``m / ||m||`` so no eigenvalues
    are computed and powers cannot overflow. For ``||m|| >= 1`` the decision
    does not depend on the overall scale; smaller matrices are compared
    against ``abs_eps`` directly.
    """
    m = _square(m)
    k = m.shape[0]
    if k == 0:
        return True
    nrm = fro(m)
    if nrm == 0.0:
        return True
    p = np.linalg.matrix_power(m / nrm, k)
    # ||m^k|| / max(1, ||m||^k) <= ||m_hat^k|| with equality when ||m|| >= 1
    scale = nrm**k / max(1.0, nrm**k)
    return fro(p) * scale <= tol.abs_eps


def gram_schmidt_unitary(vectors: Sequence, inner=None, tol: Tolerance = DEFAULT_TOL):
    """Orthonormalize ``vectors`` in order against a Hermitian form.

    ``inner`` is the Hermitian positive definite matrix ``H`` defining
    ``<u, v> = v^* H u``; the identity is used when omitted. Raises
    :class:`DegenerateInput` if some vector has (relative) residual below
    ``tol.abs_eps`` after projecting out its predecessors.
    """
    vecs = [np.asarray(v, dtype=complex) for v in vectors]
    if not vecs:
        return []
    dim = vecs[0].shape[0]
    h = np.eye(dim) if inner is None else np.asarray(inner)

    def ip(u, v):
        return np.vdot(v, h @ u)

    out = []
    for idx, v in enumerate(vecs):
        w = v.copy()
        for _ in range(2):  # second pass for numerical stability
            for q in out:
                w = w - ip(w, q) * q
        n0 = np.sqrt(max(ip(v, v).real, 0.0))
        n1 = np.sqrt(max(ip(w, w).real, 0.0))
        if n1 <= tol.abs_eps * max(1.0, n0):
            raise DegenerateInput(f"vector {idx} is dependent on its predecessors")
        out.append(w / n1)
    return out


def hpd_from_factor(L):
    """Return ``L L^*`` for a lower-triangular ``L`` with positive diagonal."""
    L = _square(L, "L")
    if np.any(np.abs(np.triu(L, 1)) > 0):
        raise InvalidFactor("factor must be lower triangular")
    d = np.diag(L)
    if np.any(np.abs(np.imag(d)) > 0) or np.any(np.real(d) <= 0):
        raise InvalidFactor("factor diagonal must be positive real")
    return L @ adjoint(L)


def null_space(a, rtol: float = 1e-10):
    """Orthonormal basis (columns) of the kernel of ``a``."""
    a = np.atleast_2d(np.asarray(a))
    if a.size == 0:
        return np.eye(a.shape[1], dtype=a.dtype)
    u, s, vh = np.linalg.svd(a)
    top = s[0] if s.size else 0.0
    rank = int(np.sum(s > rtol * max(top, 1.0)))
    return vh[rank:].conj().T
