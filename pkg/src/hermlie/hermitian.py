"""Complex structures, compatible metrics and unitary-frame structure constants.

Conventions (used consistently across the package):

* ``g^{1,0} = {x - iJx}``; a unitary frame is ``e_k = (x_k - i J x_k)/sqrt(2)``
  with ``{x_k, J x_k}`` orthonormal for the metric ``G``.
* The metric is extended complex-bilinearly, ``<u, v> = u^T G v``.
* ``C[k, i, j] = <[e_i, e_j], conj(e_k)>`` and ``D[j, i, k] = <[conj(e_j), e_k], e_i>``,
  i.e. the upper index comes first in both arrays.
* ``omega(x, y) = G(Jx, y)``, which equals ``i sum_k phi_k ^ conj(phi_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hermlie import forms
from hermlie.errors import DegenerateInput
from hermlie.liealg import RealLieAlgebra

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class ComplexStructure:
    J: np.ndarray

    def __post_init__(self):
        J = np.array(self.J, dtype=float)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % 2:
            raise ValueError("J must be a square matrix of even size")
        if np.abs(J @ J + np.eye(J.shape[0])).max() > 1e-12 * max(1.0, np.abs(J).max() ** 2):
            raise ValueError("J^2 != -I")
        J.setflags(write=False)
        object.__setattr__(self, "J", J)

    @property
    def dim(self):
        return self.J.shape[0]


@dataclass(frozen=True, eq=False)
class HermitianMetric:
    G: np.ndarray

    def __post_init__(self):
        G = np.array(self.G, dtype=float)
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise ValueError("G must be square")
        if np.abs(G - G.T).max() > 1e-12 * max(1.0, np.abs(G).max()):
            raise ValueError("G must be symmetric")
        G = (G + G.T) / 2
        try:
            np.linalg.cholesky(G)
        except np.linalg.LinAlgError:
            raise ValueError("G must be positive definite") from None
        G.setflags(write=False)
        object.__setattr__(self, "G", G)

    def compatibility_defect(self, J) -> float:
        J = _J(J)
        return float(np.abs(J.T @ self.G @ J - self.G).max())

    def is_compatible(self, J, tol=1e-12) -> bool:
        return self.compatibility_defect(J) <= tol * max(1.0, np.abs(self.G).max())


@dataclass(frozen=True, eq=False)
class UnitaryFrame:
    """Columns of ``E`` are the frame vectors ``e_1..e_n`` in complex coordinates."""

    E: np.ndarray

    def __post_init__(self):
        E = np.array(self.E, dtype=complex)
        E.setflags(write=False)
        object.__setattr__(self, "E", E)

    @property
    def n(self):
        return self.E.shape[1]

    def real_basis(self):
        """Real basis ``[x_1, Jx_1, x_2, Jx_2, ...]`` underlying the frame."""
        x = SQRT2 * self.E.real
        jx = -SQRT2 * self.E.imag
        out = np.empty((self.E.shape[0], 2 * self.n))
        out[:, 0::2] = x
        out[:, 1::2] = jx
        return out

    def complex_basis(self):
        """Columns ``e_1..e_n, conj(e_1)..conj(e_n)``."""
        return np.hstack([self.E, self.E.conj()])


@dataclass(frozen=True, eq=False)
class StructureTensors:
    C: np.ndarray
    D: np.ndarray

    @property
    def n(self):
        return self.C.shape[0]


@dataclass(frozen=True, eq=False)
class TorsionTensor:
    T: np.ndarray


def _J(J):
    return J.J if isinstance(J, ComplexStructure) else np.asarray(J, dtype=float)


def _G(metric):
    return metric.G if isinstance(metric, HermitianMetric) else np.asarray(metric, dtype=float)


def nijenhuis_defect(g: RealLieAlgebra, J) -> float:
    """Max norm of ``[x,y] - [Jx,Jy] + J[Jx,y] + J[x,Jy]`` over basis pairs."""
    J = _J(J)
    eye = np.eye(g.dim)
    nij = (
        g.bracket_many(eye, eye)
        - g.bracket_many(J, J)
        + np.einsum("kl,lab->kab", J, g.bracket_many(J, eye))
        + np.einsum("kl,lab->kab", J, g.bracket_many(eye, J))
    )
    if nij.size == 0:
        return 0.0
    return float(np.sqrt((nij**2).sum(axis=0)).max())


def closure_defect(g: RealLieAlgebra, J) -> float:
    """How far ``g^{1,0}`` is from being closed under the bracket."""
    J = _J(J)
    z = np.eye(g.dim) - 1j * J
    br = np.einsum("kij,ia,jb->kab", g.f, z, z)
    p01 = (np.eye(g.dim) + 1j * J) / 2
    res = np.einsum("kl,lab->kab", p01, br)
    if res.size == 0:
        return 0.0
    return float(np.sqrt((np.abs(res) ** 2).sum(axis=0)).max())


def j_adapted_basis(J, G, candidates, tol=1e-9):
    """Real vectors ``x_k`` with ``{x_k, J x_k}`` G-orthonormal.

    ``candidates`` are columns spanning a J-invariant subspace; they are
    processed in order, each reduced against what has been accepted so far.
    """
    J = _J(J)
    G = _G(G)
    cand = np.asarray(candidates, dtype=float)
    chosen = []  # G-orthonormal, closed under J
    xs = []
    for c in range(cand.shape[1]):
        v = cand[:, c].copy()
        n0 = np.sqrt(v @ G @ v)
        for _ in range(2):
            for q in chosen:
                v = v - (q @ G @ v) * q
        nv = np.sqrt(max(v @ G @ v, 0.0))
        if nv <= tol * max(1.0, n0):
            continue
        x = v / nv
        jx = J @ x
        jx = jx - (x @ G @ jx) * x
        jx = jx / np.sqrt(jx @ G @ jx)
        chosen.extend([x, jx])
        xs.append(x)
    return xs


def frame_from_real(xs, J) -> UnitaryFrame:
    J = _J(J)
    X = np.stack([np.asarray(x, dtype=float) for x in xs], axis=1) if len(xs) else np.zeros((J.shape[0], 0))
    return UnitaryFrame((X - 1j * (J @ X)) / SQRT2)


def frame_gram(frame: UnitaryFrame, metric):
    """``<e_i, conj(e_j)>``; the identity for a unitary frame."""
    G = _G(metric)
    return frame.E.T @ G @ frame.E.conj()


def metric_from_frame(frame: UnitaryFrame) -> HermitianMetric:
    """The metric for which ``frame`` is unitary."""
    R = frame.real_basis()
    Rinv = np.linalg.inv(R)
    return HermitianMetric(Rinv.T @ Rinv)


def build_unitary_frame(g: RealLieAlgebra, J, metric, adapted_basis=None) -> UnitaryFrame:
    """A unitary frame of ``g^{1,0}`` for ``metric``.

    Without ``adapted_basis`` the standard basis vectors are J-adapted and
    orthonormalized in order, which is deterministic.
    """
    J = _J(J)
    G = _G(metric)
    n = g.dim // 2
    if adapted_basis is None:
        xs = j_adapted_basis(J, G, np.eye(g.dim))
    else:
        xs = [np.asarray(x, dtype=float) for x in adapted_basis]
    if len(xs) != n:
        raise DegenerateInput(f"expected {n} frame vectors, found {len(xs)}")
    frame = frame_from_real(xs, J)
    err = np.abs(frame_gram(frame, G) - np.eye(n)).max()
    if err > 1e-10:
        raise DegenerateInput(f"frame is not unitary (gram error {err:.2e})")
    return frame


def compute_CD(g: RealLieAlgebra, J, metric, frame: UnitaryFrame) -> StructureTensors:
    G = _G(metric)
    E = frame.E
    Eb = E.conj()
    br_ee = g.bracket_many(E, E)
    C = np.einsum("mij,mp,pk->kij", br_ee, G, Eb)
    br_be = g.bracket_many(Eb, E)
    D = np.einsum("mjk,mp,pi->jik", br_be, G, E)
    return StructureTensors(C, D)


def structure_from_CD(st: StructureTensors):
    """Complex structure constants in the basis ``(e_1..e_n, conj e_1..conj e_n)``."""
    C, D = st.C, st.D
    n = C.shape[0]
    cc = np.zeros((2 * n, 2 * n, 2 * n), dtype=complex)
    cc[:n, :n, :n] = C
    cc[n:, n:, n:] = C.conj()
    # [e_i, conj e_j] = sum_k conj(D[i,k,j]) e_k - D[j,k,i] conj e_k
    mixed_h = D.conj().transpose(1, 0, 2)  # [k, i, j] = conj D[i, k, j]
    mixed_a = -D.transpose(1, 2, 0)  # [k, i, j] = -D[j, k, i]
    cc[:n, :n, n:] = mixed_h
    cc[n:, :n, n:] = mixed_a
    cc[:, n:, :n] = -cc[:, :n, n:].transpose(0, 2, 1)
    return cc


def CD_from_structure(cc) -> StructureTensors:
    n = cc.shape[0] // 2
    C = cc[:n, :n, :n].copy()
    D = cc[n:, n:, :n].transpose(1, 0, 2).copy()  # D[j,i,k] = cc[n+i, n+j, k]
    return StructureTensors(C, D)


def transform_structure(cc, M):
    """Structure constants after the basis change ``e' = e M`` (and conjugate)."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    Mf = np.zeros((2 * n, 2 * n), dtype=complex)
    Mf[:n, :n] = M
    Mf[n:, n:] = M.conj()
    Mi = np.linalg.inv(Mf)
    return np.einsum("cz,zab,ax,by->cxy", Mi, cc, Mf, Mf)


def transform_frame(st: StructureTensors, M) -> StructureTensors:
    """C/D in the frame ``e M`` (unitary for the metric it defines)."""
    return CD_from_structure(transform_structure(structure_from_CD(st), M))


def frame_relation(frame_a: UnitaryFrame, frame_b: UnitaryFrame, metric):
    """``M`` with ``e_b = e_a M``; ``frame_a`` must be unitary for ``metric``."""
    G = _G(metric)
    return frame_a.E.conj().T @ G @ frame_b.E  # M[i,j] = <e_b_j, conj e_a_i>


def cd_reconstruction_residual(g: RealLieAlgebra, frame: UnitaryFrame, st: StructureTensors) -> float:
    """Max deviation between real brackets and the ones rebuilt from C/D."""
    B = frame.complex_basis()
    direct = g.bracket_many(B, B)
    rebuilt = np.einsum("mc,cab->mab", B, structure_from_CD(st))
    return float(np.abs(direct - rebuilt).max()) if direct.size else 0.0


def chern_torsion(st: StructureTensors) -> TorsionTensor:
    C, D = st.C, st.D
    return TorsionTensor(-C - D + D.transpose(0, 2, 1))


def balanced_residuals(st: StructureTensors):
    return np.einsum("kik->i", st.D)


def lee_form(st: StructureTensors):
    """Coefficients ``eta_i = sum_k T^k_{ki}`` of ``d(omega^{n-1}) = -eta ^ omega^{n-1}`` (no unimodularity needed)."""
    return np.einsum("kki->i", chern_torsion(st).T)


def balanced_defect(st: StructureTensors) -> float:
    """``max_i |sum_k D^k_{ik}|``.

    This equals the size of the Lee form only on unimodular algebras; use
    :func:`lee_form` otherwise.
    """
    r = balanced_residuals(st)
    return float(np.abs(r).max()) if r.size else 0.0


def pluriclosed_tensor(st: StructureTensors, T=None):
    """Left-hand side of the pluriclosed condition, indexed ``[i, k, j, l]``."""
    if T is None:
        T = chern_torsion(st).T
    cC = st.C.conj()
    cD = st.D.conj()
    return (
        -np.einsum("rik,rjl->ikjl", T, cC)
        - np.einsum("jir,krl->ikjl", T, cD)
        + np.einsum("jkr,irl->ikjl", T, cD)
        + np.einsum("lir,krj->ikjl", T, cD)
        - np.einsum("lkr,irj->ikjl", T, cD)
    )


def _upper_pairs(n):
    return np.triu_indices(n, 1)


def pluriclosed_residuals(st: StructureTensors):
    P = pluriclosed_tensor(st)
    i, k = _upper_pairs(st.n)
    return P[i, k][:, i, k]


def pluriclosed_defect(st: StructureTensors) -> float:
    r = pluriclosed_residuals(st)
    return float(np.abs(r).max()) if r.size else 0.0


def kahler_defect(st: StructureTensors) -> float:
    T = chern_torsion(st).T
    return float(np.abs(T).max()) if T.size else 0.0


def unimodular_residuals(st: StructureTensors):
    """``sum_r C[r,r,i] + D[r,r,i]``; zero iff the algebra is unimodular."""
    return np.einsum("rri->i", st.C) + np.einsum("rri->i", st.D)


def complex_jacobi_residual(st: StructureTensors) -> float:
    C, D = st.C, st.D
    if C.size == 0:
        return 0.0
    cD = D.conj()
    t = np.einsum("rij,lrk->lijk", C, C)
    f1 = t + t.transpose(0, 2, 3, 1) + t.transpose(0, 3, 1, 2)
    f2 = (
        np.einsum("rik,ljr->lijk", C, D)
        + np.einsum("rji,lrk->lijk", D, D)
        - np.einsum("rjk,lri->lijk", D, D)
    )
    f3 = (
        np.einsum("rik,rjl->ijkl", C, cD)
        - np.einsum("jrk,irl->ijkl", C, cD)
        + np.einsum("jri,krl->ijkl", C, cD)
        - np.einsum("lri,kjr->ijkl", D, cD)
        + np.einsum("lrk,ijr->ijkl", D, cD)
    )
    return float(max(np.abs(f1).max(), np.abs(f2).max(), np.abs(f3).max()))


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg oracle, computed in the basis (e, conj e)
# ---------------------------------------------------------------------------


def complex_structure_tensor(g: RealLieAlgebra, frame: UnitaryFrame):
    """``cc[c, a, b]`` with ``[b_a, b_b] = sum_c cc[c,a,b] b_c`` for ``b = (e, conj e)``.

    Coordinates come from inverting the basis matrix, not from the metric.
    """
    B = frame.complex_basis()
    return np.linalg.solve(B, g.bracket_many(B, B).reshape(B.shape[0], -1)).reshape(
        B.shape[0], B.shape[1], B.shape[1]
    )


def kahler_form(J, metric, frame: UnitaryFrame):
    """``omega(x, y) = G(Jx, y)`` as a 2-form on the complex basis."""
    J = _J(J)
    G = _G(metric)
    B = frame.complex_basis()
    om = B.T @ (J.T @ G) @ B
    return forms.from_tensor(om, 2)


def ce_differential(g, form, degree):
    """Chevalley-Eilenberg differential of a p-form.

    ``g`` is either a :class:`RealLieAlgebra` (forms on the real basis) or a
    structure tensor ``s[c, a, b]``.
    """
    struct = g.f if isinstance(g, RealLieAlgebra) else np.asarray(g)
    return forms.differential(struct, form, degree)


@dataclass(frozen=True)
class OracleReport:
    d_omega: float
    d_omega_n1: float
    ddbar_omega: float
    ddbar_omega_n1: float
    omega_30: float


def ce_oracle(g: RealLieAlgebra, J, metric, frame: UnitaryFrame | None = None) -> OracleReport:
    """Norms of ``d omega``, ``d omega^{n-1}``, ``ddbar omega``, ``ddbar omega^{n-1}``.

    ``omega_30`` is the size of the (3,0)+(0,3) part of ``d omega``, which
    vanishes for integrable ``J``.
    """
    if frame is None:
        frame = build_unitary_frame(g, J, metric)
    n = frame.n
    cc = complex_structure_tensor(g, frame)
    om = kahler_form(J, metric, frame)
    dom = forms.differential(cc, om, 2)
    dbar_om = forms.bidegree_part(dom, n, 1, 2)
    ddbar = forms.bidegree_part(forms.differential(cc, dbar_om, 3), n, 2, 2)
    om_n1 = forms.wedge_power(om, n - 1)
    d_n1 = forms.differential(cc, om_n1, 2 * n - 2)
    dbar_n1 = forms.bidegree_part(d_n1, n, n - 1, n)
    ddbar_n1 = forms.bidegree_part(forms.differential(cc, dbar_n1, 2 * n - 1), n, n, n)
    o30 = max(forms.max_abs(forms.bidegree_part(dom, n, 3, 0)), forms.max_abs(forms.bidegree_part(dom, n, 0, 3)))
    return OracleReport(
        d_omega=forms.max_abs(dom),
        d_omega_n1=forms.max_abs(d_n1),
        ddbar_omega=forms.max_abs(ddbar),
        ddbar_omega_n1=forms.max_abs(ddbar_n1),
        omega_30=o30,
    )


def gauduchon_defect(g: RealLieAlgebra, J, metric) -> float:
    return ce_oracle(g, J, metric).ddbar_omega_n1


def random_compatible_metric(J, rng, spread=0.5) -> HermitianMetric:
    """A random J-compatible metric near the identity-averaged one."""
    J = _J(J)
    d = J.shape[0]
    M = np.eye(d) + spread * rng.standard_normal((d, d))
    S = M.T @ M
    return HermitianMetric((S + J.T @ S @ J) / 2)
