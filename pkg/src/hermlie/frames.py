"""Ideal chains, case splitting, admissible frames and reduced invariants.

All three regimes share the same frame layout: ``e_1`` (and ``e_2`` when
``Ja != a``) come from the two distinguished directions of the abelian
ideal, and the remaining vectors span the largest J-invariant part of it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from hermlie.errors import DegenerateInput, InconsistentInstance, NearDegenerate, PreconditionViolated
from hermlie.hermitian import (
    SQRT2,
    StructureTensors,
    UnitaryFrame,
    compute_CD,
    frame_from_real,
    j_adapted_basis,
)
from hermlie.linalg import commutator, fro, is_nilpotent
from hermlie.liealg import (
    RealLieAlgebra,
    Subspace,
    derived_algebra,
    intersect,
    is_abelian_on,
    is_ideal,
    ortho_complement_in,
    quotient_bracket_norm,
    subspace_sum,
)

NEAR_DEGENERATE = 1.0 - 1e-8
ZERO_TOL = 1e-9


class CaseTag(str, Enum):
    JA_EQUALS_A = "JaEqualsA"
    MAIN = "MainNonabelian"
    ABELIAN_QUOTIENT = "AbelianQuotient"


class JType(str, Enum):
    GENERIC = "generic"
    HALF_GENERIC = "half-generic"
    DEGENERATE = "degenerate"


@dataclass(frozen=True, eq=False)
class IdealChain:
    a: Subspace
    a_J: Subspace
    a_prime: Subspace
    b: Subspace

    @property
    def dims(self):
        return (self.a_J.dim, self.b.dim, self.a.dim, self.a_prime.dim)


@dataclass(frozen=True, eq=False)
class AdmissibleFrame:
    """A unitary frame adapted to the abelian ideal, plus the data it was built from.

    For the ``Ja = a`` case ``y`` is ``None`` and ``delta`` is zero.
    """

    frame: UnitaryFrame
    x: np.ndarray
    y: np.ndarray | None
    delta: float
    delta_prime: float
    case: CaseTag
    algebra: RealLieAlgebra = field(repr=False)
    J: np.ndarray = field(repr=False)
    G: np.ndarray = field(repr=False)
    chain: IdealChain = field(repr=False)
    angle: float | None = None

    @property
    def t(self) -> complex:
        return 1j * self.delta / self.delta_prime

    def structure(self) -> StructureTensors:
        return compute_CD(self.algebra, self.J, self.G, self.frame)


def _as_subspace(a, dim):
    if isinstance(a, Subspace):
        return a
    return Subspace.span(np.asarray(a, dtype=float), dim)


def _J(J):
    return getattr(J, "J", J)


def _G(G):
    return getattr(G, "G", G)


def validate_ideal(g: RealLieAlgebra, a: Subspace, tol: float = 1e-9):
    if a.ambient_dim != g.dim:
        raise PreconditionViolated("ideal lives in a space of the wrong dimension")
    if a.dim != g.dim - 2:
        raise PreconditionViolated(f"ideal has dimension {a.dim}, expected {g.dim - 2}")
    scale = max(1.0, float(np.abs(g.f).max()) if g.f.size else 0.0)
    if not is_abelian_on(g, a, tol * scale):
        raise PreconditionViolated("ideal is not abelian")
    if not is_ideal(g, a):
        raise PreconditionViolated("subspace is not an ideal")


def compute_ideal_chain(g: RealLieAlgebra, J, a, metric=None, check: bool = True) -> IdealChain:
    """``a_J = a & Ja``, ``a' = a + [g,g]`` and ``b = a & J a'``.

    When ``Ja != a`` and ``g/a`` is non-abelian the strict chain
    ``a_J < b < a < a' < g`` is validated, together with ``Jx in a' \\ a``
    for ``x in b \\ a_J``.
    """
    J = _J(J)
    a = _as_subspace(a, g.dim)
    validate_ideal(g, a)
    a_J = intersect(a, a.apply(J))
    a_prime = subspace_sum(a, derived_algebra(g))
    b = intersect(a, a_prime.apply(J))
    chain = IdealChain(a=a, a_J=a_J, a_prime=a_prime, b=b)
    if check and a_J.dim < a.dim and quotient_bracket_norm(g, a) > ZERO_TOL * _scale(g):
        d = g.dim
        if chain.dims != (d - 4, d - 3, d - 2, d - 1):
            raise PreconditionViolated(f"ideal chain has dimensions {chain.dims}, expected {(d - 4, d - 3, d - 2, d - 1)}")
        if not is_ideal(g, a_J):
            raise PreconditionViolated("a & Ja is not an ideal")
        x = ortho_complement_in(b, a_J).basis[:, 0]
        jx = J @ x
        if not a_prime.contains(jx) or a.contains(jx):
            raise PreconditionViolated("J maps b \\ a_J outside a' \\ a")
    return chain


def _scale(g):
    return max(1.0, float(np.abs(g.f).max()) if g.f.size else 0.0)


def case_split(g: RealLieAlgebra, J, a, tol: float = ZERO_TOL) -> CaseTag:
    J = _J(J)
    a = _as_subspace(a, g.dim)
    a_J = intersect(a, a.apply(J))
    if a_J.dim == a.dim:
        return CaseTag.JA_EQUALS_A
    if quotient_bracket_norm(g, a) > tol * _scale(g):
        return CaseTag.MAIN
    return CaseTag.ABELIAN_QUOTIENT


def _sign_fix(v):
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def _g_unit(v, G):
    return v / np.sqrt(v @ G @ v)


def _g_line(s: Subspace, what: str, G):
    if s.dim != 1:
        raise DegenerateInput(f"{what} has dimension {s.dim}, expected 1")
    return _sign_fix(_g_unit(s.basis[:, 0], G))


def _assemble(x, y, J, G, a_J: Subspace):
    delta = float((J @ x) @ G @ y)
    if abs(delta) >= NEAR_DEGENERATE:
        raise NearDegenerate(f"|delta| = {abs(delta):.12f} too close to 1")
    dp = float(np.sqrt(1.0 - delta * delta))
    e1 = (x - 1j * (J @ x)) / SQRT2
    Yv = (y - 1j * (J @ y)) / SQRT2
    e2 = (Yv - 1j * delta * e1) / dp
    rest = j_adapted_basis(J, G, a_J.basis)
    if len(rest) * 2 != a_J.dim:
        raise DegenerateInput("could not complete the frame on a & Ja")
    tail = frame_from_real(rest, J).E
    E = np.column_stack([e1, e2, tail]) if tail.size else np.column_stack([e1, e2])
    return UnitaryFrame(E), delta, dp


def build_admissible_frame_main(g: RealLieAlgebra, J, a, metric) -> AdmissibleFrame:
    J = _J(J)
    G = _G(metric)
    chain = compute_ideal_chain(g, J, a)
    x = _g_line(ortho_complement_in(chain.b, chain.a_J, G), "b & a_J-perp", G)
    y = _g_line(ortho_complement_in(chain.a, chain.b, G), "a & b-perp", G)
    frame, delta, dp = _assemble(x, y, J, G, chain.a_J)
    return AdmissibleFrame(frame, x, y, delta, dp, CaseTag.MAIN, g, J, G, chain)


def build_admissible_frame_A(g: RealLieAlgebra, J, a, metric) -> AdmissibleFrame:
    J = _J(J)
    G = _G(metric)
    a = _as_subspace(a, g.dim)
    validate_ideal(g, a)
    chain = IdealChain(a=a, a_J=a, a_prime=subspace_sum(a, derived_algebra(g)), b=a)
    comp = ortho_complement_in(Subspace.full(g.dim), a, G)
    x = _sign_fix(_g_unit(comp.basis[:, 0], G))
    rest = j_adapted_basis(J, G, a.basis)
    e1 = (x - 1j * (J @ x)) / SQRT2
    cols = [e1] + [(r - 1j * (J @ r)) / SQRT2 for r in rest]
    frame = UnitaryFrame(np.column_stack(cols))
    # rotate e_1 so that D^1_11 = <[conj e_1, e_1], e_1> is real and non-negative
    lam = g.bracket(e1.conj(), e1) @ G @ e1
    if abs(lam) > 1e-14 * _scale(g):
        e1 = e1 * np.exp(-1j * np.angle(lam))
        x = SQRT2 * e1.real
        cols[0] = e1
        frame = UnitaryFrame(np.column_stack(cols))
    return AdmissibleFrame(frame, x, None, 0.0, 1.0, CaseTag.JA_EQUALS_A, g, J, G, chain)


def induced_action(g: RealLieAlgebra, z, basis2, a_J: Subspace):
    """Matrix ``A`` with ``[z, w_r] = sum_s A[r, s] w_s  mod a_J`` for ``w = basis2``."""
    w = np.asarray(basis2)
    full = np.hstack([w, a_J.basis])
    br = np.stack([g.bracket(z, w[:, r]) for r in range(w.shape[1])], axis=1)
    coef, *_ = np.linalg.lstsq(full, br, rcond=None)
    return coef[: w.shape[1]].T


ANGLE_SAMPLES = 16


def _rank(m, scale):
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > 1e-8 * max(scale, 1.0)))


def build_admissible_frame_B(g: RealLieAlgebra, J, a, metric) -> AdmissibleFrame:
    """Admissible frame when ``Ja != a`` and ``g/a`` is abelian.

    ``x`` is the direction of the complement ``V = a & a_J-perp`` on which
    ``ad_{Jx}`` is traceless modulo ``a_J``. When every direction qualifies,
    sixteen equally spaced angles are tried and the one maximizing
    ``rank(Y_1) + rank(Y_2)`` wins, ties going to the smallest angle.
    """
    J = _J(J)
    G = _G(metric)
    a = _as_subspace(a, g.dim)
    validate_ideal(g, a)
    a_J = intersect(a, a.apply(J))
    chain = IdealChain(a=a, a_J=a_J, a_prime=subspace_sum(a, derived_algebra(g)), b=a_J)
    V = ortho_complement_in(a, a_J, G)
    if V.dim != 2:
        raise DegenerateInput(f"complement of a_J in a has dimension {V.dim}, expected 2")
    x0 = _g_unit(V.basis[:, 0], G)
    y0 = V.basis[:, 1] - (x0 @ G @ V.basis[:, 1]) * x0
    y0 = _g_unit(y0, G)
    t0 = np.trace(induced_action(g, J @ x0, np.column_stack([x0, y0]), a_J))
    t1 = np.trace(induced_action(g, J @ y0, np.column_stack([x0, y0]), a_J))
    scale = _scale(g)

    def make(theta):
        c, s = np.cos(theta), np.sin(theta)
        x = _sign_fix(c * x0 + s * y0)
        y = _sign_fix(-s * x0 + c * y0)
        frame, delta, dp = _assemble(x, y, J, G, a_J)
        return AdmissibleFrame(frame, x, y, delta, dp, CaseTag.ABELIAN_QUOTIENT, g, J, G, chain, angle=theta)

    if max(abs(t0), abs(t1)) > ZERO_TOL * scale:
        theta = float(np.arctan2(-t0, t1))
        return make(theta)
    best, best_rank = None, -1
    for k in range(ANGLE_SAMPLES):
        fr = make(np.pi * k / ANGLE_SAMPLES)
        st = fr.structure()
        D1 = st.D[:, :, 0].T[2:, 2:]
        D2 = st.D[:, :, 1].T[2:, 2:]
        r = _rank(D1, scale) + _rank(D2, scale)
        if r > best_rank:
            best, best_rank = fr, r
    return best


def build_admissible_frame(g, J, a, metric, case: CaseTag | None = None) -> AdmissibleFrame:
    if case is None:
        case = case_split(g, J, a)
    if case is CaseTag.JA_EQUALS_A:
        return build_admissible_frame_A(g, J, a, metric)
    if case is CaseTag.MAIN:
        return build_admissible_frame_main(g, J, a, metric)
    return build_admissible_frame_B(g, J, a, metric)


# ---------------------------------------------------------------------------
# reduced data
# ---------------------------------------------------------------------------


def d_blocks(D):
    """``D_alpha[i, j] = D^j_{i alpha}`` for alpha = 1, 2 (0-based 0, 1)."""
    return D[:, :, 0].T, D[:, :, 1].T


@dataclass(frozen=True, eq=False)
class ReducedMain:
    a: float
    b: float
    c: float
    d: float
    a_p: float
    b_p: float
    c_p: float
    d_p: float
    sigma: float
    delta: float
    delta_prime: float
    E1: np.ndarray
    E2: np.ndarray
    V1: np.ndarray
    V2: np.ndarray
    Y1: np.ndarray
    Y2: np.ndarray
    jtype: JType
    residuals: dict

    @property
    def t(self) -> complex:
        return 1j * self.delta / self.delta_prime

    @property
    def kappa(self) -> complex:
        return 1j * self.sigma / (SQRT2 * self.delta_prime)

    def scalars(self) -> dict:
        keys = ("a", "b", "c", "d", "a_p", "b_p", "c_p", "d_p", "sigma", "delta", "delta_prime")
        return {k: float(getattr(self, k)) for k in keys}


@dataclass(frozen=True, eq=False)
class ReducedA:
    lam: float
    v: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray

    def jacobi_residuals(self):
        X, Y, Z, lam = self.X, self.Y, self.Z, self.lam
        Xs = X.conj().T
        r1 = lam * (Xs + Y) + Xs @ Y - Y @ Xs - Z @ Z.conj()
        r2 = lam * Z - (Z @ X.T + Y @ Z)
        return r1, r2

    def jacobi_residual(self) -> float:
        r1, r2 = self.jacobi_residuals()
        return float(max(np.abs(r1).max(initial=0.0), np.abs(r2).max(initial=0.0)))


@dataclass(frozen=True, eq=False)
class ReducedB:
    Ax: np.ndarray
    Ay: np.ndarray
    r0: int
    delta: float
    delta_prime: float
    E1: np.ndarray
    E2: np.ndarray
    V1: np.ndarray
    V2: np.ndarray
    Y1: np.ndarray
    Y2: np.ndarray
    residuals: dict

    @property
    def t(self) -> complex:
        return 1j * self.delta / self.delta_prime

    @property
    def Z1(self):
        return self.Y1 - self.Y1.conj().T

    @property
    def Z2(self):
        return self.Y2 - self.Y2.conj().T + 2 * self.t * self.Y1.conj().T

    def v(self, alpha: int, beta: int):
        """Column ``v^alpha_beta`` (1-based labels)."""
        V = self.V1 if beta == 1 else self.V2
        return V[:, alpha - 1]

    @property
    def abcd(self):
        return {
            "a": float(self.Ax[0, 0]),
            "b": float(self.Ax[0, 1]),
            "c": float(self.Ax[1, 0]),
            "d": float(self.Ax[1, 1]),
            "c_p": float(self.Ay[1, 0]),
            "d_p": float(self.Ay[1, 1]),
        }


def _brackets_mod(fr: AdmissibleFrame):
    """Coefficients of the four brackets of ``Jx, Jy`` with ``x, y`` on ``x, y``."""
    g, J, G, x, y = fr.algebra, fr.J, fr.G, fr.x, fr.y
    jx, jy = J @ x, J @ y

    def co(w):
        return float(w @ G @ x), float(w @ G @ y)

    a, b = co(g.bracket(jx, x))
    c, d = co(g.bracket(jx, y))
    a_p, b_p = co(g.bracket(jy, x))
    c_p, d_p = co(g.bracket(jy, y))
    return a, b, c, d, a_p, b_p, c_p, d_p


def _tensor_scale(st):
    return max(1.0, float(np.abs(st.C).max(initial=0.0)), float(np.abs(st.D).max(initial=0.0)))


def classify_type(b, c, tol) -> JType:
    if abs(b) > tol:
        return JType.GENERIC
    if abs(c) > tol:
        return JType.HALF_GENERIC
    return JType.DEGENERATE


def type_relation_residual(jtype: JType, a, b, c, c_p, d_p, sigma) -> float:
    if jtype is JType.GENERIC:
        res = [c + a * a / b, c_p + (a / b) * (c + sigma), d_p + c + 2 * sigma]
    elif jtype is JType.HALF_GENERIC:
        res = [a, b, d_p - c]
    else:
        res = [a, b, c]
    return float(max(abs(r) for r in res))


def extract_reduced_main(fr: AdmissibleFrame, st: StructureTensors | None = None) -> ReducedMain:
    if st is None:
        st = fr.structure()
    g, J, G = fr.algebra, fr.J, fr.G
    scale = _tensor_scale(st)
    a, b, c, d, a_p, b_p, c_p, d_p = _brackets_mod(fr)
    sigma = float(g.bracket(J @ fr.x, J @ fr.y) @ G @ (J @ fr.x))
    if abs(sigma) <= ZERO_TOL * scale:
        raise InconsistentInstance("sigma vanishes although g/a is non-abelian")
    dp = fr.delta_prime
    D1, D2 = d_blocks(st.D)
    jtype = classify_type(b, c, ZERO_TOL * scale)
    kappa = 1j * sigma / (SQRT2 * dp)
    E1, E2 = D1[:2, :2], D2[:2, :2]
    Y1, Y2 = D1[2:, 2:], D2[2:, 2:]
    V1, V2 = D1[2:, :2], D2[2:, :2]
    residuals = {
        "sigma_from_C12": abs(st.C[0, 0, 1] + 1j * sigma / (SQRT2 * dp)),
        "sigma_from_a_p": abs(a_p - (c - sigma)),
        "abcd1": max(abs(d + a), abs(a * a + b * c), abs(b_p + a)),
        "abcd2": max(abs(b * c_p + a * (c + sigma)), abs(b * d_p - a * a + 2 * b * sigma), abs(2 * a * c_p + c * d_p - c * c)),
        "type_relation": type_relation_residual(jtype, a, b, c, c_p, d_p, sigma),
        "jacobi_E": fro(commutator(E1, E2) - kappa * E1),
        "jacobi_Y": fro(commutator(Y1, Y2) - kappa * Y1) if Y1.size else 0.0,
        "jacobi_V": fro(V1 @ E2 + Y1 @ V2 - V2 @ E1 - Y2 @ V1 - kappa * V1) if V1.size else 0.0,
    }
    return ReducedMain(a, b, c, d, a_p, b_p, c_p, d_p, sigma, fr.delta, dp, E1, E2, V1, V2, Y1, Y2, jtype, residuals)


def extract_reduced_A(fr: AdmissibleFrame, st: StructureTensors | None = None, tol: float = 1e-9) -> ReducedA:
    if st is None:
        st = fr.structure()
    C, D = st.C, st.D
    lam = D[0, 0, 0]
    r = ReducedA(
        lam=float(lam.real),
        v=D[0, 1:, 0].copy(),
        X=C[1:, 0, 1:].T.copy(),
        Y=D[1:, 1:, 0].T.copy(),
        Z=D[0, 1:, 1:].copy(),
    )
    scale = _tensor_scale(st)
    if abs(lam.imag) > tol * scale or r.jacobi_residual() > tol * scale**2:
        raise InconsistentInstance(f"reduced data violates its Jacobi identities (residual {r.jacobi_residual():.2e})")
    return r


def rank_r0(g: RealLieAlgebra, a_J: Subspace) -> int:
    """``dim (g' + a_J) / a_J``."""
    return subspace_sum(derived_algebra(g), a_J).dim - a_J.dim


def extract_reduced_B(fr: AdmissibleFrame, st: StructureTensors | None = None, tol: float = 1e-9) -> ReducedB:
    if st is None:
        st = fr.structure()
    scale = _tensor_scale(st)
    a, b, c, d, a_p, b_p, c_p, d_p = _brackets_mod(fr)
    Ax = np.array([[a, b], [c, d]])
    Ay = np.array([[a_p, b_p], [c_p, d_p]])
    D1, D2 = d_blocks(st.D)
    residuals = {
        "trace_Ax": abs(a + d),
        "Ay_first_row": max(abs(a_p - c), abs(b_p - d)),
        "commuting": float(np.abs(Ax @ Ay - Ay @ Ax).max()),
        "abcd_relations": max(abs(a * c + b * c_p), abs(b * (d_p - c) - 2 * a * a), abs(c * (d_p - c) + 2 * a * c_p)),
    }
    r = ReducedB(
        Ax=Ax,
        Ay=Ay,
        r0=rank_r0(fr.algebra, fr.chain.a_J),
        delta=fr.delta,
        delta_prime=fr.delta_prime,
        E1=D1[:2, :2],
        E2=D2[:2, :2],
        V1=D1[2:, :2],
        V2=D2[2:, :2],
        Y1=D1[2:, 2:],
        Y2=D2[2:, 2:],
        residuals=residuals,
    )
    if max(residuals["commuting"], residuals["Ay_first_row"]) > tol * scale**2:
        raise InconsistentInstance(f"induced actions do not commute (residual {residuals['commuting']:.2e})")
    return r


def main_E_formulas(a, b, c, c_p, d_p, sigma, delta):
    """``E_1, E_2`` predicted from the bracket invariants (``sigma = 0`` gives the abelian-quotient case)."""
    dp = np.sqrt(1 - delta * delta)
    s2 = SQRT2
    D111 = (b * delta + 1j * a) / s2
    D121 = 1j * b * dp / s2
    D211 = (-2 * a * delta + 1j * c + 1j * b * delta**2) / (s2 * dp)
    D221 = -(b * delta + 1j * a) / s2
    D112 = 1j * (c - sigma - b * delta**2) / (s2 * dp)
    D122 = (b * delta - 1j * a) / s2
    D212 = (1j * (c_p + a * delta**2) + delta * (d_p + b * delta**2 + sigma)) / (s2 * dp**2)
    D222 = 1j * (d_p + b * delta**2) / (s2 * dp)
    # E_alpha[i, j] = D^j_{i alpha}
    E1 = np.array([[D111, D211], [D121, D221]])
    E2 = np.array([[D112, D212], [D122, D222]])
    return E1, E2


def vanishing_pattern_residual(st: StructureTensors, delta: float) -> float:
    """Vanishing pattern and C-from-D relations for a frame with ``e_3..e_n`` in ``a_J``."""
    C, D = st.C, st.D
    n = st.n
    if n < 2:
        return 0.0
    dp = np.sqrt(1 - delta * delta)
    t = 1j * delta / dp
    res = [0.0]
    if n > 2:
        res.append(np.abs(C[:, 2:, 2:]).max())  # C^*_{ij}
        res.append(np.abs(D[:, :, 2:]).max())  # D^*_{*i}
        res.append(np.abs(C[:2, :2, 2:]).max())  # C^alpha_{beta i}
        res.append(np.abs(D[2:, :2, :2]).max())  # D^i_{alpha beta}
        # C^*_{1i} = conj D^i_{*1}; C^*_{2i} = conj D^i_{*2} - 2t conj D^i_{*1}
        res.append(np.abs(C[:, 0, 2:] - D[2:, :, 0].T.conj()).max())
        res.append(np.abs(C[:, 1, 2:] - (D[2:, :, 1].T.conj() - 2 * t * D[2:, :, 0].T.conj())).max())
    c12 = D[1, :, 0].conj() - D[0, :, 1].conj() + 2 * t * D[0, :, 0].conj()
    res.append(np.abs(C[:, 0, 1] - c12).max())
    return float(max(res))


def frame_is_deterministic(fr1: AdmissibleFrame, fr2: AdmissibleFrame) -> bool:
    return bool(np.array_equal(fr1.frame.E, fr2.frame.E))


def nilpotency_checks(r: ReducedMain, tol=None):
    kw = {} if tol is None else {"tol": tol}
    return is_nilpotent(r.E1, **kw), is_nilpotent(r.Y1, **kw) if r.Y1.size else True
