"""Verifiers for the structural identities and obstructions, Kähler-ization
procedures for the two regimes where both metric classes can coexist, and
the overall verdict on whether a complex structure admits balanced and
pluriclosed metrics.

Residuals stored in a :class:`LemmaReport` are relative: an identity that is
linear in the structure constants is divided by the instance scale ``s``
(``max(1, max |C|, max |D|)``), a quadratic one by ``s**2``. A report passes
when every residual is at most its tolerance and every named boolean check
holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from hermlie.errors import InconsistentInstance, PreconditionViolated, RangeConsistency
from hermlie.frames import (
    CaseTag,
    JType,
    ReducedA,
    ReducedB,
    ReducedMain,
    build_admissible_frame,
    build_admissible_frame_B,
    build_admissible_frame_main,
    case_split,
    compute_ideal_chain,
    extract_reduced_A,
    extract_reduced_B,
    extract_reduced_main,
    vanishing_pattern_residual,
    main_E_formulas,
)
from hermlie.hermitian import (
    SQRT2,
    HermitianMetric,
    StructureTensors,
    UnitaryFrame,
    balanced_defect,
    compute_CD,
    kahler_defect,
    metric_from_frame,
    pluriclosed_defect,
    random_compatible_metric,
    unimodular_residuals,
)
from hermlie.generator import frame_change_matrix_A, frame_change_matrix_B
from hermlie.linalg import commutator, herm_skew_split, is_nilpotent
from hermlie.liealg import RealLieAlgebra, Subspace

DEAD_ZONE = 1e-9


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"


@dataclass
class LemmaReport:
    lemma_id: str
    residuals: dict = field(default_factory=dict)
    status: Status = Status.PASS
    context: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    tol: float = 1e-9

    @property
    def passed(self) -> bool:
        return self.status is not Status.FAIL

    @property
    def verdict(self) -> Status:
        return self.status

    def failures(self):
        out = [k for k, v in self.residuals.items() if not v <= self.tol]
        out += [k for k, v in self.checks.items() if not v]
        return out

    def to_dict(self):
        return {
            "id": self.lemma_id,
            "status": self.status.value,
            "context": dict(self.context),
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "checks": {k: bool(v) for k, v in self.checks.items()},
            "values": dict(self.values),
        }


def _finish(lemma_id, residuals, tol, context, checks=None, values=None) -> LemmaReport:
    rep = LemmaReport(lemma_id, dict(residuals), Status.PASS, dict(context), dict(checks or {}), dict(values or {}), tol)
    if rep.failures():
        rep.status = Status.FAIL
    return rep


def not_applicable(lemma_id, context, reason, tol=1e-9) -> LemmaReport:
    return LemmaReport(lemma_id, {}, Status.NOT_APPLICABLE, dict(context, reason=reason), {}, {}, tol)


def tensor_scale(st: StructureTensors) -> float:
    return max(1.0, float(np.abs(st.C).max(initial=0.0)), float(np.abs(st.D).max(initial=0.0)))


def _max(x) -> float:
    return float(np.abs(np.asarray(x)).max(initial=0.0))


def _ctx(case, r=None):
    ctx = {"case": case.value}
    jt = getattr(r, "jtype", None)
    if jt is not None:
        ctx["type"] = jt.value
    return ctx


def is_unimodular_st(st: StructureTensors, tol=1e-9) -> bool:
    return _max(unimodular_residuals(st)) <= tol * tensor_scale(st)


def is_balanced_st(st, tol=1e-9) -> bool:
    return balanced_defect(st) <= tol * tensor_scale(st)


def is_pluriclosed_st(st, tol=1e-9) -> bool:
    return pluriclosed_defect(st) <= tol * tensor_scale(st) ** 2


def is_kahler_st(st, tol=1e-9) -> bool:
    return kahler_defect(st) <= tol * tensor_scale(st)


# ---------------------------------------------------------------------------
# reduction of an arbitrary (g, J, a, metric)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Reduction:
    case: CaseTag
    frame: object
    structure: StructureTensors
    reduced: object

    @property
    def scale(self):
        return tensor_scale(self.structure)


def reduce(g: RealLieAlgebra, J, a, metric, case: CaseTag | None = None) -> Reduction:
    """Admissible frame, structure tensors and reduced data for one metric."""
    J = getattr(J, "J", J)
    if case is None:
        case = case_split(g, J, a)
    fr = build_admissible_frame(g, J, a, metric, case)
    st = fr.structure()
    if case is CaseTag.MAIN:
        r = extract_reduced_main(fr, st)
    elif case is CaseTag.JA_EQUALS_A:
        r = extract_reduced_A(fr, st)
    else:
        r = extract_reduced_B(fr, st)
    return Reduction(case, fr, st, r)


# ---------------------------------------------------------------------------
# main case: g/a non-abelian, Ja != a
# ---------------------------------------------------------------------------


def verify_unimodular_criterion_main(r: ReducedMain, st: StructureTensors, tol: float = 1e-9) -> LemmaReport:
    """Unimodularity expressed through ``Im tr(Y_2)`` and the bracket invariants.

    The criterion is an equivalence, so the report also checks that it agrees
    with the direct trace test on ``st``.
    """
    s = tensor_scale(st)
    tr2 = np.trace(r.Y2) if r.Y2.size else 0.0
    lhs = tr2 - np.conj(tr2)
    rhs = 1j / (SQRT2 * r.delta_prime) * (2 * r.sigma - r.d_p - r.c)
    res = abs(lhs - rhs) / s
    direct = is_unimodular_st(st, tol)
    return _finish(
        "unimodular-criterion",
        {"trace_criterion": res},
        tol,
        _ctx(CaseTag.MAIN, r),
        checks={"agrees_with_trace_test": (res <= tol) == direct},
        values={"unimodular": direct},
    )


def verify_balanced_characterization_main(r: ReducedMain, st: StructureTensors, tol: float = 1e-9) -> LemmaReport:
    """Consequences of a balanced metric: ``a = c = delta = 0``, ``b in {0, 2 sigma}``."""
    ctx = _ctx(CaseTag.MAIN, r)
    s = tensor_scale(st)
    if not is_balanced_st(st, tol):
        return not_applicable("balanced-characterization", ctx, "metric is not balanced", tol)
    if not is_unimodular_st(st, tol):
        return not_applicable("balanced-characterization", ctx, "algebra is not unimodular", tol)
    v = r.V1[:, 0] + r.V2[:, 1] if r.V1.size else np.zeros(0)
    residuals = {
        "v11_plus_v22": _max(v) / s,
        "a": abs(r.a) / s,
        "c": abs(r.c) / s,
        "delta": abs(r.delta),
        "c_p_plus_a": abs(r.c_p + r.a) / s,
        "d_p_plus_b": abs(r.d_p + r.b) / s,
        "b_times_b_minus_2sigma": abs(r.b * (r.b - 2 * r.sigma)) / s**2,
    }
    if abs(r.b) <= DEAD_ZONE * s:
        outcome = "degenerate with d'=0"
        checks = {"degenerate_type": r.jtype is JType.DEGENERATE, "d_p_zero": abs(r.d_p) <= tol * s}
    else:
        outcome = "generic with sigma*b>0"
        checks = {"generic_type": r.jtype is JType.GENERIC, "sigma_b_positive": r.sigma * r.b > DEAD_ZONE * s**2}
    return _finish("balanced-characterization", residuals, tol, ctx, checks, {"outcome": outcome, "sigma_b": r.sigma * r.b})


def _metric_samples(J, count, seed):
    rng = np.random.default_rng(seed)
    return [random_compatible_metric(J, rng) for _ in range(count)]


def _coords_mod(vec, x, y, a_J: Subspace):
    """Coefficients of ``vec`` on ``x, y`` modulo ``a_J``."""
    basis = np.column_stack([x, y, a_J.basis])
    coef = np.linalg.lstsq(basis, vec, rcond=None)[0]
    return coef[0], coef[1]


def sign_invariant_sigma_b(g: RealLieAlgebra, J, a, metric_samples: int = 100, seed: int = 0, tol: float = 1e-9, metrics=None) -> LemmaReport:
    """The sign of ``sigma * b`` over many compatible metrics on a generic ``J``.

    For each sampled metric the pair ``(x~, y~)`` is expressed in the first
    metric's pair, ``x~ = l1 x + ...``, ``y~ = mu x + l2 y + ...`` modulo
    ``a_J``, and the transformation law ``sigma~ = l2 sigma``,
    ``b~ = l1^2 b / l2`` is checked as a residual.
    """
    J = getattr(J, "J", J)
    ctx = {"case": CaseTag.MAIN.value}
    if metrics is None:
        metrics = _metric_samples(J, metric_samples, seed)
    base = None
    products, law = [], 0.0
    for G in metrics:
        fr = build_admissible_frame_main(g, J, a, G)
        r = extract_reduced_main(fr)
        if base is None:
            base = (fr, r)
            ctx["type"] = r.jtype.value
            if r.jtype is not JType.GENERIC:
                return not_applicable("sigma-b-sign-invariance", ctx, "J is not generic", tol)
        products.append(r.sigma * r.b)
        fr0, r0 = base
        l1, _ = _coords_mod(fr.x, fr0.x, fr0.y, fr0.chain.a_J)
        _, l2 = _coords_mod(fr.y, fr0.x, fr0.y, fr0.chain.a_J)
        scale = max(1.0, abs(r0.sigma), abs(r0.b))
        law = max(law, abs(r.sigma - l2 * r0.sigma) / scale, abs(r.b * l2 - l1 * l1 * r0.b) / scale**2)
    products = np.asarray(products)
    signs = np.sign(products)
    checks = {"nonzero": bool(np.all(np.abs(products) > DEAD_ZONE)), "constant_sign": bool(np.all(signs == signs[0]))}
    values = {"sign": int(signs[0]), "min_abs_sigma_b": float(np.abs(products).min()), "samples": len(products)}
    return _finish("sigma-b-sign-invariance", {"transformation_law": law}, tol, ctx, checks, values)


def derived_action_in_b(g: RealLieAlgebra, a, b: Subspace, tol: float = 1e-9) -> bool:
    """Whether ``[g, a]`` lies in ``b``."""
    a = a if isinstance(a, Subspace) else Subspace.span(np.asarray(a), g.dim)
    br = g.bracket_many(np.eye(g.dim), a.basis).reshape(g.dim, -1)
    scale = max(1.0, float(np.abs(g.f).max(initial=0.0)))
    return all(np.linalg.norm(b.residual(br[:, k])) <= tol * scale for k in range(br.shape[1]))


def dprime_invariant(g: RealLieAlgebra, J, a, metric_samples: int = 100, seed: int = 0, tol: float = 1e-9, metrics=None) -> LemmaReport:
    """Whether ``d' = 0`` holds for all sampled metrics on a degenerate ``J`` or for none.

    The metric-free test ``[g, a] inside b`` must give the same answer.
    """
    J = getattr(J, "J", J)
    ctx = {"case": CaseTag.MAIN.value}
    if metrics is None:
        metrics = _metric_samples(J, metric_samples, seed)
    zeros, dps = [], []
    for G in metrics:
        fr = build_admissible_frame_main(g, J, a, G)
        r = extract_reduced_main(fr)
        if r.jtype is not JType.DEGENERATE:
            ctx["type"] = r.jtype.value
            return not_applicable("d-prime-invariance", ctx, "J is not degenerate", tol)
        s = tensor_scale(fr.structure())
        dps.append(r.d_p)
        zeros.append(abs(r.d_p) <= tol * s)
    ctx["type"] = JType.DEGENERATE.value
    chain = compute_ideal_chain(g, J, a)
    contained = derived_action_in_b(g, chain.a, chain.b, tol)
    checks = {"constant_verdict": all(zeros) or not any(zeros), "agrees_with_containment": zeros[0] == contained}
    values = {"d_prime_zero": bool(zeros[0]), "max_abs_d_prime": float(np.max(np.abs(dps))), "min_abs_d_prime": float(np.min(np.abs(dps)))}
    return _finish("d-prime-invariance", {}, tol, ctx, checks, values)


def _d_entry(E1, E2, alpha, sigma, beta):
    """``D^alpha_{sigma beta}`` (1-based labels) from ``E_beta[s, a] = D^a_{s beta}``."""
    E = E1 if beta == 1 else E2
    return E[sigma - 1, alpha - 1]


def skt2_residual(r, st: StructureTensors | None = None) -> float:
    """Largest entry of the pluriclosed matrix equation on the ``a_J`` block.

    Works for both reduced types (``ReducedMain`` and ``ReducedB``); it is a
    necessary condition for pluriclosedness.
    """
    Y = [r.Y1, r.Y2]
    if Y[0].size == 0:
        return 0.0
    t = 1j * r.delta / r.delta_prime
    Y1s = Y[0].conj().T
    Z = [Y[0] - Y1s, Y[1] - Y[1].conj().T + 2 * t * Y1s]
    out = 0.0
    for al in (1, 2):
        for be in (1, 2):
            right = -Y[be - 1] - (2 * t * Y[0] if be == 2 else 0)
            R = Z[al - 1] @ right + Y[be - 1].conj().T @ Z[al - 1]
            R = R + np.conj(_d_entry(r.E1, r.E2, al, 1, be)) * Z[0] + np.conj(_d_entry(r.E1, r.E2, al, 2, be)) * Z[1]
            out = max(out, _max(R))
    return out


def pluriclosed_obstruction_generic(r: ReducedMain, st: StructureTensors, tol: float = 1e-9) -> LemmaReport:
    """On a pluriclosed metric with generic ``J``: the Hermitian/skew split identity and ``sigma b < 0``.

    ``Y_1 = H_1 + S_1``. The matrix identity and its trace
    ``2 tr(S_1^2) = conj(D^1_{21}) tr(S_2)`` hold for every pluriclosed
    metric; turning the trace into ``2 tr(S_1 S_1^*) = -sigma b`` (and hence
    ``sigma b < 0``) uses unimodularity, so those two items are only
    evaluated on unimodular algebras.
    """
    ctx = _ctx(CaseTag.MAIN, r)
    if r.jtype is not JType.GENERIC:
        return not_applicable("pluriclosed-obstruction-generic", ctx, "J is not generic", tol)
    if not is_pluriclosed_st(st, tol):
        return not_applicable("pluriclosed-obstruction-generic", ctx, "metric is not pluriclosed", tol)
    s = tensor_scale(st)
    t = r.t
    d111 = _d_entry(r.E1, r.E2, 1, 1, 1)
    d121 = _d_entry(r.E1, r.E2, 1, 2, 1)
    residuals = {}
    values = {"sigma_b": r.sigma * r.b}
    checks = {}
    if r.Y1.size:
        H1, S1 = herm_skew_split(r.Y1)
        _, S2 = herm_skew_split(r.Y2)
        hs = commutator(H1, S1) - 2 * S1 @ S1 + np.conj(d111) * S1 + np.conj(d121) * (S2 + t * H1 - t * S1)
        residuals["split_identity"] = _max(hs) / s**2
        residuals["split_trace"] = abs(2 * np.trace(S1 @ S1) - np.conj(d121) * np.trace(S2)) / s**2
        s1_norm = float(np.real(np.trace(S1 @ S1.conj().T)))
    else:
        s1_norm = 0.0
    uni = is_unimodular_st(st, tol)
    values["unimodular"] = uni
    if uni:
        residuals["sigma_b_identity"] = abs(2 * s1_norm + r.sigma * r.b) / s**2
        checks["sigma_b_negative"] = r.sigma * r.b < -DEAD_ZONE * s**2
    return _finish("pluriclosed-obstruction-generic", residuals, tol, ctx, checks, values)


def pluriclosed_obstruction_degenerate(r: ReducedMain, st: StructureTensors, tol: float = 1e-9) -> LemmaReport:
    """On a pluriclosed metric with degenerate ``J``: ``S_1 = Y_1 = 0`` and ``d' != 0``."""
    ctx = _ctx(CaseTag.MAIN, r)
    if r.jtype is not JType.DEGENERATE:
        return not_applicable("pluriclosed-obstruction-degenerate", ctx, "J is not degenerate", tol)
    if not is_pluriclosed_st(st, tol):
        return not_applicable("pluriclosed-obstruction-degenerate", ctx, "metric is not pluriclosed", tol)
    s = tensor_scale(st)
    residuals = {}
    if r.Y1.size:
        _, S1 = herm_skew_split(r.Y1)
        residuals["S1"] = _max(S1) / s
        residuals["Y1"] = _max(r.Y1) / s
    uni = is_unimodular_st(st, tol)
    checks = {"d_prime_nonzero": abs(r.d_p) > DEAD_ZONE * s} if uni else {}
    return _finish("pluriclosed-obstruction-degenerate", residuals, tol, ctx, checks, {"d_prime": r.d_p, "unimodular": uni})


def main_structure_report(r: ReducedMain, st: StructureTensors, tol: float = 1e-9) -> LemmaReport:
    """Vanishing pattern, bracket constants, entry formulas and matrix Jacobi identities."""
    s = tensor_scale(st)
    E1p, E2p = main_E_formulas(r.a, r.b, r.c, r.c_p, r.d_p, r.sigma, r.delta)
    residuals = {
        "vanishing_pattern": vanishing_pattern_residual(st, r.delta) / s,
        "C1_12": abs(st.C[0, 0, 1] + 1j * r.sigma / (SQRT2 * r.delta_prime)) / s,
        "C2_12": abs(st.C[1, 0, 1]) / s,
        "entry_formulas": max(_max(E1p - r.E1), _max(E2p - r.E2)) / s,
    }
    for k, v in r.residuals.items():
        residuals[k] = v / (s if k in ("sigma_from_C12", "sigma_from_a_p", "type_relation") else s**2)
    checks = {"E1_nilpotent": is_nilpotent(r.E1), "Y1_nilpotent": is_nilpotent(r.Y1) if r.Y1.size else True}
    return _finish("structure-main", residuals, tol, _ctx(CaseTag.MAIN, r), checks, dict(r.scalars(), type=r.jtype.value))


# ---------------------------------------------------------------------------
# Ja = a
# ---------------------------------------------------------------------------


def characterize_A(r: ReducedA, tol: float = 1e-9) -> LemmaReport:
    """The unimodular, Kähler, balanced and pluriclosed conditions on ``(lambda, v, X, Y, Z)``.

    Each condition's residual is reported under ``values``; the booleans
    under ``values['rows']`` say which conditions hold. The report itself
    checks only the Jacobi identities of the reduced data.
    """
    lam, v, X, Y, Z = r.lam, r.v, r.X, r.Y, r.Z
    s = max(1.0, abs(lam), _max(v), _max(X), _max(Y), _max(Z))
    B = Y - X
    Xs = X.conj().T
    rows = {
        "unimodular": abs(lam - np.trace(X) + np.trace(Y)) / s,
        "kahler": max(_max(v), _max(X - Y), _max(Z.T - Z)) / s,
        "balanced": max(_max(v), abs(np.trace(X) - np.trace(Y))) / s,
        "pluriclosed": _max(lam * B + B.conj().T @ B + Xs @ B - B @ Xs + Z.T @ Z.conj() - Z @ Z.conj()) / s**2,
    }
    values = {f"{k}_residual": float(v) for k, v in rows.items()}
    values["rows"] = {k: bool(v <= tol) for k, v in rows.items()}
    return _finish("characterization-A", {"jacobi": r.jacobi_residual() / s**2}, tol, {"case": CaseTag.JA_EQUALS_A.value}, {}, values)


def frame_change_A(r: ReducedA, p: float, P, a_vec) -> ReducedA:
    """Reduced data in the frame ``e~_1 = p e_1 + sum a_k e_k``, ``e~_i = p_i e_i``."""
    P = np.asarray(P, dtype=float).ravel()
    if not p > 0 or np.any(~(P > 0)):
        raise PreconditionViolated("frame change needs positive scalings p and P")
    a_vec = np.asarray(a_vec, dtype=complex).ravel()
    Pm, Pi = np.diag(P), np.diag(1 / P)
    ac = a_vec.conj()
    return ReducedA(
        lam=p * r.lam,
        v=p * Pi @ (p * r.v - r.lam * ac + r.Y @ ac + r.Z @ a_vec),
        X=p * Pm @ r.X @ Pi,
        Y=p * Pi @ r.Y @ Pm,
        Z=p * Pm @ r.Z @ Pi,
    )


def reduced_A_in_frame(g, J, frame: UnitaryFrame) -> ReducedA:
    """Read ``(lambda, v, X, Y, Z)`` from a frame of the same shape as an admissible one."""
    G = metric_from_frame(frame)
    st = compute_CD(g, getattr(J, "J", J), G, frame)
    C, D = st.C, st.D
    return ReducedA(float(D[0, 0, 0].real), D[0, 1:, 0].copy(), C[1:, 0, 1:].T.copy(), D[1:, 1:, 0].T.copy(), D[0, 1:, 1:].copy())


@dataclass(frozen=True, eq=False)
class KahlerizeResult:
    metric: HermitianMetric
    frame: UnitaryFrame
    kahler_defect: float
    consistency_residual: float
    shift: dict


def _check_kahler(g, J, frame, tol):
    G = metric_from_frame(frame)
    st = compute_CD(g, J, G, frame)
    kd = kahler_defect(st)
    if kd > tol * tensor_scale(st):
        raise InconsistentInstance(f"Kähler-ization produced a metric with Kähler defect {kd:.2e}")
    return G, kd


def kahlerize_A(g: RealLieAlgebra, J, a, pluriclosed_metric, balanced_metric, tol: float = 1e-9) -> KahlerizeResult:
    """Turn a pluriclosed metric into a Kähler one, given a balanced metric on the same ``(g, J)``.

    With the balanced metric present the pluriclosed data has ``lambda = 0``,
    ``Z = 0`` and ``X = Y``, and ``v`` lies in the range of ``Y``; shifting
    ``e_1`` by ``sum a_k e_k`` with ``Y conj(a) = -v`` removes ``v``.
    """
    J = getattr(J, "J", J)
    if case_split(g, J, a) is not CaseTag.JA_EQUALS_A:
        raise PreconditionViolated("Kähler-ization of this kind needs Ja = a")
    red_b = reduce(g, J, a, balanced_metric, CaseTag.JA_EQUALS_A)
    if not is_balanced_st(red_b.structure, tol):
        raise PreconditionViolated("the evidence metric is not balanced")
    red = reduce(g, J, a, pluriclosed_metric, CaseTag.JA_EQUALS_A)
    st, r = red.structure, red.reduced
    if not is_pluriclosed_st(st, tol):
        raise PreconditionViolated("the given metric is not pluriclosed")
    s = red.scale
    forced = max(abs(r.lam), _max(r.Z), _max(r.X - r.Y)) / s
    if forced > tol:
        raise PreconditionViolated(f"pluriclosed data does not satisfy lambda = 0, Z = 0, X = Y (residual {forced:.2e})")
    ac, *_ = np.linalg.lstsq(r.Y, -r.v, rcond=None)
    cons = _max(r.Y @ ac + r.v) / s
    if cons > tol:
        raise RangeConsistency(f"v is not in the range of Y (residual {cons:.2e})")
    a_vec = ac.conj()
    M = frame_change_matrix_A(1.0, np.ones(r.v.size), a_vec)
    frame = UnitaryFrame(red.frame.frame.E @ M)
    G, kd = _check_kahler(g, J, frame, tol)
    return KahlerizeResult(G, frame, kd, cons, {"a": a_vec})


# ---------------------------------------------------------------------------
# Ja != a, g/a abelian
# ---------------------------------------------------------------------------


def _v_blocks(r: ReducedB):
    return r.V1[:, 0], r.V1[:, 1], r.V2[:, 0], r.V2[:, 1]  # v11, v21, v12, v22


def range_sum_basis(Y1, Y2, tol=1e-9):
    """Orthonormal basis of ``range(Y_1) + range(Y_2)`` (columns)."""
    m = Y1.shape[0]
    if m == 0:
        return np.zeros((0, 0), dtype=complex)
    U, sv, _ = np.linalg.svd(np.hstack([Y1, Y2]))
    scale = max(1.0, sv[0] if sv.size else 0.0)
    k = int(np.sum(sv > tol * scale))
    return U[:, :k]


def abelian_quotient_suite(r: ReducedB, st: StructureTensors, tol: float = 1e-9) -> LemmaReport:
    """Identities and metric-class consequences when ``g/a`` is abelian and ``Ja != a``."""
    s = tensor_scale(st)
    ab = r.abcd
    a, b, c, c_p, d_p = ab["a"], ab["b"], ab["c"], ab["c_p"], ab["d_p"]
    E1p, E2p = main_E_formulas(a, b, c, c_p, d_p, 0.0, r.delta)
    residuals = {
        "vanishing_pattern": vanishing_pattern_residual(st, r.delta) / s,
        "C12": _max(st.C[:2, 0, 1]) / s,
        "entry_formulas": max(_max(E1p - r.E1), _max(E2p - r.E2)) / s,
        "trace_Ax": r.residuals["trace_Ax"] / s,
        "Ay_first_row": r.residuals["Ay_first_row"] / s,
        "commuting": r.residuals["commuting"] / s**2,
        "abcd": r.residuals["abcd_relations"] / s**2,
    }
    checks = {}
    det_ax = float(np.linalg.det(r.Ax))
    values = {"r0": r.r0, "det_Ax": det_ax, **ab}
    uni = is_unimodular_st(st, tol)
    values["unimodular"] = uni
    v11, v21, v12, v22 = _v_blocks(r)
    Z1, Z2 = r.Z1, r.Z2
    if uni:
        tz2 = np.trace(Z2) if Z2.size else 0.0
        residuals["unimodular_traces"] = max(abs(np.trace(Z1)) if Z1.size else 0.0, abs(tz2 + 1j * (c + d_p) / (SQRT2 * r.delta_prime))) / s
    kahler = is_kahler_st(st, tol)
    kahler_pred = max(_max(Z1), _max(Z2), _max(r.V1), _max(r.V2)) <= tol * s and r.r0 == 0
    checks["kahler_characterization"] = kahler == kahler_pred
    values["kahler"] = kahler
    if uni and is_balanced_st(st, tol):
        values["balanced"] = True
        residuals.update(
            {
                "balanced_v": _max(v11 + v22) / s,
                "balanced_a": abs(a) / s,
                "balanced_c_p": abs(c_p) / s,
                "balanced_c": abs(c + b) / s,
                "balanced_d": abs(r.Ax[1, 1]) / s,
                "balanced_d_p": abs(d_p + b) / s,
            }
        )
        checks["balanced_rank"] = r.r0 in (0, 2)
        if r.r0 == 2:
            checks["balanced_det_positive"] = det_ax > DEAD_ZONE * s**2
    if is_pluriclosed_st(st, tol):
        values["pluriclosed"] = True
        residuals["skt_matrix"] = skt2_residual(r, st) / s**2
        if uni:
            z1n = float(np.real(np.trace(Z1 @ Z1.conj().T))) if Z1.size else 0.0
            residuals["det_trace_identity"] = abs(-2 * det_ax - 2 * z1n) / s**2
            checks["pluriclosed_det_nonpositive"] = det_ax <= DEAD_ZONE * s**2
        if r.r0 == 0 and uni:
            t = r.t
            Y1, Y2 = r.Y1, r.Y2
            residuals["Z1"] = _max(Z1) / s
            residuals["Z2"] = _max(Z2) / s
            if Y1.size:
                residuals["commuting_Y"] = _max(commutator(Y1, Y2)) / s**2
                residuals["v_compatibility"] = max(_max(Y1 @ v12 - Y2 @ v11), _max(Y1 @ v22 - Y2 @ v21)) / s**2
                residuals["skt_vY"] = max(_max(Y1.conj().T @ v21 - Y2.conj().T @ v11), _max(Y1.conj().T @ v22 - Y2.conj().T @ v12)) / s**2
            skt_v = np.vdot(v21, v21).real + np.vdot(v12, v12).real + np.vdot(v21 - v12 - 2 * t * v11, v21 - v12 - 2 * t * v11).real
            skt_v -= 2 * np.real(np.vdot(v22, v11))
            residuals["skt_v"] = abs(skt_v) / s**2
    return _finish("structure-abelian-quotient", residuals, tol, {"case": CaseTag.ABELIAN_QUOTIENT.value}, checks, values)


def delta_after_frame_change(delta, p1, p2, mu):
    """Angle invariant of the new admissible frame after the two-vector frame change."""
    dp = np.sqrt(1 - delta * delta)
    ratio = (p2 * delta / dp - np.imag(mu)) / p1
    return float(ratio / np.sqrt(1 + ratio * ratio))


def frame_change_B(r: ReducedB, p, mu=0.0, a_vec=None, b_vec=None) -> ReducedB:
    """Reduced data in the frame ``e~_1 = p_1 e_1 + sum a_k e_k``,
    ``e~_2 = mu e_1 + p_2 e_2 + sum b_k e_k``, ``e~_i = p_i e_i``.

    The transformation rules assume ``r0 = 0`` (all ``D^beta_{alpha gamma}``
    vanish), which is the only situation they are used in.
    """
    p = np.asarray(p, dtype=float).ravel()
    if np.any(~(p > 0)):
        raise PreconditionViolated("frame change needs positive scalings p_i")
    if r.r0 != 0:
        raise PreconditionViolated("the two-vector frame change rules hold for r0 = 0 only")
    m = r.Y1.shape[0]
    if p.size != m + 2:
        raise ValueError(f"expected {m + 2} scalings, got {p.size}")
    a_vec = np.zeros(m, dtype=complex) if a_vec is None else np.asarray(a_vec, dtype=complex)
    b_vec = np.zeros(m, dtype=complex) if b_vec is None else np.asarray(b_vec, dtype=complex)
    p1, p2 = p[0], p[1]
    Pm, Pi = np.diag(p[2:]), np.diag(1 / p[2:])
    Y1, Y2 = r.Y1, r.Y2
    v11, v21, v12, v22 = _v_blocks(r)
    ac, bc = a_vec.conj(), b_vec.conj()
    mc = np.conj(mu)
    Y1t = Pi @ (p1 * Y1) @ Pm
    Y2t = Pi @ (mu * Y1 + p2 * Y2) @ Pm
    v11t = Pi @ (p1**2 * v11 + p1 * Y1 @ ac)
    v21t = Pi @ (p1 * p2 * v21 + p1 * mc * v11 + p1 * Y1 @ bc)
    v12t = Pi @ (p1 * p2 * v12 + p1 * mu * v11 + (mu * Y1 + p2 * Y2) @ ac)
    v22t = Pi @ (p2**2 * v22 + p2 * mu * v21 + p2 * mc * v12 + abs(mu) ** 2 * v11 + (mu * Y1 + p2 * Y2) @ bc)
    delta = delta_after_frame_change(r.delta, p1, p2, mu)
    zeros = np.zeros((2, 2), dtype=complex)
    return ReducedB(
        Ax=np.zeros((2, 2)),
        Ay=np.zeros((2, 2)),
        r0=0,
        delta=delta,
        delta_prime=float(np.sqrt(1 - delta * delta)),
        E1=zeros,
        E2=zeros.copy(),
        V1=np.column_stack([v11t, v21t]) if m else np.zeros((0, 2), dtype=complex),
        V2=np.column_stack([v12t, v22t]) if m else np.zeros((0, 2), dtype=complex),
        Y1=Y1t,
        Y2=Y2t,
        residuals=dict(r.residuals),
    )


def reduced_B_blocks_in_frame(g, J, frame: UnitaryFrame):
    """``(Y_1, Y_2, V_1, V_2)`` read from a frame of the admissible shape."""
    G = metric_from_frame(frame)
    st = compute_CD(g, getattr(J, "J", J), G, frame)
    D1, D2 = st.D[:, :, 0].T, st.D[:, :, 1].T
    return D1[2:, 2:], D2[2:, 2:], D1[2:, :2], D2[2:, :2], st


def kahlerize_B(g: RealLieAlgebra, J, a, pluriclosed_metric, balanced_metric, tol: float = 1e-9) -> KahlerizeResult:
    """Turn a pluriclosed metric into a Kähler one when ``g/a`` is abelian and ``r0 = 0``.

    The balanced metric forces every ``v^alpha_beta`` of the pluriclosed data
    into ``W = range(Y_1) + range(Y_2)``; shifting ``e_1, e_2`` by vectors
    solving ``Y_1 conj(a) = -v^1_1`` and ``Y_1 conj(b) = -v^2_1`` on ``W``
    then removes all of them.
    """
    J = getattr(J, "J", J)
    if case_split(g, J, a) is not CaseTag.ABELIAN_QUOTIENT:
        raise PreconditionViolated("this Kähler-ization needs Ja != a with g/a abelian")
    red_b = reduce(g, J, a, balanced_metric, CaseTag.ABELIAN_QUOTIENT)
    if not is_balanced_st(red_b.structure, tol):
        raise PreconditionViolated("the evidence metric is not balanced")
    red = reduce(g, J, a, pluriclosed_metric, CaseTag.ABELIAN_QUOTIENT)
    st, r = red.structure, red.reduced
    if r.r0 != 0:
        raise PreconditionViolated(f"rank r0 = {r.r0}; a balanced and a pluriclosed metric can only coexist for r0 = 0")
    if not is_pluriclosed_st(st, tol):
        raise PreconditionViolated("the given metric is not pluriclosed")
    s = red.scale
    Y1, Y2 = r.Y1, r.Y2
    m = Y1.shape[0]
    v11, v21, v12, v22 = _v_blocks(r)
    W = range_sum_basis(Y1, Y2, tol)
    perp = 0.0
    for v in (v11, v21, v12, v22):
        perp = max(perp, _max(v - W @ (W.conj().T @ v)) if m else 0.0)
    perp /= s
    if perp > tol:
        raise RangeConsistency(f"v has a component outside range(Y_1) + range(Y_2) (size {perp:.2e})")
    if m:
        ac, *_ = np.linalg.lstsq(Y1, -v11, rcond=None)
        bc, *_ = np.linalg.lstsq(Y1, -v21, rcond=None)
        cons = max(_max(Y1 @ ac + v11), _max(Y1 @ bc + v21)) / s
    else:
        ac = bc = np.zeros(0, dtype=complex)
        cons = 0.0
    if cons > tol:
        raise RangeConsistency(f"Y_1 does not reach v on W (residual {cons:.2e})")
    a_vec, b_vec = ac.conj(), bc.conj()
    M = frame_change_matrix_B(np.ones(m + 2), 0.0, a_vec, b_vec)
    frame = UnitaryFrame(red.frame.frame.E @ M)
    G, kd = _check_kahler(g, J, frame, tol)
    return KahlerizeResult(G, frame, kd, max(cons, perp), {"a": a_vec, "b": b_vec})


def det_ax_sign_invariant(g: RealLieAlgebra, J, a, metric_samples: int = 100, seed: int = 0, tol: float = 1e-9, metrics=None) -> LemmaReport:
    """For ``r0 = 2``, the sign of ``det(A_x)`` over many compatible metrics."""
    J = getattr(J, "J", J)
    ctx = {"case": CaseTag.ABELIAN_QUOTIENT.value}
    if metrics is None:
        metrics = _metric_samples(J, metric_samples, seed)
    dets = []
    for G in metrics:
        fr = build_admissible_frame_B(g, J, a, G)
        r = extract_reduced_B(fr)
        if r.r0 != 2:
            return not_applicable("det-Ax-sign-invariance", dict(ctx, r0=r.r0), "rank r0 is not 2", tol)
        dets.append(np.linalg.det(r.Ax))
    dets = np.asarray(dets)
    signs = np.sign(dets)
    checks = {"nonzero": bool(np.all(np.abs(dets) > DEAD_ZONE)), "constant_sign": bool(np.all(signs == signs[0]))}
    return _finish("det-Ax-sign-invariance", {}, tol, ctx, checks, {"sign": int(signs[0]), "samples": len(dets)})


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

SUITES = ("structure", "unimodular", "balanced", "pluriclosed", "skt2", "characterization")


def lemma_suite(g: RealLieAlgebra, J, a, metric, tol: float = 1e-9, suites=None) -> list:
    """All checks applicable to one ``(g, J, a, metric)``; ``suites`` filters by name."""
    wanted = set(SUITES if suites is None else suites)
    unknown = wanted - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(sorted(unknown))}")
    red = reduce(g, J, a, metric)
    st, r, case = red.structure, red.reduced, red.case
    s = red.scale
    out = []
    if case is CaseTag.MAIN:
        if "structure" in wanted:
            out.append(main_structure_report(r, st, tol))
        if "unimodular" in wanted and is_unimodular_st(st, tol):
            out.append(verify_unimodular_criterion_main(r, st, tol))
        if "balanced" in wanted:
            out.append(verify_balanced_characterization_main(r, st, tol))
        if "pluriclosed" in wanted:
            out.append(pluriclosed_obstruction_generic(r, st, tol))
            out.append(pluriclosed_obstruction_degenerate(r, st, tol))
    elif case is CaseTag.JA_EQUALS_A:
        if "structure" in wanted or "characterization" in wanted:
            rep = characterize_A(r, tol)
            rows = rep.values["rows"]
            rep.checks.update(
                {
                    "balanced_row_matches_defect": (not is_unimodular_st(st, tol)) or rows["balanced"] == is_balanced_st(st, tol),
                    "pluriclosed_row_matches_defect": rows["pluriclosed"] == is_pluriclosed_st(st, tol),
                    "kahler_row_matches_defect": rows["kahler"] == is_kahler_st(st, tol),
                    "unimodular_row_matches_traces": rows["unimodular"] == is_unimodular_st(st, tol),
                }
            )
            rep.residuals["vanishing_pattern"] = _a_vanishing(st) / s
            rep.status = Status.FAIL if rep.failures() else Status.PASS
            out.append(rep)
    else:
        if wanted & {"structure", "unimodular", "balanced", "pluriclosed"}:
            out.append(abelian_quotient_suite(r, st, tol))
    if "skt2" in wanted and case is not CaseTag.JA_EQUALS_A:
        ctx = _ctx(case, r)
        if is_pluriclosed_st(st, tol):
            out.append(_finish("skt-matrix-equation", {"skt2": skt2_residual(r, st) / s**2}, tol, ctx))
        else:
            out.append(not_applicable("skt-matrix-equation", ctx, "metric is not pluriclosed", tol))
    return out


def _a_vanishing(st: StructureTensors) -> float:
    """Entries that must vanish in an admissible frame when ``Ja = a``."""
    C, D = st.C, st.D
    mask_c = np.ones(C.shape, dtype=bool)
    mask_c[1:, 0, 1:] = False
    mask_c[1:, 1:, 0] = False
    mask_d = np.ones(D.shape, dtype=bool)
    mask_d[0, 0, 0] = False
    mask_d[1:, 1:, 0] = False
    mask_d[0, 1:, 1:] = False
    mask_d[0, 1:, 0] = False
    return max(_max(C[mask_c]), _max(D[mask_d]))


# ---------------------------------------------------------------------------
# verdict
# ---------------------------------------------------------------------------


class Answer(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass
class Verdict:
    admits_balanced: Answer
    admits_pluriclosed: Answer
    balanced_metric: HermitianMetric | None = None
    pluriclosed_metric: HermitianMetric | None = None
    kahler_witness: HermitianMetric | None = None
    obstructions: list = field(default_factory=list)
    floors: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "admits_balanced": self.admits_balanced.value,
            "admits_pluriclosed": self.admits_pluriclosed.value,
            "kahler_witness": self.kahler_witness is not None,
            "obstructions": list(self.obstructions),
            "floors": {k: float(v) for k, v in self.floors.items()},
        }


def _type_obstructions(g, J, a, case):
    """Metric-independent reasons excluding each class (from the reference metric's invariants)."""
    G = np.eye(g.dim)
    G = (G + J.T @ G @ J) / 2
    red = reduce(g, J, a, G, case)
    r, s = red.reduced, red.scale
    no_bal, no_pl = [], []
    if case is CaseTag.MAIN:
        if r.jtype is JType.HALF_GENERIC:
            no_bal.append("half-generic J carries no balanced metric")
        elif r.jtype is JType.GENERIC:
            sb = r.sigma * r.b
            if sb < -DEAD_ZONE * s**2:
                no_bal.append("generic J with sigma*b < 0 carries no balanced metric")
            elif sb > DEAD_ZONE * s**2:
                no_pl.append("generic J with sigma*b > 0 carries no pluriclosed metric")
        else:
            if abs(r.d_p) > DEAD_ZONE * s:
                no_bal.append("degenerate J with d' != 0 carries no balanced metric")
            else:
                no_pl.append("degenerate J with d' = 0 carries no pluriclosed metric")
    elif case is CaseTag.ABELIAN_QUOTIENT:
        if r.r0 == 1:
            no_bal.append("rank r0 = 1 carries no balanced metric")
        elif r.r0 == 2:
            det = float(np.linalg.det(r.Ax))
            if det > DEAD_ZONE * s**2:
                no_pl.append("r0 = 2 with det(A_x) > 0 carries no pluriclosed metric")
            elif det < -DEAD_ZONE * s**2:
                no_bal.append("r0 = 2 with det(A_x) < 0 carries no balanced metric")
    return no_bal, no_pl


def fino_vezzoni_verdict(g: RealLieAlgebra, J, a, search_budget=None, tol: float = 1e-9) -> Verdict:
    """Decide, as far as search and the obstructions allow, which metric classes ``(g, J)`` admits.

    Obstructions only apply to unimodular algebras. When both classes are
    found in a regime where that forces a Kähler metric, the matching
    Kähler-ization is run and its output attached. Finding both in the
    main regime raises :class:`InconsistentInstance`.
    """
    from hermlie.generator import Instance
    from hermlie.hermitian import ComplexStructure
    from hermlie.metricsearch import SearchConfig, minimize

    J = getattr(J, "J", J)
    a = a if isinstance(a, Subspace) else Subspace.span(np.asarray(a), g.dim)
    case = case_split(g, J, a)
    if float(np.abs(g.f).max(initial=0.0)) == 0.0:
        G = np.eye(g.dim)
        m = HermitianMetric((G + J.T @ G @ J) / 2)
        return Verdict(Answer.YES, Answer.YES, m, m, m, ["abelian algebra: every compatible metric is Kähler"])
    base_G = HermitianMetric((np.eye(g.dim) + J.T @ J) / 2)
    inst = Instance(g, ComplexStructure(J), base_G, a)
    st0 = reduce(g, J, a, base_G, case).structure
    unimodular = is_unimodular_st(st0, tol)
    no_bal, no_pl = _type_obstructions(g, J, a, case) if unimodular else ([], [])
    budget = dict(search_budget or {})
    found, floors = {}, {}
    for which, blocked in (("balanced", no_bal), ("pluriclosed", no_pl)):
        if which == "balanced" and not unimodular:
            continue
        cfg = SearchConfig(objective=which, **budget)
        rep = minimize(inst, cfg)
        floors[which] = rep.floor
        if rep.witness is not None:
            if blocked:
                raise InconsistentInstance(f"search found a {which} metric although: {blocked[0]}")
            found[which] = rep.witness
    ans_b = Answer.YES if "balanced" in found else (Answer.NO if no_bal else Answer.UNKNOWN)
    ans_p = Answer.YES if "pluriclosed" in found else (Answer.NO if no_pl else Answer.UNKNOWN)
    v = Verdict(ans_b, ans_p, found.get("balanced"), found.get("pluriclosed"), None, no_bal + no_pl, floors)
    if ans_b is Answer.YES and ans_p is Answer.YES:
        if case is CaseTag.MAIN:
            raise InconsistentInstance("balanced and pluriclosed metrics both found with g/a non-abelian and Ja != a")
        fn = kahlerize_A if case is CaseTag.JA_EQUALS_A else kahlerize_B
        v.kahler_witness = fn(g, J, a, found["pluriclosed"], found["balanced"], tol=max(tol, 1e-8)).metric
    return v
