"""Seeded construction of Hermitian Lie algebras with a codimension-2 abelian ideal.

Instances are assembled in a unitary frame from reduced data, turned into
real structure constants on the standard basis (``G = I``, ``J`` the block
rotation ``u_{2k-1} -> u_{2k}``) and finally moved to a random,
well-conditioned real basis so that nothing downstream can rely on the
coordinates being adapted.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from types import SimpleNamespace

import numpy as np

from hermlie.errors import GenerationFailed, InconsistentInstance
from hermlie.frames import CaseTag, JType, main_E_formulas
from hermlie.hermitian import (
    SQRT2,
    ComplexStructure,
    HermitianMetric,
    StructureTensors,
    UnitaryFrame,
    balanced_residuals,
    chern_torsion,
    metric_from_frame,
    pluriclosed_defect,
    pluriclosed_residuals,
    structure_from_CD,
    transform_frame,
    unimodular_residuals,
)
from hermlie.liealg import RealLieAlgebra, Subspace, jacobi_defect
from hermlie.linalg import null_space

TARGETS = ("none", "balanced", "pluriclosed", "kahler")


@dataclass(frozen=True)
class GenParams:
    n: int
    case: CaseTag
    jtype: JType | None = None
    target: str = "none"
    seed: int = 0
    unimodular: bool = True
    r0: int | None = None
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("complex dimension must be at least 2")
        object.__setattr__(self, "case", CaseTag(self.case))
        if self.jtype is not None:
            object.__setattr__(self, "jtype", JType(self.jtype))
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}")

    def to_dict(self):
        d = asdict(self)
        d["case"] = self.case.value
        d["jtype"] = None if self.jtype is None else self.jtype.value
        return d


@dataclass(frozen=True, eq=False)
class Instance:
    algebra: RealLieAlgebra
    J: ComplexStructure
    metric: HermitianMetric
    a: Subspace
    provenance: dict = field(default_factory=dict)
    frame: UnitaryFrame | None = field(default=None, repr=False)
    structure: StructureTensors | None = field(default=None, repr=False)

    @property
    def n(self):
        return self.algebra.n

    def with_metric(self, metric: HermitianMetric, frame=None, structure=None, provenance=None):
        return Instance(
            self.algebra,
            self.J,
            metric,
            self.a,
            self.provenance if provenance is None else provenance,
            frame,
            structure,
        )


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------


def standard_J(n):
    J = np.zeros((2 * n, 2 * n))
    for k in range(n):
        J[2 * k + 1, 2 * k] = 1.0
        J[2 * k, 2 * k + 1] = -1.0
    return J


def standard_frame(n):
    E = np.zeros((2 * n, n), dtype=complex)
    for k in range(n):
        E[2 * k, k] = 1 / SQRT2
        E[2 * k + 1, k] = -1j / SQRT2
    return UnitaryFrame(E)


def real_from_structure(cc, frame: UnitaryFrame, tol=1e-9):
    """Real structure constants on the coordinate basis from complex ones on ``(e, conj e)``."""
    B = frame.complex_basis()
    Binv = np.linalg.inv(B)
    f = np.einsum("mc,cab,ai,bj->mij", B, cc, Binv, Binv)
    scale = max(1.0, float(np.abs(f).max()))
    if np.abs(f.imag).max() > tol * scale:
        raise InconsistentInstance("complex structure constants do not define a real algebra")
    return f.real


def reconstruct_real_algebra(st: StructureTensors, frame: UnitaryFrame | None = None) -> RealLieAlgebra:
    """Real algebra whose brackets in ``frame`` have constants ``st``.

    The roundtrip (re-extracting C/D in the same frame) is checked.
    """
    from hermlie.hermitian import compute_CD

    n = st.n
    if frame is None:
        frame = standard_frame(n)
    g = RealLieAlgebra(real_from_structure(structure_from_CD(st), frame))
    G = metric_from_frame(frame).G
    J = _frame_J(frame)
    back = compute_CD(g, J, G, frame)
    err = max(np.abs(back.C - st.C).max(initial=0.0), np.abs(back.D - st.D).max(initial=0.0))
    if err > 1e-9 * max(1.0, np.abs(st.C).max(initial=0.0), np.abs(st.D).max(initial=0.0)):
        raise InconsistentInstance(f"reconstruction roundtrip error {err:.2e}")
    return g


def _frame_J(frame: UnitaryFrame):
    """The complex structure for which ``frame`` spans the +i eigenspace."""
    B = frame.complex_basis()
    n = frame.n
    lam = np.concatenate([np.full(n, 1j), np.full(n, -1j)])
    return (B @ np.diag(lam) @ np.linalg.inv(B)).real


def d_tensor_from_blocks(E1, E2, V1, V2, Y1, Y2):
    """``D[j, i, alpha] = D_alpha[i, j]`` with ``D_alpha = [[E, 0], [V, Y]]``."""
    m = Y1.shape[0]
    n = m + 2
    D = np.zeros((n, n, n), dtype=complex)
    for alpha, (E, V, Y) in enumerate(((E1, V1, Y1), (E2, V2, Y2))):
        Dal = np.zeros((n, n), dtype=complex)
        Dal[:2, :2] = E
        Dal[2:, :2] = V
        Dal[2:, 2:] = Y
        D[:, :, alpha] = Dal.T
    return D


def c_from_d(D, delta):
    """C determined by D for a frame adapted to an abelian ideal of codimension two."""
    n = D.shape[0]
    t = 1j * delta / np.sqrt(1 - delta * delta)
    C = np.zeros((n, n, n), dtype=complex)
    Dc = D.conj()
    for i in range(2, n):
        C[:, 0, i] = Dc[i, :, 0]
        C[:, 1, i] = Dc[i, :, 1] - 2 * t * Dc[i, :, 0]
    C[:, 0, 1] = Dc[1, :, 0] - Dc[0, :, 1] + 2 * t * Dc[0, :, 0]
    return C - C.transpose(0, 2, 1)


def tensors_A(lam, v, X, Y, Z):
    m = X.shape[0]
    n = m + 1
    C = np.zeros((n, n, n), dtype=complex)
    D = np.zeros((n, n, n), dtype=complex)
    D[0, 0, 0] = lam
    D[0, 1:, 0] = v
    D[1:, 1:, 0] = Y.T
    D[0, 1:, 1:] = Z
    C[1:, 0, 1:] = X.T
    C[1:, 1:, 0] = -X.T
    return StructureTensors(C, D)


def tensors_main(scal, V1, V2, Y1, Y2):
    E1, E2 = main_E_formulas(scal["a"], scal["b"], scal["c"], scal["c_p"], scal["d_p"], scal["sigma"], scal["delta"])
    D = d_tensor_from_blocks(E1, E2, V1, V2, Y1, Y2)
    return StructureTensors(c_from_d(D, scal["delta"]), D)


def adapted_ideal_basis(n, delta, case: CaseTag):
    """Real basis of the ideal in standard coordinates for a generator frame."""
    d = 2 * n
    eye = np.eye(d)
    if case is CaseTag.JA_EQUALS_A:
        return eye[:, 2:]
    dp = np.sqrt(1 - delta * delta)
    y = delta * eye[:, 1] + dp * eye[:, 2]
    return np.column_stack([eye[:, 0], y, eye[:, 4:]])


def random_basis_change(rng, d):
    """``O1 diag(s) O2`` with singular values in [0.5, 2]."""
    o1, _ = np.linalg.qr(rng.standard_normal((d, d)))
    o2, _ = np.linalg.qr(rng.standard_normal((d, d)))
    s = rng.uniform(0.5, 2.0, d)
    return o1 @ np.diag(s) @ o2


def assemble(st: StructureTensors, case: CaseTag, delta, rng, provenance, extra_frames=()):
    """Instance in a random real basis; ``extra_frames`` are mapped along."""
    n = st.n
    frame0 = standard_frame(n)
    g0 = reconstruct_real_algebra(st, frame0)
    a0 = adapted_ideal_basis(n, delta, case)
    Q = random_basis_change(rng, 2 * n)
    Qi = np.linalg.inv(Q)
    g = g0.change_basis(Q)
    J = Qi @ standard_J(n) @ Q
    G = Q.T @ Q
    J = _clean_J(J)
    a = Subspace.span(Qi @ a0, 2 * n)
    frame = UnitaryFrame(Qi @ frame0.E)
    inst = Instance(g, ComplexStructure(J), HermitianMetric(G), a, provenance, frame, st)
    mapped = [UnitaryFrame(Qi @ fr.E) for fr in extra_frames]
    return inst, mapped


def _clean_J(J):
    # one Newton step towards J^2 = -I keeps the invariant at machine precision
    return 0.5 * (J - np.linalg.inv(J))


# ---------------------------------------------------------------------------
# sampling helpers
# ---------------------------------------------------------------------------


def _sign(rng):
    return 1.0 if rng.random() < 0.5 else -1.0


def _sign_vec(rng, m):
    return np.where(rng.random(m) < 0.5, -1.0, 1.0)


def _crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / SQRT2


def random_unitary(rng, m):
    if m == 0:
        return np.zeros((0, 0), dtype=complex)
    q, r = np.linalg.qr(_crandn(rng, m, m))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_normal(rng, m, scale=1.0):
    U = random_unitary(rng, m)
    return U @ np.diag(scale * _crandn(rng, m)) @ U.conj().T


def level_pair(rng, m, kappa, im_trace=None, density=0.8):
    """``Y_1`` nilpotent and ``Y_2`` with ``[Y_1, Y_2] = kappa Y_1``.

    Indices get integer levels; ``Y_1`` only connects consecutive levels and
    ``Y_2`` is diagonal (shifted by ``-kappa * level``) plus a multiple of
    ``Y_1``. The result is conjugated by a random unitary. When
    ``im_trace`` is given, ``Im tr Y_2`` is set to it.
    """
    if m == 0:
        if im_trace is not None and abs(im_trace) > 1e-12:
            raise GenerationFailed("Im tr Y_2 must vanish when Y is empty")
        z = np.zeros((0, 0), dtype=complex)
        return z, z.copy()
    levels = rng.integers(0, max(1, min(m, 3)), size=m)
    Y1 = np.zeros((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            if levels[i] == levels[j] + 1 and rng.random() < density:
                Y1[i, j] = _crandn(rng)
    # components of the support graph carry their own diagonal offset
    comp = list(range(m))

    def find(i):
        while comp[i] != i:
            comp[i] = comp[comp[i]]
            i = comp[i]
        return i

    for i, j in zip(*np.nonzero(Y1)):
        comp[find(i)] = find(j)
    roots = sorted({find(i) for i in range(m)})
    rho = {r: _crandn(rng) for r in roots}
    diag = np.array([rho[find(i)] for i in range(m)]) - kappa * levels
    if im_trace is not None:
        r0 = find(0)
        members = [i for i in range(m) if find(i) == r0]
        diag[members] += 1j * (im_trace - diag.imag.sum()) / len(members)
    mu = _crandn(rng)
    Y2 = np.diag(diag) + mu * Y1
    U = random_unitary(rng, m)
    return U @ Y1 @ U.conj().T, U @ Y2 @ U.conj().T


def v_nullspace(E1, E2, Y1, Y2, kappa, balanced=False):
    """Basis of the solutions ``(V_1, V_2)`` of the block Jacobi identity.

    Columns are flattened as ``[vec V_1, vec V_2]`` (row-major).
    """
    m = Y1.shape[0]
    k = 4 * m
    if m == 0:
        return np.zeros((0, 0), dtype=complex)
    cols = []
    for idx in range(k):
        z = np.zeros(k, dtype=complex)
        z[idx] = 1.0
        V1 = z[: 2 * m].reshape(m, 2)
        V2 = z[2 * m :].reshape(m, 2)
        r = V1 @ E2 + Y1 @ V2 - V2 @ E1 - Y2 @ V1 - kappa * V1
        extra = V1[:, 0] + V2[:, 1] if balanced else np.zeros(0)
        cols.append(np.concatenate([r.ravel(), extra]))
    L = np.stack(cols, axis=1)
    return null_space(L, rtol=1e-10)


def sample_v(rng, N, m, scale=1.0):
    if m == 0 or N.shape[1] == 0:
        z = np.zeros((m, 2), dtype=complex)
        return z, z.copy()
    z = N @ (scale * _crandn(rng, N.shape[1]))
    return z[: 2 * m].reshape(m, 2), z[2 * m :].reshape(m, 2)


def main_scalars(rng, jtype: JType, sigma=None, delta=None, overrides=None):
    ov = dict(overrides or {})
    sigma = ov.get("sigma", sigma if sigma is not None else _sign(rng) * rng.uniform(0.5, 1.5))
    delta = ov.get("delta", delta if delta is not None else rng.uniform(-0.9, 0.9))
    if jtype is JType.GENERIC:
        b = ov.get("b", _sign(rng) * rng.uniform(0.5, 1.5))
        a = ov.get("a", rng.uniform(-1, 1))
        c = -a * a / b
        c_p = -(a / b) * (c + sigma)
        d_p = -c - 2 * sigma
    elif jtype is JType.HALF_GENERIC:
        a = b = 0.0
        c = ov.get("c", _sign(rng) * rng.uniform(0.5, 1.5))
        d_p = c
        c_p = ov.get("c_p", rng.uniform(-1, 1))
    else:
        a = b = c = 0.0
        c_p = ov.get("c_p", rng.uniform(-1, 1))
        d_p = ov.get("d_p", rng.uniform(-1.5, 1.5))
    return {"a": a, "b": b, "c": c, "c_p": c_p, "d_p": d_p, "sigma": sigma, "delta": delta}


def unimodular_im_trace_main(s):
    dp = np.sqrt(1 - s["delta"] ** 2)
    return (2 * s["sigma"] - s["d_p"] - s["c"]) / (2 * SQRT2 * dp)


def full_scalars(s):
    """Add ``d, a', b'`` and ``delta'`` implied by the structural identities."""
    out = dict(s)
    out["d"] = -s["a"]
    out["a_p"] = s["c"] - s["sigma"]
    out["b_p"] = -s["a"]
    out["delta_prime"] = float(np.sqrt(1 - s["delta"] ** 2))
    return out


def _check(inst: Instance, params: GenParams, tol=1e-10):
    from hermlie.hermitian import nijenhuis_defect

    g = inst.algebra
    scale = max(1.0, float(np.abs(g.f).max()))
    jd = jacobi_defect(g)
    nd = nijenhuis_defect(g, inst.J)
    if jd > tol * scale**2 or nd > tol * scale:
        raise GenerationFailed(f"generated algebra fails validation (jacobi {jd:.2e}, nijenhuis {nd:.2e})", params.seed)
    if not rank_gap_ok(g.f.reshape(g.dim, -1)):
        raise GenerationFailed("derived algebra is numerically rank-ambiguous", params.seed)


def rank_gap_ok(m, low=1e-11, high=1e-5):
    """True when no singular value sits in the ambiguous band between ``low`` and ``high`` (relative)."""
    sv = np.linalg.svd(m, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return True
    rel = sv / sv[0]
    return not np.any((rel > low) & (rel < high))


def _provenance(params: GenParams, **data):
    prov = {"params": params.to_dict()}
    prov.update({k: _jsonable(v) for k, v in data.items()})
    return prov


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    if isinstance(v, JType):
        return v.value
    return v


# ---------------------------------------------------------------------------
# main case
# ---------------------------------------------------------------------------


def _main_jtype(params, rng):
    if params.jtype is not None:
        return params.jtype
    if params.target == "balanced":
        return JType.DEGENERATE if params.n >= 3 and rng.random() < 0.5 else JType.GENERIC
    if params.target == "pluriclosed":
        return JType.DEGENERATE
    if params.n == 2 and params.unimodular:
        return JType.HALF_GENERIC if rng.random() < 0.5 else JType.DEGENERATE
    return [JType.GENERIC, JType.HALF_GENERIC, JType.DEGENERATE][int(rng.integers(0, 3))]


def gen_main(params: GenParams) -> Instance:
    if params.case is not CaseTag.MAIN:
        raise ValueError("gen_main requires case MainNonabelian")
    if params.target == "kahler":
        raise GenerationFailed("no Kähler metric is generated when g/a is non-abelian and Ja != a", params.seed)
    rng = np.random.default_rng(params.seed)
    jtype = _main_jtype(params, rng)
    n, m = params.n, params.n - 2
    if params.target == "balanced":
        if m == 0:
            raise GenerationFailed(
                "balanced metrics need n >= 3 here: unimodularity forces Im tr Y_2 = "
                + ("sigma/sqrt(2)" if jtype is JType.DEGENERATE else "sqrt(2) sigma")
                + " which is impossible with an empty Y block",
                params.seed,
            )
        if jtype is JType.HALF_GENERIC:
            raise GenerationFailed("half-generic complex structures admit no balanced metric", params.seed)
        ov = {"delta": 0.0, "a": 0.0, "c_p": 0.0, "d_p": 0.0}
        ov.update(params.overrides)
        s = main_scalars(rng, jtype, overrides=ov)
        if jtype is JType.GENERIC:
            s.update(b=2 * s["sigma"], c=0.0, c_p=0.0, d_p=-2 * s["sigma"])
    elif params.target == "pluriclosed":
        return _gen_main_pluriclosed(params, rng, jtype)
    else:
        s = main_scalars(rng, jtype, overrides=params.overrides)
    if params.unimodular and m == 0:
        # the only freedom left is in the scalars
        if jtype is JType.GENERIC:
            raise GenerationFailed("a generic structure with n = 2 is never unimodular (2 sigma = c + d' forces sigma = 0)", params.seed)
        if jtype is JType.HALF_GENERIC:
            s["c"] = s["d_p"] = s["sigma"]
        else:
            s["d_p"] = 2 * s["sigma"]
    dp = np.sqrt(1 - s["delta"] ** 2)
    kappa = 1j * s["sigma"] / (SQRT2 * dp)
    im_tr = unimodular_im_trace_main(s) if params.unimodular else None
    Y1, Y2 = level_pair(rng, m, kappa, im_tr)
    E1, E2 = main_E_formulas(s["a"], s["b"], s["c"], s["c_p"], s["d_p"], s["sigma"], s["delta"])
    N = v_nullspace(E1, E2, Y1, Y2, kappa, balanced=params.target == "balanced")
    V1, V2 = sample_v(rng, N, m)
    st = tensors_main(s, V1, V2, Y1, Y2)
    prov = _provenance(params, jtype=jtype, scalars=full_scalars(s))
    inst, _ = assemble(st, CaseTag.MAIN, s["delta"], rng, prov)
    _check(inst, params)
    return inst


# -- pluriclosed targets by least-squares refinement --------------------------


def least_squares(fun, x0, args=(), max_nfev=2000, stop=1e-15):
    """Levenberg-Marquardt with a forward-difference Jacobian and Marquardt scaling.

    Written out in numpy because generated instances must be reproducible
    bit for bit across processes; the underdetermined refinements here are
    sensitive to the last bit of every step.
    """
    x = np.array(x0, dtype=float)
    r = fun(x, *args)
    nfev, cost = 1, float(r @ r)
    mu, nu = None, 2.0
    h0 = np.sqrt(np.finfo(float).eps)
    while nfev < max_nfev and np.abs(r).max(initial=0.0) > stop:
        h = h0 * np.maximum(np.abs(x), 1.0)
        Jm = np.empty((r.size, x.size))
        for k in range(x.size):
            xk = x.copy()
            xk[k] += h[k]
            Jm[:, k] = (fun(xk, *args) - r) / h[k]
        nfev += x.size
        d = np.sqrt(np.maximum((Jm * Jm).sum(axis=0), 1e-30))
        if mu is None:
            mu = 1e-3 * float(d.max()) ** 2
        rhs = np.concatenate([-r, np.zeros(x.size)])
        while nfev < max_nfev:
            dx = np.linalg.lstsq(np.vstack([Jm, np.sqrt(mu) * np.diag(d)]), rhs, rcond=None)[0]
            xn = x + dx
            rn = fun(xn, *args)
            nfev += 1
            cn = float(rn @ rn)
            if np.isfinite(cn) and cn < cost:
                pred = cost - float(np.sum((r + Jm @ dx) ** 2))
                rho = (cost - cn) / pred if pred > 0 else 0.0
                mu *= max(1 / 3, 1 - (2 * rho - 1) ** 3)
                nu = 2.0
                x, r, cost = xn, rn, cn
                break
            mu *= nu
            nu *= 2
            if np.linalg.norm(dx) <= 1e-15 * (np.linalg.norm(x) + 1e-15):
                return SimpleNamespace(x=x, fun=r, nfev=nfev)
        else:
            break
        if np.linalg.norm(dx) <= 1e-15 * (np.linalg.norm(x) + 1e-15):
            break
    return SimpleNamespace(x=x, fun=r, nfev=nfev)


def _cplx(x):
    h = len(x) // 2
    return x[:h] + 1j * x[h:]


def _pluri_v(rng, s, Y1, Y2, kappa, attempts=6):
    """Nonzero V blocks keeping a pluriclosed configuration pluriclosed.

    The block Jacobi identity is linear in V and solved exactly through its
    null space; the pluriclosed equations are quadratic and are refined by
    Levenberg-Marquardt in null-space coordinates.
    """
    m = Y1.shape[0]
    E1, E2 = main_E_formulas(s["a"], s["b"], s["c"], s["c_p"], s["d_p"], s["sigma"], s["delta"])
    N = v_nullspace(E1, E2, Y1, Y2, kappa)
    k = N.shape[1]
    zero = np.zeros((m, 2), dtype=complex)
    if k == 0:
        return zero, zero.copy()

    def blocks(x):
        z = N @ _cplx(x)
        return z[: 2 * m].reshape(m, 2), z[2 * m :].reshape(m, 2)

    def res(x, radius):
        V1, V2 = blocks(x)
        r = pluriclosed_residuals(tensors_main(s, V1, V2, Y1, Y2)).ravel()
        # the anchor keeps the iteration away from the trivial solution V = 0
        return np.concatenate([r.real, r.imag, [x @ x - radius**2]])

    for _ in range(attempts):
        radius = rng.uniform(0.5, 1.5)
        sol = least_squares(
            res, rng.standard_normal(2 * k), args=(radius,), max_nfev=400 * k
        )
        V1, V2 = blocks(sol.x)
        size = max(np.abs(V1).max(), np.abs(V2).max())
        if np.abs(sol.fun).max() < 1e-13 and 0.05 < size < 5:
            return V1, V2
    return zero, zero.copy()


def _gen_main_pluriclosed_degenerate(params, rng):
    # For degenerate structures the pluriclosed equations force Y_1 = 0 and a
    # Hermitian Y_2; unimodularity then pins d' = 2 sigma.
    m = params.n - 2
    ov = dict(params.overrides)
    s = main_scalars(rng, JType.DEGENERATE, overrides=ov)
    s["d_p"] = 2 * s["sigma"]
    dp = np.sqrt(1 - s["delta"] ** 2)
    kappa = 1j * s["sigma"] / (SQRT2 * dp)
    Y1 = np.zeros((m, m), dtype=complex)
    H = _crandn(rng, m, m)
    Y2 = (H + H.conj().T) / 2
    V1, V2 = _pluri_v(rng, s, Y1, Y2, kappa)
    return s, V1, V2, Y1, Y2


# keeps delta' away from zero during refinement
_DELTA_CAP = 0.99


def _free_unpack(x, jtype, m, sigma):
    il = np.tril_indices(m, -1)
    nl = len(il[0])
    s = {"sigma": sigma, "delta": float(_DELTA_CAP * np.tanh(x[0]))}
    p, q = x[1], x[2]
    if jtype is JType.GENERIC:
        a, b = p, (q if abs(q) > 1e-8 else 1e-8)
        c = -a * a / b
        s.update(a=a, b=b, c=c, c_p=-(a / b) * (c + sigma), d_p=-c - 2 * sigma)
    else:
        s.update(a=0.0, b=0.0, c=p, c_p=q, d_p=p)
    i = 3
    Y1 = np.zeros((m, m), dtype=complex)
    Y1[il] = _cplx(x[i : i + 2 * nl])
    i += 2 * nl
    Y2 = _cplx(x[i : i + 2 * m * m]).reshape(m, m)
    i += 2 * m * m
    V = _cplx(x[i : i + 8 * m])
    return s, V[: 2 * m].reshape(m, 2), V[2 * m :].reshape(m, 2), Y1, Y2


def _free_residual(x, jtype, m, sigma, unimodular):
    s, V1, V2, Y1, Y2 = _free_unpack(x, jtype, m, sigma)
    st = tensors_main(s, V1, V2, Y1, Y2)
    kappa = 1j * sigma / (SQRT2 * np.sqrt(1 - s["delta"] ** 2))
    E1, E2 = main_E_formulas(s["a"], s["b"], s["c"], s["c_p"], s["d_p"], s["sigma"], s["delta"])
    parts = [
        pluriclosed_residuals(st).ravel(),
        (V1 @ E2 + Y1 @ V2 - V2 @ E1 - Y2 @ V1 - kappa * V1).ravel(),
        (Y1 @ Y2 - Y2 @ Y1 - kappa * Y1).ravel(),
    ]
    if unimodular:
        parts.append(unimodular_residuals(st))
    r = np.concatenate(parts)
    out = np.concatenate([r.real, r.imag])
    # Levenberg-Marquardt wants at least as many residuals as unknowns
    return np.concatenate([out, np.zeros(max(0, len(x) - len(out)))])


def _gen_main_pluriclosed_free(params, rng, jtype, attempts=4):
    """Penalized refinement over all reduced data (Y_1 in Schur form)."""
    m = params.n - 2
    nl = m * (m - 1) // 2
    size = 3 + 2 * nl + 2 * m * m + 8 * m
    best = np.inf
    for _ in range(attempts):
        sigma = params.overrides.get("sigma", _sign(rng) * rng.uniform(0.5, 1.5))
        x0 = rng.standard_normal(size)
        x0[0] = np.arctanh(rng.uniform(-0.9, 0.9) / _DELTA_CAP)
        if jtype is JType.GENERIC:
            # pluriclosed generic structures need sigma * b < 0
            x0[2] = -np.sign(sigma) * rng.uniform(0.5, 1.5)
        sol = least_squares(
            _free_residual, x0, args=(jtype, m, sigma, params.unimodular), max_nfev=2000
        )
        s, V1, V2, Y1, Y2 = _free_unpack(sol.x, jtype, m, sigma)
        keys = [s[k] for k in ("a", "c", "c_p", "d_p")]
        lead = abs(s["b"]) if jtype is JType.GENERIC else abs(s["c"])
        ok = lead > 0.05 and max(map(abs, keys)) < 10 and abs(s["delta"]) < 0.95
        ok = ok and max(np.abs(z).max(initial=0.0) for z in (Y1, Y2, V1, V2)) < 20
        res = float(np.abs(sol.fun).max())
        if ok:
            best = min(best, res)
            st = tensors_main(s, V1, V2, Y1, Y2)
            if res < 1e-12 and rank_gap_ok(structure_from_CD(st).reshape(2 * params.n, -1)):
                return s, V1, V2, Y1, Y2
    raise GenerationFailed(
        f"no pluriclosed {jtype.value} structure found by refinement (best admissible residual {best:.2e})", params.seed
    )


def _gen_main_pluriclosed(params, rng, jtype):
    if jtype is JType.DEGENERATE:
        s, V1, V2, Y1, Y2 = _gen_main_pluriclosed_degenerate(params, rng)
    else:
        s, V1, V2, Y1, Y2 = _gen_main_pluriclosed_free(params, rng, jtype)
    st = tensors_main(s, V1, V2, Y1, Y2)
    if pluriclosed_defect(st) > 1e-9 * max(1.0, np.abs(st.D).max()) ** 2:
        raise GenerationFailed("pluriclosed refinement left a residual above the gate", params.seed)
    prov = _provenance(params, jtype=jtype, scalars=full_scalars(s))
    inst, _ = assemble(st, CaseTag.MAIN, s["delta"], rng, prov)
    _check(inst, params)
    return inst


# ---------------------------------------------------------------------------
# Ja = a
# ---------------------------------------------------------------------------


def _a_data(rng, m, target, unimodular=True):
    """Reduced data ``(lam, v, X, Y, Z)`` satisfying the Jacobi identities."""
    zero = np.zeros((m, m), dtype=complex)
    v = _crandn(rng, m)
    if target in ("kahler", "pluriclosed"):
        # X = Y normal, lam = 0, Z = 0 ; v is free for pluriclosed metrics
        N = random_normal(rng, m)
        v = np.zeros(m, dtype=complex) if target == "kahler" else v
        return 0.0, v, N, N.copy(), zero
    M = _crandn(rng, m, m)
    if target == "balanced":
        # Y commutes with X* = M and tr Y = tr X keeps lam = 0 unimodular
        c1 = _crandn(rng)
        c0 = (np.trace(M).conj() - c1 * np.trace(M)) / m
        return 0.0, np.zeros(m, dtype=complex), M.conj().T, c1 * M + c0 * np.eye(m), zero
    # X = M*, Y = -M solves the Jacobi identities for any lam; unimodularity
    # then fixes lam = 2 Re tr M, which must be non-negative
    if unimodular:
        if np.trace(M).real < 0:
            M = -M
        lam = 2 * float(np.trace(M).real)
    else:
        lam = float(rng.uniform(0, 2))
    return lam, v, M.conj().T, -M, zero


def gen_A(params: GenParams) -> Instance:
    if params.case is not CaseTag.JA_EQUALS_A:
        raise ValueError("gen_A requires case JaEqualsA")
    rng = np.random.default_rng(params.seed)
    m = params.n - 1
    lam, v, X, Y, Z = _a_data(rng, m, params.target, params.unimodular)
    st = tensors_A(lam, v, X, Y, Z)
    prov = _provenance(params, reduced={"lam": lam})
    inst, _ = assemble(st, CaseTag.JA_EQUALS_A, 0.0, rng, prov)
    _check(inst, params)
    return inst


def frame_change_matrix_A(p, P, a_vec):
    """``M`` with ``e~ = e M`` for ``e~_1 = p e_1 + sum a_k e_k`` and ``e~_i = p_i e_i``."""
    P = np.asarray(P, dtype=float)
    n = P.size + 1
    M = np.zeros((n, n), dtype=complex)
    M[0, 0] = p
    M[1:, 0] = a_vec
    M[1:, 1:] = np.diag(P)
    return M


# ---------------------------------------------------------------------------
# Ja != a, g/a abelian
# ---------------------------------------------------------------------------


def commuting_actions(rng, r0, balanced=False, overrides=None):
    """Scalars ``a, b, c, c', d'`` of a commuting pair ``A_x`` (traceless), ``A_y``."""
    ov = dict(overrides or {})
    if balanced:
        if r0 not in (0, 2):
            raise GenerationFailed("balanced metrics force r0 in {0, 2}")
        b = 0.0 if r0 == 0 else ov.get("b", _sign(rng) * rng.uniform(0.5, 1.5))
        return {"a": 0.0, "b": b, "c": -b, "c_p": 0.0, "d_p": -b}
    if r0 == 0:
        return {"a": 0.0, "b": 0.0, "c": 0.0, "c_p": 0.0, "d_p": 0.0}
    if r0 == 1:
        return {"a": 0.0, "b": 0.0, "c": 0.0, "c_p": ov.get("c_p", rng.uniform(-1, 1)), "d_p": ov.get("d_p", _sign(rng) * rng.uniform(0.5, 1.5))}
    a = ov.get("a", rng.uniform(-1, 1))
    b = ov.get("b", _sign(rng) * rng.uniform(0.5, 1.5))
    c = ov.get("c", rng.uniform(-1, 1))
    return {"a": a, "b": b, "c": c, "c_p": -a * c / b, "d_p": c + 2 * a * a / b}


def commuting_pair(rng, m, im_trace2=None, delta=0.0, hermitian_first=False):
    """Commuting ``Y_1, Y_2`` (simultaneously diagonalizable).

    ``tr Y_1`` is made real; ``im_trace2(tr Y_1)`` gives the required
    ``Im tr Y_2``.
    """
    if m == 0:
        z = np.zeros((0, 0), dtype=complex)
        return z, z.copy()
    if hermitian_first:
        S = random_unitary(rng, m)
        d1 = rng.standard_normal(m).astype(complex)
    else:
        S = random_unitary(rng, m) @ np.diag(rng.uniform(0.7, 1.4, m)) @ random_unitary(rng, m)
        d1 = _crandn(rng, m)
        d1 -= 1j * d1.imag.sum() / m
    # a random support keeps ranks varied
    d1 = np.where(rng.random(m) < 0.8, d1, 0)
    d1 -= 1j * d1.imag.sum() / max(1, np.count_nonzero(d1)) * (d1 != 0)
    d2 = _crandn(rng, m)
    if im_trace2 is not None:
        d2 += 1j * (im_trace2(d1.sum().real) - d2.imag.sum()) / m
    Si = np.linalg.inv(S)
    return S @ np.diag(d1) @ Si, S @ np.diag(d2) @ Si


def _b_im_trace2(s, delta):
    dp = np.sqrt(1 - delta * delta)
    return lambda tr1: -delta * tr1 / dp - (s["c"] + s["d_p"]) / (2 * SQRT2 * dp)


def _b_tensors(s, delta, V1, V2, Y1, Y2):
    full = dict(s, sigma=0.0, delta=delta)
    return tensors_main(full, V1, V2, Y1, Y2)


def _b_kahler_blocks(rng, m, delta):
    """``Z_1 = Z_2 = 0``: ``Y_1 = U diag(mu) U*`` real ``mu``, ``Y_2 = U diag(h - t mu) U*``."""
    t = 1j * delta / np.sqrt(1 - delta * delta)
    U = random_unitary(rng, m)
    mu = _sign_vec(rng, m) * rng.uniform(0.5, 1.5, m)
    mu = np.where(rng.random(m) < 0.85, mu, 0.0)
    if m:
        mu[0] = mu[0] if mu[0] != 0 else 1.0  # keep the algebra non-abelian
    h = _sign_vec(rng, m) * rng.uniform(0.3, 1.5, m)
    h = np.where(mu != 0, h, np.where(rng.random(m) < 0.5, h, 0.0))
    Uh = U.conj().T
    return U @ np.diag(mu) @ Uh, U @ np.diag(h - t * mu) @ Uh, U, mu, h - t * mu


def _b_pluriclosed_v(rng, U, d1, d2):
    """v-blocks supported on ``W = range Y_1 + range Y_2`` satisfying the pluriclosed equations."""
    m = U.shape[0]
    on = (np.abs(d1) > 1e-12) & (np.abs(d2) > 1e-12)
    xi = np.where(on, _crandn(rng, m), 0)
    Ad = np.where(on, d2 / np.where(on, d1, 1), 0)
    v11 = U @ xi
    v12 = U @ (Ad * xi)
    v21 = U @ (Ad.conj() * xi)
    v22 = U @ (np.abs(Ad) ** 2 * xi)
    # V_beta[:, alpha] = v^alpha_beta
    return np.column_stack([v11, v21]), np.column_stack([v12, v22])


def gen_B(params: GenParams) -> Instance:
    if params.case is not CaseTag.ABELIAN_QUOTIENT:
        raise ValueError("gen_B requires case AbelianQuotient")
    rng = np.random.default_rng(params.seed)
    m = params.n - 2
    target = params.target
    if target == "kahler":
        r0 = 0 if params.r0 is None else params.r0
        if r0 != 0:
            raise GenerationFailed("Kähler metrics force r0 = 0 in this case", params.seed)
    elif target == "pluriclosed":
        r0 = 0 if params.r0 is None else params.r0
    elif target == "balanced":
        r0 = params.r0 if params.r0 is not None else (2 if rng.random() < 0.5 else 0)
    else:
        r0 = params.r0 if params.r0 is not None else int(rng.integers(0, 3))
    delta = float(params.overrides.get("delta", rng.uniform(-0.9, 0.9)))
    if target in ("kahler", "pluriclosed") and r0 == 0:
        s = commuting_actions(rng, 0)
        Y1, Y2, U, d1, d2 = _b_kahler_blocks(rng, m, delta)
        if target == "kahler":
            V1 = V2 = np.zeros((m, 2), dtype=complex)
        else:
            V1, V2 = _b_pluriclosed_v(rng, U, d1, d2)
    elif target == "pluriclosed":
        s, V1, V2, Y1, Y2, delta = _gen_b_pluriclosed_free(params, rng, r0)
    else:
        s = commuting_actions(rng, r0, balanced=target == "balanced", overrides=params.overrides)
        if params.unimodular and m == 0 and abs(s["c"] + s["d_p"]) > 0:
            # with no Y blocks unimodularity reads c + d' = 0
            if r0 == 1 and target != "balanced":
                s["d_p"] = 0.0
                s["c_p"] = _sign(rng) * rng.uniform(0.5, 1.5)
            else:
                raise GenerationFailed(
                    f"with n = 2 unimodularity forces c + d' = 0, which leaves rank r0 < {r0}", params.seed
                )
        im2 = _b_im_trace2(s, delta) if params.unimodular else None
        Y1, Y2 = commuting_pair(rng, m, im2, delta)
        E1, E2 = main_E_formulas(s["a"], s["b"], s["c"], s["c_p"], s["d_p"], 0.0, delta)
        N = v_nullspace(E1, E2, Y1, Y2, 0.0, balanced=target == "balanced")
        V1, V2 = sample_v(rng, N, m)
    st = _b_tensors(s, delta, V1, V2, Y1, Y2)
    prov = _provenance(params, r0=r0, scalars=dict(s, delta=delta))
    inst, _ = assemble(st, CaseTag.ABELIAN_QUOTIENT, delta, rng, prov)
    _check(inst, params)
    return inst


def _gen_b_pluriclosed_free(params, rng, r0, attempts=6):
    """Refinement for pluriclosed metrics with ``r0 > 0`` (``Y`` blocks full)."""
    m = params.n - 2
    size = 4 + 4 * m * m + 8 * m
    best = np.inf

    def unpack(x):
        delta = float(_DELTA_CAP * np.tanh(x[0]))
        if r0 == 2:
            a, b, c = x[1], x[2], x[3]
            s = {"a": a, "b": b, "c": c, "c_p": -a * c / b, "d_p": c + 2 * a * a / b}
        else:
            s = {"a": 0.0, "b": 0.0, "c": 0.0, "c_p": x[1], "d_p": x[2]}
        i = 4
        Y1 = _cplx(x[i : i + 2 * m * m]).reshape(m, m)
        Y2 = _cplx(x[i + 2 * m * m : i + 4 * m * m]).reshape(m, m)
        V = _cplx(x[i + 4 * m * m :])
        return s, V[: 2 * m].reshape(m, 2), V[2 * m :].reshape(m, 2), Y1, Y2, delta

    def res(x):
        s, V1, V2, Y1, Y2, delta = unpack(x)
        st = _b_tensors(s, delta, V1, V2, Y1, Y2)
        E1, E2 = main_E_formulas(s["a"], s["b"], s["c"], s["c_p"], s["d_p"], 0.0, delta)
        parts = [pluriclosed_residuals(st).ravel(), (Y1 @ Y2 - Y2 @ Y1).ravel(), (V1 @ E2 + Y1 @ V2 - V2 @ E1 - Y2 @ V1).ravel()]
        if params.unimodular:
            parts.append(unimodular_residuals(st))
        r = np.concatenate(parts)
        out = np.concatenate([r.real, r.imag])
        return np.concatenate([out, np.zeros(max(0, len(x) - len(out)))])

    for _ in range(attempts):
        x0 = rng.standard_normal(size)
        x0[0] = np.arctanh(rng.uniform(-0.9, 0.9) / _DELTA_CAP)
        if r0 == 2:
            x0[2] = _sign(rng) * rng.uniform(0.5, 1.5)
        sol = least_squares(res, x0, max_nfev=2000)
        s, V1, V2, Y1, Y2, delta = unpack(sol.x)
        # r0 = 2 needs det(A_x) = -(a^2 + b c) away from zero, else the rank drops
        lead = min(abs(s["b"]), abs(s["a"] ** 2 + s["b"] * s["c"])) if r0 == 2 else max(abs(s["c_p"]), abs(s["d_p"]))
        ok = lead > 0.05 and max(abs(s[k]) for k in s) < 10 and abs(delta) < 0.95
        ok = ok and max(np.abs(z).max(initial=0.0) for z in (Y1, Y2, V1, V2)) < 20
        r = float(np.abs(sol.fun).max())
        if ok:
            best = min(best, r)
            st = _b_tensors(s, delta, V1, V2, Y1, Y2)
            if r < 1e-10 and rank_gap_ok(structure_from_CD(st).reshape(2 * params.n, -1)):
                return s, V1, V2, Y1, Y2, delta
    raise GenerationFailed(f"no pluriclosed structure of rank {r0} found by refinement (best admissible residual {best:.2e})", params.seed)


def frame_change_matrix_B(p, mu, a_vec, b_vec):
    """``M`` with ``e~ = e M`` for the two-vector frame change (``p = (p_1, ..., p_n)``)."""
    p = np.asarray(p, dtype=float)
    n = p.size
    M = np.zeros((n, n), dtype=complex)
    M[0, 0] = p[0]
    M[2:, 0] = a_vec
    M[0, 1] = mu
    M[1, 1] = p[1]
    M[2:, 1] = b_vec
    M[2:, 2:] = np.diag(p[2:])
    return M


# ---------------------------------------------------------------------------
# balanced + pluriclosed pairs on the same (g, J)
# ---------------------------------------------------------------------------


def gen_pair(params: GenParams):
    """A pluriclosed and a balanced metric on one ``(g, J, a)``.

    Returns ``(pluriclosed_instance, balanced_instance)``. Only possible when
    ``Ja = a`` or when ``g/a`` is abelian with ``r0 = 0``.
    """
    rng = np.random.default_rng(params.seed)
    n = params.n
    if params.case is CaseTag.JA_EQUALS_A:
        m = n - 1
        Nm = random_normal(rng, m)
        p = rng.uniform(0.5, 2.0)
        P = rng.uniform(0.5, 2.0, m)
        a_vec = _crandn(rng, m)
        v = -(Nm @ a_vec.conj()) / p
        st = tensors_A(0.0, v, Nm, Nm.copy(), np.zeros((m, m), dtype=complex))
        M = frame_change_matrix_A(p, P, a_vec)
        delta = 0.0
        extra = {"p": p, "P": P.tolist()}
    elif params.case is CaseTag.ABELIAN_QUOTIENT:
        if params.r0 not in (None, 0):
            raise GenerationFailed("balanced and pluriclosed metrics coexist only for r0 = 0 here", params.seed)
        if n < 3:
            raise GenerationFailed("with n = 2 and r0 = 0 the algebra is abelian", params.seed)
        m = n - 2
        delta = float(rng.uniform(-0.9, 0.9))
        Y1, Y2, U, d1, d2 = _b_kahler_blocks(rng, m, delta)
        V1, V2 = _b_pluriclosed_v(rng, U, d1, d2)
        s = commuting_actions(rng, 0)
        st = _b_tensors(s, delta, V1, V2, Y1, Y2)
        for _ in range(50):
            p = rng.uniform(0.5, 2.0, n)
            mu = _crandn(rng) if rng.random() < 0.7 else 0.0
            lam = (mu * d1 + p[1] * d2)[np.abs(d1) > 0]
            if lam.size and np.abs(lam).min() < 0.3:
                continue
            a_vec = U @ np.where(np.abs(d1) > 0, _crandn(rng, m), 0)
            b_vec = _balancing_b(p, mu, a_vec, V1, V2, Y1, Y2, U, d1, d2)
            M = frame_change_matrix_B(p, mu, a_vec, b_vec)
            # the balanced metric inherits the conditioning of M
            if np.linalg.cond(M) < 25:
                break
        else:
            raise GenerationFailed("no well-conditioned balancing frame change found", params.seed)
        extra = {"p": p.tolist()}
    else:
        raise GenerationFailed("no balanced/pluriclosed pair exists in the non-abelian-quotient case", params.seed)
    frame0 = standard_frame(n)
    tilde = UnitaryFrame(frame0.E @ M)
    prov = _provenance(params, role="pluriclosed", **extra)
    inst, (tilde_mapped,) = assemble(st, params.case, delta, rng, prov, extra_frames=[tilde])
    _check(inst, params)
    bal = inst.with_metric(
        metric_from_frame(tilde_mapped), frame=tilde_mapped, structure=transform_frame(st, M),
        provenance=_provenance(params, role="balanced", **extra),
    )
    return inst, bal


def _balancing_b(p, mu, a_vec, V1, V2, Y1, Y2, U, d1, d2):
    """Solve ``v~^1_1 + v~^2_2 = 0`` for ``conj(b)`` on ``W``."""
    p1, p2 = p[0], p[1]
    v11, v21 = V1[:, 0], V1[:, 1]
    v12, v22 = V2[:, 0], V2[:, 1]
    rhs = (p1**2 + abs(mu) ** 2) * v11 + p1 * Y1 @ a_vec.conj() + p2**2 * v22 + p2 * mu * v21 + p2 * np.conj(mu) * v12
    Mop = mu * Y1 + p2 * Y2
    # (mu Y_1 + p_2 Y_2) is diagonal in U; invert on its support
    lam = mu * d1 + p2 * d2
    coef = U.conj().T @ (-rhs)
    on = np.abs(lam) > 1e-12
    bc = U @ np.where(on, coef / np.where(on, lam, 1), 0)
    if np.abs(Mop @ bc + rhs).max(initial=0.0) > 1e-9 * max(1.0, np.abs(rhs).max(initial=0.0)):
        raise GenerationFailed("balancing frame change is not solvable on W")
    return bc.conj()


# ---------------------------------------------------------------------------
# dispatch and fixtures
# ---------------------------------------------------------------------------


def generate(params: GenParams) -> Instance:
    if params.target == "balanced" and not params.unimodular:
        raise GenerationFailed("the balanced criterion used here assumes a unimodular algebra", params.seed)
    if params.case is CaseTag.MAIN:
        return gen_main(params)
    if params.case is CaseTag.JA_EQUALS_A:
        return gen_A(params)
    return gen_B(params)


def abelian_instance(n: int) -> Instance:
    d = 2 * n
    g = RealLieAlgebra.abelian(d)
    a = Subspace.span(np.eye(d)[:, 2:], d)
    prov = {"params": {"n": n, "case": CaseTag.JA_EQUALS_A.value, "name": "abelian"}}
    return Instance(g, ComplexStructure(standard_J(n)), HermitianMetric(np.eye(d)), a, prov, standard_frame(n), None)


def catalog():
    """Named, deterministic fixtures (name, Instance)."""
    out = [("abelian-n2", abelian_instance(2)), ("abelian-n3", abelian_instance(3))]
    specs = [
        ("main-generic-n2-fixture", GenParams(2, CaseTag.MAIN, JType.GENERIC, unimodular=False, seed=1, overrides={"sigma": 1.0, "b": 2.0, "a": 0.0})),
        ("main-half-generic-n2", GenParams(2, CaseTag.MAIN, JType.HALF_GENERIC, seed=2)),
        ("main-degenerate-n2", GenParams(2, CaseTag.MAIN, JType.DEGENERATE, seed=3)),
        ("main-generic-n3", GenParams(3, CaseTag.MAIN, JType.GENERIC, seed=4)),
        ("main-half-generic-n3", GenParams(3, CaseTag.MAIN, JType.HALF_GENERIC, seed=5)),
        ("main-degenerate-n3", GenParams(3, CaseTag.MAIN, JType.DEGENERATE, seed=6)),
        ("main-generic-balanced-n3", GenParams(3, CaseTag.MAIN, JType.GENERIC, "balanced", seed=7)),
        ("main-degenerate-balanced-n3", GenParams(3, CaseTag.MAIN, JType.DEGENERATE, "balanced", seed=8)),
        ("main-degenerate-pluriclosed-n3", GenParams(3, CaseTag.MAIN, JType.DEGENERATE, "pluriclosed", seed=9)),
        ("A-n2", GenParams(2, CaseTag.JA_EQUALS_A, seed=10)),
        ("A-n3", GenParams(3, CaseTag.JA_EQUALS_A, seed=11)),
        ("A-kahler-n3", GenParams(3, CaseTag.JA_EQUALS_A, target="kahler", seed=12)),
        ("A-balanced-n3", GenParams(3, CaseTag.JA_EQUALS_A, target="balanced", seed=13)),
        ("A-pluriclosed-n3", GenParams(3, CaseTag.JA_EQUALS_A, target="pluriclosed", seed=14)),
        ("B-r0-1-n2", GenParams(2, CaseTag.ABELIAN_QUOTIENT, r0=1, seed=15)),
        ("B-r0-0-n3", GenParams(3, CaseTag.ABELIAN_QUOTIENT, r0=0, seed=16)),
        ("B-r0-1-n3", GenParams(3, CaseTag.ABELIAN_QUOTIENT, r0=1, seed=17)),
        ("B-r0-2-n3", GenParams(3, CaseTag.ABELIAN_QUOTIENT, r0=2, seed=18)),
        ("B-balanced-n3", GenParams(3, CaseTag.ABELIAN_QUOTIENT, target="balanced", r0=2, seed=19)),
        ("B-kahler-n3", GenParams(3, CaseTag.ABELIAN_QUOTIENT, target="kahler", seed=20)),
        ("B-pluriclosed-n3", GenParams(3, CaseTag.ABELIAN_QUOTIENT, target="pluriclosed", seed=21)),
    ]
    out += [(name, generate(p)) for name, p in specs]
    return out
