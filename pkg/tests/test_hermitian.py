import numpy as np
import pytest

from hermlie import forms
from hermlie.errors import DegenerateInput
from hermlie.frames import build_admissible_frame, vanishing_pattern_residual
from hermlie.generator import standard_J, tensors_A
from hermlie.hermitian import (
    SQRT2,
    ComplexStructure,
    HermitianMetric,
    StructureTensors,
    UnitaryFrame,
    balanced_defect,
    build_unitary_frame,
    cd_reconstruction_residual,
    ce_differential,
    ce_oracle,
    chern_torsion,
    closure_defect,
    complex_jacobi_residual,
    complex_structure_tensor,
    compute_CD,
    frame_gram,
    gauduchon_defect,
    kahler_defect,
    lee_form,
    metric_from_frame,
    nijenhuis_defect,
    pluriclosed_defect,
    random_compatible_metric,
    structure_from_CD,
    transform_frame,
)
from hermlie.liealg import RealLieAlgebra
from hermlie.theorems import is_unimodular_st

from streams import case_instances, mixed_instances

RNG = np.random.default_rng(99)


@pytest.fixture(scope="module")
def instances():
    return [inst for _, inst in mixed_instances(40, slow_every=0, dims=(2, 3, 4))]


def zero_st(n):
    return StructureTensors(np.zeros((n, n, n), complex), np.zeros((n, n, n), complex))


def crand(*shape):
    return RNG.standard_normal(shape) + 1j * RNG.standard_normal(shape)


def test_structure_type_validation():
    with pytest.raises(ValueError):
        ComplexStructure(np.eye(2))
    with pytest.raises(ValueError):
        HermitianMetric(-np.eye(2))
    with pytest.raises(ValueError):
        HermitianMetric(np.array([[1.0, 0.5], [0.0, 1.0]]))
    G = random_compatible_metric(standard_J(3), RNG)
    assert G.is_compatible(standard_J(3))


def test_nijenhuis(instances, catalog_entries):
    J = standard_J(2)
    assert nijenhuis_defect(RealLieAlgebra.abelian(4), J) == 0.0
    for inst in instances:
        s = max(1.0, np.abs(inst.algebra.f).max())
        assert nijenhuis_defect(inst.algebra, inst.J) < 1e-10 * s
        assert closure_defect(inst.algebra, inst.J) < 1e-10 * s
    # non-integrable J: both measures see it
    g = catalog_entries["main-generic-n3"].algebra
    for _ in range(5):
        q = np.linalg.qr(RNG.standard_normal((6, 6)))[0]
        Jr = q @ standard_J(3) @ q.T
        assert (nijenhuis_defect(g, Jr) > 1e-6) == (closure_defect(g, Jr) > 1e-6)


def test_standard_flat_frame():
    n = 3
    frame = build_unitary_frame(RealLieAlgebra.abelian(2 * n), standard_J(n), np.eye(2 * n))
    u = np.eye(2 * n)
    for k in range(n):
        assert np.allclose(frame.E[:, k], (u[:, 2 * k] - 1j * u[:, 2 * k + 1]) / SQRT2)


def test_frame_gram_identity(instances):
    for inst in instances:
        G = random_compatible_metric(inst.J.J, RNG)
        frame = build_unitary_frame(inst.algebra, inst.J, G)
        assert np.abs(frame_gram(frame, G) - np.eye(inst.n)).max() < 1e-12
        fr = build_admissible_frame(inst.algebra, inst.J, inst.a, inst.metric)
        assert np.abs(frame_gram(fr.frame, inst.metric) - np.eye(inst.n)).max() < 1e-12


def test_frame_requires_full_adapted_basis():
    with pytest.raises(DegenerateInput):
        build_unitary_frame(RealLieAlgebra.abelian(4), standard_J(2), np.eye(4), adapted_basis=[np.eye(4)[0]])


def test_metric_from_frame_makes_frame_unitary(instances):
    inst = instances[3]
    E = build_unitary_frame(inst.algebra, inst.J, inst.metric).E
    M = np.tril(crand(inst.n, inst.n)) + 2 * np.eye(inst.n)
    frame = UnitaryFrame(E @ M)
    G = metric_from_frame(frame)
    assert G.is_compatible(inst.J, 1e-10)
    assert np.abs(frame_gram(frame, G) - np.eye(inst.n)).max() < 1e-10


def test_compute_cd(instances, catalog_entries):
    ab = RealLieAlgebra.abelian(6)
    st = compute_CD(ab, standard_J(3), np.eye(6), build_unitary_frame(ab, standard_J(3), np.eye(6)))
    assert np.abs(st.C).max() == 0 and np.abs(st.D).max() == 0
    for name in ("main-generic-n3", "main-degenerate-n3", "main-half-generic-n2"):
        inst = catalog_entries[name]
        fr = build_admissible_frame(inst.algebra, inst.J, inst.a, inst.metric)
        assert vanishing_pattern_residual(fr.structure(), fr.delta) < 1e-10
    for inst in instances:
        frame = build_unitary_frame(inst.algebra, inst.J, inst.metric)
        st = compute_CD(inst.algebra, inst.J, inst.metric, frame)
        assert cd_reconstruction_residual(inst.algebra, frame, st) < 1e-10


def test_frame_transformation_matches_recomputation(instances):
    for inst in instances[:10]:
        frame = build_unitary_frame(inst.algebra, inst.J, inst.metric)
        st = compute_CD(inst.algebra, inst.J, inst.metric, frame)
        M = crand(inst.n, inst.n) + 3 * np.eye(inst.n)
        new = UnitaryFrame(frame.E @ M)
        direct = compute_CD(inst.algebra, inst.J, metric_from_frame(new), new)
        moved = transform_frame(st, M)
        assert np.abs(direct.C - moved.C).max() < 1e-10
        assert np.abs(direct.D - moved.D).max() < 1e-10


def test_chern_torsion():
    assert np.abs(chern_torsion(zero_st(3)).T).max() == 0
    D = crand(3, 3, 3)
    D = D + D.transpose(0, 2, 1)
    assert np.abs(chern_torsion(StructureTensors(np.zeros((3, 3, 3)), D)).T).max() < 1e-15


def test_torsion_of_pluriclosed_A_fixture(catalog_entries):
    from hermlie.theorems import reduce

    inst = catalog_entries["A-pluriclosed-n3"]
    red = reduce(inst.algebra, inst.J, inst.a, inst.metric)
    st, r = red.structure, red.reduced
    assert np.abs(r.X - r.Y).max() < 1e-10 and np.abs(r.Z).max() < 1e-10
    T = chern_torsion(st).T
    diff = T + st.C
    # with Z = 0 and no lambda term, D lives only in the slots [k, i>0, 0]
    mask = np.zeros(diff.shape, bool)
    mask[:, 1:, 0] = mask[:, 0, 1:] = True
    assert np.abs(st.D[~mask]).max() < 1e-10 and np.abs(st.D[:, 0, 1:]).max() < 1e-10
    assert np.abs(diff[~mask]).max() < 1e-10
    assert np.allclose(diff[:, 1:, 0], -st.D[:, 1:, 0], atol=1e-10)
    assert np.allclose(diff[:, 0, 1:], st.D[:, 1:, 0], atol=1e-10)
    assert np.allclose(diff[0, 1:, 0], -r.v, atol=1e-10)


def test_defects_of_reduced_A_data():
    m = 2
    X, Y, Z = crand(m, m), crand(m, m), crand(m, m)
    Y = Y + (np.trace(X) - np.trace(Y)) / m * np.eye(m)
    assert balanced_defect(zero_st(3)) == 0.0
    assert balanced_defect(tensors_A(0.0, np.zeros(m), X, Y, Z)) < 1e-15
    assert balanced_defect(tensors_A(0.0, crand(m), X, Y, Z)) > 1e-3
    Zs = Z + Z.T
    assert kahler_defect(tensors_A(0.0, np.zeros(m), X, X, Zs)) < 1e-15
    assert kahler_defect(tensors_A(0.0, np.zeros(m), X, X, Z)) > 1e-3
    assert kahler_defect(zero_st(3)) == 0.0


def test_pluriclosed_trivial_cases(catalog_entries):
    assert pluriclosed_defect(zero_st(3)) == 0.0
    from hermlie.theorems import reduce

    for name in ("A-kahler-n3", "B-kahler-n3"):
        inst = catalog_entries[name]
        st = reduce(inst.algebra, inst.J, inst.a, inst.metric).structure
        assert kahler_defect(st) < 1e-10
        assert pluriclosed_defect(st) < 1e-10


def test_defects_agree_with_form_calculus():
    for case in ("MainNonabelian", "JaEqualsA", "AbelianQuotient"):
        for _, inst in case_instances(case, 12, dims=(2, 3)):
            frame = build_unitary_frame(inst.algebra, inst.J, inst.metric)
            st = compute_CD(inst.algebra, inst.J, inst.metric, frame)
            o = ce_oracle(inst.algebra, inst.J, inst.metric, frame)
            assert (kahler_defect(st) < 1e-9) == (o.d_omega < 1e-9)
            assert (pluriclosed_defect(st) < 1e-9) == (o.ddbar_omega < 1e-9)
            assert (np.abs(lee_form(st)).max() < 1e-9) == (o.d_omega_n1 < 1e-9)
            assert o.omega_30 < 1e-10


def test_ce_differential_squares_to_zero(instances):
    ab = RealLieAlgebra.abelian(4)
    assert forms.max_abs(ce_differential(ab, {(0,): 1.0, (2,): -2.0}, 1)) == 0.0
    for inst in instances[:12]:
        d = inst.algebra.dim
        alpha = forms.from_tensor(RNG.standard_normal(d), 1)
        beta = forms.from_tensor(np.triu(RNG.standard_normal((d, d)), 1) - np.triu(RNG.standard_normal((d, d)), 1).T, 2)
        s = max(1.0, np.abs(inst.algebra.f).max()) ** 2
        assert forms.max_abs(ce_differential(inst.algebra, ce_differential(inst.algebra, alpha, 1), 2)) < 1e-10 * s
        assert forms.max_abs(ce_differential(inst.algebra, ce_differential(inst.algebra, beta, 2), 3)) < 1e-10 * s


def test_coframe_differential_matches_structure_tensors(instances):
    """d of the dual coframe from the real brackets against -C/-D rebuilt from the metric route."""
    for inst in instances[:12]:
        frame = build_unitary_frame(inst.algebra, inst.J, inst.metric)
        cc_real = complex_structure_tensor(inst.algebra, frame)  # basis inversion, no metric
        cc_cd = structure_from_CD(compute_CD(inst.algebra, inst.J, inst.metric, frame))
        n2 = 2 * inst.n
        for c in range(n2):
            dphi = ce_differential(cc_real, {(c,): 1.0}, 1)
            for a in range(n2):
                for b in range(a + 1, n2):
                    assert abs(dphi.get((a, b), 0.0) + cc_cd[c, a, b]) < 1e-10


def test_gauduchon(instances):
    assert gauduchon_defect(RealLieAlgebra.abelian(4), standard_J(2), np.eye(4)) == 0.0
    for inst in instances:
        frame = build_unitary_frame(inst.algebra, inst.J, inst.metric)
        st = compute_CD(inst.algebra, inst.J, inst.metric, frame)
        if is_unimodular_st(st):
            assert gauduchon_defect(inst.algebra, inst.J, inst.metric) < 1e-9


def test_complex_jacobi_residual(instances):
    assert complex_jacobi_residual(zero_st(3)) == 0.0
    for inst in instances:
        frame = build_unitary_frame(inst.algebra, inst.J, inst.metric)
        st = compute_CD(inst.algebra, inst.J, inst.metric, frame)
        s = max(1.0, np.abs(st.C).max(), np.abs(st.D).max()) ** 2
        assert complex_jacobi_residual(st) < 1e-10 * s
    inst = next(i for i in instances if i.n >= 3 and np.abs(i.algebra.f).max() > 0)
    frame = build_unitary_frame(inst.algebra, inst.J, inst.metric)
    st = compute_CD(inst.algebra, inst.J, inst.metric, frame)
    C = st.C.copy()
    C[0, 0, 1] += 0.1
    C[0, 1, 0] -= 0.1
    assert complex_jacobi_residual(StructureTensors(C, st.D)) > 1e-3
