import numpy as np
import pytest

from hermlie.errors import InconsistentInstance, PreconditionViolated
from hermlie.frames import ReducedA
from hermlie.generator import GenParams, gen_pair, generate
from hermlie.hermitian import ce_oracle, random_compatible_metric
from hermlie.liealg import is_unimodular
from hermlie.theorems import (
    SUITES,
    Answer,
    Status,
    characterize_A,
    det_ax_sign_invariant,
    dprime_invariant,
    fino_vezzoni_verdict,
    kahlerize_A,
    kahlerize_B,
    lemma_suite,
    reduce,
    sign_invariant_sigma_b,
)

from streams import A, B, MAIN, mixed_instances, pairs, targeted

RNG = np.random.default_rng(31)
BUDGET = {"multistarts": 12, "seed": 0}


def suite_failures(inst, **kw):
    reps = lemma_suite(inst.algebra, inst.J, inst.a, inst.metric, **kw)
    return reps, [(r.lemma_id, r.failures()) for r in reps if r.status is Status.FAIL]


def test_suites_pass_on_generated_instances():
    for key, inst in mixed_instances(60, slow_every=0):
        reps, bad = suite_failures(inst)
        assert reps and not bad, (key, bad)


def test_suites_pass_on_catalog(catalog_entries):
    for name, inst in catalog_entries.items():
        if name.startswith("abelian"):
            continue
        _, bad = suite_failures(inst)
        assert not bad, (name, bad)


def test_suite_filter():
    inst = generate(GenParams(3, MAIN, "degenerate", "pluriclosed", seed=2))
    reps, _ = suite_failures(inst, suites=["skt2"])
    assert [r.lemma_id for r in reps] == ["skt-matrix-equation"] and reps[0].status is Status.PASS
    inst = generate(GenParams(3, MAIN, "generic", seed=2))
    reps, _ = suite_failures(inst, suites=["skt2"])
    assert reps[0].status is Status.NOT_APPLICABLE
    with pytest.raises(ValueError):
        lemma_suite(inst.algebra, inst.J, inst.a, inst.metric, suites=["nope"])
    assert set(SUITES) >= {"structure", "skt2"}


def test_suites_detect_corrupted_brackets(catalog_entries):
    inst = catalog_entries["main-generic-n3"]
    f = inst.algebra.f.copy()
    i, j = 4, 5
    f[0, i, j] += 0.3
    f[0, j, i] -= 0.3
    from hermlie.liealg import RealLieAlgebra

    broken = RealLieAlgebra(f)
    try:
        reps = lemma_suite(broken, inst.J, inst.a, inst.metric)
    except (InconsistentInstance, PreconditionViolated):
        return
    assert any(r.status is Status.FAIL for r in reps)


def test_characterization_rows_on_closed_forms():
    m = 2
    N = np.diag([0.5 + 1j, -0.3 + 0.2j])
    z = np.zeros((m, m), complex)
    kahler = characterize_A(ReducedA(0.0, np.zeros(m), N, N.copy(), z)).values["rows"]
    assert kahler == {"unimodular": True, "kahler": True, "balanced": True, "pluriclosed": True}
    pl = characterize_A(ReducedA(0.0, np.array([1.0, 0.5j]), N, N.copy(), z)).values["rows"]
    assert pl["pluriclosed"] and not pl["kahler"] and not pl["balanced"]
    M = np.array([[0.3, 1.0], [0.0, -0.2]], complex)
    non_uni = characterize_A(ReducedA(0.9, np.zeros(m), M.conj().T, -M, z)).values["rows"]
    assert not non_uni["unimodular"]


def test_sigma_b_sign_is_metric_independent():
    for key, inst in targeted("generic", "none", 6, dims=(2, 3)):
        rep = sign_invariant_sigma_b(inst.algebra, inst.J, inst.a, metric_samples=40, seed=key[-1])
        assert rep.status is Status.PASS, (key, rep.residuals, rep.checks)
        assert rep.values["sign"] in (-1, 1)
    inst = generate(GenParams(3, MAIN, "degenerate", seed=1))
    rep = sign_invariant_sigma_b(inst.algebra, inst.J, inst.a, metric_samples=3)
    assert rep.status is Status.NOT_APPLICABLE


def test_dprime_verdict_is_metric_independent():
    for key, inst in targeted("degenerate", "balanced", 4, dims=(3, 4)):
        rep = dprime_invariant(inst.algebra, inst.J, inst.a, metric_samples=30, seed=1)
        assert rep.status is Status.PASS and rep.values["d_prime_zero"], key
    for key, inst in targeted("degenerate", "pluriclosed", 4, dims=(3, 4)):
        rep = dprime_invariant(inst.algebra, inst.J, inst.a, metric_samples=30, seed=1)
        assert rep.status is Status.PASS and not rep.values["d_prime_zero"], key


def test_det_ax_sign(catalog_entries):
    inst = catalog_entries["B-r0-2-n3"]
    rep = det_ax_sign_invariant(inst.algebra, inst.J, inst.a, metric_samples=40)
    assert rep.status is Status.PASS and rep.values["sign"] in (-1, 1)
    inst = catalog_entries["B-r0-1-n3"]
    assert det_ax_sign_invariant(inst.algebra, inst.J, inst.a, metric_samples=3).status is Status.NOT_APPLICABLE


@pytest.mark.parametrize("case,fn", [(A, kahlerize_A), (B, kahlerize_B)])
def test_kahlerize_pairs(case, fn):
    got, _ = pairs(case, 6, dims=(2, 3, 4))
    for key, (pl, bal) in got:
        res = fn(pl.algebra, pl.J, pl.a, pl.metric, bal.metric)
        G = res.metric.G
        assert np.all(np.linalg.eigvalsh(G) > 0)
        assert res.metric.is_compatible(pl.J, 1e-9)
        o = ce_oracle(pl.algebra, pl.J, G, res.frame)
        s = max(1.0, float(np.abs(pl.algebra.f).max()))
        assert o.d_omega < 1e-9 * s, key


def test_kahlerize_preconditions(catalog_entries):
    (key, (pl, bal)), *_ = pairs(A, 1, dims=(3,))[0]
    with pytest.raises(PreconditionViolated):
        kahlerize_A(pl.algebra, pl.J, pl.a, bal.metric, bal.metric)  # balanced side is not pluriclosed
    with pytest.raises(PreconditionViolated):
        kahlerize_A(pl.algebra, pl.J, pl.a, pl.metric, random_compatible_metric(pl.J.J, RNG))
    inst = catalog_entries["main-degenerate-pluriclosed-n3"]
    with pytest.raises(PreconditionViolated):
        kahlerize_A(inst.algebra, inst.J, inst.a, inst.metric, inst.metric)
    with pytest.raises(PreconditionViolated):
        kahlerize_B(inst.algebra, inst.J, inst.a, inst.metric, inst.metric)


def test_verdicts_on_catalog(catalog_entries):
    expected = {
        "abelian-n3": (Answer.YES, Answer.YES, True),
        "main-generic-balanced-n3": (Answer.YES, Answer.NO, False),
        "main-degenerate-pluriclosed-n3": (Answer.NO, Answer.YES, False),
        "A-kahler-n3": (Answer.YES, Answer.YES, True),
        "B-r0-1-n3": (Answer.NO, None, False),
    }
    for name, (bal, pl, kahler) in expected.items():
        inst = catalog_entries[name]
        v = fino_vezzoni_verdict(inst.algebra, inst.J, inst.a, BUDGET)
        assert v.admits_balanced is bal, name
        if pl is not None:
            assert v.admits_pluriclosed is pl, name
        assert (v.kahler_witness is not None) == kahler, name
        if kahler:
            o = ce_oracle(inst.algebra, inst.J, v.kahler_witness.G)
            assert o.d_omega < 1e-8
        if v.balanced_metric is not None:
            assert ce_oracle(inst.algebra, inst.J, v.balanced_metric.G).d_omega_n1 < 1e-8
        if v.pluriclosed_metric is not None:
            assert ce_oracle(inst.algebra, inst.J, v.pluriclosed_metric.G).ddbar_omega < 1e-8


def test_verdict_on_non_unimodular_algebra():
    inst = generate(GenParams(3, MAIN, "generic", seed=0, unimodular=False))
    assert not is_unimodular(inst.algebra)
    v = fino_vezzoni_verdict(inst.algebra, inst.J, inst.a, BUDGET)
    assert v.admits_balanced is Answer.UNKNOWN and "balanced" not in v.floors
    assert not v.obstructions


def test_reduction_is_metric_covariant(catalog_entries):
    # the case split and jtype do not depend on the metric
    inst = catalog_entries["main-half-generic-n3"]
    for _ in range(5):
        G = random_compatible_metric(inst.J.J, RNG)
        red = reduce(inst.algebra, inst.J, inst.a, G)
        assert red.case.value == MAIN and red.reduced.jtype.value == "half-generic"
