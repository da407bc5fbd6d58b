import numpy as np
import pytest

from hermlie.hermitian import compute_CD, frame_gram, random_compatible_metric
from hermlie.metricsearch import (
    MetricParam,
    SearchConfig,
    defect_objective,
    metric_for,
    minimize,
    n_params,
    normalized_defect,
    objective_and_gradient,
    reference,
    structure_for,
    witness_defects,
)

RNG = np.random.default_rng(21)


def random_param(n, spread=0.5):
    return MetricParam.from_vector(spread * RNG.standard_normal(n_params(n)), n)


def test_param_encoding_roundtrip():
    for n in (2, 3, 4):
        p = random_param(n)
        q = MetricParam.from_vector(p.to_vector(), n)
        assert np.abs(p.L - q.L).max() < 1e-12
        assert abs(np.linalg.det(p.gram) - 1) < 1e-10
        assert np.abs(np.triu(p.L, 1)).max() == 0 and np.all(np.diag(p.L).real > 0)
        M = p.frame_change
        assert np.abs(M.conj().T @ p.gram @ M - np.eye(n)).max() < 1e-10
    assert np.array_equal(MetricParam.identity(3).to_vector(), np.zeros(9))


def test_determinant_direction_is_ignored(catalog_entries):
    inst = catalog_entries["main-generic-n3"]
    x = 0.4 * RNG.standard_normal(9)
    y = x.copy()
    y[:3] += 0.7
    for which in ("balanced", "pluriclosed", "kahler"):
        assert normalized_defect(inst, x, which) == pytest.approx(normalized_defect(inst, y, which), rel=1e-12)


def test_structure_for_matches_direct_computation(catalog_entries):
    """Tensors moved by the frame change against tensors recomputed from the new metric."""
    for name in ("main-generic-n3", "A-n3", "B-r0-2-n3"):
        inst = catalog_entries[name]
        p = random_param(inst.n)
        G, frame = metric_for(inst, p)
        assert G.is_compatible(inst.J, 1e-10)
        assert np.abs(frame_gram(frame, G) - np.eye(inst.n)).max() < 1e-10
        direct = compute_CD(inst.algebra, inst.J, G, frame)
        moved = structure_for(inst, p)
        assert np.abs(direct.C - moved.C).max() < 1e-10 and np.abs(direct.D - moved.D).max() < 1e-10


def test_defect_vanishes_exactly_where_oracle_does(catalog_entries):
    cases = [
        ("main-generic-balanced-n3", "balanced", "d_omega_n1"),
        ("main-degenerate-pluriclosed-n3", "pluriclosed", "ddbar_omega"),
        ("A-kahler-n3", "kahler", "d_omega"),
    ]
    for name, which, key in cases:
        inst = catalog_entries[name]
        ident = MetricParam.identity(inst.n)
        assert normalized_defect(inst, ident, which) < 1e-10
        assert witness_defects(inst, inst.metric)[key] < 1e-10
        p = random_param(inst.n)
        G, _ = metric_for(inst, p)
        assert (normalized_defect(inst, p, which) < 1e-9) == (witness_defects(inst, G)[key] < 1e-9)


def test_scale_invariance(catalog_entries):
    # both sides rebuild their reference frame from the metric alone
    inst = catalog_entries["main-generic-n3"]
    inst = inst.with_metric(inst.metric)
    p = random_param(3)
    scaled = inst.with_metric(type(inst.metric)(4.0 * inst.metric.G))
    for which in ("balanced", "pluriclosed", "kahler"):
        assert normalized_defect(inst, p, which) == pytest.approx(normalized_defect(scaled, p, which), rel=1e-9)


def test_gradient_matches_central_differences(catalog_entries):
    for name in ("main-generic-n3", "A-n3", "B-r0-1-n3"):
        inst = catalog_entries[name]
        ref = reference(inst)
        for which in ("balanced", "pluriclosed", "kahler"):
            x = 0.3 * RNG.standard_normal(n_params(inst.n))
            f, g = objective_and_gradient(inst, x, which, ref)
            assert f == pytest.approx(defect_objective(inst, x, which, ref), rel=1e-14)
            for k in range(x.size):
                h = 1e-6 * max(1.0, abs(x[k]))
                e = np.zeros_like(x)
                e[k] = h
                fd = (defect_objective(inst, x + e, which, ref) - defect_objective(inst, x - e, which, ref)) / (2 * h)
                assert abs(fd - g[k]) <= 1e-5 * max(1.0, np.abs(g).max())


def test_search_recovers_metrics_from_random_starts(catalog_entries):
    for name, which in (("main-generic-balanced-n3", "balanced"), ("A-kahler-n3", "kahler"), ("B-kahler-n3", "kahler")):
        inst = catalog_entries[name]
        moved = inst.with_metric(random_compatible_metric(inst.J.J, RNG))
        assert normalized_defect(moved, MetricParam.identity(inst.n), which) > 1e-3
        rep = minimize(moved, SearchConfig(which, multistarts=10, seed=1))
        assert rep.witness is not None and rep.floor < 1e-9
        assert rep.oracle_defect <= 1e-8
        d = witness_defects(moved, rep.witness)
        key = {"balanced": "d_omega_n1", "kahler": "d_omega"}[which]
        assert d[key] < 1e-8


def test_search_is_deterministic(catalog_entries):
    inst = catalog_entries["main-generic-n3"]
    cfg = SearchConfig("balanced", multistarts=4, max_iters=50, seed=3)
    a, b = minimize(inst, cfg), minimize(inst, cfg)
    assert np.array_equal(a.start_defects, b.start_defects)
    assert a.to_dict() == b.to_dict()


def test_abelian_is_trivially_kahler(catalog_entries):
    rep = minimize(catalog_entries["abelian-n3"], SearchConfig("kahler", multistarts=3))
    assert rep.floor == 0.0 and rep.witness is not None


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig("hyperkahler")
    with pytest.raises(ValueError):
        SearchConfig(defect_gate=0.0)
    with pytest.raises(ValueError):
        SearchConfig(multistarts=0)
    with pytest.raises(ValueError):
        SearchConfig(max_witness_condition=0.5)
    assert SearchConfig("Kahler").objective == "kahler"
