"""Command-line interface and the line-delimited instance file format.

An instance file holds one JSON object per line, each tagged by ``record``:

``header``      ``{"record": "header", "version": 1, "dim": 2n}`` (always first)
``f``           one line per nonzero structure constant ``[x_i, x_j] = ... + value x_k``, ``i < j``
``J``, ``G``    one line per matrix row, ``{"row": r, "values": [...]}``
``a_basis``     one line per spanning vector of the abelian ideal
``provenance``  optional free-form generator data

Floats are written with 17 significant digits and keys in a fixed order, so
write -> read -> write reproduces the file byte for byte.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from hermlie.errors import (
    GenerationFailed,
    HermlieError,
    InconsistentInstance,
    InstanceFormatError,
    PreconditionViolated,
    RangeConsistency,
)
from hermlie.frames import CaseTag, JType, case_split, compute_ideal_chain, validate_ideal
from hermlie.generator import GenParams, Instance, catalog, gen_pair, generate
from hermlie.hermitian import (
    ComplexStructure,
    HermitianMetric,
    balanced_defect,
    ce_oracle,
    kahler_defect,
    nijenhuis_defect,
    pluriclosed_defect,
    unimodular_residuals,
)
from hermlie.liealg import RealLieAlgebra, Subspace, is_ideal, jacobi_defect, ortho_complement_in
from hermlie.metricsearch import OBJECTIVES, SearchConfig, minimize
from hermlie.theorems import (
    SUITES,
    DEAD_ZONE,
    Status,
    fino_vezzoni_verdict,
    is_balanced_st,
    is_kahler_st,
    is_pluriclosed_st,
    is_unimodular_st,
    kahlerize_A,
    kahlerize_B,
    lemma_suite,
    reduce,
)

FORMAT_VERSION = 1
VALIDITY_TOL = 1e-9
KAHLER_GATE = 1e-9

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

_CASE_ALIASES = {
    "main": CaseTag.MAIN,
    "a": CaseTag.JA_EQUALS_A,
    "b": CaseTag.ABELIAN_QUOTIENT,
    **{c.value.lower(): c for c in CaseTag},
}

_FIELDS = {
    "header": ("record", "version", "dim"),
    "f": ("record", "i", "j", "k", "value"),
    "J": ("record", "row", "values"),
    "G": ("record", "row", "values"),
    "a_basis": ("record", "index", "vector"),
    "provenance": ("record", "data"),
}


# ---------------------------------------------------------------------------
# canonical encoding
# ---------------------------------------------------------------------------


def format_float(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be written")
    if x == 0.0:
        x = 0.0  # drop the sign of zero
    return "%.17g" % x


def encode(value) -> str:
    """Canonical JSON text: insertion-ordered keys, 17-digit floats, no whitespace variance."""
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {encode(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(encode(v) for v in value) + "]"
    raise TypeError(f"cannot encode {type(value).__name__}")


def instance_lines(inst: Instance) -> list:
    g, d = inst.algebra, inst.algebra.dim
    lines = [encode({"record": "header", "version": FORMAT_VERSION, "dim": d})]
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(d):
                val = float(g.f[k, i, j])
                if val != 0.0:
                    lines.append(encode({"record": "f", "i": i, "j": j, "k": k, "value": val}))
    for name, mat in (("J", inst.J.J), ("G", inst.metric.G)):
        for r in range(d):
            lines.append(encode({"record": name, "row": r, "values": mat[r]}))
    for m in range(inst.a.dim):
        lines.append(encode({"record": "a_basis", "index": m, "vector": inst.a.basis[:, m]}))
    if inst.provenance:
        lines.append(encode({"record": "provenance", "data": inst.provenance}))
    return lines


def dumps_instance(inst: Instance) -> str:
    return "\n".join(instance_lines(inst)) + "\n"


def write_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps_instance(inst), encoding="utf-8")


# ---------------------------------------------------------------------------
# parsing and validation
# ---------------------------------------------------------------------------


def _int_field(rec, key, line, lo, hi):
    v = rec[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise InstanceFormatError(f"field {key!r} must be an integer", line)
    if not lo <= v < hi:
        raise InstanceFormatError(f"field {key!r} = {v} out of range [{lo}, {hi})", line)
    return v


def _real(v, key, line):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InstanceFormatError(f"field {key!r} must be a number", line)
    v = float(v)
    if not math.isfinite(v):
        raise InstanceFormatError(f"field {key!r} is not finite", line)
    return v


def _vector(rec, key, line, d):
    v = rec[key]
    if not isinstance(v, list) or len(v) != d:
        raise InstanceFormatError(f"field {key!r} must be a list of {d} numbers", line)
    return np.array([_real(x, key, line) for x in v])


def parse_instance(text: str, strict: bool = True, validate: bool = True) -> Instance:
    """Parse an instance file; ``strict`` rejects unknown records and fields."""
    d = None
    entries, rows, avecs, prov = [], {"J": {}, "G": {}}, {}, {}
    first_line = {}
    for line, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"invalid JSON ({exc.msg})", line) from None
        if not isinstance(rec, dict) or "record" not in rec:
            raise InstanceFormatError("each line must be an object with a 'record' field", line)
        kind = rec["record"]
        if kind not in _FIELDS:
            if strict:
                raise InstanceFormatError(f"unknown record {kind!r}", line)
            continue
        missing = [k for k in _FIELDS[kind] if k not in rec]
        if missing:
            raise InstanceFormatError(f"{kind} record lacks {', '.join(missing)}", line)
        extra = [k for k in rec if k not in _FIELDS[kind]]
        if extra and strict:
            raise InstanceFormatError(f"unknown field(s) {', '.join(extra)} in {kind} record", line)
        first_line.setdefault(kind, line)
        if kind == "header":
            if d is not None:
                raise InstanceFormatError("duplicate header", line)
            if rec["version"] != FORMAT_VERSION:
                raise InstanceFormatError(f"unsupported version {rec['version']!r}", line)
            d = _int_field(rec, "dim", line, 4, 10**4)
            if d % 2:
                raise InstanceFormatError("dim must be even", line)
            continue
        if d is None:
            raise InstanceFormatError("the header must come first", line)
        if kind == "f":
            i = _int_field(rec, "i", line, 0, d)
            j = _int_field(rec, "j", line, 0, d)
            k = _int_field(rec, "k", line, 0, d)
            if i >= j:
                raise InstanceFormatError("structure constants need i < j", line)
            entries.append((i, j, k, _real(rec["value"], "value", line), line))
        elif kind in rows:
            r = _int_field(rec, "row", line, 0, d)
            if r in rows[kind]:
                raise InstanceFormatError(f"duplicate {kind} row {r}", line)
            rows[kind][r] = _vector(rec, "values", line, d)
        elif kind == "a_basis":
            m = _int_field(rec, "index", line, 0, d)
            if m in avecs:
                raise InstanceFormatError(f"duplicate a_basis index {m}", line)
            avecs[m] = _vector(rec, "vector", line, d)
        else:
            if prov:
                raise InstanceFormatError("duplicate provenance", line)
            if not isinstance(rec["data"], dict):
                raise InstanceFormatError("provenance data must be an object", line)
            prov = rec["data"]
    if d is None:
        raise InstanceFormatError("missing header")
    seen = set()
    for i, j, k, _, line in entries:
        if (i, j, k) in seen:
            raise InstanceFormatError(f"duplicate structure constant ({i}, {j}, {k})", line)
        seen.add((i, j, k))
    mats = {}
    for name in ("J", "G"):
        if len(rows[name]) != d:
            raise InstanceFormatError(f"{name} needs {d} rows, found {len(rows[name])}", first_line.get(name))
        mats[name] = np.stack([rows[name][r] for r in range(d)])
    if sorted(avecs) != list(range(len(avecs))):
        raise InstanceFormatError("a_basis indices must be 0, 1, ...", first_line.get("a_basis"))
    g = RealLieAlgebra.from_entries(d, [e[:4] for e in entries])
    try:
        J = ComplexStructure(mats["J"])
    except ValueError as exc:
        raise InstanceFormatError(f"J: {exc}", first_line["J"]) from None
    try:
        G = HermitianMetric(mats["G"])
    except ValueError as exc:
        raise InstanceFormatError(f"G: {exc}", first_line["G"]) from None
    a = _subspace(avecs, d, first_line.get("a_basis"))
    inst = Instance(g, J, G, a, prov)
    if validate:
        validate_instance(inst, first_line)
    return inst


def _subspace(avecs, d, line):
    if not avecs:
        raise InstanceFormatError("a_basis is empty", line)
    B = np.stack([avecs[m] for m in range(len(avecs))], axis=1)
    if np.abs(B.T @ B - np.eye(B.shape[1])).max() <= 1e-12:
        return Subspace(d, B)  # keep an orthonormal basis verbatim
    a = Subspace.span(B, d)
    if a.dim != B.shape[1]:
        raise InstanceFormatError("a_basis vectors are linearly dependent", line)
    return a


def validate_instance(inst: Instance, lines=None, tol: float = VALIDITY_TOL) -> None:
    lines = lines or {}
    g, J = inst.algebra, inst.J.J
    scale = max(1.0, float(np.abs(g.f).max(initial=0.0)))
    jd = jacobi_defect(g)
    if jd > tol * scale**2:
        raise InstanceFormatError(f"structure constants violate the Jacobi identity (defect {jd:.2e})", lines.get("f"))
    nd = nijenhuis_defect(g, J)
    if nd > tol * scale:
        raise InstanceFormatError(f"J is not integrable (Nijenhuis defect {nd:.2e})", lines.get("J"))
    if not inst.metric.is_compatible(J, tol):
        raise InstanceFormatError("G is not J-compatible", lines.get("G"))
    try:
        validate_ideal(g, inst.a, tol)
    except PreconditionViolated as exc:
        raise InstanceFormatError(f"a_basis: {exc}", lines.get("a_basis")) from None


def read_instance(path, strict: bool = True, validate: bool = True) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_instance(text, strict=strict, validate=validate)
    except InstanceFormatError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _is_abelian(g: RealLieAlgebra) -> bool:
    return float(np.abs(g.f).max(initial=0.0)) == 0.0


def analyze_report(inst: Instance) -> dict:
    g, J, G = inst.algebra, inst.J.J, inst.metric
    rep = {"dim": g.dim, "n": g.n}
    if _is_abelian(g):
        rep.update(case="abelian", summary="Kähler (trivially)", unimodular=True)
        return rep
    red = reduce(g, J, inst.a, G)
    st, r, case = red.structure, red.reduced, red.case
    rep["case"] = case.value
    inv = {}
    if case is CaseTag.MAIN:
        rep["type"] = r.jtype.value
        inv.update(r.scalars())
        if r.jtype is JType.GENERIC:
            sb = r.sigma * r.b
            inv["sigma_b"] = sb
            inv["sigma_b_sign"] = 0 if abs(sb) < DEAD_ZONE * red.scale**2 else int(np.sign(sb))
    elif case is CaseTag.JA_EQUALS_A:
        inv["lambda"] = r.lam
        inv["tr_X"] = complex(np.trace(r.X)).real
        inv["tr_Y"] = complex(np.trace(r.Y)).real
    else:
        inv["r0"] = r.r0
        inv.update(r.abcd)
        inv["delta"] = r.delta
        inv["det_Ax"] = float(np.linalg.det(r.Ax))
    rep["invariants"] = inv
    rep["defects"] = {
        "balanced": balanced_defect(st),
        "pluriclosed": pluriclosed_defect(st),
        "kahler": kahler_defect(st),
        "unimodular": float(np.abs(unimodular_residuals(st)).max(initial=0.0)),
    }
    o = ce_oracle(g, J, G)
    rep["oracle"] = {
        "d_omega": o.d_omega,
        "d_omega_n1": o.d_omega_n1,
        "ddbar_omega": o.ddbar_omega,
        "ddbar_omega_n1": o.ddbar_omega_n1,
    }
    rep["unimodular"] = is_unimodular_st(st)
    rep["metric"] = {
        "balanced": is_balanced_st(st),
        "pluriclosed": is_pluriclosed_st(st),
        "kahler": is_kahler_st(st),
    }
    return rep


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, complex):
        return [v.real, v.imag]
    if hasattr(v, "value"):
        return v.value
    return v


def _text(v, indent=0) -> list:
    pad = "  " * indent
    out = []
    for k, x in v.items():
        if isinstance(x, dict):
            out.append(f"{pad}{k}:")
            out.extend(_text(x, indent + 1))
        elif isinstance(x, float):
            out.append(f"{pad}{k}: {x:.6g}")
        elif isinstance(x, list) and len(x) > 8:
            out.append(f"{pad}{k}: [{len(x)} items]")
        else:
            out.append(f"{pad}{k}: {x}")
    return out


def emit(report: dict, as_json: bool, stream=None) -> None:
    stream = stream or sys.stdout
    data = _jsonable(report)
    if as_json:
        stream.write(json.dumps(data, indent=2, ensure_ascii=False) + "\n")
    else:
        stream.write("\n".join(_text(data)) + "\n")


def fuzz_instance(inst: Instance, eps: float, seed: int) -> Instance:
    """Perturb the brackets by relative size ``eps`` while keeping the ideal chain of ``a``.

    The perturbation breaks the Jacobi identity and integrability but keeps
    ``a`` abelian and every ideal of the chain (including the span of ``a``
    and the derived algebra) invariant, so the identity suites still run and
    report which residuals moved.
    """
    g, d = inst.algebra, inst.algebra.dim
    rng = np.random.default_rng(seed)
    chain = compute_ideal_chain(g, inst.J.J, inst.a, check=False)
    nested = []
    for s in (chain.a_J, chain.b, chain.a, chain.a_prime):
        if 0 < s.dim < d and is_ideal(g, s) and all(s.dim > t.dim for t in nested):
            nested.append(s)
    blocks, level, prev = [], [], Subspace.zero(d)
    for lev, s in enumerate(nested + [Subspace.full(d)]):
        comp = ortho_complement_in(s, prev)
        blocks.append(comp.basis)
        level += [lev] * comp.dim
        prev = s
    Q = np.hstack(blocks)
    level = np.array(level)
    top = len(nested) - 1  # the brackets stay inside the largest proper ideal
    fa = g.change_basis(Q).f.copy()
    a_lev = nested.index(next(s for s in nested if s.dim == inst.a.dim))
    noise = rng.standard_normal((d, d, d))
    noise = noise - noise.transpose(0, 2, 1)
    lk, li, lj = np.meshgrid(level, level, level, indexing="ij")
    allowed = (lk <= np.minimum(np.minimum(li, lj), top)) & ~((li <= a_lev) & (lj <= a_lev))
    scale = max(1.0, float(np.abs(g.f).max(initial=0.0)))
    fa = fa + eps * scale * noise * allowed
    g2 = RealLieAlgebra(fa).change_basis(Q.T)
    return Instance(g2, inst.J, inst.metric, inst.a, dict(inst.provenance, fuzz={"eps": eps, "seed": seed}))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _seed(args) -> int:
    env = os.environ.get("HERMLIE_SEED")
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise InstanceFormatError(f"HERMLIE_SEED={env!r} is not an integer") from None
    return args.seed


def _case(text) -> CaseTag:
    try:
        return _CASE_ALIASES[text.lower()]
    except KeyError:
        raise argparse.ArgumentTypeError(f"unknown case {text!r} (main, A, B)") from None


def _out(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_generate(args) -> int:
    seed = _seed(args)
    params = GenParams(args.n, args.case, args.type, args.target, seed, r0=args.r0)
    if args.pair:
        pl, bal = gen_pair(GenParams(args.n, args.case, args.type, "none", seed, r0=args.r0))
        _out(dumps_instance(pl), args.out)
        _out(dumps_instance(bal), args.pair)
        return EXIT_OK
    _out(dumps_instance(generate(params)), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    inst = read_instance(args.file, strict=not args.lenient)
    rep = analyze_report(inst)
    if args.verdict:
        budget = {"multistarts": args.starts, "seed": _seed(args)}
        rep["verdict"] = fino_vezzoni_verdict(inst.algebra, inst.J, inst.a, budget).to_dict()
    emit(rep, args.json)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = read_instance(args.file, strict=not args.lenient)
    if args.fuzz:
        inst = fuzz_instance(inst, args.fuzz, _seed(args))
    suites = args.suite or None
    try:
        reports = lemma_suite(inst.algebra, inst.J, inst.a, inst.metric, tol=args.tol, suites=suites)
    except (InconsistentInstance, PreconditionViolated, RangeConsistency) as exc:
        emit({"passed": False, "error": f"{type(exc).__name__}: {exc}"}, args.json)
        return EXIT_FAIL
    failed = [r for r in reports if r.status is Status.FAIL]
    out = {
        "passed": not failed,
        "reports": [r.to_dict() for r in reports],
        "failures": {r.lemma_id: {k: r.residuals.get(k, False) for k in r.failures()} for r in failed},
    }
    if args.json:
        emit(out, True)
    else:
        lines = [f"{r.lemma_id}: {r.status.value}" for r in reports]
        for rid, bad in out["failures"].items():
            lines += [f"  {rid}.{k} = {v:.3e}" if isinstance(v, float) else f"  {rid}.{k} failed" for k, v in bad.items()]
        lines.append("PASS" if not failed else "FAIL")
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_search(args) -> int:
    inst = read_instance(args.file, strict=not args.lenient)
    cfg = SearchConfig(objective=args.objective, multistarts=args.starts, max_iters=args.max_iters, seed=_seed(args))
    rep = minimize(inst, cfg)
    out = rep.to_dict()
    if args.emit_metric:
        if rep.witness is None:
            out["emitted"] = None
        else:
            prov = {"source": "search", "objective": args.objective, "defect": rep.best_defect}
            write_instance(inst.with_metric(rep.witness, provenance=prov), args.emit_metric)
            out["emitted"] = str(args.emit_metric)
    emit(out, args.json)
    return EXIT_OK


def _same_structure(p: Instance, b: Instance) -> bool:
    if p.algebra.dim != b.algebra.dim:
        return False
    scale = max(1.0, float(np.abs(p.algebra.f).max(initial=0.0)))
    if np.abs(p.algebra.f - b.algebra.f).max(initial=0.0) > 1e-12 * scale:
        return False
    if np.abs(p.J.J - b.J.J).max() > 1e-12:
        return False
    return p.a.contains_space(b.a) and b.a.contains_space(p.a)


def cmd_kahlerize(args) -> int:
    strict = not args.lenient
    pl = read_instance(args.pluriclosed, strict=strict)
    bal = read_instance(args.balanced, strict=strict)
    if not _same_structure(pl, bal):
        raise PreconditionViolated("the two files do not describe the same (g, J, a)")
    g, J, a = pl.algebra, pl.J.J, pl.a
    if _is_abelian(g):
        res_metric, kd = pl.metric, 0.0
    else:
        case = case_split(g, J, a)
        if case is CaseTag.MAIN:
            raise PreconditionViolated("no Kähler metric expected in this case: g/a is non-abelian and Ja != a")
        fn = kahlerize_A if case is CaseTag.JA_EQUALS_A else kahlerize_B
        res = fn(g, J, a, pl.metric, bal.metric, tol=args.tol)
        res_metric, kd = res.metric, res.kahler_defect
    st = reduce(g, J, a, res_metric).structure if not _is_abelian(g) else None
    if st is not None and not is_kahler_st(st, KAHLER_GATE):
        emit({"kahler_defect": kd, "passed": False}, args.json)
        return EXIT_FAIL
    prov = {"source": "kahlerize", "kahler_defect": kd}
    _out(dumps_instance(pl.with_metric(res_metric, provenance=prov)), args.out)
    if args.out not in (None, "-"):
        emit({"kahler_defect": kd, "passed": True, "out": args.out}, args.json)
    return EXIT_OK


def cmd_catalog(args) -> int:
    entries = []
    for name, inst in catalog():
        item = {"name": name, "n": inst.n, "case": inst.provenance.get("params", {}).get("case")}
        if args.out_dir:
            path = Path(args.out_dir) / f"{name}.jsonl"
            path.parent.mkdir(parents=True, exist_ok=True)
            write_instance(inst, path)
            item["file"] = str(path)
        entries.append(item)
    if args.json:
        emit({"entries": entries}, True)
    else:
        sys.stdout.write("".join(f"{e['name']}\t{e['case']}\tn={e['n']}\n" for e in entries))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--lenient", action="store_true", help="ignore unknown records and fields in input files")

    p = argparse.ArgumentParser(prog="hermlie", description="Balanced and pluriclosed metrics on Lie algebras with a codimension-2 abelian ideal.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("generate", parents=[common], help="write a seeded random instance")
    s.add_argument("--n", type=int, required=True, help="complex dimension")
    s.add_argument("--case", type=_case, required=True, help="main, A (Ja = a) or B (Ja != a, g/a abelian)")
    s.add_argument("--type", choices=[t.value for t in JType], default=None)
    s.add_argument("--target", choices=["none", "balanced", "pluriclosed", "kahler"], default="none")
    s.add_argument("--r0", type=int, choices=[0, 1, 2], default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--pair", metavar="PATH", help="write a pluriclosed metric to --out and a balanced one on the same (g, J) to PATH")
    s.add_argument("--out", default=None, help="output file (default stdout)")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("analyze", parents=[common], help="case, reduced invariants and defects")
    s.add_argument("file")
    s.add_argument("--verdict", action="store_true", help="also search for balanced and pluriclosed metrics")
    s.add_argument("--starts", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("verify", parents=[common], help="run the identity suites")
    s.add_argument("file")
    s.add_argument("--suite", action="append", choices=SUITES, help="restrict to a suite (repeatable)")
    s.add_argument("--fuzz", type=float, default=0.0, metavar="EPS", help="perturb the brackets first")
    s.add_argument("--seed", type=int, default=0, help="seed for --fuzz")
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common], help="search the metric cone")
    s.add_argument("file")
    s.add_argument("--objective", choices=OBJECTIVES, default="balanced")
    s.add_argument("--starts", type=int, default=50)
    s.add_argument("--max-iters", type=int, default=300)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--emit-metric", metavar="PATH", help="write the instance with the witness metric")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("kahlerize", parents=[common], help="build a Kähler metric from a pluriclosed and a balanced one")
    s.add_argument("pluriclosed")
    s.add_argument("balanced")
    s.add_argument("--out", default=None, help="output file (default stdout)")
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_kahlerize)

    s = sub.add_parser("catalog", parents=[common], help="list the fixed fixtures")
    s.add_argument("--out-dir", default=None, help="write every fixture as an instance file")
    s.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InconsistentInstance, RangeConsistency) as exc:
        print(f"hermlie: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (HermlieError, ValueError, OSError) as exc:
        print(f"hermlie: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
