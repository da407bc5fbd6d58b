import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from hermlie.cli import (
    EXIT_FAIL,
    EXIT_OK,
    EXIT_USAGE,
    dumps_instance,
    encode,
    format_float,
    fuzz_instance,
    main,
    parse_instance,
    read_instance,
)
from hermlie.errors import InstanceFormatError
from hermlie.hermitian import ce_oracle
from hermlie.liealg import jacobi_defect


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def gen(tmp_path, capsys):
    def make(name, *extra):
        path = tmp_path / f"{name}.jsonl"
        code, _, err = run(["generate", "--out", path, *extra], capsys)
        assert code == EXIT_OK, err
        return path

    return make


def test_format_float():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(-0.0) == "0"
    assert float(format_float(np.pi)) == np.pi
    with pytest.raises(ValueError):
        format_float(float("nan"))
    assert encode({"b": 1.5, "a": [1, -0.0]}) == '{"b": 1.5, "a": [1, 0]}'


def test_generate_is_deterministic(gen):
    a = gen("a", "--n", 3, "--case", "main", "--type", "generic", "--seed", 5).read_bytes()
    b = gen("b", "--n", 3, "--case", "main", "--type", "generic", "--seed", 5).read_bytes()
    c = gen("c", "--n", 3, "--case", "main", "--type", "generic", "--seed", 6).read_bytes()
    assert a == b and a != c


def test_seed_environment_override(gen, monkeypatch):
    ref = gen("ref", "--n", 3, "--case", "A", "--seed", 9).read_bytes()
    monkeypatch.setenv("HERMLIE_SEED", "9")
    assert gen("env", "--n", 3, "--case", "A", "--seed", 1).read_bytes() == ref
    monkeypatch.setenv("HERMLIE_SEED", "x")
    assert main(["generate", "--n", "3", "--case", "A"]) == EXIT_USAGE


def test_write_read_write_is_byte_identical(catalog_entries, tmp_path):
    for name, inst in catalog_entries.items():
        text = dumps_instance(inst)
        back = parse_instance(text)
        assert dumps_instance(back) == text, name
        assert np.array_equal(back.algebra.f, inst.algebra.f)
        assert np.array_equal(back.J.J, inst.J.J) and np.array_equal(back.metric.G, inst.metric.G)
        assert back.a.contains_space(inst.a) and inst.a.contains_space(back.a)


def test_catalog_export_is_deterministic(tmp_path, capsys):
    d1, d2 = tmp_path / "one", tmp_path / "two"
    assert run(["catalog", "--out-dir", d1], capsys)[0] == EXIT_OK
    assert run(["catalog", "--out-dir", d2, "--json"], capsys)[0] == EXIT_OK
    names = sorted(p.name for p in d1.iterdir())
    assert names == sorted(p.name for p in d2.iterdir()) and len(names) > 10
    for n in names:
        assert (d1 / n).read_bytes() == (d2 / n).read_bytes()


def test_parse_errors_carry_line_numbers(catalog_entries):
    text = dumps_instance(catalog_entries["A-n2"])
    lines = text.splitlines()
    bad = "\n".join(lines[:2] + ['{"record":"f","i":0,"j":0,"k":1,"value":1}'] + lines[2:]) + "\n"
    with pytest.raises(InstanceFormatError, match="line 3"):
        parse_instance(bad)
    with pytest.raises(InstanceFormatError):
        parse_instance(lines[1] + "\n" + text)  # header not first
    extra = text + '{"record":"comment","text":"hi"}\n'
    with pytest.raises(InstanceFormatError):
        parse_instance(extra)
    assert parse_instance(extra, strict=False).n == 2


def test_parse_rejects_invalid_structures(catalog_entries):
    inst = catalog_entries["main-generic-n3"]
    text = dumps_instance(inst)
    out, bumped = [], False
    for line in text.splitlines():
        rec = json.loads(line)
        if rec["record"] == "f" and not bumped:
            rec["value"] += 0.5
            bumped = True
            line = json.dumps(rec)
        out.append(line)
    broken = "\n".join(out) + "\n"
    assert jacobi_defect(parse_instance(broken, validate=False).algebra) > 1e-3
    with pytest.raises(InstanceFormatError):
        parse_instance(broken)


def test_analyze_and_verify(gen, capsys):
    path = gen("g", "--n", 3, "--case", "main", "--type", "degenerate", "--target", "pluriclosed", "--seed", 2)
    code, out, _ = run(["analyze", path, "--json"], capsys)
    rep = json.loads(out)
    assert code == EXIT_OK and rep["case"] == "MainNonabelian" and rep["type"] == "degenerate"
    code, out, _ = run(["verify", path], capsys)
    assert code == EXIT_OK and out.strip().endswith("PASS")
    code, out, _ = run(["verify", path, "--suite", "skt2", "--json"], capsys)
    assert code == EXIT_OK and json.loads(out)["passed"]


def test_verify_fuzz_fails_with_named_residuals(gen, capsys):
    path = gen("g", "--n", 3, "--case", "main", "--type", "generic", "--seed", 4)
    code, out, _ = run(["verify", path, "--fuzz", 1e-3, "--seed", 1, "--json"], capsys)
    rep = json.loads(out)
    assert code == EXIT_FAIL and not rep["passed"]
    assert rep.get("failures") or rep.get("error")


def test_fuzz_keeps_the_ideal_chain(catalog_entries):
    inst = catalog_entries["main-generic-n3"]
    fz = fuzz_instance(inst, 1e-3, 0)
    assert np.abs(fz.algebra.f - inst.algebra.f).max() > 0
    assert fz.a.contains_space(inst.a)


def test_search_emits_metric(catalog_entries, tmp_path, capsys):
    src = tmp_path / "in.jsonl"
    src.write_text(dumps_instance(catalog_entries["A-kahler-n3"]))
    dst = tmp_path / "witness.jsonl"
    code, out, _ = run(["search", src, "--objective", "kahler", "--starts", 5, "--emit-metric", dst, "--json"], capsys)
    rep = json.loads(out)
    assert code == EXIT_OK and rep["witness"] and rep["emitted"] == str(dst)
    w = read_instance(dst)
    assert ce_oracle(w.algebra, w.J, w.metric.G).d_omega < 1e-8


@pytest.mark.parametrize("case", ["A", "B"])
def test_kahlerize_command(case, tmp_path, capsys):
    pl, bal, out = tmp_path / "pl.jsonl", tmp_path / "bal.jsonl", tmp_path / "k.jsonl"
    code, _, err = run(["generate", "--n", 3, "--case", case, "--seed", 2, "--out", pl, "--pair", bal], capsys)
    assert code == EXIT_OK, err
    code, msg, err = run(["kahlerize", pl, bal, "--out", out, "--json"], capsys)
    assert code == EXIT_OK, err
    assert json.loads(msg)["passed"]
    k = read_instance(out)
    assert ce_oracle(k.algebra, k.J, k.metric.G).d_omega < 1e-8


def test_kahlerize_rejects_main_case_and_mismatch(gen, capsys):
    main_path = gen("m", "--n", 3, "--case", "main", "--type", "degenerate", "--target", "pluriclosed", "--seed", 1)
    code, _, err = run(["kahlerize", main_path, main_path], capsys)
    assert code == EXIT_USAGE and "no Kähler metric expected" in err
    other = gen("o", "--n", 3, "--case", "A", "--seed", 1)
    assert run(["kahlerize", main_path, other], capsys)[0] == EXIT_USAGE


def test_usage_errors(tmp_path, capsys):
    assert run(["analyze", tmp_path / "missing.jsonl"], capsys)[0] == EXIT_USAGE
    assert run(["generate", "--n", 2, "--case", "main", "--type", "degenerate", "--target", "balanced"], capsys)[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["generate", "--n", "2", "--case", "nonsense"])
    assert exc.value.code == EXIT_USAGE


def test_console_script(tmp_path):
    exe = shutil.which("hermlie")
    cmd = [exe] if exe else [sys.executable, "-m", "hermlie.cli"]
    res = subprocess.run(cmd + ["catalog", "--json"], capture_output=True, text=True, timeout=120)
    assert res.returncode == 0
    assert any(e["name"] == "A-kahler-n3" for e in json.loads(res.stdout)["entries"])
