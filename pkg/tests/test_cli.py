import os
import subprocess
import sys

import pytest

from clvernacular import document as D
from clvernacular.cli import InputError, RunConfig, main

from conftest import corpus, golden


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def proved(tmp_path, capsys):
    out = str(tmp_path / "th.xml")
    code, stdout, _ = run(capsys, "prove", corpus("th_4_19.p"), "--date", "2026-01-01", "-o", out)
    assert code == 0
    return out, stdout


def test_prove_writes_golden(proved):
    path, stdout = proved
    assert stdout.startswith("PROVED th_4_19 ")
    assert stdout.split()[-1] == "17"
    with open(path, encoding="utf-8") as fh:
        assert fh.read() == golden("th_4_19.xml")


def test_prove_default_output_name(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, _ = run(capsys, "prove", corpus("th_2_1.p"), "--date", "2026-01-01")
    assert code == 0 and (tmp_path / "th_2_1.xml").exists()


def test_date_makes_output_reproducible(tmp_path, capsys):
    a, b = str(tmp_path / "a.xml"), str(tmp_path / "b.xml")
    for out in (a, b):
        assert run(capsys, "prove", corpus("th_3_4.p"), "--date", "2026-01-01", "-o", out)[0] == 0
    assert open(a, "rb").read() == open(b, "rb").read()


def test_check_and_validate(proved, capsys):
    path, _ = proved
    assert run(capsys, "check", path) == (0, "OK th_4_19\n", "")
    assert run(capsys, "validate", path) == (0, f"valid {path}\n", "")


def test_check_detects_tampering(proved, capsys, tmp_path):
    path, _ = proved
    text = open(path, encoding="utf-8").read()
    bad = tmp_path / "bad.xml"
    # cite the wrong axiom in the first modus ponens
    bad.write_text(text.replace("<theorem_name>th_3_1<", "<theorem_name>th_2_2<", 1),
                   encoding="utf-8")
    code, out, _ = run(capsys, "check", str(bad))
    assert code == 1 and out.startswith("FAIL th_4_19:")


def test_validate_reports_violations(tmp_path, capsys):
    bad = tmp_path / "bad.xml"
    bad.write_text(golden("th_4_19.xml").replace("<prover>clvernacular</prover>", ""))
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 2
    assert "/main/frontpage[1]" in out


def test_xml_export_is_byte_stable(proved, tmp_path, capsys):
    path, _ = proved
    outdir = tmp_path / "out"
    code, _, _ = run(capsys, "export", path, "--to", "xml", "-o", str(outdir))
    assert code == 0
    assert (outdir / "th.xml").read_bytes() == open(path, "rb").read()


def test_export_all_targets(proved, tmp_path, capsys):
    path, _ = proved
    outdir = tmp_path / "all"
    layout = str(corpus("../tarski.layout"))
    code, out, _ = run(capsys, "export", path, "--layout", layout, "-o", str(outdir))
    assert code == 0
    names = sorted(os.listdir(outdir))
    assert names == ["VernacularTactics.v", "th.html", "th.tex", "th.thy", "th.txt", "th.v",
                     "th.xml", "vernacular.sty"]
    assert "AB \\cong AD" in (outdir / "th.tex").read_text()
    assert len(out.splitlines()) == 6


def test_export_unknown_target(proved, capsys):
    path, _ = proved
    code, _, err = run(capsys, "export", path, "--to", "pdf")
    assert code == 2 and "unknown target" in err


def test_export_bad_layout(proved, capsys, write):
    path, _ = proved
    code, _, err = run(capsys, "export", path, "--layout", write("x.layout", "cong/4 infix <"))
    assert code == 2 and "layout" in err


def test_unsupported_term_is_input_error(write, capsys):
    p = write("f.p", "fof(a, axiom, p(f(X))).\nfof(g, conjecture, p(a)).")
    code, _, err = run(capsys, "prove", p)
    assert code == 2
    assert "UnsupportedTerm" in err


def test_not_proved_exit_code(write, capsys, tmp_path):
    p = write("n.p", "fof(a, axiom, p(a)).\nfof(g, conjecture, q(a)).")
    code, out, _ = run(capsys, "prove", p, "--max-steps", "16", "-o", str(tmp_path / "n.xml"))
    assert code == 1
    assert out.startswith("EXHAUSTED g ")
    # the unproved conjecture is still recorded
    doc = D.parse_file(str(tmp_path / "n.xml"))
    assert [it.is_theorem for it in doc.items()] == [False]


def test_hints(write, capsys, tmp_path):
    hints = write("h.txt", "# only these\nth_3_1\n")
    code, out, _ = run(capsys, "prove", corpus("th_4_19.p"), "--hints", hints,
                       "--max-steps", "512", "-o", str(tmp_path / "h.xml"))
    assert code == 1 and out.startswith("EXHAUSTED")
    bad = write("bad.txt", "no_such_axiom\n")
    assert run(capsys, "prove", corpus("th_4_19.p"), "--hints", bad)[0] == 2


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["prove"],
    ["prove", "x.p", "--timeout", "0"],
    ["prove", "x.p", "--max-steps", "0"],
    ["prove", "x.p", "--date", "yesterday"],
    ["batch", "m.txt", "--jobs", "0"],
    ["check", "/no/such/file.xml"],
    ["prove", "/no/such/file.p"],
])
def test_usage_errors(argv, capsys):
    assert run(capsys, *argv)[0] == 2


def test_run_config_validation():
    with pytest.raises(InputError):
        RunConfig("export", targets=("isar", "docx"))
    cfg = RunConfig("prove", timeout=5, max_steps=64, max_splits=2)
    assert (cfg.limits.max_steps, cfg.limits.max_splits, cfg.limits.wall_clock) == (64, 2, 5)


def test_batch_jobs_do_not_change_output(tmp_path, capsys):
    docs = []
    for jobs in ("1", "3"):
        out = tmp_path / f"j{jobs}" / "tarski.xml"
        code, summary, _ = run(capsys, "batch", corpus("manifest.txt"), "--date", "2026-01-01",
                               "--timeout", "20", "--jobs", jobs, "-o", str(out))
        assert code == 0
        names = [l.split("\t")[0] for l in summary.splitlines()[1:]]
        assert names[0] == "th_2_1" and names[-1] == "th_4_19"
        assert (out.parent / "tarski_summary.tsv").exists()
        docs.append(sorted((p.name, p.read_bytes()) for p in out.parent.iterdir()
                           if p.suffix == ".xml"))
    assert docs[0] == docs[1]
    assert run(capsys, "check", str(tmp_path / "j1" / "tarski.xml"))[0] == 0


def test_batch_missing_problem_is_an_error_row(tmp_path, capsys, write):
    write("p.p", "fof(a, axiom, p(a)).\nfof(g, conjecture, p(a)).")
    manifest = write("m.txt", "p.p\nmissing.p\n")
    code, out, err = run(capsys, "batch", manifest, "-o", str(tmp_path / "m.xml"))
    assert code == 0
    assert out.splitlines()[1].startswith("g\tPROVED")
    assert out.splitlines()[2].startswith("missing.p\tERROR")
    assert "missing.p" in err


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "clvernacular", "validate", "nonexistent.xml"],
                       capture_output=True, text=True, cwd=tmp_path)
    assert r.returncode == 2
