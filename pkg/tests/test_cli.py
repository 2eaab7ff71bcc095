import csv
import io

import pytest

from cqlearn.cli import COLUMNS, ExperimentConfig, cmd_run, cmd_verify, main
from cqlearn.instances import gen_lb_margin, gen_lb_r3
from cqlearn.textio import format_witness


def rows_of(text):
    lines = text.splitlines()
    assert lines[0].startswith("# cqlearn rng=numpy.random.PCG64")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def strip_wall(text):
    return [{k: v for k, v in r.items() if k != "wall_ms"} for r in rows_of(text)]


def test_boost_run_key_value_form(capsys):
    code = main(["run", "boost", "--grid", "N=6", "d=3", "n=300", "trials=3", "seed=7", "k=5"])
    out = capsys.readouterr().out
    rows = rows_of(out)
    assert code == 0 and len(rows) == 3
    assert list(rows[0]) == list(COLUMNS)
    assert all(r["soundness_violations"] == "0" and r["mode"] == "boost" for r in rows)
    assert [r["trial"] for r in rows] == ["0", "1", "2"]


def test_learn2d_run_flag_form(capsys):
    assert main(["run", "learn2d", "--n", "2000", "--trials", "2", "--seed", "1"]) == 0
    rows = rows_of(capsys.readouterr().out)
    assert all(int(r["total_queries"]) > 0 and r["N_or_eta"] == "" for r in rows)


def test_witness_run(capsys):
    assert main(["run", "witness", "--kind", "r3", "--n", "12"]) == 0
    captured = capsys.readouterr()
    assert "clean" in captured.err


@pytest.mark.parametrize("argv", [
    ["run", "statistical", "trials=2", "N=8"],
    ["run", "infdim-check", "trials=2"],
    ["run", "boost", "--margin", "d=2", "n=150", "eta=1/4", "k=4", "trials=2"],
])
def test_other_modes(argv, capsys):
    assert main(argv) == 0
    assert len(rows_of(capsys.readouterr().out)) == 2


def test_csv_is_reproducible_and_jobs_keep_order(tmp_path):
    cfg = ExperimentConfig("boost", kind="grid", N=5, d=2, n=36, trials=4, seed=3, k_override=2).validated()
    a, b = io.StringIO(), io.StringIO()
    assert cmd_run(cfg, jobs=1, stdout=a, stderr=io.StringIO()) == 0
    assert cmd_run(cfg, jobs=2, stdout=b, stderr=io.StringIO()) == 0
    assert strip_wall(a.getvalue()) == strip_wall(b.getvalue())
    path = tmp_path / "runs.csv"
    cfg2 = ExperimentConfig("boost", kind="grid", N=5, d=2, n=36, trials=4, seed=3, k_override=2,
                            out=str(path)).validated()
    cmd_run(cfg2, jobs=1, stderr=io.StringIO())
    assert strip_wall(path.read_text()) == strip_wall(a.getvalue())


def test_env_default_jobs(monkeypatch, capsys):
    monkeypatch.setenv("CQLEARN_JOBS", "2")
    assert main(["run", "boost", "N=4", "d=2", "n=25", "k=2", "trials=2"]) == 0


@pytest.mark.parametrize("argv", [
    ["run", "boost", "trials=0"],
    ["run", "boost", "zz=1"],
    ["run", "boost", "N=x"],
    ["run", "witness", "--kind", "grid"],
    ["run", "nosuchmode"],
    ["run", "statistical", "--eps", "2"],
])
def test_invalid_config_is_usage_error(argv):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2


def test_verify_exported_witnesses(tmp_path, capsys):
    p = tmp_path / "lb.txt"
    assert main(["export", "margin-witness", "--n", "10", "--out", str(p)]) == 0
    assert cmd_verify(str(p)) == 0
    p.write_text(format_witness(gen_lb_r3(6)))
    assert cmd_verify(str(p)) == 0


def test_verify_flags_corruption(tmp_path, capsys):
    text = format_witness(gen_lb_margin(5))
    lines = text.splitlines()
    i = next(k for k, l in enumerate(lines) if l.startswith("w:")) + 2  # w line of c_2
    parts = lines[i].split()
    parts[2] = parts[2][1:] if parts[2].startswith("-") else "-" + parts[2]
    lines[i] = " ".join(parts)
    p = tmp_path / "bad.txt"
    p.write_text("\n".join(lines) + "\n")
    assert cmd_verify(str(p)) == 1


def test_verify_flipped_label(tmp_path, capsys):
    p = tmp_path / "inst.txt"
    p.write_text("2 3\n1 0\n0 1\n1 1\nw: 1 -2\ny: +1 -1 -1\n")
    assert cmd_verify(str(p)) == 0
    p.write_text("2 3\n1 0\n0 1\n1 1\nw: 1 -2\ny: +1 +1 -1\n")
    assert cmd_verify(str(p)) == 1
    # no w line: 1 positive and 2 negative cannot both hold on a line
    p.write_text("1 2\n1\n2\ny: +1 -1\n")
    assert cmd_verify(str(p)) == 1


def test_verify_parse_error(tmp_path, capsys):
    p = tmp_path / "empty.txt"
    p.write_text("")
    assert cmd_verify(str(p)) == 2
    assert ":1:" in capsys.readouterr().err
    assert cmd_verify(str(tmp_path / "missing.txt")) == 2


def test_export_kinds(capsys):
    for kind in ("r3", "grid", "margin", "plane"):
        assert main(["export", kind, "--n", "5"]) == 0
    assert "w:" in capsys.readouterr().out
