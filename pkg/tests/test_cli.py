import json

import numpy as np
import pytest

from submodstab.cli import main


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def cut_spec(tmp_path):
    return write_json(tmp_path / "cut.json", {"n": 2, "kind": "cut", "edges": [[0, 1, 1.0]]})


@pytest.fixture
def dist_spec(tmp_path):
    return write_json(tmp_path / "dist.json", {"p": [0.4, 0.7]})


@pytest.fixture
def uniform_spec(tmp_path):
    return write_json(tmp_path / "uniform.json", {"uniform": 2})


def test_check_ok(cut_spec, capsys):
    assert main(["check", cut_spec]) == 0
    out = capsys.readouterr().out
    assert "non-negative: ok" in out
    assert "submodular: ok" in out


def test_check_fail(tmp_path, capsys):
    bad = write_json(
        tmp_path / "bad.json", {"n": 2, "kind": "dense", "table": [0.0, 1.0, 1.0, 4.0]}
    )
    assert main(["check", bad]) == 1
    assert "submodular: FAIL" in capsys.readouterr().out


def test_check_negative_table(tmp_path, capsys):
    bad = write_json(tmp_path / "neg.json", {"n": 1, "kind": "dense", "table": [-1.0, 0.5]})
    assert main(["check", bad]) == 1
    assert "non-negative: FAIL" in capsys.readouterr().out


def test_missing_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_unknown_kind_is_usage_error(tmp_path, capsys):
    bad = write_json(tmp_path / "odd.json", {"n": 2, "kind": "mystery"})
    assert main(["check", bad]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_missing_file_is_usage_error(tmp_path, capsys):
    assert main(["check", str(tmp_path / "nope.json")]) == 2
    assert "error:" in capsys.readouterr().err


def test_fourier_output(cut_spec, uniform_spec, tmp_path):
    out = tmp_path / "coeffs.csv"
    assert main(["fourier", "--function", cut_spec, "--dist", uniform_spec, "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# tool=submodstab")
    header = next(l for l in lines if not l.startswith("#"))
    assert header == "mask,subset,coefficient"
    data = [l for l in lines if not l.startswith("#")][1:]
    assert len(data) == 4
    # the subset cell itself contains commas, so parse from the ends
    by_mask = {int(l.split(",", 1)[0]): float(l.rsplit(",", 1)[1]) for l in data}
    assert by_mask[0] == pytest.approx(0.5)
    assert by_mask[3] == pytest.approx(-0.5)


def test_stability_csv(cut_spec, dist_spec, capsys):
    assert (
        main(["stability", "--function", cut_spec, "--dist", dist_spec, "--rho-grid", "0:1:0.5"])
        == 0
    )
    lines = capsys.readouterr().out.splitlines()
    rows = [l for l in lines if not l.startswith("#")]
    assert rows[0] == "rho,stab,bound,slack,norm2sq,pmin"
    assert len(rows) == 4
    assert [r.split(",")[0] for r in rows[1:]] == ["0.0", "0.5", "1.0"]


def test_rho_grid_comma_list(cut_spec, uniform_spec, capsys):
    assert (
        main(["stability", "--function", cut_spec, "--dist", uniform_spec, "--rho-grid", "0.25"])
        == 0
    )
    rows = [l for l in capsys.readouterr().out.splitlines() if not l.startswith("#")]
    assert len(rows) == 2


def test_bad_rho_grid(cut_spec, uniform_spec, capsys):
    code = main(
        ["stability", "--function", cut_spec, "--dist", uniform_spec, "--rho-grid", "0:2:0.5"]
    )
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_lowdeg_rejects_rho_one(cut_spec, uniform_spec, capsys):
    code = main(
        ["lowdeg", "--function", cut_spec, "--dist", uniform_spec, "--rho-grid", "0.5,1.0"]
    )
    assert code == 2


def test_lowdeg_runs(cut_spec, dist_spec, capsys):
    assert main(["lowdeg", "--function", cut_spec, "--dist", dist_spec]) == 0
    rows = [l for l in capsys.readouterr().out.splitlines() if not l.startswith("#")]
    assert rows[0] == "rho,gamma,d,error,bound,slack"
    assert len(rows) > 1


def test_dimension_mismatch(cut_spec, tmp_path, capsys):
    d3 = write_json(tmp_path / "d3.json", {"uniform": 3})
    assert main(["stability", "--function", cut_spec, "--dist", d3]) == 2


def test_verify_stability_suite(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(
        [
            "verify",
            "--suite",
            "stability",
            "--count",
            "8",
            "--sizes",
            "2:3",
            "--seed",
            "1",
            "-o",
            str(out),
        ]
    )
    assert code == 0
    text = out.read_text()
    assert "instance,family,n,pmin,rho,stab,bound,slack,norm2sq" in text
    assert "# min_slack=" in text and "ok=True" in text
    assert "# norm_ratio_max=" in text


def test_verify_negative_control_fails(capsys):
    code = main(
        [
            "verify",
            "--suite",
            "pointwise",
            "--count",
            "4",
            "--sizes",
            "3",
            "--uniform",
            "--negative-control",
            "--rho-grid",
            "0.5",
        ]
    )
    assert code == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "supermodular_square" in out


def test_verify_bad_family(capsys):
    code = main(["verify", "--suite", "stability", "--families", "nonsense"])
    assert code == 2


def test_learn_noiseless(cut_spec, uniform_spec, capsys):
    code = main(
        [
            "learn",
            "--function",
            cut_spec,
            "--dist",
            uniform_spec,
            "--degree",
            "2",
            "--m",
            "200",
            "--test-m",
            "50",
        ]
    )
    assert code == 0
    rows = [l for l in capsys.readouterr().out.splitlines() if not l.startswith("#")]
    assert rows[0] == "trial,seed,train_l1,test_l1,opt_pool,eps,degree,m"
    cells = rows[1].split(",")
    assert float(cells[2]) < 1e-8  # full-degree noiseless fit is exact
    assert cells[6] == "2"


def test_learn_eps_degree(cut_spec, dist_spec, capsys):
    code = main(
        [
            "learn",
            "--function",
            cut_spec,
            "--dist",
            dist_spec,
            "--eps",
            "0.3",
            "--m",
            "120",
            "--test-m",
            "40",
        ]
    )
    assert code == 0
    rows = [l for l in capsys.readouterr().out.splitlines() if not l.startswith("#")]
    assert rows[1].split(",")[6] == "2"  # capped at n


def test_learn_needs_degree_or_eps(cut_spec, uniform_spec, capsys):
    assert main(["learn", "--function", cut_spec, "--dist", uniform_spec]) == 2


def test_release_roundtrip(tmp_path):
    db = write_json(tmp_path / "db.json", {"d": 2, "items": [0, 1, 3, 3]})
    report = tmp_path / "report.csv"
    coeffs = tmp_path / "coeffs.csv"
    code = main(
        [
            "release",
            "--database",
            db,
            "--eps",
            "inf",
            "--alpha",
            "0.3",
            "--seed",
            "3",
            "-o",
            str(report),
            "--coeffs-output",
            str(coeffs),
        ]
    )
    assert code == 0
    lines = [l for l in report.read_text().splitlines() if not l.startswith("#")]
    assert lines[0] == "alpha,beta,eps_spent,degree,queries"
    alpha, beta, spent, degree, queries = lines[1].split(",")
    assert float(beta) == 0.0  # eps=inf reproduces exact answers
    assert float(spent) == float("inf")
    assert degree == "2" and queries == "4"
    coeff_rows = [l for l in coeffs.read_text().splitlines() if not l.startswith("#")]
    assert coeff_rows[0] == "mask,subset,coefficient"
    assert len(coeff_rows) == 5


def test_release_bad_eps(tmp_path, capsys):
    db = write_json(tmp_path / "db.json", {"d": 2, "items": [0, 1]})
    assert main(["release", "--database", db, "--eps", "0", "--alpha", "0.3"]) == 2


def test_release_finite_eps_accounting(tmp_path, capsys):
    db = write_json(tmp_path / "db.json", {"d": 3, "items": list(range(8))})
    assert main(["release", "--database", db, "--eps", "2.0", "--alpha", "0.4"]) == 0
    rows = [l for l in capsys.readouterr().out.splitlines() if not l.startswith("#")]
    spent = float(rows[1].split(",")[2])
    assert spent == pytest.approx(2.0)
