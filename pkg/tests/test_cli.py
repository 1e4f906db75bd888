import csv
import io
import json

import pytest

from cwbarriers.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_tensor_show(capsys):
    code, out, _ = run(capsys, "tensor", "show", "cw:4")
    assert code == 0
    assert "dims: 6 6 6" in out
    assert "support: 15" in out
    assert "orbits: 6" in out


def test_tensor_show_from_file(tmp_path, capsys):
    path = tmp_path / "t.txt"
    path.write_text("dims 2 2 2\n0 0 0 1\n1 1 1 1\n")
    code, out, _ = run(capsys, "tensor", "show", f"file:{path}")
    assert code == 0
    assert "support: 2" in out


def test_omega_csv(capsys):
    code, out, _ = run(capsys, "barrier", "omega", "--tensor", "cw:1", "--p", "2", "--rank", "3",
                       "--theta-step", "0.02")
    assert code == 0
    (row,) = rows(out)
    assert list(row) == ["id", "p", "kappa", "barrier", "theta1", "theta2", "theta3", "rank_mode", "clamped"]
    assert abs(float(row["barrier"]) - 3.0551) < 2e-3
    assert row["rank_mode"] == "user-supplied"
    assert row["clamped"] == "0"
    assert len(row["barrier"].split(".")[1]) == 6


def test_omega_is_deterministic(capsys):
    args = ("barrier", "omega", "--tensor", "cw:3", "--p", "1.5", "--theta-step", "0.02")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_threads_do_not_change_csv(capsys, monkeypatch):
    args = ("barrier", "omega", "--tensor", "cw:2", "--p", "2", "--theta-step", "0.02")
    _, serial, _ = run(capsys, *args)
    monkeypatch.setenv("CWBARRIERS_THREADS", "4")
    _, threaded, _ = run(capsys, *args)
    assert serial == threaded


def test_omega_json(capsys):
    code, out, _ = run(capsys, "barrier", "omega", "--tensor", "diag:2", "--p", "3",
                       "--theta-step", "0.05", "--format", "json")
    assert code == 0
    (rec,) = json.loads(out)
    assert rec["barrier"] == pytest.approx(4.0)
    assert rec["clamped"] is False


def test_alpha(capsys):
    code, out, _ = run(capsys, "barrier", "alpha", "--tensor", "cw:6")
    assert code == 0
    (row,) = rows(out)
    assert abs(float(row["barrier"]) - 0.543) < 5e-3
    assert row["p"] == ""


def test_curve_and_svg(tmp_path, capsys):
    code, out, _ = run(capsys, "barrier", "curve", "--tensor", "diag:2", "--p-range", "0:2:0.5",
                       "--theta-step", "0.05")
    assert code == 0
    values = [float(r["barrier"]) for r in rows(out)]
    assert values == pytest.approx([2.0, 2.0, 2.0, 2.5, 3.0])
    svg = tmp_path / "c.svg"
    code, _, _ = run(capsys, "barrier", "curve", "--tensor", "diag:2", "--p", "0:2:0.5",
                     "--theta-step", "0.05", "--format", "svg", "--out", str(svg))
    assert code == 0
    text = svg.read_text()
    assert text.startswith("<svg") and "<polyline" in text


def test_table1_subset(capsys):
    code, out, _ = run(capsys, "barrier", "table1", "--q", "1,6")
    assert code == 0
    got = {r["id"]: r for r in rows(out)}
    assert got["cw:1"]["barrier"] == "3.0551"
    assert abs(float(got["cw:6"]["barrier"]) - 3.1038) < 2e-3
    assert got["cw:6"]["rank_mode"] == "registry"


def test_mixed(capsys):
    code, out, _ = run(capsys, "barrier", "mixed", "--tensor", "cw:7@9", "--tensor", "cw:6@5.14",
                       "--p", "2", "--theta-step", "0.02")
    assert code == 0
    (row,) = rows(out)
    assert row["rank_mode"] == "product-heuristic"
    assert 3.10 < float(row["barrier"]) < 3.115


def test_mixed_user_rank_required(capsys):
    code, _, err = run(capsys, "barrier", "mixed", "--tensor", "cw:2@1", "--rank-mode", "user")
    assert code == 2
    assert "asymptotic_rank" in err


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle", "check", "--tensor", "mm:2,2,1", "--theta", "0.2,0.5,0.3")
    assert code == 0
    assert "status: ok" in out


def test_oracle_mismatch_exit_code(capsys):
    code, out, _ = run(capsys, "oracle", "check", "--tensor", "cw:1", "--theta", "0.3,0.3,0.4",
                       "--grid-step", "0.1", "--tolerance", "1e-9")
    assert code == 1
    assert "MISMATCH" in out


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"tensor": "diag:2", "p": 3.0, "theta_step": 0.05}))
    code, out, _ = run(capsys, "barrier", "omega", "--config", str(cfg))
    assert code == 0
    assert float(rows(out)[0]["barrier"]) == pytest.approx(4.0)
    code, out, _ = run(capsys, "barrier", "omega", "--config", str(cfg), "--p", "0.5")
    assert float(rows(out)[0]["barrier"]) == pytest.approx(2.0)


@pytest.mark.parametrize("argv", [
    ("barrier", "omega", "--p", "2"),
    ("barrier", "omega", "--tensor", "mm:2,2,2", "--p", "2"),
    ("barrier", "omega", "--tensor", "bogus:1", "--p", "2"),
    ("barrier", "omega", "--tensor", "cw:2", "--p", "-1"),
    ("barrier", "curve", "--tensor", "cw:2", "--p-range", "0:1"),
    ("barrier", "table1", "--q", "0..3"),
    ("oracle", "check", "--tensor", "cw:1", "--theta", "0.5,0.5,0.5"),
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_bad_symmetry_file(tmp_path, capsys):
    path = tmp_path / "act.txt"
    path.write_text("axis1: 0 3 2 1\naxis2: 0 3 2 1\naxis3: 0 1 2 3\n")
    code, _, err = run(capsys, "tensor", "show", "cw:2", "--symmetry", f"file:{path}")
    assert code == 2
    assert "outside the support" in err
