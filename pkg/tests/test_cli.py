import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from choicedyn import models
from choicedyn.cli import main
from choicedyn.setdyn import PointCloud, compute_K, directed_distance, hutchinson_step
from choicedyn.symbolic import UPString


def run_cli(*argv):
    return main(list(argv))


def test_attractor_writes_csv_and_svg(tmp_path):
    out = tmp_path / "run"
    code = run_cli("attractor", "--model", "cantor", "--delta", "0.001", "--out", str(out))
    assert code == 0
    csv_text = (out / "k.csv").read_text()
    cloud = PointCloud.from_csv(csv_text, 0.001)
    assert cloud == compute_K(models.cantor_model(), delta=0.001).cloud
    svg = (out / "k.svg").read_text()
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    assert sum(1 for el in root.iter() if el.tag.endswith("circle")) == cloud.n


def test_attractor_deterministic_outputs(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run_cli("attractor", "--model", "cantor", "--delta", "0.001", "--out", str(out)) == 0
    assert (a / "k.csv").read_bytes() == (b / "k.csv").read_bytes()
    assert (a / "k.svg").read_bytes() == (b / "k.svg").read_bytes()


def test_individual_prints_containment(tmp_path, capsys):
    out = tmp_path / "run"
    assert run_cli("attractor", "--model", "cantor", "--delta", "0.001", "--out", str(out)) == 0
    capsys.readouterr()
    code = run_cli(
        "individual", "--model", "cantor", "--delta", "0.001", "--strategy", "(01)", "--out", str(out)
    )
    assert code == 0
    captured = capsys.readouterr().out
    assert "containment residual" in captured
    assert (out / "a_w.csv").exists() and (out / "a_w.svg").exists()


def test_individual_line_alternating_exits_4(tmp_path):
    code = run_cli(
        "individual",
        "--model",
        "line",
        "--delta",
        "0",
        "--strategy",
        "(01)",
        "--out",
        str(tmp_path),
    )
    assert code == 4


def test_individual_bad_strategy_exits_2(tmp_path, capsys):
    code = run_cli(
        "individual", "--model", "cantor", "--strategy", "0110", "--out", str(tmp_path)
    )
    assert code == 2
    assert "PRE(PER)" in capsys.readouterr().err


def test_bad_model_exits_2(tmp_path):
    assert run_cli("attractor", "--model", "nope", "--out", str(tmp_path)) == 2


def test_nonconvergence_exits_3(tmp_path, capsys):
    code = run_cli(
        "attractor", "--model", "cantor", "--delta", "0.001", "--maxiter", "2",
        "--out", str(tmp_path),
    )
    assert code == 3
    assert "did NOT converge" in capsys.readouterr().err


def test_slices_three_point(tmp_path, capsys):
    out = tmp_path / "slices"
    code = run_cli(
        "slices", "--model", "three_point", "--delta", "0", "--subshift", "golden_even",
        "--out", str(out),
    )
    assert code == 0
    printed = capsys.readouterr().out
    assert "distinct slices: 2" in printed
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["distinct_slices"] == 2
    assert (out / "slice_0.csv").exists() and (out / "k_lambda.csv").exists()
    assert (out / "a_0.csv").exists() and (out / "a_1.csv").exists()


def test_slices_subshift_from_file(tmp_path):
    graph = tmp_path / "graph.txt"
    graph.write_text("q 0 q\nq 1 q\n")
    out = tmp_path / "out"
    code = run_cli(
        "slices", "--model", "three_point", "--delta", "0", "--subshift", str(graph),
        "--out", str(out),
    )
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["distinct_slices"] == 1


def test_slices_requires_subshift(tmp_path):
    assert run_cli("slices", "--model", "three_point", "--out", str(tmp_path)) == 2


def test_chaos_scatter_inside_K(tmp_path, capsys):
    out = tmp_path / "chaos"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "malaria", "delta": 0.02, "steps": 20000, "burnin": 500, "seed": 3}))
    code = run_cli("chaos", "--config", str(cfg), "--out", str(out))
    assert code == 0
    assert "observable mean" in capsys.readouterr().out
    cloud = PointCloud.from_csv((out / "chaos.csv").read_text(), 0.02)
    K = compute_K(models.malaria_model(), delta=0.02).cloud
    assert directed_distance(cloud, K) <= 3 * 0.02


def test_chaos_bad_probs_exit_2(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "cantor", "delta": 0.001, "probs": [0.7, 0.7]}))
    assert run_cli("chaos", "--config", str(cfg), "--out", str(tmp_path)) == 2


def test_chaos_deterministic_bytes(tmp_path):
    outs = []
    for name in ("x", "y"):
        out = tmp_path / name
        assert run_cli(
            "chaos", "--model", "cantor", "--delta", "0.001", "--seed", "9", "--out", str(out)
        ) == 0
        outs.append((out / "chaos.csv").read_bytes())
    assert outs[0] == outs[1]


def test_render_round_trip(tmp_path):
    out = tmp_path / "r"
    assert run_cli("attractor", "--model", "cantor", "--delta", "0.01", "--out", str(out)) == 0
    code = run_cli("render", str(out / "k.csv"), "--out", str(out))
    assert code == 0
    ET.fromstring((out / "k.svg").read_text())


def test_unknown_config_entry_rejected(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "cantor", "dleta": 0.01}))
    assert run_cli("attractor", "--config", str(cfg), "--out", str(tmp_path)) == 2
    assert "unknown config entries" in capsys.readouterr().err


def test_config_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "cantor", "delta": 0.01}))
    out = tmp_path / "o"
    assert run_cli("attractor", "--config", str(cfg), "--delta", "0.002", "--out", str(out)) == 0
    cloud = PointCloud.from_csv((out / "k.csv").read_text(), 0.002)
    assert cloud.delta == 0.002
    assert cloud == compute_K(models.cantor_model(), delta=0.002).cloud


def test_verify_single_criterion(tmp_path, capsys):
    out = tmp_path / "v"
    code = run_cli("verify", "--only", "C2", "--out", str(out))
    assert code == 0
    printed = capsys.readouterr().out
    assert "C2" in printed and "PASS" in printed
    data = json.loads((out / "verify.json").read_text())
    assert [c["id"] for c in data["criteria"]] == ["C2"]
    assert data["all_passed"]


def test_verify_unknown_criterion_exits_2(tmp_path):
    assert run_cli("verify", "--only", "C99", "--out", str(tmp_path)) == 2


def test_verify_only_accepts_name_fragment(tmp_path, capsys):
    code = run_cli("verify", "--only", "step-bound", "--out", str(tmp_path))
    assert code == 0
    data = json.loads((tmp_path / "verify.json").read_text())
    assert [c["id"] for c in data["criteria"]] == ["C2"]


def test_verify_detects_corrupted_params(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    # ab < rm: no interior fixed point, so the exact-value criterion must fail
    cfg.write_text(json.dumps({"params": {"pset0": {"a": 1, "b": 1, "r": 10, "m": 10}, "dt": 0.05}}))
    out = tmp_path / "v"
    code = run_cli("verify", "--config", str(cfg), "--only", "C1", "--out", str(out))
    assert code == 1
    printed = capsys.readouterr().out
    assert "FAIL" in printed and "11/15" in printed
