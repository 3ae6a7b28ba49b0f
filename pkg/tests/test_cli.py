import json

import pytest

from capwork.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_spectrum_subcommand(capsys):
    code, out = run_cli(["spectrum", "--family", "symplectic", "--rank", "2", "--q", "2"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert (obj["n"], obj["d"]) == (15, 6)
    assert abs(obj["lambda_min"] + 3) < 1e-6
    assert obj["match"] is True
    assert obj["schema_version"] == "1.0"


def test_spectrum_usage_error(capsys):
    code = main(["spectrum", "--q", "6"])
    assert code == 1
    assert "prime power" in capsys.readouterr().err


def test_count_subcommand(capsys):
    code, out = run_cli(
        ["count", "--geometry", "pg", "--r", "2", "--q", "3", "--object", "cap", "--m", "3"],
        capsys,
    )
    assert code == 0
    assert json.loads(out)["count"] == "234"


def test_bound_dh(capsys):
    code, out = run_cli(["bound", "--kind", "dh", "--n", "15", "--d", "6", "--lambda", "-3"], capsys)
    assert code == 0
    assert json.loads(out)["value"] == "5"


def test_bound_usage(capsys):
    assert main(["bound", "--kind", "dh", "--n", "15"]) == 1


def test_enumerate_ovoid(capsys, tmp_path):
    witness = tmp_path / "w.json"
    code, out = run_cli(
        [
            "enumerate",
            "--object",
            "ovoid",
            "--family",
            "symplectic",
            "--rank",
            "2",
            "--q",
            "2",
            "--witness-out",
            str(witness),
        ],
        capsys,
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["alpha"] == 5 and obj["status"] == "exact"
    assert json.loads(witness.read_text())["alpha"] == 5


def test_enumerate_budget_exit_code(capsys):
    code = main(
        [
            "enumerate",
            "--object",
            "ovoid",
            "--family",
            "parabolic",
            "--rank",
            "2",
            "--q",
            "3",
            "--budget",
            "2",
        ]
    )
    assert code == 2


def test_supersat_subcommand(capsys):
    code, out = run_cli(
        ["supersat", "--instance", "caps:pg:r2:q2", "--size", "6", "--mode", "exact"], capsys
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["min_observed"] == 4


def test_supersat_bad_instance(capsys):
    assert main(["supersat", "--instance", "nonsense", "--size", "3"]) == 1


def test_geom_descriptor(capsys, tmp_path):
    out_path = tmp_path / "geom.json"
    code = main(
        ["geom", "--family", "hyperbolic", "--rank", "2", "--q", "2", "--out", str(out_path)]
    )
    assert code == 0
    desc = json.loads(out_path.read_text())
    assert desc["point_count"] == 9


def test_graph_binary_out(capsys, tmp_path):
    out_path = tmp_path / "g.bin"
    code = main(["graph", "--instance", "collinearity:symplectic:r2:q2", "--out", str(out_path)])
    assert code == 0
    from capwork.cache import graph_from_bytes

    g = graph_from_bytes(out_path.read_bytes())
    assert g.n == 15 and g.degree() == 6


def test_certificates_cli(capsys):
    code, out = run_cli(["certificates", "--r", "3", "--q", "5", "--q", "23"], capsys)
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [r["ok"] for r in rows] == [False, True]


def test_sweep_and_report(capsys, tmp_path):
    out_path = tmp_path / "s.csv"
    code = main(
        [
            "random-sweep",
            "--r",
            "3",
            "--q",
            "13",
            "--pmin",
            "0.001",
            "--pmax",
            "0.02",
            "--points",
            "3",
            "--trials",
            "4",
            "--seed",
            "2",
            "--out",
            str(out_path),
        ]
    )
    assert code == 0
    assert out_path.exists() and out_path.with_suffix(".json").exists()
    side = json.loads(out_path.with_suffix(".json").read_text())
    assert side["kind"] == "sweep-sidecar"
    code, out = run_cli(["report", str(out_path)], capsys)
    assert code == 0
    assert "sweep r=3 q=13" in out and "pass" in out


def test_report_on_artifacts(capsys, tmp_path):
    spec_path = tmp_path / "spec.json"
    main(["spectrum", "--family", "symplectic", "--rank", "2", "--q", "2", "--out", str(spec_path)])
    code, out = run_cli(["report", str(spec_path)], capsys)
    assert code == 0
    assert "| instance |" in out and "pass" in out


def test_config_unknown_keys(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"bogus": 1}')
    code = main(["certificates", "--r", "3", "--q", "23", "--config", str(cfg)])
    assert code == 1


def test_config_valid(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"threads": 2}')
    code = main(["certificates", "--r", "3", "--q", "23", "--config", str(cfg)])
    assert code == 0
    capsys.readouterr()


def test_containers_cli(capsys, tmp_path):
    fam_path = tmp_path / "fam.jsonl"
    code, out = run_cli(
        [
            "containers",
            "--instance",
            "collinearity:symplectic:r2:q2",
            "--epsilon",
            "1/2",
            "--family-out",
            str(fam_path),
        ],
        capsys,
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["verify"]["coverage_ok"] and obj["verify"]["size_ok"] and obj["verify"]["supersat_ok"]
    assert fam_path.exists()


def test_solve_result_roundtrip(capsys):
    from capwork.solvers import SolveResult

    code, out = run_cli(
        ["enumerate", "--object", "ekr", "--family", "symplectic", "--rank", "2", "--q", "2"],
        capsys,
    )
    assert code == 0
    res = SolveResult.from_json(json.loads(out))
    assert res.alpha == 9
