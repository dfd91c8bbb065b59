import csv
import io
import json
import math
from importlib import resources

import jsonschema
import pytest
from referencing import Registry, Resource

from zernstab import cli
from zernstab.cli import EXIT_OK, EXIT_SOLVER, EXIT_USAGE, EXIT_VERIFY, RunConfig, main

SCHEMA_DIR = resources.files("zernstab") / "schemas"


def schema(name):
    return json.loads((SCHEMA_DIR / f"{name}.schema.json").read_text())


def validate(doc, name):
    reg = Registry().with_resources(
        (f"{n}.schema.json", Resource.from_contents(schema(n))) for n in ("dtn_summary",)
    )
    jsonschema.Draft202012Validator(schema(name), registry=reg).validate(doc)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_schemas_are_valid():
    for p in SCHEMA_DIR.iterdir():
        if p.name.endswith(".json"):
            jsonschema.Draft202012Validator.check_schema(json.loads(p.read_text()))


def test_default_config_matches_schema():
    import dataclasses

    validate(dataclasses.asdict(RunConfig()), "run_config")


# --- basis-table ------------------------------------------------------------------

def test_basis_table_d2(capsys, tmp_path):
    code, out, _ = run(capsys, "basis-table", "--config", write(tmp_path, "c.json", {"d": 2, "l_max": 2, "k_max": 2}))
    assert code == EXIT_OK
    doc = json.loads(out)
    validate(doc, "basis_table")
    assert len(doc["rows"]) == 9
    r00 = doc["rows"][0]
    assert (r00["l"], r00["k"]) == (0, 0)
    assert r00["coefficients"] == "1" and r00["root"] == 2
    assert r00["normalizer"] == pytest.approx(math.sqrt(2))
    r01 = doc["rows"][1]
    assert r01["coefficients"] == "-1 2" and r01["boundary_derivative"] == pytest.approx(4 * math.sqrt(6))


def test_basis_table_d3_csv(capsys, tmp_path):
    cfg = write(tmp_path, "c.json", {"d": 3, "l_max": 0, "k_max": 0})
    code, out, _ = run(capsys, "basis-table", "--config", cfg, "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1 and float(rows[0]["normalizer"]) == pytest.approx(math.sqrt(3))


def test_basis_table_empty_caps(capsys, tmp_path):
    cfg = write(tmp_path, "c.json", {"l_max": -1, "k_max": 3})
    code, out, _ = run(capsys, "basis-table", "--config", cfg, "--format", "csv")
    assert code == EXIT_OK
    assert out.strip() == ",".join(cli.BASIS_COLUMNS)


# --- verify -----------------------------------------------------------------------

def test_verify_ortho_caps25(capsys, tmp_path):
    cfg = write(tmp_path, "c.json", {"d": 2, "l_max": 25, "k_max": 25})
    code, out, _ = run(capsys, "verify", "ortho", "--config", cfg)
    assert code == EXIT_OK
    doc = json.loads(out)
    validate(doc, "verify_report")
    ortho = [c for c in doc["checks"] if c["name"].startswith("orthonormality")][0]
    assert ortho["passed"] and ortho["max_error"] < 1e-10


def test_verify_identities_exact(capsys, tmp_path):
    cfg = write(tmp_path, "c.json", {"d": 4, "l_max": 6, "k_max": 6, "exact": True})
    code, out, _ = run(capsys, "verify", "identities", "--config", cfg)
    assert code == EXIT_OK
    exact = [c for c in json.loads(out)["checks"] if c.get("exact")]
    assert len(exact) == 4 and all(c["max_error"] == 0 for c in exact)


def test_verify_all_small(capsys, tmp_path):
    cfg = write(tmp_path, "c.json", {"d": 3, "l_max": 4, "k_max": 4, "p_max": 4})
    code, out, _ = run(capsys, "verify", "all", "--config", cfg, "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and all(r["passed"] == "true" for r in rows)


def test_verify_failure_exit_code(capsys, tmp_path):
    cfg = write(tmp_path, "c.json", {"l_max": 5, "k_max": 5, "tolerances": {"orthonormality": 1e-30}})
    code, out, _ = run(capsys, "verify", "ortho", "--config", cfg)
    assert code == EXIT_VERIFY
    assert json.loads(out)["passed"] is False


def test_verify_invalid_suite(capsys):
    code, _, err = run(capsys, "verify", "bogus")
    assert code == EXIT_USAGE and "invalid choice" in err


# --- stability --------------------------------------------------------------------

def test_stability_single_coefficient(capsys, tmp_path):
    f = write(tmp_path, "f.json", [{"j": 0, "k": 1, "re": 1.0, "im": 0.0}])
    code, out, _ = run(capsys, "stability", f)
    assert code == EXIT_OK
    doc = json.loads(out)
    validate(doc, "stability_report")
    assert doc["class_flags"]["A_k"] == {"1": True}
    assert doc["epsilon_occupied"] == pytest.approx(math.sqrt(6))
    assert doc["epsilon"] == pytest.approx(math.sqrt(2))
    assert doc["constant_theorem"] == pytest.approx(math.sqrt(2 * math.pi / 2))
    assert doc["constant_theorem_occupied"] == pytest.approx(math.sqrt(2 * math.pi / 6))
    assert doc["core_inequality_holds"] is True


def test_stability_cancellation(capsys, tmp_path):
    f = write(tmp_path, "f.json", [{"j": 1, "k": 0, "re": 1}, {"j": 1, "k": 1, "re": -1}])
    code, out, _ = run(capsys, "stability", f)
    doc = json.loads(out)
    validate(doc, "stability_report")
    assert code == EXIT_OK and doc["status"] == "no-epsilon" and doc["epsilon"] is None
    assert doc["core_inequality"] is None


@pytest.mark.parametrize("content", ["", "[]"])
def test_stability_empty(capsys, tmp_path, content):
    code, out, _ = run(capsys, "stability", write(tmp_path, "f.json", content))
    doc = json.loads(out)
    validate(doc, "stability_report")
    assert code == EXIT_OK
    assert doc["interior_norm"] == 0 and doc["boundary_norm"] == 0 and doc["weighted_l1"] == 0
    assert doc["epsilon"] == "inf" and all(doc["class_flags"]["A_k"].values())


def test_stability_d3_and_cboundary(capsys, tmp_path):
    cfg = write(tmp_path, "c.json", {"d": 3, "c_boundary": 2.5})
    f = write(tmp_path, "f.json", [{"l": 2, "m": -1, "k": 0, "re": 0.5, "im": 0.5}])
    code, out, _ = run(capsys, "stability", f, "--config", cfg, "--format", "csv")
    row = next(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and float(row["c_boundary"]) == 2.5
    assert float(row["epsilon"]) == pytest.approx(math.sqrt(7))
    assert float(row["constant_corollary2"]) == pytest.approx(2.5 * math.sqrt(4 * math.pi / 3))


@pytest.mark.parametrize("content", ["{not json", '{"j": 0}', '[{"j": 0}]', '[{"j": 2, "k": 0, "re": "x"}]'])
def test_stability_parse_errors(capsys, tmp_path, content):
    code, _, err = run(capsys, "stability", write(tmp_path, "f.json", content))
    assert code == EXIT_USAGE and "error" in err


def test_coefficient_schema():
    jsonschema.validate([{"j": 0, "k": 1, "re": 1.0, "im": 0.0}], schema("coefficients"))
    jsonschema.validate([{"l": 2, "m": -1, "k": 0, "re": 1.0}], schema("coefficients"))


# --- dtn-experiment ---------------------------------------------------------------

def test_dtn_identical_pair(capsys, tmp_path):
    spec = {"pairs": [{"name": "same", "gamma1": {"type": "constant", "value": 1}, "gamma2": {"type": "constant"}}]}
    code, out, _ = run(capsys, "dtn-experiment", write(tmp_path, "s.json", spec))
    doc = json.loads(out)
    validate(doc, "dtn_experiment")
    assert code == EXIT_OK
    row = doc["rows"][0]
    assert row["status"] == "undefined" and row["ratio"] is None
    assert row["l2_difference"] == 0 and row["dtn_norm"] == 0


def test_dtn_stable_family_bounded(capsys, tmp_path):
    code, out, _ = run(capsys, "dtn-experiment", write(tmp_path, "s.json", {"family": "stable"}))
    doc = json.loads(out)
    validate(doc, "dtn_experiment")
    assert code == EXIT_OK
    assert doc["summary"]["verdict"] == "bounded" and doc["summary"]["pairs"] == 10


def test_dtn_contrast_family_growth_csv(capsys, tmp_path):
    out_path = tmp_path / "res" / "contrast.csv"
    code, out, _ = run(
        capsys, "dtn-experiment", write(tmp_path, "s.json", {"family": "contrast"}), "--format", "csv", "--out", str(out_path)
    )
    assert code == EXIT_OK and out == ""
    rows = list(csv.DictReader(io.StringIO(out_path.read_text())))
    assert [r["name"] for r in rows] == ["bump-l2", "bump-l4", "bump-l8", "bump-l16"]
    summary = json.loads((tmp_path / "res" / "contrast.csv.summary.json").read_text())
    validate(summary, "dtn_summary")
    assert summary["verdict"] == "growth"


def test_dtn_zernike_pairs_and_failure(capsys, tmp_path):
    spec = {
        "pairs": [
            {
                "name": "zz",
                "gamma1": {"type": "zernike", "base": 1.0, "coefficients": [{"j": 0, "k": 1, "re": 0.05}]},
                "gamma2": {"type": "zernike", "base": 1.0, "coefficients": [{"j": 0, "k": 1, "re": 0.02}]},
            },
            {"name": "neg", "gamma1": {"type": "constant", "value": -2}, "gamma2": {"type": "constant"}},
            {"name": "bump", "gamma1": {"type": "bump", "amplitude": 0.1, "frequency": 2}, "gamma2": {"type": "two_phase", "inner": 1.0}},
        ]
    }
    cfg = write(tmp_path, "c.json", {"dtn_N": 6, "mesh_h": 0.08})
    code, out, _ = run(capsys, "dtn-experiment", write(tmp_path, "s.json", spec), "--config", cfg)
    doc = json.loads(out)
    validate(doc, "dtn_experiment")
    assert code == EXIT_SOLVER
    by = {r["name"]: r for r in doc["rows"]}
    assert by["neg"]["status"] == "solver-failure"
    assert by["zz"]["status"] == "ok" and by["zz"]["epsilon"] == pytest.approx(math.sqrt(6))
    assert by["zz"]["l2_difference"] == pytest.approx(0.03)
    assert by["bump"]["status"] == "ok"
    assert doc["summary"]["failed_pairs"] == ["neg"]


@pytest.mark.parametrize(
    "spec",
    [
        {"family": "nope"},
        {"family": "stable", "bogus": 1},
        {"pairs": [{"gamma1": {"type": "constant"}}]},
        {"pairs": [{"gamma1": {"type": "plaid"}, "gamma2": {"type": "constant"}}]},
        {"pairs": [{"gamma1": {"type": "constant", "colour": 1}, "gamma2": {"type": "constant"}}]},
        [],
    ],
)
def test_dtn_bad_specs(capsys, tmp_path, spec):
    code, _, _ = run(capsys, "dtn-experiment", write(tmp_path, "s.json", spec))
    assert code == EXIT_USAGE


def test_dtn_requires_d2(capsys, tmp_path):
    code, _, err = run(
        capsys, "dtn-experiment", write(tmp_path, "s.json", {"family": "contrast"}),
        "--config", write(tmp_path, "c.json", {"d": 3}),
    )
    assert code == EXIT_USAGE and "d = 2" in err


# --- configuration and plumbing ---------------------------------------------------

@pytest.mark.parametrize(
    "cfg",
    [
        {"colour": "red"},
        {"d": 1},
        {"l_max": -2},
        {"tolerances": {"nope": 1e-3}},
        {"tolerances": {"sturm": -1}},
        {"tolerances": 3},
        {"c_boundary": 0},
        {"mesh_h": 0},
        {"seed": -1},
        {"c_boundary": "x"},
        [1, 2],
    ],
)
def test_config_rejections(capsys, tmp_path, cfg):
    code, _, err = run(capsys, "basis-table", "--config", write(tmp_path, "c.json", cfg))
    assert code == EXIT_USAGE and "error" in err


def test_missing_files(capsys, tmp_path):
    assert run(capsys, "basis-table", "--config", str(tmp_path / "none.json"))[0] == EXIT_USAGE
    assert run(capsys, "stability", str(tmp_path / "none.json"))[0] == EXIT_USAGE


def test_seed_flag(capsys, tmp_path):
    spec = write(tmp_path, "s.json", {"family": "stable", "n_pairs": 2})
    cfg = write(tmp_path, "c.json", {"dtn_N": 4, "mesh_h": 0.1})
    outs = [run(capsys, "dtn-experiment", spec, "--config", cfg, "--seed", s)[1] for s in ("5", "5", "6")]
    assert outs[0] == outs[1] != outs[2]
    assert run(capsys, "basis-table", "--seed", "-3")[0] == EXIT_USAGE
    assert run(capsys, "basis-table", "--seed", str(2**64))[0] == EXIT_USAGE


def test_output_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path / "outdir"))
    code, out, _ = run(capsys, "basis-table", "--out", "table.json")
    assert code == EXIT_OK and out == ""
    assert json.loads((tmp_path / "outdir" / "table.json").read_text())["kind"] == "basis-table"
    # absolute paths ignore the override
    code, _, _ = run(capsys, "basis-table", "--out", str(tmp_path / "abs.json"))
    assert (tmp_path / "abs.json").exists()


def test_config_out_key(capsys, tmp_path):
    target = tmp_path / "from_cfg.csv"
    cfg = write(tmp_path, "c.json", {"out": str(target)})
    assert run(capsys, "basis-table", "--config", cfg, "--format", "csv")[0] == EXIT_OK
    assert target.read_text().startswith("d,l,k")


def test_float_roundtrip():
    vals = [math.sqrt(2), 1 / 3, 1e-300, 123456789.123456789, math.pi * 1e17]
    assert json.loads(cli.dumps_json(vals)) == vals
    assert [float(cli._csv_cell(v)) for v in vals] == vals
    assert json.loads(cli.dumps_json([math.inf, -math.inf])) == ["inf", "-inf"]


def test_help_documents_csv_columns(capsys):
    for cmd, cols in (
        ("basis-table", cli.BASIS_COLUMNS),
        ("verify", cli.VERIFY_COLUMNS),
        ("stability", cli.STABILITY_COLUMNS),
        ("dtn-experiment", cli.DTN_COLUMNS),
    ):
        code, out, _ = run(capsys, cmd, "--help")
        assert code == EXIT_OK
        flat = " ".join(out.split())
        assert all(c in flat for c in cols)


def test_version_and_no_command(capsys):
    assert run(capsys, "--version")[0] == EXIT_OK
    assert run(capsys)[0] == EXIT_USAGE


def test_console_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "zernstab.cli", "basis-table", "--format", "csv"], capture_output=True, text=True)
    assert res.returncode == 0 and len(res.stdout.strip().splitlines()) == 10
