"""End-to-end smoke tests for the python bindings and the CLI.

Run via ctest (which sets PYTHONPATH, MOMENTCONE_CLI, and MOMENTCONE_ROOT) or
directly with `pytest tests/python` after a build in ./build.
"""

import json
import os
import pathlib
import subprocess

import jsonschema
import pytest

import momentcone

ROOT = pathlib.Path(os.environ.get(
    "MOMENTCONE_ROOT", pathlib.Path(__file__).resolve().parents[2]))
CLI = pathlib.Path(os.environ.get("MOMENTCONE_CLI", ROOT / "build" / "momentcone"))


def fixture(name):
    return json.load(open(ROOT / "fixtures" / name))


def schema(name):
    return json.load(open(ROOT / "schemas" / f"{name}.schema.json"))


def run_cli(*args):
    proc = subprocess.run([str(CLI), "--json", *args], capture_output=True,
                          text=True, cwd=ROOT)
    return proc.returncode, proc.stdout


# --- python module -----------------------------------------------------------

def test_certify_lebesgue_strictly_positive():
    cert = momentcone.certify(fixture("lebesgue_deg4.json"))
    assert cert["verdict"] == "StrictlyPositive"
    assert cert["converged"] is True
    assert cert["margin"] > 1e-3
    jsonschema.validate(cert, schema("certificate"))


def test_certify_dirac_degenerate():
    cert = momentcone.certify(fixture("dirac_half_deg2.json"))
    assert cert["verdict"] == "Degenerate"
    assert abs(cert["riesz_value"]) <= 1e-6


def test_classify_trichotomy():
    assert momentcone.classify(
        fixture("lebesgue_deg4.json"))["verdict"] == "InteriorRepresentable"
    boundary = momentcone.classify(fixture("dirac_half_deg2.json"))
    assert boundary["verdict"] == "Boundary"
    assert boundary["atomic_witness"]
    assert momentcone.classify(
        fixture("nonrep_121.json"))["verdict"] == "NotRepresentable"


def test_synthesize_and_reverify_moments():
    problem = fixture("lebesgue_deg4.json")
    out = momentcone.synthesize(problem)
    jsonschema.validate(out, schema("synthesize"))
    assert out["report"]["max_moment_error"] <= 1e-6
    # independent recompute of the density's moments
    doc = dict(out["density"])
    doc["index_set"] = problem["index_set"]
    redo = momentcone.moments(doc, tol=1e-9)
    errs = [abs(a - b) for a, b in zip(redo["moments"], problem["moments"])]
    assert max(errs) <= 2e-6


def test_mollify_moments_match_closed_form():
    density = momentcone.mollify(fixture("dirac_half_measure.json"), 0.1)
    jsonschema.validate(density, schema("density"))
    got = momentcone.moments(density, tol=1e-10)["moments"]
    want = [1.0, 0.5, 0.76 / 3.0]
    assert max(abs(a - b) for a, b in zip(got, want)) <= 1e-8


def test_helper_functions():
    assert sorted(momentcone.sigma([2, 0, 3])) == [[0, 0, 0], [0, 0, 3],
                                                   [2, 0, 0], [2, 0, 3]]
    closed = momentcone.close_index_set(2, [[1, 1]])
    assert closed == [[0, 0], [0, 1], [1, 0], [1, 1]]
    assert momentcone.riesz_apply([1.0, 0.5, 0.25], [0.25, -1.0, 1.0]) == \
        pytest.approx(0.0)


def test_invalid_input_raises():
    bad = fixture("lebesgue_deg4.json")
    bad = {**bad, "moments": [2.0] + bad["moments"][1:]}  # g_0 != 1
    with pytest.raises(momentcone.InvalidInput):
        momentcone.certify(bad)


# --- CLI ---------------------------------------------------------------------

CLI_CASES = [
    ("certificate", 0, ["certify", "fixtures/lebesgue_deg4.json"]),
    ("classification", 1, ["classify", "fixtures/dirac_half_deg2.json"]),
    ("classification", 2, ["classify", "fixtures/nonrep_121.json"]),
    ("synthesize", 0, ["synthesize", "fixtures/lebesgue_deg4.json"]),
    ("density", 0, ["mollify", "fixtures/dirac_half_measure.json",
                    "--eps", "0.1", "--ensure-positive"]),
    ("perturb", 0, ["perturb", "fixtures/unit_density.json",
                    "--beta", "0", "0.0001", "0", "-0.0001", "0"]),
    ("moments", 0, ["moments", "fixtures/dirac_half_measure.json"]),
    ("moments", 0, ["moments", "fixtures/unit_density.json"]),
    ("probe", 0, ["probe-regularity", "fixtures/unit_interval_region.json",
                  "--samples", "50"]),
    ("close-index-set", 0, ["close-index-set", "fixtures/lebesgue2d_deg2.json"]),
    ("error", 65, ["certify", "fixtures/unit_interval_region.json"]),
]


@pytest.mark.parametrize("schema_name,want_rc,args", CLI_CASES,
                         ids=[" ".join(c[2][:2]) for c in CLI_CASES])
def test_cli_output_validates_against_schema(schema_name, want_rc, args):
    rc, out = run_cli(*args)
    assert rc == want_rc
    jsonschema.validate(json.loads(out), schema(schema_name))


def test_cli_reruns_are_byte_identical():
    args = ["--seed", "7", "synthesize", "fixtures/linear_ramp_deg4.json"]
    rc1, out1 = run_cli(*args)
    rc2, out2 = run_cli(*args)
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_cli_certify_exit_codes_follow_verdict():
    assert run_cli("certify", "fixtures/lebesgue_deg4.json")[0] == 0
    assert run_cli("certify", "fixtures/dirac_half_deg2.json")[0] == 1
    assert run_cli("certify", "fixtures/nonrep_121.json")[0] == 2


def test_fixture_files_validate_against_input_schemas():
    pairs = [
        ("lebesgue_deg4.json", "problem"),
        ("dirac_half_deg2.json", "problem"),
        ("lebesgue2d_deg2.json", "problem"),
        ("linear_ramp_deg4.json", "problem"),
        ("nonrep_121.json", "problem"),
        ("dirac_half_measure.json", "measure"),
        ("unit_density.json", "density"),
        ("unit_interval_region.json", "region"),
    ]
    for name, schema_name in pairs:
        jsonschema.validate(fixture(name), schema(schema_name))
