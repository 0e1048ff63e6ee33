import pathlib

import pytest

import cartan

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def spec(name):
    return (DATA / name).read_text()


def test_pipeline_passes_on_burgers():
    out = cartan.run("pipeline", spec("burgers.spec"))
    assert out["pass"]
    report = out["report"]
    assert report["schema_version"] == cartan.SCHEMA_VERSION == 1
    assert report["verdict"] == "pass"
    closure = report["stages"]["holonomy"]["closure"]
    assert closure["values"]["q03"] == "-2"
    assert closure["free"] == ["lambda"]
    assert report["stages"]["lax"]["residual"] == [["0", "0"], ["0", "0"]]


def test_failures_are_verdicts():
    out = cartan.run("lax verify", spec("burgers_pair_heat.spec"))
    assert not out["pass"]
    assert out["report"]["failed_stage"] == "lax"


def test_options_are_forwarded():
    out = cartan.run("holonomy", spec("burgers.spec"), holonomy_level=1)
    assert len(out["report"]["stages"]["holonomy"]["free_basis"]) == 6
    out = cartan.run("mc verify", spec("two_dim.spec"), series_order=3)
    assert out["report"]["stages"]["mc_verify"]["min_degree"] == 2


def test_spec_errors():
    with pytest.raises(cartan.SpecError, match="line 1, column 1: no PDE"):
        cartan.check_spec("")
    with pytest.raises(cartan.InputError):
        cartan.run("mc build", spec("burgers.spec"))
    with pytest.raises(ValueError):
        cartan.run("frobnicate", spec("burgers.spec"))
    assert cartan.check_spec(cartan.check_spec(spec("burgers.spec"))) == cartan.check_spec(spec("burgers.spec"))


def test_algebra_helpers():
    assert cartan.normalize_poly("u1*u0 + u0*u1") == "2*u0*u1"
    assert cartan.normalize_lie("[A1,A0]") == "-[A0,A1]"
    assert cartan.bracket("A0", "A0") == "0"
    assert cartan.d(cartan.d("u0*u1*dx")) == "0"
    assert cartan.wedge("dx", "dx") == "0"


def test_reports_match_the_schema():
    jsonschema = pytest.importorskip("jsonschema")
    import json

    schema = json.loads((DATA.parent / "docs" / "report.schema.json").read_text())
    runs = [
        ("pipeline", "burgers.spec"),
        ("rep search", "burgers.spec"),
        ("ideal check", "nonclosed.spec"),
        ("holonomy", "heat.spec"),
        ("lax verify", "burgers_pair_heat.spec"),
        ("rep verify", "closed_burgers.spec"),
        ("mc build", "heisenberg.spec"),
        ("mc verify", "two_dim.spec"),
    ]
    for command, name in runs:
        jsonschema.validate(cartan.run(command, spec(name))["report"], schema)
