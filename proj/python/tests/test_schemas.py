import json
import os
import pathlib
import subprocess

import jsonschema
import pytest

SCHEMAS = pathlib.Path(__file__).resolve().parents[2] / "docs" / "schemas"
CLI = os.environ.get("DYADIC_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="DYADIC_CLI not set")


def schema(name):
    return json.loads((SCHEMAS / name).read_text())


def run(tmp_path, *args):
    subprocess.run([CLI, *args, "--out", str(tmp_path)], check=True, capture_output=True)


def test_spectrum_output(tmp_path):
    run(tmp_path, "spectrum")
    jsonschema.validate(json.loads((tmp_path / "spectrum.json").read_text()), schema("spectrum.schema.json"))


def test_failed_spectrum_output(tmp_path):
    r = subprocess.run([CLI, "spectrum", "--q", "3", "--out", str(tmp_path)], capture_output=True)
    assert r.returncode == 1
    doc = json.loads((tmp_path / "spectrum.json").read_text())
    jsonschema.validate(doc, schema("spectrum.schema.json"))
    assert doc["pass"] is False


def test_certificate_output(tmp_path):
    run(tmp_path, "certify", "--shells", "5")
    doc = json.loads((tmp_path / "certificate.json").read_text())
    jsonschema.validate(doc, schema("certificate.schema.json"))
    jsonschema.validate(doc["config"], schema("run_config.schema.json"))


def test_config_file_schema(tmp_path):
    cfg = {"beta": 2.1, "shells": 6, "R": "auto", "out": str(tmp_path)}
    jsonschema.validate(cfg, schema("run_config.schema.json"))
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"betta": 2.1}, schema("run_config.schema.json"))
