import json
import os
import pathlib
import shutil
import subprocess

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


def _binary():
    env = os.environ.get("PSHCHECK_BIN")
    if env:
        return env
    for cand in (ROOT / "build" / "pshcheck", shutil.which("pshcheck")):
        if cand and pathlib.Path(cand).exists():
            return str(cand)
    pytest.skip("pshcheck binary not found (set PSHCHECK_BIN)")


@pytest.fixture(scope="session")
def pshcheck():
    binary = _binary()

    def run(*args, env=None):
        full_env = dict(os.environ)
        full_env.pop("PSH_DEFAULT_BUDGET", None)
        if env:
            full_env.update(env)
        return subprocess.run([binary, *args], capture_output=True, text=True, env=full_env, timeout=300)

    return run


@pytest.fixture(scope="session")
def validate():
    jsonschema = pytest.importorskip("jsonschema")
    path = os.environ.get("PSHCHECK_SCHEMA", str(ROOT / "docs" / "report.schema.json"))
    with open(path) as fh:
        schema = json.load(fh)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    def check(text):
        report = json.loads(text)
        validator.validate(report)
        return report

    return check
