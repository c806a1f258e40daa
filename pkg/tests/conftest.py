import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from phenoassess.loader import load  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "src" / "phenoassess" / "data"
GOLDEN = Path(__file__).parent / "golden"

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# acceptance criterion -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def fixtures():
    """The bundled mini ontologies, keyed by short name."""
    out = {}
    for key, name in [("pc", "mini_hpo_pc.ofn"), ("fma", "mini_fma.ofn"),
                      ("go", "mini_go.obo"), ("hpo", "hpo.obo"), ("all", "mini_hpo_all.ofn")]:
        out[key], _ = load(DATA / name)
    return out


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_addoption(parser):
    parser.addoption("--update-golden", action="store_true",
                     help="rewrite tests/golden from the current CLI output")


@pytest.fixture
def update_golden(request) -> bool:
    return request.config.getoption("--update-golden")
