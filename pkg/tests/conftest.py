import json
import sys
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
sys.path.insert(0, str(Path(__file__).parent / "oracles"))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def table4_path():
    return FIXTURES / "table4.tsv"


@pytest.fixture(scope="session")
def table4_rows():
    return [line.split("\t") for line in (FIXTURES / "table4.tsv").read_text(encoding="utf-8").splitlines()]


@pytest.fixture(scope="session")
def mixed50():
    return (FIXTURES / "mixed50.txt").read_text(encoding="utf-8").splitlines()


@pytest.fixture(scope="session")
def table2_entries():
    from geez_forge.report import entries_from_json
    return entries_from_json((FIXTURES / "table2_entries.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def table3_entries():
    from geez_forge.report import entries_from_json
    return entries_from_json((FIXTURES / "table3_entries.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def training_corpus(table4_rows, mixed50):
    return [row[1] for row in table4_rows] + mixed50


def write_json(path, obj):
    path.write_text(json.dumps(obj, ensure_ascii=False), encoding="utf-8")
    return path


# --- acceptance summary ----------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _ACCEPTANCE[number] = (title, "PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title}")
