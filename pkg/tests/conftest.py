from pathlib import Path

import pytest

from culturality import default_schema, load_survey

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def schema():
    return default_schema()


@pytest.fixture(scope="session")
def table(schema):
    return load_survey(None, schema)


@pytest.fixture(scope="session")
def table_text():
    from importlib import resources

    return (resources.files("culturality") / "data" / "table1.csv").read_text(encoding="utf-8")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
