import pytest

from factor_forge.catalog import Catalog, set_default_catalog


@pytest.fixture(autouse=True, scope="session")
def _fresh_catalog():
    """Run every session against an in-memory catalog so on-disk caches cannot mask search bugs."""
    set_default_catalog(Catalog(None))
    yield


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
