import pytest

from uq_adjoint.cyclotomic import field
from uq_adjoint.smallqg import small_quantum_group


@pytest.fixture(scope="session")
def K3():
    return field(3)


@pytest.fixture(scope="session")
def K5():
    return field(5)


@pytest.fixture(scope="session")
def U3():
    return small_quantum_group(3)


@pytest.fixture(scope="session")
def U5():
    return small_quantum_group(5)


# -- acceptance summary: one line per criterion -------------------------------
_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion this test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed and not rep.skipped):
        return
    n, title = mark.args
    entry = _criteria.setdefault(n, {"title": title, "failed": [], "xfailed": [], "ran": 0})
    if rep.when == "call" or rep.failed:
        entry["ran"] += 1
    if hasattr(rep, "wasxfail"):
        entry["xfailed"].append(f"{item.name}: {rep.wasxfail}")
    elif rep.failed:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        bad = e["failed"] + e["xfailed"]
        tr.write_line(f"criterion {n} [{e['title']}]: {'FAIL' if bad else 'PASS'}")
        for why in bad:
            tr.write_line(f"    {why}")
