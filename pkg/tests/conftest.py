import pytest

_criteria: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; the summary prints a PASS/FAIL line each."""
    label = request.node.get_closest_marker("criterion").args[0]
    yield label
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed
    _criteria.append((label, passed, request.node.name))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, name in sorted(_criteria):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}  ({name})")
