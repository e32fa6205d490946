import pytest

ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's outcome for the terminal summary."""
    number = request.node.get_closest_marker("criterion").args[0]
    notes = []
    yield notes
    call = getattr(request.node, "rep_call", None)
    ACCEPTANCE[number] = (call is not None and call.passed, request.node.name, "; ".join(notes))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, name, notes = ACCEPTANCE[number]
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {name}"
        terminalreporter.write_line(line + (f"  [{notes}]" if notes else ""))
