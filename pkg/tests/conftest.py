import pytest

# criterion number -> (title, outcome, seconds, note)
ACCEPTANCE: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture
def note(request):
    """Attach a one-line note to the acceptance summary for this criterion."""
    marker = request.node.get_closest_marker("criterion")
    entry = ACCEPTANCE.setdefault(marker.args[0], {"title": marker.args[1]}) if marker else {}

    def _note(text: str):
        entry["note"] = text
    return _note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    entry = ACCEPTANCE.setdefault(marker.args[0], {"title": marker.args[1]})
    entry["passed"] = rep.passed
    entry["seconds"] = rep.duration


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        e = ACCEPTANCE[num]
        status = "PASS" if e.get("passed") else "FAIL"
        line = f"criterion {num:2d} {status}  {e['title']} ({e.get('seconds', 0):.1f} s)"
        if e.get("note"):
            line += f" - {e['note']}"
        tr.write_line(line)
