import hypothesis
import pytest

hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=2000, deadline=None)
hypothesis.settings.load_profile("ci")

_acceptance_key = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record one verdict line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(_acceptance_key, {})

    def record(number, title, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} -- {detail}"
        lines[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_acceptance_key, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(lines):
        terminalreporter.write_line(lines[number])
