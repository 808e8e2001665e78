import pytest

from leodist import montecarlo

BACKENDS = montecarlo.available_backends()

_CRITERIA = pytest.StashKey[list]()


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def criterion(request):
    """Record one acceptance-criterion outcome; printed in the terminal summary."""
    lines = request.config.stash.setdefault(_CRITERIA, [])

    def record(label: str, ok: bool, detail: str) -> bool:
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
