import pytest

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def criterion(request):
    """``report(number, title, ok, detail)`` prints one PASS/FAIL line and keeps it for the summary."""
    log = request.config.stash[_ACCEPTANCE]

    def report(number: int, title: str, ok: bool, detail: str) -> bool:
        line = f"criterion {number:>2}  {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        print(line)
        log.append((number, line))
        return ok

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = sorted(config.stash[_ACCEPTANCE])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in lines:
            terminalreporter.write_line(line)
