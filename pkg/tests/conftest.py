import pytest

_LOG_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LOG_KEY] = []


@pytest.fixture
def acceptance_log(request):
    return request.config.stash[_LOG_KEY]


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(_LOG_KEY, [])
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for n, text, ok, secs in log:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {text} ({secs:.2f}s)")
