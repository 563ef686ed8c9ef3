import contextlib

import pytest

_CRITERIA: dict[str, tuple[str, str]] = {}


@pytest.fixture
def criterion():
    """Record a PASS/FAIL line for an acceptance criterion; failures still propagate."""
    @contextlib.contextmanager
    def record(key: str, title: str):
        try:
            yield
        except BaseException:
            _CRITERIA[key] = ("FAIL", title)
            print(f"criterion {key}: FAIL  {title}")
            raise
        _CRITERIA[key] = ("PASS", title)
        print(f"criterion {key}: PASS  {title}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    key = lambda k: (int("".join(c for c in k if c.isdigit())), k)
    for k in sorted(_CRITERIA, key=key):
        status, title = _CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:>3}: {status}  {title}")
