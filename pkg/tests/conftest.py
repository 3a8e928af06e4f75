import pytest

_LINES: dict = {}


class Criterion:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.done = False

    def report(self, ok: bool, detail: str = "") -> None:
        """Record the verdict, then fail the test if it is negative."""
        self.done = True
        verdict = "PASS" if ok else "FAIL"
        _LINES[self.number] = f"criterion {self.number:2d} {verdict}: {self.title}" + (
            f" ({detail})" if detail else "")
        print(_LINES[self.number])
        assert ok, detail or self.title


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    c = Criterion(*marker.args)
    yield c
    if not c.done:
        _LINES[c.number] = f"criterion {c.number:2d} FAIL: {c.title} (raised before a verdict)"


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_LINES):
            terminalreporter.write_line(_LINES[n])
