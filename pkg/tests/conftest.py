import pytest

_verdicts: dict[int, tuple[bool, str]] = {}


class Verdict:
    """Records one PASS/FAIL line per acceptance criterion."""

    def __init__(self, number: int):
        self.number = number

    def __call__(self, ok: bool, detail: str) -> bool:
        _verdicts[self.number] = (bool(ok), detail)
        return ok


@pytest.fixture
def verdict(request):
    number = request.node.get_closest_marker("criterion").args[0]
    v = Verdict(number)
    yield v
    # a test that raised before recording still gets a line
    _verdicts.setdefault(number, (False, "did not complete"))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_verdicts):
        ok, detail = _verdicts[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
