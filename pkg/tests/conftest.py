import pytest

from halfhex.tableau import StaircaseTableau

FIG1 = StaircaseTableau(((3,), (2, 5), (1, 3, 6), (1, 3, 5, 7)))


@pytest.fixture
def fig1():
    return FIG1


@pytest.fixture(scope="session")
def density200():
    from halfhex.limitshape import empirical_density

    return empirical_density(200, 200, seed=0)


ACCEPTANCE: list[str] = []


@pytest.fixture
def report(request):
    """Print one PASS/FAIL line per acceptance criterion, live and in the summary."""
    def emit(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE.append(line)
        with request.config.pluginmanager.getplugin("capturemanager").global_and_fixture_disabled():
            print(f"\n{line}")
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
