import pytest

from nbspectra.graph_core import enumerate_graphs


@pytest.fixture(scope="session")
def suite6():
    """Every graph with 3 <= n <= 6 and min degree >= 2, up to isomorphism."""
    return list(enumerate_graphs(6, 2))


@pytest.fixture(scope="session")
def nb_connected6(suite6):
    from nbspectra.spectral import build_laplacian

    return [g for g in suite6 if len(build_laplacian(g).nb.weak_components()) == 1]


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one acceptance line; it is printed now and again in the terminal summary."""

    def emit(criterion: str, ok: bool, detail: str):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
