import pytest

from qndsim import fock_wavefunction, gaussian_wavefunction, make_grid

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def grid():
    return make_grid(1024, 8.0)


@pytest.fixture(scope="session")
def vacuum(grid):
    return gaussian_wavefunction(grid, 0.0, 0.25)


@pytest.fixture(scope="session")
def fock1(grid):
    return fock_wavefunction(grid, 1)


@pytest.fixture
def acceptance_report():
    def record(number, title, passed, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {number:>2}. {title}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(".")[0].split()[-1])):
            terminalreporter.write_line(line)
