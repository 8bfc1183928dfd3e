import numpy as np
import pytest

# oracle values: mpmath.besselk at 40 significant digits
K_ORACLE = {
    0.01: (4.7212447301610949651, 99.973894118296247643, 19999.500068389410624),
    0.1: (2.4270690247020166125, 9.8538447808706061348, 199.50396464211413931),
    0.5: (0.92441907122766586178, 1.6564411200033008937, 7.5501835512408694366),
    1.0: (0.42102443824070833334, 0.60190723019723457474, 1.6248388986351774828),
    10.0: (1.7780062316167651811e-5, 1.8648773453825584597e-5, 2.1509817006932768731e-5),
    100.0: (4.6566282291759020189e-45, 4.6798537356369092866e-45, 4.7502253038886402047e-45),
}
RATIO_ORACLE = {
    1e-3: 0.0004999982440773608796,
    0.01: 0.0049988196593129786909,
    1.0: 0.37044117463141794006,
    10.0: 0.8669889403436091893,
    100.0: 0.98518563568045431752,
    1e3: 0.99850187312605608652,
}


@pytest.fixture(scope="session")
def beta_grid():
    """10**4 log-spaced points on [1e-3, 1e3]."""
    return np.logspace(-3, 3, 10_000)


@pytest.fixture(scope="session")
def coarse_grid():
    return np.logspace(-3, 3, 400)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(number, title, ok, detail=""):
        ACCEPTANCE_LINES.append((number, f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} {detail}".rstrip()))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
