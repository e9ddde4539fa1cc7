import numpy as np
import pytest

from symdiag.circuit import Circuit, cnot, rz


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_circuit(rng, width, n_gates, angle_scale=np.pi):
    ops = []
    for _ in range(n_gates):
        if width > 1 and rng.random() < 0.6:
            t, c = rng.choice(width, size=2, replace=False)
            ops.append(cnot(int(t), int(c)))
        else:
            ops.append(rz(int(rng.integers(width)), float(rng.uniform(-angle_scale, angle_scale))))
    return Circuit(width, tuple(ops), float(rng.uniform(-1, 1)))


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
