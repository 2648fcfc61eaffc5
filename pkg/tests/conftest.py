import numpy as np
import pytest

LAMBDA = 37.5  # ueV, graphene on SiO2/hBN


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


def random_unitary_2(rng):
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def phase_free_close(u, v, tol):
    """|<u|v>| == 1 within tol, for normalized vectors."""
    return abs(1 - abs(np.vdot(u, v))) <= tol


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def record(request):
    """Log one acceptance line; returns the pass flag for asserting."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def _record(number, title, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} | {detail}"
        lines.append((number, line))
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
