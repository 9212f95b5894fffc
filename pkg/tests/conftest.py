import numpy as np
import pytest

from graphsens.hypercube import PropertyFunction

_CRITERIA = []


def record_criterion(number: int, ok: bool, detail: str) -> str:
    line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    _CRITERIA.append(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def brute_sensitivity(f, m: int, x: int) -> int:
    fx = f(x)
    return sum(f(x ^ (1 << i)) != fx for i in range(m))


def random_function(rng, m: int) -> PropertyFunction:
    return PropertyFunction.from_table(rng.random(1 << m) < 0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
