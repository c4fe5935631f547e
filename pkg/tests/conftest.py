import numpy as np
import pytest

from oracles import random_matrices

# criterion number -> (title, passed, detail), filled by test_acceptance.py
ACCEPTANCE = {}


def record(number, title, passed, detail=""):
    ACCEPTANCE[number] = (title, bool(passed), detail)
    return bool(passed)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        line = f"{'PASS' if passed else 'FAIL'} [{number:>2}] {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def suite_matrices():
    """The 50 random matrices shared by the decomposition checks."""
    return random_matrices(50, seed=20240601)


@pytest.fixture(scope="session")
def tanabe():
    from kaczmarz_tanabe import tanabe_problem

    return tanabe_problem()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
