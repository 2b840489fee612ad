import numpy as np
import pytest

from ginv.bench import InstanceSpec, generate

ONES = np.ones((2, 2))
DIAG = np.array([[2.0, 0.0], [0.0, 0.0]])
EYE = np.eye(2)


def random_rank(rng, m, n, r):
    """Dense Gaussian matrix of rank exactly ``r`` (almost surely)."""
    return rng.standard_normal((m, r)) @ rng.standard_normal((r, n))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def inst_40():
    spec = InstanceSpec(40, 20, 10, 0.5, 1)
    return spec, generate(spec)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
