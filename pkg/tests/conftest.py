import numpy as np
import pytest

from twolevel import bounds
from twolevel.kernels import SymmetryGroup

ALL_GROUPS = list(SymmetryGroup)

_ACCEPTANCE = []


class CriterionCheck:
    """Collects the sub-checks of one acceptance criterion, then asserts them together."""

    def __init__(self, name):
        self.name = name
        self.items = []

    def __call__(self, label, ok, detail=""):
        ok = bool(ok)
        self.items.append((label, ok, detail))
        line = f"[{'PASS' if ok else 'FAIL'}] {self.name} :: {label} {detail}".rstrip()
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    def finish(self):
        failed = [f"{label} {detail}" for label, ok, detail in self.items if not ok]
        assert not failed, f"{self.name}: " + "; ".join(failed)


@pytest.fixture
def criterion():
    return CriterionCheck


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def iterated_u_2001():
    return bounds.iterated_weight(SymmetryGroup.U, 2001)


@pytest.fixture(scope="session")
def iterated_u_801():
    return bounds.iterated_weight(SymmetryGroup.U, 801)


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)
