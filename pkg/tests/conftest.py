import pytest

from braidkit import presets
from braidkit.actions import ActionContext


@pytest.fixture(scope="session")
def euclid():
    return presets.load_preset("su2-euclidean")


@pytest.fixture(scope="session")
def mink():
    return presets.load_preset("su2-minkowski")


@pytest.fixture(scope="session")
def ctx(euclid):
    return ActionContext(euclid)


@pytest.fixture(scope="session")
def alg(ctx):
    return ctx.alg


ACCEPTANCE = {}
CRITERIA = 12


@pytest.fixture
def record_criterion():
    def record(number, title, ok, detail=""):
        ACCEPTANCE[number] = (title, ok, detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in range(1, CRITERIA + 1):
        if k not in ACCEPTANCE:
            terminalreporter.write_line(f"criterion {k:2d}: NOT RUN")
            continue
        title, ok, detail = ACCEPTANCE[k]
        line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
