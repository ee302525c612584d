import sys

import pytest

from finapprox import NormParams, PowerTail, ProfilePiece, RearrangementProfile, StepFunction


@pytest.fixture
def p1_profile():
    """1 on [0, 1), then 1/t."""
    return RearrangementProfile((ProfilePiece(0.0, 1.0, 1.0),), PowerTail(1.0, 1.0, 1.0))


@pytest.fixture
def s1():
    return StepFunction(((0.0, 1.0, 3.0), (1.0, 3.0, 1.0)))


@pytest.fixture
def unit_indicator():
    return StepFunction(((0.0, 1.0, 1.0),))


@pytest.fixture
def half_params():
    return NormParams(2.0, alpha=0.5)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in mod.TITLES.items():
        runs = mod.RESULTS.get(n)
        if not runs:
            terminalreporter.write_line(f"criterion {n:2d}: NOT RUN  {title}")
            continue
        ok = all(passed for passed, _ in runs)
        notes = "; ".join(d for passed, d in runs if not passed and d)
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  [{notes}]" if notes else ""))
