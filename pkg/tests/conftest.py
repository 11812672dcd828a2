import pytest
from hypothesis import strategies as st

from vcminimal.laminar import DirectedFamily, ElementSet

_ACCEPTANCE = []


@pytest.fixture
def record_criterion():
    def record(number, ok, detail):
        _ACCEPTANCE.append((number, ok, detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")


@st.composite
def ball_lists(draw, max_n=8, max_balls=8):
    n = draw(st.integers(1, max_n))
    balls = draw(st.lists(st.integers(1, (1 << n) - 1), max_size=max_balls))
    return n, [ElementSet(n, b) for b in balls]


@st.composite
def laminar_families(draw, max_n=8, max_balls=8):
    """Greedy laminar filter over random subsets; independent of check_directed."""
    n, balls = draw(ball_lists(max_n, max_balls))
    kept = []
    for b in balls:
        if all(b.bits & c.bits == 0 or b.bits & ~c.bits == 0 or c.bits & ~b.bits == 0 for c in kept):
            kept.append(b)
    return DirectedFamily(n, tuple(kept))
