import pytest
from hypothesis import strategies as st

from mwrc_ordering.core import canonicalize
from mwrc_ordering.oracle import prufer_decode

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(criterion: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f" -- {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


snr_values = st.floats(min_value=1e-3, max_value=1e4, allow_nan=False, allow_infinity=False)


@st.composite
def profiles(draw, min_n=2, max_n=8, elements=snr_values):
    n = draw(st.integers(min_n, max_n))
    return canonicalize(draw(st.lists(elements, min_size=n, max_size=n)))


@st.composite
def trees(draw, n):
    code = draw(st.lists(st.integers(1, n), min_size=n - 2, max_size=n - 2))
    return prufer_decode(code, n)


@st.composite
def profile_and_tree(draw, min_n=2, max_n=8, elements=snr_values):
    p = draw(profiles(min_n, max_n, elements))
    return p, draw(trees(p.n))
