from fractions import Fraction

import pytest
from hypothesis import strategies as st

from lrlab.exactring import HypersurfaceRing, Poly

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def record():
    def _record(criterion, ok, detail=""):
        ACCEPTANCE[criterion] = (bool(ok), detail)
        return ok
    return _record


coeffs = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))
monos = st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 3))
polys = st.dictionaries(monos, coeffs, max_size=5).map(Poly)
small_polys = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1)),
                              st.integers(-3, 3), max_size=3).map(Poly)
rings = st.builds(HypersurfaceRing, st.integers(2, 5), st.integers(2, 5))
