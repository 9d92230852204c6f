from fractions import Fraction

from hypothesis import strategies as st

from quadmaps.field import Session, TowerElem

small = st.fractions(min_value=-7, max_value=7, max_denominator=6)


@st.composite
def gauss(draw):
    return TowerElem.gauss(draw(small), draw(small))


_S = Session()
R2 = _S.sqrt(2)
R3I = _S.sqrt(TowerElem.gauss(3, 1))


@st.composite
def tower(draw):
    """Elements of Q(i)(sqrt 2)(sqrt(3+i))."""
    a, b, c, d = (draw(gauss()) for _ in range(4))
    return a + b * R2 + (c + d * R2) * R3I


def frac(v):
    return Fraction(v)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
