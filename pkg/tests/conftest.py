from __future__ import annotations

from hypothesis import HealthCheck, settings, strategies as st

from ballradius.polyring import IntPoly

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

XY = ("X1", "X2")


def P(text: str, variables=("X1",)) -> IntPoly:
    return IntPoly.parse(text, variables)


@st.composite
def small_polys(draw, variables=XY, max_terms=5, max_deg=3, max_coeff=20):
    n = len(variables)
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_deg)] * n),
        st.integers(-max_coeff, max_coeff),
        max_size=max_terms,
    ))
    return IntPoly(variables, terms)


def pytest_terminal_summary(terminalreporter):
    import sys

    # the collected acceptance module holds the PASS/FAIL lines
    mod = next((m for name, m in list(sys.modules.items()) if name.endswith("test_acceptance")), None)
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
