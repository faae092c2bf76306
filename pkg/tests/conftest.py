from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from metricjets.jet import DiffeoJet, JetScalar, monomials_upto
from metricjets.metric import MetricJet

small_q = st.fractions(min_value=-4, max_value=4, max_denominator=5)


@st.composite
def jets(draw, dim: int, order: int, low: int = 0, density: float = 0.5):
    terms = {}
    for alpha in monomials_upto(dim, order):
        if sum(alpha) >= low and draw(st.booleans() if density >= 0.5 else st.integers(0, 3).map(lambda k: k == 0)):
            terms[alpha] = draw(small_q)
    return JetScalar(dim, order, terms)


@st.composite
def diffeos(draw, dim: int, order: int):
    """Map jets with an invertible integer-ish linear part."""
    while True:
        lin = [[draw(st.integers(-2, 2)) for _ in range(dim)] for _ in range(dim)]
        from metricjets.linalg import det

        if det(lin):
            break
    comps = []
    for k in range(dim):
        linear = JetScalar(dim, order, {tuple(int(t == i) for t in range(dim)): lin[k][i] for i in range(dim)})
        comps.append(linear + draw(jets(dim, order, low=2)))
    return DiffeoJet(comps)


@st.composite
def unit_metrics(draw, dim: int, order: int):
    entries = {}
    for i in range(dim):
        for j in range(i, dim):
            e = draw(jets(dim, order, low=1))
            entries[(i, j)] = e + 1 if i == j else e
    return MetricJet(entries)


def q(text: str) -> Fraction:
    return Fraction(text)


@pytest.fixture
def xy4():
    return JetScalar.variables(2, 4)


from hypothesis import HealthCheck, settings  # noqa: E402

settings.register_profile(
    "jets",
    deadline=None,
    suppress_health_check=[HealthCheck.large_base_example, HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("jets")


# one verdict line per acceptance criterion -------------------------------------------

_VERDICTS: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _VERDICTS[number] = ("PASS" if report.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        verdict, title = _VERDICTS[number]
        terminalreporter.write_line(f"{verdict}  criterion {number}: {title}")
