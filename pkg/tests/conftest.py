import os
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from skewlab import FieldSpec

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SPEC_DIR = Path(__file__).parent / "fixtures" / "specs"

Q = FieldSpec.rationals()
F5 = FieldSpec.prime(5)


def small_fractions(max_num=6, max_den=4):
    return st.builds(
        Fraction,
        st.integers(-max_num, max_num),
        st.integers(1, max_den),
    )


# acceptance criterion bookkeeping ------------------------------------------------------

_criteria: dict = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            n, text = m.args
            _criteria.setdefault(n, {"text": text, "outcomes": []})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    n = m.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _criteria[n]["outcomes"].append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        c = _criteria[n]
        ran = c["outcomes"]
        status = "PASS" if ran and all(ran) else ("NOT RUN" if not ran else "FAIL")
        terminalreporter.write_line(f"criterion {n:2d} {status}: {c['text']}")
