import hypothesis
import numpy as np
import pytest

hypothesis.settings.register_profile("default", max_examples=40, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile("default")


def random_symmetric(rng, d, scale=1.0):
    g = rng.standard_normal((d, d)) * scale
    return 0.5 * (g + g.T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


_criteria = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    label = getattr(item.function, "criterion", None)
    if label is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "measured")
    _criteria.append((label, rep.passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _criteria:
        line = f"{'PASS' if ok else 'FAIL'} {label}"
        terminalreporter.write_line(f"{line} [{detail}]" if detail else line)
