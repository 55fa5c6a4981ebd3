import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tsbridge.oracle import RandomSpec

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def specs(max_states=6):
    return st.builds(
        RandomSpec,
        n_states=st.integers(1, max_states),
        n_letters=st.integers(1, 3),
        density=st.floats(0.1, 0.6),
        tau_prob=st.floats(0.0, 0.5),
        seed=st.integers(0, 10**6),
    )


@pytest.fixture
def tmp_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
