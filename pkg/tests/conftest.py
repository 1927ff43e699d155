import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_spd(rng, n, shift=1.0):
    M = rng.standard_normal((n, n))
    return M.T @ M + shift * np.eye(n)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            for key, text in rep.user_properties:
                if key == "criterion":
                    lines.append((text, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for text, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  {text}")
