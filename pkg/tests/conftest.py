import itertools

import numpy as np
import pytest


def brute_labels(n1, n2, cutoff_k):
    """Every (d, occ) with n1 <= d <= n2 and sum(occ) <= cutoff_k, by exhaustive product."""
    out = []
    for d in range(n1, n2 + 1):
        for occ in itertools.product(range(cutoff_k + 1), repeat=d):
            if sum(occ) <= cutoff_k:
                out.append((d, occ))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


# criterion number -> (title, passed, detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        title, passed, detail = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {num}. {title} ({detail})")
