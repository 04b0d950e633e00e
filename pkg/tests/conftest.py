import numpy as np
import pytest

ACCEPTANCE_LINES = []


def random_pmf_batches(rng, total, m_values):
    """Yield (M, array of shape (k, M)) batches totalling ``total`` rows.

    Dirichlet draws at several concentrations, with some entries zeroed, so
    both flat and sparse posteriors show up. Uniform and degenerate rows are
    always included.
    """
    per = max(1, total // len(m_values))
    for m in m_values:
        alphas = rng.choice([0.05, 0.3, 1.0, 5.0], size=per)
        rows = rng.gamma(alphas[:, None], size=(per, m))
        if m > 1:
            mask = rng.random((per, m)) < 0.15
            mask[np.arange(per), rng.integers(0, m, per)] = False
            rows[mask] = 0.0
        rows[rows.sum(axis=1) == 0, 0] = 1.0
        rows /= rows.sum(axis=1, keepdims=True)
        extra = np.vstack([np.full(m, 1.0 / m), np.eye(m)[0]])
        yield m, np.vstack([rows, extra])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def record_criterion():
    def record(number, title, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
