"""Shared fixtures: the ternary five-hypothesis reference set and nominal variants."""

import numpy as np
import pytest
from hypothesis import settings

from typexp import Distribution, HypothesisSet, variational_distance

settings.register_profile("suite", max_examples=50, derandomize=True, deadline=None)
settings.load_profile("suite")

# Five ternary source distributions used throughout the tests and shipped configs.
REFERENCE_VECTORS = [
    [0.1, 0.8, 0.1],
    [0.3, 0.2, 0.5],
    [0.6, 0.1, 0.3],
    [0.4, 0.4, 0.2],
    [0.3, 0.6, 0.1],
]

# Hand-specified nominal sets at three uncertainty radii for the same sources.
NOMINALS_BY_RADIUS = {
    0.1: [
        [0.04, 0.76, 0.20],
        [0.24, 0.30, 0.46],
        [0.70, 0.05, 0.25],
        [0.37, 0.50, 0.13],
        [0.34, 0.50, 0.16],
    ],
    0.03: [
        [0.11, 0.82, 0.07],
        [0.29, 0.23, 0.48],
        [0.63, 0.09, 0.28],
        [0.38, 0.43, 0.19],
        [0.32, 0.57, 0.11],
    ],
    0.005: [
        [0.102, 0.803, 0.095],
        [0.305, 0.198, 0.497],
        [0.599, 0.096, 0.305],
        [0.398, 0.397, 0.205],
        [0.305, 0.599, 0.096],
    ],
}


@pytest.fixture(scope="session")
def ref_dists():
    return [Distribution(np.array(v)) for v in REFERENCE_VECTORS]


@pytest.fixture(scope="session")
def ref_hypotheses(ref_dists):
    return HypothesisSet(ref_dists)


def nominal_dists(radius):
    return [Distribution(np.array(v)) for v in NOMINALS_BY_RADIUS[radius]]


def random_distribution(rng, k, min_mass=0.0):
    """Dirichlet draw over k symbols, optionally floored away from the boundary."""
    while True:
        p = rng.dirichlet(np.ones(k))
        if min_mass == 0.0 or p.min() >= min_mass:
            return Distribution(p)


def perturb_within_radius(rng, q: Distribution, eps: float) -> Distribution:
    """Rejection-sample a distribution within variational distance eps of q."""
    if eps == 0.0:
        return q
    while True:
        direction = rng.dirichlet(np.ones(q.alphabet_size))
        w = rng.uniform(0.0, min(1.0, 2.0 * eps))
        candidate = Distribution((1.0 - w) * q.probs + w * direction)
        if variational_distance(candidate, q) <= eps:
            return candidate


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    rows = []
    for status in ("passed", "failed"):
        for report in terminalreporter.stats.get(status, []):
            if getattr(report, "when", "call") != "call":
                continue
            if "test_acceptance" in report.nodeid:
                rows.append((report.nodeid.split("::")[-1], status.upper()))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, status in sorted(rows):
            terminalreporter.write_line(f"{status:<6} {name}")
