"""Shared fixtures: the bundled scenarios are expensive to run, so each one
is simulated once per session and the log reused across test modules."""

import time

import pytest

from snsik import bundled_scenario, run


@pytest.fixture(scope="session")
def planar6r_scenario():
    return bundled_scenario("planar6r")


@pytest.fixture(scope="session")
def planar6r_run(planar6r_scenario):
    """(log, wall_seconds) for the band-constrained 6R scenario."""
    t0 = time.perf_counter()
    log = run(planar6r_scenario)
    return log, time.perf_counter() - t0


@pytest.fixture(scope="session")
def lwr7r_scenario():
    return bundled_scenario("lwr7r")


@pytest.fixture(scope="session")
def lwr7r_run(lwr7r_scenario):
    """(log, wall_seconds) for the windowed 7R circle scenario."""
    t0 = time.perf_counter()
    log = run(lwr7r_scenario)
    return log, time.perf_counter() - t0
