import time

import pytest

from isodia import geodesy, surfaces

# One line per acceptance criterion, filled by test_acceptance.py and echoed
# in the terminal summary so the verdicts are visible without -s.
ACCEPTANCE_LINES: list[str] = []


# Mesh pipelines shared by several modules; the wall time of each build is
# kept so the acceptance suite can check its budget.
TIMINGS: dict[str, float] = {}


def _timed(name, build):
    start = time.perf_counter()
    out = build()
    TIMINGS[name] = time.perf_counter() - start
    return out


@pytest.fixture(scope="session")
def sphere_l4():
    def build():
        mesh = surfaces.sample_mesh(surfaces.round_sphere(1.0), 4)
        return mesh, geodesy.geodesy_report(mesh, sources="all")
    return _timed("sphere_l4", build)


@pytest.fixture(scope="session")
def torus_64():
    def build():
        mesh = surfaces.sample_mesh(surfaces.flat_torus(1.0, 1.0), 64)
        return mesh, geodesy.geodesy_report(mesh, sources=64, seed=0)
    return _timed("torus_64", build)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
