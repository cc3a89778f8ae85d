import time

import pytest

from tmbounds.extremal import GridSpec, solve_extremal_direct, solve_extremal_shooting

_direct: dict = {}
_shooting: dict = {}
# wall-clock seconds of each solve when first computed; keyed like the caches
SOLVE_SECONDS: dict = {}
# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE: dict = {}


def direct_solution(n, beta=0.0, cells=800):
    key = (n, float(beta), cells)
    if key not in _direct:
        t0 = time.perf_counter()
        _direct[key] = solve_extremal_direct(n, beta, GridSpec(cells=cells))
        SOLVE_SECONDS[("direct",) + key] = time.perf_counter() - t0
    return _direct[key]


def shooting_solution(n, beta=0.0):
    key = (n, float(beta))
    if key not in _shooting:
        seed = direct_solution(n, beta)
        t0 = time.perf_counter()
        _shooting[key] = solve_extremal_shooting(n, beta, seed=seed)
        # a shooting run includes its seeding solve
        SOLVE_SECONDS[("shooting",) + key] = (time.perf_counter() - t0
                                              + SOLVE_SECONDS[("direct",) + key + (800,)])
    return _shooting[key]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
