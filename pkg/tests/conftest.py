import functools
import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

from quatdom.domain import build_dirichlet_domain, build_ford_domain  # noqa: E402

SMALL_PAIRS = [(3, 2), (5, 2), (5, 3), (7, 3), (7, 5), (13, 2), (17, 3)]


@functools.lru_cache(maxsize=None)
def ford(p, a):
    return build_ford_domain(p, a)


@functools.lru_cache(maxsize=None)
def dirichlet(p, a):
    return build_dirichlet_domain(p, a)


# criterion number -> (passed, detail), filled by test_acceptance.py
ACCEPTANCE = {}


def record(n, passed, detail=""):
    ACCEPTANCE[n] = (bool(passed), detail)
    print(f"criterion {n:2d}: {'PASS' if passed else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
