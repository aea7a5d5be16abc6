import math
from functools import lru_cache

import numpy as np
import pytest

from llent.bethe import TG, ModelParams, bethe_roots
from llent.projection import entanglement_report


@lru_cache(maxsize=None)
def cached_roots(n: int, c: float, ell: float = 0.5):
    return bethe_roots(ModelParams(n=n, c=c, ell=ell))


@lru_cache(maxsize=None)
def cached_report(n: int, c: float, ell: float = 0.5):
    return entanglement_report(cached_roots(n, c, ell))


COUPLING_GRID = np.geomspace(1e-2, 1e2, 21)


@pytest.fixture(scope="session")
def coupling_grid():
    return COUPLING_GRID


@pytest.fixture(scope="session")
def grid_reports():
    """Entanglement reports on the 21-point log grid for N in {2, 4, 6}."""
    return {(n, i): cached_report(n, float(c))
            for n in (2, 4, 6) for i, c in enumerate(COUPLING_GRID)}


@pytest.fixture(scope="session")
def tg_reports():
    return {n: cached_report(n, TG) for n in (2, 4, 6)}


def assert_close(actual, expected, tol, label):
    __tracebackhide__ = True
    err = abs(actual - expected)
    assert err <= tol, f"{label}: |{actual!r} - {expected!r}| = {err:.3e} > {tol:g}"
