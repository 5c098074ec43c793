import warnings

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from psyllid.errors import AssumptionWarning
from psyllid.model import ModelParams

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_ACCEPTANCE = {}


def record_acceptance(number: int, title: str, passed: bool, detail: str = ""):
    _ACCEPTANCE[number] = (title, passed, detail)


@pytest.fixture
def acceptance():
    return record_acceptance


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, passed, detail = _ACCEPTANCE[number]
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {number:2d}: {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


RANGES = dict(
    r=(0.2, 0.6),
    rho=(1.0, 20.0),
    sigma=(1e-4, 1e-2),
    mu=(0.01, 0.1),
    delta=(0.01, 0.1),
    gamma=(1.0, 3.0),
    nu=(0.05, 1.0),
    eta=(0.2, 2.0),
)


def make_params(**values) -> ModelParams:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AssumptionWarning)
        return ModelParams(**values)


def random_params(rng: np.random.Generator, accept=lambda p: True, limit=100_000) -> ModelParams:
    for _ in range(limit):
        vals = {k: float(rng.uniform(lo, hi)) for k, (lo, hi) in RANGES.items()}
        p = make_params(**vals)
        if accept(p):
            return p
    raise RuntimeError("no parameter set satisfied the filter")


@st.composite
def params_strategy(draw, accept=None):
    vals = {k: draw(st.floats(lo, hi, allow_nan=False, allow_infinity=False)) for k, (lo, hi) in RANGES.items()}
    p = make_params(**vals)
    if accept is not None:
        from hypothesis import assume

        assume(accept(p))
    return p


def rel_close(x, y, tol):
    return abs(x - y) <= tol * max(abs(x), abs(y))
