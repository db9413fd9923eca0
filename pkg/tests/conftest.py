import numpy as np
import pytest

import nesslab
from nesslab import models
from nesslab.reservoir import ReservoirSpec, gaussian_envelope

_acceptance = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def flat(beta, **kw):
    return ReservoirSpec(beta, "fermionic_flat", **kw)


def gauss(beta, **kw):
    return ReservoirSpec(beta, "fermionic_envelope", gaussian_envelope(), **kw)


FAMILIES = {"flat": flat, "gaussian": gauss}

BUILTIN_MODELS = {
    "single_spin": models.single_spin,
    "xy_isotropic": models.xy_isotropic,
    "xy_anisotropic_0.3": lambda: models.xy_anisotropic(0.3),
    "xy_cut": models.xy_cut,
}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance.append((report.nodeid.split("::", 1)[1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
