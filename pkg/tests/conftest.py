"""Shared high-precision oracles (mpmath) and fixtures."""
import mpmath as mp
import pytest

from whitham_mi import DispersionModel

mp.mp.dps = 40


def mp_symbol(model: DispersionModel, z):
    z = mp.mpf(z)
    t = mp.mpf(1) if z == 0 else mp.tanh(z) / z
    if model.is_vorticity:
        w = mp.mpf(model.varpi)
        return w * t / 2 + model.sign * mp.sqrt(t + w * w * t * t / 4)
    return mp.sqrt((1 + mp.mpf(model.tau) * z * z) * t)


def mp_deriv(model, z, order):
    return mp.diff(lambda s: mp_symbol(model, s), mp.mpf(z), order)


def mp_delta_bf(model, z):
    z = mp.mpf(z)
    zm1 = mp.diff(lambda s: s * mp_symbol(model, s), z)
    return 2 * (mp_symbol(model, z) - mp_symbol(model, 2 * z)) + zm1 - mp_symbol(model, 0)


def mp_delta_mi(model, z):
    z = mp.mpf(z)
    zm1 = mp.diff(lambda s: s * mp_symbol(model, s), z)
    zm2 = mp.diff(lambda s: s * mp_symbol(model, s), z, 2)
    m0 = mp_symbol(model, 0)
    second = mp_symbol(model, z) - mp_symbol(model, 2 * z)
    return zm2 * (zm1 - m0) / second * mp_delta_bf(model, z)


@pytest.fixture
def gravity():
    return DispersionModel.gravity()


@pytest.fixture
def weak_tension():
    return DispersionModel.capillary(0.1)


@pytest.fixture
def strong_tension():
    return DispersionModel.capillary(0.5)


# one line per acceptance criterion, printed after the run
ACCEPTANCE = []


def record(name, ok, detail, seconds, limit):
    timed_ok = seconds < limit
    line = (f"[{'PASS' if ok and timed_ok else 'FAIL'}] {name}: {detail} "
            f"({seconds:.2f} s, limit {limit:g} s)")
    ACCEPTANCE.append(line)
    return ok and timed_ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
