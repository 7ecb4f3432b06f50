import numpy as np
import pytest

from whlab import Lebesgue, Lorentzian, Power, SpectralMeasure, Window

_ACCEPTANCE = []


def record_acceptance(number, ok, detail):
    """Collect one pass/fail line per acceptance criterion."""
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    _ACCEPTANCE.append((number, line))
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def lebesgue():
    return SpectralMeasure(Lebesgue())


@pytest.fixture(scope="session")
def atom0():
    return SpectralMeasure(atoms=((0.0, 2 * np.pi),))


@pytest.fixture(scope="session")
def lorentzian():
    return SpectralMeasure(Lorentzian())


def power(a):
    return SpectralMeasure(Power(a))


# atom-free measures with finite variation or declared growth, used by
# property tests that must hold "for every whitelisted measure"
WHITELIST = {
    "lebesgue": lambda: SpectralMeasure(Lebesgue()),
    "lorentzian": lambda: SpectralMeasure(Lorentzian()),
    "window": lambda: SpectralMeasure(Window(1.0, -2.0, 3.0)),
    "power-0.5": lambda: power(0.5),
    "power-1": lambda: power(1.0),
    "atom0": lambda: SpectralMeasure(atoms=((0.0, 2 * np.pi),)),
    "lebesgue+atom": lambda: SpectralMeasure(Lebesgue(), ((0.0, 2 * np.pi),)),
    "lorentzian+atoms": lambda: SpectralMeasure(Lorentzian(2.0, 0.5), ((-1.0, 1.0), (2.5, 3.0))),
}
