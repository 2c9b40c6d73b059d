import numpy as np
import pytest

from blipfield import Lattice, PhysicalConstants


@pytest.fixture(scope="session")
def consts():
    return PhysicalConstants()


@pytest.fixture(scope="session")
def lat():
    return Lattice(4096, 200.0)


@pytest.fixture(scope="session")
def small():
    return Lattice(256, 40.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_state(lattice, rng, kind="single"):
    """Random 4-channel state, Nyquist removed, normalised in position rep."""
    from blipfield import StateVector
    from blipfield import transforms
    from blipfield.core import CHANNELS
    amps = np.zeros((4, lattice.n), dtype=complex)
    for i, ch in enumerate(CHANNELS):
        spec = rng.normal(size=lattice.n) + 1j * rng.normal(size=lattice.n)
        spec[0] = 0.0
        amps[i] = transforms.inverse(spec, ch.s, lattice)
    st = StateVector(kind, "position", lattice, amps)
    return st.scaled(1.0 / np.sqrt(st.norm_sq()))


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def accept(request):
    """Record one acceptance line; lines are repeated in the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} | {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
