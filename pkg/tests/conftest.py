import pathlib

import numpy as np
import pytest

from chaocrypt.cipher import MasterKey
from chaocrypt.formats import read_ppm

DATA = pathlib.Path(__file__).parent / "data"

# lena and mandrill are the standard test images; the other three are
# public-domain stand-ins for the remaining 512x512 test set
TEST_IMAGES = ("lena", "mandrill", "astronaut", "ihc", "hubble")

_acceptance_lines = []


@pytest.fixture(scope="session")
def images():
    return {name: read_ppm(DATA / f"{name}.ppm") for name in TEST_IMAGES}


@pytest.fixture(scope="session")
def lena(images):
    return images["lena"]


@pytest.fixture
def key():
    return MasterKey(x=0.3141592653, y=0.2718281828, v=0.5772156649, w=0.6931471805)


@pytest.fixture
def rng():
    return np.random.default_rng(20240515)


@pytest.fixture
def record():
    """Record a pass/fail line for the acceptance summary."""
    def _record(criterion, passed, detail=""):
        _acceptance_lines.append((criterion, bool(passed), detail))
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in _acceptance_lines:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {criterion}  {detail}")
