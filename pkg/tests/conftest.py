import os

import pytest

from nngo import fixtures_dir


@pytest.fixture(scope="session")
def fixtures():
    return fixtures_dir()


@pytest.fixture(scope="session")
def peaks_net_problem(fixtures):
    return os.path.join(fixtures, "peaks_net.json")


@pytest.fixture(scope="session")
def peaks_exact_problem(fixtures):
    return os.path.join(fixtures, "peaks_exact.json")


@pytest.fixture(scope="session")
def compressor_problem(fixtures):
    return os.path.join(fixtures, "compressor.json")
