import pytest

from bilatdual.algebra import free_algebra


@pytest.fixture(scope="session")
def free1():
    return free_algebra(1)


@pytest.fixture(scope="session")
def free2():
    return free_algebra(2)
