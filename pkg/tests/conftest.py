import pytest

from holobraid import primitive_root, sample_params


@pytest.fixture(scope="session")
def ctx3():
    return primitive_root(3)


@pytest.fixture(scope="session")
def ctx5():
    return primitive_root(5)


@pytest.fixture(scope="session")
def ctx7():
    return primitive_root(7)


@pytest.fixture(scope="session")
def pair3(ctx3):
    return sample_params(ctx3, 1234, 0, count=2)


@pytest.fixture(scope="session")
def pair5(ctx5):
    return sample_params(ctx5, 1234, 0, count=2)


@pytest.fixture(scope="session")
def pair7(ctx7):
    return sample_params(ctx7, 1234, 0, count=2)
