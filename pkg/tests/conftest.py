import pytest

from anndyn.funcmodel import FunctionModel


@pytest.fixture(scope="session")
def exp_model():
    return FunctionModel.make_exp()


@pytest.fixture(scope="session")
def eos_model():
    return FunctionModel.make_entire_over_sin()


@pytest.fixture(scope="session")
def sparse_model():
    return FunctionModel.make_sparse_poles(8, 17, 3)


@pytest.fixture(scope="session")
def cubic_model():
    # z^3
    return FunctionModel.make_rational([0, 0, 0, 1.0], [1.0])


@pytest.fixture(scope="session")
def bohr_poly():
    # 4 z^2 (1 - z) = 4 z^2 - 4 z^3: f(0) = 0, max on |z| = 1/2 is 1.5
    return FunctionModel.make_rational([0, 0, 4.0, -4.0], [1.0])
