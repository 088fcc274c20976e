import pytest
from hypothesis import settings

from andersonsf.base_arith import FieldParams

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session", params=[2, 3], ids=["q2", "q3"])
def params(request):
    return FieldParams.for_q(request.param)


@pytest.fixture(scope="session")
def q2():
    return FieldParams.for_q(2)


@pytest.fixture(scope="session")
def q3():
    return FieldParams.for_q(3)
