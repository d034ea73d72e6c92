import pytest

from arithcodes.algebra import QuatAlgebra, extend_scalars, load_algebra
from arithcodes.exactnum import NumberField
from arithcodes.geometry import EmbeddingData

HALF = "1/2"
HURWITZ_BASIS = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [HALF, HALF, HALF, HALF]]
LIPSCHITZ_BASIS = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
M2_BASIS = [[HALF, HALF, 0, 0], [HALF, "-1/2", 0, 0], [0, 0, HALF, HALF], [0, 0, HALF, "-1/2"]]


def make(a, b, basis):
    return load_algebra({"a": str(a), "b": str(b), "order_basis": basis})


@pytest.fixture(scope="session")
def b6():
    """(-1, 3 | Q) with a maximal order of discriminant 36."""
    return make(-1, 3, HURWITZ_BASIS)


@pytest.fixture(scope="session")
def b6_embedding(b6):
    return EmbeddingData(b6[1])


@pytest.fixture(scope="session")
def hurwitz():
    return make(-1, -1, HURWITZ_BASIS)


@pytest.fixture(scope="session")
def lipschitz():
    return make(-1, -1, LIPSCHITZ_BASIS)


@pytest.fixture(scope="session")
def m2z():
    """M_2(Z) inside (1, 1 | Q)."""
    return make(1, 1, M2_BASIS)


@pytest.fixture(scope="session")
def golden_field():
    return NumberField((-1, -1, 1), ((1, 0), (0, 1)), (2, 0), name="Q(phi)")


@pytest.fixture(scope="session")
def golden_hamilton(golden_field):
    A = QuatAlgebra(golden_field, "-1", "-1", ramified_finite=[])
    return golden_field, A, extend_scalars(A, LIPSCHITZ_BASIS)


@pytest.fixture(scope="session")
def golden_m2(golden_field):
    A = QuatAlgebra(golden_field, "1", "1", ramified_finite=[])
    return golden_field, A, extend_scalars(A, M2_BASIS)


@pytest.fixture(scope="session")
def b6_units_t2(b6, b6_embedding):
    """Gamma cap B(2) for B6."""
    from arithcodes.geometry import enumerate_units_in_ball

    return enumerate_units_in_ball(b6[2], b6_embedding, 2)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.call_report = rep
