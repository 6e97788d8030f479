import pytest

from trunctilt import load_example


@pytest.fixture(scope="session")
def alg91():
    return load_example("example91.quiver")


@pytest.fixture(scope="session")
def alg92():
    return load_example("lambda2.quiver")


@pytest.fixture(scope="session")
def lam1():
    return load_example("lambda1.quiver")


@pytest.fixture(scope="session")
def st91(alg91):
    from trunctilt.tilting import strong_tilting

    return strong_tilting(alg91)


@pytest.fixture(scope="session")
def bundle91(st91):
    from trunctilt.endo import endomorphism_algebra

    return endomorphism_algebra(st91)


@pytest.fixture(scope="session")
def bundle92(alg92):
    from trunctilt.endo import endomorphism_algebra
    from trunctilt.tilting import strong_tilting

    return endomorphism_algebra(strong_tilting(alg92))
