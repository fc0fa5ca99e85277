import pytest

from forge.construction import build_stages


@pytest.fixture(scope="session")
def certs():
    """Deep unverified certificates; stage data are checked by the tests themselves."""
    cache = {}

    def get(base, depth=4):
        key = (base, depth)
        if key not in cache:
            cache[key] = build_stages(base, depth, verify=False)
        return cache[key]
    return get


@pytest.fixture(scope="session")
def c2(certs):
    return certs("cyclic:2")


@pytest.fixture(scope="session")
def c2_verified():
    return build_stages("cyclic:2", 3)
