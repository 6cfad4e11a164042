import pytest

from openbaker.quantization import TorusHilbert
from openbaker.spectral import resonance_set


@pytest.fixture(scope="session")
def dyadic160():
    return resonance_set("dyadic", 160, l=3)


@pytest.fixture(scope="session")
def dyadic320():
    return resonance_set("dyadic", 320, l=3)


@pytest.fixture(scope="session")
def triadic243():
    return resonance_set("triadic", 243)


@pytest.fixture(scope="session")
def closed128():
    return resonance_set("dyadic", 128, closed=True)


@pytest.fixture(scope="session")
def hilbert128():
    return TorusHilbert(128)


@pytest.fixture(scope="session")
def hilbert160():
    return TorusHilbert(160)


@pytest.fixture(scope="session")
def hilbert243():
    return TorusHilbert(243)


@pytest.fixture(scope="session")
def hilbert320():
    return TorusHilbert(320)
