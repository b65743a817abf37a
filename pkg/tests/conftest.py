"""Shared fixtures: small codes and configs reused across the suite."""

import pytest

from qecdesk import geometry

from _kit import make_cfg


@pytest.fixture(scope="session")
def planar3():
    return geometry.build_planar(3)


@pytest.fixture(scope="session")
def planar5():
    return geometry.build_planar(5)


@pytest.fixture(scope="session")
def toric4():
    return geometry.build_toric(4)


@pytest.fixture
def cfg3():
    return make_cfg()
