import pytest

from htasim.geometry import LayoutConfig, build_layout
from htasim.unitcell import builtin_curve_library


@pytest.fixture(scope="session")
def layout():
    return build_layout(LayoutConfig())


@pytest.fixture(scope="session")
def curves():
    return builtin_curve_library()
