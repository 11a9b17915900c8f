"""Shared fixtures: catalog charts, comparison fields and an isolated catalog."""

import numpy as np
import pytest

from semiriem_lab.convexity import ComparisonField
from semiriem_lab.geodesics import StarRegion
from semiriem_lab.manifolds import CatalogEntry, MetricChart, get_catalog


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance-size numerical checks")


@pytest.fixture(autouse=True)
def clean_catalog():
    """User charts never leak between tests."""
    yield
    get_catalog().clear_user()


@pytest.fixture
def minkowski2() -> MetricChart:
    return get_catalog().get("minkowski:2").chart


@pytest.fixture
def minkowski3() -> MetricChart:
    return get_catalog().get("minkowski:3").chart


@pytest.fixture
def minkowski4() -> MetricChart:
    return get_catalog().get("minkowski:4").chart


@pytest.fixture
def desitter3() -> CatalogEntry:
    return get_catalog().get("desitter:3")


@pytest.fixture
def cosh_hyperbolic() -> CatalogEntry:
    return get_catalog().get("grw-cosh-hyperbolic:3")


@pytest.fixture
def flat_field(minkowski3) -> ComparisonField:
    """f_{0,q} on Minkowski 3-space with q at the origin."""
    q = np.zeros(3)
    return ComparisonField(minkowski3, q, 0.0, StarRegion(q, 2.0))


def comparison_field(entry: CatalogEntry, K: float) -> ComparisonField:
    return ComparisonField(entry.chart, entry.base_point, K,
                           StarRegion(entry.base_point, entry.star_radius))


@pytest.fixture
def field_for():
    return comparison_field
