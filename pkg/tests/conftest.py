"""Shared fixtures for the rainbow-decomp test suite."""

import pytest

from rainbow_decomp.core.factorization import generate_circle_factorization
from rainbow_decomp.models import EdgeColouredKn
from rainbow_decomp.settings import get_settings
from rainbow_decomp.utils.logging import clear_context


@pytest.fixture(autouse=True)
def clean_state():
    """Fresh settings and an empty log context around every test."""
    get_settings.cache_clear()
    clear_context()
    yield
    get_settings.cache_clear()
    clear_context()


@pytest.fixture
def k4() -> EdgeColouredKn:
    return generate_circle_factorization(4)


@pytest.fixture
def k6() -> EdgeColouredKn:
    return generate_circle_factorization(6)


@pytest.fixture
def k8() -> EdgeColouredKn:
    return generate_circle_factorization(8)


@pytest.fixture
def k10() -> EdgeColouredKn:
    return generate_circle_factorization(10)
