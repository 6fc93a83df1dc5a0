import os

import pytest

from tests.builders import scenario_bundles
from trustflow.config import get_settings
from trustflow.services.catalog_service import default_catalog


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch):
    """Tests never pick up TRUSTFLOW_* variables from the caller's shell."""
    for name in list(os.environ):
        if name.startswith("TRUSTFLOW_"):
            monkeypatch.delenv(name)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def catalog():
    return default_catalog()


@pytest.fixture
def case_study():
    return scenario_bundles("case_study")
