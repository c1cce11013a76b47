from __future__ import annotations

from pathlib import Path

import pytest

from _corpus import FIXTURE_ORACLE, FIXTURES, blob_dataset  # noqa: F401


@pytest.fixture(scope="session")

def fixture_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_oracle() -> dict:
    return FIXTURE_ORACLE
