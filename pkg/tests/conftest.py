from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

from app.main import app
from app.schemas import ArrayConfig, TapVector
from app.services import MappingPlan, plan_basic, plan_improved, plan_optimized

REPO_ROOT = Path(__file__).resolve().parent.parent
CORPUS_DIR = REPO_ROOT / "corpus"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def taps3() -> TapVector:
    """Three-tap filter used across the N=3 traces."""
    return TapVector.of(3, -2, 5)


@pytest.fixture
def grid3() -> ArrayConfig:
    """Plain 3x3 array, just large enough for BM/OM with three taps."""
    return ArrayConfig(rows=3, cols=3)


@pytest.fixture
def grid4_diagonal() -> ArrayConfig:
    """4x4 array with the lower-left link, the smallest that holds IM with three taps."""
    return ArrayConfig(rows=4, cols=4, diagonal_enabled=True)


@pytest.fixture
def m1_array() -> ArrayConfig:
    """8x8 array without the diagonal link."""
    return ArrayConfig(rows=8, cols=8)


@pytest.fixture
def m1_diagonal() -> ArrayConfig:
    """8x8 array with the diagonal link."""
    return ArrayConfig(rows=8, cols=8, diagonal_enabled=True)


@pytest.fixture
def basic3(taps3: TapVector, grid3: ArrayConfig) -> MappingPlan:
    return plan_basic(taps3, grid3)


@pytest.fixture
def optimized3(taps3: TapVector, grid3: ArrayConfig) -> MappingPlan:
    return plan_optimized(taps3, grid3)


@pytest.fixture
def improved3(taps3: TapVector, grid4_diagonal: ArrayConfig) -> MappingPlan:
    return plan_improved(taps3, grid4_diagonal)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for reproducible random vectors."""
    return np.random.default_rng(1999)


@pytest.fixture
def samples40() -> list[int]:
    """The 40-sample input shipped with the corpus."""
    import json

    return json.loads((CORPUS_DIR / "input_40.json").read_text())


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture
def client() -> TestClient:
    """Test client for the HTTP API."""
    return TestClient(app)
