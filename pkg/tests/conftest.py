import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from _corpus import build_corpus  # noqa: E402


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    """A 6-recording corpus with one planted slice per recording."""
    path = tmp_path_factory.mktemp("corpus") / "small.csv"
    planted = build_corpus(path, n_recordings=6, n_slices=6, seed=42)
    return {"path": str(path), "planted": planted, "n_recordings": 6, "n_slices": 6}
