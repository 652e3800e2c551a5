import os
from dataclasses import replace

import pytest

from sentipar.config import load_config

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def fixture_config(tmp_path):
    """The committed 10-record pipeline config with a per-test output dir."""
    config = load_config(os.path.join(DATA_DIR, "pipeline.conf"))

    def make(subdir="out", **overrides):
        overrides.setdefault("output_dir", str(tmp_path / subdir))
        overrides.setdefault(
            "cache_file", os.path.join(overrides["output_dir"], "cache.json")
        )
        return replace(config, **overrides)

    return make
