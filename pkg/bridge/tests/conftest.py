import os

import pytest

from tinymodels import build_masked, train_causal

# keep subprocess stderr free of progress bars so tests can parse it
os.environ.setdefault("HF_HUB_DISABLE_PROGRESS_BARS", "1")
os.environ.setdefault("TRANSFORMERS_VERBOSITY", "error")


@pytest.fixture(scope="session")
def causal_model_dir(tmp_path_factory):
    return train_causal(tmp_path_factory.mktemp("causal-model"))


@pytest.fixture(scope="session")
def masked_model_dir(tmp_path_factory):
    return build_masked(tmp_path_factory.mktemp("masked-model"))
