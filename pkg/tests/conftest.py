from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def corpus_root():
    root = REPO_ROOT / "corpus"
    if not root.exists():
        pytest.skip("bundled corpus missing; run scripts/make_sample_pack.py")
    return root


@pytest.fixture(scope="session")
def engine(corpus_root):
    from infoforge.pipeline import Engine

    return Engine.open(corpus_root)
