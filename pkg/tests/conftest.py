import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from rootspace import morphology

DATA_DIR = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def toy_alphabet():
    return morphology.latin_alphabet()


@pytest.fixture(scope="session")
def toy_inventory(toy_alphabet):
    return morphology.load_inventory(DATA_DIR / "toy_templates.tsv", toy_alphabet)


@pytest.fixture(scope="session")
def hebrew_alphabet():
    return morphology.hebrew_alphabet()


@pytest.fixture(scope="session")
def hebrew_inventory(hebrew_alphabet):
    path = (
        Path(__file__).resolve().parent.parent
        / "src"
        / "rootspace"
        / "data"
        / "hebrew_templates.tsv"
    )
    return morphology.load_inventory(path, hebrew_alphabet)


@pytest.fixture(scope="session")
def toy_corpus_path():
    return DATA_DIR / "toy_corpus.tsv"
