"""
Shared fixtures: small named lattices, their complex algebras and the corpus
"""
from pathlib import Path
import json

import pytest

from workbench.core.boolean_monoid import lattice_complex_algebra
from workbench.core.file_processor import file_processor
from workbench.core.lattice_core import chain, validate_lattice
from workbench.repositories import CorpusRepository

CORPUS_DIR = Path(__file__).resolve().parent.parent / "data" / "corpus"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture(scope="session")
def corpus():
    """(path, lattice) for every bundled corpus file"""
    return CorpusRepository(CORPUS_DIR).get_all()


@pytest.fixture(scope="session")
def c2():
    return chain(2)


@pytest.fixture(scope="session")
def c3():
    """0 < m < 1"""
    return validate_lattice([[0, 1], [1, 2]], n=3, name="C3", labels=["0", "m", "1"])


@pytest.fixture(scope="session")
def m3():
    return file_processor.load_lattice(CORPUS_DIR / "m3.json")


@pytest.fixture(scope="session")
def n5():
    return file_processor.load_lattice(CORPUS_DIR / "n5.json")


@pytest.fixture(scope="session")
def b2():
    """2x2 Boolean lattice 0 < a, b < 1"""
    return file_processor.load_lattice(CORPUS_DIR / "boolean_2x2.json")


@pytest.fixture(scope="session")
def cm_c2(c2):
    return lattice_complex_algebra(c2)


@pytest.fixture(scope="session")
def cm_c3(c3):
    return lattice_complex_algebra(c3)


@pytest.fixture(scope="session")
def cm_m3(m3):
    return lattice_complex_algebra(m3)


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON-serialisable object (or raw text) and return its path"""
    def _write(name: str, content) -> str:
        path = tmp_path / name
        path.write_text(content if isinstance(content, str) else json.dumps(content))
        return str(path)
    return _write
