from pathlib import Path

import pytest

from docforge import build_relation_index, load_file

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def collections_path() -> str:
    return str(FIXTURES / "collections.json")


@pytest.fixture(scope="session")
def shapes_path() -> str:
    return str(FIXTURES / "shapes.json")


@pytest.fixture(scope="session")
def veclike_path() -> str:
    return str(FIXTURES / "veclike.json")


@pytest.fixture(scope="session")
def collections(collections_path):
    return load_file(collections_path)


@pytest.fixture(scope="session")
def collections_rel(collections):
    return build_relation_index(collections)


@pytest.fixture(scope="session")
def shapes(shapes_path):
    return load_file(shapes_path)


@pytest.fixture(scope="session")
def shapes_rel(shapes):
    return build_relation_index(shapes)


@pytest.fixture(scope="session")
def veclike(veclike_path):
    return load_file(veclike_path)
