import pytest

from geoagent.datastore import CheckinStore
from geoagent.fixtures import write_fixture_dataset
from geoagent.knowledge import KnowledgeBase


@pytest.fixture(scope="session")
def fixture_paths(tmp_path_factory):
    out = tmp_path_factory.mktemp("dataset")
    return write_fixture_dataset(out)


@pytest.fixture(scope="session")
def store(fixture_paths, tmp_path_factory):
    artifacts = tmp_path_factory.mktemp("artifacts")
    s = CheckinStore(artifact_root=artifacts)
    for table, path in fixture_paths.items():
        s.ingest_checkins(path, table)
    yield s
    s.close()


@pytest.fixture(scope="session")
def schema(store):
    return store.get_schema()


@pytest.fixture(scope="session")
def kb():
    return KnowledgeBase()
