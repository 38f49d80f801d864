import json

import pytest

from vismca.corrections import CorrectionStore
from vismca.fixture import generate_fixture
from vismca.model import ingest_dataset


@pytest.fixture(scope="session")
def fixture_dataset():
    return ingest_dataset(json.dumps(generate_fixture(seed=0)))


@pytest.fixture(scope="session")
def seeded_store(fixture_dataset):
    """Fixture corrections seeded from ground truth. Read-only by convention."""
    store = CorrectionStore(fixture_dataset)
    store.seed_from_ground_truth()
    return store
