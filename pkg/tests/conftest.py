import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from curation_engine.objects import CuratedObject, Relationship
from curation_engine.providers import MockProvider
from curation_engine.store import Collection, build_index


@pytest.fixture
def provider():
    return MockProvider(strict=False)


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


def make_objects(count, prefix="Obj"):
    # labels share some tokens so embeddings are not mutually orthogonal
    topics = ["liver", "heart", "stormwater", "killifish", "cereal", "pepper"]
    out = []
    for i in range(count):
        topic = topics[i % len(topics)]
        out.append(
            CuratedObject(
                id=f"{prefix}{i}",
                label=f"{topic} item {i}",
                definition=f"A {topic} related thing, number {i}.",
                relationships=[Relationship("subclassOf", f"{topic.title()}Root")],
            )
        )
    return out


@pytest.fixture
def indexed_collection(provider):
    coll = Collection("specimens")
    coll.upsert(make_objects(12))
    build_index(coll, provider)
    return coll
