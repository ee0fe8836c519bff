"""Match agent: candidate pool size, adjudication, fallback."""

import pytest

from curation_engine.agents import agent_match
from curation_engine.objects import CuratedObject, content_digest
from curation_engine.providers import RecordingProvider
from curation_engine.store import Collection, build_index


def _foods(provider, count=14):
    coll = Collection("foodon")
    coll.upsert(
        [
            CuratedObject(
                id=f"Food{i}",
                label=f"food item {i}",
                definition=f"An edible product, variety {i}.",
            )
            for i in range(count)
        ]
    )
    build_index(coll, provider)
    return coll


class TestCandidatePool:
    def test_default_pool_is_ten(self):
        provider = RecordingProvider(["chosen: Food0\nrationale: closest label"])
        coll = _foods(provider, count=14)
        result = agent_match(coll, "edible product", provider=provider)
        assert len(result.candidates) == 10

    def test_small_collection_caps_pool(self):
        provider = RecordingProvider(["chosen: Food0\nrationale: only a few"])
        coll = _foods(provider, count=4)
        result = agent_match(coll, "edible product", provider=provider)
        assert len(result.candidates) == 4

    def test_explicit_n(self):
        provider = RecordingProvider(["chosen: Food0\nrationale: narrowed"])
        coll = _foods(provider, count=14)
        result = agent_match(coll, "edible product", n=3, provider=provider)
        assert len(result.candidates) == 3

    def test_candidates_rendered_into_prompt(self):
        provider = RecordingProvider(["chosen: Food0\nrationale: r"])
        coll = _foods(provider, count=5)
        result = agent_match(coll, "edible product", provider=provider)
        for hit in result.candidates:
            assert f"id: {hit.object_id}" in result.prompt_text


class TestAdjudication:
    def test_model_choice_wins_over_rank(self):
        provider = RecordingProvider(["chosen: Food7\nrationale: best fit"])
        coll = _foods(provider, count=10)
        result = agent_match(coll, "variety 7", provider=provider)
        assert result.chosen == "Food7"
        assert result.rationale == "best fit"
        assert result.parse_fallback is False

    def test_non_candidate_falls_back_to_rank_one(self):
        provider = RecordingProvider(["chosen: Banana\nrationale: invented"])
        coll = _foods(provider, count=6)
        result = agent_match(coll, "edible product", provider=provider)
        assert result.chosen == result.candidates[0].object_id
        assert result.parse_fallback is True

    def test_prose_reply_falls_back_with_reply_as_rationale(self):
        provider = RecordingProvider(["I think the first one looks right."])
        coll = _foods(provider, count=6)
        result = agent_match(coll, "edible product", provider=provider)
        assert result.chosen == result.candidates[0].object_id
        assert result.parse_fallback is True
        assert "first one" in result.rationale

    def test_never_mutates_collection(self):
        provider = RecordingProvider(["chosen: Food1\nrationale: r"])
        coll = _foods(provider, count=6)
        before = content_digest(coll.objects.values())
        agent_match(coll, "edible product", provider=provider)
        assert content_digest(coll.objects.values()) == before

    @pytest.mark.parametrize("bad", ["", "   "])
    def test_blank_query_rejected(self, bad):
        provider = RecordingProvider(["unused"])
        coll = _foods(provider, count=3)
        with pytest.raises(ValueError):
            agent_match(coll, bad, provider=provider)

    def test_nonpositive_n_rejected(self):
        provider = RecordingProvider(["unused"])
        coll = _foods(provider, count=3)
        with pytest.raises(ValueError):
            agent_match(coll, "query", n=0, provider=provider)
