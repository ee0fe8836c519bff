"""Concept matching: vector candidates first, model adjudication second.

The model must name one of the presented candidates; anything else falls
back to the top-ranked candidate with a flag, so the result always points
at a real object.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import Unparseable
from ..objects import CuratedObject, _dump_field
from ..store import Collection, SearchHit, knn_search
from .parsing import load_reply_mapping
from .prompts import build_prompt

DEFAULT_MATCH_N = 10


@dataclass
class MatchResult:
    candidates: "list[SearchHit]"
    chosen: str
    rationale: str
    parse_fallback: bool = False
    prompt_text: str = ""


def _candidate_rendering(obj: CuratedObject) -> str:
    parts = [_dump_field("id", obj.id)]
    if obj.label:
        parts.append(_dump_field("label", obj.label))
    if obj.definition:
        parts.append(_dump_field("definition", obj.definition))
    return "".join(parts).rstrip("\n")


def candidate_block(objects: "list[CuratedObject]") -> str:
    return "\n\n".join(_candidate_rendering(o) for o in objects)


def agent_match(
    collection: Collection,
    query: str,
    n: int = DEFAULT_MATCH_N,
    *,
    provider,
) -> MatchResult:
    """The best-matching object for a query, picked by the model from top-n."""
    if not query.strip():
        raise ValueError("query must be non-empty")
    if n < 1:
        raise ValueError("n must be >= 1")
    hits = knn_search(collection, query, n, embedder=provider)
    objects = [collection.objects[h.object_id] for h in hits]

    prompt = build_prompt("match", query=query, candidates=candidate_block(objects))
    reply = provider.complete(prompt).text

    chosen = None
    rationale = ""
    try:
        data = load_reply_mapping(reply)
        chosen = data.get("chosen")
        rationale = str(data.get("rationale", "")).strip()
    except Unparseable:
        pass

    candidate_ids = {h.object_id for h in hits}
    if chosen is None or str(chosen) not in candidate_ids:
        return MatchResult(
            candidates=hits,
            chosen=hits[0].object_id,
            rationale=rationale or reply.strip(),
            parse_fallback=True,
            prompt_text=prompt.user_text,
        )
    return MatchResult(
        candidates=hits,
        chosen=str(chosen),
        rationale=rationale,
        prompt_text=prompt.user_text,
    )
