"""Question answering over retrieved context with inline numeric citations.

The model sees numbered entries and is told to cite them as [n]. Replies
sometimes cite with a bare trailing numeral instead; those are normalized
to the bracketed form before markers are resolved against the context.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import EmptyContext
from ..store import Collection, CollectionStore
from .context import ContextEntry, build_entries, numbered_block
from .prompts import build_prompt
from .search import retrieve

DEFAULT_CHAT_K = 10

_BRACKETED = re.compile(r"\[(\d+)\]")
# a lone small integer hanging at a clause end reads as a citation
_BARE = re.compile(r"(?<=\s)(\d{1,3})(?=[.,;:!?](?:\s|$))")


@dataclass(frozen=True)
class Reference:
    index: int
    object_id: str
    rendering: str


@dataclass
class ChatResponse:
    body: str
    references: "list[Reference]" = field(default_factory=list)
    unresolved_markers: "list[int]" = field(default_factory=list)
    context_ids: "tuple[str, ...]" = ()
    prompt_text: str = ""


def normalize_citations(text: str) -> str:
    return _BARE.sub(lambda m: f"[{m.group(1)}]", text)


def extract_markers(text: str) -> "list[int]":
    """Marker integers in order of first appearance, deduplicated."""
    seen: list[int] = []
    for raw in _BRACKETED.findall(text):
        n = int(raw)
        if n not in seen:
            seen.append(n)
    return seen


def _merge_contexts(contexts, k: int) -> "list[ContextEntry]":
    pooled = []
    for order, ctx in enumerate(contexts):
        for hit, obj in zip(ctx.hits, ctx.objects):
            pooled.append((hit.distance, order, hit.rank, obj, ctx.source))
    pooled.sort(key=lambda item: (item[0], item[1], item[2]))
    return build_entries([(obj, source) for _, _, _, obj, source in pooled[:k]])


def agent_chat(
    sources: "str | Collection | list",
    question: str,
    k: int = DEFAULT_CHAT_K,
    *,
    provider,
    store: "CollectionStore | None" = None,
    fetcher=None,
) -> ChatResponse:
    """Answer a question from the k nearest objects across the named sources."""
    if not question.strip():
        raise ValueError("question must be non-empty")
    if k < 1:
        raise ValueError("k must be >= 1")
    if isinstance(sources, (str, Collection)):
        sources = [sources]
    if not sources:
        raise ValueError("at least one source is required")

    contexts = [
        retrieve(source, question, k, provider=provider, store=store, fetcher=fetcher)
        for source in sources
    ]
    entries = _merge_contexts(contexts, k)
    if not entries:
        raise EmptyContext("no retrievable objects for the question")

    prompt = build_prompt("chat", context=numbered_block(entries), question=question)
    completion = provider.complete(prompt)
    body = normalize_citations(completion.text)

    markers = extract_markers(body)
    references = []
    unresolved = []
    for n in markers:
        if 1 <= n <= len(entries):
            entry = entries[n - 1]
            references.append(Reference(index=n, object_id=entry.object_id,
                                        rendering=entry.rendering))
        else:
            unresolved.append(n)
    references.sort(key=lambda r: r.index)
    return ChatResponse(
        body=body,
        references=references,
        unresolved_markers=unresolved,
        context_ids=tuple(e.object_id for e in entries),
        prompt_text=prompt.user_text,
    )
