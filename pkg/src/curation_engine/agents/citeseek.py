"""Finding and classifying evidence for a claim.

The claim text is always decomposed into search terms first; skipping that
step makes literature queries too literal to hit anything. Retrieved
records are numbered into a prompt and the model classifies each one's
bearing on the claim. An empty retrieval is an answer, not a failure: the
report comes back with no verdicts and says why.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..errors import EmptyCollection, UnknownCollection, Unparseable
from ..sources import cache_and_refine, cache_collection_name, decompose_query
from ..store import Collection, CollectionStore, knn_search
from .chat import Reference
from .context import build_entries, numbered_block
from .parsing import load_reply_mapping
from .prompts import build_prompt
from .search import WRAPPER_SEARCHERS, RetrievedContext

DEFAULT_CITESEEK_K = 10


class EvidenceCategory(Enum):
    SUPPORTS = "SUPPORTS"
    PARTIALLY_SUPPORTS = "PARTIALLY_SUPPORTS"
    REFUTES = "REFUTES"
    NO_EVIDENCE = "NO_EVIDENCE"
    DISAGREES = "DISAGREES"


@dataclass(frozen=True)
class Claim:
    """Either free text or a (subject, predicate, object) triple."""

    free_text: "str | None" = None
    triple: "tuple[str, str, str] | None" = None

    def __post_init__(self):
        if (self.free_text is None) == (self.triple is None):
            raise ValueError("a claim is either free text or a triple, not both")
        if self.free_text is not None and not self.free_text.strip():
            raise ValueError("free-text claim must be non-empty")
        if self.triple is not None:
            if len(self.triple) != 3 or not all(str(p).strip() for p in self.triple):
                raise ValueError("a triple claim needs three non-empty parts")

    @property
    def text(self) -> str:
        if self.free_text is not None:
            return self.free_text
        return " ".join(self.triple)


@dataclass(frozen=True)
class Verdict:
    reference: Reference
    category: EvidenceCategory
    excerpt: str


@dataclass
class EvidenceReport:
    claim_text: str
    summary: str
    verdicts: "list[Verdict]" = field(default_factory=list)
    prompt_text: str = ""


def _parse_category(raw) -> EvidenceCategory:
    try:
        return EvidenceCategory(str(raw).strip().upper())
    except ValueError:
        raise Unparseable(f"unknown evidence category {raw!r}")


def _retrieve_records(claim_text: str, source, terms, *, store, provider, fetcher,
                      k: int) -> RetrievedContext:
    if isinstance(source, Collection):
        try:
            hits = knn_search(source, claim_text, k, embedder=provider)
        except EmptyCollection:
            return RetrievedContext(source=source.name)
        return RetrievedContext(source=source.name, hits=hits,
                                objects=[source.objects[h.object_id] for h in hits])
    if store is not None and store.exists(source):
        return _retrieve_records(claim_text, store.get(source), terms, store=store,
                                 provider=provider, fetcher=fetcher, k=k)
    if source in WRAPPER_SEARCHERS:
        if fetcher is None:
            raise ValueError(f"wrapper source {source!r} requires a fetcher")
        records = WRAPPER_SEARCHERS[source](terms, max_records=k, fetcher=fetcher)
        hits = cache_and_refine(records, claim_text, k, store=store,
                                embedder=provider, source_name=source)
        if not hits:
            return RetrievedContext(source=cache_collection_name(source))
        cache = store.get(cache_collection_name(source))
        return RetrievedContext(source=cache.name, hits=hits,
                                objects=[cache.objects[h.object_id] for h in hits])
    raise UnknownCollection(f"{source!r} is neither a stored collection nor a wrapper")


def agent_citeseek(
    claim: Claim,
    source: "str | Collection",
    *,
    provider,
    store: "CollectionStore | None" = None,
    fetcher=None,
    k: int = DEFAULT_CITESEEK_K,
) -> EvidenceReport:
    """Retrieve records bearing on a claim and classify each one's support."""
    claim_text = claim.text
    terms = decompose_query(claim_text, provider)
    context = _retrieve_records(claim_text, source, terms, store=store,
                                provider=provider, fetcher=fetcher, k=k)
    if not context.hits:
        return EvidenceReport(
            claim_text=claim_text,
            summary="No records were found for the claim's search terms.",
        )

    entries = build_entries(context.pairs())
    prompt = build_prompt("citeseek", claim=claim_text, records=numbered_block(entries))
    data = load_reply_mapping(provider.complete(prompt).text)
    if "summary" not in data or "verdicts" not in data:
        raise Unparseable("reply must carry summary and verdicts")
    raw_verdicts = data["verdicts"] or []
    if not isinstance(raw_verdicts, list):
        raise Unparseable("verdicts must be a list")

    verdicts = []
    for item in raw_verdicts:
        if not isinstance(item, dict) or "reference" not in item or "category" not in item:
            raise Unparseable(f"unreadable verdict entry: {item!r}")
        try:
            n = int(item["reference"])
        except (TypeError, ValueError):
            raise Unparseable(f"verdict reference must be a record number: {item!r}")
        if not 1 <= n <= len(entries):
            raise Unparseable(f"verdict cites record {n}, but only {len(entries)} were shown")
        entry = entries[n - 1]
        verdicts.append(
            Verdict(
                reference=Reference(index=n, object_id=entry.object_id,
                                    rendering=entry.rendering),
                category=_parse_category(item["category"]),
                excerpt=str(item.get("excerpt", "")),
            )
        )
    return EvidenceReport(
        claim_text=claim_text,
        summary=str(data["summary"]).strip(),
        verdicts=verdicts,
        prompt_text=prompt.user_text,
    )
