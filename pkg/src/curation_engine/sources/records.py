"""Source-side value types and the wrapper registry."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

MAX_SEARCH_TERMS = 10


@dataclass
class SourceRecord:
    """One fetched document: a paper, a page, a sample entry."""

    record_id: str
    title: str
    body: str = ""
    extra_ids: "dict[str, str]" = field(default_factory=dict)
    source_name: str = ""

    def __post_init__(self):
        if not self.record_id:
            raise ValueError("record_id must be non-empty")
        if self.body is None:
            self.body = ""


@dataclass
class SearchTerms:
    """Decomposed search phrases, most specific first."""

    terms: "list[str]"
    origin_question: str = ""

    def __post_init__(self):
        if not 1 <= len(self.terms) <= MAX_SEARCH_TERMS:
            raise ValueError(f"need 1..{MAX_SEARCH_TERMS} terms, got {len(self.terms)}")
        for term in self.terms:
            if not term or not term.strip():
                raise ValueError("search terms must be non-empty")


class WrapperMode(Enum):
    DYNAMIC_API = "dynamic_api"
    STATIC_INGEST = "static_ingest"


class Capability(Enum):
    SEARCH = "search"
    FETCH_BY_ID = "fetch_by_id"


@dataclass(frozen=True)
class WrapperDescriptor:
    name: str
    mode: WrapperMode
    capabilities: frozenset = frozenset()

    def __post_init__(self):
        caps = frozenset(self.capabilities)
        object.__setattr__(self, "capabilities", caps)
        if self.mode is WrapperMode.DYNAMIC_API and Capability.SEARCH not in caps:
            raise ValueError(f"dynamic wrapper {self.name!r} must be searchable")


def default_registry() -> "dict[str, WrapperDescriptor]":
    """All known wrappers; only pubmed and wikipedia have fetch code behind them."""
    search = frozenset({Capability.SEARCH})
    both = frozenset({Capability.SEARCH, Capability.FETCH_BY_ID})
    dynamic = [
        WrapperDescriptor("pubmed", WrapperMode.DYNAMIC_API, both),
        WrapperDescriptor("wikipedia", WrapperMode.DYNAMIC_API, both),
        # registered for interface completeness, not yet fetchable
        WrapperDescriptor("clinicaltrials", WrapperMode.DYNAMIC_API, search),
        WrapperDescriptor("biosample", WrapperMode.DYNAMIC_API, search),
        WrapperDescriptor("bioproject", WrapperMode.DYNAMIC_API, search),
        WrapperDescriptor("bioc-pmc", WrapperMode.DYNAMIC_API, search),
        WrapperDescriptor("bacdive", WrapperMode.DYNAMIC_API, search),
        WrapperDescriptor("nmdc", WrapperMode.DYNAMIC_API, search),
        WrapperDescriptor("ess-deepdive", WrapperMode.DYNAMIC_API, search),
        WrapperDescriptor("jgi-gold", WrapperMode.DYNAMIC_API, search),
        WrapperDescriptor("google-drive", WrapperMode.DYNAMIC_API, search),
    ]
    static = [
        WrapperDescriptor("ontology-file", WrapperMode.STATIC_INGEST),
        WrapperDescriptor("flat-file", WrapperMode.STATIC_INGEST),
    ]
    return {d.name: d for d in dynamic + static}


IMPLEMENTED_WRAPPERS = ("pubmed", "wikipedia")
