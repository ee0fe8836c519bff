"""External knowledge sources: API wrappers, caching, and static loaders."""

from .cache import cache_and_refine, cache_collection_name
from .decompose import decompose_query
from .flat import FlatFormat, load_flat
from .http import HttpFetcher, LiveFetcher, ReplayFetcher, url_digest
from .ontology import load_ontology
from .pubmed import build_efetch_url, build_esearch_url, pubmed_search
from .records import (
    Capability,
    SearchTerms,
    SourceRecord,
    WrapperDescriptor,
    WrapperMode,
    default_registry,
)
from .wikipedia import build_extracts_url, build_search_url, wikipedia_search

__all__ = [
    "Capability",
    "FlatFormat",
    "HttpFetcher",
    "LiveFetcher",
    "ReplayFetcher",
    "SearchTerms",
    "SourceRecord",
    "WrapperDescriptor",
    "WrapperMode",
    "build_efetch_url",
    "build_esearch_url",
    "build_extracts_url",
    "build_search_url",
    "cache_and_refine",
    "cache_collection_name",
    "decompose_query",
    "default_registry",
    "load_flat",
    "load_ontology",
    "pubmed_search",
    "url_digest",
    "wikipedia_search",
]
