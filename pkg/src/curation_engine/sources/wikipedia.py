"""Wikipedia search and plain-text page extracts via the public API."""

from __future__ import annotations

import json
from urllib.parse import quote, urlencode

from ..errors import ParseError
from .http import HttpFetcher
from .records import SearchTerms, SourceRecord

API_BASE = "https://en.wikipedia.org/w/api.php?"
PAGE_BASE = "https://en.wikipedia.org/wiki/"
SOURCE_NAME = "wikipedia"


def build_search_url(terms: SearchTerms, max_records: int) -> str:
    # unquoted OR join: page search favors recall over exact phrases
    params = [
        ("action", "query"),
        ("list", "search"),
        ("srsearch", " OR ".join(terms.terms)),
        ("srlimit", str(max_records)),
        ("format", "json"),
    ]
    return API_BASE + urlencode(params)


def build_extracts_url(titles: "list[str]") -> str:
    params = [
        ("action", "query"),
        ("prop", "extracts"),
        ("explaintext", "1"),
        ("titles", "|".join(titles)),
        ("format", "json"),
    ]
    return API_BASE + urlencode(params)


def page_url(title: str) -> str:
    return PAGE_BASE + quote(title.replace(" ", "_"))


def _parse_search(body: str) -> "list[str]":
    try:
        hits = json.loads(body)["query"]["search"]
        return [h["title"] for h in hits]
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"unexpected search response: {exc}")


def _parse_extracts(body: str) -> "dict[str, str]":
    try:
        pages = json.loads(body)["query"]["pages"]
        return {p["title"]: p.get("extract", "") for p in pages.values()}
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise ParseError(f"unexpected extracts response: {exc}")


def wikipedia_search(terms: SearchTerms, max_records: int, *, fetcher: HttpFetcher) -> "list[SourceRecord]":
    if max_records < 1:
        raise ValueError("max_records must be >= 1")
    titles = _parse_search(fetcher.fetch(build_search_url(terms, max_records)))
    titles = titles[:max_records]
    if not titles:
        return []
    extracts = _parse_extracts(fetcher.fetch(build_extracts_url(titles)))
    return [
        SourceRecord(
            record_id=page_url(title),
            title=title,
            body=extracts.get(title, ""),
            source_name=SOURCE_NAME,
        )
        for title in titles
    ]
