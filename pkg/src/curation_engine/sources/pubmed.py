"""PubMed via the NCBI E-utilities: esearch for ids, efetch for records.

URL construction is a pure function of its inputs and is asserted
byte-for-byte in tests; parameter order is fixed, phrases are quoted and
joined with OR, and the API key always rides last.
"""

from __future__ import annotations

import os
import xml.etree.ElementTree as ET
from urllib.parse import urlencode

from ..errors import ParseError
from .http import NCBI_KEY_ENV, HttpFetcher
from .records import SearchTerms, SourceRecord

EUTILS_BASE = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/"
SOURCE_NAME = "pubmed"


def _term_expression(terms: SearchTerms) -> str:
    return " OR ".join(f'"{t}"' for t in terms.terms)


def build_esearch_url(terms: SearchTerms, max_records: int, api_key: "str | None" = None) -> str:
    params = [
        ("db", "pubmed"),
        ("term", _term_expression(terms)),
        ("retmax", str(max_records)),
        ("retmode", "json"),
    ]
    if api_key:
        params.append(("api_key", api_key))
    return EUTILS_BASE + "esearch.fcgi?" + urlencode(params)


def build_efetch_url(pmids: "list[str]", api_key: "str | None" = None) -> str:
    params = [
        ("db", "pubmed"),
        ("id", ",".join(pmids)),
        ("rettype", "abstract"),
        ("retmode", "xml"),
    ]
    if api_key:
        params.append(("api_key", api_key))
    # commas stay literal, matching the documented id-list form
    return EUTILS_BASE + "efetch.fcgi?" + urlencode(params, safe=",")


def _parse_esearch(body: str) -> "list[str]":
    import json

    try:
        data = json.loads(body)
        ids = data["esearchresult"]["idlist"]
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"unexpected esearch response: {exc}")
    if not isinstance(ids, list) or not all(str(i).isdigit() for i in ids):
        raise ParseError("esearch idlist is not a list of numeric ids")
    return [str(i) for i in ids]


def _element_text(elem) -> str:
    return "".join(elem.itertext()).strip() if elem is not None else ""


def _parse_efetch(body: str) -> "list[SourceRecord]":
    try:
        root = ET.fromstring(body)
    except ET.ParseError as exc:
        raise ParseError(f"efetch response is not well-formed XML: {exc}")
    records = []
    for article in root.iter("PubmedArticle"):
        pmid = _element_text(article.find("./MedlineCitation/PMID"))
        if not pmid:
            raise ParseError("article without a PMID in efetch response")
        title = _element_text(article.find("./MedlineCitation/Article/ArticleTitle"))
        sections = article.findall("./MedlineCitation/Article/Abstract/AbstractText")
        abstract = " ".join(filter(None, (_element_text(s) for s in sections)))
        extra_ids = {}
        for aid in article.findall("./PubmedData/ArticleIdList/ArticleId"):
            if aid.get("IdType") == "pmc" and aid.text:
                extra_ids["pmcid"] = aid.text.strip()
        records.append(SourceRecord(
            record_id=f"PMID:{pmid}",
            title=title,
            body=abstract,
            extra_ids=extra_ids,
            source_name=SOURCE_NAME,
        ))
    return records


def pubmed_search(terms: SearchTerms, max_records: int, *, fetcher: HttpFetcher) -> "list[SourceRecord]":
    """Search then fetch; an empty id list short-circuits without an efetch."""
    if max_records < 1:
        raise ValueError("max_records must be >= 1")
    api_key = os.environ.get(NCBI_KEY_ENV) or None
    ids = _parse_esearch(fetcher.fetch(build_esearch_url(terms, max_records, api_key)))
    if not ids:
        return []
    return _parse_efetch(fetcher.fetch(build_efetch_url(ids, api_key)))
