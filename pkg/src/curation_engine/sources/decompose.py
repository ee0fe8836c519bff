"""LLM query decomposition: question text in, search phrases out."""

from __future__ import annotations

import re

from .records import MAX_SEARCH_TERMS, SearchTerms

_LINE_NOISE = re.compile(r"^\s*(?:[-*•]|\d+[.)])\s*")


def decompose_query(question: str, provider) -> SearchTerms:
    """Ask the model for search phrases, one per line.

    Bullets, numbering, and surrounding quotes are tolerated and stripped.
    A model that returns nothing usable falls back to the question itself.
    """
    # function-level import: agents depends on sources, a module-level one cycles
    from ..agents.prompts import build_prompt

    if not question or not question.strip():
        raise ValueError("question must be non-empty")
    prompt = build_prompt("decompose", question=question.strip(),
                          max_terms=str(MAX_SEARCH_TERMS))
    text = provider.complete(prompt).text

    terms: list[str] = []
    for line in text.splitlines():
        phrase = _LINE_NOISE.sub("", line).strip().strip('"“”').strip()
        if phrase:
            terms.append(phrase)
        if len(terms) == MAX_SEARCH_TERMS:
            break
    if not terms:
        terms = [question.strip()]
    return SearchTerms(terms=terms, origin_question=question.strip())
