"""Completing a partial entry into a full one, shaped by nearby exemplars.

The proposed object is returned, never inserted; adding it to the
collection is a separate, explicit step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ..errors import EmptyCollection
from ..objects import CuratedObject
from ..store import Collection, knn_search
from .context import exemplar_block, joined_sections, render_seed
from .parsing import parse_llm_object
from .prompts import build_prompt

DEFAULT_MAX_EXAMPLES = 10


@dataclass
class CurateResult:
    proposed: CuratedObject
    exemplar_ids: "tuple[str, ...]"
    background: "str | None" = None
    no_exemplars: bool = False
    prompt_text: str = ""


def _instruction_section(instructions: "str | None") -> "str | None":
    if not instructions:
        return None
    return f"Additional instructions: {instructions}"


def _background_sections(extra_context: Sequence[str], generated: "str | None") -> "list[str]":
    # cart-provided context first, generated background after it
    blocks = [f"Background:\n{text}" for text in extra_context if text and text.strip()]
    if generated and generated.strip():
        blocks.append(f"Background:\n{generated}")
    return blocks


def agent_curate(
    collection: Collection,
    seed: "Mapping | CuratedObject",
    *,
    provider,
    generate_background: bool = False,
    instructions: "str | None" = None,
    max_examples: int = DEFAULT_MAX_EXAMPLES,
    extra_context: Sequence[str] = (),
) -> CurateResult:
    """Propose one completed entry for the collection from a partial seed."""
    if max_examples < 1:
        raise ValueError("max_examples must be >= 1")
    seed_text = render_seed(seed)

    no_exemplars = False
    try:
        hits = knn_search(collection, seed_text, max_examples, embedder=provider)
        exemplars = [collection.objects[h.object_id] for h in hits]
    except EmptyCollection:
        # an empty collection still gets a proposal, just an unshaped one
        exemplars = []
        no_exemplars = True

    background = None
    if generate_background:
        background = provider.complete(
            build_prompt("curate_background", seed=seed_text)
        ).text

    sections = joined_sections(
        _instruction_section(instructions),
        *_background_sections(extra_context, background),
    )
    prompt = build_prompt(
        "curate",
        sections=sections,
        exemplars=exemplar_block(exemplars),
        seed=seed_text,
    )
    completion = provider.complete(prompt)
    proposed = parse_llm_object(completion.text, existing_ids=collection.objects)
    return CurateResult(
        proposed=proposed,
        exemplar_ids=tuple(o.id for o in exemplars),
        background=background,
        no_exemplars=no_exemplars,
        prompt_text=prompt.user_text,
    )
