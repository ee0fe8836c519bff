"""Prompt templates: plain text files with ``{{slot}}`` placeholders.

Rendered prompts feed the fixture-replay digest, so templates are data:
editing one changes the digests and recorded completions must be rebuilt.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

from ..providers import PromptSpec

_SLOT = re.compile(r"\{\{([a-z_]+)\}\}")


@lru_cache(maxsize=None)
def load_template(name: str) -> str:
    ref = resources.files("curation_engine.prompts").joinpath(f"{name}.txt")
    try:
        return ref.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise KeyError(f"no prompt template named {name!r}")


def render_template(name: str, **slots: str) -> str:
    text = load_template(name)
    used = set()

    def substitute(match: re.Match) -> str:
        slot = match.group(1)
        if slot not in slots:
            raise KeyError(f"template {name!r} needs slot {slot!r}")
        used.add(slot)
        return str(slots[slot])

    rendered = _SLOT.sub(substitute, text)
    unused = set(slots) - used
    if unused:
        raise KeyError(f"template {name!r} has no slot(s) {sorted(unused)}")
    return rendered.strip() + "\n"


def build_prompt(name: str, *, max_output: "int | None" = None, **slots: str) -> PromptSpec:
    return PromptSpec(user_text=render_template(name, **slots), max_output=max_output)
