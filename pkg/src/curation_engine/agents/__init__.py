"""Curation agents: retrieval, prompting, and typed parsing of model output."""

from .bootstrap import BootstrapConfig, DataInstance, agent_bootstrap_data, agent_bootstrap_schema
from .chat import ChatResponse, Reference, agent_chat, extract_markers, normalize_citations
from .citeseek import Claim, EvidenceCategory, EvidenceReport, Verdict, agent_citeseek
from .context import ContextEntry, build_entries, exemplar_block, numbered_block, render_seed
from .curate import CurateResult, agent_curate
from .extract import ExtractResult, ExtractStrategy, agent_extract
from .match import MatchResult, agent_match
from .parsing import (
    load_reply_list,
    load_reply_mapping,
    mint_id,
    object_from_mapping,
    parse_llm_object,
)
from .prompts import build_prompt, load_template, render_template
from .search import RetrievedContext, agent_search, retrieve

__all__ = [
    "BootstrapConfig",
    "ChatResponse",
    "Claim",
    "ContextEntry",
    "CurateResult",
    "DataInstance",
    "EvidenceCategory",
    "EvidenceReport",
    "ExtractResult",
    "ExtractStrategy",
    "MatchResult",
    "Reference",
    "RetrievedContext",
    "Verdict",
    "agent_bootstrap_data",
    "agent_bootstrap_schema",
    "agent_chat",
    "agent_citeseek",
    "agent_curate",
    "agent_extract",
    "agent_match",
    "agent_search",
    "build_entries",
    "build_prompt",
    "exemplar_block",
    "extract_markers",
    "load_reply_list",
    "load_reply_mapping",
    "load_template",
    "mint_id",
    "normalize_citations",
    "numbered_block",
    "object_from_mapping",
    "parse_llm_object",
    "render_seed",
    "render_template",
    "retrieve",
]
