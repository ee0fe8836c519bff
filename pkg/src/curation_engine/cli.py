"""Command-line face of the engine.

Every leaf command builds the same payload the HTTP service would return
for the same inputs: `--json` prints that payload verbatim, the default
prints a line rendering of it. Exit codes: 0 success, 1 domain error
(details on stderr), 2 usage error (click prints the synopsis).
"""

from __future__ import annotations

import json
import sys
from typing import Any, Callable

import click
import yaml

from .app.config import DEFAULT_PORT, load_config
from .app.engine import DEFAULT_SEARCH_K, Engine
from .agents.citeseek import DEFAULT_CITESEEK_K
from .agents.curate import DEFAULT_MAX_EXAMPLES
from .agents.match import DEFAULT_MATCH_N
from .errors import CurationError
from .objects import CuratedObject, canonical_serialize

json_option = click.option("--json", "as_json", is_flag=True, help="Emit one JSON document.")


def get_engine(ctx: click.Context) -> Engine:
    if "engine" not in ctx.obj:
        config = load_config(ctx.obj["flags"], config_path=ctx.obj["config_path"])
        ctx.obj["engine"] = Engine(config)
    return ctx.obj["engine"]


def run(ctx: click.Context, as_json: bool, text_fn: Callable[[dict], str], call: Callable[[], dict]) -> None:
    """Run one engine call and print its payload; domain failures exit 1."""
    try:
        payload = call()
    except CurationError as err:
        _fail(err.payload(), as_json)
    except ValueError as err:
        _fail({"error_code": "validation", "message": str(err), "detail": {}}, as_json)
    else:
        if as_json:
            click.echo(json.dumps(payload, indent=2))
        else:
            click.echo(text_fn(payload))


def _fail(payload: dict, as_json: bool) -> None:
    if as_json:
        click.echo(json.dumps(payload, indent=2), err=True)
    else:
        click.echo(f"error[{payload['error_code']}]: {payload['message']}", err=True)
    sys.exit(1)


def _object_text(data: dict) -> str:
    return canonical_serialize(CuratedObject.from_dict(data)).rstrip("\n")


@click.group(name="curation")
@click.option("--config", "config_path", default=None, metavar="PATH", help="Config file (default: ./curation.toml).")
@click.option("--db-path", default=None, metavar="DIR", help="Store root directory.")
@click.option("--model", "model_name", default=None, help="Model name for the provider.")
@click.pass_context
def main(ctx, config_path, db_path, model_name):
    """Retrieval-backed curation over named collections of structured objects."""
    ctx.obj = {
        "config_path": config_path,
        "flags": {"db_path": db_path, "model_name": model_name},
    }


# --- collections -----------------------------------------------------------

@main.group()
def collections():
    """List, create, or delete stored collections."""


def _collections_text(payload: dict) -> str:
    rows = payload["collections"]
    if not rows:
        return "(no collections)"
    return "\n".join(
        f"{r['name']}  objects={r['objects']}  metric={r['metric']}  "
        f"index={'fresh' if r['index_fresh'] else 'stale'}"
        for r in rows
    )


@collections.command("list")
@json_option
@click.pass_context
def collections_list(ctx, as_json):
    """Show every collection in the store."""
    run(ctx, as_json, _collections_text, lambda: get_engine(ctx).collections_list())


@collections.command("create")
@click.argument("name")
@click.option("--metric", default="cosine", show_default=True, help="Distance metric for the index.")
@json_option
@click.pass_context
def collections_create(ctx, name, metric, as_json):
    """Create an empty collection NAME."""
    run(
        ctx,
        as_json,
        lambda p: f"created collection {p['collection']['name']!r} (metric {p['collection']['metric']})",
        lambda: get_engine(ctx).collections_create(name, metric=metric),
    )


@collections.command("delete")
@click.argument("name")
@json_option
@click.pass_context
def collections_delete(ctx, name, as_json):
    """Delete collection NAME and its files."""
    run(ctx, as_json, lambda p: f"deleted collection {p['deleted']!r}",
        lambda: get_engine(ctx).collections_delete(name))


# --- ingest and index ---------------------------------------------------------

@main.group()
def ingest():
    """Load objects into a collection from a file."""


def _ingest_text(payload: dict) -> str:
    return (
        f"collection {payload['collection']!r}: {payload['inserted']} inserted, "
        f"{payload['updated']} updated ({payload['objects']} total)"
    )


@ingest.command("ontology")
@click.argument("path")
@click.option("--collection", default=None, help="Target collection (default: active).")
@json_option
@click.pass_context
def ingest_ontology(ctx, path, collection, as_json):
    """Ingest an ontology graph document at PATH."""
    run(ctx, as_json, _ingest_text,
        lambda: get_engine(ctx).ingest("ontology", path, collection=collection))


@ingest.command("flat")
@click.argument("path")
@click.option("--collection", default=None, help="Target collection (default: active).")
@click.option("--format", "format_", default=None, help="Row format (csv, tsv, jsonl); inferred from the suffix when omitted.")
@click.option("--id-field", default="id", show_default=True)
@click.option("--label-field", default="label", show_default=True)
@json_option
@click.pass_context
def ingest_flat(ctx, path, collection, format_, id_field, label_field, as_json):
    """Ingest a row-per-object file at PATH."""
    run(ctx, as_json, _ingest_text,
        lambda: get_engine(ctx).ingest("flat", path, collection=collection, format=format_,
                                       id_field=id_field, label_field=label_field))


@main.group()
def index():
    """Maintain collection embedding indexes."""


@index.command("build")
@click.option("--collection", default=None, help="Collection to index (default: active).")
@json_option
@click.pass_context
def index_build(ctx, collection, as_json):
    """Embed stale or missing objects and refresh the index."""
    run(
        ctx,
        as_json,
        lambda p: (
            f"indexed {p['index']['object_count']} objects in {p['collection']!r} "
            f"(dimension {p['index']['dimension']}, metric {p['index']['metric']})"
        ),
        lambda: get_engine(ctx).index_build(collection),
    )


# --- retrieval ------------------------------------------------------------------

def _hits_text(payload: dict) -> str:
    lines = [
        f"{h['rank']}. {h['object_id']}  {h['distance']:.4f}  {h['label']}".rstrip()
        for h in payload["hits"]
    ]
    return "\n".join(lines) if lines else "(no hits)"


@main.command()
@click.option("--collection", "source", default=None, help="Collection or wrapper to search (default: active).")
@click.option("--query", required=True, help="Search text.")
@click.option("--k", default=DEFAULT_SEARCH_K, show_default=True, help="How many hits.")
@click.option("--diversify", is_flag=True, help="Rerank for diversity.")
@click.option("--lambda-param", default=0.5, show_default=True, help="Diversity/relevance trade-off.")
@json_option
@click.pass_context
def search(ctx, source, query, k, diversify, lambda_param, as_json):
    """Rank the closest objects to a query."""
    run(ctx, as_json, _hits_text,
        lambda: get_engine(ctx).search(query, source=source, k=k, diversify=diversify,
                                       lambda_param=lambda_param))


def _chat_text(payload: dict) -> str:
    lines = [payload["body"]]
    if payload["references"]:
        lines.append("")
        lines.append("references:")
        lines.extend(f"  [{r['index']}] {r['object_id']}" for r in payload["references"])
    if payload["unresolved_markers"]:
        markers = ", ".join(str(m) for m in payload["unresolved_markers"])
        lines.append(f"warning: unresolved citation markers: {markers}")
    return "\n".join(lines)


@main.command()
@click.option("--question", required=True, help="What to ask.")
@click.option("--source", "sources", multiple=True, help="Collections or wrappers to consult (repeatable; default: active).")
@click.option("--k", default=DEFAULT_SEARCH_K, show_default=True, help="Context objects to retrieve.")
@json_option
@click.pass_context
def chat(ctx, question, sources, k, as_json):
    """Answer a question from retrieved objects, with citations."""
    run(ctx, as_json, _chat_text,
        lambda: get_engine(ctx).chat(question, sources=list(sources) or None, k=k))


# --- agents ----------------------------------------------------------------------

def _proposal_text(payload: dict) -> str:
    lines = [_object_text(payload["object"])]
    if payload.get("exemplar_ids"):
        lines.append(f"exemplars: {', '.join(payload['exemplar_ids'])}")
    if payload.get("no_exemplars"):
        lines.append("note: collection was empty, no exemplars shaped this proposal")
    if payload.get("background"):
        lines.append("background:")
        lines.append(payload["background"])
    if payload.get("background_ids"):
        lines.append(f"background records: {', '.join(payload['background_ids'])}")
    for violation in payload.get("violations", ()):
        lines.append(f"violation {violation['path']}: {violation['message']}")
    return "\n".join(lines)


@main.command()
@click.option("--collection", default=None, help="Collection to curate into (default: active).")
@click.option("--seed", "seed_text", default=None, help="Partial object as a YAML/JSON mapping.")
@click.option("--label", default=None, help="Shortcut for --seed '{label: ...}'.")
@click.option("--instructions", default=None, help="Extra guidance for the proposal.")
@click.option("--generate-background", is_flag=True, help="Have the model write background notes first.")
@click.option("--max-examples", default=DEFAULT_MAX_EXAMPLES, show_default=True, help="Exemplar cap.")
@json_option
@click.pass_context
def curate(ctx, collection, seed_text, label, instructions, generate_background, max_examples, as_json):
    """Propose one completed entry from a partial seed."""
    if seed_text and label:
        raise click.UsageError("give --seed or --label, not both")
    seed = None
    if seed_text:
        try:
            seed = yaml.safe_load(seed_text)
        except yaml.YAMLError as exc:
            raise click.UsageError(f"--seed is not a valid mapping: {exc}")
        if not isinstance(seed, dict):
            raise click.UsageError("--seed must be a field mapping")
    elif label:
        seed = {"label": label}
    run(ctx, as_json, _proposal_text,
        lambda: get_engine(ctx).curate(collection=collection, seed=seed, instructions=instructions,
                                       generate_background=generate_background,
                                       max_examples=max_examples))


@main.command()
@click.option("--collection", default=None, help="Collection that shapes the result (default: active).")
@click.option("--text", default=None, help="Passage to extract from.")
@click.option("--file", "file_path", default=None, metavar="PATH", help="Read the passage from a file.")
@click.option("--strategy", default=None, type=click.Choice(["basic", "schema_function", "recursive"]),
              help="Extraction strategy (default: session setting).")
@click.option("--instructions", default=None, help="Extra guidance for the extraction.")
@click.option("--background-source", default=None,
              help="Wrapper or collection for background context ('none' disables the session default).")
@json_option
@click.pass_context
def extract(ctx, collection, text, file_path, strategy, instructions, background_source, as_json):
    """Extract one structured entry from free text."""
    if (text is None) == (file_path is None):
        raise click.UsageError("give exactly one of --text or --file")
    if file_path is not None:
        try:
            with open(file_path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise click.UsageError(f"cannot read --file: {exc}")
    run(ctx, as_json, _proposal_text,
        lambda: get_engine(ctx).extract(text, collection=collection, strategy=strategy,
                                        instructions=instructions,
                                        background_source=background_source))


def _citeseek_text(payload: dict) -> str:
    lines = [f"claim: {payload['claim']}", f"summary: {payload['summary']}"]
    for verdict in payload["verdicts"]:
        ref = verdict["reference"]
        lines.append(f"[{ref['index']}] {ref['object_id']}  {verdict['category']}")
        lines.append(f"    {verdict['excerpt']}")
    if not payload["verdicts"]:
        lines.append("(no verdicts)")
    return "\n".join(lines)


@main.command()
@click.option("--source", default=None, help="Collection or wrapper to search for evidence (default: active).")
@click.option("--claim", "claim_text", default=None, help="Free-text claim to check.")
@click.option("--triple", nargs=3, default=None, metavar="SUBJ PRED OBJ", help="Claim as a triple.")
@click.option("--k", default=DEFAULT_CITESEEK_K, show_default=True, help="Records to retrieve.")
@json_option
@click.pass_context
def citeseek(ctx, source, claim_text, triple, k, as_json):
    """Retrieve records bearing on a claim and classify their support."""
    if (claim_text is None) == (not triple):
        raise click.UsageError("give exactly one of --claim or --triple")
    run(ctx, as_json, _citeseek_text,
        lambda: get_engine(ctx).citeseek(claim_text=claim_text, triple=triple or None,
                                         source=source, k=k))


def _match_text(payload: dict) -> str:
    lines = [f"chosen: {payload['chosen']}"]
    if payload["chosen_original_id"]:
        lines.append(f"original_id: {payload['chosen_original_id']}")
    lines.append(f"rationale: {payload['rationale']}")
    if payload["parse_fallback"]:
        lines.append("note: reply did not name a candidate, fell back to the top hit")
    lines.append("candidates:")
    lines.extend(f"  {h['rank']}. {h['object_id']}" for h in payload["candidates"])
    return "\n".join(lines)


@main.command()
@click.option("--collection", default=None, help="Collection to match against (default: active).")
@click.option("--query", required=True, help="Concept to ground.")
@click.option("--n", default=DEFAULT_MATCH_N, show_default=True, help="Candidates shown to the model.")
@json_option
@click.pass_context
def match(ctx, collection, query, n, as_json):
    """Pick the collection entry that best grounds a query."""
    run(ctx, as_json, _match_text,
        lambda: get_engine(ctx).match(query, collection=collection, n=n))


# --- bootstrap --------------------------------------------------------------------

@main.group()
def bootstrap():
    """Start a knowledge base from a short description."""


@bootstrap.command("schema")
@click.option("--kb-name", required=True, help="Name for the knowledge base.")
@click.option("--description", required=True, help="One-line statement of what it covers.")
@click.option("--attribute", "attributes", multiple=True, required=True,
              help="Attribute the main class should carry (repeatable).")
@click.option("--main-class", required=True, help="Name of the central class.")
@json_option
@click.pass_context
def bootstrap_schema(ctx, kb_name, description, attributes, main_class, as_json):
    """Draft a schema and repair it into a valid tree."""
    run(ctx, as_json,
        lambda p: yaml.safe_dump(p["schema"], sort_keys=False, allow_unicode=True).rstrip("\n"),
        lambda: get_engine(ctx).bootstrap_schema(kb_name, description, list(attributes), main_class))


def _instances_text(payload: dict) -> str:
    lines = []
    for inst in payload["instances"]:
        obj = inst["object"]
        lines.append(f"{obj['id']}  ({obj.get('label', '')})  violations={len(inst['violations'])}")
        for violation in inst["violations"]:
            lines.append(f"    {violation['path']}: {violation['message']}")
    return "\n".join(lines) if lines else "(no instances)"


@bootstrap.command("data")
@click.option("--schema-file", required=True, metavar="PATH", help="Schema mapping (YAML or JSON).")
@click.option("--count", default=5, show_default=True, help="How many sample instances.")
@json_option
@click.pass_context
def bootstrap_data(ctx, schema_file, count, as_json):
    """Generate sample instances that validate against a schema."""
    try:
        with open(schema_file, "r", encoding="utf-8") as fh:
            mapping = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise click.UsageError(f"cannot read --schema-file: {exc}")
    run(ctx, as_json, _instances_text,
        lambda: get_engine(ctx).bootstrap_data(mapping, count))


# --- bundles -------------------------------------------------------------------

@main.group()
def bundle():
    """Move collections between stores as single files."""


@bundle.command("export")
@click.option("--collection", default=None, help="Collection to export (default: active).")
@click.option("--out", required=True, metavar="PATH", help="Where to write the bundle.")
@json_option
@click.pass_context
def bundle_export(ctx, collection, out, as_json):
    """Write a collection to a portable bundle file."""
    run(ctx, as_json, lambda p: f"wrote bundle {p['path']}",
        lambda: get_engine(ctx).bundle_export(collection, out))


@bundle.command("import")
@click.argument("path")
@click.option("--name", default=None, help="Rename the collection on import.")
@json_option
@click.pass_context
def bundle_import(ctx, path, name, as_json):
    """Load a bundle file into the store."""
    run(ctx, as_json, lambda p: f"imported collection {p['collection']!r} ({p['objects']} objects)",
        lambda: get_engine(ctx).bundle_import(path, name))


# --- service ---------------------------------------------------------------------

@main.command()
@click.option("--port", default=None, type=int, help=f"Port to listen on (default: {DEFAULT_PORT}).")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.pass_context
def serve(ctx, port, host):
    """Run the HTTP service over this store."""
    import uvicorn

    from .app.service import create_app

    engine = get_engine(ctx)
    uvicorn.run(create_app(engine), host=host, port=port or engine.config.port)


if __name__ == "__main__":
    main()
