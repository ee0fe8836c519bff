"""One facade behind both the command line and the HTTP service.

Every public method returns a JSON-ready mapping. The CLI prints that
mapping (or a line rendering of it) and the service returns it verbatim,
which is what keeps the two interfaces answer-identical for the same
inputs. Methods raise domain errors from ``errors``; the callers translate
them into exit codes or HTTP statuses.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Mapping, Sequence

from ..agents.bootstrap import BootstrapConfig, agent_bootstrap_data, agent_bootstrap_schema
from ..agents.chat import agent_chat
from ..agents.citeseek import Claim, DEFAULT_CITESEEK_K, agent_citeseek
from ..agents.context import render_object
from ..agents.curate import DEFAULT_MAX_EXAMPLES, agent_curate
from ..agents.extract import ExtractStrategy, agent_extract
from ..agents.match import DEFAULT_MATCH_N, agent_match
from ..agents.parsing import object_from_mapping
from ..agents.search import WRAPPER_SEARCHERS, agent_search
from ..errors import DuplicateId, UnknownAgent, UnknownCollection, UnknownObject
from ..objects import CuratedObject
from ..providers import make_provider
from ..schema import schema_from_mapping, schema_to_mapping
from ..sources.cache import cache_collection_name
from ..sources.flat import load_flat
from ..sources.http import LiveFetcher, ReplayFetcher
from ..sources.ontology import load_ontology
from ..store import Collection, CollectionStore, build_index
from ..store.bundle import export_bundle, import_bundle
from ..store.projection import project_2d
from .cart import Cart, CartPurpose
from .config import SessionConfig

DEFAULT_SEARCH_K = 10
LOCK_WAIT_SECONDS = 10.0

AGENT_NAMES = ("search", "chat", "curate", "extract", "citeseek", "match", "bootstrap")


def _require(body: Mapping, key: str):
    if key not in body or body[key] is None:
        raise ValueError(f"missing required field {key!r}")
    return body[key]


class Engine:
    """Store, provider, fetcher, and cart wired into one session."""

    def __init__(self, config: SessionConfig, *, provider=None, fetcher=None):
        self.config = config
        self.store = CollectionStore(config.db_path)
        self.provider = provider if provider is not None else make_provider(config.provider)
        if fetcher is not None:
            self.fetcher = fetcher
        elif config.http_replay_dir is not None:
            self.fetcher = ReplayFetcher(config.http_replay_dir)
        else:
            self.fetcher = LiveFetcher()
        self.cart = Cart()

    # --- helpers ----------------------------------------------------------

    def _named(self, name: "str | None") -> str:
        target = name or self.config.active_collection
        if not target:
            raise ValueError("no collection given and no active_collection configured")
        return target

    def _collection(self, name: "str | None") -> Collection:
        return self.store.get(self._named(name))

    def _check_source(self, source: str) -> None:
        if self.store.exists(source):
            return
        if source in WRAPPER_SEARCHERS:
            if source not in self.config.wrappers:
                raise ValueError(f"wrapper {source!r} is not enabled in this session")
            return
        raise UnknownCollection(f"{source!r} is neither a stored collection nor a wrapper")

    def _source_collection(self, source: str) -> Collection:
        """The collection object ids in `source` actually live in."""
        if self.store.exists(source):
            return self.store.get(source)
        cache = cache_collection_name(source)
        if source in WRAPPER_SEARCHERS and self.store.exists(cache):
            return self.store.get(cache)
        raise UnknownCollection(f"{source!r} has no stored objects")

    def _cart_object(self, item) -> CuratedObject:
        obj = self._source_collection(item.source).get(item.object_id)
        if obj is None:
            raise UnknownObject(
                f"object {item.object_id!r} is not in {item.source!r}",
                detail={"object_id": item.object_id, "source": item.source},
            )
        return obj

    def _cart_background(self) -> "list[str]":
        return [
            render_object(self._cart_object(item))
            for item in self.cart.by_purpose(CartPurpose.BACKGROUND)
        ]

    def _write_locked(self, name: str):
        return self.store.lock_for(name).write_locked(timeout=LOCK_WAIT_SECONDS)

    def _read_locked(self, name: str):
        return self.store.lock_for(name).read_locked(timeout=LOCK_WAIT_SECONDS)

    @staticmethod
    def _row(coll: Collection) -> dict[str, Any]:
        return {
            "name": coll.name,
            "objects": len(coll),
            "metric": coll.metric.value,
            "index_fresh": coll.is_fresh,
        }

    def _hit_rows(self, source: str, hits) -> "list[dict[str, Any]]":
        objects: "Mapping[str, CuratedObject] | None" = None
        if self.store.exists(source):
            objects = self.store.get(source).objects
        else:
            cache = cache_collection_name(source)
            if self.store.exists(cache):
                objects = self.store.get(cache).objects
        rows = []
        for hit in hits:
            label = ""
            if objects is not None and hit.object_id in objects:
                label = objects[hit.object_id].label
            rows.append(
                {
                    "rank": hit.rank,
                    "object_id": hit.object_id,
                    "distance": hit.distance,
                    "label": label,
                }
            )
        return rows

    # --- collections ------------------------------------------------------

    def collections_list(self) -> dict[str, Any]:
        rows = [self._row(self.store.get(name)) for name in self.store.list_names()]
        return {"collections": rows}

    def collections_create(self, name: str, metric: str = "cosine") -> dict[str, Any]:
        with self._write_locked(name):
            coll = self.store.create(name, metric=metric)
        return {"collection": self._row(coll)}

    def collections_delete(self, name: str) -> dict[str, Any]:
        with self._write_locked(name):
            self.store.delete(name)
        return {"deleted": name}

    def collection_show(self, name: "str | None" = None) -> dict[str, Any]:
        target = self._named(name)
        with self._read_locked(target):
            coll = self.store.get(target)
            return {
                "collection": self._row(coll),
                "objects": [obj.to_dict() for obj in coll.objects.values()],
            }

    def projection(self, name: "str | None" = None) -> dict[str, Any]:
        target = self._named(name)
        with self._read_locked(target):
            coll = self.store.get(target)
            points = project_2d(coll)
        return {
            "collection": target,
            "points": [
                {"object_id": oid, "x": x, "y": y, "label": coll.objects[oid].label}
                for oid, x, y in points
            ],
        }

    # --- ingestion and indexing -------------------------------------------

    def ingest(
        self,
        kind: str,
        path: "str | Path",
        collection: "str | None" = None,
        *,
        format: "str | None" = None,
        id_field: str = "id",
        label_field: str = "label",
    ) -> dict[str, Any]:
        if kind == "ontology":
            objects = load_ontology(path)
        elif kind == "flat":
            objects = load_flat(path, format=format, id_field=id_field, label_field=label_field)
        else:
            raise ValueError(f"unknown ingest kind {kind!r} (choices: ontology, flat)")
        target = self._named(collection)
        with self._write_locked(target):
            coll = self.store.get(target) if self.store.exists(target) else self.store.create(target)
            report = coll.upsert(objects)
            self.store.save(coll)
        return {
            "collection": target,
            "inserted": report.inserted,
            "updated": report.updated,
            "objects": len(coll),
        }

    def index_build(self, collection: "str | None" = None) -> dict[str, Any]:
        target = self._named(collection)
        with self._write_locked(target):
            coll = self.store.get(target)
            meta = build_index(coll, self.provider)
            self.store.save(coll)
        return {"collection": target, "index": meta.to_mapping()}

    def insert_object(self, collection: "str | None", mapping: Mapping) -> dict[str, Any]:
        if not isinstance(mapping, Mapping) or not mapping:
            raise ValueError("object body must be a non-empty mapping")
        target = self._named(collection)
        with self._write_locked(target):
            coll = self.store.get(target)
            explicit = mapping.get("id")
            if explicit is not None and str(explicit) in coll.objects:
                raise DuplicateId(
                    f"object {explicit!r} already exists in {target!r}",
                    detail={"object_id": str(explicit), "collection": target},
                )
            obj = object_from_mapping(dict(mapping), existing_ids=coll.objects)
            coll.upsert([obj])
            build_index(coll, self.provider)
            self.store.save(coll)
        return {"collection": target, "inserted": obj.id, "objects": len(coll)}

    # --- bundles ------------------------------------------------------------

    def bundle_export(self, collection: "str | None", out: "str | Path") -> dict[str, Any]:
        target = self._named(collection)
        with self._read_locked(target):
            path = export_bundle(self.store.get(target), out)
        return {"collection": target, "path": str(path)}

    def bundle_import(self, path: "str | Path", name: "str | None" = None) -> dict[str, Any]:
        coll = import_bundle(path, name)
        with self._write_locked(coll.name):
            self.store.adopt(coll)
        return {"collection": coll.name, "objects": len(coll)}

    # --- agents -------------------------------------------------------------

    def search(
        self,
        query: str,
        source: "str | None" = None,
        k: int = DEFAULT_SEARCH_K,
        diversify: bool = False,
        lambda_param: float = 0.5,
    ) -> dict[str, Any]:
        name = self._named(source)
        self._check_source(name)
        hits = agent_search(
            name,
            query,
            k,
            provider=self.provider,
            store=self.store,
            fetcher=self.fetcher,
            diversify=diversify,
            lambda_param=lambda_param,
        )
        return {
            "source": name,
            "query": query,
            "k": k,
            "diversify": diversify,
            "hits": self._hit_rows(name, hits),
        }

    def chat(
        self,
        question: str,
        sources: "Sequence[str] | str | None" = None,
        k: int = DEFAULT_SEARCH_K,
    ) -> dict[str, Any]:
        if sources is None:
            names = [self._named(None)]
        elif isinstance(sources, str):
            names = [sources]
        else:
            names = [str(s) for s in sources]
        if not names:
            raise ValueError("chat needs at least one source")
        for name in names:
            self._check_source(name)
        response = agent_chat(
            names if len(names) > 1 else names[0],
            question,
            k,
            provider=self.provider,
            store=self.store,
            fetcher=self.fetcher,
        )
        return {
            "question": question,
            "sources": names,
            "k": k,
            "body": response.body,
            "references": [
                {"index": r.index, "object_id": r.object_id, "rendering": r.rendering}
                for r in response.references
            ],
            "unresolved_markers": list(response.unresolved_markers),
            "context_ids": list(response.context_ids),
        }

    def curate(
        self,
        collection: "str | None" = None,
        seed: "Mapping | None" = None,
        instructions: "str | None" = None,
        generate_background: bool = False,
        max_examples: int = DEFAULT_MAX_EXAMPLES,
    ) -> dict[str, Any]:
        coll = self._collection(collection)
        if seed is None:
            refine = self.cart.by_purpose(CartPurpose.REFINE)
            if not refine:
                raise ValueError("curate needs a seed or a REFINE item in the cart")
            seed = self._cart_object(refine[0]).to_dict()
        elif not isinstance(seed, Mapping):
            raise ValueError("seed must be a field mapping")
        result = agent_curate(
            coll,
            seed,
            provider=self.provider,
            generate_background=generate_background,
            instructions=instructions,
            max_examples=max_examples,
            extra_context=self._cart_background(),
        )
        return {
            "collection": coll.name,
            "object": result.proposed.to_dict(),
            "exemplar_ids": list(result.exemplar_ids),
            "background": result.background,
            "no_exemplars": result.no_exemplars,
        }

    def extract(
        self,
        text: str,
        collection: "str | None" = None,
        strategy: "str | None" = None,
        instructions: "str | None" = None,
        background_source: "str | None" = None,
    ) -> dict[str, Any]:
        coll = self._collection(collection)
        chosen = ExtractStrategy.parse(strategy) if strategy else self.config.extraction_strategy
        if background_source is None:
            background_source = self.config.background_source
        elif background_source in ("", "none"):
            background_source = None
        if background_source is not None:
            self._check_source(background_source)
        result = agent_extract(
            coll,
            text,
            provider=self.provider,
            strategy=chosen,
            instructions=instructions,
            background_source=background_source,
            store=self.store,
            fetcher=self.fetcher,
            extra_context=self._cart_background(),
        )
        return {
            "collection": coll.name,
            "strategy": chosen.value,
            "object": result.proposed.to_dict(),
            "exemplar_ids": list(result.exemplar_ids),
            "background_ids": list(result.background_ids),
            "violations": [{"path": v.path, "message": v.message} for v in result.violations],
        }

    def citeseek(
        self,
        claim_text: "str | None" = None,
        triple: "Sequence[str] | None" = None,
        source: "str | None" = None,
        k: int = DEFAULT_CITESEEK_K,
    ) -> dict[str, Any]:
        if triple is not None:
            claim = Claim(triple=tuple(str(p) for p in triple))
        elif claim_text is not None:
            claim = Claim(free_text=str(claim_text))
        else:
            raise ValueError("citeseek needs a claim: free text or a triple")
        name = self._named(source)
        self._check_source(name)
        report = agent_citeseek(
            claim,
            name,
            provider=self.provider,
            store=self.store,
            fetcher=self.fetcher,
            k=k,
        )
        return {
            "claim": report.claim_text,
            "source": name,
            "summary": report.summary,
            "verdicts": [
                {
                    "reference": {
                        "index": v.reference.index,
                        "object_id": v.reference.object_id,
                        "rendering": v.reference.rendering,
                    },
                    "category": v.category.value,
                    "excerpt": v.excerpt,
                }
                for v in report.verdicts
            ],
        }

    def match(
        self,
        query: str,
        collection: "str | None" = None,
        n: int = DEFAULT_MATCH_N,
    ) -> dict[str, Any]:
        coll = self._collection(collection)
        result = agent_match(coll, query, n, provider=self.provider)
        chosen = coll.objects.get(result.chosen)
        return {
            "collection": coll.name,
            "query": query,
            "n": n,
            "chosen": result.chosen,
            "chosen_original_id": chosen.original_id if chosen else None,
            "rationale": result.rationale,
            "parse_fallback": result.parse_fallback,
            "candidates": [
                {"rank": h.rank, "object_id": h.object_id, "distance": h.distance}
                for h in result.candidates
            ],
        }

    def bootstrap_schema(
        self,
        kb_name: str,
        description: str,
        attributes: Sequence[str],
        main_class: str,
    ) -> dict[str, Any]:
        config = BootstrapConfig(
            kb_name=str(kb_name),
            description=str(description),
            attributes=tuple(str(a) for a in attributes),
            main_class=str(main_class),
        )
        spec = agent_bootstrap_schema(config, provider=self.provider)
        return {"schema": schema_to_mapping(spec)}

    def bootstrap_data(self, schema_mapping: Mapping, count: int) -> dict[str, Any]:
        if not isinstance(schema_mapping, Mapping):
            raise ValueError("schema must be a mapping")
        spec = schema_from_mapping(schema_mapping)
        instances = agent_bootstrap_data(spec, int(count), provider=self.provider)
        return {
            "count": len(instances),
            "instances": [
                {
                    "values": inst.values,
                    "object": inst.obj.to_dict(),
                    "violations": [
                        {"path": v.path, "message": v.message} for v in inst.violations
                    ],
                }
                for inst in instances
            ],
        }

    # --- cart and config ------------------------------------------------------

    def cart_list(self) -> dict[str, Any]:
        return self.cart.payload()

    def cart_add(
        self,
        object_id: str,
        source: str,
        purpose: "str | CartPurpose" = CartPurpose.REFINE,
    ) -> dict[str, Any]:
        parsed = CartPurpose.parse(purpose)
        probe = self._source_collection(str(source)).get(str(object_id))
        if probe is None:
            raise UnknownObject(
                f"object {object_id!r} is not in {source!r}",
                detail={"object_id": str(object_id), "source": str(source)},
            )
        self.cart.add(str(object_id), str(source), parsed)
        return self.cart.payload()

    def cart_remove(self, object_id: str, source: str) -> dict[str, Any]:
        self.cart.remove(str(object_id), str(source))
        return self.cart.payload()

    def config_payload(self) -> dict[str, Any]:
        return self.config.payload()

    # --- HTTP-style dispatch ----------------------------------------------------

    def run_agent(self, agent: str, body: Mapping) -> dict[str, Any]:
        """Run one agent from a request-body mapping mirroring its parameters."""
        if not isinstance(body, Mapping):
            raise ValueError("agent body must be a mapping")
        if agent == "search":
            return self.search(
                query=str(_require(body, "query")),
                source=body.get("source") or body.get("collection"),
                k=int(body.get("k", DEFAULT_SEARCH_K)),
                diversify=bool(body.get("diversify", False)),
                lambda_param=float(body.get("lambda_param", 0.5)),
            )
        if agent == "chat":
            return self.chat(
                question=str(_require(body, "question")),
                sources=body.get("sources") or body.get("source") or body.get("collection"),
                k=int(body.get("k", DEFAULT_SEARCH_K)),
            )
        if agent == "curate":
            return self.curate(
                collection=body.get("collection"),
                seed=body.get("seed"),
                instructions=body.get("instructions"),
                generate_background=bool(body.get("generate_background", False)),
                max_examples=int(body.get("max_examples", DEFAULT_MAX_EXAMPLES)),
            )
        if agent == "extract":
            return self.extract(
                text=str(_require(body, "text")),
                collection=body.get("collection"),
                strategy=body.get("strategy"),
                instructions=body.get("instructions"),
                background_source=body.get("background_source"),
            )
        if agent == "citeseek":
            claim = body.get("claim")
            claim_text = None
            triple = body.get("triple")
            if isinstance(claim, Mapping):
                claim_text = claim.get("free_text")
                triple = claim.get("triple", triple)
            elif claim is not None:
                claim_text = str(claim)
            return self.citeseek(
                claim_text=claim_text,
                triple=triple,
                source=body.get("source") or body.get("collection"),
                k=int(body.get("k", DEFAULT_CITESEEK_K)),
            )
        if agent == "match":
            return self.match(
                query=str(_require(body, "query")),
                collection=body.get("collection"),
                n=int(body.get("n", DEFAULT_MATCH_N)),
            )
        if agent == "bootstrap":
            mode = str(_require(body, "mode"))
            if mode == "schema":
                return self.bootstrap_schema(
                    kb_name=str(_require(body, "kb_name")),
                    description=str(_require(body, "description")),
                    attributes=_require(body, "attributes"),
                    main_class=str(_require(body, "main_class")),
                )
            if mode == "data":
                return self.bootstrap_data(
                    schema_mapping=_require(body, "schema"),
                    count=int(body.get("count", 5)),
                )
            raise ValueError(f"unknown bootstrap mode {mode!r} (choices: schema, data)")
        raise UnknownAgent(f"no agent named {agent!r}", detail={"agents": list(AGENT_NAMES)})
