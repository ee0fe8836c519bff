"""Maximal Marginal Relevance re-ranking of search candidates.

Greedy selection maximizing lambda * sim(query, c) - (1 - lambda) *
max_selected sim(c, s). Similarity here is the negated ranking distance, so
one formula covers all metrics; ties always fall back to the original
candidate order, which keeps the output deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ..errors import EmptyCandidates
from .collection import DistanceMetric, SearchHit

DEFAULT_LAMBDA = 0.5
DEFAULT_POOL_FACTOR = 3


@dataclass
class MmrParams:
    """Relevance/diversity trade-off; pool defaults to 3x the result count."""

    result_count: int
    lambda_param: float = DEFAULT_LAMBDA
    candidate_pool: int | None = None

    def __post_init__(self):
        if self.result_count < 1:
            raise ValueError("result_count must be >= 1")
        if not 0.0 <= self.lambda_param <= 1.0:
            raise ValueError("lambda_param must lie in [0, 1]")
        if self.candidate_pool is None:
            self.candidate_pool = DEFAULT_POOL_FACTOR * self.result_count
        if self.candidate_pool < self.result_count:
            raise ValueError("candidate_pool must be >= result_count")


def _dot(u: Sequence[float], v: Sequence[float]) -> float:
    return math.fsum(a * b for a, b in zip(u, v))


def _norm(u: Sequence[float]) -> float:
    return math.sqrt(_dot(u, u))


def _mmr_similarity(u: Sequence[float], v: Sequence[float], metric: DistanceMetric) -> float:
    if metric is DistanceMetric.COSINE:
        return _dot(u, v) / (_norm(u) * _norm(v)) - 1.0
    if metric is DistanceMetric.EUCLIDEAN:
        return -math.sqrt(math.fsum((a - b) ** 2 for a, b in zip(u, v)))
    return _dot(u, v)


def mmr_rerank(
    query_vec: Sequence[float],
    candidates: Sequence[tuple[str, Sequence[float]]],
    params: MmrParams,
    metric: DistanceMetric = DistanceMetric.COSINE,
) -> list[SearchHit]:
    """Re-rank relevance-sorted (id, vector) candidates for diversity.

    Returns at most ``result_count`` hits; each hit keeps its plain
    query distance, rank reflects selection order.
    """
    if not candidates:
        raise EmptyCandidates("mmr_rerank needs at least one candidate")
    lam = params.lambda_param
    query = list(map(float, query_vec))
    vectors = [list(map(float, vec)) for _, vec in candidates]
    ids = [cid for cid, _ in candidates]
    query_sim = [_mmr_similarity(query, vec, metric) for vec in vectors]

    count = min(params.result_count, len(candidates))
    selected: list[int] = []
    # running max similarity of each candidate to the selected set
    max_to_selected = [float("-inf")] * len(candidates)
    remaining = list(range(len(candidates)))

    for _ in range(count):
        best_idx = None
        best_score = float("-inf")
        for i in remaining:
            if not selected:
                # the opening pick is the plain nearest candidate; lambda
                # only arbitrates once there is something to diverge from
                score = query_sim[i]
            else:
                score = lam * query_sim[i] - (1.0 - lam) * max_to_selected[i]
            if score > best_score:
                best_score = score
                best_idx = i
        selected.append(best_idx)
        remaining.remove(best_idx)
        for i in remaining:
            sim = _mmr_similarity(vectors[i], vectors[best_idx], metric)
            if sim > max_to_selected[i]:
                max_to_selected[i] = sim

    # _mmr_similarity is exactly the negated ranking distance for every metric
    return [
        SearchHit(object_id=ids[i], distance=-query_sim[i], rank=rank)
        for rank, i in enumerate(selected, start=1)
    ]
