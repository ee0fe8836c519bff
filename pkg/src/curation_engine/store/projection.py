"""2-D PCA projection of an indexed collection (the cluster-view data)."""

from __future__ import annotations

import numpy as np

from ..errors import InsufficientData, StaleIndex
from .collection import Collection


def project_2d(collection: Collection) -> list[tuple[str, float, float]]:
    """Mean-centered projection onto the top-2 principal components.

    Sign convention: the largest-magnitude loading of each component is
    positive, so repeated runs give identical output.
    """
    if len(collection.objects) < 2:
        raise InsufficientData("2-D projection needs at least 2 objects")
    if not collection.is_fresh:
        raise StaleIndex(f"collection {collection.name!r} must be indexed before projection")

    ids = list(collection.objects)
    matrix = np.stack([collection.index.rows[oid] for oid in ids]).astype(np.float64)
    centered = matrix - matrix.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)

    components = np.zeros((2, matrix.shape[1]))
    available = min(2, vt.shape[0])
    components[:available] = vt[:available]
    for row in components:
        peak = int(np.argmax(np.abs(row)))
        if row[peak] < 0:
            row *= -1.0

    coords = centered @ components.T
    return [(oid, float(x), float(y)) for oid, (x, y) in zip(ids, coords)]
