"""Retrieval-augmented knowledge curation over embedding-indexed collections."""

__version__ = "0.1.0"

from .errors import CurationError
from .objects import CuratedObject, Relationship, canonical_serialize

__all__ = ["CurationError", "CuratedObject", "Relationship", "canonical_serialize", "__version__"]
