"""An ordered working set of objects staged for later agent calls.

Each entry names an object and the source it lives in, tagged with what it
is for: REFINE entries become curation seeds, BACKGROUND entries are pasted
into agent prompts as extra context. The (object_id, source) pair is the
identity; adding it again never duplicates, it just re-tags.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

from ..errors import UnknownObject


class CartPurpose(Enum):
    REFINE = "refine"
    BACKGROUND = "background"

    @classmethod
    def parse(cls, value: "str | CartPurpose | None") -> "CartPurpose":
        if value is None:
            return cls.REFINE
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(p.value for p in cls)
            raise ValueError(f"unknown cart purpose {value!r} (choices: {choices})")


@dataclass(frozen=True)
class CartItem:
    object_id: str
    source: str
    purpose: CartPurpose

    def payload(self) -> dict[str, Any]:
        return {
            "object_id": self.object_id,
            "source": self.source,
            "purpose": self.purpose.value,
        }


class Cart:
    def __init__(self):
        self._items: list[CartItem] = []

    def __len__(self) -> int:
        return len(self._items)

    def items(self) -> "list[CartItem]":
        return list(self._items)

    def _find(self, object_id: str, source: str) -> int:
        for i, item in enumerate(self._items):
            if item.object_id == object_id and item.source == source:
                return i
        return -1

    def add(self, object_id: str, source: str, purpose: "str | CartPurpose" = CartPurpose.REFINE) -> CartItem:
        """Idempotent per (object_id, source); a re-add keeps the original slot."""
        item = CartItem(str(object_id), str(source), CartPurpose.parse(purpose))
        at = self._find(item.object_id, item.source)
        if at >= 0:
            self._items[at] = item
        else:
            self._items.append(item)
        return item

    def remove(self, object_id: str, source: str) -> None:
        at = self._find(str(object_id), str(source))
        if at < 0:
            raise UnknownObject(
                f"cart has no item ({object_id!r}, {source!r})",
                detail={"object_id": object_id, "source": source},
            )
        del self._items[at]

    def by_purpose(self, purpose: CartPurpose) -> "list[CartItem]":
        return [item for item in self._items if item.purpose is purpose]

    def payload(self) -> dict[str, Any]:
        return {"items": [item.payload() for item in self._items]}
