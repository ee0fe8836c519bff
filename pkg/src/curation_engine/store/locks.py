"""Reader/writer lock: many concurrent readers, exclusive writers."""

from __future__ import annotations

import threading
from contextlib import contextmanager

from ..errors import StoreBusy


class ReadWriteLock:
    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writer = False

    def acquire_read(self, timeout: float | None = None) -> bool:
        with self._cond:
            if not self._cond.wait_for(lambda: not self._writer, timeout=timeout):
                return False
            self._readers += 1
            return True

    def release_read(self) -> None:
        with self._cond:
            self._readers -= 1
            if self._readers == 0:
                self._cond.notify_all()

    def acquire_write(self, timeout: float | None = None) -> bool:
        with self._cond:
            if not self._cond.wait_for(
                lambda: not self._writer and self._readers == 0, timeout=timeout
            ):
                return False
            self._writer = True
            return True

    def release_write(self) -> None:
        with self._cond:
            self._writer = False
            self._cond.notify_all()

    @contextmanager
    def read_locked(self, timeout: float | None = None):
        if not self.acquire_read(timeout):
            raise StoreBusy("collection is locked by a writer")
        try:
            yield
        finally:
            self.release_read()

    @contextmanager
    def write_locked(self, timeout: float | None = None):
        if not self.acquire_write(timeout):
            raise StoreBusy("collection is busy")
        try:
            yield
        finally:
            self.release_write()
