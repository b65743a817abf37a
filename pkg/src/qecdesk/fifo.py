"""Bounded FIFO with explicit overflow accounting.

Overflow is never silent: a push onto a full queue drops the incoming
item, counts it, and latches the overflow flag.  All four outcomes are
statuses, not exceptions, and the conservation law

    pushed == popped + occupancy + dropped

holds after any schedule.  One producer and one consumer may share an
instance; a single lock covers every queue-and-counter transition so a
packet becomes visible only after it is fully committed.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass

from .errors import InvalidParameter

PUSH_OK = "ok"
PUSH_DROPPED = "dropped"
POP_OK = "ok"
POP_EMPTY = "empty"


@dataclass(frozen=True)
class FifoStats:
    depth: int
    occupancy: int
    high_water: int
    pushed: int
    popped: int
    dropped: int
    overflow: bool


class BoundedFifo:
    def __init__(self, depth: int):
        if depth < 1:
            raise InvalidParameter("fifo depth must be >= 1")
        self.depth = depth
        self._items: deque = deque()
        self._lock = threading.Lock()
        self._not_full = threading.Condition(self._lock)
        self.pushed = 0
        self.popped = 0
        self.dropped = 0
        self.high_water = 0
        self.overflow = False

    def push(self, item, block: bool = False, timeout: float | None = None) -> str:
        """Non-blocking by default: full queue -> drop + count + flag.

        block=True waits for space instead (used by the threaded driver,
        which must not change record contents relative to single-thread
        runs); it never drops unless the timeout expires.
        """
        with self._not_full:
            if block:
                ok = self._not_full.wait_for(
                    lambda: len(self._items) < self.depth, timeout)
                if not ok:
                    self.pushed += 1
                    self.dropped += 1
                    self.overflow = True
                    return PUSH_DROPPED
            self.pushed += 1
            if len(self._items) >= self.depth:
                self.dropped += 1
                self.overflow = True
                return PUSH_DROPPED
            self._items.append(item)
            if len(self._items) > self.high_water:
                self.high_water = len(self._items)
            return PUSH_OK

    def pop(self) -> tuple[str, object | None]:
        with self._not_full:
            if not self._items:
                return POP_EMPTY, None
            item = self._items.popleft()
            self.popped += 1
            self._not_full.notify()
            return POP_OK, item

    @property
    def occupancy(self) -> int:
        with self._lock:
            return len(self._items)

    def stats(self) -> FifoStats:
        with self._lock:
            return FifoStats(self.depth, len(self._items), self.high_water,
                             self.pushed, self.popped, self.dropped,
                             self.overflow)

    def check_conservation(self) -> None:
        s = self.stats()
        if s.pushed != s.popped + s.occupancy + s.dropped:
            raise AssertionError(
                f"fifo conservation broken: {s.pushed} != "
                f"{s.popped} + {s.occupancy} + {s.dropped}")
