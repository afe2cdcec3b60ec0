"""Memo tables for computed invariants and the ``FLOORCACHE 1`` text format.

File layout, one record per line after the header::

    FLOORCACHE 1
    N <alpha> <beta> <value>
    C <r> <alpha> <beta> <gamma> <delta> <value>
    W3 <alpha> <beta> <value>

Vectors use the comma encoding of :func:`welschinger.natvec.format_natseq`.
"""
from __future__ import annotations

import os
import threading
from pathlib import Path
from typing import Iterable

from .natvec import format_natseq, parse_natseq

HEADER = "FLOORCACHE 1"
TABLES = ("N", "C", "W3")


class CacheFormatError(ValueError):
    pass


class CycleError(RuntimeError):
    """A key was re-entered while its own value was still being computed."""


class CacheConflictError(RuntimeError):
    """Two computations of one key disagreed."""


class MemoCache:
    """Three exact-integer tables keyed by vector tuples, with provenance.

    Keys: ``N -> (alpha, beta)``, ``C -> (alpha, beta, gamma, delta, r)``,
    ``W3 -> (alpha, beta)``.  Completed entries are never overwritten with a
    different value.  In-progress markers are per thread, so two threads may
    compute the same key; whichever finishes second must agree.
    """

    def __init__(self, path: str | os.PathLike | None = None):
        self.tables: dict[str, dict[tuple, int]] = {t: {} for t in TABLES}
        self.provenance: dict[str, dict[tuple, str]] = {t: {} for t in TABLES}
        self.path = Path(path) if path is not None else None
        self._unsaved: list[tuple[str, tuple]] = []
        self._lock = threading.Lock()
        self._local = threading.local()
        self.hits = 0
        self.misses = 0
        if self.path is not None and self.path.exists():
            self.load(self.path)

    # -- in-memory protocol -------------------------------------------------

    def _active(self) -> set:
        s = getattr(self._local, "active", None)
        if s is None:
            s = self._local.active = set()
        return s

    def get(self, table: str, key: tuple) -> int | None:
        v = self.tables[table].get(key)
        if v is None:
            self.misses += 1
        else:
            self.hits += 1
        return v

    def begin(self, table: str, key: tuple) -> None:
        active = self._active()
        if (table, key) in active:
            raise CycleError(f"{table}{key} re-entered during its own computation")
        active.add((table, key))

    def abort(self, table: str, key: tuple) -> None:
        self._active().discard((table, key))

    def put(self, table: str, key: tuple, value: int, source: str = "recursion") -> int:
        self._active().discard((table, key))
        with self._lock:
            old = self.tables[table].get(key)
            if old is not None:
                if old != value:
                    raise CacheConflictError(f"{table}{key}: cached {old}, computed {value}")
                if source != self.provenance[table].get(key):
                    self.provenance[table][key] = "both-agree"
                return old
            self.tables[table][key] = value
            self.provenance[table][key] = source
            self._unsaved.append((table, key))
        return value

    def clear(self) -> None:
        with self._lock:
            for t in TABLES:
                self.tables[t].clear()
                self.provenance[t].clear()
            self._unsaved.clear()

    def __len__(self) -> int:
        return sum(len(t) for t in self.tables.values())

    def stats(self) -> dict[str, int]:
        out = {t: len(self.tables[t]) for t in TABLES}
        out["hits"] = self.hits
        out["misses"] = self.misses
        return out

    # -- text format --------------------------------------------------------

    @staticmethod
    def format_record(table: str, key: tuple, value: int) -> str:
        if table == "C":
            a, b, g, dl, r = key
            fields = [str(r)] + [format_natseq(v) for v in (a, b, g, dl)]
        else:
            fields = [format_natseq(v) for v in key]
        return " ".join([table, *fields, str(value)])

    @staticmethod
    def parse_record(line: str, lineno: int = 0) -> tuple[str, tuple, int]:
        parts = line.split(" ")
        try:
            if parts[0] == "C" and len(parts) == 7:
                r = int(parts[1])
                if r < 0 or not parts[1].isdigit():
                    raise ValueError("bad r")
                vecs = [parse_natseq(p) for p in parts[2:6]]
                return "C", (*vecs, r), int(parts[6])
            if parts[0] in ("N", "W3") and len(parts) == 4:
                return parts[0], (parse_natseq(parts[1]), parse_natseq(parts[2])), int(parts[3])
        except ValueError as exc:
            raise CacheFormatError(f"line {lineno}: {exc}: {line!r}") from None
        raise CacheFormatError(f"line {lineno}: unrecognised record {line!r}")

    def records(self) -> Iterable[str]:
        for t in TABLES:
            for key in sorted(self.tables[t]):
                yield self.format_record(t, key, self.tables[t][key])

    def load(self, path: str | os.PathLike) -> int:
        """Merge a cache file into memory; returns the number of records read."""
        count = 0
        with open(path, encoding="ascii") as fh:
            first = fh.readline().rstrip("\n")
            if first != HEADER:
                raise CacheFormatError(f"line 1: expected {HEADER!r}, got {first!r}")
            for lineno, raw in enumerate(fh, 2):
                line = raw.rstrip("\n")
                if not line:
                    continue
                table, key, value = self.parse_record(line, lineno)
                with self._lock:
                    old = self.tables[table].get(key)
                    if old is not None and old != value:
                        raise CacheConflictError(f"line {lineno}: {table}{key} conflicts with {old}")
                    self.tables[table][key] = value
                    self.provenance[table].setdefault(key, "file")
                count += 1
        return count

    def export(self, path: str | os.PathLike) -> None:
        """Write the whole cache to ``path`` (overwriting)."""
        with open(path, "w", encoding="ascii") as fh:
            fh.write(HEADER + "\n")
            for rec in self.records():
                fh.write(rec + "\n")

    def save(self) -> None:
        """Rewrite the bound file with the full in-memory contents."""
        if self.path is None:
            return
        self.export(self.path)
        with self._lock:
            self._unsaved.clear()

    def flush(self) -> int:
        """Append entries computed since the last flush to the bound file."""
        if self.path is None:
            return 0
        with self._lock:
            pending, self._unsaved = self._unsaved, []
        if not pending:
            return 0
        fresh = not self.path.exists() or self.path.stat().st_size == 0
        with open(self.path, "a", encoding="ascii") as fh:
            if fresh:
                fh.write(HEADER + "\n")
            for table, key in pending:
                fh.write(self.format_record(table, key, self.tables[table][key]) + "\n")
        return len(pending)

