"""Canonical-form-keyed graph database: an append-only graph6 file plus a
tab-separated index, safe for concurrent inserters via an exclusive file
lock.  No two stored graphs are isomorphic.
"""
from __future__ import annotations

import fcntl
import hashlib
import os
from dataclasses import dataclass
from pathlib import Path

from .graphcore import Graph, graph6_decode, graph6_encode
from .isocanon import canonical_form

GRAPHS_FILE = "graphs.g6"
INDEX_FILE = "index.tsv"
LOCK_FILE = "lock"


@dataclass(frozen=True)
class StoreEntry:
    canon_hash: str
    offset: int
    source: str
    seed: str
    sigma: str


class GraphStore:
    """Graph collection deduplicated by canonical form.

    Layout inside the directory:
      graphs.g6   one graph6 line per stored graph (append-only)
      index.tsv   canonical-form sha256, byte offset into graphs.g6,
                  source command, seed, sigma (tab-separated, '-' when
                  not applicable)
      lock        empty file used for inter-process locking
    """

    def __init__(self, directory: str | os.PathLike):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        (self.dir / GRAPHS_FILE).touch()
        (self.dir / INDEX_FILE).touch()
        (self.dir / LOCK_FILE).touch()

    def _read_index(self) -> list[StoreEntry]:
        out = []
        with open(self.dir / INDEX_FILE, "r", encoding="ascii") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                h, off, source, seed, sigma = line.split("\t")
                out.append(StoreEntry(h, int(off), source, seed, sigma))
        return out

    def entries(self) -> list[StoreEntry]:
        return self._read_index()

    def __len__(self) -> int:
        return len(self._read_index())

    def hashes(self) -> set[str]:
        return {e.canon_hash for e in self._read_index()}

    def insert(
        self,
        g: Graph,
        source: str = "-",
        seed: str = "-",
        sigma: str = "-",
        canon: bytes | None = None,
    ) -> bool:
        """Store the graph unless an isomorphic copy is present.

        Returns True when the graph was new.  The canonical form may be
        passed in when the caller has already computed it.
        """
        if canon is None:
            canon = canonical_form(g)
        h = hashlib.sha256(canon).hexdigest()
        with open(self.dir / LOCK_FILE, "r+") as lock:
            fcntl.flock(lock, fcntl.LOCK_EX)
            try:
                if any(e.canon_hash == h for e in self._read_index()):
                    return False
                with open(self.dir / GRAPHS_FILE, "ab") as gf:
                    offset = gf.tell()
                    gf.write(graph6_encode(g) + b"\n")
                with open(self.dir / INDEX_FILE, "a", encoding="ascii") as ix:
                    ix.write(f"{h}\t{offset}\t{source}\t{seed}\t{sigma}\n")
                return True
            finally:
                fcntl.flock(lock, fcntl.LOCK_UN)

    def graph_at(self, offset: int) -> Graph:
        with open(self.dir / GRAPHS_FILE, "rb") as gf:
            gf.seek(offset)
            return graph6_decode(gf.readline())

    def graphs(self) -> list[Graph]:
        return [self.graph_at(e.offset) for e in self._read_index()]

    def export_lines(self) -> list[bytes]:
        with open(self.dir / GRAPHS_FILE, "rb") as gf:
            return [line.rstrip(b"\n") for line in gf if line.strip()]
