"""Precomputed cosine lookups for co-occurring word pairs.

Decoding keeps asking for the cosine of nearby word pairs, and nearly all
of those pairs co-occur somewhere in the training corpus, so computing
them once up front removes most vector math from the decoder's inner
loop.  Values are rounded to single precision on both the hit and the
miss path, which keeps decoding bit-identical whether or not a table is
loaded: the cache is a pure accelerator.
"""
from __future__ import annotations

import struct
from typing import Iterable

import numpy as np

from .corpus import add_boundary_markers
from .lexicon import Lexicon

__all__ = [
    "SimilarityCache",
    "build_cache",
    "save_cache",
    "load_cache",
    "export_tsv",
]

_MAGIC = b"WCSC"
_VERSION = 1
_MIN_NORM = 1e-12
_ENTRY = np.dtype([("a", "<u4"), ("b", "<u4"), ("cos", "<f4")])


class SimilarityCache:
    """Cosine scorer over word ids with an optional precomputed pair table.

    Keys are unordered id pairs stored (smaller, larger).  hits and misses
    count every query, so they always sum to the total number of lookups.
    """

    def __init__(self, embeddings: np.ndarray, table: dict[tuple[int, int], float] | None = None):
        norms = np.linalg.norm(embeddings, axis=1)
        if (norms < _MIN_NORM).any():
            raise ValueError("zero vector in embedding table")
        self._unit = embeddings / norms[:, None]
        self.table: dict[tuple[int, int], float] = table if table is not None else {}
        self.hits = 0
        self.misses = 0

    @property
    def vocab_size(self) -> int:
        return int(self._unit.shape[0])

    def similarity(self, a: int, b: int) -> float:
        """Cosine of two word ids, symmetric in its arguments."""
        if a == b:
            self.hits += 1
            return 1.0
        key = (a, b) if a < b else (b, a)
        val = self.table.get(key)
        if val is not None:
            self.hits += 1
            return val
        self.misses += 1
        return float(np.float32(np.dot(self._unit[a], self._unit[b])))

    def hit_rate(self) -> float:
        total = self.hits + self.misses
        return self.hits / total if total else 0.0


def build_cache(
    sentences: Iterable[list[str]],
    lexicon: Lexicon,
    embeddings: np.ndarray,
    window: int = 4,
    scope: str = "window",
) -> SimilarityCache:
    """Precompute cosines for every distinct unordered pair of words that
    co-occur within `window` positions (or anywhere in the same sentence
    when scope == "sentence").  Boundary markers participate like words.
    """
    if scope not in ("window", "sentence"):
        raise ValueError(f"unknown scope {scope!r}")
    cache = SimilarityCache(embeddings)
    pairs: set[tuple[int, int]] = set()
    for sent in sentences:
        ids = [lexicon.id_of(t) for t in add_boundary_markers(sent)]
        n = len(ids)
        for i in range(n):
            a = ids[i]
            hi = n if scope == "sentence" else min(n, i + window + 1)
            for j in range(i + 1, hi):
                b = ids[j]
                if a != b:
                    pairs.add((a, b) if a < b else (b, a))
    # same arithmetic as the miss path, so a hit is bit-identical to a miss
    unit = cache._unit
    cache.table = {
        (a, b): float(np.float32(np.dot(unit[a], unit[b])))
        for a, b in sorted(pairs)
    }
    return cache


def save_cache(path: str, cache: SimilarityCache) -> None:
    """Binary layout: magic 'WCSC', version byte, vocab size (u32 LE), entry
    count (u64 LE), then (id_a u32, id_b u32, cos f32) triples, ids sorted."""
    items = sorted(cache.table.items())
    rec = np.empty(len(items), dtype=_ENTRY)
    for i, ((a, b), c) in enumerate(items):
        rec[i] = (a, b, c)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(bytes([_VERSION]))
        fh.write(struct.pack("<IQ", cache.vocab_size, len(items)))
        rec.tofile(fh)


def load_cache(path: str, embeddings: np.ndarray) -> SimilarityCache:
    """Read a cache file back; the vocabulary size must match `embeddings`."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise ValueError(f"{path}: not a similarity cache file")
        version = fh.read(1)
        if version != bytes([_VERSION]):
            raise ValueError(f"{path}: unsupported cache version {version!r}")
        vocab_size, count = struct.unpack("<IQ", fh.read(12))
        if vocab_size != embeddings.shape[0]:
            raise ValueError(
                f"{path}: cache built for vocabulary of {vocab_size}, "
                f"embeddings have {embeddings.shape[0]}"
            )
        rec = np.fromfile(fh, dtype=_ENTRY, count=count)
        if len(rec) != count:
            raise ValueError(f"{path}: truncated cache file")
    table = {
        (int(a), int(b)): float(c)
        for a, b, c in zip(rec["a"].tolist(), rec["b"].tolist(), rec["cos"].tolist())
    }
    return SimilarityCache(embeddings, table)


def export_tsv(path: str, cache: SimilarityCache, lexicon: Lexicon) -> None:
    """Plain-text audit dump: word_a<TAB>word_b<TAB>cosine, ids sorted."""
    with open(path, "w", encoding="utf-8") as fh:
        for (a, b), c in sorted(cache.table.items()):
            fh.write(f"{lexicon.word_of(a)}\t{lexicon.word_of(b)}\t{c!r}\n")
