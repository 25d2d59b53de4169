"""Corpus handling: delimiter splitting, reassembly, boundary markers.

Raw text is cut into decodable fragments around delimiter runs, and
segmented fragments are later stitched back together in the original
order.  Boundary markers are reserved tokens wrapped around every
training sentence so that sentence edges take part in the embedding
geometry like ordinary words.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "BOS",
    "EOS",
    "MARKERS",
    "FRAGMENT",
    "DELIMITER",
    "Piece",
    "is_word_char",
    "split_fragments",
    "fragment_texts",
    "reassemble",
    "read_segmented_corpus",
    "escape_token",
    "unescape_token",
    "add_boundary_markers",
]

BOS = "⟨BOS⟩"
EOS = "⟨EOS⟩"
MARKERS = frozenset((BOS, EOS))

FRAGMENT = "FRAGMENT"
DELIMITER = "DELIMITER"

# Tokens colliding with a marker get this prepended; see escape_token.
_ESCAPE = "⟨⟨"


@dataclass(frozen=True)
class Piece:
    """One maximal run of same-class characters from a raw line."""

    kind: str
    text: str


def is_word_char(ch: str) -> bool:
    """True for characters that belong inside fragments.

    Word characters are CJK Unified Ideographs (plus Extension A), ASCII
    letters, and ASCII or fullwidth digits.  Everything else, including
    fullwidth Latin letters, counts as a delimiter.  The ranges live in
    this one predicate so they can be widened in a single place.
    """
    cp = ord(ch)
    if 0x4E00 <= cp <= 0x9FFF or 0x3400 <= cp <= 0x4DBF:
        return True
    if 0x41 <= cp <= 0x5A or 0x61 <= cp <= 0x7A:
        return True
    return 0x30 <= cp <= 0x39 or 0xFF10 <= cp <= 0xFF19


def split_fragments(line: str) -> list[Piece]:
    """Cut a raw line into alternating fragment and delimiter pieces.

    Concatenating the piece texts reproduces the line byte for byte; no
    normalization of any kind is applied.
    """
    return [
        Piece(FRAGMENT if wordlike else DELIMITER, "".join(run))
        for wordlike, run in itertools.groupby(line, key=is_word_char)
    ]


def fragment_texts(pieces: Iterable[Piece]) -> list[str]:
    """The fragment piece texts, in order."""
    return [p.text for p in pieces if p.kind == FRAGMENT]


def reassemble(fragments: list[list[str]], pieces: list[Piece]) -> str:
    """Interleave segmented fragments with the original delimiter pieces.

    Each fragment's word list must tile its piece text exactly.  Tokens
    (words and delimiter runs) are joined by single spaces, so removing
    the inserted separators recovers the raw line.
    """
    n_frag = sum(1 for p in pieces if p.kind == FRAGMENT)
    if len(fragments) != n_frag:
        raise ValueError(
            f"fragment count mismatch: {len(fragments)} segmentations for {n_frag} fragments"
        )
    tokens: list[str] = []
    seg = iter(fragments)
    for piece in pieces:
        if piece.kind == DELIMITER:
            tokens.append(piece.text)
            continue
        words = next(seg)
        if "".join(words) != piece.text:
            raise ValueError(f"segmentation does not tile fragment {piece.text!r}")
        tokens.extend(words)
    return " ".join(tokens)


def read_segmented_corpus(path: str) -> Iterator[list[str]]:
    """Yield one token list per non-blank line of a UTF-8 corpus file.

    Tokens are separated by arbitrary whitespace.  Invalid UTF-8 raises a
    ValueError naming the offending line.
    """
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ValueError(f"{path}: invalid UTF-8 on line {lineno}: {exc}") from None
            tokens = line.split()
            if tokens:
                yield tokens


def escape_token(token: str) -> str:
    """Rename tokens that would collide with a boundary marker.

    Prepends "⟨⟨" to the markers themselves and to tokens already carrying
    that prefix; the map is injective, so unescape_token inverts it for
    every input.
    """
    if token in MARKERS or token.startswith(_ESCAPE):
        return _ESCAPE + token
    return token


def unescape_token(token: str) -> str:
    if token.startswith(_ESCAPE):
        return token[len(_ESCAPE):]
    return token


def add_boundary_markers(tokens: Iterable[str]) -> list[str]:
    """Wrap a sentence with the reserved begin and end marker tokens."""
    return [BOS, *(escape_token(t) for t in tokens), EOS]
