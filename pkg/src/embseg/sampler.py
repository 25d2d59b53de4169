"""Training-sample generation: window positives and three negative channels.

For one sampled target occurrence the batch holds
  - a positive pair per context word inside the window,
  - negatives for every in-dictionary substring of the flanking character
    sequences that is not itself a context word,
  - negatives for every ordered disjoint substring pair inside a
    multi-character target, and
  - uniformly drawn noise negatives.
Negatives share one class weight computed from the batch's class counts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import MARKERS
from .lexicon import Lexicon

__all__ = [
    "POSITIVE",
    "NEGATIVE",
    "CTX_POS",
    "CTX_NEG",
    "INWORD_NEG",
    "NOISE_NEG",
    "TrainingSample",
    "OccurrenceBatch",
    "positives",
    "context_negatives",
    "inword_negatives",
    "noise_negatives",
    "class_weights",
    "build_occurrence_batch",
]

POSITIVE = "positive"
NEGATIVE = "negative"

CTX_POS = "ctx_pos"
CTX_NEG = "ctx_neg"
INWORD_NEG = "inword_neg"
NOISE_NEG = "noise_neg"


@dataclass(frozen=True)
class TrainingSample:
    target: int
    other: int
    label: str
    source: str
    weight: float


@dataclass(frozen=True)
class OccurrenceBatch:
    samples: tuple[TrainingSample, ...]
    n_pos: int
    n_neg: int


def positives(sentence: list[int], i: int, window: int) -> list[tuple[int, int]]:
    """(target, context) id pairs for every window position, clipped at edges."""
    lo = max(0, i - window)
    hi = min(len(sentence), i + window + 1)
    return [(sentence[i], sentence[j]) for j in range(lo, hi) if j != i]


def context_negatives(words: list[str], i: int, window: int, lexicon: Lexicon) -> list[tuple[int, int]]:
    """Negative pairs from mis-readings of the flanking character streams.

    The characters of the left and right context words are concatenated
    (markers excluded; they are not character sequences of real text), and
    every distinct in-dictionary substring that is not one of the context
    words becomes a negative for the target.
    """
    lo = max(0, i - window)
    hi = min(len(words), i + window + 1)
    context = {words[j] for j in range(lo, hi) if j != i}
    left = "".join(w for w in words[lo:i] if w not in MARKERS)
    right = "".join(w for w in words[i + 1:hi] if w not in MARKERS)
    target_id = lexicon.id_of(words[i])
    out: list[tuple[int, int]] = []
    emitted: set[str] = set()
    for seq in (left, right):
        for a in range(len(seq)):
            for b in range(a + 1, len(seq) + 1):
                sub = seq[a:b]
                if sub in emitted or sub in context or sub not in lexicon:
                    continue
                emitted.add(sub)
                out.append((target_id, lexicon.id_of(sub)))
    return out


def inword_negatives(word: str, lexicon: Lexicon) -> list[tuple[int, int]]:
    """Ordered disjoint substring pairs of a multi-character word.

    Both sides must be in the dictionary; the left substring ends strictly
    before the right one starts.  Single-character words and marker tokens
    yield nothing.
    """
    if len(word) < 2 or word in MARKERS:
        return []
    k = len(word)
    out: list[tuple[int, int]] = []
    for a in range(k):
        for b in range(a + 1, k + 1):
            left = word[a:b]
            if left not in lexicon:
                continue
            left_id = lexicon.id_of(left)
            for c in range(b, k):
                for d in range(c + 1, k + 1):
                    right = word[c:d]
                    if right in lexicon:
                        out.append((left_id, lexicon.id_of(right)))
    return out


def noise_negatives(
    target: int,
    n: int,
    rng: np.random.Generator,
    vocab_size: int,
    cdf: np.ndarray | None = None,
) -> list[tuple[int, int]]:
    """n noise pairs drawn over the vocabulary, redrawing on the target itself.

    Uniform by default; passing a cumulative distribution switches to that
    law (used for the frequency-weighted option).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > 0 and vocab_size < 2:
        raise ValueError("noise sampling needs at least two words")
    out: list[tuple[int, int]] = []
    for _ in range(n):
        while True:
            if cdf is None:
                other = int(rng.integers(vocab_size))
            else:
                other = int(np.searchsorted(cdf, rng.random(), side="right"))
            if other != target:
                break
        out.append((target, other))
    return out


def class_weights(n_pos: int, n_neg: int, eta: float) -> tuple[float, float]:
    """Positive weight 1.0; negative weight (n_pos/n_neg + eta)/(1 + eta).

    The negative weight is meaningful only when n_neg > 0; 1.0 is returned
    as a placeholder otherwise.  A batch without positives is invalid.
    """
    if n_pos < 1:
        raise ValueError("a batch needs at least one positive sample")
    if eta < 0:
        raise ValueError("eta must be >= 0")
    if n_neg <= 0:
        return 1.0, 1.0
    return 1.0, (n_pos / n_neg + eta) / (1.0 + eta)


def build_occurrence_batch(
    words: list[str],
    ids: list[int],
    i: int,
    lexicon: Lexicon,
    rng: np.random.Generator,
    *,
    window: int = 4,
    n_noise: int = 1,
    eta: float = 0.2,
    weight_mode: str = "occurrence",
    noise_cdf: np.ndarray | None = None,
) -> OccurrenceBatch | None:
    """All weighted samples for one sampled target occurrence.

    Negatives are deduplicated by (target, other) within the batch, first
    generation wins (context, then in-word, then noise).  Returns None when
    the occurrence yields no positive pair.  weight_mode "occurrence"
    computes the negative weight from this batch's counts; "pair" treats
    each positive as its own unit (n_pos fixed at 1).
    """
    if weight_mode not in ("occurrence", "pair"):
        raise ValueError(f"unknown weight_mode {weight_mode!r}")
    pos = positives(ids, i, window)
    if not pos:
        return None
    raw = [(t, o, CTX_NEG) for t, o in context_negatives(words, i, window, lexicon)]
    raw += [(t, o, INWORD_NEG) for t, o in inword_negatives(words[i], lexicon)]
    raw += [(t, o, NOISE_NEG) for t, o in noise_negatives(ids[i], n_noise, rng, len(lexicon), noise_cdf)]
    seen: set[tuple[int, int]] = set()
    negs: list[tuple[int, int, str]] = []
    for t, o, src in raw:
        if (t, o) in seen:
            continue
        seen.add((t, o))
        negs.append((t, o, src))
    n_pos, n_neg = len(pos), len(negs)
    _, w_neg = class_weights(n_pos if weight_mode == "occurrence" else 1, n_neg, eta)
    samples = tuple(
        [TrainingSample(t, o, POSITIVE, CTX_POS, 1.0) for t, o in pos]
        + [TrainingSample(t, o, NEGATIVE, src, w_neg) for t, o, src in negs]
    )
    return OccurrenceBatch(samples, n_pos, n_neg)
