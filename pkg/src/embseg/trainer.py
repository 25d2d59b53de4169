"""Stochastic gradient training of the embedding table.

The objective is a weighted sum of log-sigmoid scores over sampled pairs:
positives push the cosine of their two vectors up, negatives push it down.
Scoring pairs by cosine rather than raw dot product keeps the training
geometry identical to the metric the decoder ranks hypotheses with.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .corpus import add_boundary_markers
from .lexicon import Lexicon, SubsampleTable
from .sampler import POSITIVE, TrainingSample, build_occurrence_batch

__all__ = [
    "TrainerConfig",
    "init_embeddings",
    "pair_score",
    "sample_loss",
    "train_step",
    "train",
    "save_embeddings",
    "load_embeddings",
]

log = logging.getLogger(__name__)

_MIN_NORM = 1e-12
_SWEEP_EVERY = 1000  # occurrence batches between finiteness sweeps


@dataclass
class TrainerConfig:
    """Sampling, objective, and schedule hyperparameters."""

    epsilon: float = 1e-5        # subsampling threshold
    mu: float = 0.5              # multi-character keep threshold
    n_noise: int = 1             # noise negatives per target occurrence
    dim: int = 100               # embedding dimension
    eta: float = 0.2             # class-weight smoothing
    window: int = 4              # context window
    epochs: int = 1
    lr_start: float = 0.025
    lr_end: float = 1e-4
    seed: int = 0
    threads: int = 1
    tied: bool = True            # one vector per word for both pair roles
    weight_mode: str = "occurrence"      # or "pair"
    noise_distribution: str = "uniform"  # or "unigram75"

    def __post_init__(self) -> None:
        if self.epsilon <= 0 or self.mu <= 0:
            raise ValueError("epsilon and mu must be positive")
        if self.eta < 0:
            raise ValueError("eta must be >= 0")
        if self.dim < 1 or self.window < 1 or self.epochs < 1:
            raise ValueError("dim, window, and epochs must be >= 1")
        if self.n_noise < 0:
            raise ValueError("n_noise must be >= 0")
        if self.lr_start <= 0 or self.lr_end <= 0 or self.lr_end > self.lr_start:
            raise ValueError("need 0 < lr_end <= lr_start")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.weight_mode not in ("occurrence", "pair"):
            raise ValueError(f"unknown weight_mode {self.weight_mode!r}")
        if self.noise_distribution not in ("uniform", "unigram75"):
            raise ValueError(f"unknown noise_distribution {self.noise_distribution!r}")


def init_embeddings(vocab_size: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform init in [-0.5/dim, +0.5/dim]; every row is non-zero."""
    if vocab_size < 1 or dim < 1:
        raise ValueError("vocab_size and dim must be >= 1")
    bound = 0.5 / dim
    table = rng.uniform(-bound, bound, size=(vocab_size, dim))
    # an all-zero row has probability zero but would break the cosine
    while True:
        bad = np.linalg.norm(table, axis=1) < _MIN_NORM
        if not bad.any():
            return table
        table[bad] = rng.uniform(-bound, bound, size=(int(bad.sum()), dim))


def pair_score(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity of two vectors; zero vectors are a domain error."""
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu < _MIN_NORM or nv < _MIN_NORM:
        raise ValueError("cosine undefined for a zero vector")
    return float(np.dot(u, v)) / (nu * nv)


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def _log_sigmoid(x: float) -> float:
    # stable for both signs
    if x >= 0:
        return -math.log1p(math.exp(-x))
    return x - math.log1p(math.exp(x))


def sample_loss(
    sample: TrainingSample,
    emb: np.ndarray,
    emb_other: np.ndarray | None = None,
) -> float:
    """Weighted log-sigmoid objective term of one sample.

    Positives score log(sigmoid(cos)), negatives log(sigmoid(-cos)); the
    term is maximized during training.  emb_other supplies the second table
    in the untied variant.
    """
    other_table = emb if emb_other is None else emb_other
    cos = pair_score(emb[sample.target], other_table[sample.other])
    sign = 1.0 if sample.label == POSITIVE else -1.0
    return sample.weight * _log_sigmoid(sign * cos)


def train_step(
    sample: TrainingSample,
    emb: np.ndarray,
    lr: float,
    emb_other: np.ndarray | None = None,
) -> None:
    """One gradient-ascent update on the two rows touched by `sample`.

    d/dcos of weight*log(sigmoid(s*cos)) is weight*s*sigmoid(-s*cos), and
    dcos/du = v/(|u||v|) - cos*u/|u|^2 (symmetrically for v).  Both deltas
    are computed from the pre-step rows, then applied in place.
    """
    other_table = emb if emb_other is None else emb_other
    u = emb[sample.target]
    v = other_table[sample.other]
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu < _MIN_NORM or nv < _MIN_NORM:
        raise ValueError("cosine undefined for a zero vector")
    inv = 1.0 / (nu * nv)
    cos = float(np.dot(u, v)) * inv
    sign = 1.0 if sample.label == POSITIVE else -1.0
    coef = lr * sample.weight * sign * _sigmoid(-sign * cos)
    du = coef * (v * inv - u * (cos / (nu * nu)))
    dv = coef * (u * inv - v * (cos / (nv * nv)))
    emb[sample.target] += du
    other_table[sample.other] += dv


def _noise_cdf(lexicon: Lexicon, distribution: str) -> np.ndarray | None:
    if distribution == "uniform":
        return None
    weights = lexicon.counts.astype(np.float64) ** 0.75
    cdf = np.cumsum(weights / weights.sum())
    cdf[-1] = 1.0
    return cdf


def _repair_rows(emb: np.ndarray, rng: np.random.Generator, where: str) -> None:
    """Re-randomize rows whose norm collapsed; training never divides by ~0."""
    norms = np.linalg.norm(emb, axis=1)
    bad = ~np.isfinite(norms) | (norms < _MIN_NORM)
    if bad.any():
        ids = np.flatnonzero(bad)
        log.warning("re-randomizing %d degenerate embedding rows (%s): %s",
                    len(ids), where, ids[:16].tolist())
        bound = 0.5 / emb.shape[1]
        emb[bad] = rng.uniform(-bound, bound, size=(len(ids), emb.shape[1]))


def train(
    sentences: Sequence[list[str]],
    lexicon: Lexicon,
    config: TrainerConfig,
    *,
    sample_sink: Callable[[TrainingSample], None] | None = None,
) -> np.ndarray:
    """Train the embedding table over the corpus.

    `sentences` are token lists without boundary markers; markers are added
    here and must already be counted in the lexicon.  Tokens missing from
    the lexicon are an error.  The learning rate decays linearly from
    lr_start to lr_end over all token positions of all epochs.  With
    threads == 1 the result is a deterministic function of the corpus,
    lexicon, and config; with more threads rows are updated without locks
    and lost updates are tolerated.  Returns the V x dim table (the
    target-side table in the untied variant).

    sample_sink, when given, receives every generated TrainingSample in
    order (single-threaded only); used for audit dumps.
    """
    if sample_sink is not None and config.threads > 1:
        raise ValueError("sample_sink requires threads == 1")
    rng = np.random.default_rng(config.seed)
    emb = init_embeddings(len(lexicon), config.dim, rng)
    emb_other = None if config.tied else init_embeddings(len(lexicon), config.dim, rng)
    table = SubsampleTable(lexicon, config.epsilon, config.mu)
    cdf = _noise_cdf(lexicon, config.noise_distribution)

    wrapped: list[tuple[list[str], list[int]]] = []
    for sent in sentences:
        words = add_boundary_markers(sent)
        ids = [lexicon.id_of(w) for w in words]
        wrapped.append((words, ids))

    total_positions = sum(len(ids) for _, ids in wrapped) * config.epochs
    if total_positions == 0:
        return emb

    if config.threads == 1:
        _train_span(wrapped, lexicon, config, table, cdf, emb, emb_other, rng,
                    total_positions, start=0, stride=1, sample_sink=sample_sink)
    else:
        seeds = np.random.SeedSequence(config.seed).spawn(config.threads)
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            futs = [
                pool.submit(
                    _train_span, wrapped, lexicon, config, table, cdf, emb, emb_other,
                    np.random.default_rng(seeds[t]), total_positions,
                    start=t, stride=config.threads, sample_sink=None,
                )
                for t in range(config.threads)
            ]
            for f in futs:
                f.result()

    _repair_rows(emb, rng, "final sweep")
    if emb_other is not None:
        _repair_rows(emb_other, rng, "final sweep, context table")
    if not np.isfinite(emb).all():
        raise FloatingPointError("non-finite embedding entries after training")
    return emb


def _train_span(
    wrapped: list[tuple[list[str], list[int]]],
    lexicon: Lexicon,
    config: TrainerConfig,
    table: SubsampleTable,
    cdf: np.ndarray | None,
    emb: np.ndarray,
    emb_other: np.ndarray | None,
    rng: np.random.Generator,
    total_positions: int,
    *,
    start: int,
    stride: int,
    sample_sink: Callable[[TrainingSample], None] | None,
) -> None:
    """Run the update loop over every stride-th sentence (all of them when
    stride == 1).  processed counts this worker's positions only, scaled by
    stride for the learning-rate schedule."""
    p_sub = table.p_sub
    keep = table.keep_override
    lr_span = config.lr_start - config.lr_end
    processed = 0
    batches = 0
    for _ in range(config.epochs):
        for si in range(start, len(wrapped), stride):
            words, ids = wrapped[si]
            draws = rng.random(len(ids))
            for i, wid in enumerate(ids):
                frac = min(1.0, processed * stride / total_positions)
                processed += 1
                if not (keep[wid] or draws[i] < p_sub[wid]):
                    continue
                batch = build_occurrence_batch(
                    words, ids, i, lexicon, rng,
                    window=config.window, n_noise=config.n_noise, eta=config.eta,
                    weight_mode=config.weight_mode, noise_cdf=cdf,
                )
                if batch is None:
                    continue
                lr = config.lr_start - lr_span * frac
                for sample in batch.samples:
                    if sample_sink is not None:
                        sample_sink(sample)
                    train_step(sample, emb, lr, emb_other)
                batches += 1
                if batches % _SWEEP_EVERY == 0:
                    _repair_rows(emb, rng, f"sweep at batch {batches}")
                    if not np.isfinite(emb).all():
                        raise FloatingPointError("non-finite embedding entries")


def save_embeddings(path: str, lexicon: Lexicon, emb: np.ndarray) -> None:
    """Text format: header 'V d', then one 'word v1 .. vd' line per id.

    Floats are written with full round-trip precision.
    """
    V, d = emb.shape
    if V != len(lexicon):
        raise ValueError("embedding table and lexicon disagree on vocabulary size")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{V} {d}\n")
        for wid in range(V):
            vec = " ".join(repr(float(x)) for x in emb[wid])
            fh.write(f"{lexicon.word_of(wid)} {vec}\n")


def load_embeddings(path: str) -> tuple[list[str], np.ndarray]:
    """Inverse of save_embeddings; validates the header against the body."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: malformed header, expected 'V d'")
        V, d = int(header[0]), int(header[1])
        words: list[str] = []
        emb = np.empty((V, d), dtype=np.float64)
        row = 0
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split(" ")
            if len(parts) != d + 1:
                raise ValueError(f"{path}:{lineno}: expected a word and {d} floats")
            if row >= V:
                raise ValueError(f"{path}: more rows than the header announces")
            words.append(parts[0])
            emb[row] = [float(x) for x in parts[1:]]
            row += 1
    if row != V:
        raise ValueError(f"{path}: header announces {V} rows, found {row}")
    return words, emb
