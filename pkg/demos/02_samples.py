"""What one target occurrence contributes to training.

A single position in a segmented sentence yields positive pairs from the
context window and negative pairs from three channels: in-dictionary
substrings of the flanking character streams, ordered substring pairs
inside the target word itself, and random noise words.  The class weight
keeps the two sides balanced.
"""
import numpy as np

from embseg import BOS, EOS, Lexicon, add_boundary_markers, build_occurrence_batch

SENTENCES = [
    ["今天", "天气", "很", "好"],
    ["天天", "都", "很", "好"],
    ["好天气", "不", "多"],
]


def main() -> None:
    lex = Lexicon.from_sentences(SENTENCES)
    rng = np.random.default_rng(0)
    words = add_boundary_markers(SENTENCES[0])
    ids = [lex.id_of(w) for w in words]

    for i, word in enumerate(words):
        batch = build_occurrence_batch(words, ids, i, lex, rng)
        if batch is None or word in (BOS, EOS):
            continue
        print(f"target {word!r}: {batch.n_pos} positives, {batch.n_neg} negatives")
        for s in batch.samples:
            pair = f"({lex.word_of(s.target)}, {lex.word_of(s.other)})"
            print(f"  {s.label:8s} {s.source:10s} {pair:24s} weight {s.weight:.3f}")
        print()


if __name__ == "__main__":
    main()
