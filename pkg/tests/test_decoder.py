"""Beam decoder: scoring, ranking, growth, and fallbacks."""
import numpy as np
import pytest

from embseg.corpus import BOS, EOS
from embseg.decoder import (
    BeamParams,
    Hypothesis,
    _carve_baseline,
    beam_search,
    extend,
    hyp_logp_update,
    recompute_mean_logp,
    segment_sentence,
    word_logp,
)
from embseg.lexicon import Lexicon
from embseg.simcache import SimilarityCache
from embseg.trainer import init_embeddings


def _make_lexicon(words):
    return Lexicon((BOS, EOS, *words), (1,) * (len(words) + 2))


def _table_cache(lex, default=0.0, overrides=None):
    emb = init_embeddings(len(lex), 6, np.random.default_rng(0))
    table = {}
    for a in range(len(lex)):
        for b in range(a + 1, len(lex)):
            table[(a, b)] = default
    for (wa, wb), val in (overrides or {}).items():
        ia, ib = lex.id_of(wa), lex.id_of(wb)
        table[tuple(sorted((ia, ib)))] = val
    return SimilarityCache(emb, table)


def test_word_logp_window_and_empty():
    lex = _make_lexicon(["a", "b", "c", "d", "e", "w"])
    cache = _table_cache(lex, overrides={
        ("w", "a"): 9.9, ("w", "b"): 0.1, ("w", "c"): 0.2,
        ("w", "d"): 0.3, ("w", "e"): 0.4,
    })
    ids = [lex.id_of(x) for x in ("a", "b", "c", "d", "e")]
    w = lex.id_of("w")
    assert word_logp(w, ids, cache, 4) == pytest.approx((0.1 + 0.2 + 0.3 + 0.4) / 4)
    assert word_logp(w, [], cache, 4) == 0.0
    assert word_logp(w, ids, cache, 10) == pytest.approx((9.9 + 0.1 + 0.2 + 0.3 + 0.4) / 5)


def test_hyp_logp_update_running_mean():
    assert hyp_logp_update(0.0, 1, [0.5]) == pytest.approx(0.5)
    assert hyp_logp_update(0.5, 2, [0.1, 0.3]) == pytest.approx(0.3)
    assert hyp_logp_update(0.0, 1, []) == 0.0


def test_extend_candidates():
    lex = _make_lexicon(["a", "ab"])
    cache = _table_cache(lex)
    bos = lex.id_of(BOS)
    start = Hypothesis((bos,), "", 1, 0.0, (bos,), ())

    outs = extend(start, "a", lex, 5, cache, 4)
    assert [h.buf for h in outs] == ["a"]  # empty buffer cannot flush

    h = outs[0]
    outs2 = extend(h, "b", lex, 5, cache, 4)
    assert {o.buf for o in outs2} == {"ab", "b"}
    flushed = next(o for o in outs2 if o.buf == "b")
    assert flushed.seg == (bos, lex.id_of("a"))
    assert flushed.word_count == 2
    assert flushed.lens == (1,)

    outs3 = extend(h, "b", lex, 1, cache, 4)  # buffer would exceed the bound
    assert [o.buf for o in outs3] == ["b"]

    hx = h._replace(buf="x")
    outs4 = extend(hx, "y", lex, 5, cache, 4)  # buffer not a word: no flush
    assert [o.buf for o in outs4] == ["xy"]


def _all_segmentations(frag):
    n = len(frag)
    for mask in range(1 << max(0, n - 1)):
        words = []
        start = 0
        for i in range(n - 1):
            if (mask >> i) & 1:
                words.append(frag[start:i + 1])
                start = i + 1
        words.append(frag[start:])
        yield words


def _oracle_best(frag, lex, cache, window):
    best_key, best = None, None
    for words in _all_segmentations(frag):
        if any(w not in lex for w in words):
            continue
        ids = [lex.id_of(BOS)] + [lex.id_of(w) for w in words] + [lex.id_of(EOS)]
        total = 0.0
        for i in range(1, len(ids)):
            preds = ids[max(0, i - window):i]
            total += sum(cache.similarity(ids[i], p) for p in preds) / len(preds)
        mean = total / (len(ids) - 1)
        key = (-round(mean * 1e9), len(words), tuple(-len(w) for w in words), tuple(ids))
        if best_key is None or key < best_key:
            best_key, best = key, (words, mean)
    return best


def test_beam_matches_exhaustive_small():
    rng = np.random.default_rng(5)
    chars = "abcde"
    for _ in range(40):
        n = int(rng.integers(2, 8))
        frag = "".join(chars[int(rng.integers(len(chars)))] for _ in range(n))
        subs = sorted({frag[a:b] for a in range(n) for b in range(a + 1, n + 1)})
        lex = _make_lexicon(subs)
        cache = SimilarityCache(init_embeddings(len(lex), 10, rng))
        got = beam_search(frag, lex, cache, beam_size=1 << (n - 1), max_word_len=n)
        want = _oracle_best(frag, lex, cache, 4)
        assert got is not None
        assert got[0] == want[0]
        assert abs(got[1] - want[1]) <= 1e-9


def test_beam_none_when_no_covering_segmentation():
    lex = _make_lexicon(["a"])
    cache = _table_cache(lex)
    assert beam_search("ax", lex, cache, beam_size=8, max_word_len=2) is None
    result, finals = beam_search(
        "ax", lex, cache, beam_size=8, max_word_len=2, return_finals=True
    )
    assert result is None
    assert finals == []


def test_tie_breaking_prefers_fewer_then_longer_first():
    words = ["a", "b", "c", "d", "ab", "bc", "cd", "abc", "bcd", "abcd"]
    lex = _make_lexicon(words)
    cache = SimilarityCache(np.ones((len(lex), 4)))  # every cosine is exactly 1
    got, _ = beam_search("abcd", lex, cache, beam_size=16, max_word_len=4)
    assert got == ["abcd"]

    lex2 = _make_lexicon([w for w in words if w != "abcd"])
    cache2 = SimilarityCache(np.ones((len(lex2), 4)))
    got2, _ = beam_search("abcd", lex2, cache2, beam_size=16, max_word_len=4)
    assert got2 == ["abc", "d"]


def test_empty_fragment_raises():
    lex = _make_lexicon(["a"])
    with pytest.raises(ValueError, match="empty fragment"):
        beam_search("", lex, _table_cache(lex))


def test_incremental_equals_recompute_on_finals():
    frag = "abcab"
    subs = sorted({frag[a:b] for a in range(len(frag)) for b in range(a + 1, len(frag) + 1)})
    lex = _make_lexicon(subs)
    cache = SimilarityCache(init_embeddings(len(lex), 8, np.random.default_rng(9)))
    result, finals = beam_search(
        frag, lex, cache, beam_size=16, max_word_len=5, return_finals=True
    )
    assert result is not None
    assert finals
    for h in finals:
        assert abs(h.mean_logp() - recompute_mean_logp(h.seg, cache, 4)) <= 1e-9


def test_dynamic_growth_six_char_word():
    lex = Lexicon((BOS, EOS, "abcdef"), (1, 1, 1))
    cache = SimilarityCache(init_embeddings(3, 6, np.random.default_rng(2)))
    assert beam_search("abcdef", lex, cache, beam_size=10, max_word_len=5) is None
    got, _ = beam_search("abcdef", lex, cache, beam_size=20, max_word_len=6)
    assert got == ["abcdef"]

    counters = {}
    out = segment_sentence("abcdef", lex, cache, BeamParams(), counters=counters)
    assert out == "abcdef"
    assert counters == {"fragments": 1, "fallbacks": 0}


def test_fallback_uses_baseline_tokens_verbatim():
    lex = Lexicon((BOS, EOS, "unrelated"), (1, 1, 1))
    cache = SimilarityCache(init_embeddings(3, 6, np.random.default_rng(3)))
    params = BeamParams(retry_cap=1)
    counters = {}
    out = segment_sentence(
        "xyz", lex, cache, params, baseline_tokens=["xy", "z"], counters=counters
    )
    assert out == "xy z"
    assert counters["fallbacks"] == 1

    assert segment_sentence("xyz", lex, cache, params) == "x y z"


def test_growth_terminates_without_retry_cap():
    lex = Lexicon((BOS, EOS, "q"), (1, 1, 1))
    cache = SimilarityCache(init_embeddings(3, 4, np.random.default_rng(1)))
    assert segment_sentence("zz", lex, cache, BeamParams()) == "z z"


def test_carve_baseline_drops_delimiters_and_splits():
    assert _carve_baseline(["a", "b。c", "d"], ["ab", "cd"]) == [["a", "b"], ["c", "d"]]
    with pytest.raises(ValueError, match="cover"):
        _carve_baseline(["ab"], ["abc"])


def test_fallback_carve_with_delimiters():
    lex = Lexicon((BOS, EOS, "q"), (1, 1, 1))
    cache = SimilarityCache(init_embeddings(3, 4, np.random.default_rng(1)))
    out = segment_sentence(
        "xy。zw", lex, cache, BeamParams(retry_cap=0), baseline_tokens=["x", "y。z", "w"]
    )
    assert out == "x y 。 z w"


def test_segment_preserves_delimiters():
    lex = _make_lexicon(["a", "b", "ab"])
    cache = SimilarityCache(np.ones((len(lex), 4)))
    counters = {}
    out = segment_sentence("ab，ab", lex, cache, counters=counters)
    assert out == "ab ， ab"
    assert counters == {"fragments": 2, "fallbacks": 0}


@pytest.mark.parametrize(
    "kwargs",
    [
        {"beam_size": 0},
        {"max_word_len": 0},
        {"beam_step": 0},
        {"len_step": 0},
        {"retry_cap": -1},
    ],
)
def test_beam_params_validation(kwargs):
    with pytest.raises(ValueError):
        BeamParams(**kwargs)
