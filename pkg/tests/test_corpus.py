import json
import math

import pytest
from hypothesis import given, strategies as st

from stylograph.corpus import (
    average_knee_point,
    corpus_from_texts,
    knee_point,
    load_corpus,
    load_stopwords,
    term_stats,
    tokenize,
)
from stylograph.errors import (
    CurveTooShort,
    DuplicateDocId,
    EmptyDocument,
    EmptyManifest,
    InvalidEncoding,
    MissingFile,
)


def write_manifest(tmp_path, rows, texts):
    for name, text in texts.items():
        p = tmp_path / name
        if isinstance(text, bytes):
            p.write_bytes(text)
        else:
            p.write_text(text, encoding="utf-8")
    manifest = tmp_path / "manifest.jsonl"
    manifest.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    return manifest


def row(doc_id, path, author="A", genre="g"):
    return {"doc_id": doc_id, "path": path, "author": author, "genre": genre, "language": "en"}


class TestLoadCorpus:
    def test_two_rows(self, tmp_path):
        m = write_manifest(tmp_path, [row("a", "a.txt"), row("b", "b.txt", author="B")],
                           {"a.txt": "one two", "b.txt": "three four"})
        corpus = load_corpus(m)
        assert corpus.doc_count == 2
        assert corpus.doc_ids == ["a", "b"]
        assert corpus.labels("author") == ["A", "B"]
        assert set(corpus.vocabulary) == {"one", "two", "three", "four"}

    def test_duplicate_id(self, tmp_path):
        m = write_manifest(tmp_path, [row("x", "a.txt"), row("x", "b.txt")],
                           {"a.txt": "one", "b.txt": "two"})
        with pytest.raises(DuplicateDocId):
            load_corpus(m)

    def test_missing_file(self, tmp_path):
        m = write_manifest(tmp_path, [row("x", "nope.txt")], {})
        with pytest.raises(MissingFile):
            load_corpus(m)

    def test_empty_manifest(self, tmp_path):
        m = tmp_path / "m.jsonl"
        m.write_text("\n")
        with pytest.raises(EmptyManifest):
            load_corpus(m)

    def test_invalid_encoding(self, tmp_path):
        m = write_manifest(tmp_path, [row("x", "a.txt")], {"a.txt": b"\xff\xfe\xfa bad"})
        with pytest.raises(InvalidEncoding):
            load_corpus(m)

    def test_vocabulary_covers_tokens(self, tmp_path):
        m = write_manifest(tmp_path, [row("a", "a.txt"), row("b", "b.txt")],
                           {"a.txt": "b b a", "b.txt": "c a b"})
        corpus = load_corpus(m)
        # descending corpus frequency, ties by first occurrence
        assert corpus.vocabulary == {"b": 1, "a": 2, "c": 3}

    def test_stopword_file(self, tmp_path):
        sw = tmp_path / "stop.txt"
        sw.write_text("# comment\nthe\n\nA\n", encoding="utf-8")
        assert load_stopwords(sw) == {"the", "A"}


class TestTokenize:
    def test_basic(self):
        seq = tokenize("The cat, the cat.", lowercase=True)
        assert list(seq) == ["the", "cat", "the", "cat"]
        assert not seq.stopwords_removed

    def test_stopwords(self):
        seq = tokenize("The cat, the cat.", {"the"}, lowercase=True)
        assert list(seq) == ["cat", "cat"]
        assert seq.stopwords_removed

    def test_punctuation_only(self):
        with pytest.raises(EmptyDocument):
            tokenize("!!! ???")

    def test_bengali_keeps_vowel_signs(self):
        seq = tokenize("আমি তোমাকে ভালোবাসি। কি খবর?")
        assert list(seq) == ["আমি", "তোমাকে", "ভালোবাসি", "কি", "খবর"]

    def test_no_lowercase(self):
        assert list(tokenize("Hello World", lowercase=False)) == ["Hello", "World"]

    @given(st.text(min_size=1, max_size=60))
    def test_empty_stopword_set_is_no_op(self, text):
        try:
            plain = tokenize(text)
        except EmptyDocument:
            return
        assert tokenize(text, set()) == plain

    @given(st.text(min_size=1, max_size=60))
    def test_tokens_are_clean(self, text):
        try:
            seq = tokenize(text)
        except EmptyDocument:
            return
        for tok in seq:
            assert tok and not any(ch.isspace() for ch in tok)


class TestTermStats:
    def test_counts(self):
        s = term_stats(["a", "a", "b"])
        assert s.freq == {"a": 2, "b": 1}
        assert s.rel_freq == {"a": 2 / 3, "b": 1 / 3}
        assert s.rank == {"a": 1, "b": 2}

    def test_tie_by_first_occurrence(self):
        assert term_stats(["b", "a"]).rank == {"b": 1, "a": 2}

    def test_singleton(self):
        s = term_stats(["x"])
        assert s.rel_freq == {"x": 1.0} and s.rank == {"x": 1}

    @given(st.lists(st.sampled_from("abcdefg"), min_size=1, max_size=200))
    def test_invariants(self, tokens):
        s = term_stats(tokens)
        assert math.isclose(sum(s.rel_freq.values()), 1.0, abs_tol=1e-9)
        assert sum(s.freq.values()) == s.total_tokens == len(tokens)
        assert sorted(s.rank.values()) == list(range(1, len(s.freq) + 1))
        top = s.words_by_rank()[0]
        assert s.freq[top] == max(s.freq.values())
        assert term_stats(tokens) == s


def knee_oracle(curve):
    """Perpendicular distance to the chord via the 2-D cross product, all points."""
    n = len(curve)
    lo, hi = min(curve), max(curve)
    pts = [(i / (n - 1), (c - lo) / (hi - lo) if hi > lo else 0.0) for i, c in enumerate(curve)]
    (x0, y0), (x1, y1) = pts[0], pts[-1]
    norm = math.hypot(x1 - x0, y1 - y0)
    dists = [abs((x1 - x0) * (y0 - y) - (x0 - x) * (y1 - y0)) / norm for x, y in pts]
    interior = dists[1:-1]
    best = max(interior)
    return 2 + interior.index(best)


class TestKneePoint:
    def test_geometric_curve(self):
        curve = [100, 50, 25, 12, 6, 3, 2, 1]
        assert knee_oracle(curve) == 3
        assert knee_point(curve) == 3

    def test_linear_curve(self):
        assert knee_point([9, 8, 7, 6, 5]) == 2

    def test_three_points(self):
        assert knee_point([10, 1, 1]) == 2

    def test_too_short(self):
        with pytest.raises(CurveTooShort):
            knee_point([3, 1])

    @given(st.lists(st.integers(1, 1000), min_size=3, max_size=40),
           st.floats(0.01, 1000, allow_nan=False))
    def test_matches_oracle_and_scale_invariant(self, values, scale):
        curve = sorted(values, reverse=True)
        k = knee_point(curve)
        assert k == knee_point([c * scale for c in curve]) or _near_tie(curve, k)
        assert k == knee_oracle(curve) or _near_tie(curve, k)

    def test_average_knee(self):
        corpus = corpus_from_texts(["a a a a b b c d e", "x y z", "p q"])
        # the 2-word document is too short for a knee and is skipped
        assert average_knee_point(corpus) == (knee_point([4, 2, 1, 1, 1]) + 2) / 2


def _near_tie(curve, k):
    # scaling can reorder distances that agree to the last ulp
    n = len(curve)
    lo, hi = min(curve), max(curve)
    if hi == lo:
        return True
    d = [abs(i / (n - 1) + (c - lo) / (hi - lo) - 1) for i, c in enumerate(curve)][1:-1]
    return abs(d[k - 2] - max(d)) < 1e-12
