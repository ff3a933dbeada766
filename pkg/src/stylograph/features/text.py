"""Baseline document representations: TF-IDF, character n-grams, stylometry."""

from __future__ import annotations

import unicodedata
from collections import Counter
from typing import Iterable, Optional, Sequence

import numpy as np
import regex

from ..corpus import Corpus, Document, TokenSeq, tokenize
from ..errors import EmptyDocument, LabelsRequired
from .matrix import FeatureMatrix

_SENTENCE_SPLIT = regex.compile(r"[.?!।॥]")
_WORD = regex.compile(r"[\p{L}\p{M}\p{N}]+")


# ---------------------------------------------------------------------------
# selection statistics


def chi_square_scores(presence: np.ndarray, labels: Sequence[str]) -> np.ndarray:
    """Pearson chi-square of each binary column against the class labels."""
    presence = np.asarray(presence, dtype=bool)
    labels = np.asarray(labels)
    classes = sorted(set(labels.tolist()))
    n = presence.shape[0]
    class_n = np.array([np.sum(labels == c) for c in classes], dtype=np.float64)
    observed1 = np.stack([presence[labels == c].sum(axis=0) for c in classes]).astype(np.float64)
    observed0 = class_n[:, None] - observed1
    p1 = presence.sum(axis=0) / n
    expected1 = class_n[:, None] * p1[None, :]
    expected0 = class_n[:, None] * (1.0 - p1)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.where(expected1 > 0, (observed1 - expected1) ** 2 / expected1, 0.0)
        t0 = np.where(expected0 > 0, (observed0 - expected0) ** 2 / expected0, 0.0)
    return (t1 + t0).sum(axis=0)


def _entropy(counts: np.ndarray) -> np.ndarray:
    """Shannon entropy (bits) along the last axis of a count array."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(total > 0, counts / total, 0.0)
        terms = np.where(p > 0, -p * np.log2(p), 0.0)
    return terms.sum(axis=-1)


def information_gain(present_by_class: np.ndarray, class_sizes: np.ndarray) -> np.ndarray:
    """IG(class; presence) for each row of a (features x classes) count table."""
    present_by_class = np.asarray(present_by_class, dtype=np.float64)
    class_sizes = np.asarray(class_sizes, dtype=np.float64)
    absent_by_class = class_sizes[None, :] - present_by_class
    n = class_sizes.sum()
    p_present = present_by_class.sum(axis=1) / n
    h_class = float(_entropy(class_sizes))
    h_cond = p_present * _entropy(present_by_class) + (1.0 - p_present) * _entropy(absent_by_class)
    return np.maximum(h_class - h_cond, 0.0)


def top_columns(scores: np.ndarray, top: int) -> list[int]:
    """Indices of the ``top`` highest scores; equal scores keep column order."""
    order = np.argsort(-np.asarray(scores), kind="stable")
    return order[: min(top, len(order))].tolist()


# ---------------------------------------------------------------------------
# TF-IDF


def tfidf_matrix(corpus: Corpus) -> FeatureMatrix:
    """tf(w, d) * ln(|D| / (df(w) + 1)) over the whole corpus vocabulary.

    tf is the in-document count over document length. With the +1 in the
    denominator a word present in every document gets a negative weight.
    """
    vocab = corpus.vocabulary
    words = sorted(vocab, key=vocab.__getitem__)
    col = {w: i for i, w in enumerate(words)}
    M = corpus.doc_count
    tf = np.zeros((M, len(words)))
    for r, seq in enumerate(corpus.tokens):
        counts = Counter(seq.tokens)
        total = len(seq.tokens)
        for w, c in counts.items():
            tf[r, col[w]] = c / total
    df = (tf > 0).sum(axis=0)
    idf = np.log(M / (df + 1.0))
    return FeatureMatrix(tf * idf[None, :], corpus.doc_ids, [f"tfidf:{w}" for w in words],
                         feature_set="tfidf")


def tfidf_features(
    corpus: Corpus,
    labels: Optional[Sequence[str]] = None,
    top: Optional[int] = None,
    fit_rows: Optional[Sequence[int]] = None,
) -> FeatureMatrix:
    """TF-IDF matrix, optionally reduced to the ``top`` chi-square columns.

    Chi-square is computed on word presence; ``fit_rows`` restricts the
    rows used for selection (e.g. a training split).
    """
    full = tfidf_matrix(corpus)
    if top is None:
        return full
    if labels is None:
        raise LabelsRequired("chi-square selection needs class labels")
    rows = list(range(corpus.doc_count)) if fit_rows is None else list(fit_rows)
    # tf-idf is also 0 when df + 1 == |D|, so presence comes from raw tokens
    presence = _presence(corpus, rows, full.names)
    scores = chi_square_scores(presence, [labels[r] for r in rows])
    out = full.select_columns(top_columns(scores, top))
    out.feature_set = "tfidf_top"
    return out


def _presence(corpus: Corpus, rows: Sequence[int], names: Sequence[str]) -> np.ndarray:
    col = {n.split(":", 1)[1]: i for i, n in enumerate(names)}
    out = np.zeros((len(rows), len(names)), dtype=bool)
    for i, r in enumerate(rows):
        for w in set(corpus.tokens[r].tokens):
            out[i, col[w]] = True
    return out


# ---------------------------------------------------------------------------
# character n-grams


def char_ngram_counts(tokens: TokenSeq | Sequence[str], max_n: int = 4) -> Counter:
    """Counts of every character n-gram, 1 <= n <= max_n, over space-joined tokens."""
    seq = tokens.tokens if isinstance(tokens, TokenSeq) else tuple(tokens)
    text = " ".join(seq)
    counts: Counter = Counter()
    for n in range(1, max_n + 1):
        counts.update(text[i : i + n] for i in range(len(text) - n + 1))
    return counts


def char_ngram_features(
    corpus: Corpus,
    labels: Optional[Sequence[str]],
    max_n: int = 4,
    top: int = 30_000,
    fit_rows: Optional[Sequence[int]] = None,
) -> FeatureMatrix:
    """Raw n-gram counts for the ``top`` grams by information gain.

    Equal gains are ordered lexicographically by gram.
    """
    if labels is None:
        raise LabelsRequired("information-gain selection needs class labels")
    per_doc = [char_ngram_counts(seq, max_n) for seq in corpus.tokens]
    rows = list(range(corpus.doc_count)) if fit_rows is None else list(fit_rows)
    fit_labels = [labels[r] for r in rows]
    classes = sorted(set(fit_labels))
    cls_idx = {c: i for i, c in enumerate(classes)}

    grams = sorted(set().union(*(per_doc[r].keys() for r in rows)))
    gram_idx = {g: i for i, g in enumerate(grams)}
    present = np.zeros((len(grams), len(classes)))
    for r, lab in zip(rows, fit_labels):
        idx = np.fromiter((gram_idx[g] for g in per_doc[r]), dtype=np.int64)
        present[idx, cls_idx[lab]] += 1
    class_sizes = np.array([fit_labels.count(c) for c in classes], dtype=np.float64)
    gains = information_gain(present, class_sizes)
    # grams are already sorted, so a stable sort keeps lexicographic tie order
    chosen = [grams[i] for i in top_columns(gains, top)]

    values = np.array(
        [[counts.get(g, 0) for g in chosen] for counts in per_doc], dtype=np.float64
    ).reshape(corpus.doc_count, len(chosen))
    return FeatureMatrix(values, corpus.doc_ids, [f"cng:{g}" for g in chosen],
                         feature_set="char_ngram")


# ---------------------------------------------------------------------------
# stylometry

FUNCTION_WORD_SLOTS = 30
MAX_WORD_LENGTH_BIN = 15
_PUNCT_CLASSES = (
    ("period", "."),
    ("comma", ","),
    ("semicolon", ";"),
    ("colon", ":"),
    ("exclamation", "!"),
    ("question", "?"),
    ("hyphen", "-"),
    ("dash", "–—"),
    ("quote", "\"'“”‘’«»"),
    ("danda", "।॥"),
)


def stylometry_names(slots: int = FUNCTION_WORD_SLOTS) -> list[str]:
    names = [
        "avg_word_length", "std_word_length",
        "avg_sentence_length", "std_sentence_length",
        "type_token_ratio", "hapax_ratio", "dis_legomena_ratio", "yules_k",
        "long_word_ratio", "short_word_ratio",
        "char_letter", "char_digit", "char_space", "char_upper", "char_punct",
    ]
    names += [f"punct_{name}" for name, _ in _PUNCT_CLASSES]
    names += [f"word_length_{i}" for i in range(1, MAX_WORD_LENGTH_BIN)]
    names.append(f"word_length_{MAX_WORD_LENGTH_BIN}plus")
    names += [f"function_word_{i + 1}" for i in range(slots)]
    names += ["total_tokens", "total_sentences", "avg_letters_per_sentence"]
    return names


def split_sentences(raw_text: str) -> list[list[str]]:
    """Sentences as token lists; splits on danda, period, question and exclamation marks."""
    out = []
    for segment in _SENTENCE_SPLIT.split(raw_text):
        words = _WORD.findall(segment)
        if words:
            out.append(words)
    return out


def stylometry_features(
    doc: Document,
    tokens: TokenSeq | Sequence[str],
    function_words: Sequence[str] = (),
    slots: int = FUNCTION_WORD_SLOTS,
) -> np.ndarray:
    """Lexical and character-level style markers in the order of :func:`stylometry_names`.

    Function-word slots hold the relative frequency of ``function_words[i]``
    in the full (unfiltered) text, so they stay meaningful when ``tokens``
    has had its stopwords removed.
    """
    seq = tokens.tokens if isinstance(tokens, TokenSeq) else tuple(tokens)
    if not seq:
        raise EmptyDocument(f"{doc.doc_id}: no tokens")
    lengths = np.array([len(t) for t in seq], dtype=np.float64)
    n_tok = len(seq)
    counts = Counter(seq)
    n_types = len(counts)
    spectrum = Counter(counts.values())
    yules_k = 1e4 * (sum(m * m * v for m, v in spectrum.items()) - n_tok) / (n_tok * n_tok)

    sentences = split_sentences(doc.raw_text)
    sent_lengths = np.array([len(s) for s in sentences], dtype=np.float64)

    text = doc.raw_text
    n_chars = max(len(text), 1)
    cats = [unicodedata.category(ch) for ch in text]
    letters = sum(c[0] in "LM" for c in cats)
    digits = sum(c[0] == "N" for c in cats)
    spaces = sum(ch.isspace() for ch in text)
    upper = sum(c == "Lu" for c in cats)
    punct = sum(c[0] == "P" for c in cats)

    out = [
        float(lengths.mean()), float(lengths.std()),
        float(sent_lengths.mean()) if len(sent_lengths) else 0.0,
        float(sent_lengths.std()) if len(sent_lengths) else 0.0,
        n_types / n_tok,
        spectrum.get(1, 0) / n_types,
        spectrum.get(2, 0) / n_types,
        yules_k,
        float(np.mean(lengths > 6)),
        float(np.mean(lengths <= 3)),
        letters / n_chars, digits / n_chars, spaces / n_chars, upper / n_chars, punct / n_chars,
    ]
    char_counts = Counter(text)
    for _, chars in _PUNCT_CLASSES:
        out.append(sum(char_counts.get(ch, 0) for ch in chars) / n_chars)
    length_hist = np.zeros(MAX_WORD_LENGTH_BIN)
    for length in lengths:
        length_hist[min(int(length), MAX_WORD_LENGTH_BIN) - 1] += 1
    out += (length_hist / n_tok).tolist()

    fw = list(function_words)[:slots]
    if fw:
        try:
            full = tokenize(text, lowercase=True).tokens
        except EmptyDocument:
            full = seq
        full_counts = Counter(full)
        out += [full_counts.get(w, 0) / len(full) for w in fw]
    out += [0.0] * (slots - len(fw))
    out += [float(n_tok), float(len(sentences)),
            (letters / len(sentences)) if sentences else 0.0]
    return np.asarray(out, dtype=np.float64)


def choose_function_words(
    corpus: Corpus,
    stopwords: Optional[Iterable[str]] = None,
    slots: int = FUNCTION_WORD_SLOTS,
) -> list[str]:
    """Corpus-level function-word slots.

    The most frequent stopwords when a list is given, otherwise the most
    frequent words of the corpus. Counts use the unfiltered text.
    """
    counts: Counter = Counter()
    for doc in corpus.documents:
        try:
            counts.update(tokenize(doc.raw_text, lowercase=True).tokens)
        except EmptyDocument:
            continue
    if stopwords is not None:
        stop = {s.lower() for s in stopwords}
        items = [(w, c) for w, c in counts.items() if w in stop]
    else:
        items = list(counts.items())
    items.sort(key=lambda wc: (-wc[1], wc[0]))
    return [w for w, _ in items[:slots]]


def stylometry_matrix(
    corpus: Corpus,
    stopwords: Optional[Iterable[str]] = None,
    slots: int = FUNCTION_WORD_SLOTS,
) -> FeatureMatrix:
    fw = choose_function_words(corpus, stopwords, slots)
    rows = [
        stylometry_features(doc, seq, fw, slots)
        for doc, seq in zip(corpus.documents, corpus.tokens)
    ]
    return FeatureMatrix(np.vstack(rows), corpus.doc_ids, stylometry_names(slots),
                         feature_set="stylometry")
