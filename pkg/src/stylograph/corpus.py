"""Document ingestion, tokenization and per-document term statistics."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import regex

from .errors import (
    CurveTooShort,
    DuplicateDocId,
    EmptyDocument,
    EmptyManifest,
    InvalidEncoding,
    MissingFile,
)

# Combining marks belong to the word: Bengali vowel signs are category M.
_TOKEN_RE = regex.compile(r"[\p{L}\p{M}\p{N}]+")

MANIFEST_FIELDS = ("doc_id", "path", "author", "genre", "language")


@dataclass(frozen=True)
class Document:
    doc_id: str
    raw_text: str
    author: str = ""
    genre: str = ""
    language_tag: str = ""

    def label(self, field_name: str) -> str:
        if field_name not in ("author", "genre"):
            raise ValueError(f"unknown label field {field_name!r}")
        return getattr(self, field_name)


@dataclass(frozen=True)
class TokenSeq:
    tokens: tuple[str, ...]
    stopwords_removed: bool = False

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


@dataclass(frozen=True)
class TermStats:
    freq: dict[str, int]
    total_tokens: int
    rel_freq: dict[str, float]
    rank: dict[str, int]

    def words_by_rank(self) -> list[str]:
        return sorted(self.rank, key=self.rank.__getitem__)

    def counts_by_rank(self) -> list[int]:
        return [self.freq[w] for w in self.words_by_rank()]


@dataclass
class Corpus:
    documents: list[Document]
    tokens: list[TokenSeq]
    vocabulary: dict[str, int] = field(default_factory=dict)

    @property
    def doc_count(self) -> int:
        return len(self.documents)

    @property
    def doc_ids(self) -> list[str]:
        return [d.doc_id for d in self.documents]

    def labels(self, field_name: str) -> list[str]:
        return [d.label(field_name) for d in self.documents]


def tokenize(
    raw_text: str,
    stopword_list: Optional[Iterable[str]] = None,
    lowercase: bool = True,
) -> TokenSeq:
    """Split text into maximal runs of letters, combining marks and digits.

    Stopwords are compared after case folding, so a lowercase stopword file
    applies to capitalised occurrences as well.
    """
    tokens = _TOKEN_RE.findall(raw_text)
    if lowercase:
        tokens = [t.lower() for t in tokens]
    removed = stopword_list is not None
    if removed:
        stop = set(stopword_list)
        if lowercase:
            stop = {s.lower() for s in stop}
        if stop:
            tokens = [t for t in tokens if t not in stop]
        else:
            removed = False
    if not tokens:
        raise EmptyDocument("no tokens survive tokenization")
    return TokenSeq(tuple(tokens), stopwords_removed=removed)


def term_stats(tokens: TokenSeq | Sequence[str]) -> TermStats:
    """Counts, relative frequencies and 1-based frequency ranks.

    Ties in count are broken by first occurrence, so the result does not
    depend on hash ordering.
    """
    seq = tokens.tokens if isinstance(tokens, TokenSeq) else tuple(tokens)
    if not seq:
        raise EmptyDocument("cannot compute statistics of an empty token list")
    freq = Counter(seq)
    first_seen: dict[str, int] = {}
    for i, tok in enumerate(seq):
        first_seen.setdefault(tok, i)
    total = len(seq)
    ordered = sorted(freq, key=lambda w: (-freq[w], first_seen[w]))
    rank = {w: i + 1 for i, w in enumerate(ordered)}
    rel_freq = {w: freq[w] / total for w in ordered}
    return TermStats(
        freq={w: freq[w] for w in ordered},
        total_tokens=total,
        rel_freq=rel_freq,
        rank=rank,
    )


def knee_point(freq_curve: Sequence[float]) -> int:
    """1-based index of the knee of a non-increasing frequency curve.

    Both axes are rescaled to [0, 1]; the knee is the interior point farthest
    from the chord joining the first and last points. Ties go to the
    smallest index.
    """
    n = len(freq_curve)
    if n < 3:
        raise CurveTooShort(f"knee detection needs at least 3 points, got {n}")
    hi, lo = float(freq_curve[0]), float(freq_curve[-1])
    span = hi - lo
    best_idx, best_dist = 2, -1.0
    for i in range(1, n - 1):
        x = i / (n - 1)
        y = (float(freq_curve[i]) - lo) / span if span > 0 else 0.0
        # chord runs from (0, 1) to (1, 0) after rescaling
        dist = abs(x + y - 1.0) if span > 0 else 0.0
        if dist > best_dist:
            best_idx, best_dist = i + 1, dist
    return best_idx


def average_knee_point(corpus: Corpus) -> float:
    """Mean knee rank over the documents whose curve has at least 3 points."""
    knees = []
    for seq in corpus.tokens:
        counts = term_stats(seq).counts_by_rank()
        if len(counts) >= 3:
            knees.append(knee_point(counts))
    return sum(knees) / len(knees) if knees else 0.0


def load_stopwords(path: str | Path) -> set[str]:
    path = Path(path)
    if not path.exists():
        raise MissingFile(str(path))
    words = set()
    for line in _read_text(path).splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return words


def build_vocabulary(token_seqs: Sequence[TokenSeq]) -> dict[str, int]:
    """Corpus vocabulary indexed 1..V by descending corpus frequency.

    Ties fall back to first occurrence in corpus order.
    """
    counts: Counter[str] = Counter()
    first_seen: dict[str, int] = {}
    pos = 0
    for seq in token_seqs:
        for tok in seq.tokens:
            counts[tok] += 1
            first_seen.setdefault(tok, pos)
            pos += 1
    ordered = sorted(counts, key=lambda w: (-counts[w], first_seen[w]))
    return {w: i + 1 for i, w in enumerate(ordered)}


def _read_text(path: Path) -> str:
    try:
        return path.read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InvalidEncoding(f"{path}: {exc}") from exc


def read_manifest(manifest_path: str | Path) -> list[dict]:
    manifest_path = Path(manifest_path)
    if not manifest_path.exists():
        raise MissingFile(str(manifest_path))
    rows = []
    for lineno, line in enumerate(_read_text(manifest_path).splitlines(), 1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{manifest_path}:{lineno}: invalid JSON ({exc})") from exc
        for key in ("doc_id", "path"):
            if key not in row:
                raise ValueError(f"{manifest_path}:{lineno}: missing field {key!r}")
        rows.append(row)
    if not rows:
        raise EmptyManifest(str(manifest_path))
    return rows


def load_corpus(
    manifest_path: str | Path,
    stopwords: Optional[Iterable[str]] = None,
    lowercase: bool = True,
) -> Corpus:
    """Read a JSON Lines manifest and tokenize every referenced document.

    Relative paths in the manifest resolve against the manifest's directory.
    """
    manifest_path = Path(manifest_path)
    rows = read_manifest(manifest_path)
    base = manifest_path.parent
    stop = set(stopwords) if stopwords is not None else None

    documents, seqs, seen = [], [], set()
    for row in rows:
        doc_id = str(row["doc_id"])
        if doc_id in seen:
            raise DuplicateDocId(doc_id)
        seen.add(doc_id)
        path = Path(row["path"])
        if not path.is_absolute():
            path = base / path
        if not path.exists():
            raise MissingFile(f"{doc_id}: {path}")
        text = _read_text(path)
        if not text.strip():
            raise EmptyDocument(f"{doc_id}: document is blank")
        doc = Document(
            doc_id=doc_id,
            raw_text=text,
            author=str(row.get("author", "")),
            genre=str(row.get("genre", "")),
            language_tag=str(row.get("language", "")),
        )
        try:
            seqs.append(tokenize(text, stop, lowercase=lowercase))
        except EmptyDocument as exc:
            raise EmptyDocument(f"{doc_id}: {exc}") from exc
        documents.append(doc)
    return Corpus(documents=documents, tokens=seqs, vocabulary=build_vocabulary(seqs))


def corpus_from_texts(
    texts: Sequence[str],
    authors: Optional[Sequence[str]] = None,
    genres: Optional[Sequence[str]] = None,
    stopwords: Optional[Iterable[str]] = None,
    lowercase: bool = True,
    doc_ids: Optional[Sequence[str]] = None,
) -> Corpus:
    """In-memory counterpart of :func:`load_corpus`."""
    n = len(texts)
    doc_ids = list(doc_ids) if doc_ids is not None else [f"d{i + 1}" for i in range(n)]
    if len(set(doc_ids)) != n:
        raise DuplicateDocId("doc_ids are not unique")
    authors = list(authors) if authors is not None else [""] * n
    genres = list(genres) if genres is not None else [""] * n
    stop = set(stopwords) if stopwords is not None else None
    docs = [
        Document(doc_id=i, raw_text=t, author=a, genre=g)
        for i, t, a, g in zip(doc_ids, texts, authors, genres)
    ]
    seqs = [tokenize(t, stop, lowercase=lowercase) for t in texts]
    if not docs:
        raise EmptyManifest("no documents")
    return Corpus(documents=docs, tokens=seqs, vocabulary=build_vocabulary(seqs))
