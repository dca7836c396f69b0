"""Document store: ingestion, article pairing and corpus statistics.

All corpus data lives in flat tab-separated files so that runs are
reproducible and diffable.  A document file carries one article per
line (``id<TAB>title<TAB>text`` with tabs/newlines escaped), a link
table carries one ``source_title<TAB>target_title`` pair per line, and
a paired corpus directory holds the resolved article pairs plus their
segmented sentences.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .text import clean_markup, segment_sentences, tokenize


@dataclass(frozen=True)
class Document:
    """One article in one language, already cleaned and segmented."""

    id: str
    lang: str
    title: str
    sentences: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("document id must be non-empty")
        if not self.sentences:
            raise ValueError(f"document {self.id} has no sentences")
        if any(not s.strip() for s in self.sentences):
            raise ValueError(f"document {self.id} contains an empty sentence")


@dataclass(frozen=True)
class DocumentPair:
    """A topic-aligned article pair across two languages."""

    topic_id: str
    source: Document
    target: Document

    def __post_init__(self) -> None:
        if self.source.lang == self.target.lang:
            raise ValueError(
                f"pair {self.topic_id}: both sides have language {self.source.lang!r}"
            )


@dataclass(frozen=True)
class CorpusStats:
    pair_count: int
    source_unique_tokens: int
    target_unique_tokens: int


@dataclass(frozen=True)
class PairingResult:
    pairs: tuple[DocumentPair, ...]
    skipped: int
    duplicates: int


_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n"}
_UNESCAPE_RE = re.compile(r"\\([\\tn])")
_UNESCAPE_MAP = {"\\": "\\", "t": "\t", "n": "\n"}


def escape_field(text: str) -> str:
    for raw, esc in _ESCAPES.items():
        text = text.replace(raw, esc)
    return text


def unescape_field(text: str) -> str:
    return _UNESCAPE_RE.sub(lambda m: _UNESCAPE_MAP[m.group(1)], text)


def ingest_documents(path: str | os.PathLike, lang: str) -> list[Document]:
    """Read a document file, clean and segment every record.

    Raises ValueError naming the offending line or id on malformed
    input, duplicate ids, or records that clean down to no sentences.
    """
    documents: list[Document] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ValueError(
                    f"{path}: line {lineno}: expected 3 tab-separated fields, got {len(fields)}"
                )
            doc_id, title, raw = fields
            if not doc_id:
                raise ValueError(f"{path}: line {lineno}: empty document id")
            if doc_id in seen:
                raise ValueError(f"{path}: duplicate document id {doc_id!r}")
            seen.add(doc_id)
            text = clean_markup(unescape_field(raw))
            sentences = segment_sentences(text)
            if not sentences:
                raise ValueError(f"document {doc_id} has no sentences")
            documents.append(
                Document(id=doc_id, lang=lang, title=title.strip(), sentences=tuple(sentences))
            )
    return documents


def pair_articles(
    source_docs: Sequence[Document],
    target_docs: Sequence[Document],
    links: Iterable[tuple[str, str]],
) -> PairingResult:
    """Resolve title links into document pairs.

    Titles match exactly after whitespace trimming.  Links that do not
    resolve on both sides are skipped; links that would reuse an already
    paired document count as duplicates.  The first link naming a
    document wins.
    """
    by_source_title = {}
    for doc in source_docs:
        by_source_title.setdefault(doc.title, doc)
    by_target_title = {}
    for doc in target_docs:
        by_target_title.setdefault(doc.title, doc)

    pairs: list[DocumentPair] = []
    used_source: set[str] = set()
    used_target: set[str] = set()
    skipped = 0
    duplicates = 0
    for source_title, target_title in links:
        source = by_source_title.get(source_title.strip())
        target = by_target_title.get(target_title.strip())
        if source is None or target is None:
            skipped += 1
            continue
        if source.id in used_source or target.id in used_target:
            duplicates += 1
            continue
        used_source.add(source.id)
        used_target.add(target.id)
        pairs.append(DocumentPair(topic_id=source.title, source=source, target=target))
    return PairingResult(pairs=tuple(pairs), skipped=skipped, duplicates=duplicates)


def corpus_stats(bitext: Sequence[tuple[object, str, str]]) -> CorpusStats:
    """Count sentence pairs and unique tokens per side of mined bitext."""
    source_tokens: set[str] = set()
    target_tokens: set[str] = set()
    for _, source_sentence, target_sentence in bitext:
        source_tokens.update(tokenize(source_sentence))
        target_tokens.update(tokenize(target_sentence))
    return CorpusStats(
        pair_count=len(bitext),
        source_unique_tokens=len(source_tokens),
        target_unique_tokens=len(target_tokens),
    )


def read_links(path: str | os.PathLike) -> list[tuple[str, str]]:
    links = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ValueError(
                    f"{path}: line {lineno}: expected 2 tab-separated fields, got {len(fields)}"
                )
            links.append((fields[0], fields[1]))
    return links


def read_parallel(path: str | os.PathLike) -> list[tuple[str, str]]:
    """Read a training corpus of ``source<TAB>target`` sentence pairs."""
    pairs = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ValueError(
                    f"{path}: line {lineno}: expected 2 tab-separated fields, got {len(fields)}"
                )
            pairs.append((fields[0], fields[1]))
    return pairs


def write_bitext(path: str | os.PathLike, rows: Iterable[tuple[float, str, str]]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for score, source_sentence, target_sentence in rows:
            handle.write(f"{float(score):.4f}\t{source_sentence}\t{target_sentence}\n")


def read_bitext(path: str | os.PathLike) -> list[tuple[float, str, str]]:
    rows = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ValueError(
                    f"{path}: line {lineno}: expected 3 tab-separated fields, got {len(fields)}"
                )
            rows.append((float(fields[0]), fields[1], fields[2]))
    return rows


_PAIRS_FILE = "pairs.tsv"
_SENTENCES_FILE = "sentences.tsv"


def save_corpus(pairs: Sequence[DocumentPair], out_dir: str | os.PathLike) -> None:
    """Write a paired corpus directory (pairs.tsv + sentences.tsv)."""
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, _PAIRS_FILE), "w", encoding="utf-8") as handle:
        for pair in pairs:
            handle.write(
                "\t".join(
                    [
                        escape_field(pair.topic_id),
                        pair.source.id,
                        pair.source.lang,
                        escape_field(pair.source.title),
                        pair.target.id,
                        pair.target.lang,
                        escape_field(pair.target.title),
                    ]
                )
                + "\n"
            )
    with open(os.path.join(out_dir, _SENTENCES_FILE), "w", encoding="utf-8") as handle:
        for pair in pairs:
            for side, doc in (("src", pair.source), ("tgt", pair.target)):
                for index, sentence in enumerate(doc.sentences):
                    handle.write(
                        f"{escape_field(pair.topic_id)}\t{side}\t{index}\t{sentence}\n"
                    )


def load_corpus(corpus_dir: str | os.PathLike) -> list[DocumentPair]:
    pairs_path = os.path.join(corpus_dir, _PAIRS_FILE)
    sentences_path = os.path.join(corpus_dir, _SENTENCES_FILE)
    sentences: dict[tuple[str, str], list[tuple[int, str]]] = {}
    with open(sentences_path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise ValueError(f"{sentences_path}: line {lineno}: malformed sentence row")
            topic_id, side, index, sentence = fields
            sentences.setdefault((unescape_field(topic_id), side), []).append(
                (int(index), sentence)
            )

    def doc_sentences(topic_id: str, side: str) -> tuple[str, ...]:
        rows = sorted(sentences.get((topic_id, side), []))
        return tuple(sentence for _, sentence in rows)

    pairs: list[DocumentPair] = []
    with open(pairs_path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 7:
                raise ValueError(f"{pairs_path}: line {lineno}: malformed pair row")
            topic_id = unescape_field(fields[0])
            source = Document(
                id=fields[1],
                lang=fields[2],
                title=unescape_field(fields[3]),
                sentences=doc_sentences(topic_id, "src"),
            )
            target = Document(
                id=fields[4],
                lang=fields[5],
                title=unescape_field(fields[6]),
                sentences=doc_sentences(topic_id, "tgt"),
            )
            pairs.append(DocumentPair(topic_id=topic_id, source=source, target=target))
    return pairs
