"""Text normalization shared by every stage of the mining pipeline.

Three operations live here: markup cleanup for raw article text, a
rule-based sentence segmenter, and the single tokenizer that the corpus
statistics, the translation lexicon and the classifier features all use.
Keeping one tokenizer avoids skew between modules that must agree on
what a "token" is.
"""

from __future__ import annotations

import re
import string

# Containers whose whole content is dropped as noise (tables, reference
# blocks, figures and image galleries carry no running text).
_NOISE_TAGS = ("table", "ref", "references", "figure", "gallery")

_ENTITY_MAP = {"amp": "&", "lt": "<", "gt": ">", "quot": '"', "apos": "'"}
_ENTITY_RE = re.compile(r"&(amp|lt|gt|quot|apos);")
_NOISE_RE = re.compile(
    r"<(" + "|".join(_NOISE_TAGS) + r")\b[^>]*>.*?</\1\s*>",
    re.IGNORECASE | re.DOTALL,
)
_TAG_RE = re.compile(r"</?[a-zA-Z][^>]*>")
# A tag that never closes is stripped up to the end of its line.
_UNCLOSED_TAG_RE = re.compile(r"<[/a-zA-Z][^>\n]*")
_WS_RE = re.compile(r"\s+")

# Titles and similar short forms whose trailing period is not a sentence
# boundary.  Single capital letters (initials) are guarded separately.
_ABBREVIATIONS = frozenset(
    ["mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "etc", "eg", "ie", "vol", "no", "fig"]
)

_BOUNDARY_RE = re.compile(r"[.!?]\s+(?=[A-Z0-9])")
_TRAILING_WORD_RE = re.compile(r"([A-Za-z0-9]+)$")

_PUNCT = string.punctuation


def clean_markup(raw: str) -> str:
    """Strip markup from ``raw`` and normalize whitespace.

    Entity references for the five common escapes are decoded first (to a
    fixpoint, so no encoded markup survives), then noise containers are
    dropped with their content, remaining well-formed tags are removed,
    and unclosed tags are stripped to the end of their line.  The result
    is idempotent: cleaning cleaned text changes nothing.
    """
    text = raw
    while True:
        decoded = _ENTITY_RE.sub(lambda m: _ENTITY_MAP[m.group(1)], text)
        if decoded == text:
            break
        text = decoded
    text = _NOISE_RE.sub(" ", text)
    text = _TAG_RE.sub(" ", text)
    text = _UNCLOSED_TAG_RE.sub(" ", text)
    return _WS_RE.sub(" ", text).strip()


def _guarded_abbreviation(prefix: str) -> bool:
    """True if ``prefix`` ends in a word whose period is not a boundary."""
    m = _TRAILING_WORD_RE.search(prefix)
    if m is None:
        return False
    word = m.group(1)
    if len(word) == 1 and word.isalpha() and word.isupper():
        return True  # an initial, e.g. the "A." in "A. Smith"
    return word.lower() in _ABBREVIATIONS


def segment_sentences(text: str) -> list[str]:
    """Split cleaned text into sentences.

    A boundary is sentence-final punctuation followed by whitespace and
    an uppercase letter or digit.  Periods after initials ("A.") or
    common abbreviations ("Mr.") do not split.  Text without any
    boundary comes back as a single sentence; empty text yields nothing.
    """
    sentences: list[str] = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        if text[m.start()] == "." and _guarded_abbreviation(text[: m.start()]):
            continue
        piece = text[start : m.start() + 1].strip()
        if piece:
            sentences.append(piece)
        start = m.end()
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def tokenize(text: str) -> list[str]:
    """Lowercase, split on whitespace, strip surrounding punctuation."""
    tokens = []
    for raw in text.lower().split():
        token = raw.strip(_PUNCT)
        if token:
            tokens.append(token)
    return tokens
