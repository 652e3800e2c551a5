"""Polarity lexicons and word-level sentiment tagging.

Words found in a positive/negative lexicon get inline ``\\POS`` / ``\\NEG``
suffix tags; neutral words stay untagged.  Tagging is strictly word-level:
no multi-word expressions and no negation scope.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

from .errors import LanguageMismatchError, LexiconFormatError

POS = "POS"
NEG = "NEG"
ENGLISH = "english"
BENGALI = "bengali"

_TAG_ORDER = (POS, NEG)
_WS_SPLIT = re.compile(r"(\s+)")


def _ordered(tags) -> tuple[str, ...]:
    return tuple(t for t in _TAG_ORDER if t in set(tags))


def _strip_punct(token: str) -> str:
    """Drop leading/trailing punctuation (any Unicode P* category, so the
    Bengali danda is covered) for lexicon lookup only."""
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


@dataclass(frozen=True)
class SentimentLexicon:
    """term -> polarity-set mapping; polarity sets are non-empty subsets of {POS, NEG}."""

    entries: dict[str, frozenset[str]] = field(default_factory=dict)
    language: str | None = None
    source_names: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def _key(self, term: str) -> str:
        # English lookup is case-insensitive; Bengali is exact-match.
        return term.casefold() if self.language == ENGLISH else term

    def lookup(self, token: str) -> frozenset[str]:
        """Polarity set for a surface token; empty frozenset when unknown."""
        key = self._key(_strip_punct(token))
        if not key:
            return frozenset()
        return self.entries.get(key, frozenset())


def load_lexicon(path, fmt: str, language: str = ENGLISH, name: str | None = None) -> SentimentLexicon:
    """Load a lexicon file.

    ``labeled`` lines are ``term<TAB>POS|NEG``; ``scored`` lines are
    ``term<TAB>signed-number`` (AFINN style) where the sign picks the
    polarity and zero-scored terms are omitted.  Duplicate terms union
    their polarity sets.
    """
    if fmt not in ("labeled", "scored"):
        raise ValueError(f"unknown lexicon format {fmt!r}")
    probe = SentimentLexicon({}, language)
    entries: dict[str, frozenset[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise LexiconFormatError(
                    f"expected 'term<TAB>value', got {line!r}", lineno
                )
            term, value = parts
            key = probe._key(term.strip())
            if not key:
                raise LexiconFormatError("empty term", lineno)
            if fmt == "labeled":
                label = value.strip()
                if label not in (POS, NEG):
                    raise LexiconFormatError(f"unknown label {label!r}", lineno)
                polarity = frozenset({label})
            else:
                try:
                    score = float(value)
                except ValueError:
                    raise LexiconFormatError(
                        f"unparseable score {value!r}", lineno
                    ) from None
                if score > 0:
                    polarity = frozenset({POS})
                elif score < 0:
                    polarity = frozenset({NEG})
                else:
                    continue  # neutral terms are omitted, not stored empty
            entries[key] = entries.get(key, frozenset()) | polarity
    return SentimentLexicon(entries, language, (name or str(path),))


def merge(lexicons: list[SentimentLexicon]) -> SentimentLexicon:
    """Term-wise union of polarity sets; conflicting sources yield {POS, NEG}."""
    languages = {lex.language for lex in lexicons if lex.language is not None}
    if len(languages) > 1:
        raise LanguageMismatchError(
            f"cannot merge lexicons of languages {sorted(languages)}"
        )
    entries: dict[str, frozenset[str]] = {}
    sources: list[str] = []
    for lex in lexicons:
        for term, polarity in lex.entries.items():
            entries[term] = entries.get(term, frozenset()) | polarity
        for src in lex.source_names:
            if src not in sources:
                sources.append(src)
    language = languages.pop() if languages else None
    return SentimentLexicon(entries, language, tuple(sources))


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    tags: tuple[str, ...] = ()  # ordered subset of (POS, NEG), POS first

    def render(self) -> str:
        return self.surface + "".join("\\" + tag for tag in self.tags)


@dataclass(frozen=True)
class TaggedSentence:
    """Token sequence with inline sentiment tags and exact whitespace."""

    tokens: tuple[TaggedToken, ...]
    # Whitespace around/between tokens, len(tokens) + 1 entries, so that
    # detagging reproduces the original sentence byte for byte.
    separators: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.separators is None:
            n = len(self.tokens)
            default = ("",) + (" ",) * max(n - 1, 0) + ("",) if n else ("",)
            object.__setattr__(self, "separators", default)
        if len(self.separators) != len(self.tokens) + 1:
            raise ValueError("need len(tokens) + 1 separators")

    def render(self) -> str:
        """Tagged serialization, e.g. ``The enemy\\NEG soldiers ...``."""
        return self._join(tok.render() for tok in self.tokens)

    def detag(self) -> str:
        """Original sentence with all tags stripped."""
        return self._join(tok.surface for tok in self.tokens)

    def _join(self, rendered) -> str:
        out = [self.separators[0]]
        for text, sep in zip(rendered, self.separators[1:]):
            out.append(text)
            out.append(sep)
        return "".join(out)


def _split_segments(sentence: str) -> tuple[list[str], list[str]]:
    """Split into (words, separators); separators has len(words) + 1 entries.

    Joining sep[0] + word[0] + sep[1] + ... + sep[-1] reproduces the input
    exactly, whatever whitespace it uses.
    """
    segments = _WS_SPLIT.split(sentence)
    # re.split alternates word/sep segments; the word slots at either end are
    # empty strings when the sentence starts/ends with whitespace.
    words = segments[0::2]
    seps = segments[1::2]
    leading = trailing = ""
    if words and words[0] == "":
        leading = seps.pop(0) if seps else ""
        words.pop(0)
    if words and words[-1] == "":
        trailing = seps.pop() if seps else ""
        words.pop()
    if not words:
        return [], [leading + trailing]
    return words, [leading] + seps + [trailing]


def tag_sentence(sentence: str, lexicon: SentimentLexicon) -> TaggedSentence:
    """Whitespace-tokenize and tag every token found in the lexicon.

    Surface forms are preserved verbatim; lookups fold case (English) and
    strip surrounding punctuation.  Raw text must be backslash-free since
    the backslash is the tag separator.
    """
    if "\\" in sentence:
        raise ValueError(
            "raw sentence contains a backslash, which is reserved for "
            f"sentiment tags: {sentence!r}"
        )
    words, seps = _split_segments(sentence)
    tokens = tuple(
        TaggedToken(word, _ordered(lexicon.lookup(word))) for word in words
    )
    return TaggedSentence(tokens, tuple(seps))


def parse_tagged(text: str) -> TaggedSentence:
    """Read back the tagged serialization produced by ``render``."""
    words, seps = _split_segments(text)
    tokens = []
    for word in words:
        surface, *tags = word.split("\\")
        for tag in tags:
            if tag not in (POS, NEG):
                raise ValueError(f"unknown sentiment tag {tag!r} in {word!r}")
        tokens.append(TaggedToken(surface, _ordered(tags)))
    return TaggedSentence(tuple(tokens), tuple(seps))


def tag_set(sentence: TaggedSentence) -> frozenset[str]:
    """Union of all token tag sets."""
    out: set[str] = set()
    for token in sentence.tokens:
        out.update(token.tags)
    return frozenset(out)


def strip_tags(text: str) -> str:
    """Leniently remove inline tags from arbitrary text (for scoring)."""
    return text.replace("\\" + POS, "").replace("\\" + NEG, "")
