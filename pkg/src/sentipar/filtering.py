"""Sentiment-parallelism rules R1-R5 and corpus filtering.

A tagged pair survives when its two tag sets satisfy one of five rules;
pairs with an empty side or with opposite single polarities are dropped.
The rules are written out one by one on purpose: the compact equivalence
(tag sets intersect) is kept as a test oracle, not as the implementation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AlignmentError
from .lexicon import NEG, POS, TaggedSentence, tag_set
from .rules import ComplexityClass

KEPT = "kept"
DROPPED = "dropped"

RULE_IDS = ("R1", "R2", "R3", "R4", "R5")

_ONLY_POS = frozenset({POS})
_ONLY_NEG = frozenset({NEG})
_BOTH = frozenset({POS, NEG})


def is_parallel(e_tags, b_tags) -> tuple[bool, str | None]:
    """First matching rule in R1..R5 order, or (False, None).

    R1: both sides carry POS only.        R2: both sides carry NEG only.
    R3: both sides carry POS and NEG.     R4: one side both, the other POS only.
    R5: one side both, the other NEG only.
    """
    e = frozenset(e_tags)
    b = frozenset(b_tags)
    if e == _ONLY_POS and b == _ONLY_POS:
        return True, "R1"
    if e == _ONLY_NEG and b == _ONLY_NEG:
        return True, "R2"
    if e == _BOTH and b == _BOTH:
        return True, "R3"
    if (e == _BOTH and b == _ONLY_POS) or (e == _ONLY_POS and b == _BOTH):
        return True, "R4"
    if (e == _BOTH and b == _ONLY_NEG) or (e == _ONLY_NEG and b == _BOTH):
        return True, "R5"
    return False, None


@dataclass(frozen=True)
class ParallelPair:
    """A filtered sentence pair; ``matched_rule`` is set iff the pair was kept."""

    record_id: int
    source: TaggedSentence
    target: TaggedSentence
    complexity: ComplexityClass | None = None
    verdict: str = DROPPED
    matched_rule: str | None = None

    def __post_init__(self):
        if (self.verdict == KEPT) != (self.matched_rule is not None):
            raise ValueError("verdict must be 'kept' exactly when a rule matched")


@dataclass
class FilterStats:
    total: int = 0
    kept: int = 0
    dropped: int = 0
    by_rule: dict[str, int] = field(
        default_factory=lambda: {rule: 0 for rule in RULE_IDS}
    )
    by_class: dict[str, int] = field(default_factory=dict)

    def report(self) -> str:
        """Per-rule and per-class kept counts as a small text table."""
        lines = [
            "Sentiment-parallel filter statistics",
            f"total\t{self.total}",
            f"kept\t{self.kept}",
            f"dropped\t{self.dropped}",
        ]
        lines += [f"{rule}\t{self.by_rule[rule]}" for rule in RULE_IDS]
        lines += [f"kept[{name}]\t{n}" for name, n in sorted(self.by_class.items())]
        return "\n".join(lines) + "\n"


@dataclass
class FilterResult:
    kept: list[ParallelPair]
    dropped: list[ParallelPair]
    stats: FilterStats


def pair_up(
    sources: list[TaggedSentence],
    targets: list[TaggedSentence],
    record_ids: list[int] | None = None,
    complexities: list[ComplexityClass | None] | None = None,
):
    """Zip aligned sides into (record_id, source, target, complexity) tuples."""
    if len(sources) != len(targets):
        raise AlignmentError(
            f"{len(sources)} source sentences vs {len(targets)} targets"
        )
    if record_ids is None:
        record_ids = list(range(1, len(sources) + 1))
    if complexities is None:
        complexities = [None] * len(sources)
    if not len(sources) == len(record_ids) == len(complexities):
        raise AlignmentError("record ids / complexities misaligned with pairs")
    return list(zip(record_ids, sources, targets, complexities))


def filter_corpus(pairs) -> FilterResult:
    """Apply is_parallel to every (record_id, source, target, complexity) tuple."""
    stats = FilterStats()
    kept: list[ParallelPair] = []
    dropped: list[ParallelPair] = []
    for record_id, source, target, complexity in pairs:
        ok, rule = is_parallel(tag_set(source), tag_set(target))
        stats.total += 1
        pair = ParallelPair(
            record_id=record_id,
            source=source,
            target=target,
            complexity=complexity,
            verdict=KEPT if ok else DROPPED,
            matched_rule=rule,
        )
        if ok:
            kept.append(pair)
            stats.kept += 1
            stats.by_rule[rule] += 1
            name = str(complexity) if complexity is not None else "Unclassified"
            stats.by_class[name] = stats.by_class.get(name, 0) + 1
        else:
            dropped.append(pair)
            stats.dropped += 1
    return FilterResult(kept, dropped, stats)


def format_drop_log(dropped: list[ParallelPair]) -> str:
    """TSV drop log: record_id, English tag set, Bengali tag set."""

    def fmt(tags: frozenset[str]) -> str:
        return "+".join(t for t in (POS, NEG) if t in tags) or "-"

    return "".join(
        f"{pair.record_id}\t{fmt(tag_set(pair.source))}\t{fmt(tag_set(pair.target))}\n"
        for pair in dropped
    )
