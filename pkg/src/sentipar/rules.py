"""Simple-sentence rule mining, complex/compound detection, and classifier metrics.

Simple sentences are recognized by phrase-structure rules mined from a seed
set of known simple sentences; complex and compound sentences are recognized
by fixed structural tests on SBAR and CC nodes.
"""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import AlignmentError, EmptyInputError, EmptyMiningSetError
from .trees import ParseTree, phrase_sequence

ONE = "1"
ONE_OR_MORE = "+"


class ComplexityClass(enum.Enum):
    SIMPLE = "Simple"
    COMPLEX = "Complex"
    COMPOUND = "Compound"
    UNTAGGED = "Untagged"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class PhraseSeqRule:
    """A phrase-label pattern such as ``NP* VP`` with its mining statistics.

    ``pattern`` is a tuple of (label, flag) where flag is ONE for exactly one
    occurrence and ONE_OR_MORE for one or more.
    """

    pattern: tuple[tuple[str, str], ...]
    match_count: int = 0
    confidence: float = 0.0

    def __post_init__(self):
        if not self.pattern:
            raise ValueError("rule pattern must be non-empty")

    def surface(self) -> str:
        """Starred surface form, e.g. ``NP* VP``."""
        return " ".join(
            label + ("*" if flag == ONE_OR_MORE else "")
            for label, flag in self.pattern
        )


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[PhraseSeqRule, ...]
    total: int  # mining-set size

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)


def confidence(match_count: int, total: int) -> float:
    """Fraction of the mining set matched by a rule."""
    if total == 0:
        raise ZeroDivisionError("confidence undefined for an empty mining set")
    if not 0 <= match_count <= total:
        raise ValueError(f"match_count {match_count} outside [0, {total}]")
    return match_count / total


def format_percent(fraction: float) -> str:
    """Display form used by the rules file and CLI: x100, two decimals."""
    return f"{fraction * 100:.2f}"


@functools.lru_cache(maxsize=4096)
def _compiled(pattern):
    """Compile a pattern into (regex, label->char map), one char per label."""
    mapping: dict[str, str] = {}
    parts = []
    for label, flag in pattern:
        char = mapping.setdefault(label, chr(0xE000 + len(mapping)))
        parts.append(re.escape(char) + ("+" if flag == ONE_OR_MORE else ""))
    return re.compile("".join(parts) + r"\Z"), mapping


def matches(rule: PhraseSeqRule, seq: tuple[str, ...]) -> bool:
    """Whole-sequence regular-language match of ``seq`` against the pattern."""
    regex, mapping = _compiled(rule.pattern)
    # Labels absent from the pattern map to a char the regex can never match.
    subject = "".join(mapping.get(label, "\x00") for label in seq)
    return regex.match(subject) is not None


def _run_skeleton(seq: tuple[str, ...]) -> tuple[tuple[str, int], ...]:
    """Collapse maximal runs of identical labels into (label, run_length)."""
    runs: list[tuple[str, int]] = []
    for label in seq:
        if runs and runs[-1][0] == label:
            runs[-1] = (label, runs[-1][1] + 1)
        else:
            runs.append((label, 1))
    return tuple(runs)


def mine_rules(simple_seqs: list[tuple[str, ...]]) -> RuleSet:
    """Extract deduplicated phrase-structure rules from known simple sentences.

    Sequences that differ only in run lengths of the same label collapse into
    one rule; a position becomes one-or-more when any contributing sequence
    repeats the label there.  Confidence is match_count over mining-set size.
    """
    if not simple_seqs:
        raise EmptyMiningSetError("cannot mine rules from an empty set")
    groups: dict[tuple[str, ...], list[tuple[tuple[str, int], ...]]] = {}
    for seq in simple_seqs:
        if not seq:
            raise EmptyMiningSetError("cannot mine a rule from an empty sequence")
        runs = _run_skeleton(seq)
        key = tuple(label for label, _ in runs)
        groups.setdefault(key, []).append(runs)

    total = len(simple_seqs)
    rules = []
    for key, members in groups.items():
        flags = [
            ONE_OR_MORE if any(runs[i][1] > 1 for runs in members) else ONE
            for i in range(len(key))
        ]
        pattern = tuple(zip(key, flags))
        rule = PhraseSeqRule(pattern)
        count = sum(1 for seq in simple_seqs if matches(rule, seq))
        rules.append(
            PhraseSeqRule(pattern, match_count=count, confidence=count / total)
        )
    rules.sort(key=lambda r: (-r.match_count, r.surface()))
    return RuleSet(tuple(rules), total)


def _spans(tree: ParseTree) -> list[tuple[ParseTree, int, int]]:
    """(node, start, end) token-index spans for every node, end exclusive."""
    spans: list[tuple[ParseTree, int, int]] = []

    def walk(node: ParseTree, start: int) -> int:
        if node.is_leaf:
            spans.append((node, start, start + 1))
            return start + 1
        end = start
        for child in node.children:
            end = walk(child, end)
        spans.append((node, start, end))
        return end

    walk(tree, 0)
    return spans


def is_complex(tree: ParseTree) -> bool:
    """SBAR between clauses, or sentence-initial SBAR with a later comma.

    True iff some SBAR node's leaf span starts after token 0, or an SBAR
    spans from token 0 and a comma token occurs after that span ends.
    """
    comma_positions = [
        i for i, leaf in enumerate(tree.leaves()) if leaf.label == ","
    ]
    for node, start, end in _spans(tree):
        if node.label != "SBAR":
            continue
        if start > 0:
            return True
        if any(pos >= end for pos in comma_positions):
            return True
    return False


def is_compound(tree: ParseTree) -> bool:
    """True iff some CC node has a following sibling labeled S."""
    for node in tree.iter_nodes():
        labels = [child.label for child in node.children]
        for i, label in enumerate(labels):
            if label == "CC" and "S" in labels[i + 1 :]:
                return True
    return False


def classify(tree: ParseTree, ruleset: RuleSet) -> ComplexityClass:
    """Assign exactly one complexity class.

    Precedence is Complex > Compound > Simple > Untagged.  Simple requires a
    mined-rule match plus the absence of any SBAR and of any clause-level
    coordination, per the one-independent-clause definition.
    """
    if is_complex(tree):
        return ComplexityClass.COMPLEX
    if is_compound(tree):
        return ComplexityClass.COMPOUND
    seq = phrase_sequence(tree)
    if (
        any(matches(rule, seq) for rule in ruleset)
        and not tree.contains_label("SBAR")
        and not is_compound(tree)
    ):
        return ComplexityClass.SIMPLE
    return ComplexityClass.UNTAGGED


@dataclass(frozen=True)
class ConfusionMetrics:
    """2x2 confusion counts (rows = gold, columns = predicted; order Other, Simple)."""

    matrix: tuple[tuple[int, int], tuple[int, int]]
    accuracy: float
    precision: float
    recall: float
    f1: float
    kappa: float

    @classmethod
    def from_matrix(cls, matrix) -> "ConfusionMetrics":
        (tn, fp), (fn, tp) = matrix
        total = tn + fp + fn + tp
        if total == 0:
            raise EmptyInputError("empty confusion matrix")
        accuracy = (tn + tp) / total
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = (
            2 * precision * recall / (precision + recall)
            if precision + recall
            else 0.0
        )
        # Chance agreement from row/column marginals; exact arithmetic keeps
        # kappa stable on large counts.
        p_o = Fraction(tn + tp, total)
        p_e = Fraction((tn + fp) * (tn + fn) + (fn + tp) * (fp + tp), total * total)
        if p_e == 1:
            kappa = 1.0 if p_o == 1 else 0.0
        else:
            kappa = float((p_o - p_e) / (1 - p_e))
        return cls(
            matrix=((tn, fp), (fn, tp)),
            accuracy=accuracy,
            precision=precision,
            recall=recall,
            f1=f1,
            kappa=kappa,
        )


GOLD_SIMPLE = "Simple"
GOLD_OTHER = "Other"


def binarize(label: ComplexityClass | str) -> str:
    value = label.value if isinstance(label, ComplexityClass) else label
    return GOLD_SIMPLE if value == GOLD_SIMPLE else GOLD_OTHER


def evaluate(pred: list, gold: list) -> ConfusionMetrics:
    """Score predictions against Simple/Other gold labels."""
    if len(pred) != len(gold):
        raise AlignmentError(
            f"{len(pred)} predictions vs {len(gold)} gold labels"
        )
    if not pred:
        raise EmptyInputError("nothing to evaluate")
    counts = [[0, 0], [0, 0]]
    index = {GOLD_OTHER: 0, GOLD_SIMPLE: 1}
    for p, g in zip(pred, gold):
        counts[index[binarize(g)]][index[binarize(p)]] += 1
    return ConfusionMetrics.from_matrix(
        ((counts[0][0], counts[0][1]), (counts[1][0], counts[1][1]))
    )


def write_rules(ruleset: RuleSet, path) -> None:
    """Rules file: surface form, TAB, match count, TAB, confidence percent."""
    with open(path, "w", encoding="utf-8") as fh:
        for rule in ruleset:
            fh.write(
                f"{rule.surface()}\t{rule.match_count}\t"
                f"{format_percent(rule.confidence)}\n"
            )


def read_rules(path) -> RuleSet:
    """Read a rules file back; the mining-set size is the match-count sum."""
    rules = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise AlignmentError(f"rules file line {lineno}: expected 3 fields")
            pattern = tuple(
                (item.rstrip("*"), ONE_OR_MORE if item.endswith("*") else ONE)
                for item in parts[0].split()
            )
            rules.append(PhraseSeqRule(pattern, match_count=int(parts[1])))
    total = sum(rule.match_count for rule in rules)
    if total:
        rules = [
            PhraseSeqRule(r.pattern, r.match_count, r.match_count / total)
            for r in rules
        ]
    return RuleSet(tuple(rules), total)
