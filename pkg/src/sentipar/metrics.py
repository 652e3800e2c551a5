"""Corpus-level BLEU and sentence/corpus TER, self-contained.

BLEU pools clipped modified n-gram counts over the corpus, takes the
geometric mean of the n-gram precisions and multiplies by the brevity
penalty.  TER counts the cheapest mix of insertions, deletions,
substitutions and block shifts (all cost 1) that turns the hypothesis into
the reference, divided by the reference length; shifts are found with the
standard greedy procedure.  Single reference per sentence throughout.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .errors import AlignmentError, EmptyInputError, UndefinedScoreError
from .lexicon import strip_tags

MAX_SHIFT_BLOCK = 10


@dataclass(frozen=True)
class EvalPair:
    """One hypothesis/reference sentence pair, whitespace-tokenized, detagged."""

    hypothesis: tuple[str, ...]
    reference: tuple[str, ...]

    @classmethod
    def from_text(cls, hypothesis: str, reference: str) -> "EvalPair":
        return cls(
            tuple(strip_tags(hypothesis).split()),
            tuple(strip_tags(reference).split()),
        )


@dataclass(frozen=True)
class BleuResult:
    score: float  # in [0, 1]
    precisions: tuple[float, ...]
    brevity_penalty: float
    hyp_len: int
    ref_len: int
    zero_precision: bool  # some pooled precision was zero (score forced to 0)


def _ngram_counts(tokens: tuple[str, ...], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu_details(pairs, max_n: int = 4, smooth: bool = False) -> BleuResult:
    """Corpus BLEU with per-order precisions and the brevity penalty.

    With ``smooth`` (add-one on orders above 1, for tiny corpora) zero
    higher-order counts no longer zero out the score; default is the
    original unsmoothed definition.
    """
    pairs = list(pairs)
    if not pairs:
        raise EmptyInputError("BLEU needs at least one sentence pair")
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    matched = [0] * max_n
    attempted = [0] * max_n
    hyp_len = 0
    ref_len = 0
    for pair in pairs:
        hyp_len += len(pair.hypothesis)
        ref_len += len(pair.reference)
        for n in range(1, max_n + 1):
            hyp_counts = _ngram_counts(pair.hypothesis, n)
            ref_counts = _ngram_counts(pair.reference, n)
            matched[n - 1] += sum(
                min(count, ref_counts[gram]) for gram, count in hyp_counts.items()
            )
            attempted[n - 1] += max(len(pair.hypothesis) - n + 1, 0)

    precisions = []
    for n in range(1, max_n + 1):
        m, a = matched[n - 1], attempted[n - 1]
        if smooth and n > 1:
            m, a = m + 1, a + 1
        precisions.append(m / a if a else 0.0)

    bp = min(1.0, math.exp(1 - ref_len / hyp_len)) if hyp_len else 0.0
    zero = any(p == 0.0 for p in precisions)
    if zero or hyp_len == 0:
        score = 0.0
    else:
        score = bp * math.exp(sum(math.log(p) for p in precisions) / max_n)
    return BleuResult(score, tuple(precisions), bp, hyp_len, ref_len, zero)


def bleu(pairs, max_n: int = 4, smooth: bool = False) -> float:
    return bleu_details(pairs, max_n=max_n, smooth=smooth).score


def edit_distance(a, b) -> int:
    """Plain Levenshtein distance, unit costs."""
    a, b = tuple(a), tuple(b)
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, tok_a in enumerate(a, start=1):
        cur = [i]
        for j, tok_b in enumerate(b, start=1):
            cur.append(
                min(
                    prev[j] + 1,  # delete
                    cur[j - 1] + 1,  # insert
                    prev[j - 1] + (tok_a != tok_b),  # substitute
                )
            )
        prev = cur
    return prev[-1]


def shift_candidates(hyp, ref, max_block: int = MAX_SHIFT_BLOCK):
    """Legal block shifts of ``hyp``: the block must occur somewhere in ``ref``
    and must not already sit on an identical reference span at the same
    position.  Yields the shifted sequences.

    Candidates come out ordered by source position, then block length, then
    destination; callers keeping the first best implement the standard
    leftmost/shortest tie-break.
    """
    hyp = tuple(hyp)
    ref = tuple(ref)
    ref_substrings = {
        ref[p : p + length]
        for length in range(1, min(len(ref), max_block) + 1)
        for p in range(len(ref) - length + 1)
    }
    for i in range(len(hyp)):
        for length in range(1, min(len(hyp) - i, max_block) + 1):
            block = hyp[i : i + length]
            if block not in ref_substrings:
                continue
            if ref[i : i + length] == block:
                continue  # already aligned here
            rest = hyp[:i] + hyp[i + length :]
            for j in range(len(rest) + 1):
                if j == i:
                    continue  # identity move
                yield rest[:j] + block + rest[j:]


@dataclass(frozen=True)
class TerResult:
    edits: int  # shifts + remaining edit distance
    shifts: int
    ref_len: int

    @property
    def score(self) -> float:
        return self.edits / self.ref_len


def ter_details(pair: EvalPair) -> TerResult:
    """Greedy-shift TER: repeatedly take the single shift that most reduces
    the edit distance, then add the remaining edit distance.

    Ties between equally-reducing shifts are broken by the strongest
    follow-up shift (one step of lookahead), then by candidate order
    (leftmost source, shortest block, leftmost destination).  The lookahead
    is what makes the greedy search return the true shift-edit optimum on
    short sequences; a purely positional tie-break can strand the search
    one edit above it.
    """
    if not pair.reference:
        raise UndefinedScoreError("TER undefined for an empty reference")
    ref = tuple(pair.reference)
    to_ref: dict[tuple, int] = {}

    def dist(seq: tuple) -> int:
        if seq not in to_ref:
            to_ref[seq] = edit_distance(seq, ref)
        return to_ref[seq]

    def best_shift(current: tuple, distance: int):
        best_d = distance
        tied: list[tuple] = []
        for shifted in shift_candidates(current, ref):
            d = dist(shifted)
            if d < best_d:
                best_d, tied = d, [shifted]
            elif tied and d == best_d:
                tied.append(shifted)
        if not tied:
            return None, distance
        if len(tied) > 1:
            def followup(seq: tuple) -> int:
                floor = best_d
                for shifted in shift_candidates(seq, ref):
                    floor = min(floor, dist(shifted))
                return floor

            return min(tied, key=followup), best_d  # min() keeps first on ties
        return tied[0], best_d

    current = tuple(pair.hypothesis)
    shifts = 0
    distance = dist(current)
    while distance > 0:
        chosen, new_distance = best_shift(current, distance)
        if chosen is None:
            break
        current, distance = chosen, new_distance
        shifts += 1
    return TerResult(edits=shifts + distance, shifts=shifts, ref_len=len(ref))


def ter(pair: EvalPair) -> float:
    return ter_details(pair).score


def corpus_ter(pairs) -> float:
    """Micro-average: total edit+shift cost over total reference length."""
    pairs = list(pairs)
    if not pairs:
        raise EmptyInputError("TER needs at least one sentence pair")
    results = [ter_details(pair) for pair in pairs]
    return sum(r.edits for r in results) / sum(r.ref_len for r in results)


@dataclass(frozen=True)
class RatingRecord:
    """Manual adequacy/fluency judgment on a 1-5 scale."""

    record_id: int
    adequacy: int
    fluency: int

    def __post_init__(self):
        for name in ("adequacy", "fluency"):
            value = getattr(self, name)
            if not 1 <= value <= 5:
                raise ValueError(f"{name} must be in 1..5, got {value}")


def load_ratings(path) -> list[RatingRecord]:
    """Ratings TSV: record_id, adequacy, fluency; validated on load."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise AlignmentError(
                    f"ratings line {lineno}: expected 3 fields, got {len(parts)}"
                )
            try:
                records.append(
                    RatingRecord(int(parts[0]), int(parts[1]), int(parts[2]))
                )
            except ValueError as exc:
                raise AlignmentError(f"ratings line {lineno}: {exc}") from exc
    return records


def load_eval_pairs(hyp_path, ref_path) -> list[EvalPair]:
    """Read aligned hypothesis/reference files, one detagged sentence per line."""
    with open(hyp_path, encoding="utf-8") as fh:
        hyp_lines = fh.read().splitlines()
    with open(ref_path, encoding="utf-8") as fh:
        ref_lines = fh.read().splitlines()
    if len(hyp_lines) != len(ref_lines):
        raise AlignmentError(
            f"{len(hyp_lines)} hypothesis lines vs {len(ref_lines)} references"
        )
    return [EvalPair.from_text(h, r) for h, r in zip(hyp_lines, ref_lines)]
