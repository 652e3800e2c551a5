"""End-to-end corpus pipeline: ingest, translate, classify, tag, filter, split.

Every intermediate artifact is a flat UTF-8 text file; record ids are 1-based
input line numbers and stay stable across stages.  Subset artifacts carry a
``.ids.tsv`` sidecar mapping their lines back to record ids so any stage can
be rerun or audited independently.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from . import filtering, rules as rules_mod, trees
from .config import PipelineConfig
from .errors import MalformedLineError, PipelineError, ProviderError
from .lexicon import (
    BENGALI,
    ENGLISH,
    SentimentLexicon,
    TaggedSentence,
    load_lexicon,
    merge,
    parse_tagged,
    tag_sentence,
    tag_set,
)
from .providers import (
    CachingTranslator,
    DictionaryProvider,
    HttpProvider,
    RateLimiter,
    TranslationCache,
)
from .rules import ComplexityClass, RuleSet, classify, mine_rules
from .trees import phrase_sequence


@dataclass(frozen=True)
class CorpusRecord:
    record_id: int
    source_text: str
    target_text: str | None = None
    parse: trees.ParseTree | None = None
    complexity: ComplexityClass | None = None
    failed: str | None = None  # failure reason; failed records leave the pipeline


def _check_raw_text(text: str, what: str, lineno: int) -> str:
    # Backslash is the sentiment-tag separator and tab/newline delimit the
    # corpus files (and double as the trainer's start/end symbols).
    if "\\" in text:
        raise MalformedLineError(f"{what} contains a backslash: {text!r}", lineno)
    if "\t" in text:
        raise MalformedLineError(f"{what} contains a tab: {text!r}", lineno)
    return text


def ingest_lines(source_lines, target_lines=None) -> list[CorpusRecord]:
    """Merge raw sentence lines into records; record id = line number."""
    sources = [line.rstrip("\n") for line in source_lines]
    targets = None
    if target_lines is not None:
        targets = [line.rstrip("\n") for line in target_lines]
        if len(targets) != len(sources):
            raise MalformedLineError(
                f"{len(sources)} source lines vs {len(targets)} target lines",
                min(len(sources), len(targets)) + 1,
            )
    records = []
    for i, source in enumerate(sources, start=1):
        _check_raw_text(source, "source sentence", i)
        target = None
        if targets is not None:
            target = _check_raw_text(targets[i - 1], "target sentence", i) or None
        records.append(CorpusRecord(i, source, target))
    return records


def read_corpus(path) -> list[CorpusRecord]:
    """Read a corpus TSV: ``source<TAB>target`` per line, target may be empty."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            parts = line.split("\t")
            if len(parts) > 2:
                raise MalformedLineError(
                    f"expected at most 2 tab-separated fields, got {len(parts)}",
                    lineno,
                )
            if not parts[0]:
                raise MalformedLineError("record has an empty source side", lineno)
            if "\\" in line:
                raise MalformedLineError(
                    f"corpus text contains a backslash: {line!r}", lineno
                )
            target = parts[1] if len(parts) == 2 and parts[1] else None
            records.append(CorpusRecord(lineno, parts[0], target))
    return records


def write_corpus(records, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(f"{rec.source_text}\t{rec.target_text or ''}\n")


def _write_subset(pairs_of_text, ids, path) -> None:
    """Write a 2-column subset TSV plus its record-id sidecar."""
    with open(path, "w", encoding="utf-8") as fh:
        for left, right in pairs_of_text:
            fh.write(f"{left}\t{right}\n")
    with open(str(path) + ".ids.tsv", "w", encoding="utf-8") as fh:
        for record_id in ids:
            fh.write(f"{record_id}\n")


def translate_missing(records, translator) -> tuple[list[CorpusRecord], list[tuple[int, str]]]:
    """Fill in missing targets via the provider; pre-translated records pass through.

    Failed records come back flagged (and must be excluded downstream); the
    run continues as long as something succeeded.
    """
    out = []
    failures = []
    for rec in records:
        if rec.target_text is not None or rec.failed:
            out.append(rec)
            continue
        try:
            translation = translator.translate(rec.source_text)
            out.append(replace(rec, target_text=translation))
        except ProviderError as exc:
            out.append(replace(rec, failed=str(exc)))
            failures.append((rec.record_id, str(exc)))
    return out, failures


def _pmap(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


@dataclass
class RunReport:
    """Per-stage counts for one pipeline run."""

    seed: int = 0
    ingested: int = 0
    translation: dict = field(default_factory=dict)
    classification: dict = field(default_factory=dict)
    tagging: dict = field(default_factory=dict)
    filter: dict = field(default_factory=dict)
    splits: dict = field(default_factory=dict)
    # The pipeline assumes the Bengali sentence has the same complexity as
    # its English counterpart; recorded, not validated.
    assumptions: tuple[str, ...] = (
        "target sentence complexity is assumed equal to the source sentence",
    )

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "ingested": self.ingested,
            "translation": self.translation,
            "classification": self.classification,
            "tagging": self.tagging,
            "filter": self.filter,
            "splits": self.splits,
            "assumptions": list(self.assumptions),
        }


def build_translator(
    config: PipelineConfig, default_cache: str | None = None
) -> CachingTranslator:
    if config.provider == "mock":
        provider = DictionaryProvider.from_tsv(config.provider_dict)
    else:
        provider = HttpProvider(
            config.provider_url,
            auth_token=config.provider_token,
            response_key=config.provider_response_key,
        )
    cache_path = config.cache_file or default_cache
    cache = TranslationCache(cache_path) if cache_path else None
    limiter = RateLimiter(config.provider_rate_limit)
    return CachingTranslator(
        provider, cache=cache, limiter=limiter, retries=config.provider_retries
    )


def load_ruleset(config: PipelineConfig) -> RuleSet:
    if config.rules_file:
        return rules_mod.read_rules(config.rules_file)
    parses = trees.read_parse_file(config.mining_parses_file)
    seqs = [phrase_sequence(tree) for _, tree in sorted(parses.items())]
    return mine_rules(seqs)


def _merged_lexicon(specs, language: str) -> SentimentLexicon:
    return merge([load_lexicon(path, fmt, language) for path, fmt in specs])


def run_pipeline(config: PipelineConfig) -> RunReport:
    """Execute the staged corpus build and write all artifacts to output_dir."""
    config.validate()
    os.makedirs(config.output_dir, exist_ok=True)
    out = lambda name: os.path.join(config.output_dir, name)
    report = RunReport(seed=config.seed)

    # ingest
    if config.corpus_file:
        records = read_corpus(config.corpus_file)
    else:
        with open(config.source_file, encoding="utf-8") as fh:
            source_lines = fh.readlines()
        target_lines = None
        if config.target_file:
            with open(config.target_file, encoding="utf-8") as fh:
                target_lines = fh.readlines()
        records = ingest_lines(source_lines, target_lines)
    report.ingested = len(records)

    # translate missing targets
    if config.do_translate and any(r.target_text is None for r in records):
        # Cached on disk keyed by source text, so reruns stay offline.
        translator = build_translator(
            config, default_cache=out("translate_cache.json")
        )
        pre_translated = sum(1 for r in records if r.target_text is not None)
        records, failures = translate_missing(records, translator)
        if translator.cache is not None:
            translator.cache.flush()
        with open(out("failures.tsv"), "w", encoding="utf-8") as fh:
            for record_id, reason in failures:
                fh.write(f"{record_id}\t{reason}\n")
        report.translation = {
            "passthrough": pre_translated,
            "translated": len(records) - pre_translated - len(failures),
            "failed": len(failures),
        }
    else:
        report.translation = {
            "passthrough": sum(1 for r in records if r.target_text is not None),
            "translated": 0,
            "failed": 0,
        }
    write_corpus(records, out("corpus.tsv"))
    live = [r for r in records if r.target_text is not None and not r.failed]
    if records and not live:
        raise PipelineError("no record survived the translation stage")

    # classify sentence complexity
    if config.do_classify:
        ruleset = load_ruleset(config)
        rules_mod.write_rules(ruleset, out("rules.tsv"))
        parses = trees.read_parse_file(config.parses_file)

        def classify_record(rec: CorpusRecord) -> CorpusRecord:
            tree = parses.get(rec.record_id)
            if tree is None:
                # No parse, no structural evidence: the record cannot be
                # placed in any class.
                return replace(rec, complexity=ComplexityClass.UNTAGGED)
            return replace(rec, parse=tree, complexity=classify(tree, ruleset))

        records = _pmap(classify_record, records, config.jobs)
        live = [r for r in records if r.target_text is not None and not r.failed]
        with open(out("classes.tsv"), "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(f"{rec.record_id}\t{rec.complexity}\n")
        counts = {c.value: 0 for c in ComplexityClass}
        for rec in records:
            counts[rec.complexity.value] += 1
        report.classification = counts

    # sentiment tagging + parallelism filter
    kept_pairs = []
    if config.do_sentiment:
        lex_en = _merged_lexicon(config.lexicons_en, ENGLISH)
        lex_bn = _merged_lexicon(config.lexicons_bn, BENGALI)

        def tag_record(rec: CorpusRecord):
            return (
                tag_sentence(rec.source_text, lex_en),
                tag_sentence(rec.target_text, lex_bn),
            )

        tagged_sides = _pmap(tag_record, live, config.jobs)
        # One line per ingested record; blank lines are alignment gaps for
        # records that left the pipeline, so line N = record N throughout.
        by_id = {
            rec.record_id: (en, bn)
            for rec, (en, bn) in zip(live, tagged_sides)
        }
        with open(out("tagged.tsv"), "w", encoding="utf-8") as fh:
            for rec in records:
                pair = by_id.get(rec.record_id)
                if pair is None:
                    fh.write("\n")
                else:
                    fh.write(f"{pair[0].render()}\t{pair[1].render()}\n")
        covered = sum(
            1 for en, bn in tagged_sides if tag_set(en) | tag_set(bn)
        )
        report.tagging = {
            "records": len(live),
            "coverage": covered / len(live) if live else 0.0,
        }

        pairs = [
            (rec.record_id, en, bn, rec.complexity)
            for rec, (en, bn) in zip(live, tagged_sides)
        ]
        result = filtering.filter_corpus(pairs)
        kept_pairs = result.kept
        _write_subset(
            [(p.source.render(), p.target.render()) for p in kept_pairs],
            [p.record_id for p in kept_pairs],
            out("kept.tsv"),
        )
        with open(out("droplog.tsv"), "w", encoding="utf-8") as fh:
            fh.write(filtering.format_drop_log(result.dropped))
        with open(out("filter_stats.txt"), "w", encoding="utf-8") as fh:
            fh.write(result.stats.report())
        report.filter = {
            "total": result.stats.total,
            "kept": result.stats.kept,
            "dropped": result.stats.dropped,
            "by_rule": dict(result.stats.by_rule),
            "by_class": dict(sorted(result.stats.by_class.items())),
        }

    # split into the general / simple / others datasets
    splits: dict[str, int] = {}

    def complexity_bucket(complexity) -> str | None:
        if complexity == ComplexityClass.SIMPLE:
            return "simple"
        if complexity in (ComplexityClass.COMPLEX, ComplexityClass.COMPOUND):
            return "others"
        return None  # Untagged feeds only the general corpus

    untagged_sets = {"general": list(live)}
    if config.do_classify:
        untagged_sets["simple"] = [
            r for r in live if complexity_bucket(r.complexity) == "simple"
        ]
        untagged_sets["others"] = [
            r for r in live if complexity_bucket(r.complexity) == "others"
        ]
    for name, subset in untagged_sets.items():
        _write_subset(
            [(r.source_text, r.target_text) for r in subset],
            [r.record_id for r in subset],
            out(f"{name}.tsv"),
        )
        splits[name] = len(subset)

    if config.do_sentiment:
        tagged_sets = {"general.tagged": kept_pairs}
        if config.do_classify:
            tagged_sets["simple.tagged"] = [
                p for p in kept_pairs if complexity_bucket(p.complexity) == "simple"
            ]
            tagged_sets["others.tagged"] = [
                p for p in kept_pairs if complexity_bucket(p.complexity) == "others"
            ]
        for name, subset in tagged_sets.items():
            _write_subset(
                [(p.source.render(), p.target.render()) for p in subset],
                [p.record_id for p in subset],
                out(f"{name}.tsv"),
            )
            splits[name] = len(subset)
    report.splits = splits

    with open(out("report.json"), "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    return report


def read_tagged_corpus(path) -> dict[int, tuple[TaggedSentence, TaggedSentence]]:
    """Read a tagged corpus TSV; blank lines are alignment gaps."""
    pairs: dict[int, tuple[TaggedSentence, TaggedSentence]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise MalformedLineError(
                    f"expected 2 tab-separated fields, got {len(parts)}", lineno
                )
            try:
                pairs[lineno] = (parse_tagged(parts[0]), parse_tagged(parts[1]))
            except ValueError as exc:
                raise MalformedLineError(str(exc), lineno) from exc
    return pairs


def read_classes(path) -> dict[int, ComplexityClass]:
    classes: dict[int, ComplexityClass] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise MalformedLineError("expected record_id<TAB>class", lineno)
            try:
                classes[int(parts[0])] = ComplexityClass(parts[1])
            except ValueError as exc:
                raise MalformedLineError(str(exc), lineno) from exc
    return classes


@dataclass
class StatsReport:
    records: int = 0
    tag_coverage: float = 0.0
    by_rule: dict = field(default_factory=dict)
    by_class: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "records": self.records,
            "tag_coverage": self.tag_coverage,
            "by_rule": self.by_rule,
            "by_class": self.by_class,
        }


def corpus_stats(corpus_path, classes_path=None) -> StatsReport:
    """Counts over a (possibly tagged) corpus TSV.

    Tag coverage is the fraction of pairs whose union tag set is non-empty;
    per-rule counts re-apply the parallelism rules to the stored tags.
    """
    stats = StatsReport(by_rule={rule: 0 for rule in filtering.RULE_IDS})
    with open(corpus_path, encoding="utf-8") as fh:
        covered = 0
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue  # alignment gap
            parts = line.split("\t")
            if len(parts) > 2:
                raise MalformedLineError(
                    f"expected at most 2 tab-separated fields, got {len(parts)}",
                    lineno,
                )
            try:
                en = parse_tagged(parts[0])
                bn = parse_tagged(parts[1]) if len(parts) == 2 else TaggedSentence(())
            except ValueError as exc:
                raise MalformedLineError(str(exc), lineno) from exc
            stats.records += 1
            e_tags, b_tags = tag_set(en), tag_set(bn)
            if e_tags | b_tags:
                covered += 1
            ok, rule = filtering.is_parallel(e_tags, b_tags)
            if ok:
                stats.by_rule[rule] += 1
    stats.tag_coverage = covered / stats.records if stats.records else 0.0
    if classes_path:
        with open(classes_path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 2:
                    raise MalformedLineError("expected record_id<TAB>class", lineno)
                stats.by_class[parts[1]] = stats.by_class.get(parts[1], 0) + 1
    return stats
