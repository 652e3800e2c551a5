"""Command-line interface.

Each subcommand runs one pipeline stage on flat files so stages can be
rerun independently; ``run`` executes the whole pipeline from a config
file.  Exit codes: 0 success, 1 pipeline error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import filtering, metrics, pipeline, rules as rules_mod, trees
from .config import PipelineConfig, load_config
from .errors import ConfigError, SentiparError
from .lexicon import BENGALI, ENGLISH, tag_sentence, tag_set
from .rules import ComplexityClass


def _require_config(args) -> PipelineConfig:
    if not args.config:
        raise ConfigError("this command needs --config")
    config = load_config(args.config)
    return config.with_overrides(seed=args.seed, jobs=args.jobs)


def cmd_ingest(args) -> None:
    with open(args.source, encoding="utf-8") as fh:
        source_lines = fh.readlines()
    target_lines = None
    if args.target:
        with open(args.target, encoding="utf-8") as fh:
            target_lines = fh.readlines()
    records = pipeline.ingest_lines(source_lines, target_lines)
    pipeline.write_corpus(records, args.output)
    print(f"ingested {len(records)} records -> {args.output}")


def cmd_translate(args) -> None:
    config = _require_config(args)
    records = pipeline.read_corpus(args.corpus)
    translator = pipeline.build_translator(
        config, default_cache=args.output + ".cache.json"
    )
    records, failures = pipeline.translate_missing(records, translator)
    if translator.cache is not None:
        translator.cache.flush()
    pipeline.write_corpus(records, args.output)
    with open(args.output + ".failures.tsv", "w", encoding="utf-8") as fh:
        for record_id, reason in failures:
            fh.write(f"{record_id}\t{reason}\n")
    done = sum(1 for r in records if r.target_text is not None)
    print(f"translated corpus -> {args.output} ({done} complete, {len(failures)} failed)")


def cmd_mine_rules(args) -> None:
    parses = trees.read_parse_file(args.parses)
    seqs = [trees.phrase_sequence(tree) for _, tree in sorted(parses.items())]
    ruleset = rules_mod.mine_rules(seqs)
    rules_mod.write_rules(ruleset, args.output)
    print(f"mined {len(ruleset)} rules from {ruleset.total} sentences -> {args.output}")


def cmd_classify(args) -> None:
    ruleset = rules_mod.read_rules(args.rules)
    parses = trees.read_parse_file(args.parses)
    count = args.count or (max(parses) if parses else 0)
    with open(args.output, "w", encoding="utf-8") as fh:
        for record_id in range(1, count + 1):
            tree = parses.get(record_id)
            label = (
                rules_mod.classify(tree, ruleset)
                if tree is not None
                else ComplexityClass.UNTAGGED
            )
            fh.write(f"{record_id}\t{label}\n")
    print(f"classified {count} records -> {args.output}")


def cmd_tag(args) -> None:
    config = _require_config(args)
    if not (config.lexicons_en and config.lexicons_bn):
        raise ConfigError("tagging needs lexicons_en and lexicons_bn in the config")
    lex_en = pipeline._merged_lexicon(config.lexicons_en, ENGLISH)
    lex_bn = pipeline._merged_lexicon(config.lexicons_bn, BENGALI)
    records = pipeline.read_corpus(args.corpus)
    with open(args.output, "w", encoding="utf-8") as fh:
        for rec in records:
            if rec.target_text is None:
                fh.write("\n")  # alignment gap for incomplete records
                continue
            en = tag_sentence(rec.source_text, lex_en)
            bn = tag_sentence(rec.target_text, lex_bn)
            fh.write(f"{en.render()}\t{bn.render()}\n")
    print(f"tagged {len(records)} records -> {args.output}")


def cmd_filter(args) -> None:
    tagged = pipeline.read_tagged_corpus(args.tagged)
    classes = pipeline.read_classes(args.classes) if args.classes else {}
    pairs = [
        (record_id, en, bn, classes.get(record_id))
        for record_id, (en, bn) in sorted(tagged.items())
    ]
    result = filtering.filter_corpus(pairs)
    pipeline._write_subset(
        [(p.source.render(), p.target.render()) for p in result.kept],
        [p.record_id for p in result.kept],
        args.kept,
    )
    with open(args.drop_log, "w", encoding="utf-8") as fh:
        fh.write(filtering.format_drop_log(result.dropped))
    print(result.stats.report(), end="")


def cmd_split(args) -> None:
    records = pipeline.read_corpus(args.corpus)
    classes = pipeline.read_classes(args.classes) if args.classes else {}
    tagged = pipeline.read_tagged_corpus(args.tagged) if args.tagged else {}

    def bucket(record_id) -> str | None:
        complexity = classes.get(record_id)
        if complexity == ComplexityClass.SIMPLE:
            return "simple"
        if complexity in (ComplexityClass.COMPLEX, ComplexityClass.COMPOUND):
            return "others"
        return None

    live = [r for r in records if r.target_text is not None]
    sets = {"general": live}
    if classes:
        sets["simple"] = [r for r in live if bucket(r.record_id) == "simple"]
        sets["others"] = [r for r in live if bucket(r.record_id) == "others"]
    sizes = {}
    for name, subset in sets.items():
        path = f"{args.output_dir}/{name}.tsv"
        pipeline._write_subset(
            [(r.source_text, r.target_text) for r in subset],
            [r.record_id for r in subset],
            path,
        )
        sizes[name] = len(subset)
    if tagged:
        kept = [
            (record_id, en, bn)
            for record_id, (en, bn) in sorted(tagged.items())
            if filtering.is_parallel(tag_set(en), tag_set(bn))[0]
        ]
        tagged_sets = {"general.tagged": kept}
        if classes:
            tagged_sets["simple.tagged"] = [
                item for item in kept if bucket(item[0]) == "simple"
            ]
            tagged_sets["others.tagged"] = [
                item for item in kept if bucket(item[0]) == "others"
            ]
        for name, subset in tagged_sets.items():
            path = f"{args.output_dir}/{name}.tsv"
            pipeline._write_subset(
                [(en.render(), bn.render()) for _, en, bn in subset],
                [record_id for record_id, _, _ in subset],
                path,
            )
            sizes[name] = len(subset)
    print(json.dumps(sizes, indent=2))


def cmd_stats(args) -> None:
    stats = pipeline.corpus_stats(args.corpus, classes_path=args.classes)
    print(json.dumps(stats.to_dict(), indent=2))


def cmd_run(args) -> None:
    config = _require_config(args)
    report = pipeline.run_pipeline(config)
    print(json.dumps(report.to_dict(), ensure_ascii=False, indent=2))


def cmd_eval_bleu(args) -> None:
    pairs = metrics.load_eval_pairs(args.hyp, args.ref)
    result = metrics.bleu_details(pairs, max_n=args.max_n, smooth=args.smooth)
    report = {"bleu": round(result.score * 100, 2), "n": len(pairs)}
    if result.zero_precision:
        report["zero_precision"] = True
    print(json.dumps(report))


def cmd_eval_ter(args) -> None:
    pairs = metrics.load_eval_pairs(args.hyp, args.ref)
    score = metrics.corpus_ter(pairs)
    print(json.dumps({"ter": round(score * 100, 2), "n": len(pairs)}))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sentipar",
        description="Sentiment-tagged parallel corpus toolkit",
    )
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--jobs", type=int, help="worker threads for per-record stages")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="merge raw sentence files into a corpus TSV")
    p.add_argument("--source", required=True)
    p.add_argument("--target")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("translate", help="fill missing targets via the provider")
    p.add_argument("--corpus", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("mine-rules", help="mine simple-sentence rules from parses")
    p.add_argument("--parses", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_mine_rules)

    p = sub.add_parser("classify", help="assign complexity classes from parses")
    p.add_argument("--parses", required=True)
    p.add_argument("--rules", required=True)
    p.add_argument("--count", type=int, help="total record count (pads untagged)")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("tag", help="sentiment-tag a corpus with the configured lexicons")
    p.add_argument("--corpus", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("filter", help="keep sentiment-parallel pairs (rules R1-R5)")
    p.add_argument("--tagged", required=True)
    p.add_argument("--classes")
    p.add_argument("--kept", required=True)
    p.add_argument("--drop-log", required=True)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("split", help="emit general/simple/others datasets")
    p.add_argument("--corpus", required=True)
    p.add_argument("--classes")
    p.add_argument("--tagged")
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("stats", help="corpus statistics")
    p.add_argument("--corpus", required=True)
    p.add_argument("--classes")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("run", help="run the whole pipeline from a config file")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eval-bleu", help="corpus BLEU over aligned text files")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--smooth", action="store_true")
    p.set_defaults(func=cmd_eval_bleu)

    p = sub.add_parser("eval-ter", help="corpus TER over aligned text files")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.set_defaults(func=cmd_eval_ter)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SentiparError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
