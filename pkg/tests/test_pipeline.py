import json
import os
from dataclasses import replace

import pytest

from sentipar.errors import (
    ConfigError,
    MalformedLineError,
    PipelineError,
    ProviderError,
)
from sentipar.config import PipelineConfig, parse_config_text
from sentipar.pipeline import (
    CorpusRecord,
    corpus_stats,
    ingest_lines,
    read_corpus,
    read_tagged_corpus,
    run_pipeline,
    translate_missing,
    write_corpus,
)


class FailingProvider:
    def translate(self, text):
        raise ProviderError("nope")


class TestIngest:
    def test_record_ids_are_line_numbers(self):
        records = ingest_lines(["a .\n", "b .\n"], ["ক ।\n", "খ ।\n"])
        assert [(r.record_id, r.source_text, r.target_text) for r in records] == [
            (1, "a .", "ক ।"),
            (2, "b .", "খ ।"),
        ]

    def test_empty_target_line_means_missing(self):
        records = ingest_lines(["a .\n"], ["\n"])
        assert records[0].target_text is None

    def test_backslash_rejected(self):
        with pytest.raises(MalformedLineError, match="backslash"):
            ingest_lines(["bad \\POS text\n"])

    def test_tab_rejected(self):
        with pytest.raises(MalformedLineError, match="tab"):
            ingest_lines(["a\tb\n"])

    def test_length_mismatch(self):
        with pytest.raises(MalformedLineError):
            ingest_lines(["a\n", "b\n"], ["x\n"])


class TestCorpusFiles:
    def test_round_trip(self, tmp_path):
        records = [CorpusRecord(1, "a .", "ক ।"), CorpusRecord(2, "b .", None)]
        path = tmp_path / "corpus.tsv"
        write_corpus(records, path)
        loaded = read_corpus(path)
        assert loaded[0].target_text == "ক ।"
        assert loaded[1].target_text is None

    def test_three_fields_rejected(self, tmp_path):
        path = tmp_path / "corpus.tsv"
        path.write_text("a\tb\tc\n", encoding="utf-8")
        with pytest.raises(MalformedLineError, match="line 1"):
            read_corpus(path)

    def test_empty_source_rejected(self, tmp_path):
        path = tmp_path / "corpus.tsv"
        path.write_text("\tb\n", encoding="utf-8")
        with pytest.raises(MalformedLineError):
            read_corpus(path)


class TestTranslateMissing:
    def test_passthrough(self):
        records = [CorpusRecord(1, "a", "ক")]
        out, failures = translate_missing(records, FailingProvider())
        assert out == records and failures == []

    def test_fills_missing(self):
        class Upper:
            def translate(self, text):
                return text.upper()

        records = [CorpusRecord(1, "a", None), CorpusRecord(2, "b", "খ")]
        out, failures = translate_missing(records, Upper())
        assert out[0].target_text == "A"
        assert out[1].target_text == "খ"
        assert failures == []

    def test_all_failures_flagged(self):
        records = [CorpusRecord(i, f"s{i}", None) for i in range(1, 4)]
        out, failures = translate_missing(records, FailingProvider())
        assert len(failures) == 3
        assert all(r.failed for r in out)
        assert all(r.target_text is None for r in out)


class TestRunPipeline:
    def test_fixture_counts(self, fixture_config):
        report = run_pipeline(fixture_config())
        assert report.ingested == 10
        assert report.translation == {
            "passthrough": 9,
            "translated": 1,
            "failed": 0,
        }
        assert report.classification == {
            "Simple": 4,
            "Complex": 2,
            "Compound": 2,
            "Untagged": 2,
        }
        assert sum(report.classification.values()) == 10
        assert report.filter["kept"] + report.filter["dropped"] == 10
        assert report.filter["by_rule"] == {
            "R1": 1, "R2": 0, "R3": 0, "R4": 0, "R5": 1,
        }
        assert report.tagging["coverage"] == pytest.approx(0.3)
        assert report.splits == {
            "general": 10,
            "simple": 4,
            "others": 4,
            "general.tagged": 2,
            "simple.tagged": 2,
            "others.tagged": 0,
        }

    def test_fixture_artifacts(self, fixture_config):
        config = fixture_config()
        run_pipeline(config)
        out = lambda name: os.path.join(config.output_dir, name)
        kept = open(out("kept.tsv"), encoding="utf-8").read().splitlines()
        assert kept == [
            "The tourists admired\\POS the paintings .\t"
            "পর্যটকরা পেইন্টিংসকে প্রশংসিত\\POS করেছেন ।",
            "The enemy\\NEG soldiers submitted to us .\t"
            "শত্রু\\POS\\NEG সৈন্য আমাদের জমা\\POS\\NEG দেওয়া ।",
        ]
        ids = open(out("kept.tsv.ids.tsv"), encoding="utf-8").read().split()
        assert ids == ["7", "8"]
        # record 10 was translated by the mock provider
        corpus = open(out("corpus.tsv"), encoding="utf-8").read().splitlines()
        assert corpus[9] == "Hello friends .\tহ্যালো বন্ধুরা ।"
        rules = open(out("rules.tsv"), encoding="utf-8").read().splitlines()
        assert rules == ["NP* VP\t3\t75.00", "NP VP PP\t1\t25.00"]

    def test_splits_are_subsets_of_general(self, fixture_config):
        config = fixture_config()
        run_pipeline(config)

        def ids(name):
            path = os.path.join(config.output_dir, name + ".ids.tsv")
            return set(open(path, encoding="utf-8").read().split())

        assert ids("simple.tsv") <= ids("general.tsv")
        assert ids("others.tsv") <= ids("general.tsv")
        assert not ids("simple.tsv") & ids("others.tsv")
        assert ids("simple.tagged.tsv") <= ids("general.tagged.tsv")
        assert ids("others.tagged.tsv") <= ids("general.tagged.tsv")

    def test_deterministic_across_runs(self, fixture_config):
        first = fixture_config("run1", seed=7)
        second = fixture_config("run2", seed=7)
        run_pipeline(first)
        run_pipeline(second)
        names = sorted(os.listdir(first.output_dir))
        assert names == sorted(os.listdir(second.output_dir))
        for name in names:
            a = open(os.path.join(first.output_dir, name), "rb").read()
            b = open(os.path.join(second.output_dir, name), "rb").read()
            assert a == b, f"{name} differs between identical runs"

    def test_sentiment_toggle_off(self, fixture_config):
        config = fixture_config(do_sentiment=False)
        report = run_pipeline(config)
        assert report.splits == {"general": 10, "simple": 4, "others": 4}
        assert not os.path.exists(os.path.join(config.output_dir, "tagged.tsv"))

    def test_empty_corpus_reports_zeros(self, fixture_config, tmp_path):
        empty = tmp_path / "empty.txt"
        empty.write_text("", encoding="utf-8")
        config = fixture_config(
            "empty_out",
            source_file=str(empty),
            target_file=None,
            parses_file=str(empty),
        )
        report = run_pipeline(config)
        assert report.ingested == 0
        assert report.splits["general"] == 0

    def test_all_failed_translations_abort(self, fixture_config, tmp_path):
        empty_dict = tmp_path / "empty_dict.tsv"
        empty_dict.write_text("", encoding="utf-8")
        source = tmp_path / "solo.txt"
        source.write_text("untranslatable .\n", encoding="utf-8")
        config = fixture_config(
            "failed_out",
            source_file=str(source),
            target_file=None,
            provider_dict=str(empty_dict),
            do_classify=False,
            do_sentiment=False,
        )
        with pytest.raises(PipelineError):
            run_pipeline(config)

    def test_missing_artifact_is_config_error(self, fixture_config):
        config = fixture_config(parses_file="/nonexistent/parses.txt")
        with pytest.raises(ConfigError, match="parses_file"):
            run_pipeline(config)

    def test_parallel_jobs_keep_output_order(self, fixture_config):
        serial = fixture_config("serial", jobs=1)
        threaded = fixture_config("threaded", jobs=4)
        run_pipeline(serial)
        run_pipeline(threaded)
        for name in sorted(os.listdir(serial.output_dir)):
            a = open(os.path.join(serial.output_dir, name), "rb").read()
            b = open(os.path.join(threaded.output_dir, name), "rb").read()
            assert a == b, f"{name} differs between jobs=1 and jobs=4"

    def test_rerun_uses_translation_cache(self, fixture_config, tmp_path):
        cache = tmp_path / "shared_cache.json"
        first = fixture_config("cached1", cache_file=str(cache))
        run_pipeline(first)
        assert cache.exists()
        # Second run: empty the mock dictionary; only the cache can answer.
        empty_dict = tmp_path / "empty_dict.tsv"
        empty_dict.write_text("", encoding="utf-8")
        second = fixture_config(
            "cached2", cache_file=str(cache), provider_dict=str(empty_dict)
        )
        report = run_pipeline(second)
        assert report.translation["failed"] == 0


class TestConfigParsing:
    def test_flat_key_value(self):
        config = parse_config_text(
            "corpus_file = corpus.tsv\nseed = 3\nsentiment = off\n",
            base_dir="/tmp",
        )
        assert config.corpus_file == "/tmp/corpus.tsv"
        assert config.seed == 3
        assert config.do_sentiment is False

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config_text("bogus = 1\n")

    def test_missing_equals(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_config_text("just some words\n")

    def test_validation_needs_input(self):
        with pytest.raises(ConfigError):
            PipelineConfig().validate()


class TestCorpusStats:
    def test_counts_lines(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("a\tx\nb\ty\n", encoding="utf-8")
        assert corpus_stats(path).records == 2

    def test_tag_coverage(self, tmp_path):
        path = tmp_path / "c.tsv"
        lines = [
            "good\\POS day\tভালো\\POS দিন",
            "bad\\NEG day\tদিন",
            "ok day\tভালো\\POS দিন",
            "plain\tসরল",
            "flat\tসমতল",
        ]
        path.write_text("".join(l + "\n" for l in lines), encoding="utf-8")
        stats = corpus_stats(path)
        assert stats.records == 5
        assert stats.tag_coverage == pytest.approx(0.6)
        assert stats.by_rule["R1"] == 1

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("a\tb\nx\ty\tz\n", encoding="utf-8")
        with pytest.raises(MalformedLineError, match="line 2"):
            corpus_stats(path)

    def test_class_counts(self, tmp_path):
        corpus = tmp_path / "c.tsv"
        corpus.write_text("a\tx\n", encoding="utf-8")
        classes = tmp_path / "classes.tsv"
        classes.write_text("1\tSimple\n2\tComplex\n", encoding="utf-8")
        stats = corpus_stats(corpus, classes_path=classes)
        assert stats.by_class == {"Simple": 1, "Complex": 1}


def test_read_tagged_corpus_gaps(tmp_path):
    path = tmp_path / "tagged.tsv"
    path.write_text("a\tx\n\nb\\POS\ty\n", encoding="utf-8")
    pairs = read_tagged_corpus(path)
    assert sorted(pairs) == [1, 3]
    assert pairs[3][0].tokens[0].tags == ("POS",)


def test_report_json_written(fixture_config):
    config = fixture_config()
    report = run_pipeline(config)
    with open(os.path.join(config.output_dir, "report.json"), encoding="utf-8") as fh:
        on_disk = json.load(fh)
    assert on_disk == report.to_dict()
    assert on_disk["assumptions"]
