"""sentipar: build and evaluate sentiment-tagged English-Bengali parallel corpora."""

from .config import PipelineConfig, load_config
from .filtering import ParallelPair, filter_corpus, is_parallel
from .lexicon import (
    BENGALI,
    ENGLISH,
    NEG,
    POS,
    SentimentLexicon,
    TaggedSentence,
    TaggedToken,
    load_lexicon,
    merge,
    parse_tagged,
    strip_tags,
    tag_sentence,
    tag_set,
)
from .metrics import (
    EvalPair,
    RatingRecord,
    bleu,
    bleu_details,
    corpus_ter,
    load_eval_pairs,
    load_ratings,
    ter,
    ter_details,
)
from .pipeline import (
    CorpusRecord,
    RunReport,
    corpus_stats,
    run_pipeline,
    translate_missing,
)
from .providers import (
    CachingTranslator,
    DictionaryProvider,
    HttpProvider,
    RateLimiter,
    TranslationCache,
)
from .rules import (
    ComplexityClass,
    ConfusionMetrics,
    PhraseSeqRule,
    RuleSet,
    classify,
    confidence,
    evaluate,
    is_complex,
    is_compound,
    matches,
    mine_rules,
)
from .trees import ParseTree, parse_tree, phrase_sequence, pos_sequence, read_parse_file

__version__ = "0.1.0"

__all__ = [
    "BENGALI",
    "ENGLISH",
    "NEG",
    "POS",
    "CachingTranslator",
    "ComplexityClass",
    "ConfusionMetrics",
    "CorpusRecord",
    "DictionaryProvider",
    "EvalPair",
    "HttpProvider",
    "ParallelPair",
    "ParseTree",
    "PhraseSeqRule",
    "PipelineConfig",
    "RateLimiter",
    "RatingRecord",
    "RuleSet",
    "RunReport",
    "SentimentLexicon",
    "TaggedSentence",
    "TaggedToken",
    "TranslationCache",
    "bleu",
    "bleu_details",
    "classify",
    "confidence",
    "corpus_stats",
    "corpus_ter",
    "evaluate",
    "filter_corpus",
    "is_complex",
    "is_compound",
    "is_parallel",
    "load_config",
    "load_eval_pairs",
    "load_lexicon",
    "load_ratings",
    "matches",
    "merge",
    "mine_rules",
    "parse_tagged",
    "parse_tree",
    "phrase_sequence",
    "pos_sequence",
    "read_parse_file",
    "run_pipeline",
    "strip_tags",
    "tag_sentence",
    "tag_set",
    "ter",
    "ter_details",
    "translate_missing",
]
