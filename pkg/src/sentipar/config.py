"""Pipeline configuration: a flat key = value text file.

Blank lines and ``#`` comments are ignored.  Unknown keys are errors so a
typo cannot silently disable a stage.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace

from .errors import ConfigError

_BOOL_WORDS = {
    "1": True, "true": True, "yes": True, "on": True,
    "0": False, "false": False, "no": False, "off": False,
}


def _parse_bool(key: str, value: str) -> bool:
    try:
        return _BOOL_WORDS[value.strip().lower()]
    except KeyError:
        raise ConfigError(f"{key}: expected a boolean, got {value!r}") from None


def _parse_lexicons(key: str, value: str) -> tuple[tuple[str, str], ...]:
    """Comma-separated ``path:format`` items, format in {labeled, scored}."""
    out = []
    for item in value.split(","):
        item = item.strip()
        if not item:
            continue
        path, sep, fmt = item.rpartition(":")
        if not sep or fmt not in ("labeled", "scored"):
            raise ConfigError(
                f"{key}: expected 'path:labeled' or 'path:scored', got {item!r}"
            )
        out.append((path, fmt))
    return tuple(out)


@dataclass
class PipelineConfig:
    # inputs
    source_file: str | None = None      # English sentences, one per line
    target_file: str | None = None      # pre-translated Bengali, aligned by line
    corpus_file: str | None = None      # alternative: merged en<TAB>bn TSV
    parses_file: str | None = None      # bracketed trees aligned by record id
    mining_parses_file: str | None = None  # trees of known simple sentences
    rules_file: str | None = None       # pre-mined rules (skips mining)
    lexicons_en: tuple[tuple[str, str], ...] = ()
    lexicons_bn: tuple[tuple[str, str], ...] = ()
    # translation provider
    provider: str = "mock"
    provider_dict: str | None = None
    provider_url: str | None = None
    provider_token: str | None = None
    provider_response_key: str = "translation"
    provider_rate_limit: float = 0.0
    provider_retries: int = 2
    cache_file: str | None = None
    # run
    output_dir: str = "out"
    seed: int = 0
    jobs: int = 1
    # stage toggles
    do_translate: bool = True
    do_classify: bool = True
    do_sentiment: bool = True

    def with_overrides(self, seed: int | None = None, jobs: int | None = None):
        cfg = self
        if seed is not None:
            cfg = replace(cfg, seed=seed)
        if jobs is not None:
            cfg = replace(cfg, jobs=jobs)
        return cfg

    def validate(self) -> None:
        """Check stage inputs exist before any work starts."""
        if self.corpus_file is None and self.source_file is None:
            raise ConfigError("need either corpus_file or source_file")
        for name in (
            "source_file", "target_file", "corpus_file", "parses_file",
            "mining_parses_file", "rules_file", "provider_dict",
        ):
            path = getattr(self, name)
            if path is not None and not os.path.exists(path):
                raise ConfigError(f"{name}: no such file: {path}")
        for name in ("lexicons_en", "lexicons_bn"):
            for path, _ in getattr(self, name):
                if not os.path.exists(path):
                    raise ConfigError(f"{name}: no such file: {path}")
        if self.do_classify and self.parses_file is None:
            raise ConfigError("classification stage needs parses_file")
        if self.do_classify and self.rules_file is None and self.mining_parses_file is None:
            raise ConfigError(
                "classification stage needs rules_file or mining_parses_file"
            )
        if self.do_sentiment and not (self.lexicons_en and self.lexicons_bn):
            raise ConfigError("sentiment stage needs lexicons_en and lexicons_bn")
        if self.provider not in ("mock", "http"):
            raise ConfigError(f"unknown provider {self.provider!r}")
        if self.do_translate and self.provider == "mock" and self.provider_dict is None:
            raise ConfigError("mock provider needs provider_dict")
        if self.do_translate and self.provider == "http" and self.provider_url is None:
            raise ConfigError("http provider needs provider_url")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")


_KEY_ALIASES = {
    "translate": "do_translate",
    "classify": "do_classify",
    "sentiment": "do_sentiment",
}


def parse_config_text(text: str, base_dir: str = ".") -> PipelineConfig:
    values: dict = {}
    field_types = {f.name: f for f in fields(PipelineConfig)}
    path_fields = {
        "source_file", "target_file", "corpus_file", "parses_file",
        "mining_parses_file", "rules_file", "provider_dict", "cache_file",
        "output_dir",
    }

    def resolve(p: str) -> str:
        return p if os.path.isabs(p) else os.path.join(base_dir, p)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"config line {lineno}: expected 'key = value'")
        key = key.strip()
        value = value.strip()
        name = _KEY_ALIASES.get(key, key)
        if name not in field_types:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        if name in ("lexicons_en", "lexicons_bn"):
            values[name] = tuple(
                (resolve(p), fmt) for p, fmt in _parse_lexicons(key, value)
            )
        elif name in path_fields:
            values[name] = resolve(value)
        elif name.startswith("do_"):
            values[name] = _parse_bool(key, value)
        elif name in ("seed", "jobs", "provider_retries"):
            try:
                values[name] = int(value)
            except ValueError:
                raise ConfigError(
                    f"config line {lineno}: {key} expects an integer"
                ) from None
        elif name == "provider_rate_limit":
            try:
                values[name] = float(value)
            except ValueError:
                raise ConfigError(
                    f"config line {lineno}: {key} expects a number"
                ) from None
        else:
            values[name] = value
    return PipelineConfig(**values)


def load_config(path) -> PipelineConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    return parse_config_text(text, base_dir=os.path.dirname(os.path.abspath(path)))
