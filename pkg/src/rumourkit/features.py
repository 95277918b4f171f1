"""The 39 hand-crafted integer features computed from a tweet.

Slots 0-8 come from tweet/user metadata ("context"), slots 9-38 from the
text itself ("content"). The exact ordering is frozen under
:data:`SCHEMA_ID`; anything that persists vectors records that id.

Word-level matching uses whitespace tokenization with leading/trailing
punctuation stripped and case folded; emoticons are matched case-sensitively
as raw substrings. Hashtags, URLs and mentions come from entity metadata
when the tweet carries any, otherwise from a regex sweep over the text.
"""

from __future__ import annotations

import logging
import math
import re
import string
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from urllib.parse import urlparse

import numpy as np

from .dataset import LabeledDataset, Tweet

log = logging.getLogger(__name__)

SCHEMA_ID = "f39.v1"
N_FEATURES = 39

FEATURE_NAMES = (
    # context
    "verified", "has_description", "has_url", "followers_count", "friends_count",
    "followers_over_500", "posted_on_weekday", "statuses_count", "is_retweet",
    # content
    "n_hashtags", "n_words", "n_chars", "has_top_domain", "has_url_in_text",
    "n_urls", "mentions_news_agency", "n_user_mentions", "has_stock_symbol",
    "has_digits", "mentions_selected_user", "n_uppercase_chars",
    "n_question_marks", "n_exclamation_marks", "has_multi_punct",
    "n_smile_emoticons", "n_frown_emoticons", "n_positive_words",
    "n_negative_words", "sentiment_score", "n_first_pronouns",
    "n_second_pronouns", "n_third_pronouns", "n_temporal_refs",
    "lexical_density_pct", "n_slang_terms", "n_intensifiers",
    "has_repeated_chars", "has_all_caps_word", "starts_capitalised",
)

# Slots constrained to {0,1}; slot 28 (sentiment score) may go negative,
# every other slot is a count >= 0.
BOOLEAN_SLOTS = frozenset({0, 1, 2, 5, 8, 12, 13, 15, 17, 18, 19, 23, 36, 37, 38})
SENTIMENT_SLOT = 28


class LexiconError(Exception):
    """A lexicon file is missing or malformed."""


_WORD_SET_FILES = {
    "positive_words": "positive_words.txt",
    "negative_words": "negative_words.txt",
    "first_pronouns": "first_pronouns.txt",
    "second_pronouns": "second_pronouns.txt",
    "third_pronouns": "third_pronouns.txt",
    "temporal_refs": "temporal_refs.txt",
    "intensifiers": "intensifiers.txt",
    "slang_terms": "slang_terms.txt",
    "news_agencies": "news_agencies.txt",
    "selected_users": "selected_users.txt",
    "top_domains": "top_domains.txt",
    "stop_words": "stop_words.txt",
}
_EMOTICON_FILE = "emoticons.txt"


@dataclass(frozen=True)
class Lexicons:
    """Word lists and emoticon patterns backing the content features."""

    positive_words: frozenset[str]
    negative_words: frozenset[str]
    first_pronouns: frozenset[str]
    second_pronouns: frozenset[str]
    third_pronouns: frozenset[str]
    temporal_refs: frozenset[str]
    intensifiers: frozenset[str]
    slang_terms: frozenset[str]
    news_agencies: frozenset[str]
    selected_users: frozenset[str]
    top_domains: frozenset[str]
    stop_words: frozenset[str]
    smile_patterns: tuple[str, ...]
    frown_patterns: tuple[str, ...]


def _read_word_set(path: Path) -> frozenset[str]:
    entries = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        entries.add(line.lower())
    return frozenset(entries)


def _read_emoticons(path: Path) -> tuple[tuple[str, ...], tuple[str, ...]]:
    sections: dict[str, list[str]] = {"smile": [], "frown": []}
    current: list[str] | None = None
    for line in path.read_text(encoding="utf-8").splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped == "[smile]":
            current = sections["smile"]
        elif stripped == "[frown]":
            current = sections["frown"]
        elif current is None:
            raise LexiconError(f"{path}: entry {stripped!r} before any [smile]/[frown] section")
        else:
            current.append(stripped)
    if not sections["smile"] and not sections["frown"]:
        raise LexiconError(f"{path}: no [smile]/[frown] sections found")
    return tuple(sections["smile"]), tuple(sections["frown"])


def load_lexicons(directory: str | Path) -> Lexicons:
    """Load all lexicon files from ``directory``.

    Missing files raise :class:`LexiconError` naming the file; an empty
    lexicon is allowed but logged as a warning.
    """
    directory = Path(directory)
    fields: dict[str, object] = {}
    for name, filename in _WORD_SET_FILES.items():
        path = directory / filename
        if not path.is_file():
            raise LexiconError(f"missing lexicon file {path}")
        words = _read_word_set(path)
        if not words:
            log.warning("lexicon %s is empty", path)
        fields[name] = words
    emo_path = directory / _EMOTICON_FILE
    if not emo_path.is_file():
        raise LexiconError(f"missing lexicon file {emo_path}")
    smiles, frowns = _read_emoticons(emo_path)
    return Lexicons(smile_patterns=smiles, frown_patterns=frowns, **fields)


def default_lexicon_dir() -> Path:
    return Path(resources.files("rumourkit").joinpath("data", "lexicons"))


def default_lexicons() -> Lexicons:
    return load_lexicons(default_lexicon_dir())


@dataclass(frozen=True)
class FeatureVector:
    """The 39 integers for one tweet, in :data:`FEATURE_NAMES` order."""

    values: np.ndarray
    schema_id: str = SCHEMA_ID

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.int64)
        if arr.shape != (N_FEATURES,):
            raise ValueError(f"feature vector must have {N_FEATURES} slots, got {arr.shape}")
        for slot in BOOLEAN_SLOTS:
            if arr[slot] not in (0, 1):
                raise ValueError(f"slot {slot} ({FEATURE_NAMES[slot]}) must be 0/1, got {arr[slot]}")
        for slot in range(N_FEATURES):
            if slot != SENTIMENT_SLOT and slot not in BOOLEAN_SLOTS and arr[slot] < 0:
                raise ValueError(f"slot {slot} ({FEATURE_NAMES[slot]}) must be >= 0, got {arr[slot]}")
        object.__setattr__(self, "values", arr)

    def __getitem__(self, slot: int) -> int:
        return int(self.values[slot])

    def __len__(self) -> int:
        return N_FEATURES


_HASHTAG_RE = re.compile(r"#(\w+)")
_URL_RE = re.compile(r"https?://\S+")
_MENTION_RE = re.compile(r"@(\w+)")
_CASHTAG_RE = re.compile(r"\$[A-Za-z]{1,6}(?![A-Za-z])")
_MULTI_PUNCT_RE = re.compile(r"[?!][?!]")
_REPEAT_RE = re.compile(r"(.)\1\1")

# string.punctuation plus common typographic variants; stripped from token
# edges only, so contractions keep their apostrophes.
_STRIP_CHARS = string.punctuation + "“”‘’«»…–—´`"


def _tokens(text: str) -> list[str]:
    return text.split()


def _clean(token: str) -> str:
    return token.strip(_STRIP_CHARS).lower()


def _entity_or_regex(entities: tuple[str, ...], pattern: re.Pattern, text: str) -> list[str]:
    if entities:
        return list(entities)
    return pattern.findall(text)


def _url_host(url: str) -> str:
    parsed = urlparse(url if "//" in url else "//" + url)
    host = (parsed.netloc or "").lower()
    if "@" in host:
        host = host.rsplit("@", 1)[1]
    host = host.split(":")[0]
    return host.removeprefix("www.")


def _matches_domain(host: str, domains: frozenset[str]) -> bool:
    return bool(host) and any(host == d or host.endswith("." + d) for d in domains)


def extract_context_features(tweet: Tweet) -> np.ndarray:
    """Slots 0-8, computed from tweet/user metadata alone.

    The weekday indicator is evaluated in UTC (Monday-Friday -> 1).
    """
    weekday = datetime.fromtimestamp(tweet.created_at, tz=timezone.utc).weekday()
    return np.array(
        [
            int(tweet.user.verified),
            int(tweet.user.has_description),
            int(tweet.user.has_url),
            tweet.user.followers_count,
            tweet.user.friends_count,
            int(tweet.user.followers_count > 500),
            int(weekday < 5),
            tweet.user.statuses_count,
            int(tweet.is_retweet),
        ],
        dtype=np.int64,
    )


def extract_content_features(tweet: Tweet, lexicons: Lexicons) -> np.ndarray:
    """Slots 9-38, computed from the text (plus entity metadata for 9/12-16/19)."""
    text = tweet.text
    raw_tokens = _tokens(text)
    cleaned = [c for c in (_clean(t) for t in raw_tokens) if c]

    hashtags = _entity_or_regex(tweet.hashtags, _HASHTAG_RE, text)
    urls = _entity_or_regex(tweet.urls, _URL_RE, text)
    mentions = [m.lower() for m in _entity_or_regex(tweet.user_mentions, _MENTION_RE, text)]

    def count_in(lexicon: frozenset[str]) -> int:
        return sum(1 for token in cleaned if token in lexicon)

    n_positive = count_in(lexicons.positive_words)
    n_negative = count_in(lexicons.negative_words)
    n_words = len(raw_tokens)
    content_words = sum(1 for token in cleaned if token not in lexicons.stop_words)
    # round half away from zero; the ratio is never negative
    density = math.floor(100 * content_words / max(1, n_words) + 0.5)

    mentions_news = bool(
        set(mentions) & lexicons.news_agencies or set(cleaned) & lexicons.news_agencies
    )
    has_top_domain = any(_matches_domain(_url_host(u), lexicons.top_domains) for u in urls)
    first_alpha = next((ch for ch in text if ch.isalpha()), "")

    stripped_tokens = [t.strip(_STRIP_CHARS) for t in raw_tokens]
    has_caps_word = any(len(t) >= 2 and t.isalpha() and t.isupper() for t in stripped_tokens)

    return np.array(
        [
            len(hashtags),                                            # 9
            n_words,                                                  # 10
            len(text),                                                # 11
            int(has_top_domain),                                      # 12
            int(len(urls) > 0),                                       # 13
            len(urls),                                                # 14
            int(mentions_news),                                       # 15
            len(mentions),                                            # 16
            int(bool(_CASHTAG_RE.search(text))),                      # 17
            int(any(ch.isdigit() for ch in text)),                    # 18
            int(bool(set(mentions) & lexicons.selected_users)),       # 19
            sum(1 for ch in text if ch.isupper()),                    # 20
            text.count("?"),                                          # 21
            text.count("!"),                                          # 22
            int(bool(_MULTI_PUNCT_RE.search(text))),                  # 23
            sum(text.count(p) for p in lexicons.smile_patterns),      # 24
            sum(text.count(p) for p in lexicons.frown_patterns),      # 25
            n_positive,                                               # 26
            n_negative,                                               # 27
            n_positive - n_negative,                                  # 28
            count_in(lexicons.first_pronouns),                        # 29
            count_in(lexicons.second_pronouns),                       # 30
            count_in(lexicons.third_pronouns),                        # 31
            count_in(lexicons.temporal_refs),                         # 32
            density,                                                  # 33
            count_in(lexicons.slang_terms),                           # 34
            count_in(lexicons.intensifiers),                          # 35
            int(bool(_REPEAT_RE.search(text))),                       # 36
            int(has_caps_word),                                       # 37
            int(bool(first_alpha) and first_alpha.isupper()),         # 38
        ],
        dtype=np.int64,
    )


def extract_all(tweet: Tweet, lexicons: Lexicons) -> FeatureVector:
    """Context features followed by content features, as one 39-slot vector."""
    values = np.concatenate(
        [extract_context_features(tweet), extract_content_features(tweet, lexicons)]
    )
    return FeatureVector(values=values)


def feature_matrix(dataset: LabeledDataset, lexicons: Lexicons) -> np.ndarray:
    """(n_tweets, 39) int64 matrix in dataset order."""
    return np.stack([extract_all(t, lexicons).values for t in dataset])


def write_feature_csv(dataset: LabeledDataset, lexicons: Lexicons, path: str | Path) -> None:
    """Feature matrix export: header ``id,f00..f38,label``, one row per tweet."""
    header = "id," + ",".join(f"f{i:02d}" for i in range(N_FEATURES)) + ",label"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for tweet in dataset:
            vec = extract_all(tweet, lexicons)
            fh.write(f"{tweet.id}," + ",".join(str(v) for v in vec.values) + f",{tweet.label.value}\n")
