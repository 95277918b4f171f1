"""Corpus ingestion, canonical JSONL interchange, and split/fold planning.

The on-disk corpus is the PHEME directory layout
(``<root>/<event>/(rumours|non-rumours)/<thread-id>/source-tweet/<id>.json``,
Twitter-API JSON inside). Only source tweets are loaded; replies and
annotations are ignored. Everything downstream works on the canonical JSONL
format written by :func:`save_jsonl`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np


class DatasetError(Exception):
    """Base class for corpus and dataset failures."""


class CorpusStructureError(DatasetError):
    """The directory tree does not look like a PHEME corpus."""


class CorpusParseError(DatasetError):
    """A tweet file exists but cannot be parsed."""


class ValidationError(DatasetError):
    """Record-level constraint violation (duplicate id, bad label, ...)."""


class ClassLabel(Enum):
    """Binary tweet label. Non-rumour is the positive class in evaluation."""

    RUMOUR = "rumour"
    NON_RUMOUR = "non-rumour"

    @classmethod
    def from_wire(cls, value: str) -> "ClassLabel":
        for member in cls:
            if member.value == value:
                return member
        raise ValidationError(f"unknown label {value!r} (expected 'rumour' or 'non-rumour')")


@dataclass(frozen=True)
class UserMeta:
    """Author metadata carried by a tweet, counts clamped to be non-negative."""

    verified: bool = False
    has_description: bool = False
    has_url: bool = False
    followers_count: int = 0
    friends_count: int = 0
    statuses_count: int = 0

    def __post_init__(self) -> None:
        for name in ("followers_count", "friends_count", "statuses_count"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0")


@dataclass(frozen=True)
class Tweet:
    """One source tweet. ``created_at`` is UTC epoch seconds."""

    id: str
    text: str
    created_at: int = 0
    is_retweet: bool = False
    user: UserMeta = field(default_factory=UserMeta)
    hashtags: tuple[str, ...] = ()
    urls: tuple[str, ...] = ()
    user_mentions: tuple[str, ...] = ()
    label: ClassLabel | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValidationError("tweet id must be non-empty")
        # Lists arriving from JSON become tuples so tweets stay hashable/immutable.
        for name in ("hashtags", "urls", "user_mentions"):
            value = getattr(self, name)
            if not isinstance(value, tuple):
                object.__setattr__(self, name, tuple(value))


@dataclass
class LabeledDataset:
    """Ordered collection of labeled tweets with pairwise-distinct ids."""

    tweets: list[Tweet]
    name: str = "dataset"

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for tweet in self.tweets:
            if tweet.label is None:
                raise ValidationError(f"tweet {tweet.id} has no label")
            if tweet.id in seen:
                raise ValidationError(f"duplicate tweet id {tweet.id}")
            seen.add(tweet.id)

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self) -> Iterator[Tweet]:
        return iter(self.tweets)

    def ids(self) -> list[str]:
        return [t.id for t in self.tweets]

    def by_id(self, tweet_id: str) -> Tweet:
        try:
            return self._index[tweet_id]
        except AttributeError:
            self._index = {t.id: t for t in self.tweets}
            return self._index[tweet_id]

    def class_counts(self) -> dict[ClassLabel, int]:
        counts = {label: 0 for label in ClassLabel}
        for tweet in self.tweets:
            counts[tweet.label] += 1
        return counts


@dataclass(frozen=True)
class SplitResult:
    """Stratified train/test partition of a dataset's ids."""

    train_ids: frozenset[str]
    test_ids: frozenset[str]
    seed: int
    train_fraction: float


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of every id to one of k folds, sizes differing by at most 1."""

    k: int
    assignment: dict[str, int]

    def fold_ids(self, fold: int) -> list[str]:
        return [i for i, f in self.assignment.items() if f == fold]


# Twitter's classic timestamp format, e.g. "Wed Jan 07 11:06:08 +0000 2015".
_TWITTER_TIME_FORMAT = "%a %b %d %H:%M:%S %z %Y"


def _parse_created_at(raw: object) -> int:
    if isinstance(raw, (int, float)):
        return int(raw)
    if isinstance(raw, str):
        try:
            return int(datetime.strptime(raw, _TWITTER_TIME_FORMAT).timestamp())
        except ValueError as exc:
            raise ValidationError(f"unparseable created_at {raw!r}") from exc
    raise ValidationError(f"unparseable created_at {raw!r}")


def tweet_from_twitter_json(obj: dict, label: ClassLabel | None = None) -> Tweet:
    """Build a :class:`Tweet` from a Twitter-API JSON object.

    A source tweet counts as a retweet when the raw JSON carries a non-null
    ``retweeted_status`` or its text starts with ``"RT @"``.
    """
    user = obj.get("user") or {}
    text = obj.get("text") or ""
    entities = obj.get("entities") or {}
    description = user.get("description")
    return Tweet(
        id=str(obj.get("id_str") or obj.get("id") or ""),
        text=text,
        created_at=_parse_created_at(obj.get("created_at", 0)),
        is_retweet=bool(obj.get("retweeted_status")) or text.startswith("RT @"),
        user=UserMeta(
            verified=bool(user.get("verified")),
            has_description=bool(description and str(description).strip()),
            has_url=bool(user.get("url")),
            followers_count=max(0, int(user.get("followers_count") or 0)),
            friends_count=max(0, int(user.get("friends_count") or 0)),
            statuses_count=max(0, int(user.get("statuses_count") or 0)),
        ),
        hashtags=tuple(h.get("text", "") for h in entities.get("hashtags", [])),
        urls=tuple(u.get("expanded_url") or u.get("url") or "" for u in entities.get("urls", [])),
        user_mentions=tuple(m.get("screen_name", "") for m in entities.get("user_mentions", [])),
        label=label,
    )


_LABEL_DIRS = {"rumours": ClassLabel.RUMOUR, "non-rumours": ClassLabel.NON_RUMOUR}


def _load_source_tweet(thread_dir: Path, label: ClassLabel) -> Tweet:
    source_dir = thread_dir / "source-tweet"
    if not source_dir.is_dir():
        raise CorpusStructureError(f"{thread_dir} has no source-tweet directory")
    files = sorted(p for p in source_dir.iterdir() if p.suffix == ".json")
    if len(files) != 1:
        raise CorpusStructureError(
            f"{source_dir} must contain exactly one source tweet, found {len(files)}"
        )
    try:
        with open(files[0], encoding="utf-8") as fh:
            obj = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorpusParseError(f"malformed tweet file {files[0]}: {exc}") from exc
    return tweet_from_twitter_json(obj, label)


def load_pheme(root_path: str | Path) -> LabeledDataset:
    """Load all source tweets from a PHEME-style directory tree.

    Order is deterministic: events lexicographically, then tweet id within
    an event. Raises :class:`CorpusStructureError` when the tree has no
    event directories or a thread lacks exactly one source tweet.
    """
    root = Path(root_path)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus root {root} does not exist")
    tweets: list[Tweet] = []
    events = 0
    for event_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        label_dirs = [(event_dir / d, lab) for d, lab in _LABEL_DIRS.items() if (event_dir / d).is_dir()]
        if not label_dirs:
            continue
        events += 1
        event_tweets: list[Tweet] = []
        for label_dir, label in label_dirs:
            for thread_dir in sorted(p for p in label_dir.iterdir() if p.is_dir()):
                event_tweets.append(_load_source_tweet(thread_dir, label))
        event_tweets.sort(key=lambda t: t.id)
        tweets.extend(event_tweets)
    if events == 0:
        raise CorpusStructureError(f"no events found under {root}")
    return LabeledDataset(tweets, name=root.name)


# Canonical JSONL key order; load_jsonl ignores anything else.
_JSONL_KEYS = (
    "id", "text", "label", "created_at", "is_retweet",
    "user", "hashtags", "urls", "user_mentions",
)
_USER_KEYS = (
    "verified", "has_description", "has_url",
    "followers_count", "friends_count", "statuses_count",
)


def _tweet_to_record(tweet: Tweet) -> dict:
    return {
        "id": tweet.id,
        "text": tweet.text,
        "label": tweet.label.value,
        "created_at": tweet.created_at,
        "is_retweet": tweet.is_retweet,
        "user": {k: getattr(tweet.user, k) for k in _USER_KEYS},
        "hashtags": list(tweet.hashtags),
        "urls": list(tweet.urls),
        "user_mentions": list(tweet.user_mentions),
    }


def _tweet_from_record(obj: dict, lineno: int) -> Tweet:
    try:
        user_obj = obj.get("user") or {}
        return Tweet(
            id=str(obj["id"]),
            text=obj.get("text", ""),
            created_at=int(obj.get("created_at", 0)),
            is_retweet=bool(obj.get("is_retweet", False)),
            user=UserMeta(**{k: user_obj.get(k, UserMeta.__dataclass_fields__[k].default) for k in _USER_KEYS}),
            hashtags=tuple(obj.get("hashtags", [])),
            urls=tuple(obj.get("urls", [])),
            user_mentions=tuple(obj.get("user_mentions", [])),
            label=ClassLabel.from_wire(obj["label"]),
        )
    except KeyError as exc:
        raise ValidationError(f"line {lineno}: missing key {exc}") from exc


def load_jsonl(path: str | Path) -> LabeledDataset:
    """Read a canonical JSONL dataset, one tweet object per line."""
    tweets: list[Tweet] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusParseError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            tweets.append(_tweet_from_record(obj, lineno))
    return LabeledDataset(tweets, name=Path(path).stem)


def save_jsonl(dataset: LabeledDataset, path: str | Path) -> None:
    """Write the canonical JSONL form, keys in documented order, UTF-8, \\n endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for tweet in dataset:
            fh.write(json.dumps(_tweet_to_record(tweet), ensure_ascii=False))
            fh.write("\n")


def stratified_split(dataset: LabeledDataset, train_fraction: float, seed: int) -> SplitResult:
    """Per-class seeded shuffle; the first floor(fraction * |class|) ids train.

    Classes are processed in a fixed order (non-rumour first) so the result
    is fully determined by (dataset order, train_fraction, seed).
    """
    if not 0 < train_fraction <= 1:
        raise ValueError(f"train_fraction must be in (0, 1], got {train_fraction}")
    rng = np.random.default_rng(seed)
    train: set[str] = set()
    test: set[str] = set()
    for label in (ClassLabel.NON_RUMOUR, ClassLabel.RUMOUR):
        ids = [t.id for t in dataset if t.label is label]
        if not ids:
            raise ValueError(f"class {label.value} is empty; cannot stratify")
        order = rng.permutation(len(ids))
        n_train = math.floor(train_fraction * len(ids))
        shuffled = [ids[i] for i in order]
        train.update(shuffled[:n_train])
        test.update(shuffled[n_train:])
    return SplitResult(
        train_ids=frozenset(train),
        test_ids=frozenset(test),
        seed=seed,
        train_fraction=train_fraction,
    )


def make_folds(ids: Sequence[str], k: int, seed: int) -> FoldPlan:
    """Seeded shuffle then round-robin assignment into k folds."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > len(ids):
        raise ValueError(f"k={k} exceeds the number of ids ({len(ids)})")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(ids))
    assignment = {ids[idx]: pos % k for pos, idx in enumerate(order)}
    return FoldPlan(k=k, assignment=assignment)


def subset(dataset: LabeledDataset, ids: Iterable[str], name: str | None = None) -> LabeledDataset:
    """Dataset restricted to ``ids``, preserving the original order."""
    wanted = set(ids)
    picked = [t for t in dataset if t.id in wanted]
    return LabeledDataset(picked, name=name or dataset.name)
