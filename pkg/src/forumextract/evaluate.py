"""Scoring extraction output against gold annotations.

Three metric families for post content: normalized Levenshtein distance,
Jaccard coefficient over token sets, and token-based precision/recall/F1.
Metadata fields (user, date, url) are scored positionally. Every family
reports micro averages (pooled counts for the set families, gold-length
weighting for Levenshtein) and macro averages (the arithmetic mean of
per-document scores).

Gold corpus layout: a directory of ``<name>.html`` pages, each paired with
``<name>.json`` shaped as::

    {"url": "...", "posts": [{"text": "...", "user": null,
                              "datetime": "2021-05-30T18:05:00+02:00",
                              "post_url": null}]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from .datescan import parse_iso8601
from .errors import CorpusEmptyError, MissingGoldError
from .locator import tokenize
from .pipeline import ExtractionResult

__all__ = [
    "FAMILIES",
    "TokenSet",
    "PairScore",
    "MetricReport",
    "GoldPost",
    "GoldDocument",
    "levenshtein_distance",
    "levenshtein_norm",
    "jaccard",
    "token_prf",
    "score_texts",
    "score_document",
    "score_metadata_values",
    "score_metadata",
    "aggregate",
    "load_gold_corpus",
]

FAMILIES = ("levenshtein", "jaccard", "token")
METADATA_FIELDS = ("user", "date", "url")


@dataclass(frozen=True)
class TokenSet:
    """Token set of a text plus the multiset size it came from."""

    tokens: frozenset[str]
    token_count: int

    @classmethod
    def from_text(cls, text: str) -> "TokenSet":
        toks = tokenize(text)
        return cls(tokens=frozenset(toks), token_count=len(toks))


@dataclass(frozen=True)
class PairScore:
    """Scores for one gold/extracted document pair.

    For the set families the integer fields hold |gold ∩ extracted|,
    |extracted| and |gold| token-set sizes (used for micro pooling); for
    the Levenshtein family they hold 0 and the character lengths, with the
    gold length acting as the micro weight.
    """

    precision: float
    recall: float
    f1: float
    intersection_size: int
    extracted_size: int
    gold_size: int


@dataclass(frozen=True)
class MetricReport:
    metric_family: str
    label: str
    micro: tuple[float, float, float]
    macro: tuple[float, float, float]
    per_document: tuple[PairScore, ...]


@dataclass(frozen=True)
class GoldPost:
    text: str
    user: str | None
    datetime: datetime | None
    post_url: str | None


@dataclass(frozen=True)
class GoldDocument:
    name: str
    url: str
    html_path: Path
    posts: tuple[GoldPost, ...]


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def levenshtein_distance(a: str, b: str) -> int:
    """Edit distance (insert/delete/substitute, unit costs)."""
    if a == b:
        return 0
    start = 0
    while start < len(a) and start < len(b) and a[start] == b[start]:
        start += 1
    end_a, end_b = len(a), len(b)
    while end_a > start and end_b > start and a[end_a - 1] == b[end_b - 1]:
        end_a -= 1
        end_b -= 1
    a, b = a[start:end_a], b[start:end_b]
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(b) > len(a):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        current = [i]
        append = current.append
        prev_row = previous
        for j, cb in enumerate(b, 1):
            append(min(prev_row[j] + 1, current[j - 1] + 1,
                       prev_row[j - 1] + (ca != cb)))
        previous = current
    return previous[-1]


def levenshtein_norm(gold: str, extracted: str) -> float:
    """Edit distance divided by the longer length; 0 when both empty."""
    longer = max(len(gold), len(extracted))
    if longer == 0:
        return 0.0
    return levenshtein_distance(gold, extracted) / longer


def jaccard(gold: TokenSet, extracted: TokenSet) -> float:
    """|∩| / |∪| of the token sets; 1 when both are empty."""
    union = gold.tokens | extracted.tokens
    if not union:
        return 1.0
    return len(gold.tokens & extracted.tokens) / len(union)


def token_prf(gold: TokenSet, extracted: TokenSet) -> PairScore:
    """Precision/recall/F1 over common tokens.

    Doubly-empty inputs count as a perfect match; an empty side against a
    non-empty one scores zero.
    """
    inter = len(gold.tokens & extracted.tokens)
    if not gold.tokens and not extracted.tokens:
        p = r = 1.0
    else:
        p = inter / len(extracted.tokens) if extracted.tokens else 0.0
        r = inter / len(gold.tokens) if gold.tokens else 0.0
    return PairScore(precision=p, recall=r, f1=_f1(p, r),
                     intersection_size=inter,
                     extracted_size=len(extracted.tokens),
                     gold_size=len(gold.tokens))


def _score_levenshtein(gold_texts: list[str],
                       extracted_texts: list[str]) -> PairScore:
    """Greedy highest-similarity matching of extracted posts to gold posts,
    similarity = 1 - levenshtein_norm, each post matchable once. Precision
    divides the matched similarity mass by the extracted count, recall by
    the gold count, so merged, split and boilerplate posts all cost."""
    pairs = [
        (1.0 - levenshtein_norm(g, e), gi, ei)
        for gi, g in enumerate(gold_texts)
        for ei, e in enumerate(extracted_texts)
    ]
    pairs.sort(key=lambda t: (-t[0], t[1], t[2]))
    used_gold: set[int] = set()
    used_extracted: set[int] = set()
    total = 0.0
    for sim, gi, ei in pairs:
        if gi in used_gold or ei in used_extracted:
            continue
        used_gold.add(gi)
        used_extracted.add(ei)
        total += sim
    p = total / len(extracted_texts) if extracted_texts else 0.0
    r = total / len(gold_texts) if gold_texts else 0.0
    return PairScore(precision=p, recall=r, f1=_f1(p, r),
                     intersection_size=0,
                     extracted_size=sum(len(t) for t in extracted_texts),
                     gold_size=sum(len(t) for t in gold_texts))


def score_texts(gold_texts: list[str], extracted_texts: list[str],
                family: str) -> PairScore:
    """Score one document's extracted post texts against the gold texts."""
    if family == "levenshtein":
        return _score_levenshtein(gold_texts, extracted_texts)
    gold = TokenSet.from_text("\n".join(gold_texts))
    extracted = TokenSet.from_text("\n".join(extracted_texts))
    if family == "jaccard":
        j = jaccard(gold, extracted)
        return PairScore(precision=j, recall=j, f1=j,
                         intersection_size=len(gold.tokens & extracted.tokens),
                         extracted_size=len(extracted.tokens),
                         gold_size=len(gold.tokens))
    if family == "token":
        return token_prf(gold, extracted)
    raise ValueError(f"unknown metric family: {family!r}")


def score_document(gold: GoldDocument, result: ExtractionResult,
                   family: str) -> PairScore:
    gold_texts = [p.text for p in gold.posts if p.text.strip()]
    if not gold_texts:
        raise MissingGoldError(f"{gold.name}: gold record has no post texts")
    return score_texts(gold_texts, [p.text for p in result.posts], family)


def _normalize_url(url: str) -> tuple[str, str]:
    base, frag = url.split("#", 1) if "#" in url else (url, "")
    return base, frag


def _values_match(field: str, gold_value, extracted_value) -> bool:
    if field == "user":
        return str(gold_value).strip().casefold() == \
            str(extracted_value).strip().casefold()
    if field == "date":
        g, e = gold_value, extracted_value
        return (g.year, g.month, g.day, g.hour, g.minute) == \
            (e.year, e.month, e.day, e.hour, e.minute)
    if field == "url":
        return _normalize_url(str(gold_value)) == \
            _normalize_url(str(extracted_value))
    raise ValueError(f"unknown metadata field: {field!r}")


def score_metadata_values(gold_values: list, extracted_values: list,
                          field: str) -> PairScore | None:
    """Positional true-positive scoring of one metadata field.

    Returns None when the document has neither gold nor extracted values;
    such vacuous documents are excluded from aggregation.
    """
    gold_count = sum(1 for v in gold_values if v is not None)
    extracted_count = sum(1 for v in extracted_values if v is not None)
    if gold_count == 0 and extracted_count == 0:
        return None
    tp = 0
    for g, e in zip(gold_values, extracted_values):
        if g is not None and e is not None and _values_match(field, g, e):
            tp += 1
    p = tp / extracted_count if extracted_count else 0.0
    r = tp / gold_count if gold_count else 0.0
    return PairScore(precision=p, recall=r, f1=_f1(p, r),
                     intersection_size=tp, extracted_size=extracted_count,
                     gold_size=gold_count)


def score_metadata(gold: GoldDocument, result: ExtractionResult,
                   field: str) -> PairScore | None:
    gold_attr = {"user": "user", "date": "datetime", "url": "post_url"}[field]
    extracted_attr = {"user": "user", "date": "date", "url": "url"}[field]
    return score_metadata_values(
        [getattr(p, gold_attr) for p in gold.posts],
        [getattr(p, extracted_attr) for p in result.posts],
        field,
    )


def aggregate(per_document: list[PairScore], family: str,
              label: str | None = None) -> MetricReport:
    """Fold per-document scores into micro and macro averages.

    Macro is the arithmetic mean of per-document precision/recall/F1. Micro
    pools counts for the set families (for token counts the pooled F1 equals
    the harmonic mean of pooled precision and recall) and weights document
    scores by gold character length for the Levenshtein family.
    """
    scores = list(per_document)
    count = len(scores)
    if count:
        macro = (
            sum(s.precision for s in scores) / count,
            sum(s.recall for s in scores) / count,
            sum(s.f1 for s in scores) / count,
        )
    else:
        macro = (0.0, 0.0, 0.0)

    if family == "levenshtein":
        weight = sum(s.gold_size for s in scores)
        if weight:
            micro = (
                sum(s.precision * s.gold_size for s in scores) / weight,
                sum(s.recall * s.gold_size for s in scores) / weight,
                sum(s.f1 * s.gold_size for s in scores) / weight,
            )
        else:
            micro = (0.0, 0.0, 0.0)
    elif family == "jaccard":
        inter = sum(s.intersection_size for s in scores)
        union = sum(s.extracted_size + s.gold_size - s.intersection_size
                    for s in scores)
        j = inter / union if union else (1.0 if count else 0.0)
        micro = (j, j, j)
    elif family == "token":
        inter = sum(s.intersection_size for s in scores)
        extracted = sum(s.extracted_size for s in scores)
        gold = sum(s.gold_size for s in scores)
        mp = inter / extracted if extracted else (1.0 if count and not gold else 0.0)
        mr = inter / gold if gold else (1.0 if count and not extracted else 0.0)
        mf1 = 2 * inter / (extracted + gold) if extracted + gold \
            else (1.0 if count else 0.0)
        micro = (mp, mr, mf1)
    else:
        raise ValueError(f"unknown metric family: {family!r}")

    return MetricReport(metric_family=family, label=label or family,
                        micro=micro, macro=macro,
                        per_document=tuple(scores))


def _load_gold_json(path: Path) -> tuple[str, tuple[GoldPost, ...]]:
    data = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError("top level must be an object")
    url = data.get("url")
    if not isinstance(url, str) or not url:
        raise ValueError("missing or invalid 'url'")
    raw_posts = data.get("posts")
    if not isinstance(raw_posts, list) or not raw_posts:
        raise ValueError("'posts' must be a non-empty list")
    posts: list[GoldPost] = []
    for i, raw in enumerate(raw_posts):
        if not isinstance(raw, dict):
            raise ValueError(f"posts[{i}] must be an object")
        text = raw.get("text")
        if not isinstance(text, str) or not text.strip():
            raise ValueError(f"posts[{i}].text must be a non-empty string")
        user = raw.get("user")
        if user is not None and not isinstance(user, str):
            raise ValueError(f"posts[{i}].user must be a string or null")
        raw_dt = raw.get("datetime")
        if raw_dt is not None and not isinstance(raw_dt, str):
            raise ValueError(f"posts[{i}].datetime must be a string or null")
        try:
            dt = parse_iso8601(raw_dt) if raw_dt is not None else None
        except ValueError as exc:
            raise ValueError(f"posts[{i}].datetime: {exc}") from exc
        post_url = raw.get("post_url")
        if post_url is not None and not isinstance(post_url, str):
            raise ValueError(f"posts[{i}].post_url must be a string or null")
        posts.append(GoldPost(text=text, user=user, datetime=dt,
                              post_url=post_url))
    return url, tuple(posts)


def load_gold_corpus(directory: str | Path) -> tuple[list[GoldDocument],
                                                     list[tuple[str, str]]]:
    """Load every ``<name>.html`` / ``<name>.json`` pair in a directory.

    Invalid files are reported in the second return value without aborting
    the load; CorpusEmptyError is raised when no valid pair exists.
    """
    root = Path(directory)
    errors: list[tuple[str, str]] = []
    documents: list[GoldDocument] = []
    html_files = sorted(root.glob("*.html")) if root.is_dir() else []
    for html_path in html_files:
        json_path = html_path.with_suffix(".json")
        if not json_path.exists():
            errors.append((html_path.name, "missing gold json"))
            continue
        try:
            url, posts = _load_gold_json(json_path)
        except (ValueError, OSError) as exc:
            errors.append((json_path.name, str(exc)))
            continue
        documents.append(GoldDocument(name=html_path.stem, url=url,
                                      html_path=html_path, posts=posts))
    if root.is_dir():
        for json_path in sorted(root.glob("*.json")):
            if not json_path.with_suffix(".html").exists():
                errors.append((json_path.name, "missing html page"))
    if not documents:
        raise CorpusEmptyError(f"no valid gold html/json pair in {root}")
    return documents, errors
