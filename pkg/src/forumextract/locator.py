"""Locating the repeating post region of a forum page.

The approach rests on two observations: most of a forum page's text lives in
the posts, and the path to the posts matches multiple sibling nodes (one per
post). Every rendered line therefore proposes candidate paths (its origin
element generalized by dropping the terminal position index, plus the same
generalization applied up to three ancestor levels). A candidate is admitted
when it matches strictly more than ``min_post_count`` elements, scored by the
cosine similarity between its subtree text and the whole page text, vetoed
outright when its subtree contains blacklisted tags, and discounted when it
sits below one. The highest-scoring admitted candidate wins.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

from .dom import (
    Document,
    NodePath,
    RenderedPage,
    ancestors_blacklisted,
    count_matching,
    descendants_blacklisted,
    resolve,
    subtree_text,
)
from .errors import NoPostsFound, PathResolutionError

__all__ = [
    "DEFAULT_TAG_BLACKLIST",
    "LocatorConfig",
    "VsmVector",
    "CandidatePath",
    "tokenize",
    "build_vsm",
    "cosine_similarity",
    "score_xpath",
    "locate_post_path",
]

# Containers that clearly do not hold post content. Runtime-configurable via
# LocatorConfig.
DEFAULT_TAG_BLACKLIST = frozenset(
    {"option", "footer", "form", "head", "script", "style", "nav", "aside",
     "select", "button", "noscript"}
)

# How many ancestor levels of a line's origin also propose generalized
# candidates (posts are often grandparents of the text-bearing node).
ANCESTOR_LEVELS = 3

# Word characters without the underscore: splits on whitespace and punctuation.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercased tokens split on Unicode whitespace/punctuation boundaries.

    No stop-word removal and no stemming; the same tokenizer backs both the
    locator's term vectors and the evaluation token sets.
    """
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class LocatorConfig:
    min_post_count: int = 3
    tag_blacklist: frozenset[str] = DEFAULT_TAG_BLACKLIST
    ancestor_discount: float = 10.0

    def __post_init__(self) -> None:
        if self.min_post_count < 1:
            raise ValueError("min_post_count must be >= 1")
        if self.ancestor_discount < 1:
            raise ValueError("ancestor_discount must be >= 1")
        object.__setattr__(self, "tag_blacklist", frozenset(self.tag_blacklist))


class VsmVector:
    """Bag-of-words term-frequency vector."""

    __slots__ = ("weights", "_norm")

    def __init__(self, weights: Mapping[str, int]):
        self.weights: dict[str, int] = {t: c for t, c in weights.items() if c > 0}
        self._norm: float | None = None

    @property
    def norm(self) -> float:
        if self._norm is None:
            self._norm = math.sqrt(sum(c * c for c in self.weights.values()))
        return self._norm

    def __bool__(self) -> bool:
        return bool(self.weights)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VsmVector) and self.weights == other.weights

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"VsmVector({self.weights!r})"


def build_vsm(text: str) -> VsmVector:
    """Term-frequency vector of the tokenized text."""
    return VsmVector(Counter(tokenize(text)))


def cosine_similarity(a: VsmVector, b: VsmVector) -> float:
    """Cosine of two term vectors in [0, 1]; 0 when either is empty."""
    if not a or not b:
        return 0.0
    if a.weights == b.weights:
        return 1.0
    small, large = (a, b) if len(a.weights) <= len(b.weights) else (b, a)
    dot = sum(c * large.weights.get(t, 0) for t, c in small.weights.items())
    if dot == 0:
        return 0.0
    return min(1.0, dot / (a.norm * b.norm))


@dataclass(frozen=True)
class CandidatePath:
    """A generalized path with its text-coverage score and match count."""

    xpath: NodePath
    score: float
    element_count: int


def score_xpath(page: RenderedPage, path: NodePath, doc: Document,
                cfg: LocatorConfig) -> float:
    """Likelihood in [0, 1] that ``path`` addresses the post containers.

    Zero when the matched subtrees contain blacklisted tags; otherwise the
    cosine similarity between the page text and the subtree text, divided by
    ``ancestor_discount`` when a blacklisted ancestor is present.
    """
    if not resolve(doc, path):
        raise PathResolutionError(f"path matches nothing: {path}")
    if descendants_blacklisted(doc, path, cfg.tag_blacklist):
        return 0.0
    sim = cosine_similarity(build_vsm(page.full_text),
                            build_vsm(subtree_text(doc, path)))
    if ancestors_blacklisted(doc, path, cfg.tag_blacklist):
        sim /= cfg.ancestor_discount
    return sim


def _generalizations(origin: NodePath) -> list[NodePath]:
    """Candidate paths proposed by one line: the origin and up to three of
    its ancestors, each with the terminal index stripped."""
    out = [origin.strip_last_index()]
    current = origin
    for _ in range(ANCESTOR_LEVELS):
        if current.depth <= 2:  # stop at /html/body
            break
        current = current.parent()
        out.append(current.strip_last_index())
    return out


def locate_post_path(page: RenderedPage, doc: Document,
                     cfg: LocatorConfig | None = None) -> CandidatePath:
    """Select the forum-post path for a rendered page.

    Raises NoPostsFound when no candidate matches strictly more than
    ``min_post_count`` elements, which signals a page without a repeating
    post structure. Ties on score break by higher element count, then
    shorter path, then the lexicographic path string, so identical inputs
    always produce identical results.
    """
    if cfg is None:
        cfg = LocatorConfig()
    candidates: dict[str, NodePath] = {}
    for line in page.lines:
        for path in _generalizations(line.origin):
            candidates.setdefault(str(path), path)

    admitted: list[CandidatePath] = []
    for path in candidates.values():
        count = count_matching(doc, path)
        if count > cfg.min_post_count:
            admitted.append(
                CandidatePath(xpath=path,
                              score=score_xpath(page, path, doc, cfg),
                              element_count=count)
            )
    if not admitted:
        raise NoPostsFound(
            f"no candidate path matched more than {cfg.min_post_count} elements"
        )
    return min(
        admitted,
        key=lambda c: (-c.score, -c.element_count, c.xpath.depth, str(c.xpath)),
    )
