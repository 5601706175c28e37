"""Per-post metadata: creation date, permalink, author.

All three extractors follow the same shape: collect candidate elements at
structurally analogous positions across the posts (keyed by their indexed
path relative to the post, or to an immediate sibling for dates), filter by
the field's plausibility rules, then pick the best-scoring candidate with
deterministic tie-breaking. Failures raise MetadataNotFound; callers treat
the field as absent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime
from urllib.parse import urldefrag, urljoin, urlsplit

from .datescan import find_date, parse_datetime_value
from .dom import NON_RENDERED_TAGS, Document, Node, NodePath, relative_path
from .errors import MetadataNotFound

__all__ = [
    "EPOCH_FLOOR",
    "DateCandidate",
    "LinkCandidate",
    "UserCandidate",
    "extract_dates",
    "extract_post_links",
    "extract_users",
]

# Dates before the web was opened to the public are implausible for forums.
EPOCH_FLOOR = datetime(1993, 4, 30)

# Class-attribute substrings that mark an element as user-related.
USER_CLASS_KEYWORDS = ("user", "member", "person", "profile")

# Path segments that mark a same-host link as a profile page.
PROFILE_SEGMENTS = frozenset(
    {"user", "users", "member", "members", "profile", "profiles", "person",
     "people"}
)

_TRAILING_NUMBER_RE = re.compile(r"(\d+)$")

_ANCHOR_RANK = {"self": 0, "prev": 1, "next": 2}
_DATE_SOURCE_RANK = {"datetime_attribute": 0, "parsed_text": 1}


@dataclass(frozen=True)
class DateCandidate:
    """Dates found at one structural position across the posts.

    ``xpath`` is relative to the ``anchor`` root: the post node itself or
    its immediate preceding/following element sibling (the vicinity a date
    stamp normally lives in). ``aligned`` has one slot per post, None where
    the position yielded nothing for that post.
    """

    xpath: NodePath
    anchor: str  # self | prev | next
    source: str  # datetime_attribute | parsed_text
    aligned: tuple[datetime | None, ...]

    @property
    def dates(self) -> tuple[datetime, ...]:
        return tuple(d for d in self.aligned if d is not None)


@dataclass(frozen=True)
class LinkCandidate:
    """Same-page link or anchor targets, exactly one per post."""

    xpath: NodePath
    urls: tuple[str, ...]
    kind: str  # href | anchor_name
    trailing_numbers: tuple[int, ...] | None


@dataclass(frozen=True)
class UserCandidate:
    """Author-name strings, exactly one per post."""

    xpath: NodePath
    names: tuple[str, ...]
    is_link: bool
    score: float


def _vicinity(post: Node) -> list[tuple[str, Node]]:
    roots = [("self", post)]
    prev = post.previous_element_sibling()
    if prev is not None:
        roots.append(("prev", prev))
    nxt = post.next_element_sibling()
    if nxt is not None:
        roots.append(("next", nxt))
    return roots


def extract_dates(doc: Document, post_nodes: list[Node],
                  now: datetime) -> DateCandidate:
    """Pick the per-post creation dates.

    Candidates come from ``datetime`` attributes and from date mentions in
    element text, searched in each post's subtree and its immediate element
    siblings. Dates before 1993-04-30 or after ``now`` are dropped; a
    candidate survives only when it covers at least ``n - 2`` posts (leading
    posts sometimes use a different layout). Chronologically monotonic
    candidates are preferred, then the most recent, then broader coverage,
    with deterministic tie-breaking after that.
    """
    if not post_nodes:
        raise MetadataNotFound("no post nodes")
    n = len(post_nodes)
    buckets: dict[tuple[str, str, str], dict[int, datetime]] = {}
    rel_paths: dict[tuple[str, str, str], NodePath] = {}

    for i, post in enumerate(post_nodes):
        for anchor, root in _vicinity(post):
            for el in root.iter_elements(skip=NON_RENDERED_TAGS):
                value = None
                source = ""
                raw = el.attrs.get("datetime")
                if raw:
                    value = parse_datetime_value(raw)
                    if value is not None:
                        source = "datetime_attribute"
                if value is None:
                    value = find_date(el.own_text())
                    if value is not None:
                        source = "parsed_text"
                if value is None:
                    continue
                rel = relative_path(root, el)
                key = (anchor, str(rel), source)
                rel_paths.setdefault(key, rel)
                buckets.setdefault(key, {}).setdefault(i, value)

    lower = max(1, n - 2)
    candidates: list[DateCandidate] = []
    for key, by_post in buckets.items():
        kept = {i: v for i, v in by_post.items() if EPOCH_FLOOR <= v <= now}
        if lower <= len(kept) <= n:
            anchor, _, source = key
            candidates.append(
                DateCandidate(
                    xpath=rel_paths[key],
                    anchor=anchor,
                    source=source,
                    aligned=tuple(kept.get(i) for i in range(n)),
                )
            )
    if not candidates:
        raise MetadataNotFound("no date candidate matched enough posts")

    def rank(c: DateCandidate):
        seq = c.dates
        ascending = all(a <= b for a, b in zip(seq, seq[1:]))
        descending = all(a >= b for a, b in zip(seq, seq[1:]))
        return (
            0 if (ascending or descending) else 1,
            datetime.max - max(seq),
            -len(seq),
            _DATE_SOURCE_RANK[c.source],
            _ANCHOR_RANK[c.anchor],
            c.xpath.depth,
            str(c.xpath),
        )

    return min(candidates, key=rank)


def extract_post_links(doc: Document, post_nodes: list[Node],
                       page_url: str) -> LinkCandidate:
    """Pick the per-post permalinks.

    Candidates are href links and named anchors inside each post whose
    target stays on the page's own URL, with exactly one match per post.
    Candidates whose URLs end in strictly increasing numbers are preferred;
    such a sequence is almost certainly a direct link to the post.
    """
    if not post_nodes:
        raise MetadataNotFound("no post nodes")
    n = len(post_nodes)
    page_base = urldefrag(page_url)[0]
    buckets: dict[tuple[str, str], dict[int, str]] = {}
    rel_paths: dict[tuple[str, str], NodePath] = {}

    for i, post in enumerate(post_nodes):
        for el in post.iter_elements(skip=NON_RENDERED_TAGS):
            if el.tag != "a":
                continue
            href = (el.attrs.get("href") or "").strip()
            if href:
                url = urljoin(page_url, href)
                if url.startswith(page_base):
                    rel = relative_path(post, el)
                    key = ("href", str(rel))
                    rel_paths.setdefault(key, rel)
                    buckets.setdefault(key, {}).setdefault(i, url)
            name = (el.attrs.get("name") or "").strip()
            if name:
                rel = relative_path(post, el)
                key = ("anchor_name", str(rel))
                rel_paths.setdefault(key, rel)
                buckets.setdefault(key, {}).setdefault(i, f"{page_base}#{name}")

    candidates: list[LinkCandidate] = []
    for key, by_post in buckets.items():
        if len(by_post) != n:
            continue
        kind, _ = key
        urls = tuple(by_post[i] for i in range(n))
        numbers: list[int] = []
        for url in urls:
            m = _TRAILING_NUMBER_RE.search(url)
            if m is None:
                numbers = []
                break
            numbers.append(int(m.group(1)))
        trailing = tuple(numbers) if numbers else None
        candidates.append(
            LinkCandidate(xpath=rel_paths[key], urls=urls, kind=kind,
                          trailing_numbers=trailing)
        )
    if not candidates:
        raise MetadataNotFound("no link candidate matched every post")

    def rank(c: LinkCandidate):
        increasing = (
            c.trailing_numbers is not None
            and all(a < b for a, b in zip(c.trailing_numbers,
                                          c.trailing_numbers[1:]))
        )
        return (
            0 if increasing else 1,
            0 if c.kind == "href" else 1,
            c.xpath.depth,
            str(c.xpath),
        )

    return min(candidates, key=rank)


def _caps_ok(name: str) -> bool:
    return 0 < len(name) < 100 and len(name.split()) < 4


def _same_page_or_profile(url: str, page_url: str,
                          allow_profile_links: bool) -> bool:
    if urldefrag(url)[0] == urldefrag(page_url)[0]:
        return True
    if not allow_profile_links:
        return False
    target, page = urlsplit(url), urlsplit(page_url)
    if target.netloc != page.netloc:
        return False
    return any(seg.lower() in PROFILE_SEGMENTS
               for seg in target.path.split("/") if seg)


def extract_users(doc: Document, post_nodes: list[Node],
                  post_link_xpath: NodePath | None = None, *,
                  class_weight: float = 2.0, variation_weight: float = 1.0,
                  link_weight: float = 1.0,
                  allow_profile_links: bool = True) -> UserCandidate:
    """Pick the per-post author names.

    Candidates are links other than the post link that stay on the page (or
    lead to a same-host profile page), and the text of span/strong/div/b
    elements, one per post. Names of 100+ characters or four+ words are
    rejected. User-ish class attributes and varying names raise a
    candidate's score, and links outrank plain text.
    """
    if not post_nodes:
        raise MetadataNotFound("no post nodes")
    n = len(post_nodes)
    page_url = doc.source_url
    exclude = str(post_link_xpath) if post_link_xpath is not None else None
    buckets: dict[tuple[bool, str], dict[int, str]] = {}
    rel_paths: dict[tuple[bool, str], NodePath] = {}
    class_hits: dict[tuple[bool, str], bool] = {}

    for i, post in enumerate(post_nodes):
        for el in post.iter_elements(skip=NON_RENDERED_TAGS):
            is_link = False
            name = ""
            if el.tag == "a" and (el.attrs.get("href") or "").strip():
                url = urljoin(page_url, el.attrs["href"].strip())
                if not _same_page_or_profile(url, page_url,
                                             allow_profile_links):
                    continue
                is_link = True
                name = el.all_text()
            elif el.tag in ("span", "strong", "b"):
                name = el.all_text()
            elif el.tag == "div":
                name = el.own_text()
            else:
                continue
            if not _caps_ok(name):
                continue
            rel = relative_path(post, el)
            key = (is_link, str(rel))
            if is_link and str(rel) == exclude:
                continue
            rel_paths.setdefault(key, rel)
            buckets.setdefault(key, {}).setdefault(i, name)
            hit = any(kw in (el.attrs.get("class") or "").lower()
                      for kw in USER_CLASS_KEYWORDS)
            class_hits[key] = class_hits.get(key, False) or hit

    candidates: list[UserCandidate] = []
    for key, by_post in buckets.items():
        if len(by_post) != n:
            continue
        is_link, _ = key
        names = tuple(by_post[i] for i in range(n))
        score = 0.0
        if class_hits.get(key):
            score += class_weight
        if len(set(names)) > 1:
            score += variation_weight
        if is_link:
            score += link_weight
        candidates.append(
            UserCandidate(xpath=rel_paths[key], names=names,
                          is_link=is_link, score=score)
        )
    if not candidates:
        raise MetadataNotFound("no user candidate matched every post")

    return min(candidates,
               key=lambda c: (-c.score, c.xpath.depth, str(c.xpath)))
