"""End-to-end extraction: parse, render, locate, extract posts and metadata.

Metadata extraction failures degrade to absent fields plus a structured
diagnostic; they never change the extracted posts or fail the run. The
reference timestamp ``now`` is always an explicit input so runs are
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from .dom import (
    Document,
    Node,
    NodePath,
    element_text,
    parse_html,
    render_text,
    resolve,
)
from .errors import MetadataNotFound, NoPostsFound
from .locator import LocatorConfig, locate_post_path
from .metadata import extract_dates, extract_post_links, extract_users

__all__ = ["ForumPost", "Diagnostic", "ExtractionResult", "extract"]


@dataclass(frozen=True)
class ForumPost:
    """One extracted post in document order."""

    index: int
    text: str
    user: str | None = None
    date: datetime | None = None
    url: str | None = None


@dataclass(frozen=True)
class Diagnostic:
    stage: str
    message: str


@dataclass(frozen=True)
class ExtractionResult:
    posts: tuple[ForumPost, ...]
    post_xpath: NodePath
    date_xpath: NodePath | None
    user_xpath: NodePath | None
    link_xpath: NodePath | None
    diagnostics: tuple[Diagnostic, ...]


def extract(html: bytes | str, page_url: str,
            cfg: LocatorConfig | None = None, *,
            now: datetime) -> ExtractionResult:
    """Extract the posts of a forum page plus per-post metadata.

    Raises NoPostsFound when the page has no repeating post structure;
    parse/URL errors propagate from the DOM layer.
    """
    if cfg is None:
        cfg = LocatorConfig()
    doc = parse_html(html, page_url)
    page = render_text(doc)
    winner = locate_post_path(page, doc, cfg)

    diagnostics: list[Diagnostic] = []
    nodes: list[Node] = []
    texts: list[str] = []
    for node in resolve(doc, winner.xpath):
        text = element_text(node)
        if text:
            nodes.append(node)
            texts.append(text)
        else:
            diagnostics.append(
                Diagnostic("posts", f"dropped empty node under {winner.xpath}")
            )
    if not nodes:
        raise NoPostsFound(f"nodes matching {winner.xpath} contain no text")
    n = len(nodes)

    dates: list[datetime | None] = [None] * n
    date_xpath: NodePath | None = None
    try:
        date_winner = extract_dates(doc, nodes, now)
        dates = list(date_winner.aligned)
        date_xpath = date_winner.xpath
    except MetadataNotFound as exc:
        diagnostics.append(Diagnostic("dates", str(exc)))
    except Exception as exc:  # degrade, never fail the extraction
        diagnostics.append(Diagnostic("dates", f"{type(exc).__name__}: {exc}"))

    urls: list[str | None] = [None] * n
    link_xpath: NodePath | None = None
    try:
        link_winner = extract_post_links(doc, nodes, page_url)
        urls = list(link_winner.urls)
        link_xpath = link_winner.xpath
    except MetadataNotFound as exc:
        diagnostics.append(Diagnostic("links", str(exc)))
    except Exception as exc:
        diagnostics.append(Diagnostic("links", f"{type(exc).__name__}: {exc}"))

    users: list[str | None] = [None] * n
    user_xpath: NodePath | None = None
    try:
        user_winner = extract_users(doc, nodes, link_xpath)
        users = list(user_winner.names)
        user_xpath = user_winner.xpath
    except MetadataNotFound as exc:
        diagnostics.append(Diagnostic("users", str(exc)))
    except Exception as exc:
        diagnostics.append(Diagnostic("users", f"{type(exc).__name__}: {exc}"))

    posts = tuple(
        ForumPost(index=i, text=texts[i], user=users[i], date=dates[i],
                  url=urls[i])
        for i in range(n)
    )
    return ExtractionResult(
        posts=posts,
        post_xpath=winner.xpath,
        date_xpath=date_xpath,
        user_xpath=user_xpath,
        link_xpath=link_xpath,
        diagnostics=tuple(diagnostics),
    )
