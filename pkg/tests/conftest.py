from __future__ import annotations

import random
from pathlib import Path

from forumextract.dom import (
    Document,
    RenderedPage,
    node_path,
    count_matching,
    parse_html,
    render_text,
)
from forumextract.locator import LocatorConfig, score_xpath

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS_DIR = FIXTURES / "corpus"
PAGES_DIR = FIXTURES / "pages"

DEFAULT_URL = "http://forum.example.org/thread/1"


def parse(html: str | bytes, url: str = DEFAULT_URL) -> Document:
    return parse_html(html, url)


def rendered(html: str | bytes,
             url: str = DEFAULT_URL) -> tuple[Document, RenderedPage]:
    doc = parse_html(html, url)
    return doc, render_text(doc)


def exhaustive_admitted(doc: Document, page: RenderedPage,
                        cfg: LocatorConfig) -> list[tuple[float, int, str]]:
    """Brute-force oracle: score the generalized path of every element in
    the DOM and keep those passing the sibling-count admission."""
    paths = {}
    for el in doc.iter_elements():
        p = node_path(doc, el).strip_last_index()
        paths.setdefault(str(p), p)
    admitted = []
    for key, p in sorted(paths.items()):
        count = count_matching(doc, p)
        if count > cfg.min_post_count:
            admitted.append((score_xpath(page, p, doc, cfg), count, key))
    return admitted


_WORDS = (
    "alpha bravo charlie delta echo foxtrot golf hotel india juliet kilo "
    "lima mike november oscar papa quebec romeo sierra tango uniform victor "
    "whiskey xray yankee zulu"
).split()

_LEAF_TAGS = ("p", "span", "b", "div", "em", "strong")
_CONTAINER_TAGS = ("div", "section", "article", "blockquote", "div", "div")
_BLACKLISTED_TAGS = ("footer", "form", "nav", "aside")


def _words(rng: random.Random, low: int = 1, high: int = 6) -> str:
    return " ".join(rng.choices(_WORDS, k=rng.randint(low, high)))


def _element(rng: random.Random, depth: int) -> str:
    roll = rng.random()
    if depth >= 3 or roll < 0.45:
        tag = rng.choice(_LEAF_TAGS)
        return f"<{tag}>{_words(rng)}</{tag}>"
    if roll < 0.55:
        items = "".join(f"<li>{_words(rng)}</li>"
                        for _ in range(rng.randint(1, 4)))
        return f"<ul>{items}</ul>"
    if roll < 0.65:
        tag = rng.choice(_BLACKLISTED_TAGS)
    else:
        tag = rng.choice(_CONTAINER_TAGS)
    inner = "".join(_element(rng, depth + 1)
                    for _ in range(rng.randint(1, 3)))
    return f"<{tag}>{inner}</{tag}>"


def random_page_html(rng: random.Random, with_repeats: bool = True) -> str:
    """A small synthetic page; optionally guaranteed to contain a group of
    4-7 same-tag siblings so the locator has something to admit."""
    parts = [_element(rng, 0) for _ in range(rng.randint(1, 4))]
    if with_repeats:
        tag = rng.choice(("div", "li", "section"))
        wrap = "ul" if tag == "li" else "div"
        count = rng.randint(4, 7)
        siblings = "".join(
            f"<{tag}><p>{_words(rng, 4, 9)}</p><span>{_words(rng, 1, 2)}</span></{tag}>"
            for _ in range(count)
        )
        parts.insert(rng.randrange(len(parts) + 1),
                     f"<{wrap} class=\"thread\">{siblings}</{wrap}>")
    return f"<html><body>{''.join(parts)}</body></html>"
