"""Tolerant HTML parsing: encoding sniff plus a repairing tree builder.

Built on the stdlib tokenizer (html.parser); the tree construction layer
adds the pragmatic repairs real forum pages need: implied html/head/body,
void elements, auto-closing of p/li/td/tr and friends, stray end tags
ignored, everything still open closed at end of input. No foster parenting
and no adoption agency; mis-nested formatting tags degrade gracefully.
"""

from __future__ import annotations

import codecs
import re
from html.parser import HTMLParser

from .dom import Node
from .errors import EncodingError

__all__ = ["decode_html", "build_tree"]

VOID_TAGS = frozenset(
    {"area", "base", "basefont", "br", "col", "embed", "frame", "hr", "img",
     "input", "link", "meta", "param", "source", "track", "wbr"}
)

# Tags that live in <head> when seen before any body content.
_HEAD_TAGS = frozenset({"title", "base", "meta", "link", "style", "script", "noscript"})

_P_CLOSERS = frozenset(
    {"address", "article", "aside", "blockquote", "details", "dialog", "div",
     "dl", "dd", "dt", "fieldset", "figcaption", "figure", "footer", "form",
     "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "li", "main", "nav",
     "ol", "p", "pre", "section", "table", "td", "th", "tr", "ul"}
)

# open tag -> start tags that imply its end tag (applied repeatedly against
# the top of the open-element stack).
_IMPLIED_END: dict[str, frozenset[str]] = {
    "p": _P_CLOSERS,
    "li": frozenset({"li"}),
    "dt": frozenset({"dt", "dd"}),
    "dd": frozenset({"dt", "dd"}),
    "tr": frozenset({"tr", "thead", "tbody", "tfoot"}),
    "td": frozenset({"td", "th", "tr", "thead", "tbody", "tfoot"}),
    "th": frozenset({"td", "th", "tr", "thead", "tbody", "tfoot"}),
    "thead": frozenset({"tbody", "tfoot"}),
    "tbody": frozenset({"tbody", "tfoot"}),
    "tfoot": frozenset({"tbody"}),
    "option": frozenset({"option", "optgroup"}),
    "optgroup": frozenset({"optgroup"}),
    "a": frozenset({"a"}),
}

# Nesting deeper than this flattens; keeps the recursive renderers safe.
_MAX_DEPTH = 400

_META_CHARSET_RE = re.compile(
    rb"""<meta[^>]+charset\s*=\s*["']?\s*([a-zA-Z0-9._-]+)""", re.IGNORECASE
)


def decode_html(data: bytes) -> str:
    """Decode page bytes: BOM first, then a meta charset in the first 2 KiB,
    then UTF-8. Decoding is lossy (bad bytes become U+FFFD) rather than
    fatal; EncodingError is reserved for the pathological case where even a
    lossy decode fails."""
    for bom, name in (
        (codecs.BOM_UTF32_LE, "utf-32-le"),
        (codecs.BOM_UTF32_BE, "utf-32-be"),
        (codecs.BOM_UTF8, "utf-8"),
        (codecs.BOM_UTF16_LE, "utf-16-le"),
        (codecs.BOM_UTF16_BE, "utf-16-be"),
    ):
        if data.startswith(bom):
            return data[len(bom):].decode(name, errors="replace")

    encoding = "utf-8"
    m = _META_CHARSET_RE.search(data[:2048])
    if m:
        declared = m.group(1).decode("ascii", errors="ignore").strip().lower()
        try:
            codecs.lookup(declared)
            encoding = declared
        except LookupError:
            pass
    try:
        return data.decode(encoding, errors="replace")
    except Exception as exc:  # e.g. a codec that rejects error handlers
        try:
            return data.decode("utf-8", errors="replace")
        except Exception:
            raise EncodingError(f"cannot decode input ({encoding}): {exc}") from exc


class _TreeBuilder(HTMLParser):
    # title/textarea content is raw text, like script/style.
    CDATA_CONTENT_ELEMENTS = ("script", "style", "title", "textarea")

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root = Node("html")
        self.head = Node("head")
        self.body = Node("body")
        self.root.append(self.head)
        self.root.append(self.body)
        self._stack: list[Node] = []
        self._in_body = False

    def _insertion_point(self) -> Node:
        if self._stack:
            return self._stack[-1]
        return self.body if self._in_body else self.head

    def handle_starttag(self, tag: str, attrs) -> None:
        attr_map: dict[str, str] = {}
        for name, value in attrs:
            if name not in attr_map:
                attr_map[name] = value if value is not None else ""
        if tag == "html":
            for k, v in attr_map.items():
                self.root.attrs.setdefault(k, v)
            return
        if tag == "head":
            return
        if tag == "body":
            self._in_body = True
            for k, v in attr_map.items():
                self.body.attrs.setdefault(k, v)
            return

        if not self._in_body and not self._stack and tag not in _HEAD_TAGS:
            self._in_body = True

        while self._stack and tag in _IMPLIED_END.get(self._stack[-1].tag, ()):
            self._stack.pop()

        node = Node(tag, attr_map)
        self._insertion_point().append(node)
        if tag not in VOID_TAGS and len(self._stack) < _MAX_DEPTH:
            self._stack.append(node)

    def handle_endtag(self, tag: str) -> None:
        if tag in ("html", "body", "head") or tag in VOID_TAGS:
            return
        for i in range(len(self._stack) - 1, -1, -1):
            if self._stack[i].tag == tag:
                del self._stack[i:]
                return
        # stray end tag: ignore

    def handle_data(self, data: str) -> None:
        if not data:
            return
        if self._stack:
            self._stack[-1].append(data)
            return
        if not self._in_body:
            if data.strip():
                self._in_body = True
                self.body.append(data)
            return
        self.body.append(data)

    # comments, doctype and processing instructions carry no content
    def handle_comment(self, data: str) -> None:
        pass

    def handle_decl(self, decl: str) -> None:
        pass

    def handle_pi(self, data: str) -> None:
        pass

    def unknown_decl(self, data: str) -> None:
        pass


def build_tree(text: str) -> Node:
    """Parse HTML text into a repaired element tree rooted at <html>."""
    builder = _TreeBuilder()
    builder.feed(text)
    builder.close()
    return builder.root
