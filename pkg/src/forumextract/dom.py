"""DOM tree, node paths and layout-aware text rendering.

The document model is deliberately small: elements hold a tag, an attribute
dict and an ordered list of children, where a child is either another element
or a plain text string. Text rendering follows the browser model at the
granularity the locator needs:

- block-level elements (p, div, li, tr, headings, ...) and <br> start a new
  line; inline elements (span, a, b, ...) do not;
- script, style, head and comments never contribute text;
- whitespace runs collapse to a single space, empty lines are dropped;
- every emitted line remembers the element it came from, expressed as a
  NodePath (an XPath-shaped address such as /html/body/div[3]/p).

A line that spans several inline descendants is attributed to the nearest
common ancestor element of the text pieces, which gives the locator a stable
anchor for path generalization.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator
from urllib.parse import urlsplit

from .errors import PathResolutionError, UrlError

__all__ = [
    "Node",
    "NodePath",
    "Document",
    "TextLine",
    "RenderedPage",
    "parse_html",
    "render_text",
    "node_path",
    "relative_path",
    "resolve",
    "resolve_relative",
    "count_matching",
    "element_text",
    "subtree_text",
    "descendants_blacklisted",
    "ancestors_blacklisted",
    "collapse_whitespace",
]

# Elements that never contribute rendered text.
NON_RENDERED_TAGS = frozenset({"script", "style", "head", "title", "template"})

# Elements that force a line break before and after their content. Table
# cells are rendered as individual lines; no column alignment is attempted.
BLOCK_TAGS = frozenset(
    {
        "html", "body", "address", "article", "aside", "blockquote", "caption",
        "dd", "details", "dialog", "div", "dl", "dt", "fieldset", "figcaption",
        "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6",
        "header", "hr", "li", "main", "nav", "ol", "option", "p", "pre",
        "section", "select", "summary", "table", "tbody", "td", "tfoot", "th",
        "thead", "tr", "ul",
    }
)


def collapse_whitespace(text: str) -> str:
    """Collapse runs of Unicode whitespace to single spaces and trim."""
    return " ".join(text.split())


class Node:
    """An element in the parsed tree.

    ``children`` holds elements and raw text strings in document order; a
    string child belongs to this element (there is no separate text-node
    class, and no lxml-style tail bookkeeping).
    """

    __slots__ = ("tag", "attrs", "parent", "children")

    def __init__(self, tag: str, attrs: dict[str, str] | None = None,
                 parent: "Node | None" = None):
        self.tag = tag
        self.attrs = attrs if attrs is not None else {}
        self.parent = parent
        self.children: list[Node | str] = []

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<Node {self.tag} children={len(self.children)}>"

    def append(self, child: "Node | str") -> None:
        if isinstance(child, Node):
            child.parent = self
        self.children.append(child)

    def element_children(self) -> list["Node"]:
        return [c for c in self.children if isinstance(c, Node)]

    def iter_elements(self, skip: frozenset[str] = frozenset()) -> Iterator["Node"]:
        """Yield this element and all element descendants in document order,
        pruning subtrees whose tag is in ``skip``."""
        if self.tag in skip:
            return
        yield self
        for child in self.children:
            if isinstance(child, Node):
                yield from child.iter_elements(skip)

    def ancestors(self) -> Iterator["Node"]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def own_text(self) -> str:
        """Whitespace-collapsed text held directly by this element."""
        return collapse_whitespace(
            "".join(c for c in self.children if isinstance(c, str))
        )

    def all_text(self) -> str:
        """Whitespace-collapsed text of the whole subtree, inline-joined.

        Non-rendered subtrees (script, style, ...) are excluded. Unlike
        :func:`subtree_text` this ignores block structure, which is the right
        shape for short candidate values such as author names.
        """
        parts: list[str] = []

        def gather(node: Node) -> None:
            if node.tag in NON_RENDERED_TAGS:
                return
            for child in node.children:
                if isinstance(child, str):
                    parts.append(child)
                else:
                    gather(child)

        gather(self)
        return collapse_whitespace("".join(parts))

    def previous_element_sibling(self) -> "Node | None":
        if self.parent is None:
            return None
        prev: Node | None = None
        for child in self.parent.children:
            if child is self:
                return prev
            if isinstance(child, Node):
                prev = child
        return None

    def next_element_sibling(self) -> "Node | None":
        if self.parent is None:
            return None
        seen = False
        for child in self.parent.children:
            if child is self:
                seen = True
                continue
            if seen and isinstance(child, Node):
                return child
        return None


_STEP_RE = re.compile(r"^([^\s/\[\]]+)(?:\[(\d+)\])?$")


@dataclass(frozen=True)
class NodePath:
    """An XPath-shaped address: a sequence of tag steps with optional 1-based
    position indices, e.g. ``/html/body/div[3]/p``.

    An index-free step matches every same-tag child; a path whose steps all
    carry indices resolves to at most one node. ``relative`` paths (serialized
    with a leading ``./``) address nodes below some base element.
    """

    steps: tuple[tuple[str, int | None], ...]
    relative: bool = False

    def __str__(self) -> str:
        body = "/".join(
            f"{tag}[{idx}]" if idx is not None else tag for tag, idx in self.steps
        )
        if self.relative:
            return f"./{body}" if body else "."
        return f"/{body}"

    @classmethod
    def parse(cls, text: str) -> "NodePath":
        text = text.strip()
        if text == ".":
            return cls((), relative=True)
        relative = text.startswith("./")
        if relative:
            text = text[2:]
        elif text.startswith("/"):
            text = text[1:]
        else:
            raise ValueError(f"not a node path: {text!r}")
        steps: list[tuple[str, int | None]] = []
        for raw in text.split("/"):
            m = _STEP_RE.match(raw)
            if not m:
                raise ValueError(f"bad path step {raw!r}")
            tag, idx = m.group(1), m.group(2)
            steps.append((tag.lower(), int(idx) if idx else None))
        return cls(tuple(steps), relative=relative)

    @property
    def depth(self) -> int:
        return len(self.steps)

    def parent(self) -> "NodePath":
        return NodePath(self.steps[:-1], relative=self.relative)

    def strip_last_index(self) -> "NodePath":
        """Drop the positional index from the terminal step so the path
        matches every same-tag sibling (the locator's generalization)."""
        if not self.steps:
            return self
        tag, _ = self.steps[-1]
        return NodePath(self.steps[:-1] + ((tag, None),), relative=self.relative)


@dataclass(frozen=True)
class TextLine:
    """One rendered line and the path of the element that emitted it."""

    text: str
    origin: NodePath


@dataclass(frozen=True)
class RenderedPage:
    """The page's visible text as ordered lines with per-line provenance."""

    lines: tuple[TextLine, ...]

    @property
    def full_text(self) -> str:
        return "\n".join(line.text for line in self.lines)


@dataclass
class Document:
    """A parsed page: source URL, repaired element tree, input size."""

    source_url: str
    root: Node
    raw_length: int

    def iter_elements(self) -> Iterator[Node]:
        return self.root.iter_elements()


def _require_absolute(url: str) -> None:
    parts = urlsplit(url)
    if not parts.scheme or not parts.netloc:
        raise UrlError(f"URL must be absolute (scheme and host): {url!r}")


def parse_html(data: bytes | str, base_url: str) -> Document:
    """Parse (and repair) HTML into a Document.

    Malformed markup is repaired, never rejected. For byte input the encoding
    is sniffed in the order BOM, meta charset, UTF-8 fallback, and decoding is
    lossy rather than fatal.
    """
    from . import htmlparse

    _require_absolute(base_url)
    if isinstance(data, bytes):
        text = htmlparse.decode_html(data)
        raw_length = len(data)
    else:
        text = data
        raw_length = len(data)
    root = htmlparse.build_tree(text)
    return Document(source_url=base_url, root=root, raw_length=raw_length)


def node_path(doc: Document, node: Node) -> NodePath:
    """Absolute path of ``node``; resolving it yields exactly ``node``.

    A step carries an index only when the element has same-tag siblings,
    mirroring the compact form browsers and lxml produce.
    """
    steps: list[tuple[str, int | None]] = []
    current = node
    while current is not None:
        parent = current.parent
        if parent is None:
            steps.append((current.tag, None))
        else:
            same = [c for c in parent.element_children() if c.tag == current.tag]
            idx = same.index(current) + 1 if len(same) > 1 else None
            steps.append((current.tag, idx))
        current = parent
    steps.reverse()
    return NodePath(tuple(steps))


def relative_path(base: Node, node: Node) -> NodePath:
    """Path of ``node`` relative to ancestor-or-self ``base``."""
    steps: list[tuple[str, int | None]] = []
    current = node
    while current is not base:
        parent = current.parent
        if parent is None:
            raise ValueError("node is not inside base")
        same = [c for c in parent.element_children() if c.tag == current.tag]
        idx = same.index(current) + 1 if len(same) > 1 else None
        steps.append((current.tag, idx))
        current = parent
    steps.reverse()
    return NodePath(tuple(steps), relative=True)


def _match_step(nodes: list[Node], tag: str, idx: int | None) -> list[Node]:
    result: list[Node] = []
    for node in nodes:
        same = [c for c in node.element_children() if c.tag == tag]
        if idx is None:
            result.extend(same)
        elif 1 <= idx <= len(same):
            result.append(same[idx - 1])
    return result


def resolve(doc: Document, path: NodePath) -> list[Node]:
    """All nodes the path addresses, in document order."""
    if path.relative:
        raise ValueError("cannot resolve a relative path against a Document")
    if not path.steps:
        return []
    tag, idx = path.steps[0]
    current = [doc.root] if doc.root.tag == tag and idx in (None, 1) else []
    for tag, idx in path.steps[1:]:
        if not current:
            break
        current = _match_step(current, tag, idx)
    return current


def resolve_relative(base: Node, path: NodePath) -> list[Node]:
    """All nodes a relative path addresses below ``base``."""
    if not path.relative:
        raise ValueError("expected a relative path")
    current = [base]
    for tag, idx in path.steps:
        if not current:
            break
        current = _match_step(current, tag, idx)
    return current


def count_matching(doc: Document, path: NodePath) -> int:
    """Number of DOM nodes the (possibly index-free) path resolves to."""
    return len(resolve(doc, path))


def _common_ancestor(nodes: list[Node]) -> Node:
    if len(nodes) == 1:
        return nodes[0]
    chains: list[list[Node]] = []
    for node in nodes:
        chain = [node, *node.ancestors()]
        chain.reverse()
        chains.append(chain)
    common = chains[0][0]
    for depth in range(min(len(c) for c in chains)):
        candidate = chains[0][depth]
        if all(chain[depth] is candidate for chain in chains):
            common = candidate
        else:
            break
    return common


def _render_lines(root: Node, doc: Document | None) -> list[TextLine]:
    """Walk a subtree and emit rendered lines.

    When ``doc`` is None the origin paths are skipped (cheaper; used for
    subtree text where only the strings matter) and lines carry a dummy
    origin of the subtree root.
    """
    lines: list[TextLine] = []
    pending: list[tuple[str, Node]] = []
    dummy = NodePath(())

    def flush() -> None:
        if not pending:
            return
        text = collapse_whitespace("".join(t for t, _ in pending))
        if text:
            if doc is not None:
                # whitespace-only segments carry no visible text and do not
                # pull the origin up to their parent
                owners: list[Node] = []
                for segment, owner in pending:
                    if segment.strip() and not any(o is owner for o in owners):
                        owners.append(owner)
                origin = node_path(doc, _common_ancestor(owners))
            else:
                origin = dummy
            lines.append(TextLine(text=text, origin=origin))
        pending.clear()

    def walk(node: Node) -> None:
        if node.tag in NON_RENDERED_TAGS:
            return
        if node.tag == "br":
            flush()
            return
        block = node.tag in BLOCK_TAGS
        if block:
            flush()
        for child in node.children:
            if isinstance(child, str):
                pending.append((child, node))
            else:
                walk(child)
        if block:
            flush()

    walk(root)
    flush()
    return lines


def render_text(doc: Document) -> RenderedPage:
    """Render the whole page to lines with per-line origin paths."""
    return RenderedPage(lines=tuple(_render_lines(doc.root, doc)))


def element_text(node: Node) -> str:
    """Rendered text of one element's subtree (same line rules as
    :func:`render_text`, lines joined by newline)."""
    return "\n".join(line.text for line in _render_lines(node, None))


def subtree_text(doc: Document, path: NodePath) -> str:
    """Rendered text of every node matching ``path``, in document order,
    using the same line rules as :func:`render_text`."""
    chunks: list[str] = []
    for node in resolve(doc, path):
        text = element_text(node)
        if text:
            chunks.append(text)
    return "\n".join(chunks)


def _matching_or_raise(doc: Document, path: NodePath) -> list[Node]:
    nodes = resolve(doc, path)
    if not nodes:
        raise PathResolutionError(f"path matches nothing: {path}")
    return nodes


def descendants_blacklisted(doc: Document, path: NodePath,
                            blacklist: Iterable[str]) -> bool:
    """True iff any node matching ``path`` has a descendant with a
    blacklisted tag (the node's own tag is not considered)."""
    tags = frozenset(blacklist)
    for node in resolve(doc, path):
        stack = node.element_children()
        while stack:
            el = stack.pop()
            if el.tag in tags:
                return True
            stack.extend(el.element_children())
    return False


def ancestors_blacklisted(doc: Document, path: NodePath,
                          blacklist: Iterable[str]) -> bool:
    """True iff any strict ancestor of any matching node is blacklisted."""
    tags = frozenset(blacklist)
    for node in resolve(doc, path):
        for ancestor in node.ancestors():
            if ancestor.tag in tags:
                return True
    return False
