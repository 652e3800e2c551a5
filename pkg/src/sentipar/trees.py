"""Bracketed shallow-parse trees and phrase/POS extraction.

Trees arrive as Penn-Treebank-style S-expressions produced by an external
constituency parser, one per line.  This module only reads them; it never
produces parses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import DegenerateTreeError, EmptyInputError, ParseError

# Labels of punctuation chunks.  They stay in the tree (the complex-sentence
# rule needs the comma) but are stripped from phrase sequences.
PUNCT_LABELS = frozenset({",", ".", ":", "``", "''", "-LRB-", "-RRB-"})


@dataclass(frozen=True)
class ParseTree:
    """A rooted labeled ordered tree.  ``token`` is set iff the node is a leaf."""

    label: str
    children: tuple["ParseTree", ...] = ()
    token: str | None = field(default=None)

    def __post_init__(self):
        if (self.token is None) == (not self.children):
            raise ValueError(
                f"node {self.label!r} must have either a token or children"
            )

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def leaves(self):
        """Yield leaf nodes in sentence order."""
        if self.is_leaf:
            yield self
        else:
            for child in self.children:
                yield from child.leaves()

    def tokens(self) -> list[str]:
        return [leaf.token for leaf in self.leaves()]

    def iter_nodes(self):
        """Pre-order traversal over all nodes."""
        yield self
        for child in self.children:
            yield from child.iter_nodes()

    def contains_label(self, label: str) -> bool:
        return any(node.label == label for node in self.iter_nodes())

    def serialize(self) -> str:
        """Rebuild the bracketed string; re-parsing yields an equal tree."""
        if self.is_leaf:
            return f"({self.label} {self.token})"
        inner = " ".join(child.serialize() for child in self.children)
        return f"({self.label} {inner})"


_TOKEN_RE = re.compile(r"\(|\)|[^()\s]+")


def parse_tree(text: str) -> ParseTree:
    """Parse one bracketed tree, e.g. ``(S (NP (PRP it)) (VP (VBD ran)))``.

    Raises EmptyInputError on blank input and ParseError (with character
    offset) on unbalanced or otherwise malformed input.
    """
    if not text.strip():
        raise EmptyInputError("empty parse input")

    matches = list(_TOKEN_RE.finditer(text))
    pos = 0  # index into matches

    def fail(message: str, at: int) -> ParseError:
        return ParseError(message, at)

    def parse_node() -> ParseTree:
        nonlocal pos
        if pos >= len(matches):
            raise fail("unbalanced parentheses: unexpected end of input", len(text))
        m = matches[pos]
        if m.group() != "(":
            raise fail(f"expected '(' but found {m.group()!r}", m.start())
        pos += 1

        if pos >= len(matches):
            raise fail("unbalanced parentheses: unexpected end of input", len(text))
        m = matches[pos]
        if m.group() in "()":
            raise fail("expected a label after '('", m.start())
        label = m.group()
        pos += 1

        children: list[ParseTree] = []
        token: str | None = None
        while True:
            if pos >= len(matches):
                raise fail(
                    "unbalanced parentheses: unexpected end of input", len(text)
                )
            m = matches[pos]
            if m.group() == ")":
                pos += 1
                break
            if m.group() == "(":
                if token is not None:
                    raise fail("leaf node cannot have children", m.start())
                children.append(parse_node())
            else:
                if children:
                    raise fail("internal node cannot carry a token", m.start())
                if token is not None:
                    raise fail("leaf node carries more than one token", m.start())
                token = m.group()
                pos += 1
        if token is None and not children:
            raise fail(f"empty node ({label})", m.start())
        return ParseTree(label, tuple(children), token)

    tree = parse_node()
    if pos < len(matches):
        raise fail("trailing content after tree", matches[pos].start())
    return tree


def phrase_sequence(tree: ParseTree) -> tuple[str, ...]:
    """Labels of the root's immediate children, punctuation chunks dropped."""
    if tree.is_leaf:
        raise DegenerateTreeError(
            f"cannot take a phrase sequence of the bare leaf ({tree.label} {tree.token})"
        )
    return tuple(c.label for c in tree.children if c.label not in PUNCT_LABELS)


def pos_sequence(tree: ParseTree) -> list[tuple[str, str]]:
    """(token, POS-label) pairs for the leaves in sentence order."""
    return [(leaf.token, leaf.label) for leaf in tree.leaves()]


def read_parse_file(path) -> dict[int, ParseTree]:
    """Read one tree per line; blank lines are alignment gaps.

    Returns {record_id: tree} where record_id is the 1-based line number,
    so line N stays aligned with corpus record N.
    """
    parses: dict[int, ParseTree] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                parses[lineno] = parse_tree(line)
            except ParseError as exc:
                raise ParseError(f"line {lineno}: {exc}", exc.offset) from exc
    return parses
