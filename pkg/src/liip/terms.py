"""Message terms: agent names, blank data, signatures and pairs.

Terms are hash-consed: every constructor function returns the unique
instance for its arguments, so equality and hashing are identity-based
and O(1).  Structural equality coincides with object identity as long
as all terms are built through :func:`name`, :func:`blank`, :func:`sign`
and :func:`pair` (or the parser, which uses them).

Concrete syntax::

    msg   ::= ident | str | "sig" "(" msg "," ident ")" | "<" msg "," msg ">"
    ident ::= [a-z][a-z0-9_]*
    str   ::= '"' [^"]* '"'

Whitespace between tokens is ignored; the canonical rendering produced
by :func:`render_message` contains none.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

__all__ = [
    "Message",
    "Name",
    "Blank",
    "Sign",
    "Pair",
    "name",
    "blank",
    "sign",
    "pair",
    "ParseError",
    "parse_message",
    "parse_message_prefix",
    "render_message",
    "pair_splits",
    "msg_size",
    "subterms",
    "is_agent_ident",
]

_IDENT_RE = re.compile(r"[a-z][a-z0-9_]*")


def is_agent_ident(text: str) -> bool:
    """True iff *text* is a well-formed agent identifier."""
    return bool(_IDENT_RE.fullmatch(text))


@dataclass(frozen=True, eq=False)
class Name:
    """A transmittable agent name."""

    agent: str
    key: str = field(repr=False, compare=False, default="")


@dataclass(frozen=True, eq=False)
class Blank:
    """Opaque application data, identified by its quoted label only."""

    label: str
    key: str = field(repr=False, compare=False, default="")


@dataclass(frozen=True, eq=False)
class Sign:
    """A message signed by an agent; only the signer can produce it."""

    body: "Message"
    signer: str
    key: str = field(repr=False, compare=False, default="")


@dataclass(frozen=True, eq=False)
class Pair:
    left: "Message"
    right: "Message"
    key: str = field(repr=False, compare=False, default="")


Message = Name | Blank | Sign | Pair

_names: dict[str, Name] = {}
_blanks: dict[str, Blank] = {}
_signs: dict[tuple[Sign | Name | Blank | Pair, str], Sign] = {}
_pairs: dict[tuple[Message, Message], Pair] = {}


def name(agent: str) -> Name:
    m = _names.get(agent)
    if m is None:
        if not is_agent_ident(agent):
            raise ValueError(f"bad agent name: {agent!r}")
        m = _names[agent] = Name(agent, agent)
    return m


def blank(label: str) -> Blank:
    m = _blanks.get(label)
    if m is None:
        if '"' in label:
            raise ValueError(f"blank label may not contain a quote: {label!r}")
        m = _blanks[label] = Blank(label, f'"{label}"')
    return m


def sign(body: Message, signer: str) -> Sign:
    k = (body, signer)
    m = _signs.get(k)
    if m is None:
        if not is_agent_ident(signer):
            raise ValueError(f"bad signer name: {signer!r}")
        m = _signs[k] = Sign(body, signer, f"sig({body.key},{signer})")
    return m


def pair(left: Message, right: Message) -> Pair:
    k = (left, right)
    m = _pairs.get(k)
    if m is None:
        m = _pairs[k] = Pair(left, right, f"<{left.key},{right.key}>")
    return m


def render_message(m: Message) -> str:
    """Canonical text of *m*; ``parse_message`` is its left inverse."""
    return m.key


class ParseError(ValueError):
    """Syntax error carrying the failing offset into the input text."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.text = text
        self.pos = pos


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _scan_ident(text: str, pos: int) -> tuple[str, int]:
    m = _IDENT_RE.match(text, pos)
    if not m:
        raise ParseError("expected identifier", text, pos)
    return m.group(), m.end()


def _expect(text: str, pos: int, tok: str) -> int:
    pos = _skip_ws(text, pos)
    if not text.startswith(tok, pos):
        raise ParseError(f"expected {tok!r}", text, pos)
    return pos + len(tok)


def parse_message_prefix(text: str, pos: int = 0) -> tuple[Message, int]:
    """Parse one message term starting at *pos*; return it and the end offset."""
    pos = _skip_ws(text, pos)
    if pos >= len(text):
        raise ParseError("expected message term", text, pos)
    ch = text[pos]
    if ch == '"':
        end = text.find('"', pos + 1)
        if end < 0:
            raise ParseError("unterminated string", text, len(text))
        return blank(text[pos + 1 : end]), end + 1
    if ch == "<":
        left, pos = parse_message_prefix(text, pos + 1)
        pos = _expect(text, pos, ",")
        right, pos = parse_message_prefix(text, pos)
        pos = _expect(text, pos, ">")
        return pair(left, right), pos
    ident, end = _scan_ident(text, pos)
    after = _skip_ws(text, end)
    if ident == "sig" and after < len(text) and text[after] == "(":
        body, pos = parse_message_prefix(text, after + 1)
        pos = _expect(text, pos, ",")
        pos = _skip_ws(text, pos)
        signer, pos = _scan_ident(text, pos)
        pos = _expect(text, pos, ")")
        return sign(body, signer), pos
    return name(ident), end


def parse_message(text: str) -> Message:
    m, pos = parse_message_prefix(text, 0)
    pos = _skip_ws(text, pos)
    if pos != len(text):
        raise ParseError("trailing input after message", text, pos)
    return m


def pair_splits(m: Message) -> list[tuple[Message, Message]]:
    """Top-level decompositions of *m* used by the communal fixpoint.

    Always contains the duplicate split ``(m, m)``; a pair additionally
    contributes its component split.
    """
    if isinstance(m, Pair):
        return [(m.left, m.right), (m, m)]
    return [(m, m)]


def msg_size(m: Message) -> int:
    """Node count of the term tree."""
    if isinstance(m, Pair):
        return 1 + msg_size(m.left) + msg_size(m.right)
    if isinstance(m, Sign):
        return 1 + msg_size(m.body)
    return 1


def subterms(m: Message) -> set[Message]:
    """All subterms of *m*, including *m* itself (signers excluded)."""
    acc: set[Message] = set()
    stack = [m]
    while stack:
        t = stack.pop()
        if t in acc:
            continue
        acc.add(t)
        if isinstance(t, Pair):
            stack.append(t.left)
            stack.append(t.right)
        elif isinstance(t, Sign):
            stack.append(t.body)
    return acc
