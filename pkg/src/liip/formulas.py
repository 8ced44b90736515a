"""The formula language: atoms, individual-knowledge atoms, connectives
and the four-place proof modality.

Like message terms, formulas are hash-consed through the constructor
functions below, so equality is identity and formulas can serve as fast
dictionary keys (memo tables, valuations, truth-table abstraction).

Concrete syntax (precedence ``~`` > ``&`` > ``|`` > ``->`` > ``<->``,
all binaries right-associative)::

    phi ::= "true" | "false" | ident args? | "knows" "(" ident "," msg ")"
          | "proof" "(" msg ";" ident ";" "{" identlist? "}" ";" phi ")"
          | "~" phi | phi "&" phi | phi "|" phi | phi "->" phi | phi "<->" phi
          | "(" phi ")"
    args ::= "(" identlist ")"
    identlist ::= ident ("," ident)*

``true``, ``false``, ``knows`` and ``proof`` are reserved and cannot be
used as atom names.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .terms import (
    Message,
    ParseError,
    _scan_ident,
    _skip_ws,
    _expect,
    parse_message_prefix,
)

__all__ = [
    "Formula",
    "Atom",
    "Knows",
    "Truth",
    "Falsity",
    "Not",
    "And",
    "Or",
    "Implies",
    "Iff",
    "Proof",
    "atom",
    "knows",
    "TRUE",
    "FALSE",
    "neg",
    "conj",
    "disj",
    "implies",
    "iff",
    "proof",
    "conjoin",
    "parse_formula",
    "render_formula",
    "expand_sugar",
    "RESERVED_WORDS",
]

RESERVED_WORDS = frozenset({"true", "false", "knows", "proof", "sig"})


@dataclass(frozen=True, eq=False)
class Atom:
    pred: str
    args: tuple[str, ...]
    key: str = field(repr=False, compare=False, default="")


@dataclass(frozen=True, eq=False)
class Knows:
    agent: str
    msg: Message
    key: str = field(repr=False, compare=False, default="")


@dataclass(frozen=True, eq=False)
class Truth:
    key: str = field(repr=False, compare=False, default="true")


@dataclass(frozen=True, eq=False)
class Falsity:
    key: str = field(repr=False, compare=False, default="false")


@dataclass(frozen=True, eq=False)
class Not:
    sub: "Formula"
    key: str = field(repr=False, compare=False, default="")


@dataclass(frozen=True, eq=False)
class And:
    left: "Formula"
    right: "Formula"
    key: str = field(repr=False, compare=False, default="")


@dataclass(frozen=True, eq=False)
class Or:
    left: "Formula"
    right: "Formula"
    key: str = field(repr=False, compare=False, default="")


@dataclass(frozen=True, eq=False)
class Implies:
    left: "Formula"
    right: "Formula"
    key: str = field(repr=False, compare=False, default="")


@dataclass(frozen=True, eq=False)
class Iff:
    left: "Formula"
    right: "Formula"
    key: str = field(repr=False, compare=False, default="")


@dataclass(frozen=True, eq=False)
class Proof:
    """``proof(witness; verifier; {peers}; goal)``: the witness proves the
    goal to the verifier, reviewably for the peer community."""

    witness: Message
    verifier: str
    peers: frozenset[str]
    goal: "Formula"
    key: str = field(repr=False, compare=False, default="")


Formula = Atom | Knows | Truth | Falsity | Not | And | Or | Implies | Iff | Proof

# Rendering precedence; higher binds tighter.  Binary connectives are
# right-associative, so a left child at equal precedence needs parens.
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}
_BIN_TOK = {And: "&", Or: "|", Implies: "->", Iff: "<->"}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 6)


def _render(f: Formula) -> str:
    t = type(f)
    if t in _BIN_TOK:
        p = _PREC[t]
        left = f.left.key if _prec(f.left) > p else f"({f.left.key})"
        right = f.right.key if _prec(f.right) >= p else f"({f.right.key})"
        return f"{left} {_BIN_TOK[t]} {right}"
    if t is Not:
        sub = f.sub.key if _prec(f.sub) >= 5 else f"({f.sub.key})"
        return f"~{sub}"
    raise AssertionError(f)


_interned: dict[tuple, Formula] = {}


def _make(cls, *fields) -> Formula:
    k = (cls, *fields)
    f = _interned.get(k)
    if f is None:
        f = cls(*fields)
        object.__setattr__(f, "key", _render(f)) if cls in (Not, And, Or, Implies, Iff) else None
        _interned[k] = f
    return f


def atom(pred: str, *args: str) -> Atom:
    k = ("atom", pred, args)
    f = _interned.get(k)
    if f is None:
        if pred in RESERVED_WORDS:
            raise ValueError(f"reserved word cannot name an atom: {pred!r}")
        key = pred if not args else f"{pred}({','.join(args)})"
        f = _interned[k] = Atom(pred, args, key)
    return f


def knows(agent: str, msg: Message) -> Knows:
    k = ("knows", agent, msg)
    f = _interned.get(k)
    if f is None:
        f = _interned[k] = Knows(agent, msg, f"knows({agent},{msg.key})")
    return f


TRUE = Truth()
FALSE = Falsity()


def neg(sub: Formula) -> Not:
    return _make(Not, sub)


def conj(left: Formula, right: Formula) -> And:
    return _make(And, left, right)


def disj(left: Formula, right: Formula) -> Or:
    return _make(Or, left, right)


def implies(left: Formula, right: Formula) -> Implies:
    return _make(Implies, left, right)


def iff(left: Formula, right: Formula) -> Iff:
    return _make(Iff, left, right)


def proof(witness: Message, verifier: str, peers, goal: Formula) -> Proof:
    peers = frozenset(peers)
    k = ("proof", witness, verifier, peers, goal)
    f = _interned.get(k)
    if f is None:
        members = ",".join(sorted(peers))
        key = f"proof({witness.key}; {verifier}; {{{members}}}; {goal.key})"
        f = _interned[k] = Proof(witness, verifier, peers, goal, key)
    return f


def conjoin(parts: list[Formula]) -> Formula:
    """Right-nested conjunction of *parts*; a singleton is returned bare."""
    if not parts:
        return TRUE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = conj(p, out)
    return out


def render_formula(f: Formula) -> str:
    return f.key


# --- parser ---------------------------------------------------------------


def _parse_identlist(text: str, pos: int) -> tuple[list[str], int]:
    items = []
    pos = _skip_ws(text, pos)
    ident, pos = _scan_ident(text, pos)
    items.append(ident)
    while True:
        pos = _skip_ws(text, pos)
        if text.startswith(",", pos):
            pos = _skip_ws(text, pos + 1)
            ident, pos = _scan_ident(text, pos)
            items.append(ident)
        else:
            return items, pos


def _parse_primary(text: str, pos: int) -> tuple[Formula, int]:
    pos = _skip_ws(text, pos)
    if pos >= len(text):
        raise ParseError("expected formula", text, pos)
    ch = text[pos]
    if ch == "~":
        sub, pos = _parse_primary(text, pos + 1)
        return neg(sub), pos
    if ch == "(":
        f, pos = _parse_formula_prefix(text, pos + 1)
        pos = _expect(text, pos, ")")
        return f, pos
    ident, end = _scan_ident(text, pos)
    if ident == "true":
        return TRUE, end
    if ident == "false":
        return FALSE, end
    if ident == "knows":
        p = _expect(text, end, "(")
        p = _skip_ws(text, p)
        agent, p = _scan_ident(text, p)
        p = _expect(text, p, ",")
        msg, p = parse_message_prefix(text, p)
        p = _expect(text, p, ")")
        return knows(agent, msg), p
    if ident == "proof":
        p = _expect(text, end, "(")
        witness, p = parse_message_prefix(text, p)
        p = _expect(text, p, ";")
        p = _skip_ws(text, p)
        verifier, p = _scan_ident(text, p)
        p = _expect(text, p, ";")
        p = _expect(text, p, "{")
        p = _skip_ws(text, p)
        if text.startswith("}", p):
            peers, p = [], p + 1
        else:
            peers, p = _parse_identlist(text, p)
            p = _expect(text, p, "}")
        p = _expect(text, p, ";")
        goal, p = _parse_formula_prefix(text, p)
        p = _expect(text, p, ")")
        return proof(witness, verifier, peers, goal), p
    if ident == "sig":
        raise ParseError("message term is not a formula", text, pos)
    after = _skip_ws(text, end)
    if text.startswith("(", after):
        args, p = _parse_identlist(text, after + 1)
        p = _expect(text, p, ")")
        return atom(ident, *args), p
    return atom(ident), end


# Right-associative precedence climbing over the binary connectives.
_LEVELS = [("<->", iff), ("->", implies), ("|", disj), ("&", conj)]


def _parse_level(text: str, pos: int, level: int) -> tuple[Formula, int]:
    if level == len(_LEVELS):
        return _parse_primary(text, pos)
    tok, build = _LEVELS[level]
    left, pos = _parse_level(text, pos, level + 1)
    p = _skip_ws(text, pos)
    # "->" must not swallow the first dash of "<->"; tokens here are
    # unambiguous because "<->" is tried at an outer level only.
    if text.startswith(tok, p) and not (tok == "|" and text.startswith("||", p)):
        right, pos = _parse_level(text, p + len(tok), level)
        return build(left, right), pos
    return left, pos


def _parse_formula_prefix(text: str, pos: int) -> tuple[Formula, int]:
    return _parse_level(text, pos, 0)


def parse_formula(text: str) -> Formula:
    f, pos = _parse_formula_prefix(text, 0)
    pos = _skip_ws(text, pos)
    if pos != len(text):
        raise ParseError("trailing input after formula", text, pos)
    return f


# --- desugaring -----------------------------------------------------------


def expand_sugar(f: Formula) -> Formula:
    """Rewrite Or/Implies/Iff/Falsity into the {~, &, true} core.

    ``p | q``  becomes ``~(~p & ~q)``; ``p -> q`` becomes ``~p | q``
    expanded; ``p <-> q`` the conjunction of both implications;
    ``false`` becomes ``~true``.  Idempotent, and preserves the truth
    value at every state of every model.
    """
    t = type(f)
    if t in (Atom, Knows, Truth):
        return f
    if t is Falsity:
        return neg(TRUE)
    if t is Not:
        return neg(expand_sugar(f.sub))
    if t is And:
        return conj(expand_sugar(f.left), expand_sugar(f.right))
    if t is Or:
        return neg(conj(neg(expand_sugar(f.left)), neg(expand_sugar(f.right))))
    if t is Implies:
        return expand_sugar(disj(neg(f.left), f.right))
    if t is Iff:
        return expand_sugar(conj(implies(f.left, f.right), implies(f.right, f.left)))
    if t is Proof:
        return proof(f.witness, f.verifier, f.peers, expand_sugar(f.goal))
    raise AssertionError(f)
