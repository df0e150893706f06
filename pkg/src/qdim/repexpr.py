"""A small expression language for naming representations.

Grammar (whitespace insignificant, ASCII operators with unicode aliases)::

    rep    := term ( "(+)" term )*          direct sum, lowest precedence
    term   := factor ( "(x)" factor )*      tensor product
    factor := atom ( "^" INT )?             tensor power, tightest
    atom   := "fund" | "V(" INT ")" | "word(" [uU]+ ")"
            | "g(" INT ("," INT)* ")" | "conj(" rep ")" | "(" rep ")"

Operators are left-associative; nested sums (or products) of the same
kind flatten into one n-ary node, which makes pretty-printing followed by
re-parsing the identity (canonical parenthesization).  Parsing against a
:class:`~qdim.config.GroupConfig` also checks that every atom belongs to
the configured catalog.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CatalogMismatchError, ParseError
from .fusion import (
    Decomposition,
    FreeAbelianDualRing,
    FreeGroupDualRing,
    FusionRing,
    TemperleyLiebRing,
)

__all__ = [
    "Fund",
    "Rank",
    "Word",
    "Group",
    "Conj",
    "Power",
    "Tensor",
    "DirectSum",
    "tokenize",
    "parse_rep",
    "to_text",
    "evaluate",
]


@dataclass(frozen=True)
class Fund:
    pass


@dataclass(frozen=True)
class Rank:
    r: int


@dataclass(frozen=True)
class Word:
    letters: str


@dataclass(frozen=True)
class Group:
    components: tuple[int, ...]


@dataclass(frozen=True)
class Conj:
    inner: "RepExpr"


@dataclass(frozen=True)
class Power:
    base: "RepExpr"
    n: int


@dataclass(frozen=True)
class Tensor:
    factors: tuple["RepExpr", ...]


@dataclass(frozen=True)
class DirectSum:
    terms: tuple["RepExpr", ...]


RepExpr = Fund | Rank | Word | Group | Conj | Power | Tensor | DirectSum


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


_ATOM_EXPECTED = frozenset(
    {"fund", "V(INT)", "word(LETTERS)", "g(INT,...)", "conj(rep)", "( rep )"}
)


def tokenize(src: str) -> list[_Token]:
    out = []
    i = 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if src.startswith("(x)", i):
            out.append(_Token("(x)", "(x)", i))
            i += 3
            continue
        if src.startswith("(+)", i):
            out.append(_Token("(+)", "(+)", i))
            i += 3
            continue
        if ch == "⊗":  # tensor sign
            out.append(_Token("(x)", ch, i))
            i += 1
            continue
        if ch == "⊕":  # direct-sum sign
            out.append(_Token("(+)", ch, i))
            i += 1
            continue
        if ch in "()^,":
            out.append(_Token(ch, ch, i))
            i += 1
            continue
        if ch == "-" or ch.isdigit():
            j = i + 1 if ch == "-" else i
            if ch == "-" and (j >= n or not src[j].isdigit()):
                raise ParseError("stray '-'", i, {"INT"})
            k = j
            while k < n and src[k].isdigit():
                k += 1
            out.append(_Token("INT", src[i:k], i))
            i = k
            continue
        if ch.isalpha():
            k = i
            while k < n and src[k].isalpha():
                k += 1
            out.append(_Token("IDENT", src[i:k], i))
            i = k
            continue
        raise ParseError(f"unexpected character {ch!r}", i, _ATOM_EXPECTED)
    out.append(_Token("EOF", "", n))
    return out


def _flatten_sum(parts):
    flat = []
    for p in parts:
        if isinstance(p, DirectSum):
            flat.extend(p.terms)
        else:
            flat.append(p)
    return flat[0] if len(flat) == 1 else DirectSum(tuple(flat))


def _flatten_tensor(parts):
    flat = []
    for p in parts:
        if isinstance(p, Tensor):
            flat.extend(p.factors)
        else:
            flat.append(p)
    return flat[0] if len(flat) == 1 else Tensor(tuple(flat))


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, expected=None) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"unexpected {tok.text!r}" if tok.kind != "EOF" else "unexpected end of input",
                tok.pos,
                expected or {kind},
            )
        return self.advance()

    def parse(self) -> RepExpr:
        expr = self.rep()
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError(
                f"unexpected {tok.text!r}", tok.pos, {"(+)", "(x)", "end of input"}
            )
        return expr

    def rep(self) -> RepExpr:
        parts = [self.term()]
        while self.peek().kind == "(+)":
            self.advance()
            parts.append(self.term())
        return _flatten_sum(parts)

    def term(self) -> RepExpr:
        parts = [self.factor()]
        while self.peek().kind == "(x)":
            self.advance()
            parts.append(self.factor())
        return _flatten_tensor(parts)

    def factor(self) -> RepExpr:
        base = self.atom()
        if self.peek().kind == "^":
            self.advance()
            tok = self.expect("INT", {"INT >= 0"})
            value = int(tok.text)
            if value < 0:
                raise ParseError("power must be non-negative", tok.pos, {"INT >= 0"})
            return Power(base, value)
        return base

    def atom(self) -> RepExpr:
        tok = self.peek()
        if tok.kind == "(":
            self.advance()
            inner = self.rep()
            self.expect(")")
            return inner
        if tok.kind != "IDENT":
            raise ParseError(
                f"unexpected {tok.text!r}" if tok.kind != "EOF" else "unexpected end of input",
                tok.pos,
                _ATOM_EXPECTED,
            )
        self.advance()
        name = tok.text
        if name == "fund":
            return Fund()
        if name == "V":
            self.expect("(")
            num = self.expect("INT", {"INT >= 0"})
            rank = int(num.text)
            if rank < 0:
                raise ParseError("rank must be non-negative", num.pos, {"INT >= 0"})
            self.expect(")")
            return Rank(rank)
        if name == "word":
            self.expect("(")
            letters = self.expect("IDENT", {"letters over u, U"})
            if not all(c in "uU" for c in letters.text):
                raise ParseError(
                    f"invalid letters {letters.text!r}",
                    letters.pos,
                    {"letters over u, U"},
                )
            self.expect(")")
            return Word(letters.text)
        if name == "g":
            self.expect("(")
            components = [int(self.expect("INT").text)]
            while self.peek().kind == ",":
                self.advance()
                components.append(int(self.expect("INT").text))
            self.expect(")")
            return Group(tuple(components))
        if name == "conj":
            self.expect("(")
            inner = self.rep()
            self.expect(")")
            return Conj(inner)
        raise ParseError(f"unknown name {name!r}", tok.pos, _ATOM_EXPECTED)


def _bind(expr: RepExpr, cfg) -> None:
    kind = cfg.kind
    if isinstance(expr, Rank):
        if kind != "ao":
            raise CatalogMismatchError(
                f"V({expr.r}) names a rank in an 'ao' catalog, but this config "
                f"is {kind!r}; " + _atom_hint(kind)
            )
    elif isinstance(expr, Word):
        if kind != "au":
            raise CatalogMismatchError(
                f"word({expr.letters}) belongs to an 'au' catalog, but this "
                f"config is {kind!r}; " + _atom_hint(kind)
            )
    elif isinstance(expr, Group):
        if kind != "group_dual":
            raise CatalogMismatchError(
                "g(...) belongs to a 'group_dual' catalog, but this config is "
                f"{kind!r}; " + _atom_hint(kind)
            )
        flavor = cfg.params["group"]
        rank = cfg.params["rank"]
        if flavor == "free_abelian":
            if len(expr.components) != rank:
                raise CatalogMismatchError(
                    f"g(...) needs exactly {rank} components for a rank-{rank} "
                    "free abelian dual"
                )
        else:
            for c in expr.components:
                if c == 0 or abs(c) > rank:
                    raise CatalogMismatchError(
                        f"free-group generators are +/-1..{rank}; got {c}"
                    )
    elif isinstance(expr, Conj):
        _bind(expr.inner, cfg)
    elif isinstance(expr, Power):
        _bind(expr.base, cfg)
    elif isinstance(expr, Tensor):
        for f in expr.factors:
            _bind(f, cfg)
    elif isinstance(expr, DirectSum):
        for t in expr.terms:
            _bind(t, cfg)


def _atom_hint(kind: str) -> str:
    if kind == "ao":
        return "use fund or V(r)"
    if kind == "au":
        return "use fund or word(...)"
    return "use fund or g(...)"


def parse_rep(src: str, cfg) -> RepExpr:
    """Parse ``src`` and check every atom against the configured catalog."""
    expr = _Parser(tokenize(src)).parse()
    _bind(expr, cfg)
    return expr


def to_text(expr: RepExpr) -> str:
    """Canonical rendering; re-parsing it yields an equal expression."""
    if isinstance(expr, Fund):
        return "fund"
    if isinstance(expr, Rank):
        return f"V({expr.r})"
    if isinstance(expr, Word):
        return f"word({expr.letters})"
    if isinstance(expr, Group):
        return "g(" + ",".join(str(c) for c in expr.components) + ")"
    if isinstance(expr, Conj):
        return f"conj({to_text(expr.inner)})"
    if isinstance(expr, Power):
        base = to_text(expr.base)
        if not isinstance(expr.base, (Fund, Rank, Word, Group, Conj)):
            base = f"({base})"
        return f"{base}^{expr.n}"
    if isinstance(expr, Tensor):
        pieces = []
        for f in expr.factors:
            text = to_text(f)
            if isinstance(f, DirectSum):
                text = f"({text})"
            pieces.append(text)
        return " (x) ".join(pieces)
    if isinstance(expr, DirectSum):
        return " (+) ".join(to_text(t) for t in expr.terms)
    raise TypeError(f"not a representation expression: {expr!r}")


def evaluate(expr: RepExpr, ring: FusionRing) -> Decomposition:
    """Evaluate an expression to a decomposition over ``ring``."""
    if isinstance(expr, Fund):
        return ring.fundamental()
    if isinstance(expr, Rank):
        if not isinstance(ring, TemperleyLiebRing):
            raise CatalogMismatchError("V(r) atoms need an 'ao' catalog")
        return Decomposition(ring, {expr.r: 1})
    if isinstance(expr, Word):
        return Decomposition(ring, {expr.letters: 1})
    if isinstance(expr, Group):
        if isinstance(ring, FreeAbelianDualRing):
            label = expr.components
        elif isinstance(ring, FreeGroupDualRing):
            label = _reduce(expr.components)
        else:
            raise CatalogMismatchError("g(...) atoms need a 'group_dual' catalog")
        return Decomposition(ring, {label: 1})
    if isinstance(expr, Conj):
        return evaluate(expr.inner, ring).conjugate()
    if isinstance(expr, Power):
        return evaluate(expr.base, ring).power(expr.n)
    if isinstance(expr, Tensor):
        acc = evaluate(expr.factors[0], ring)
        for f in expr.factors[1:]:
            acc = acc.fuse(evaluate(f, ring))
        return acc
    if isinstance(expr, DirectSum):
        acc = evaluate(expr.terms[0], ring)
        for t in expr.terms[1:]:
            acc = acc.add(evaluate(t, ring))
        return acc
    raise TypeError(f"not a representation expression: {expr!r}")


def _reduce(letters):
    stack = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)
