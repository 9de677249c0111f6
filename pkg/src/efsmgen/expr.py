"""Tokenizer and recursive-descent parser for transition expressions.

Four syntactic categories share one small grammar::

    input_event   ::= '?' Port '.' function_expr ';'
    output_event  ::= '!' Port '.' function_expr ';'
    function_expr ::= Identifier '(' [ expr { ',' expr } ] ')'
    action_list   ::= { Identifier '=' expr ';' }
    guard         ::= or_expr
    or_expr       ::= and_expr { '||' and_expr }
    and_expr      ::= unary_bool { '&&' unary_bool }
    unary_bool    ::= '!' unary_bool | rel_expr
    rel_expr      ::= add_expr [ ('=='|'!='|'<'|'<='|'>'|'>=') add_expr ]
    add_expr      ::= mul_expr { ('+'|'-') mul_expr }
    mul_expr      ::= unary { ('*'|'/'|'%') unary }
    unary         ::= '-' unary | primary
    primary       ::= IntegerLiteral | Identifier | '(' guard ')'

Blank text parses to the ``EMPTY`` tree in every category.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .errors import ExprSyntaxError, TypeShapeError, UnknownCharacter


class TokenKind(enum.Enum):
    IDENTIFIER = "identifier"
    INTEGER = "integer"
    PUNCT = "punct"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    offset: int


_TWO_CHAR = ("==", "!=", "<=", ">=", "&&", "||")
_ONE_CHAR = set("?!.(),;=<>+-*/%")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isascii() and ch.isalpha():
            j = i + 1
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token(TokenKind.IDENTIFIER, text[i:j], i))
            i = j
        elif ch.isascii() and ch.isdigit():
            j = i + 1
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            tokens.append(Token(TokenKind.INTEGER, text[i:j], i))
            i = j
        elif text[i : i + 2] in _TWO_CHAR:
            tokens.append(Token(TokenKind.PUNCT, text[i : i + 2], i))
            i += 2
        elif ch in _ONE_CHAR:
            tokens.append(Token(TokenKind.PUNCT, ch, i))
            i += 1
        else:
            raise UnknownCharacter(i, ch)
    return tokens


class NodeKind(enum.Enum):
    INPUT_EVENT = "input_event"
    OUTPUT_EVENT = "output_event"
    PORT = "port"
    FUNCTION_EXPR = "function_expr"
    PARAM_LIST = "params"
    ASSIGNMENT = "assign"
    ACTION_LIST = "action_list"
    OR = "or"
    AND = "and"
    NOT = "not"
    COMPARE = "compare"
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"
    MOD = "mod"
    NEG = "neg"
    INT = "int"
    VAR = "var"
    EMPTY = "empty"


@dataclass(frozen=True)
class ExprNode:
    """Immutable parse-tree node.

    ``value`` holds the name for VAR, PORT and FUNCTION_EXPR nodes, the integer
    for INT nodes and the operator text for COMPARE nodes.
    """

    kind: NodeKind
    children: tuple["ExprNode", ...] = ()
    value: int | str | None = None

    @property
    def is_empty(self) -> bool:
        return self.kind is NodeKind.EMPTY


EMPTY = ExprNode(NodeKind.EMPTY)


class StatementKind(enum.Enum):
    INPUT_EVENT = "input-event"
    OUTPUT_EVENT = "output-event"
    GUARD = "guard"
    ACTION_LIST = "action"


RELOPS = ("==", "!=", "<", "<=", ">", ">=")
_ADD_OPS = {"+": NodeKind.ADD, "-": NodeKind.SUB}
_MUL_OPS = {"*": NodeKind.MUL, "/": NodeKind.DIV, "%": NodeKind.MOD}
_BOOL_KINDS = {NodeKind.OR, NodeKind.AND, NodeKind.NOT, NodeKind.COMPARE}
_PRIMARY_START = ("identifier", "integer", "(", "-")


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token helpers

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def at(self, punct: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind is TokenKind.PUNCT and tok.text == punct

    def offset(self) -> int:
        tok = self.peek()
        return tok.offset if tok is not None else len(self.text)

    def fail(self, *expected: str):
        tok = self.peek()
        raise ExprSyntaxError(self.offset(), expected, tok.text if tok else "")

    def eat(self, punct: str) -> Token:
        if not self.at(punct):
            self.fail(punct)
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def identifier(self) -> str:
        tok = self.peek()
        if tok is None or tok.kind is not TokenKind.IDENTIFIER:
            self.fail("identifier")
        self.pos += 1
        return tok.text

    def end(self, *also_expected: str) -> None:
        if self.peek() is not None:
            self.fail("end of input", *also_expected)

    # -- statements

    def event(self, marker: str, kind: NodeKind) -> ExprNode:
        self.eat(marker)
        port = ExprNode(NodeKind.PORT, value=self.identifier())
        self.eat(".")
        func = self.function_expr()
        self.eat(";")
        self.end()
        return ExprNode(kind, (port, func))

    def function_expr(self) -> ExprNode:
        name = self.identifier()
        self.eat("(")
        params: list[ExprNode] = []
        if not self.at(")"):
            params.append(self.expr())
            while self.at(","):
                self.pos += 1
                params.append(self.expr())
        if not self.at(")"):
            self.fail(")", ",")
        self.pos += 1
        return ExprNode(NodeKind.FUNCTION_EXPR, (ExprNode(NodeKind.PARAM_LIST, tuple(params)),), name)

    def action_list(self) -> ExprNode:
        assignments = []
        while self.peek() is not None:
            target = ExprNode(NodeKind.VAR, value=self.identifier())
            self.eat("=")
            value = self.expr()
            if not self.at(";"):
                self.fail(";", *_continuations(value))
            self.pos += 1
            assignments.append(ExprNode(NodeKind.ASSIGNMENT, (target, value)))
        return ExprNode(NodeKind.ACTION_LIST, tuple(assignments))

    # -- expressions

    def expr(self) -> ExprNode:
        node = self.and_expr()
        while self.at("||"):
            self.pos += 1
            node = ExprNode(NodeKind.OR, (node, self.and_expr()))
        return node

    def and_expr(self) -> ExprNode:
        node = self.unary_bool()
        while self.at("&&"):
            self.pos += 1
            node = ExprNode(NodeKind.AND, (node, self.unary_bool()))
        return node

    def unary_bool(self) -> ExprNode:
        if self.at("!"):
            self.pos += 1
            return ExprNode(NodeKind.NOT, (self.unary_bool(),))
        return self.rel_expr()

    def rel_expr(self) -> ExprNode:
        left = self.add_expr()
        tok = self.peek()
        if tok is not None and tok.kind is TokenKind.PUNCT and tok.text in RELOPS:
            self.pos += 1
            return ExprNode(NodeKind.COMPARE, (left, self.add_expr()), tok.text)
        return left

    def add_expr(self) -> ExprNode:
        node = self.mul_expr()
        while (tok := self.peek()) is not None and tok.kind is TokenKind.PUNCT and tok.text in _ADD_OPS:
            self.pos += 1
            node = ExprNode(_ADD_OPS[tok.text], (node, self.mul_expr()))
        return node

    def mul_expr(self) -> ExprNode:
        node = self.unary()
        while (tok := self.peek()) is not None and tok.kind is TokenKind.PUNCT and tok.text in _MUL_OPS:
            self.pos += 1
            node = ExprNode(_MUL_OPS[tok.text], (node, self.unary()))
        return node

    def unary(self) -> ExprNode:
        if self.at("-"):
            self.pos += 1
            return ExprNode(NodeKind.NEG, (self.unary(),))
        return self.primary()

    def primary(self) -> ExprNode:
        tok = self.peek()
        if tok is None:
            self.fail(*_PRIMARY_START)
        if tok.kind is TokenKind.INTEGER:
            self.pos += 1
            return ExprNode(NodeKind.INT, value=int(tok.text))
        if tok.kind is TokenKind.IDENTIFIER:
            self.pos += 1
            return ExprNode(NodeKind.VAR, value=tok.text)
        if self.at("("):
            self.pos += 1
            node = self.expr()
            if not self.at(")"):
                self.fail(")", *_continuations(node))
            self.pos += 1
            return node
        self.fail(*_PRIMARY_START)


def _continuations(node: ExprNode) -> tuple[str, ...]:
    """Operators that could legally extend an already parsed expression."""
    ops = ["+", "-", "*", "/", "%", "&&", "||"]
    if node.kind is not NodeKind.COMPARE:
        ops.extend(RELOPS)
    return tuple(ops)


def sort_of(node: ExprNode) -> str:
    """Static value sort of an expression root: ``"bool"`` or ``"int"``."""
    return "bool" if node.kind in _BOOL_KINDS else "int"


def parse(kind: StatementKind | str, text: str) -> ExprNode:
    kind = StatementKind(kind)
    if not text.strip():
        # still reject stray characters hidden in whitespace-only text
        tokenize(text)
        return EMPTY
    p = _Parser(text)

    if kind is StatementKind.INPUT_EVENT:
        node = p.event("?", NodeKind.INPUT_EVENT)
        names = []
        for param in node.children[1].children[0].children:
            if param.kind is not NodeKind.VAR:
                raise TypeShapeError("input event parameters must be variable names")
            if param.value in names:
                raise TypeShapeError(f"input parameter {param.value!r} declared twice")
            names.append(param.value)
        return node
    if kind is StatementKind.OUTPUT_EVENT:
        return p.event("!", NodeKind.OUTPUT_EVENT)
    if kind is StatementKind.ACTION_LIST:
        return p.action_list()

    node = p.expr()
    if p.at("="):
        raise TypeShapeError("guard text is an assignment, not a condition", p.offset())
    if p.peek() is not None:
        p.end(*_continuations(node), ")")
    if sort_of(node) != "bool":
        raise TypeShapeError("guard must be a boolean expression")
    return node


# -- rendering -----------------------------------------------------------------

_LEAF_LABELS = {NodeKind.INT: "int", NodeKind.VAR: "var"}


def _leaf_text(node: ExprNode) -> str | None:
    if node.kind in _LEAF_LABELS:
        return str(node.value)
    return None


def _render(node: ExprNode, depth: int, lines: list[str]) -> None:
    pad = "  " * depth
    kind = node.kind
    if kind is NodeKind.PORT:
        lines.append(f"{pad}Port {node.value}")
    elif kind is NodeKind.FUNCTION_EXPR:
        lines.append(f"{pad}function_expr {node.value}")
        for param in node.children[0].children:
            leaf = _leaf_text(param)
            if leaf is not None:
                lines.append(f"{pad}  param {leaf}")
            else:
                lines.append(f"{pad}  param")
                _render(param, depth + 2, lines)
    elif kind is NodeKind.ASSIGNMENT:
        lines.append(f"{pad}assign {node.children[0].value}")
        _render(node.children[1], depth + 1, lines)
    elif kind is NodeKind.COMPARE:
        lines.append(f"{pad}compare {node.value}")
        for child in node.children:
            _render(child, depth + 1, lines)
    elif kind in _LEAF_LABELS:
        lines.append(f"{pad}{_LEAF_LABELS[kind]} {node.value}")
    elif kind is NodeKind.EMPTY:
        lines.append(f"{pad}(empty)")
    else:
        lines.append(f"{pad}{kind.value}")
        for child in node.children:
            _render(child, depth + 1, lines)


def render_tree(node: ExprNode) -> str:
    """One node per line, children indented two spaces below their parent."""
    lines: list[str] = []
    _render(node, 0, lines)
    return "\n".join(lines)


# -- identifier analysis ----------------------------------------------------------


class Identifiers(NamedTuple):
    used: frozenset[str]
    assigned: frozenset[str]
    declared_inputs: frozenset[str]


def variable_refs(node: ExprNode) -> Iterator[tuple[str, str]]:
    """Yield ``(role, name)`` pairs in source order.

    role is ``"use"``, ``"assign"`` or ``"input"``.
    """
    kind = node.kind
    if kind is NodeKind.VAR:
        yield "use", node.value
    elif kind is NodeKind.INPUT_EVENT:
        for param in node.children[1].children[0].children:
            yield "input", param.value
    elif kind is NodeKind.ASSIGNMENT:
        yield "assign", node.children[0].value
        yield from variable_refs(node.children[1])
    else:
        for child in node.children:
            yield from variable_refs(child)


def identifiers(node: ExprNode) -> Identifiers:
    groups: dict[str, set[str]] = {"use": set(), "assign": set(), "input": set()}
    for role, name in variable_refs(node):
        groups[role].add(name)
    return Identifiers(
        frozenset(groups["use"]), frozenset(groups["assign"]), frozenset(groups["input"])
    )


def input_params(node: ExprNode) -> tuple[str, ...]:
    """Declared parameter names of an input event, in declaration order."""
    if node.kind is not NodeKind.INPUT_EVENT:
        return ()
    return tuple(p.value for p in node.children[1].children[0].children)
