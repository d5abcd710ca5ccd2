"""Recursive-descent parser for the concrete formula syntax.

Grammar (EBNF, also published in the README):

    formula   ::= or_expr
    or_expr   ::= and_expr { "|" and_expr }
    and_expr  ::= unary { "&" unary }
    unary     ::= "!" unary | modality | atom
    modality  ::= "<" coalition ">" tail
    coalition ::= "{" [ agents ] "}" ":" bounds          (plain form)
                | "{" row { ";" row } "}"                (endowment form)
    row       ::= ident ":" bounds
    agents    ::= ident { "," ident }
    bounds    ::= bound { "," bound }
    bound     ::= nat | "inf"
    tail      ::= "X" unary | "G" unary | "(" formula "U" formula ")"
    atom      ::= "true" | "false" | ident | "(" formula ")"

`X`, `G`, `U`, `true`, `false` and `inf` are reserved words.  The endowment
form is only accepted with endowments=True and is translated on the fly:
each annotated modality gets the per-resource sum of its members' rows as
its bound.
"""

from __future__ import annotations

import re

from .errors import FormulaError
from .formula import (
    FALSE,
    TRUE,
    CoalitionAlways,
    CoalitionNext,
    CoalitionUntil,
    Formula,
    Not,
    Or,
    And,
    Prop,
)
from .vectors import INF

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<nat>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[<>{}(),;:|&!])"
)

_RESERVED = {"true", "false", "inf", "X", "G", "U"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, endowments: bool):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.endowments = endowments

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message):
        _, value, pos = self.peek()
        raise FormulaError(message, pos)

    def expect(self, value):
        kind, val, pos = self.peek()
        if val != value or kind == "eof":
            self.error(f"expected {value!r}")
        return self.next()

    def at(self, value):
        kind, val, _ = self.peek()
        return kind != "eof" and val == value

    def ident(self, what="identifier"):
        kind, val, pos = self.peek()
        if kind != "ident" or val in _RESERVED:
            self.error(f"expected {what}")
        return self.next()[1]

    def agent_name(self):
        # agents may carry bare numeric names (e.g. reduced game models)
        kind, val, _ = self.peek()
        if kind == "nat":
            return self.next()[1]
        return self.ident("agent name")

    # -- entry ---------------------------------------------------------

    def parse(self) -> Formula:
        f = self.or_expr()
        if self.peek()[0] != "eof":
            self.error("trailing input after formula")
        return f

    def or_expr(self) -> Formula:
        f = self.and_expr()
        while self.at("|"):
            self.next()
            f = Or(f, self.and_expr())
        return f

    def and_expr(self) -> Formula:
        f = self.unary()
        while self.at("&"):
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.at("!"):
            self.next()
            return Not(self.unary())
        if self.at("<"):
            return self.modality()
        return self.atom()

    def atom(self) -> Formula:
        kind, val, pos = self.peek()
        if val == "(":
            self.next()
            f = self.or_expr()
            self.expect(")")
            return f
        if kind == "ident":
            if val == "true":
                self.next()
                return TRUE
            if val == "false":
                self.next()
                return FALSE
            if val in _RESERVED:
                self.error("expected a proposition")
            self.next()
            return Prop(val)
        self.error("expected a formula")

    # -- modalities ----------------------------------------------------

    def bound_component(self):
        kind, val, pos = self.peek()
        if kind == "nat":
            self.next()
            return int(val)
        if kind == "ident" and val == "inf":
            self.next()
            return INF
        self.error("expected a natural number or 'inf'")

    def bound_vec(self) -> tuple:
        comps = [self.bound_component()]
        while self.at(","):
            self.next()
            comps.append(self.bound_component())
        return tuple(comps)

    def modality(self) -> Formula:
        self.expect("<")
        self.expect("{")
        coalition, bound = self.coalition_and_bound()
        self.expect(">")
        return self.tail(coalition, bound)

    def coalition_and_bound(self):
        if self.at("}"):  # empty coalition, plain form only
            self.next()
            self.expect(":")
            return (), self.bound_vec()
        first = self.agent_name()
        if self.at(":"):
            return self.endowment_rows(first)
        agents = [first]
        while self.at(","):
            self.next()
            agents.append(self.agent_name())
        if self.at(";") or self.at(":"):
            if self.endowments:
                raise FormulaError(
                    f"no endowment row for agent {first!r}", self.peek()[2]
                )
            self.error("expected ',' or '}' in coalition")
        self.expect("}")
        self.expect(":")
        return tuple(agents), self.bound_vec()

    def endowment_rows(self, first_agent):
        if not self.endowments:
            raise FormulaError(
                "endowment syntax not allowed here (use the translator)",
                self.peek()[2],
            )
        rows = {}
        agent = first_agent
        while True:
            self.expect(":")
            if agent in rows:
                raise FormulaError(f"duplicate endowment row for agent {agent!r}")
            rows[agent] = self.bound_vec()
            if self.at(";"):
                self.next()
                agent = self.agent_name()
                if not self.at(":"):
                    raise FormulaError(
                        f"no endowment row for agent {agent!r}", self.peek()[2]
                    )
                continue
            break
        self.expect("}")
        lengths = {len(v) for v in rows.values()}
        if len(lengths) > 1:
            raise FormulaError("endowment rows have differing lengths")
        r = lengths.pop()
        bound = tuple(
            sum((row[i] for row in rows.values()), 0) for i in range(r)
        )
        return tuple(rows), bound

    def tail(self, coalition, bound) -> Formula:
        kind, val, pos = self.peek()
        if val == "X":
            self.next()
            return CoalitionNext(coalition, bound, self.unary())
        if val == "G":
            self.next()
            return CoalitionAlways(coalition, bound, self.unary())
        if val == "(":
            self.next()
            hold = self.or_expr()
            self.expect("U")
            goal = self.or_expr()
            self.expect(")")
            return CoalitionUntil(coalition, bound, hold, goal)
        self.error("expected 'X', 'G' or a parenthesised until body")


def parse_formula(text: str, *, endowments: bool = False) -> Formula:
    """Parse concrete syntax into an AST.

    With endowments=True the per-agent endowment form is also accepted and
    every annotation is replaced by the per-resource sum of its rows.
    """
    return _Parser(text, endowments).parse()


def translate_endowments(text: str) -> Formula:
    """Parse a formula with endowment annotations into a bound formula."""
    return parse_formula(text, endowments=True)
