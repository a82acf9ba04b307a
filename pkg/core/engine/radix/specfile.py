""" Spec file reader.

A spec file is a list of ``key = value`` statements and blocks::

    # Y-disjoint example
    p = 3
    variables = [X, Y]
    radicand { f = "X^3 + 9", n = 3 }
    radicand {
        f = "x*y^4 + 9"
        factors = ["x*y^4 + 9" ^ 1]
    }
    disjoint { g = "Y" }

Statements are separated by newlines or commas; ``#`` starts a comment.
"""

from collections import namedtuple
from dataclasses import dataclass, field
from typing import Optional

import re

import sympy

from radix.closure import ClosureElement
from radix.exceptions import ParseError
from radix.ring import parse_poly
from radix.tower import Radicand, TowerSpec


Token = namedtuple("Token", ["kind", "value", "line", "column"])

TOKEN = re.compile(r"""
    (?P<space>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<string>"[^"\n]*")
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<symbol>[=\{\}\[\],^])
""", re.VERBOSE)

IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
RESERVED = re.compile(r"^(p|w\d+|z\d+)$")
ELEMENT = re.compile(r"^\s*(?:(p|\d+)\s*\^\s*-\s*(\d+)\s*\*)?\s*(.*)$", re.DOTALL)

TOP_LEVEL = ("p", "variables", "seed", "samples", "k_candidates", "root_variables")
BLOCKS = {
    "radicand": ("f", "n", "factors"),
    "disjoint": ("g",),
}


def tokenize(text):
    tokens = []
    line, start = 1, 0
    position = 0
    while position < len(text):
        match = TOKEN.match(text, position)
        if match is None:
            raise ParseError("unexpected character %r" % text[position],
                             line=line, column=position - start + 1)
        kind = match.lastgroup
        if kind == "newline":
            tokens.append(Token("newline", "\n", line, position - start + 1))
            line, start = line + 1, match.end()
        elif kind not in ("space", "comment"):
            tokens.append(Token(kind, match.group(), line, position - start + 1))
        position = match.end()
    tokens.append(Token("end", "", line, position - start + 1))
    return tokens


@dataclass
class Text:
    """ A polynomial literal and where it was written
    """
    value: str
    line: int
    column: int


@dataclass
class RadicandEntry:
    f: Text
    n: int
    factors: Optional[list] = None
    line: int = 0


@dataclass
class SpecFile:
    p: int
    variables: tuple
    radicands: list = field(default_factory=list)
    disjoint: list = field(default_factory=list)
    k_candidates: Optional[tuple] = None
    seed: Optional[int] = None
    samples: Optional[int] = None
    root_variables: Optional[tuple] = None

    def poly(self, text):
        """ Parse a polynomial literal, reporting errors at its position
        """
        try:
            return parse_poly(text.value, self.variables)
        except ParseError as error:
            column = text.column + (error.column or 1)
            raise ParseError(error.message, line=text.line, column=column)

    def to_tower_spec(self):
        radicands = tuple(Radicand(f=self.poly(entry.f), d=entry.n // self.p)
                          for entry in self.radicands)
        block = tuple(self.poly(text) for text in self.disjoint)
        return TowerSpec(p=self.p, radicands=radicands, disjoint_block=block)

    def pipeline_inputs(self):
        """ (fs, ns, factorizations) for the small Cohen-Macaulay workflow
        """
        fs, ns, factorizations = [], [], {}
        for index, entry in enumerate(self.radicands):
            fs.append(self.poly(entry.f))
            ns.append(entry.n)
            if entry.factors is not None:
                factorizations[index] = [(self.poly(text), c) for text, c in entry.factors]
        return fs, ns, factorizations

    def config_values(self):
        """ Overrides this file contributes to the configuration
        """
        return {
            "RADIX_SEED": self.seed,
            "RADIX_SAMPLES": self.samples,
            "RADIX_K_CANDIDATES": ",".join(map(str, self.k_candidates)) if self.k_candidates else None,
        }


class SpecParser(object):

    def __init__(self, text):
        self.tokens = tokenize(text)
        self.position = 0

    def peek(self):
        return self.tokens[self.position]

    def next(self):
        token = self.tokens[self.position]
        self.position += 1
        return token

    def error(self, message, token=None):
        token = token or self.peek()
        return ParseError(message, line=token.line, column=token.column)

    def expect(self, kind, value=None):
        token = self.next()
        if token.kind != kind or (value is not None and token.value != value):
            wanted = value or kind
            found = token.value if token.kind != "end" else "end of file"
            raise self.error("expected %s, found %r" % (wanted, found), token)
        return token

    def skip_separators(self):
        while self.peek().kind == "newline" or self.peek().value == ",":
            self.next()

    def value(self):
        token = self.peek()
        if token.kind == "int":
            self.next()
            return int(token.value), token
        if token.kind == "string":
            self.next()
            text = Text(token.value[1:-1], token.line, token.column)
            if self.peek().value == "^":
                self.next()
                exponent = self.expect("int")
                return (text, int(exponent.value)), token
            return text, token
        if token.kind == "ident":
            self.next()
            return token.value, token
        if token.value == "[":
            self.next()
            items = []
            while True:
                while self.peek().kind == "newline":
                    self.next()
                if self.peek().value == "]":
                    self.next()
                    return items, token
                items.append(self.value()[0])
                while self.peek().kind == "newline":
                    self.next()
                if self.peek().value == ",":
                    self.next()
                elif self.peek().value != "]":
                    raise self.error("expected , or ]")
        raise self.error("expected a value")

    def assignments(self, allowed, closing=None):
        values = {}
        while True:
            self.skip_separators()
            token = self.peek()
            if closing is not None and token.value == closing:
                self.next()
                return values
            if token.kind == "end":
                if closing is not None:
                    raise self.error("missing %s" % closing)
                return values
            key = self.expect("ident")
            if self.peek().value == "{" and closing is None:
                self.next()
                if key.value not in BLOCKS:
                    raise self.error("unknown block %s" % key.value, key)
                block = self.assignments(BLOCKS[key.value], "}")
                values.setdefault(key.value, []).append((block, key))
                continue
            if key.value not in allowed:
                raise self.error("unknown key %s" % key.value, key)
            if key.value in values:
                raise self.error("duplicate key %s" % key.value, key)
            self.expect("symbol", "=")
            values[key.value] = self.value()
            following = self.peek()
            if following.kind not in ("newline", "end") and following.value not in (",", closing):
                raise self.error("expected a newline or , after %s" % key.value, following)


def _int(values, key, default=None):
    if key not in values:
        return default
    value, token = values[key]
    if not isinstance(value, int):
        raise ParseError("%s must be an integer" % key, line=token.line, column=token.column)
    return value


def _text(values, key, block_token):
    if key not in values:
        raise ParseError("missing %s" % key, line=block_token.line, column=block_token.column)
    value, token = values[key]
    if not isinstance(value, Text):
        raise ParseError("%s must be a quoted polynomial" % key, line=token.line, column=token.column)
    return value


def parse_spec(text):
    values = SpecParser(text).assignments(TOP_LEVEL)
    if "p" not in values:
        raise ParseError("missing p", line=1, column=1)
    p = _int(values, "p")
    if p < 2 or not sympy.isprime(p):
        token = values["p"][1]
        raise ParseError("p = %d is not a prime" % p, line=token.line, column=token.column)

    if "variables" not in values:
        raise ParseError("missing variables", line=1, column=1)
    names, token = values["variables"]
    names = names if isinstance(names, list) else [names]
    variables = []
    for name in names:
        name = name.value if isinstance(name, Text) else name
        if not isinstance(name, str) or not IDENTIFIER.match(name):
            raise ParseError("invalid variable name %r" % (name,), line=token.line, column=token.column)
        if RESERVED.match(name):
            raise ParseError("variable name %s is reserved" % name, line=token.line, column=token.column)
        if name in variables:
            raise ParseError("duplicate variable %s" % name, line=token.line, column=token.column)
        variables.append(name)
    if not variables:
        raise ParseError("at least one variable is required", line=token.line, column=token.column)

    spec = SpecFile(p=p, variables=tuple(variables))
    for block, block_token in values.get("radicand", []):
        f = _text(block, "f", block_token)
        n = _int(block, "n", p)
        if n % p or n % (p * p) == 0:
            token = block.get("n", (None, block_token))[1]
            raise ParseError("n = %d needs %d | n and %d ∤ n" % (n, p, p * p),
                             line=token.line, column=token.column)
        factors = None
        if "factors" in block:
            items, token = block["factors"]
            if not isinstance(items, list) or not all(isinstance(item, tuple) for item in items):
                raise ParseError('factors must be a list of "poly" ^ exponent',
                                 line=token.line, column=token.column)
            factors = list(items)
        spec.radicands.append(RadicandEntry(f=f, n=n, factors=factors, line=block_token.line))
    for block, block_token in values.get("disjoint", []):
        spec.disjoint.append(_text(block, "g", block_token))

    spec.seed = _int(values, "seed")
    spec.samples = _int(values, "samples")
    if "k_candidates" in values:
        items, token = values["k_candidates"]
        items = items if isinstance(items, list) else [items]
        if not items or not all(isinstance(k, int) and k >= 1 for k in items):
            raise ParseError("k_candidates must be positive integers", line=token.line, column=token.column)
        spec.k_candidates = tuple(items)
    if "root_variables" in values:
        items, token = values["root_variables"]
        items = tuple(item.value if isinstance(item, Text) else item for item in items)
        if len(items) != len(variables) or len(set(items)) != len(items):
            raise ParseError("root_variables needs one distinct name per variable",
                             line=token.line, column=token.column)
        spec.root_variables = items

    # every polynomial literal must parse
    for entry in spec.radicands:
        spec.poly(entry.f)
        for text, _ in entry.factors or ():
            spec.poly(text)
    for text in spec.disjoint:
        spec.poly(text)
    return spec


def parse_element(text, ctx):
    """ Read ``p^-k * <polynomial in the variables and w1.., z1..>``; the
    prefix is optional and p may be written as a number.
    """
    match = ELEMENT.match(text)
    prime, k, body = match.groups()
    if prime is not None and prime != "p" and int(prime) != ctx.p:
        raise ParseError("denominator base %s is not p = %d" % (prime, ctx.p), column=1)
    k = int(k) if k is not None else 0
    offset = match.start(3)
    try:
        poly = parse_poly(body, ctx.variables + ctx.names)
    except ParseError as error:
        raise ParseError(error.message, column=offset + (error.column or 1))
    return ClosureElement(ctx.from_extended_poly(poly), k)
