""" Exact arithmetic in the base ring S = Z[x_1, ..., x_d].

The localization at (p, x_1, ..., x_d) is implicit: square-freeness and
coprimality are decided globally over Z[x], which is stronger than the local
hypotheses and needs no factorization.
"""

from dataclasses import dataclass
from typing import Tuple

import itertools
import logging as log
import re

import sympy
from sympy import Poly, ZZ
from sympy.parsing.sympy_parser import (
    parse_expr, standard_transformations, convert_xor
)
from sympy.polys.polyerrors import (
    ExactQuotientFailed, CoercionFailed, PolynomialError, GeneratorsNeeded
)

from radix.exceptions import ParseError, VariableMismatch


Monomial = Tuple[int, ...]

TRANSFORMATIONS = standard_transformations + (convert_xor,)
IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
ALLOWED = re.compile(r"[A-Za-z0-9_\s+\-*^()]")


def graded_key(monomial):
    """ Sort key for ascending graded-lex order, ties broken by variable
    index (larger exponent on an earlier variable comes first).
    """
    return (sum(monomial), tuple(-e for e in monomial))


class BasePoly(object):
    """ Immutable polynomial with integer coefficients over a fixed list of
    variables. Wraps a sympy ``Poly`` over ``ZZ``.
    """

    __slots__ = ("poly",)

    def __init__(self, poly):
        if not poly.domain.is_ZZ:
            raise TypeError("coefficients must be integers, got domain %s" % poly.domain)
        self.poly = poly

    # Constructors

    @staticmethod
    def symbols(variables):
        return tuple(sympy.Symbol(name) for name in variables)

    @classmethod
    def from_dict(cls, terms, variables):
        terms = {tuple(monomial): int(coeff) for monomial, coeff in terms.items() if coeff}
        return cls(Poly.from_dict(terms, *cls.symbols(variables), domain=ZZ))

    @classmethod
    def constant(cls, value, variables):
        zero = (0,) * len(variables)
        return cls.from_dict({zero: value}, variables)

    @classmethod
    def zero(cls, variables):
        return cls.from_dict({}, variables)

    @classmethod
    def one(cls, variables):
        return cls.constant(1, variables)

    @classmethod
    def variable(cls, name, variables):
        exponents = tuple(int(other == name) for other in variables)
        if not any(exponents):
            raise VariableMismatch("unknown variable %s" % name)
        return cls.from_dict({exponents: 1}, variables)

    @classmethod
    def from_expr(cls, expr, variables):
        return cls(Poly(expr, *cls.symbols(variables), domain=ZZ))

    # Accessors

    @property
    def variables(self):
        return tuple(str(gen) for gen in self.poly.gens)

    def terms(self):
        """ Nonzero terms in descending graded-lex order
        """
        return [(tuple(monomial), int(coeff))
                for monomial, coeff in self.poly.terms(order="grlex")
                if coeff]

    def as_dict(self):
        return {tuple(m): int(c) for m, c in self.poly.as_dict(native=True).items()}

    @property
    def is_zero(self):
        return self.poly.is_zero

    @property
    def is_ground(self):
        return self.poly.is_ground

    def constant_term(self):
        return self.as_dict().get((0,) * len(self.poly.gens), 0)

    def leading_coefficient(self):
        terms = self.terms()
        return terms[0][1] if terms else 0

    def total_degree(self):
        return -1 if self.is_zero else self.poly.total_degree()

    def content(self):
        return abs(int(self.poly.content())) if not self.is_zero else 0

    def coefficients_in(self, name):
        """ Split into {power of ``name``: coefficient over the other variables}
        """
        variables = self.variables
        index = variables.index(name)
        rest = variables[:index] + variables[index + 1:]
        parts = {}
        for monomial, coeff in self.as_dict().items():
            power = monomial[index]
            reduced = monomial[:index] + monomial[index + 1:]
            parts.setdefault(power, {})[reduced] = coeff
        return {power: BasePoly.from_dict(terms, rest) for power, terms in parts.items()}

    # Ring changes

    def with_variables(self, variables):
        """ Re-express over another variable list containing every variable
        this polynomial actually uses.
        """
        variables = tuple(variables)
        if variables == self.variables:
            return self
        positions = {name: n for n, name in enumerate(variables)}
        terms = {}
        for monomial, coeff in self.as_dict().items():
            target = [0] * len(variables)
            for name, exponent in zip(self.variables, monomial):
                if not exponent:
                    continue
                if name not in positions:
                    raise VariableMismatch("variable %s is not in %s" % (name, variables))
                target[positions[name]] = exponent
            terms[tuple(target)] = coeff
        return BasePoly.from_dict(terms, variables)

    def substitute_powers(self, k, variables):
        """ Image under x_i -> y_i^k where ``variables`` names the y_i
        """
        if k < 1:
            raise ValueError("k must be positive")
        if len(variables) != len(self.variables):
            raise VariableMismatch("substitution needs one new name per variable")
        terms = {tuple(e * k for e in m): c for m, c in self.as_dict().items()}
        return BasePoly.from_dict(terms, variables)

    def mod(self, modulus):
        """ Coefficients reduced into [0, modulus)
        """
        return BasePoly.from_dict(
            {m: c % modulus for m, c in self.as_dict().items()}, self.variables)

    def divisible_by(self, n):
        return all(c % n == 0 for c in self.as_dict().values())

    def exquo_int(self, n):
        if not self.divisible_by(n):
            raise ArithmeticError("%s is not divisible by %d" % (self, n))
        return BasePoly(self.poly.exquo_ground(n))

    def diff(self, name):
        return BasePoly(self.poly.diff(sympy.Symbol(name)))

    # Arithmetic

    def _coerce(self, other):
        if isinstance(other, BasePoly):
            if other.poly.gens != self.poly.gens:
                raise VariableMismatch("mismatched variables {} and {}".format(
                    self.variables, other.variables))
            return other
        if isinstance(other, int):
            return BasePoly.constant(other, self.variables)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return BasePoly(self.poly + other.poly)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return BasePoly(self.poly - other.poly)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return BasePoly(other.poly - self.poly)

    def __neg__(self):
        return BasePoly(-self.poly)

    def __mul__(self, other):
        if isinstance(other, int):
            return BasePoly(self.poly.mul_ground(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return BasePoly(self.poly * other.poly)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        return BasePoly(self.poly ** exponent)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_ground and self.constant_term() == other
        if not isinstance(other, BasePoly):
            return NotImplemented
        return self.poly.gens == other.poly.gens and self.poly.rep == other.poly.rep

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash((self.variables, frozenset(self.as_dict().items())))

    def __bool__(self):
        return not self.is_zero

    def __str__(self):
        return format_terms(self.terms(), self.variables)

    def __repr__(self):
        return "BasePoly({!r}, {})".format(str(self), self.variables)


def format_monomial(monomial, variables):
    factors = []
    for name, exponent in zip(variables, monomial):
        if exponent == 1:
            factors.append(name)
        elif exponent:
            factors.append("{}^{}".format(name, exponent))
    return "*".join(factors)


def format_terms(terms, variables):
    """ Deterministic text form, e.g. ``X^3*Y - 3*X + 9``
    """
    if not terms:
        return "0"
    chunks = []
    for position, (monomial, coeff) in enumerate(terms):
        body = format_monomial(monomial, variables)
        magnitude = abs(coeff)
        if not body:
            text = str(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = "{}*{}".format(magnitude, body)
        if position == 0:
            chunks.append(text if coeff > 0 else "-" + text)
        else:
            chunks.append((" + " if coeff > 0 else " - ") + text)
    return "".join(chunks)


@dataclass(frozen=True)
class RadicandCertificate:
    """ Witness that f = h^p + p^2 g
    """
    h: BasePoly
    g: BasePoly

    def check(self, f, p):
        return self.h ** p + self.g * (p * p) == f


def parse_poly(text, variables):
    """ Parse integer literals, declared variables, ``+ - * ^`` and
    parentheses. Division is not part of the grammar.
    """
    variables = tuple(variables)
    for column, char in enumerate(text, 1):
        if not ALLOWED.match(char):
            raise ParseError("unexpected character %r" % char, column=column)
    for match in IDENTIFIER.finditer(text):
        if match.group() not in variables:
            raise ParseError("unknown variable %s" % match.group(), column=match.start() + 1)
    if not text.strip():
        raise ParseError("empty polynomial", column=1)
    local = dict(zip(variables, BasePoly.symbols(variables)))
    try:
        expr = parse_expr(text, local_dict=local, transformations=TRANSFORMATIONS)
    except (SyntaxError, TypeError, sympy.SympifyError) as error:
        raise ParseError("malformed polynomial %r (%s)" % (text, error), column=1)
    try:
        return BasePoly.from_expr(expr, variables)
    except (PolynomialError, CoercionFailed, GeneratorsNeeded):
        raise ParseError("%r is not a polynomial with integer coefficients" % text, column=1)


def _require_prime(p):
    if not isinstance(p, int) or not sympy.isprime(p):
        raise ValueError("%r is not a prime" % (p,))


def exact_divide(a, b):
    """ Return q with a = b*q over Z[x], or None if there is none
    """
    b = a._coerce(b)
    if b.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    try:
        quotient = BasePoly(a.poly.exquo(b.poly))
    except ExactQuotientFailed:
        return None
    if quotient * b != a:
        return None
    return quotient


def gcd(a, b):
    """ Greatest common divisor over Z[x] with positive leading coefficient
    (graded-lex leading term)
    """
    b = a._coerce(b)
    if a.is_zero and b.is_zero:
        raise ValueError("gcd of two zero polynomials")
    result = BasePoly(a.poly.gcd(b.poly))
    if result.leading_coefficient() < 0:
        result = -result
    return result


def pth_root_mod_p(f, p):
    """ The unique h (coefficients in [0, p)) with h^p = f mod p, or None.
    Over F_p the Frobenius fixes every coefficient, so a root exists iff every
    surviving exponent is divisible by p.
    """
    _require_prime(p)
    terms = {}
    for monomial, coeff in f.mod(p).as_dict().items():
        if any(e % p for e in monomial):
            return None
        terms[tuple(e // p for e in monomial)] = coeff
    return BasePoly.from_dict(terms, f.variables)


def is_pth_power_mod_p(f, p):
    """ Membership in S^{p∧p}
    """
    return pth_root_mod_p(f, p) is not None


def is_pth_power_mod_p2(f, p):
    """ Return a certificate (h, g) with f = h^p + p^2 g, or None when f is
    not a p-th power modulo p^2. The test is independent of the lift of the
    root mod p since (h + pc)^p = h^p mod p^2, p = 2 included.
    """
    h = pth_root_mod_p(f, p)
    if h is None:
        return None
    difference = f - h ** p
    if not difference.divisible_by(p * p):
        log.debug("%s is a p-th power mod %d but not mod %d", f, p, p * p)
        return None
    return RadicandCertificate(h=h, g=difference.exquo_int(p * p))


def is_square_free(f):
    """ No repeated prime factor in Z[x]: square-free integer content and a
    primitive part coprime (over Q) to all of its partial derivatives.
    """
    if f.is_zero:
        raise ValueError("square-freeness of zero is undefined")
    content = f.content()
    if any(exponent > 1 for exponent in sympy.factorint(content).values()):
        return False
    primitive = f.exquo_int(content)
    common = primitive
    for name in f.variables:
        derivative = primitive.diff(name)
        if derivative.is_zero:
            continue
        common = gcd(common, derivative)
        if common.is_ground:
            return True
    return common.is_ground


def pairwise_coprime(fs):
    """ gcd(f_i, f_j) = 1 for all i < j
    """
    fs = list(fs)
    for left, right in itertools.combinations(fs, 2):
        if left.is_zero or right.is_zero:
            raise ValueError("coprimality of zero is undefined")
        if gcd(left, right) != 1:
            return False
    return True


def first_common_factor(fs):
    """ Indices of the first pair sharing a nontrivial factor, or None
    """
    for (i, left), (j, right) in itertools.combinations(enumerate(fs), 2):
        if gcd(left, right) != 1:
            return i, j
    return None


def is_local_unit(u, p):
    """ Unit in the localization at (p, x): the constant coefficient is
    prime to p. Non-constant local units such as X + 2 are accepted.
    """
    if isinstance(u, int):
        return u % p != 0
    return u.constant_term() % p != 0
