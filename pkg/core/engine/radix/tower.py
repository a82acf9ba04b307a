""" Normal-form arithmetic in A = S[w_1, ..., w_r] with w_i^p = f_i, optionally
extended by a linearly disjoint block S[z_1, ..., z_t] with z_j^p = g_j.
"""

from dataclasses import dataclass, field
from functools import cached_property
from math import comb

import itertools
import logging as log

import sympy

from radix import ring
from radix.exceptions import HypothesisError, VariableMismatch
from radix.ring import BasePoly, RadicandCertificate


STANDARD = "standard"
SHIFTED = "shifted"
BASES = (STANDARD, SHIFTED)


@dataclass(frozen=True)
class Radicand:
    """ A radicand f of degree n = p*d. ``cert`` is computed when omitted.
    """
    f: BasePoly
    d: int = 1
    cert: RadicandCertificate = None

    @property
    def h(self):
        return self.cert.h

    @property
    def g(self):
        return self.cert.g


@dataclass(frozen=True)
class TowerSpec:
    p: int
    radicands: tuple
    disjoint_block: tuple = ()

    @property
    def variables(self):
        polys = [radicand.f for radicand in self.radicands] + list(self.disjoint_block)
        return polys[0].variables if polys else ()


@dataclass(frozen=True)
class TowerCtx:
    """ A validated tower. ``hypotheses`` lists the checks that passed, in
    the order they were run.
    """
    p: int
    variables: tuple
    radicands: tuple
    block: tuple = ()
    hypotheses: tuple = field(default=(), compare=False)

    @property
    def r(self):
        return len(self.radicands)

    @property
    def t(self):
        return len(self.block)

    @property
    def slots(self):
        return self.r + self.t

    @property
    def rank(self):
        return self.p ** self.slots

    @property
    def fs(self):
        return tuple(radicand.f for radicand in self.radicands)

    @property
    def hs(self):
        return tuple(radicand.h for radicand in self.radicands)

    @property
    def gs(self):
        return tuple(radicand.g for radicand in self.radicands)

    @property
    def ds(self):
        return tuple(radicand.d for radicand in self.radicands)

    @cached_property
    def names(self):
        return tuple("w%d" % (i + 1) for i in range(self.r)) + \
            tuple("z%d" % (j + 1) for j in range(self.t))

    @cached_property
    def powers_of_roots(self):
        """ Value of slot^p for every slot: f_i then g_j
        """
        return self.fs + tuple(self.block)

    @cached_property
    def shifts(self):
        """ The h subtracted in shifted coordinates; 0 on the disjoint block
        """
        return self.hs + (self.zero_poly,) * self.t

    @cached_property
    def shift_powers(self):
        return tuple(
            tuple(shift ** e for e in range(self.p)) for shift in self.shifts)

    @cached_property
    def zero_poly(self):
        return BasePoly.zero(self.variables)

    @cached_property
    def one_poly(self):
        return BasePoly.one(self.variables)

    @cached_property
    def exponents(self):
        """ Every exponent vector of the normal-form basis, in graded order
        """
        return tuple(sorted(itertools.product(range(self.p), repeat=self.slots),
                            key=ring.graded_key))

    @cached_property
    def gens(self):
        return BasePoly.symbols(self.variables)

    def base(self, value):
        if isinstance(value, int):
            return BasePoly.constant(value, self.variables)
        if value.poly.gens != self.gens:
            return value.with_variables(self.variables)
        return value

    # Element constructors

    def element(self, coords, basis=STANDARD):
        return TowerElement(self, coords, basis)

    def zero(self, basis=STANDARD):
        return TowerElement(self, {}, basis)

    def one(self, basis=STANDARD):
        return self.scalar(1, basis)

    def scalar(self, value, basis=STANDARD):
        return TowerElement(self, {(0,) * self.slots: self.base(value)}, basis)

    def monomial(self, exponents, coefficient=1, basis=STANDARD):
        return TowerElement(self, {tuple(exponents): self.base(coefficient)}, basis)

    def unit_vector(self, slot):
        return tuple(int(n == slot) for n in range(self.slots))

    def root(self, i):
        """ w_i in the standard basis (0-based index)
        """
        return self.monomial(self.unit_vector(i))

    def block_root(self, j):
        return self.monomial(self.unit_vector(self.r + j))

    def shifted_root(self, i):
        """ w_i - h_i, kept in shifted coordinates
        """
        return self.monomial(self.unit_vector(i), basis=SHIFTED)

    def from_extended_poly(self, poly):
        """ Normal form of a polynomial over the base variables followed by
        the generator names, with unrestricted generator exponents.
        """
        width = len(self.variables)
        result = self.zero()
        for monomial, coeff in poly.as_dict().items():
            base_part, root_part = monomial[:width], monomial[width:]
            scale = BasePoly.from_dict({base_part: coeff}, self.variables)
            reduced = []
            for slot, exponent in enumerate(root_part):
                scale = scale * self.powers_of_roots[slot] ** (exponent // self.p)
                reduced.append(exponent % self.p)
            result = result + self.monomial(reduced, scale)
        return result


def make_tower(spec):
    """ Validate every hypothesis of a class one tower and freeze a context.
    Raises HypothesisError naming the first failed hypothesis.
    """
    from radix.transforms import check_linear_disjointness

    p = spec.p
    passed = []
    if not isinstance(p, int) or not sympy.isprime(p):
        raise HypothesisError("not-prime", "%r is not a prime" % (p,))
    passed.append("p = %d is prime" % p)

    if not spec.radicands and not spec.disjoint_block:
        raise HypothesisError("empty-tower", "a tower needs at least one radicand or block element")

    variables = spec.variables
    for poly in [radicand.f for radicand in spec.radicands] + list(spec.disjoint_block):
        if poly.variables != variables:
            raise VariableMismatch("mismatched variables {} and {}".format(
                variables, poly.variables))
    for name in variables:
        if name == "p" or (name[:1] in "wz" and name[1:].isdigit()):
            raise VariableMismatch("variable name %s is reserved" % name)

    radicands = []
    for index, radicand in enumerate(spec.radicands, 1):
        f, d = radicand.f, radicand.d
        if not isinstance(d, int) or d < 1 or d % p == 0:
            raise HypothesisError(
                "p-divides-d", "radicand %d: degree factor d = %r must be a positive integer prime to %d" % (index, d, p),
                witness=d)
        if f.is_zero or not ring.is_square_free(f):
            raise HypothesisError(
                "not-square-free", "radicand %d: %s is not square-free" % (index, f), witness=str(f))
        if f.divisible_by(p):
            raise HypothesisError(
                "p-divides-f", "radicand %d: %d divides %s" % (index, p, f), witness=str(f))
        cert = radicand.cert
        if cert is not None and not cert.check(f, p):
            raise HypothesisError(
                "not-p-power-mod-p2",
                "radicand %d: supplied certificate does not satisfy f = h^p + p^2 g" % index,
                witness=str(f))
        if cert is None:
            cert = ring.is_pth_power_mod_p2(f, p)
        if cert is None:
            raise HypothesisError(
                "not-p-power-mod-p2",
                "radicand %d: %s is not a p-th power mod p^2" % (index, f),
                witness=str(f))
        radicands.append(Radicand(f=f, d=d, cert=cert))
    if radicands:
        passed.append("radicands square-free")
        passed.append("radicands are p-th powers mod p^2")

    block = tuple(spec.disjoint_block)
    for index, g in enumerate(block, 1):
        if g.is_zero or g.divisible_by(p):
            raise HypothesisError(
                "disjoint-block-failure", "block element %d: %s vanishes mod %d" % (index, g, p),
                witness=str(g))

    if block:
        disjoint = check_linear_disjointness(block, p)
        if not disjoint:
            raise HypothesisError(
                "disjoint-block-failure",
                "block is not linearly disjoint mod %d" % p, witness=disjoint.witness)
        passed.append("block linearly disjoint mod p")
    for index, g in enumerate(block, 1):
        if not ring.is_square_free(g):
            raise HypothesisError(
                "not-square-free", "block element %d: %s is not square-free" % (index, g),
                witness=str(g))

    polys = [radicand.f for radicand in radicands] + list(block)
    pair = ring.first_common_factor(polys)
    if pair is not None:
        i, j = pair
        raise HypothesisError(
            "not-coprime", "%s and %s share a factor" % (polys[i], polys[j]),
            witness=(i + 1, j + 1))
    passed.append("pairwise coprime")

    ctx = TowerCtx(p=p, variables=variables, radicands=tuple(radicands),
                   block=block, hypotheses=tuple(passed))
    log.info("tower validated: p=%d r=%d t=%d rank=%d", p, ctx.r, ctx.t, ctx.rank)
    return ctx


class TowerElement(object):
    """ Element of A in normal form. ``coords`` maps exponent vectors (every
    entry below p) to nonzero base polynomials.
    """

    __slots__ = ("ctx", "coords", "basis")

    def __init__(self, ctx, coords, basis=STANDARD):
        if basis not in BASES:
            raise ValueError("unknown basis %r" % (basis,))
        cleaned = {}
        for exponents, coeff in coords.items():
            exponents = tuple(exponents)
            if len(exponents) != ctx.slots or any(not 0 <= e < ctx.p for e in exponents):
                raise ValueError("exponent vector {} is not reduced".format(exponents))
            coeff = ctx.base(coeff)
            if not coeff.is_zero:
                cleaned[exponents] = coeff
        self.ctx = ctx
        self.coords = cleaned
        self.basis = basis

    def _check(self, other):
        if not isinstance(other, TowerElement):
            raise TypeError("expected a tower element, got %r" % (other,))
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise VariableMismatch("elements of different towers")
        return other if other.basis == self.basis else other.change_basis(self.basis)

    def terms(self):
        """ (exponents, coefficient) pairs in graded order
        """
        return sorted(self.coords.items(), key=lambda item: ring.graded_key(item[0]))

    def coefficient(self, exponents):
        return self.coords.get(tuple(exponents), self.ctx.zero_poly)

    @property
    def is_zero(self):
        return not self.coords

    def divisible_by(self, n):
        return all(coeff.divisible_by(n) for coeff in self.coords.values())

    def exquo_int(self, n):
        return TowerElement(
            self.ctx, {e: c.exquo_int(n) for e, c in self.coords.items()}, self.basis)

    def scale(self, value):
        value = self.ctx.base(value)
        return TowerElement(
            self.ctx, {e: c * value for e, c in self.coords.items()}, self.basis)

    def __add__(self, other):
        other = self._check(other)
        coords = dict(self.coords)
        for exponents, coeff in other.coords.items():
            coords[exponents] = coords.get(exponents, self.ctx.zero_poly) + coeff
        return TowerElement(self.ctx, coords, self.basis)

    def __neg__(self):
        return TowerElement(self.ctx, {e: -c for e, c in self.coords.items()}, self.basis)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, BasePoly)):
            return self.scale(other)
        return mul_normal_form(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, BasePoly)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ctx.one(self.basis)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TowerElement):
            return NotImplemented
        other = self._check(other)
        return self.coords == other.coords

    def __hash__(self):
        standard = self.change_basis(STANDARD)
        return hash(frozenset(standard.coords.items()))

    def change_basis(self, target):
        return change_basis(self, target)

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return "TowerElement({!r}, {})".format(str(self), self.basis)


def mul_normal_form(a, b):
    """ Exact product with every exponent reduced below p by w^p -> f.
    The result is expressed in the basis of ``a``.
    """
    b = a._check(b)
    ctx = a.ctx
    left = a.change_basis(STANDARD)
    right = b.change_basis(STANDARD)
    p = ctx.p
    products = {}
    for e1, c1 in left.coords.items():
        for e2, c2 in right.coords.items():
            coeff = c1 * c2
            exponents = []
            for slot, (x, y) in enumerate(zip(e1, e2)):
                total = x + y
                if total >= p:
                    total -= p
                    coeff = coeff * ctx.powers_of_roots[slot]
                exponents.append(total)
            exponents = tuple(exponents)
            products[exponents] = products.get(exponents, ctx.zero_poly) + coeff
    return TowerElement(ctx, products, STANDARD).change_basis(a.basis)


def change_basis(a, target):
    """ Binomial transform between powers of w_i and powers of w_i - h_i.
    """
    if target not in BASES:
        raise ValueError("unknown basis %r" % (target,))
    if a.basis == target:
        return a
    ctx = a.ctx
    sign = 1 if target == SHIFTED else -1
    coords = {}
    for exponents, coeff in a.coords.items():
        choices = [range(e + 1) if ctx.shifts[slot] else (e,)
                   for slot, e in enumerate(exponents)]
        for lower in itertools.product(*choices):
            term = coeff
            for slot, (e, b) in enumerate(zip(exponents, lower)):
                if e == b:
                    continue
                term = term * (comb(e, b) * sign ** (e - b)) * ctx.shift_powers[slot][e - b]
            coords[lower] = coords.get(lower, ctx.zero_poly) + term
    return TowerElement(ctx, coords, target)


def format_factor(ctx, slot, exponent, shifted):
    name = ctx.names[slot]
    shift = ctx.shifts[slot]
    if shifted and not shift.is_zero:
        text = str(shift)
        if len(shift.terms()) > 1 or shift.leading_coefficient() < 0:
            text = "(%s)" % text
        base = "(%s - %s)" % (name, text)
    else:
        base = name
    return base if exponent == 1 else "%s^%d" % (base, exponent)


def format_monomial(ctx, exponents, shifted):
    factors = [format_factor(ctx, slot, e, shifted) for slot, e in enumerate(exponents) if e]
    return " * ".join(factors) if factors else "1"


def format_element(a):
    if a.is_zero:
        return "0"
    shifted = a.basis == SHIFTED
    chunks = []
    for exponents, coeff in a.terms():
        monomial = format_monomial(a.ctx, exponents, shifted)
        if monomial == "1":
            chunks.append("(%s)" % coeff)
        else:
            chunks.append("(%s) * %s" % (coeff, monomial))
    return " + ".join(chunks)
