""" Integrality by characteristic polynomials.

Since S is integrally closed, an element of K is integral over S iff the
characteristic polynomial of multiplication by it has coefficients in S. All
denominators here are powers of p, so entries are kept as (numerator, k).
"""

from dataclasses import dataclass, field

import logging as log
import random

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from radix.closure import ClosureElement, build_v_basis, reduce_to_v, run_tasks
from radix.exceptions import NotInModule
from radix.ring import BasePoly
from radix.tower import STANDARD, SHIFTED


def canonical_fraction(numerator, k, p):
    while k and not numerator.is_zero and numerator.divisible_by(p):
        numerator = numerator.exquo_int(p)
        k -= 1
    return numerator, (0 if numerator.is_zero else k)


@dataclass
class MulMatrix:
    """ Matrix of y -> xi * y on the standard normal-form basis. Column n
    holds the coordinates of xi times the n-th basis monomial; every entry is
    numerators[row][col] / p^k.
    """
    ctx: object
    exponents: tuple
    numerators: list
    k: int

    @property
    def dimension(self):
        return len(self.exponents)

    def entry(self, row, col):
        return canonical_fraction(self.numerators[row][col], self.k, self.ctx.p)


def multiplication_matrix(ctx, xi):
    if not isinstance(xi, ClosureElement):
        xi = ClosureElement(xi)
    exponents = ctx.exponents
    position = {e: n for n, e in enumerate(exponents)}
    numerator = xi.num.change_basis(STANDARD)
    size = len(exponents)
    numerators = [[ctx.zero_poly] * size for _ in range(size)]
    for col, e in enumerate(exponents):
        product = numerator * ctx.monomial(e)
        for monomial, coeff in product.coords.items():
            numerators[position[monomial]][col] = coeff
    return MulMatrix(ctx=ctx, exponents=exponents, numerators=numerators, k=xi.k)


@dataclass
class CharPoly:
    """ Monic T^n + c_1 T^(n-1) + ... + c_n, coefficient c_i stored as
    (numerator, k) meaning numerator / p^k
    """
    p: int
    coefficients: tuple

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def is_integral(self):
        return all(k == 0 for _, k in self.coefficients)

    def __str__(self):
        chunks = []
        for i, (numerator, k) in enumerate(self.coefficients):
            if numerator.is_zero:
                continue
            power = self.degree - i
            value = str(numerator) if k == 0 else "(%s)/%d^%d" % (numerator, self.p, k)
            chunks.append(value if power == 0 else "(%s)*T^%d" % (value, power))
        return " + ".join(chunks)


def charpoly(matrix):
    """ Division-free Berkowitz charpoly of the numerator matrix A over S,
    then c_i(A / p^k) = c_i(A) / p^(k i).
    """
    ctx = matrix.ctx
    domain = ZZ.poly_ring(*ctx.gens)
    rows = [[domain.ring.from_dict(entry.as_dict()) for entry in row]
            for row in matrix.numerators]
    size = matrix.dimension
    coefficients = DomainMatrix(rows, (size, size), domain).charpoly()
    result = []
    for i, coeff in enumerate(coefficients):
        numerator = BasePoly.from_dict(dict(coeff), ctx.variables)
        result.append(canonical_fraction(numerator, matrix.k * i, ctx.p))
    return CharPoly(p=ctx.p, coefficients=tuple(result))


def is_integral(ctx, xi):
    return charpoly(multiplication_matrix(ctx, xi)).is_integral


def cayley_hamilton(ctx, xi):
    """ chi(xi) = 0 in A[1/p]
    """
    if not isinstance(xi, ClosureElement):
        xi = ClosureElement(xi)
    poly = charpoly(multiplication_matrix(ctx, xi))
    value = ClosureElement(ctx.zero())
    for numerator, k in poly.coefficients:
        value = value * xi + ClosureElement(ctx.scalar(numerator), k)
    return value.is_zero


@dataclass
class Sample:
    index: int
    kind: str
    element: str
    in_module: bool
    integral: bool

    @property
    def agree(self):
        return self.in_module == self.integral


@dataclass
class CrosscheckReport:
    seed: int
    samples: list = field(default_factory=list)

    @property
    def disagreements(self):
        return [sample for sample in self.samples if not sample.agree]

    @property
    def ok(self):
        return not self.disagreements

    def count(self, attribute):
        return sum(1 for sample in self.samples if getattr(sample, attribute))


def _random_poly(rng, variables, bound=2):
    terms = {(0,) * len(variables): rng.randint(-bound, bound)}
    if rng.random() < 0.5:
        position = rng.randrange(len(variables))
        monomial = tuple(int(n == position) for n in range(len(variables)))
        terms[monomial] = rng.randint(-bound, bound)
    return BasePoly.from_dict(terms, variables)


def _random_combination(rng, basis):
    ctx = basis.ctx
    result = ClosureElement(ctx.zero(SHIFTED))
    for n in rng.sample(range(len(basis)), min(3, len(basis))):
        result = result + basis.element(n) * _random_poly(rng, ctx.variables)
    return result


def _random_tower_element(rng, ctx):
    coords = {}
    for e in rng.sample(ctx.exponents, min(3, len(ctx.exponents))):
        coords[e] = _random_poly(rng, ctx.variables)
    return ctx.element(coords, SHIFTED)


def draw_samples(ctx, basis, count, seed=0, max_denominator=1):
    """ Seeded list of (kind, element): every basis element and p^-1 first,
    then ``count`` random draws cycling through S-combinations of the basis,
    such combinations divided by p, and p^-k a with k <= r + max_denominator.
    """
    rng = random.Random(seed)
    samples = [("basis", basis.element(n)) for n in range(len(basis))]
    samples.append(("inverse p", ClosureElement(ctx.one(), 1)))
    kinds = ("combination", "combination / p", "random")
    for n in range(count):
        kind = kinds[n % len(kinds)]
        if kind == "combination":
            element = _random_combination(rng, basis)
        elif kind == "combination / p":
            element = _random_combination(rng, basis).divide_by_p()
        else:
            k = rng.randint(0, ctx.r + max_denominator)
            element = ClosureElement(_random_tower_element(rng, ctx), k)
        samples.append((kind, element))
    return samples


def _classify(task):
    ctx, basis, index, kind, element = task
    try:
        reduce_to_v(ctx, element, basis)
        in_module = True
    except NotInModule:
        in_module = False
    return Sample(index=index, kind=kind, element=str(element),
                  in_module=in_module, integral=is_integral(ctx, element))


def membership_crosscheck(ctx, sample_count, seed=0, basis=None, max_denominator=1, workers=1):
    """ reduce_to_v succeeds iff the charpoly is integral, on every sample
    """
    basis = basis if basis is not None else build_v_basis(ctx)
    samples = draw_samples(ctx, basis, sample_count, seed, max_denominator)
    tasks = [(ctx, basis, n, kind, element) for n, (kind, element) in enumerate(samples)]
    report = CrosscheckReport(seed=seed, samples=run_tasks(_classify, tasks, workers))
    for sample in report.disagreements:
        log.warning("oracle disagreement on sample %d (%s): module=%s integral=%s",
                    sample.index, sample.element, sample.in_module, sample.integral)
    log.info("oracle crosscheck: %d samples, %d disagreements",
             len(report.samples), len(report.disagreements))
    return report


@dataclass
class SharpnessCheck:
    entry: str
    integral: bool
    in_module: bool


def sharpness(ctx, basis=None):
    """ p^-(k+1) m is never integral for a basis entry p^-k m
    """
    basis = basis if basis is not None else build_v_basis(ctx)
    checks = []
    for n in range(len(basis)):
        element = basis.element(n).divide_by_p()
        try:
            reduce_to_v(ctx, element, basis)
            in_module = True
        except NotInModule:
            in_module = False
        checks.append(SharpnessCheck(entry=basis.line(n), integral=is_integral(ctx, element),
                                     in_module=in_module))
    return checks
