""" The integral closure R of S in a class one tower, written as the S-span of
the basis

    p^-k * (w_1 - h_1)^j_1 * ... * (w_r - h_r)^j_r,   k = floor(sum(j) / (p - 1))

together with the identities that make it integral and closed under
multiplication.
"""

from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Optional

import itertools
import logging as log
import multiprocessing
import operator

from radix import ring
from radix.exceptions import HypothesisError, NotInModule
from radix.ring import BasePoly
from radix.tower import SHIFTED, TowerElement, format_monomial


class ClosureElement(object):
    """ The element p^-k * num of A[1/p], kept with minimal k.
    """

    __slots__ = ("k", "num")

    def __init__(self, num, k=0):
        if k < 0:
            raise ValueError("denominator exponent must be nonnegative")
        p = num.ctx.p
        while k and not num.is_zero and num.divisible_by(p):
            num = num.exquo_int(p)
            k -= 1
        if num.is_zero:
            k = 0
        self.num = num
        self.k = k

    @property
    def ctx(self):
        return self.num.ctx

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_in_tower(self):
        return self.k == 0

    def with_basis(self, basis):
        return ClosureElement(self.num.change_basis(basis), self.k)

    def divide_by_p(self, power=1):
        return ClosureElement(self.num, self.k + power)

    def _coerce(self, other):
        if isinstance(other, ClosureElement):
            return other
        if isinstance(other, TowerElement):
            return ClosureElement(other)
        if isinstance(other, (int, BasePoly)):
            return ClosureElement(self.ctx.scalar(other, self.num.basis))
        raise TypeError("cannot combine %r with a closure element" % (other,))

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ctx.p
        top = max(self.k, other.k)
        left = self.num.scale(p ** (top - self.k))
        right = other.num.scale(p ** (top - other.k))
        return ClosureElement(left + right, top)

    __radd__ = __add__

    def __neg__(self):
        return ClosureElement(-self.num, self.k)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return ClosureElement(self.num * other.num, self.k + other.k)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        return ClosureElement(self.num ** exponent, self.k * exponent)

    def __eq__(self, other):
        if not isinstance(other, (ClosureElement, TowerElement, int, BasePoly)):
            return NotImplemented
        return (self - other).is_zero

    def __hash__(self):
        return hash((self.k, self.num))

    def __str__(self):
        if self.k == 0:
            return str(self.num)
        return "%d^-%d * [%s]" % (self.ctx.p, self.k, self.num)

    def __repr__(self):
        return "ClosureElement({!r})".format(str(self))


# C' and the correction element tau

def _free_name(variables, preferred):
    name = preferred
    while name in variables:
        name += "_"
    return name


def _divided_shift_difference(W, h, p):
    """ ((W^p - h^p) - (W - h)^p) / (p (W - h)) by exact division
    """
    numerator = (W ** p - h ** p) - (W - h) ** p
    quotient = ring.exact_divide(numerator, (W - h) * p)
    if quotient is None:
        raise ArithmeticError("p (W - h) does not divide (W^p - h^p) - (W - h)^p")
    return quotient


@dataclass(frozen=True)
class UniversalCPrime:
    """ C' over Z[W, h] with h a free symbol
    """
    p: int
    poly: BasePoly

    @property
    def at_h(self):
        """ C'(h) as a polynomial in h
        """
        terms = {}
        for (a, b), coeff in self.poly.as_dict().items():
            terms[(a + b,)] = terms.get((a + b,), 0) + coeff
        return BasePoly.from_dict(terms, ("h",))

    def identity_holds(self):
        W = BasePoly.variable("W", self.poly.variables)
        h = BasePoly.variable("h", self.poly.variables)
        p = self.p
        return (W - h) * self.poly * p == (W ** p - h ** p) - (W - h) ** p

    def residue_holds(self):
        h = BasePoly.variable("h", ("h",))
        return (self.at_h - h ** (self.p - 1)).divisible_by(self.p)

    def nonvanishing(self):
        """ C'(h) is nonzero mod p, so C' is outside (p, W - h) whenever
        h is outside pS
        """
        return not self.at_h.mod(self.p).is_zero


def universal_c_prime(p):
    variables = ("W", "h")
    W = BasePoly.variable("W", variables)
    h = BasePoly.variable("h", variables)
    return UniversalCPrime(p=p, poly=_divided_shift_difference(W, h, p))


@dataclass(frozen=True)
class CPrime:
    """ C'_i(W) with coefficients in S (ascending powers of W, degree at most
    p - 2) and its image c'_i = C'_i(w_i) in A.
    """
    index: int
    coefficients: tuple
    image: TowerElement

    def evaluate(self, value):
        result = value * 0
        for coeff in reversed(self.coefficients):
            result = result * value + coeff
        return result

    def __str__(self):
        chunks = []
        for power, coeff in enumerate(self.coefficients):
            if coeff.is_zero:
                continue
            factor = "" if power == 0 else (" * W" if power == 1 else " * W^%d" % power)
            chunks.append("(%s)%s" % (coeff, factor))
        return " + ".join(reversed(chunks)) or "0"


def c_prime(ctx, i):
    """ Build C'_i and check p (W - h_i) C'_i = (W^p - h_i^p) - (W - h_i)^p
    and C'_i(h_i) = h_i^(p-1) mod p.
    """
    p = ctx.p
    if p == 2:
        raise ValueError("c' is not used at p = 2")
    name = _free_name(ctx.variables, "W")
    extended = ctx.variables + (name,)
    W = BasePoly.variable(name, extended)
    h = ctx.hs[i].with_variables(extended)
    quotient = _divided_shift_difference(W, h, p)
    if (W - h) * quotient * p != (W ** p - h ** p) - (W - h) ** p:
        raise ArithmeticError("C' identity fails for radicand %d" % (i + 1))
    parts = quotient.coefficients_in(name)
    if max(parts) > p - 2:
        raise ArithmeticError("C' has degree above p - 2")
    coefficients = tuple(parts.get(power, ctx.zero_poly) for power in range(p - 1))
    image = ctx.zero()
    for power, coeff in enumerate(coefficients):
        image = image + ctx.monomial(tuple(power if n == i else 0 for n in range(ctx.slots)), coeff)
    cprime = CPrime(index=i, coefficients=coefficients, image=image)
    h = ctx.hs[i]
    if not (cprime.evaluate(h) - h ** (p - 1)).divisible_by(p):
        raise ArithmeticError("C'(h) is not h^(p-1) mod p for radicand %d" % (i + 1))
    return cprime


def tau(ctx, i):
    """ tau_i = p^-1 (w^(p-1) + w^(p-2) h + ... + h^(p-1)); checks that
    (w_i - h_i) tau_i = p g_i.
    """
    p, h = ctx.p, ctx.hs[i]
    num = ctx.zero()
    for j in range(p):
        exponents = tuple(j if n == i else 0 for n in range(ctx.slots))
        num = num + ctx.monomial(exponents, h ** (p - 1 - j))
    element = ClosureElement(num, 1)
    if element * ctx.shifted_root(i) != ctx.scalar(ctx.gs[i] * p):
        raise ArithmeticError("(w - h) tau != p g for radicand %d" % (i + 1))
    return element


def shift_power(ctx, i, exponent):
    return ctx.monomial(
        tuple(exponent if n == i else 0 for n in range(ctx.slots)), basis=SHIFTED)


def eta(ctx, i, j):
    """ eta_ij = p^-1 (w_i - h_i)^(p-2) (w_j - h_j), checked against
    X^(p-1) - (tau_i - c'_i)^(p-2) (tau_j - c'_j).
    """
    p = ctx.p
    if p == 2:
        raise ValueError("eta is only defined for odd p")
    if not 0 <= i < j < ctx.r:
        raise ValueError("eta needs 0 <= i < j < r, got i=%d j=%d" % (i, j))
    exponents = [0] * ctx.slots
    exponents[i], exponents[j] = p - 2, 1
    element = ClosureElement(ctx.monomial(exponents, basis=SHIFTED), 1)
    residual = eta_residual(ctx, i, j, element)
    if not residual.is_zero:
        log.warning("v_%d%d(eta) = %s is not zero", i + 1, j + 1, residual)
        raise ArithmeticError("eta_%d%d does not satisfy its integral equation" % (i + 1, j + 1))
    return element


def eta_residual(ctx, i, j, element):
    p = ctx.p
    left = tau(ctx, i) - c_prime(ctx, i).image
    right = tau(ctx, j) - c_prime(ctx, j).image
    return element ** (p - 1) - left ** (p - 2) * right


# The basis

@dataclass(frozen=True)
class BasisEntry:
    """ p^-k times the shifted monomial with the given exponents. Exponents
    past r belong to the disjoint block and never carry a denominator.
    """
    k: int
    exponents: tuple


def layer(exponents, p, r):
    return sum(exponents[:r]) // (p - 1)


@lru_cache(maxsize=64)
def _layout(p, r, t):
    def order(exponents):
        return ring.graded_key(exponents[:r]) + ring.graded_key(exponents[r:])
    vectors = sorted(itertools.product(range(p), repeat=r + t), key=order)
    return tuple(BasisEntry(k=layer(e, p, r), exponents=e) for e in vectors)


class VBasis(object):
    """ Ordered basis of R over S. ``layers`` groups entries by k.
    """

    def __init__(self, ctx, entries):
        self.ctx = ctx
        self.entries = tuple(entries)
        self.index = {entry.exponents: n for n, entry in enumerate(self.entries)}

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, n):
        return self.entries[n]

    @property
    def layers(self):
        grouped = {}
        for entry in self.entries:
            grouped.setdefault(entry.k, []).append(entry)
        return grouped

    def layer_sizes(self):
        layers = self.layers
        return tuple(len(layers.get(k, ())) for k in range(max(layers) + 1)) if layers else ()

    def without(self, exponents):
        """ A copy missing the given entries, for negative controls
        """
        dropped = {tuple(e) for e in exponents}
        return VBasis(self.ctx, [e for e in self.entries if e.exponents not in dropped])

    def element(self, n):
        entry = self.entries[n]
        return ClosureElement(self.ctx.monomial(entry.exponents, basis=SHIFTED), entry.k)

    def elements(self):
        return [self.element(n) for n in range(len(self))]

    def line(self, n):
        entry = self.entries[n]
        monomial = format_monomial(self.ctx, entry.exponents, shifted=True)
        if entry.k == 0:
            return monomial
        prefix = "%d^-%d" % (self.ctx.p, entry.k)
        return prefix if monomial == "1" else "%s * %s" % (prefix, monomial)

    def lines(self):
        return [self.line(n) for n in range(len(self))]


def build_v_basis(ctx):
    basis = VBasis(ctx, _layout(ctx.p, ctx.r, ctx.t))
    log.info("basis built: rank %d, layers %s", len(basis), basis.layer_sizes())
    return basis


@dataclass
class VCoords:
    """ Coefficients in S, one per basis entry (missing entries are zero)
    """
    basis: VBasis
    coefficients: dict

    def coefficient(self, n):
        return self.coefficients.get(n, self.basis.ctx.zero_poly)

    def to_element(self):
        result = ClosureElement(self.basis.ctx.zero(SHIFTED))
        for n, coeff in sorted(self.coefficients.items()):
            result = result + self.basis.element(n) * coeff
        return result

    def items(self):
        return [(self.basis.line(n), coeff) for n, coeff in sorted(self.coefficients.items())]

    def __eq__(self, other):
        if not isinstance(other, VCoords):
            return NotImplemented
        return self.coefficients == other.coefficients

    @classmethod
    def unit(cls, basis, n):
        return cls(basis, {n: basis.ctx.one_poly})


def reduce_to_v(ctx, x, basis=None):
    """ Coordinates of x over the basis, or NotInModule carrying the first
    offending shifted monomial in graded order.
    """
    if isinstance(x, TowerElement):
        x = ClosureElement(x)
    basis = basis if basis is not None else build_v_basis(ctx)
    p = ctx.p
    num = x.num.change_basis(SHIFTED)
    coefficients = {}
    for monomial, coeff in num.terms():
        n = basis.index.get(monomial)
        if n is None:
            raise NotInModule(monomial, coeff)
        k_m = basis.entries[n].k
        if x.k > k_m:
            divisor = p ** (x.k - k_m)
            if not coeff.divisible_by(divisor):
                raise NotInModule(monomial, coeff, x.k - k_m)
            coeff = coeff.exquo_int(divisor)
        elif x.k < k_m:
            coeff = coeff * p ** (k_m - x.k)
        coefficients[n] = coeff
    log.debug("reduced %s", x)
    return VCoords(basis, coefficients)


def mul_in_R(ctx, a, b):
    if a.basis is not b.basis and a.basis.entries != b.basis.entries:
        raise ValueError("coordinates over different bases")
    return reduce_to_v(ctx, a.to_element() * b.to_element(), a.basis)


# Verification

@dataclass
class Failure:
    check: str
    subject: str
    monomial: Optional[tuple] = None
    coefficient: Optional[str] = None
    required_power: Optional[int] = None

    @classmethod
    def from_error(cls, check, subject, error):
        return cls(check=check, subject=subject, monomial=error.monomial,
                   coefficient=str(error.coefficient), required_power=error.required_power)


@dataclass
class ClosureReport:
    rank: int
    products: int = 0
    module_products: int = 0
    memberships: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def _reduce_product(task):
    ctx, basis, m, n = task
    product = basis.element(m) * basis.element(n)
    try:
        reduce_to_v(ctx, product, basis)
    except NotInModule as error:
        return Failure.from_error(
            "product", "[%s] * [%s]" % (basis.line(m), basis.line(n)), error)
    return None


def run_tasks(function, tasks, workers=1):
    """ Map over tasks, in a process pool when workers > 1; results keep task order
    """
    if workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(workers) as pool:
            return pool.map(function, tasks)
    return [function(task) for task in tasks]


def verify_closure(ctx, basis=None, workers=1):
    """ Check that the span of the basis is a ring containing A: every
    unordered product reduces, (w_j - h_j) v reduces for every entry v, and
    1 and every w_i reduce.
    """
    basis = basis if basis is not None else build_v_basis(ctx)
    report = ClosureReport(rank=len(basis))
    tasks = [(ctx, basis, m, n) for m in range(len(basis)) for n in range(m, len(basis))]
    for failure in run_tasks(_reduce_product, tasks, workers):
        report.products += 1
        if failure is not None:
            report.failures.append(failure)

    for slot in range(ctx.slots):
        factor = ClosureElement(ctx.monomial(ctx.unit_vector(slot), basis=SHIFTED))
        for n in range(len(basis)):
            report.module_products += 1
            try:
                reduce_to_v(ctx, factor * basis.element(n), basis)
            except NotInModule as error:
                report.failures.append(Failure.from_error(
                    "module", "[%s] * [%s]" % (ctx.names[slot], basis.line(n)), error))

    generators = [("1", ctx.one())] + [
        (ctx.names[slot], ctx.monomial(ctx.unit_vector(slot))) for slot in range(ctx.slots)]
    for name, generator in generators:
        report.memberships += 1
        try:
            reduce_to_v(ctx, generator, basis)
        except NotInModule as error:
            report.failures.append(Failure.from_error("membership", name, error))

    if report.ok:
        log.info("closure verified: %d products, %d module products",
                 report.products, report.module_products)
    else:
        for failure in report.failures:
            log.warning("closure check %s failed at %s", failure.check, failure.subject)
    return report


@dataclass
class WitnessCheck:
    name: str
    subject: str
    ok: bool
    detail: str = ""


@dataclass
class WitnessReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self):
        return all(check.ok for check in self.checks)

    def add(self, name, subject, ok, detail=""):
        self.checks.append(WitnessCheck(name=name, subject=subject, ok=bool(ok), detail=detail))
        if not ok:
            log.warning("witness %s failed for %s", name, subject)


def _guarded(report, name, subject, compute, detail=""):
    try:
        ok = compute()
    except ArithmeticError as error:
        report.add(name, subject, False, str(error))
    else:
        report.add(name, subject, ok, detail)


def integrality_witnesses(ctx):
    """ Check the annihilators of tau_i, the C' identities, the shift-power
    identity and the integral equation of every eta_ij.
    """
    report = WitnessReport()
    p = ctx.p
    for i in range(ctx.r):
        subject = ctx.names[i]
        h, g = ctx.hs[i], ctx.gs[i]
        s = ctx.shifted_root(i)
        try:
            t = tau(ctx, i)
        except ArithmeticError as error:
            report.add("n(tau)", subject, False, str(error))
            continue
        report.add("n(tau)", subject, (t * s - ctx.scalar(g * p)).is_zero,
                   "(w - h) * tau - p*g = 0")
        power_sum = ClosureElement(t.num, 0)
        report.add("m(tau)", subject, (t * p - power_sum).is_zero,
                   "p * tau - (w^(p-1) + ... + h^(p-1)) = 0")
        if p == 2:
            residual = t * t - t * h - ctx.scalar(g)
            report.add("l0(tau)", subject, residual.is_zero, "tau^2 - h*tau - g = 0")
            shifted = s * s + s.scale(h * 2) - ctx.scalar(g * 4, SHIFTED)
            report.add("shift-power", subject, shifted.is_zero,
                       "(w - h)^2 + 2*h*(w - h) = 4*g")
            continue
        try:
            cprime = c_prime(ctx, i)
        except ArithmeticError as error:
            report.add("c-prime", subject, False, str(error))
            continue
        report.add("c-prime", subject, True, "C'(W) = %s" % cprime)
        report.add("c-prime residue", subject,
                   (cprime.evaluate(h) - h ** (p - 1)).divisible_by(p),
                   "C'(h) = h^(p-1) mod p")
        report.add("c-prime nonvanishing", subject,
                   not cprime.evaluate(h).mod(p).is_zero, "C'(h) != 0 mod p")
        c = cprime.image
        l_residual = t * t - t * c - ClosureElement(shift_power(ctx, i, p - 2)) * g
        report.add("l(tau)", subject, l_residual.is_zero,
                   "tau^2 - c'*tau - g*(w - h)^(p-2) = 0")
        identity = s ** p + (c * s).scale(p) - ctx.scalar(g * (p * p), SHIFTED)
        report.add("shift-power", subject, identity.is_zero,
                   "(w - h)^p + p*c'*(w - h) = p^2*g")

    if p > 2:
        basis = build_v_basis(ctx)
        for i, j in itertools.combinations(range(ctx.r), 2):
            subject = "%s,%s" % (ctx.names[i], ctx.names[j])
            exponents = [0] * ctx.slots
            exponents[i], exponents[j] = p - 2, 1
            element = ClosureElement(ctx.monomial(exponents, basis=SHIFTED), 1)
            _guarded(report, "v(eta)", subject,
                     lambda: eta_residual(ctx, i, j, element).is_zero,
                     "eta^(p-1) - (tau_i - c'_i)^(p-2) * (tau_j - c'_j) = 0")
            n = basis.index[tuple(exponents)]
            report.add("eta in basis", subject,
                       reduce_to_v(ctx, element, basis) == VCoords.unit(basis, n),
                       basis.line(n))
            _guarded(report, "v residue", subject,
                     lambda: _eta_residue_holds(ctx, i, j),
                     "c'_i(h_i)^(p-2) c'_j(h_j) = (h_i^(p-2) h_j)^(p-1) mod p")
    return report


def _eta_residue_holds(ctx, i, j):
    p = ctx.p
    hi, hj = ctx.hs[i], ctx.hs[j]
    left = c_prime(ctx, i).evaluate(hi) ** (p - 2) * c_prime(ctx, j).evaluate(hj)
    right = (hi ** (p - 2) * hj) ** (p - 1)
    return (left - right).divisible_by(p)


# Composite degrees n_i = p d_i

class ExtendedBasis(object):
    """ Basis of R[u_1, ..., u_r] with u_i^(d_i) = w_i over S: every basis
    entry times u^e with 0 <= e_i < d_i. Elements are dicts from e to
    ClosureElement.
    """

    def __init__(self, ctx, basis, degrees):
        self.ctx = ctx
        self.basis = basis
        self.degrees = tuple(degrees)
        self.exponents = tuple(sorted(
            itertools.product(*[range(d) for d in self.degrees]), key=ring.graded_key))
        self.entries = tuple((n, e) for e in self.exponents for n in range(len(basis)))

    @property
    def rank(self):
        return len(self.entries)

    def __len__(self):
        return self.rank

    def element(self, m):
        n, e = self.entries[m]
        return {e: self.basis.element(n)}

    def multiply(self, x, y):
        ctx = self.ctx
        result = {}
        for e1, a in x.items():
            for e2, b in y.items():
                product = a * b
                exponents = []
                for i, (u, v) in enumerate(zip(e1, e2)):
                    total = u + v
                    if total >= self.degrees[i]:
                        total -= self.degrees[i]
                        product = product * ctx.root(i)
                    exponents.append(total)
                exponents = tuple(exponents)
                result[exponents] = result[exponents] + product if exponents in result else product
        return result

    def reduce(self, x):
        return {e: reduce_to_v(self.ctx, value, self.basis) for e, value in x.items()}

    def line(self, m):
        n, e = self.entries[m]
        text = self.basis.line(n)
        factors = ["%s^(%d/%d)" % (self.ctx.names[i], power, self.degrees[i])
                   for i, power in enumerate(e) if power]
        if not factors:
            return text
        return " * ".join(([] if text == "1" else [text]) + factors)

    def lines(self):
        return [self.line(m) for m in range(self.rank)]

    def verify(self):
        report = ClosureReport(rank=self.rank)
        for m, n in itertools.combinations_with_replacement(range(self.rank), 2):
            report.products += 1
            try:
                self.reduce(self.multiply(self.element(m), self.element(n)))
            except NotInModule as error:
                report.failures.append(Failure.from_error(
                    "extended product", "[%s] * [%s]" % (self.line(m), self.line(n)), error))
        return report


def extend_by_unit_degrees(ctx, basis=None):
    basis = basis if basis is not None else build_v_basis(ctx)
    for index, d in enumerate(ctx.ds, 1):
        if d % ctx.p == 0:
            raise HypothesisError(
                "p-divides-d", "radicand %d: %d divides d = %d" % (index, ctx.p, d), witness=d)
    extended = ExtendedBasis(ctx, basis, ctx.ds)
    log.info("extended basis: rank %d = %d * %d", extended.rank, len(basis),
             reduce(operator.mul, ctx.ds, 1))
    return extended
