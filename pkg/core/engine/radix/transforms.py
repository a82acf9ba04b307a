""" Pipelines around class one towers: k-th root substitutions, membership in
W(x), monomial stripping, exponent reduction, linear disjointness mod p and
the small Cohen-Macaulay algebra workflow.
"""

from dataclasses import dataclass, field
from functools import reduce
from math import gcd, lcm
from typing import Optional

import itertools
import logging as log

import sympy

from radix import ring
from radix.closure import build_v_basis, verify_closure, extend_by_unit_degrees
from radix.exceptions import HypothesisError, StageError, VariableMismatch
from radix.ring import BasePoly, RadicandCertificate
from radix.tower import Radicand, TowerSpec, make_tower


@dataclass(frozen=True)
class SubstitutionMap:
    """ x_i -> y_i^k, with ``source`` naming the x_i and ``target`` the y_i
    """
    k: int
    source: tuple
    target: tuple

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if len(self.source) != len(self.target) or len(set(self.target)) != len(self.target):
            raise VariableMismatch("substitution needs distinct new names, one per variable")

    @classmethod
    def default(cls, k, variables, names=None):
        variables = tuple(variables)
        if names is None:
            names = variables if k == 1 else tuple("%s_%d" % (name, k) for name in variables)
        return cls(k=k, source=variables, target=tuple(names))

    def apply(self, f):
        if f.variables != self.source:
            f = f.with_variables(self.source)
        return f.substitute_powers(self.k, self.target)

    def describe(self):
        return ", ".join("%s = %s^%d" % (x, y, self.k) for x, y in zip(self.source, self.target))


def substitute_kth_roots(f, k, names=None):
    return SubstitutionMap.default(k, f.variables, names).apply(f)


@dataclass(frozen=True)
class Membership:
    """ Certificate that f lies in W(x): its image under ``substitution`` is
    h^p + p^2 g
    """
    k: int
    cert: RadicandCertificate
    image: BasePoly
    substitution: SubstitutionMap


def w_membership(f, p, k_candidates=None, names=None):
    """ First k in the candidate list (default [p]) whose substitution puts f
    in T_k^{p∧p²}, or None.
    """
    candidates = tuple(k_candidates) if k_candidates else (p,)
    for k in candidates:
        substitution = SubstitutionMap.default(k, f.variables, names)
        image = substitution.apply(f)
        cert = ring.is_pth_power_mod_p2(image, p)
        if cert is not None:
            log.debug("%s is in W(x) at k=%d with h=%s", f, k, cert.h)
            return Membership(k=k, cert=cert, image=image, substitution=substitution)
    return None


@dataclass(frozen=True)
class MonomialPlusP2:
    """ f = m + p^2 b with m a monomial, and its W(x) certificate at k = p
    """
    monomial: BasePoly
    b: BasePoly
    membership: Membership


def monomial_plus_p2(f, p, names=None):
    residue = f.mod(p * p)
    if len(residue.terms()) != 1:
        return None
    b = (f - residue).exquo_int(p * p)
    membership = w_membership(f, p, (p,), names)
    if membership is None:
        return None
    return MonomialPlusP2(monomial=residue, b=b, membership=membership)


def strip_monomial_factors(f):
    """ Split f = m * core with m the largest monomial dividing f
    """
    if f.is_zero:
        raise ValueError("cannot strip monomial factors of zero")
    exponents, core = f.poly.terms_gcd()
    monomial = BasePoly.from_dict({tuple(exponents): 1}, f.variables)
    return monomial, BasePoly(core)


@dataclass(frozen=True)
class ExponentSplit:
    q: BasePoly
    c: int
    d: int
    e: int


@dataclass(frozen=True)
class ExponentReduction:
    """ Each factor exponent c written as d*n + e. ``radicands`` keeps the q
    with e != 0, ``dropped`` the ones absorbed into the base.
    """
    n: int
    splits: tuple

    @property
    def radicands(self):
        return tuple(split.q for split in self.splits if split.e)

    @property
    def dropped(self):
        return tuple(split.q for split in self.splits if not split.e)


def reduce_exponents(factors, n, product=None):
    """ ``factors`` is a user-asserted factorization [(q, c), ...]. The
    product, square-freeness and coprimality are checked; irreducibility is
    not.
    """
    if n < 1:
        raise ValueError("n must be positive")
    factors = [(q, int(c)) for q, c in factors]
    if any(c < 1 for _, c in factors):
        raise ValueError("factor exponents must be positive")
    if product is not None:
        expanded = reduce(lambda acc, item: acc * item[0] ** item[1], factors,
                          BasePoly.one(product.variables))
        if expanded != product:
            raise HypothesisError(
                "product-mismatch", "factors multiply to %s, not %s" % (expanded, product),
                witness=str(expanded))
    for q, _ in factors:
        if not ring.is_square_free(q):
            raise HypothesisError("not-square-free", "factor %s is not square-free" % q,
                                  witness=str(q))
    pair = ring.first_common_factor([q for q, _ in factors])
    if pair is not None:
        i, j = pair
        raise HypothesisError(
            "not-coprime", "factors %s and %s share a factor" % (factors[i][0], factors[j][0]),
            witness=(i + 1, j + 1))
    splits = tuple(ExponentSplit(q=q, c=c, d=c // n, e=c % n) for q, c in factors)
    return ExponentReduction(n=n, splits=splits)


@dataclass(frozen=True)
class DisjointnessResult:
    ok: bool
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.ok


def check_linear_disjointness(gs, p):
    """ The residues of gs generate independent degree p extensions of
    F_p(x) iff no nonzero product prod(g_i^e_i), 0 <= e_i < p, is a p-th
    power mod p. The first such exponent vector in graded order is the
    witness.
    """
    residues = [g.mod(p) for g in gs]
    for index, residue in enumerate(residues, 1):
        if residue.is_zero:
            raise HypothesisError(
                "disjoint-block-failure", "element %d vanishes mod %d" % (index, p),
                witness=index)
    vectors = sorted(itertools.product(range(p), repeat=len(residues)), key=ring.graded_key)
    for exponents in vectors:
        if not any(exponents):
            continue
        product = reduce(lambda acc, pair: (acc * pair[0] ** pair[1]).mod(p),
                         zip(residues, exponents), BasePoly.one(residues[0].variables))
        if ring.is_pth_power_mod_p(product, p):
            log.info("not linearly disjoint mod %d: witness %s", p, exponents)
            return DisjointnessResult(ok=False, witness=exponents)
    return DisjointnessResult(ok=True)


@dataclass
class MixedTower:
    ctx: object
    basis: object
    closure: object

    @property
    def rank(self):
        return len(self.basis)


def mixed_tower(spec):
    """ Class one radicands over T = S[z_1, ..., z_t], z_j^p = g_j. The
    radicand hypotheses carry over to T, so the tower is validated once with
    the block folded in.
    """
    ctx = make_tower(spec)
    basis = build_v_basis(ctx)
    closure = verify_closure(ctx, basis)
    if len(basis) != ctx.p ** (ctx.r + ctx.t):
        raise ArithmeticError("mixed basis has rank %d" % len(basis))
    return MixedTower(ctx=ctx, basis=basis, closure=closure)


# Small Cohen-Macaulay algebra workflow

@dataclass
class Stripped:
    source: BasePoly
    monomial: BasePoly
    core: BasePoly
    n: int


@dataclass
class PipelineReport:
    p: int
    inputs: list
    reductions: list = field(default_factory=list)
    stripped: list = field(default_factory=list)
    memberships: list = field(default_factory=list)
    dropped: list = field(default_factory=list)
    k: int = 1
    substitution: Optional[SubstitutionMap] = None
    certificates: list = field(default_factory=list)
    monomial_roots: list = field(default_factory=list)
    ctx: object = None
    basis: object = None
    closure: object = None
    extended: object = None
    extended_closure: object = None

    @property
    def ok(self):
        return self.closure is not None and self.closure.ok and \
            (self.extended_closure is None or self.extended_closure.ok)


def _stage(name, function, *args, **kwargs):
    try:
        return function(*args, **kwargs)
    except HypothesisError as error:
        raise StageError(name, error.message, cause=error, witness=error.witness)


def small_cm_pipeline(fs, ns, p, factorizations=None, k_candidates=None, names=None):
    """ Strip monomial factors, certify every core in W(x), pass to a common
    T_k and build and verify the closure basis there.
    """
    if not isinstance(p, int) or not sympy.isprime(p):
        raise StageError("validate", "%r is not a prime" % (p,),
                         cause=HypothesisError("not-prime", "%r is not a prime" % (p,)))
    fs, ns = list(fs), list(ns)
    if len(fs) != len(ns):
        raise ValueError("one degree per input is required")
    if not fs:
        error = HypothesisError("empty-tower", "the pipeline needs at least one radicand")
        raise StageError("validate", error.message, cause=error)
    for index, n in enumerate(ns, 1):
        if n % p or n % (p * p) == 0:
            error = HypothesisError(
                "exponent-not-class-one", "input %d: n = %d needs p | n and p^2 ∤ n" % (index, n),
                witness=n)
            raise StageError("validate", error.message, cause=error, witness=n)
    factorizations = factorizations or {}
    report = PipelineReport(p=p, inputs=list(fs))

    radicands = []
    for index, (f, n) in enumerate(zip(fs, ns)):
        if index in factorizations:
            reduction = _stage("factor", reduce_exponents, factorizations[index], n, f)
            report.reductions.append((f, reduction))
            radicands.extend((q, n) for q in reduction.radicands)
        else:
            radicands.append((f, n))
    log.info("pipeline: %d radicands after exponent reduction", len(radicands))

    owners = {}
    for index, (f, n) in enumerate(radicands):
        monomial, core = strip_monomial_factors(f)
        report.stripped.append(Stripped(source=f, monomial=monomial, core=core, n=n))
        for name, exponent in zip(f.variables, monomial.terms()[0][0]):
            if not exponent:
                continue
            if name in owners:
                error = HypothesisError(
                    "shared-variable-factor",
                    "%s divides radicands %d and %d" % (name, owners[name] + 1, index + 1),
                    witness=(owners[name] + 1, index + 1))
                raise StageError("strip", error.message, cause=error, witness=error.witness)
            owners[name] = index

    ks = []
    for item in report.stripped:
        if item.core.is_ground and abs(item.core.constant_term()) == 1:
            report.dropped.append(item.core)
            continue
        membership = w_membership(item.core, p, k_candidates, names)
        if membership is None:
            raise StageError("certify", "%s is not in W(x) for k in %s"
                             % (item.core, list(k_candidates or (p,))),
                             witness=str(item.core))
        report.memberships.append((item.core, membership))
        ks.append(membership.k)
    k = reduce(lcm, ks, 1)
    # x^(a/n) lies in T_k iff n | k*a
    for item in report.stripped:
        for exponent in item.monomial.terms()[0][0]:
            if exponent:
                k *= item.n // gcd(item.n, k * exponent)
    report.k = k
    variables = fs[0].variables
    substitution = SubstitutionMap.default(k, variables, names)
    report.substitution = substitution
    log.info("pipeline: common k = %d", k)

    for item in report.stripped:
        if item.monomial == 1:
            continue
        exponents = tuple(k * a // item.n for a in item.monomial.terms()[0][0])
        root = BasePoly.from_dict({exponents: 1}, substitution.target)
        if root ** item.n != substitution.apply(item.monomial):
            raise ArithmeticError("no %d-th root of %s over T_%d" % (item.n, item.monomial, k))
        report.monomial_roots.append((item.monomial, item.n, root))

    tower_radicands = []
    for item in report.stripped:
        if item.core in report.dropped:
            continue
        image = substitution.apply(item.core)
        cert = ring.is_pth_power_mod_p2(image, p)
        if cert is None:
            raise StageError("substitute", "%s is not a p-th power mod p^2 over T_%d" % (image, k),
                             witness=str(image))
        report.certificates.append((image, cert))
        tower_radicands.append(Radicand(f=image, d=item.n // p, cert=cert))
    if not tower_radicands:
        raise StageError("substitute", "no radicand left after stripping")

    report.ctx = _stage("tower", make_tower, TowerSpec(p=p, radicands=tuple(tower_radicands)))
    report.basis = build_v_basis(report.ctx)
    report.closure = verify_closure(report.ctx, report.basis)
    report.extended = _stage("extend", extend_by_unit_degrees, report.ctx, report.basis)
    if any(d > 1 for d in report.ctx.ds):
        report.extended_closure = report.extended.verify()
    log.info("pipeline finished: rank %d, verified %s", report.extended.rank, report.ok)
    return report
