import os
import random

import hypothesis
import pytest

from radix.exceptions import HypothesisError
from radix.ring import BasePoly, parse_poly
from radix.tower import Radicand, TowerSpec, make_tower

hypothesis.settings.register_profile("radix", max_examples=25, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "radix"))


def tower(p, *radicands, variables=("X", "Y"), block=(), ds=None):
    """ Tower from polynomial texts, e.g. tower(3, "X^3 + 9") """
    ds = ds or [1] * len(radicands)
    return make_tower(TowerSpec(
        p=p,
        radicands=tuple(Radicand(f=parse_poly(text, variables), d=d)
                        for text, d in zip(radicands, ds)),
        disjoint_block=tuple(parse_poly(text, variables) for text in block)))


@pytest.fixture(scope="session")
def poly():
    def make(text, variables=("X", "Y")):
        return parse_poly(text, variables)
    return make


@pytest.fixture(scope="session")
def example_ctx():
    return tower(3, "X^3 + 9", "Y^3 + 9")


@pytest.fixture(scope="session")
def single_ctx():
    return tower(3, "X^3 + 9", variables=("X",))


@pytest.fixture(scope="session")
def random_tower():
    """ Factory for random valid towers: f_i = (x_i + c)^p + p^2 b over
    distinct variables, redrawn until every hypothesis holds.
    """
    def make(p, r, seed, ds=None, variables=("X", "Y", "Z")):
        rng = random.Random(seed)
        variables = tuple(variables[:max(r, 1)])
        while True:
            radicands = []
            for i in range(r):
                x = BasePoly.variable(variables[i], variables)
                c = rng.randint(0, p - 1)
                b = BasePoly.constant(rng.choice([-2, -1, 1, 2, 3]), variables)
                if rng.random() < 0.5:
                    b = b + BasePoly.variable(rng.choice(variables), variables)
                f = (x + c) ** p + b * (p * p)
                radicands.append(Radicand(f=f, d=ds[i] if ds else 1))
            try:
                return make_tower(TowerSpec(p=p, radicands=tuple(radicands)))
            except HypothesisError:
                continue
    return make


@pytest.fixture(scope="session")
def build():
    return tower


@pytest.fixture
def spec_file(tmp_path):
    """ Write spec file text to a temporary path """
    def write(text, name="tower.spec"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


EXAMPLE_SPEC = """\
# two cube roots over Z[X, Y]
p = 3
variables = [X, Y]
radicand { f = "X^3 + 9", n = 3 }
radicand { f = "Y^3 + 9", n = 3 }
"""

FACTORED_SPEC = """\
p = 3
variables = [x, y]
root_variables = [u, v]
radicand {
    f = "(x*y^4 + 9)*(x^4*y + 9)^2"
    n = 3
    factors = ["x*y^4 + 9" ^ 1, "x^4*y + 9" ^ 2]
}
"""


@pytest.fixture(scope="session")
def example_spec():
    return EXAMPLE_SPEC


@pytest.fixture(scope="session")
def factored_spec():
    return FACTORED_SPEC
