import pytest

from radix import create_tower, create_tower_from_spec
from radix.closure import build_v_basis
from radix.configuration import ConfigManager
from radix.exceptions import ParseError
from radix.ring import parse_poly
from radix.specfile import parse_element, parse_spec, tokenize


def test_example_spec(example_spec):
    spec = parse_spec(example_spec)
    assert spec.p == 3
    assert spec.variables == ("X", "Y")
    assert [(entry.f.value, entry.n) for entry in spec.radicands] == [
        ("X^3 + 9", 3), ("Y^3 + 9", 3)]
    tower = spec.to_tower_spec()
    assert [str(radicand.f) for radicand in tower.radicands] == ["X^3 + 9", "Y^3 + 9"]
    assert [radicand.d for radicand in tower.radicands] == [1, 1]


def test_factored_spec(factored_spec):
    spec = parse_spec(factored_spec)
    assert spec.root_variables == ("u", "v")
    fs, ns, factorizations = spec.pipeline_inputs()
    assert ns == [3]
    assert [(str(q), c) for q, c in factorizations[0]] == [
        ("x*y^4 + 9", 1), ("x^4*y + 9", 2)]
    assert fs[0] == factorizations[0][0][0] * factorizations[0][1][0] ** 2


def test_optional_keys():
    spec = parse_spec("""
        p = 3, variables = [X, Y], seed = 5, samples = 20
        k_candidates = [3, 9]
        radicand { f = "X^3 + 9", n = 6 }
        disjoint { g = "Y" }
    """)
    assert (spec.seed, spec.samples, spec.k_candidates) == (5, 20, (3, 9))
    assert spec.config_values() == {
        "RADIX_SEED": 5, "RADIX_SAMPLES": 20, "RADIX_K_CANDIDATES": "3,9"}
    tower = spec.to_tower_spec()
    assert tower.radicands[0].d == 2
    assert [str(g) for g in tower.disjoint_block] == ["Y"]


def test_comments_and_tokens():
    tokens = tokenize('p = 3 # prime\nvariables = [X]')
    assert [token.kind for token in tokens] == [
        "ident", "symbol", "int", "newline", "ident", "symbol", "symbol", "ident", "symbol", "end"]
    assert (tokens[4].line, tokens[4].column) == (2, 1)


@pytest.mark.parametrize("text, line, column", [
    ("p = 4\nvariables = [X]", 1, 5),
    ("p = 3\nvariables = [X]\nradicand { f = \"X^3 + 9\", n = 9 }", 3, 31),
    ("p = 3\nvariables = [X]\nq = 1", 3, 1),
    ("p = 3\nvariables = [X, Y]\nradicand { f = \"X^3 + Z\", n = 3 }", 3, 23),
    ("p = 3\nvariables = [X]\nradicand { f = \"X^3 + 9\" n = 3 }", 3, 26),
    ("p = 3\nvariables = [w1]", 2, 13),
    ("p = 3\nvariables = [X, X]", 2, 13),
    ("p = 3\nvariables = [X]\nradicand { n = 3 }", 3, 1),
    ("p = 3\nvariables = [X]\nradicand { f = \"X^3 + 9\" ", 3, 26),
    ("p = 3\nvariables = [X]\nspline { f = \"X\" }", 3, 1),
    ("p = 3 $", 1, 7),
])
def test_rejected_specs(text, line, column):
    with pytest.raises(ParseError) as error:
        parse_spec(text)
    assert (error.value.line, error.value.column) == (line, column)


def test_missing_p():
    with pytest.raises(ParseError):
        parse_spec("variables = [X]")


def test_parse_element(single_ctx):
    basis = build_v_basis(single_ctx)
    element = parse_element("p^-2 * (w1 - X)^4", single_ctx)
    assert element == basis.element(2) * basis.element(2)
    assert element.k == 1
    assert parse_element("3^-2 * (w1 - X)^4", single_ctx) == element
    assert parse_element("w1^3", single_ctx) == single_ctx.scalar(single_ctx.fs[0])
    assert parse_element("X", single_ctx).k == 0
    with pytest.raises(ParseError):
        parse_element("5^-1 * w1", single_ctx)
    with pytest.raises(ParseError) as error:
        parse_element("p^-1 * w2", single_ctx)
    assert error.value.column == 8


def test_create_tower_from_spec(example_spec):
    spec, ctx, config = create_tower_from_spec(example_spec + "seed = 11\n")
    assert ctx.rank == 9
    assert config["RADIX_SEED"] == 11
    assert ctx.fs[1] == parse_poly("Y^3 + 9", ("X", "Y"))


def test_create_tower(example_spec, spec_file):
    spec, ctx, config = create_tower(spec_file(example_spec), ConfigManager().init_env({}))
    assert spec.variables == ("X", "Y")
    assert ctx.rank == 9
    assert config["RADIX_SEED"] == 0
