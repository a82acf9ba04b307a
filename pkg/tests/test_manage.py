from click.testing import CliRunner
import pytest
import yaml

from radix import manage
from radix.configuration import ConfigManager
from radix.exceptions import VariableMismatch
from radix.ring import parse_poly
from radix.specfile import parse_spec


EXAMPLE_LINES = [
    "1", "(w1 - X)", "(w2 - Y)",
    "3^-1 * (w1 - X)^2", "3^-1 * (w1 - X) * (w2 - Y)", "3^-1 * (w2 - Y)^2",
    "3^-1 * (w1 - X)^2 * (w2 - Y)", "3^-1 * (w1 - X) * (w2 - Y)^2",
    "3^-2 * (w1 - X)^2 * (w2 - Y)^2",
]

SINGLE_SPEC = 'p = 3\nvariables = [X]\nradicand { f = "X^3 + 9", n = 3 }\n'


@pytest.fixture
def invoke(spec_file):
    runner = CliRunner()

    def run(text, *args, env=None):
        return runner.invoke(manage.radix, ["--spec", spec_file(text)] + list(args), env=env)
    return run


def test_basis(invoke, example_spec):
    result = invoke(example_spec, "basis")
    assert result.exit_code == 0
    assert "rank: 9" in result.output
    assert "layers: 3 5 1" in result.output
    section = result.output.split("== basis ==\n")[1]
    assert section.splitlines()[2:11] == EXAMPLE_LINES


def test_basis_yaml(invoke, example_spec):
    result = invoke(example_spec, "--format", "yaml", "basis")
    assert result.exit_code == 0
    data = yaml.safe_load(result.output)
    assert list(data) == ["spec", "basis"]
    assert data["basis"]["lines"] == EXAMPLE_LINES
    assert data["basis"]["layers"] == [3, 5, 1]
    assert data["spec"]["variables"] == ["X", "Y"]


def test_extended_basis(invoke):
    result = invoke(SINGLE_SPEC.replace("n = 3", "n = 6"), "basis")
    assert result.exit_code == 0
    assert "rank: 6" in result.output
    assert "3^-1 * (w1 - X)^2 * w1^(1/2)" in result.output


def test_check(invoke, example_spec):
    result = invoke(example_spec, "check")
    assert result.exit_code == 0
    assert "status: accepted" in result.output


@pytest.mark.parametrize("f", ["X^3 + 3", "X^6 - 3*X^6 + 9", "(X*Y)^3 + 3*(X*Y)^3 + 9"])
def test_check_rejects(invoke, f):
    result = invoke('p = 3\nvariables = [X, Y]\nradicand { f = "%s", n = 3 }\n' % f, "check")
    assert result.exit_code == manage.EXIT_HYPOTHESIS
    assert "status: rejected" in result.output
    assert "hypothesis: not-p-power-mod-p2" in result.output


def test_certificates_are_recomputable(invoke, example_spec):
    result = invoke(example_spec, "--format", "yaml", "check")
    rows = yaml.safe_load(result.output)["hypotheses"]["rows"]
    assert len(rows) == 2
    for row in rows:
        f, h, g = (parse_poly(row[key], ("X", "Y")) for key in ("f", "h", "g"))
        assert h ** 3 + g * 9 == f


def test_verify(invoke, example_spec):
    result = invoke(example_spec, "--samples", "10", "--format", "yaml", "verify")
    assert result.exit_code == 0, result.output
    data = yaml.safe_load(result.output)
    assert list(data) == ["spec", "hypotheses", "basis", "closure", "witnesses", "oracle",
                          "sharpness", "result"]
    assert data["closure"]["products"] == 45
    assert data["closure"]["verified"] is True
    assert data["witnesses"]["verified"] is True
    assert data["oracle"]["samples"] == 20
    assert data["oracle"]["disagreements"] == 0
    assert data["result"]["status"] == "verified"


def test_verify_is_reproducible(invoke, example_spec):
    first = invoke(example_spec, "--samples", "6", "--seed", "3", "verify")
    second = invoke(example_spec, "--samples", "6", "--seed", "3", "verify")
    assert first.exit_code == 0
    assert first.output == second.output


def test_sample_count_precedence(invoke, example_spec):
    env = {"RADIX_SAMPLES": "2"}
    result = invoke(example_spec, "--format", "yaml", "verify", env=env)
    assert yaml.safe_load(result.output)["oracle"]["samples"] == 12
    result = invoke(example_spec + "samples = 4\n", "--format", "yaml", "verify", env=env)
    assert yaml.safe_load(result.output)["oracle"]["samples"] == 14
    result = invoke(example_spec + "samples = 4\n", "--samples", "3", "--format", "yaml",
                    "verify", env=env)
    assert yaml.safe_load(result.output)["oracle"]["samples"] == 13


def test_output_format_from_environment(invoke, example_spec):
    result = invoke(example_spec, "basis", env={"RADIX_OUTPUT_FORMAT": "yaml"})
    assert yaml.safe_load(result.output)["basis"]["rank"] == 9


def test_reduce(invoke):
    result = invoke(SINGLE_SPEC, "reduce", "p^-2 * (w1 - X)^4")
    assert result.exit_code == 0
    assert "status: reduced" in result.output
    for text in ("-3*X", "X^3 + 1", "2*X^2"):
        assert text in result.output


def test_reduce_outside_module(invoke):
    result = invoke(SINGLE_SPEC, "--format", "yaml", "reduce", "p^-1 * 1")
    assert result.exit_code == 0
    data = yaml.safe_load(result.output)
    assert data["reduce"]["in_module"] is False
    assert data["reduce"]["monomial"] == [0]
    assert data["reduce"]["required_power"] == 1
    assert data["result"]["status"] == "not in module"


def test_reduce_parse_error(invoke):
    result = invoke(SINGLE_SPEC, "reduce", "p^-1 * w7")
    assert result.exit_code == 1
    assert "unknown variable w7" in result.output


def test_pipeline(invoke, factored_spec):
    result = invoke(factored_spec, "pipeline")
    assert result.exit_code == 0, result.output
    assert "k: 3" in result.output
    assert "substitution: x = u^3, y = v^3" in result.output
    assert "u*v^4" in result.output
    assert "u^4*v" in result.output
    assert "status: verified" in result.output


def test_pipeline_stage_failure(invoke):
    result = invoke('p = 3\nvariables = [x]\nradicand { f = "x + 3", n = 3 }\n',
                    "--format", "yaml", "pipeline")
    assert result.exit_code == manage.EXIT_HYPOTHESIS
    data = yaml.safe_load(result.output)
    assert data["pipeline"]["failed_stage"] == "certify"
    assert data["result"]["status"] == "rejected"


def test_pipeline_k_candidates(invoke):
    text = 'p = 3\nvariables = [x]\nradicand { f = "x^3 + 9", n = 3 }\n'
    result = invoke(text, "--k-candidates", "1,3", "--format", "yaml", "pipeline")
    assert result.exit_code == 0
    assert yaml.safe_load(result.output)["pipeline"]["k"] == 1
    result = invoke(text + "k_candidates = [1]\n", "--format", "yaml", "pipeline")
    assert yaml.safe_load(result.output)["pipeline"]["k"] == 1
    result = invoke(text + "k_candidates = [1]\n", "--k-candidates", "3", "--format", "yaml",
                    "pipeline")
    assert yaml.safe_load(result.output)["pipeline"]["k"] == 3


EMPTY_SPEC = "p = 3\nvariables = [X]\n"


def test_check_empty_tower(invoke):
    result = invoke(EMPTY_SPEC, "check")
    assert result.exit_code == manage.EXIT_HYPOTHESIS
    assert "hypothesis: empty-tower" in result.output


def test_pipeline_empty_tower(invoke):
    result = invoke(EMPTY_SPEC, "--format", "yaml", "pipeline")
    assert result.exit_code == manage.EXIT_HYPOTHESIS
    data = yaml.safe_load(result.output)
    assert data["pipeline"]["failed_stage"] == "validate"
    assert data["result"]["hypothesis"] == "empty-tower"


def test_pipeline_empty_factorization(invoke):
    text = 'p = 3\nvariables = [x, y]\nradicand { f = "x*y^4 + 9", factors = [] }\n'
    result = invoke(text, "--format", "yaml", "pipeline")
    assert result.exit_code == manage.EXIT_HYPOTHESIS
    data = yaml.safe_load(result.output)
    assert data["pipeline"]["failed_stage"] == "factor"
    assert data["result"]["hypothesis"] == "product-mismatch"


def test_pipeline_monomial_root(invoke):
    text = 'p = 3\nvariables = [x, y]\nradicand { f = "x*(y^3 + 9)", n = 6 }\n'
    result = invoke(text, "--format", "yaml", "pipeline")
    assert result.exit_code == 0, result.output
    data = yaml.safe_load(result.output)
    assert data["pipeline"]["k"] == 6
    roots = [row for row in data["pipeline"]["rows"] if row["stage"] == "monomial-root"]
    assert [(row["input"], row["item"]) for row in roots] == [("x", "x_6")]
    assert data["result"]["status"] == "verified"


def test_variable_mismatch_is_rejected(invoke, example_spec, monkeypatch):
    def mismatch(spec):
        raise VariableMismatch("mismatched variables")
    monkeypatch.setattr(manage, "make_tower", mismatch)
    result = invoke(example_spec, "check")
    assert result.exit_code == manage.EXIT_HYPOTHESIS
    assert "hypothesis: variable-mismatch" in result.output


def test_disjoint_rejected(invoke):
    text = 'p = 3\nvariables = [x, y]\ndisjoint { g = "x" }\ndisjoint { g = "x^2*y^3" }\n'
    result = invoke(text, "disjoint")
    assert result.exit_code == manage.EXIT_HYPOTHESIS
    assert "witness: 1 1" in result.output
    assert "hypothesis: disjoint-block-failure" in result.output


def test_disjoint_mixed_tower(invoke):
    text = 'p = 3\nvariables = [X, Y]\nradicand { f = "X^3 + 9", n = 3 }\ndisjoint { g = "Y" }\n'
    result = invoke(text, "disjoint")
    assert result.exit_code == 0, result.output
    assert "rank: 9" in result.output
    assert "status: verified" in result.output


def test_spec_parse_error(invoke):
    result = invoke("p = 4\nvariables = [X]\n", "check")
    assert result.exit_code == 1
    assert "line 1, column 5" in result.output


def test_output_file(invoke, example_spec, tmp_path):
    target = tmp_path / "basis.txt"
    result = invoke(example_spec, "--output", str(target), "basis")
    assert result.exit_code == 0
    assert result.output == ""
    assert "3^-2 * (w1 - X)^2 * (w2 - Y)^2" in target.read_text()


def test_run_rejects_unknown_commands(example_spec):
    with pytest.raises(ValueError):
        manage.run("factor", parse_spec(example_spec), ConfigManager().init_env({}))
