from radix import closure, configuration, oracle, transforms
from radix.exceptions import HypothesisError, NotInModule, ParseError, StageError, VariableMismatch
from radix.report import Report
from radix.specfile import parse_element, parse_spec
from radix.tower import make_tower

import logging as log
import sys
import click


EXIT_OK = 0
EXIT_HYPOTHESIS = 1
EXIT_VERIFICATION = 2


def describe_spec(report, spec):
    report.summary("spec", p=spec.p, variables=list(spec.variables))
    for entry in spec.radicands:
        report.row("spec", kind="radicand", poly=entry.f.value, n=entry.n)
    for text in spec.disjoint:
        report.row("spec", kind="disjoint", poly=text.value, n=spec.p)


def describe_tower(report, ctx):
    for hypothesis in ctx.hypotheses:
        report.line("hypotheses", hypothesis)
    for i, radicand in enumerate(ctx.radicands):
        report.row("hypotheses", root=ctx.names[i], f=str(radicand.f),
                   h=str(radicand.h), g=str(radicand.g), d=radicand.d)


def describe_basis(report, basis, extended=None):
    report.summary("basis", rank=len(basis) if extended is None else extended.rank,
                   layers=list(basis.layer_sizes()))
    for text in (basis.lines() if extended is None else extended.lines()):
        report.line("basis", text)


def describe_closure(report, result, name="closure"):
    report.summary(name, products=result.products, module_products=result.module_products,
                   memberships=result.memberships, verified=result.ok)
    for failure in result.failures:
        report.row(name, check=failure.check, subject=failure.subject,
                   monomial=failure.monomial, coefficient=failure.coefficient,
                   required_power=failure.required_power)


def reject(report, error):
    report.summary("result", status="rejected", hypothesis=error.hypothesis, message=str(error))
    if error.witness is not None:
        report.summary("result", witness=error.witness)
    log.warning("hypothesis rejected: %s", error)
    return EXIT_HYPOTHESIS


def run(command, spec, config, argument=None):
    """ Run one command against a parsed spec. Returns (exit code, report).
    """
    if command not in RUNNERS:
        raise ValueError("unknown command %s" % command)
    report = Report()
    describe_spec(report, spec)
    try:
        return RUNNERS[command](report, spec, config, argument), report
    except StageError as error:
        report.summary("pipeline", failed_stage=error.stage)
        return reject(report, error), report
    except HypothesisError as error:
        return reject(report, error), report
    except VariableMismatch as error:
        report.summary("result", status="rejected", hypothesis="variable-mismatch", message=str(error))
        log.warning("variables rejected: %s", error)
        return EXIT_HYPOTHESIS, report


def run_check(report, spec, config, argument):
    ctx = make_tower(spec.to_tower_spec())
    describe_tower(report, ctx)
    report.summary("result", status="accepted", rank=ctx.rank)
    return EXIT_OK


def run_basis(report, spec, config, argument):
    ctx = make_tower(spec.to_tower_spec())
    basis = closure.build_v_basis(ctx)
    extended = None
    if any(d > 1 for d in ctx.ds):
        extended = closure.extend_by_unit_degrees(ctx, basis)
    describe_basis(report, basis, extended)
    return EXIT_OK


def run_verify(report, spec, config, argument):
    ctx = make_tower(spec.to_tower_spec())
    describe_tower(report, ctx)
    basis = closure.build_v_basis(ctx)
    describe_basis(report, basis)
    workers = config["RADIX_WORKERS"]

    result = closure.verify_closure(ctx, basis, workers=workers)
    describe_closure(report, result)
    ok = result.ok

    witnesses = closure.integrality_witnesses(ctx)
    report.summary("witnesses", verified=witnesses.ok)
    for check in witnesses.checks:
        report.row("witnesses", name=check.name, subject=check.subject, ok=check.ok,
                   detail=check.detail)
    ok = ok and witnesses.ok

    crosscheck = oracle.membership_crosscheck(
        ctx, config["RADIX_SAMPLES"], seed=config["RADIX_SEED"], basis=basis,
        max_denominator=config["RADIX_MAX_DENOMINATOR"], workers=workers)
    report.summary("oracle", seed=crosscheck.seed, samples=len(crosscheck.samples),
                   in_module=crosscheck.count("in_module"),
                   integral=crosscheck.count("integral"),
                   disagreements=len(crosscheck.disagreements))
    for sample in crosscheck.disagreements:
        report.row("oracle", index=sample.index, kind=sample.kind, element=sample.element,
                   in_module=sample.in_module, integral=sample.integral)
    ok = ok and crosscheck.ok

    sharp = oracle.sharpness(ctx, basis)
    sharp_ok = not any(check.integral or check.in_module for check in sharp)
    report.summary("sharpness", checked=len(sharp), verified=sharp_ok)
    for check in sharp:
        if check.integral or check.in_module:
            report.row("sharpness", entry=check.entry, integral=check.integral,
                       in_module=check.in_module)
    ok = ok and sharp_ok

    if any(d > 1 for d in ctx.ds):
        extended = closure.extend_by_unit_degrees(ctx, basis)
        extended_result = extended.verify()
        report.summary("closure", extended_rank=extended.rank,
                       extended_products=extended_result.products,
                       extended_verified=extended_result.ok)
        ok = ok and extended_result.ok

    report.summary("result", status="verified" if ok else "failed")
    return EXIT_OK if ok else EXIT_VERIFICATION


def run_reduce(report, spec, config, argument):
    if argument is None:
        raise ValueError("reduce needs an element")
    ctx = make_tower(spec.to_tower_spec())
    basis = closure.build_v_basis(ctx)
    element = parse_element(argument, ctx)
    report.summary("reduce", element=str(element))
    try:
        coords = closure.reduce_to_v(ctx, element, basis)
    except NotInModule as error:
        report.summary("reduce", in_module=False, monomial=list(error.monomial),
                       coefficient=str(error.coefficient), required_power=error.required_power)
        report.summary("result", status="not in module")
        return EXIT_OK
    report.summary("reduce", in_module=True)
    for entry, coeff in coords.items():
        report.row("reduce", entry=entry, coefficient=str(coeff))
    report.summary("result", status="reduced")
    return EXIT_OK


def run_pipeline(report, spec, config, argument):
    fs, ns, factorizations = spec.pipeline_inputs()
    result = transforms.small_cm_pipeline(
        fs, ns, spec.p, factorizations=factorizations,
        k_candidates=config.k_candidates(spec.p), names=spec.root_variables)
    for source, reduction in result.reductions:
        for split in reduction.splits:
            report.row("pipeline", stage="factor", input=str(source), item=str(split.q),
                       detail="%d = %d*%d + %d" % (split.c, split.d, reduction.n, split.e))
    for item in result.stripped:
        report.row("pipeline", stage="strip", input=str(item.source), item=str(item.core),
                   detail="monomial %s" % item.monomial)
    for core, membership in result.memberships:
        report.row("pipeline", stage="certify", input=str(core), item=str(membership.cert.h),
                   detail="k=%d g=%s" % (membership.k, membership.cert.g))
    for image, cert in result.certificates:
        report.row("pipeline", stage="substitute", input=str(image), item=str(cert.h),
                   detail="g=%s" % cert.g)
    for monomial, n, root in result.monomial_roots:
        report.row("pipeline", stage="monomial-root", input=str(monomial), item=str(root),
                   detail="n=%d" % n)
    report.summary("pipeline", k=result.k, substitution=result.substitution.describe())
    describe_tower(report, result.ctx)
    describe_basis(report, result.basis, result.extended if result.extended.rank != len(result.basis) else None)
    describe_closure(report, result.closure)
    report.summary("result", status="verified" if result.ok else "failed")
    return EXIT_OK if result.ok else EXIT_VERIFICATION


def run_disjoint(report, spec, config, argument):
    tower_spec = spec.to_tower_spec()
    if not tower_spec.disjoint_block:
        report.summary("result", status="rejected", message="spec has no disjoint block")
        return EXIT_HYPOTHESIS
    disjoint = transforms.check_linear_disjointness(tower_spec.disjoint_block, spec.p)
    report.summary("disjointness", disjoint=disjoint.ok)
    if not disjoint:
        report.summary("disjointness", witness=list(disjoint.witness))
        report.summary("result", status="rejected", hypothesis="disjoint-block-failure")
        return EXIT_HYPOTHESIS
    mixed = transforms.mixed_tower(tower_spec)
    describe_tower(report, mixed.ctx)
    describe_basis(report, mixed.basis)
    describe_closure(report, mixed.closure)
    report.summary("result", status="verified" if mixed.closure.ok else "failed")
    return EXIT_OK if mixed.closure.ok else EXIT_VERIFICATION


RUNNERS = {
    "check": run_check,
    "basis": run_basis,
    "verify": run_verify,
    "reduce": run_reduce,
    "pipeline": run_pipeline,
    "disjoint": run_disjoint,
}


def load(ctx):
    """ Parse the spec named on the command line and merge configuration:
    command line > spec file > environment > defaults
    """
    options = ctx.obj
    try:
        with open(options["spec_path"]) as handle:
            spec = parse_spec(handle.read())
    except ParseError as error:
        raise click.ClickException("{}: {}".format(options["spec_path"], error))
    config = configuration.ConfigManager().init_env()
    config.update_from(spec.config_values())
    config.update_from(options["overrides"])
    log.basicConfig(stream=sys.stderr, level=config["LOG_LEVEL"])
    return spec, config


def emit(ctx, code, report, config):
    text = report.render(config["RADIX_OUTPUT_FORMAT"])
    output = ctx.obj["output"]
    if output:
        with open(output, "w") as handle:
            handle.write(text)
    else:
        click.echo(text, nl=False)
    ctx.exit(code)


def execute(ctx, command, argument=None):
    spec, config = load(ctx)
    try:
        code, report = run(command, spec, config, argument)
    except ParseError as error:
        raise click.ClickException(str(error))
    emit(ctx, code, report, config)


@click.group()
@click.option('--spec', 'spec_path', required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--seed', type=int)
@click.option('--samples', type=int)
@click.option('--k-candidates', 'k_candidates')
@click.option('--output', type=click.Path(dir_okay=False))
@click.option('--format', 'output_format', type=click.Choice(configuration.OUTPUT_FORMATS))
@click.pass_context
def radix(ctx, spec_path, seed, samples, k_candidates, output, output_format):
    """ Integral closure of class one radical towers
    """
    ctx.obj = {
        "spec_path": spec_path,
        "output": output,
        "overrides": {
            "RADIX_SEED": seed,
            "RADIX_SAMPLES": samples,
            "RADIX_K_CANDIDATES": k_candidates,
            "RADIX_OUTPUT_FORMAT": output_format,
        },
    }


@radix.command()
@click.pass_context
def check(ctx):
    """ Validate the tower hypotheses
    """
    execute(ctx, "check")


@radix.command()
@click.pass_context
def basis(ctx):
    """ Print the closure basis, extended by the unit degrees d_i
    """
    execute(ctx, "basis")


@radix.command()
@click.pass_context
def verify(ctx):
    """ Verify closure, integrality witnesses and the oracle crosscheck
    """
    execute(ctx, "verify")


@radix.command()
@click.argument('element')
@click.pass_context
def reduce(ctx, element):
    """ Express ELEMENT over the closure basis, e.g. "p^-2 * (w1 - X)^4"
    """
    execute(ctx, "reduce", element)


@radix.command()
@click.pass_context
def pipeline(ctx):
    """ Run the small Cohen-Macaulay algebra workflow
    """
    execute(ctx, "pipeline")


@radix.command()
@click.pass_context
def disjoint(ctx):
    """ Check linear disjointness of the disjoint block mod p
    """
    execute(ctx, "disjoint")


if __name__ == '__main__':
    radix()
