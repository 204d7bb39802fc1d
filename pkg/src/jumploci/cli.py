"""Command-line front end: a thin client over the service handlers.

Exit codes: 0 success, 1 input error or failed validation, 2 for the
mathematically meaningful NON-FORMAL verdict (so scripts can branch on
formality surveys without parsing output).
"""
from __future__ import annotations

import json
import sys

import click

from .fixtures import UnknownFixtureError, list_fixtures
from .fox import RelatorError, TorsionError
from .elliptic import EllipticArrangementError, PipelineMismatch
from .rings import PolyParseError
from .tcones import PartitionBoundError
from .service import handlers
from .service.handlers import EXIT_INPUT_ERROR
from .service.schemas import (ArrangementRequest, CdgaRequest,
                              EllipticRequest, FormalityRequest, FoxRequest,
                              QuadricRequest, Report, TconeRequest)

_INPUT_ERRORS = (handlers.InputError, UnknownFixtureError, TorsionError,
                 RelatorError, EllipticArrangementError, PartitionBoundError,
                 PolyParseError, PipelineMismatch, ValueError)


def _load_json(path: str | None):
    if path is None:
        return None
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: cannot read input file {path}: {exc}", err=True)
        sys.exit(EXIT_INPUT_ERROR)


def _emit(report: Report, code: int, as_json: bool):
    if as_json:
        click.echo(report.model_dump_json(by_alias=True, indent=2))
    else:
        click.echo(f"[{report.command}] digest {report.input_digest[:12]}")
        if report.verdict:
            click.echo(f"verdict: {report.verdict}")
        click.echo(json.dumps(report.data, indent=2, sort_keys=True))
        if report.timing_ms is not None:
            click.echo(f"({report.timing_ms} ms)")
    sys.exit(code)


def _run(fn, *args, as_json: bool):
    try:
        report, code = fn(*args)
    except _INPUT_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT_ERROR)
    _emit(report, code, as_json)


json_flag = click.option("--json", "as_json", is_flag=True,
                         help="machine-readable report (default: pretty)")
pretty_flag = click.option("--pretty", "pretty", is_flag=True,
                           help="pretty report (the default)")
fixture_opt = click.option("--fixture", default=None, help="shipped fixture name")
input_opt = click.option("--input", "input_path", default=None,
                         type=click.Path(), help="JSON input file")


@click.group()
def main():
    """Exact cohomology jump loci: resonance, tangent cones, formality."""


@main.command()
def fixtures():
    """List the shipped fixtures."""
    click.echo(json.dumps(list_fixtures(), indent=2))


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve(host: str, port: int):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app
    uvicorn.run(app, host=host, port=port)


# --- cdga ---------------------------------------------------------------------

@main.group()
def cdga():
    """Finite CDGA operations."""


def _cdga_request(fixture, input_path, **kw) -> CdgaRequest:
    return CdgaRequest(fixture=fixture, input=_load_json(input_path), **kw)


@cdga.command()
@fixture_opt
@input_opt
@json_flag
@pretty_flag
def validate(fixture, input_path, as_json, pretty):
    """Check the CDGA identities; exits 1 with the violation list if any."""
    _run(handlers.cdga_validate, _cdga_request(fixture, input_path),
         as_json=as_json)


@cdga.command()
@fixture_opt
@input_opt
@click.option("--degree", default=1, type=int)
@json_flag
@pretty_flag
def cohomology(fixture, input_path, degree, as_json, pretty):
    """Betti number and representative cocycles in one degree."""
    _run(handlers.cdga_cohomology,
         _cdga_request(fixture, input_path, degree=degree), as_json=as_json)


@cdga.command()
@fixture_opt
@input_opt
@click.option("--degree", default=1, type=int)
@json_flag
@pretty_flag
def resonance(fixture, input_path, degree, as_json, pretty):
    """Resonance locus in one degree, as a union of ideal pieces."""
    _run(handlers.cdga_resonance,
         _cdga_request(fixture, input_path, degree=degree), as_json=as_json)


@cdga.command()
@fixture_opt
@input_opt
@click.option("--degree", default=1, type=int)
@click.option("--variant", default="homological",
              type=click.Choice(["homological", "cohomological"]))
@json_flag
@pretty_flag
def support(fixture, input_path, degree, variant, as_json, pretty):
    """Support locus of the universal-complex homology."""
    _run(handlers.cdga_support,
         _cdga_request(fixture, input_path, degree=degree, variant=variant),
         as_json=as_json)


@cdga.command()
@fixture_opt
@input_opt
@click.option("--q", default=1, type=int)
@json_flag
@pretty_flag
def compare(fixture, input_path, q, as_json, pretty):
    """Check the union-level resonance/support identity up to degree q."""
    _run(handlers.cdga_compare, _cdga_request(fixture, input_path, q=q),
         as_json=as_json)


# --- tangent cones ---------------------------------------------------------------

@main.group()
def tcone():
    """Exponential and classical tangent cones at the identity."""


def _tcone_request(fixture, input_path, laurent, variables, bound) -> TconeRequest:
    return TconeRequest(fixture=fixture, input=_load_json(input_path),
                        laurent=laurent,
                        vars=list(variables) if variables else None,
                        max_partition_support=bound)


@tcone.command()
@fixture_opt
@input_opt
@click.option("--laurent", default=None, help="Laurent polynomial string")
@click.option("--var", "variables", multiple=True, help="variable names")
@click.option("--max-partition-support", default=12, type=int)
@json_flag
@pretty_flag
def exp(fixture, input_path, laurent, variables, max_partition_support,
        as_json, pretty):
    """Exponential tangent cone (finite union of rational subspaces)."""
    _run(handlers.tcone,
         _tcone_request(fixture, input_path, laurent, variables,
                        max_partition_support), "exp", as_json=as_json)


@tcone.command()
@fixture_opt
@input_opt
@click.option("--laurent", default=None, help="Laurent polynomial string")
@click.option("--var", "variables", multiple=True, help="variable names")
@click.option("--max-partition-support", default=12, type=int)
@json_flag
@pretty_flag
def classical(fixture, input_path, laurent, variables, max_partition_support,
              as_json, pretty):
    """Classical tangent cone (initial-form ideal)."""
    _run(handlers.tcone,
         _tcone_request(fixture, input_path, laurent, variables,
                        max_partition_support), "classical", as_json=as_json)


@main.command()
@click.option("--torus-fixture", default=None)
@click.option("--torus-input", default=None, type=click.Path())
@click.option("--cdga-fixture", default=None)
@click.option("--cdga-input", default=None, type=click.Path())
@click.option("--group-fixture", default=None,
              help="derive cohomology resonance from a group presentation")
@click.option("--presentation", default=None)
@json_flag
@pretty_flag
def formality(torus_fixture, torus_input, cdga_fixture, cdga_input,
              group_fixture, presentation, as_json, pretty):
    """Tangent-cone formality test; exits 2 on a NON-FORMAL verdict."""
    req = FormalityRequest(torus_fixture=torus_fixture,
                           torus=_load_json(torus_input),
                           cdga_fixture=cdga_fixture,
                           cdga=_load_json(cdga_input),
                           group_fixture=group_fixture,
                           presentation=presentation)
    _run(handlers.formality, req, as_json=as_json)


@main.command()
@click.option("--form", required=True, help="homogeneous quadratic form")
@click.option("--var", "variables", multiple=True, required=True)
@json_flag
@pretty_flag
def quadric(form, variables, as_json, pretty):
    """Rationality test for a quadratic form in at most 4 variables."""
    _run(handlers.quadric, QuadricRequest(form=form, vars=list(variables)),
         as_json=as_json)


# --- fox -----------------------------------------------------------------------

@main.group()
def fox():
    """Fox calculus on finitely presented groups."""


def _fox_request(fixture, presentation) -> FoxRequest:
    return FoxRequest(fixture=fixture, presentation=presentation)


def _fox_command(name, handler, doc):
    @fox.command(name=name, help=doc)
    @fixture_opt
    @click.option("--presentation", default=None,
                  help="gens: x1 x2; rel: x1 x2 x1^-1 x2^-1")
    @json_flag
    @pretty_flag
    def _cmd(fixture, presentation, as_json, pretty, _handler=handler):
        _run(_handler, _fox_request(fixture, presentation), as_json=as_json)
    return _cmd


_fox_command("alexander", handlers.fox_alexander,
             "Abelianized Fox-derivative matrix.")
_fox_command("linearized", handlers.fox_linearized,
             "Linearized matrix for commutator-relators presentations.")
_fox_command("v1", handlers.fox_v1,
             "Codimension-1 minor ideal of the Fox-derivative matrix.")
_fox_command("r1", handlers.fox_r1,
             "Linearized minor ideal with a quadric rationality verdict.")


# --- arrangements -----------------------------------------------------------------

@main.group()
def arrangement():
    """Hyperplane arrangements."""


def _arr_request(fixture, input_path, bound) -> ArrangementRequest:
    return ArrangementRequest(fixture=fixture, input=_load_json(input_path),
                              max_arrangement_size=bound)


@arrangement.command()
@fixture_opt
@input_opt
@click.option("--max-arrangement-size", default=12, type=int)
@json_flag
@pretty_flag
def flats(fixture, input_path, max_arrangement_size, as_json, pretty):
    """Rank-2 flats and 3-nets."""
    _run(handlers.arrangement_flats,
         _arr_request(fixture, input_path, max_arrangement_size),
         as_json=as_json)


@arrangement.command()
@fixture_opt
@input_opt
@click.option("--max-arrangement-size", default=12, type=int)
@json_flag
@pretty_flag
def os(fixture, input_path, max_arrangement_size, as_json, pretty):
    """Orlik-Solomon algebra through degree 2."""
    _run(handlers.arrangement_os,
         _arr_request(fixture, input_path, max_arrangement_size),
         as_json=as_json)


@arrangement.command()
@fixture_opt
@input_opt
@click.option("--max-arrangement-size", default=12, type=int)
@json_flag
@pretty_flag
def r1(fixture, input_path, max_arrangement_size, as_json, pretty):
    """Degree-1 resonance with a certified linear decomposition."""
    _run(handlers.arrangement_r1,
         _arr_request(fixture, input_path, max_arrangement_size),
         as_json=as_json)


# --- elliptic ----------------------------------------------------------------------

@main.group()
def elliptic():
    """Unimodular elliptic arrangements."""


def _ell_request(fixture, input_path) -> EllipticRequest:
    return EllipticRequest(fixture=fixture, input=_load_json(input_path))


@elliptic.command()
@fixture_opt
@input_opt
@json_flag
@pretty_flag
def check(fixture, input_path, as_json, pretty):
    """Unimodularity check with a witness subset on failure."""
    _run(handlers.elliptic_check, _ell_request(fixture, input_path),
         as_json=as_json)


@elliptic.command()
@fixture_opt
@input_opt
@json_flag
@pretty_flag
def model(fixture, input_path, as_json, pretty):
    """Finite CDGA model of the complement."""
    _run(handlers.elliptic_model, _ell_request(fixture, input_path),
         as_json=as_json)


@elliptic.command()
@fixture_opt
@input_opt
@json_flag
@pretty_flag
def pipeline(fixture, input_path, as_json, pretty):
    """Full two-point configuration pipeline; exits 2 on NON-FORMAL."""
    _run(handlers.elliptic_pipeline, _ell_request(fixture, input_path),
         as_json=as_json)


if __name__ == "__main__":
    main()
