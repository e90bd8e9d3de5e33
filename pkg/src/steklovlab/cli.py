"""Command-line front door: a thin client over the service handlers.

Every subcommand builds the same pydantic request the HTTP API accepts and
dispatches it in-process (default) or to a running service (``--server``).
Outputs are deterministic: CSV uses '.' decimals with 17 significant digits,
JSON ships the pydantic document unchanged.

Exit codes: 0 ok, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import service
from .errors import SteklovLabError


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _csv_lines(header: list[str], rows: list[list]) -> str:
    out = [",".join(header)]
    out.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(out) + "\n"


def _to_csv(name: str, resp) -> str:
    if name == "spectrum":
        return _csv_lines(
            ["index", "l", "lambda", "multiplicity"],
            [[r.index, r.l, r.lam, r.multiplicity] for r in resp.rows],
        )
    if name == "modes":
        dmax = len(resp.rows[0].values) - 1 if resp.rows else 0
        return _csv_lines(
            ["r"] + [f"R{'p' * d}" for d in range(dmax + 1)],
            [[r.r, *r.values] for r in resp.rows],
        )
    if name == "concentrate":
        return _csv_lines(
            ["eps", "lambda", "target", "rel_error"],
            [[r.eps, r.lam, r.target, r.rel_error] for r in resp.rows],
        )
    if name == "rayleigh":
        return _csv_lines(
            ["label", "l", "numerator", "denominator", "quotient", "reference"],
            [[r.label, r.l, r.numerator, r.denominator, r.quotient, r.reference] for r in resp.rows],
        )
    if name == "iso":
        header = [
            "area", "perimeter", "moment2", "asymmetry", "moment_lhs", "moment_rhs",
            "lambda2_upper_bound", "lambda2_ball", "quantitative_bound",
            "moment_inequality_holds", "upper_bound_below_ball", "quantitative_holds",
        ]
        rows = [
            [
                r.area, r.perimeter, r.moment2, r.asymmetry, r.moment_lhs, r.moment_rhs,
                r.lambda2_upper_bound, r.lambda2_ball, r.quantitative_bound,
                r.moment_inequality_holds, r.upper_bound_below_ball, r.quantitative_holds,
            ]
            for r in resp.reports
        ]
        return _csv_lines(header, rows)
    if name == "hadamard":
        return _csv_lines(
            [
                "problem", "l", "s", "lambda", "derivative", "scaling_oracle",
                "rel_difference", "criticality_deviation", "volume_preserving_derivative",
            ],
            [
                [
                    r.problem, r.l, r.s, r.lam, r.derivative, r.scaling_oracle,
                    r.rel_difference, r.criticality_deviation, r.volume_preserving_derivative,
                ]
                for r in resp.rows
            ],
        )
    if name == "selftest":
        return _csv_lines(
            ["name", "passed", "detail"],
            [[r.name, r.passed, r.detail.replace(",", ";")] for r in resp.records],
        )
    raise SteklovLabError(f"no CSV formatter for {name}")


def common_options(fn):
    fn = click.option(
        "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
        show_default=True, help="Output format.",
    )(fn)
    fn = click.option(
        "--output", type=str, default=None,
        help="Write to file instead of stdout (relative paths honor STEKLOVLAB_OUTPUT_DIR).",
    )(fn)
    fn = click.option(
        "--server", type=str, default=None,
        help="POST to a running steklovlab service instead of computing in-process.",
    )(fn)
    return fn


def _dispatch(name: str, request, server: str | None):
    request_model, handler = service.HANDLERS[name]
    if server:
        import httpx

        reply = httpx.post(
            f"{server.rstrip('/')}/v1/{name}",
            json=request.model_dump(mode="json"),
            timeout=300.0,
        )
        reply.raise_for_status()
        return handler.__annotations__["return"].model_validate(reply.json())
    return handler(request)


def _emit(name: str, resp, fmt: str, output: str | None) -> None:
    text = resp.model_dump_json(indent=2) + "\n" if fmt == "json" else _to_csv(name, resp)
    if output:
        path = Path(output)
        base = os.environ.get("STEKLOVLAB_OUTPUT_DIR")
        if base and not path.is_absolute():
            path = Path(base) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        click.echo(text, nl=False)


@click.group()
def cli():
    """Biharmonic Steklov plate eigenvalue laboratory."""


@cli.command()
@click.option("--dim", type=int, default=2, show_default=True)
@click.option("--tau", type=float, default=1.0, show_default=True)
@click.option("--count", type=int, default=8, show_default=True)
@common_options
def spectrum(dim, tau, count, fmt, output, server):
    """Ball spectrum table (index, l, lambda, multiplicity)."""
    req = service.SpectrumRequest(dim=dim, tau=tau, count=count)
    _emit("spectrum", _dispatch("spectrum", req, server), fmt, output)


@cli.command()
@click.option("--dim", type=int, default=2, show_default=True)
@click.option("--tau", type=float, default=1.0, show_default=True)
@click.option("--l", "order", type=int, default=2, show_default=True)
@click.option("--samples", type=int, default=21, show_default=True)
@click.option("--max-derivative", type=int, default=2, show_default=True)
@common_options
def modes(dim, tau, order, samples, max_derivative, fmt, output, server):
    """Radial mode profile samples."""
    req = service.ModesRequest(
        dim=dim, tau=tau, l=order, samples=samples, max_derivative=max_derivative
    )
    _emit("modes", _dispatch("modes", req, server), fmt, output)


@cli.command()
@click.option("--l", "order", type=int, default=1, show_default=True)
@click.option("--dim", type=int, default=2, show_default=True)
@click.option("--tau", type=float, default=1.0, show_default=True)
@click.option("--mass", type=str, default="auto", show_default=True,
              help="Total mass M, or 'auto' for |boundary sphere|.")
@click.option("--eps", type=str, default="0.08,0.04,0.02,0.01", show_default=True,
              help="Comma-separated decreasing shell widths.")
@common_options
def concentrate(order, dim, tau, mass, eps, fmt, output, server):
    """Mass-concentration sweep: Neumann eigenvalues converging to Steklov."""
    eps_list = [float(x) for x in eps.split(",") if x.strip()]
    m = None if mass == "auto" else float(mass)
    req = service.ConcentrateRequest(l=order, dim=dim, tau=tau, mass=m, eps=eps_list)
    _emit("concentrate", _dispatch("concentrate", req, server), fmt, output)


@cli.command()
@click.option("--experiment", type=click.Choice(["eigenmodes", "annulus"]),
              default="eigenmodes", show_default=True)
@click.option("--dim", type=int, default=2, show_default=True)
@click.option("--tau", type=float, default=1.0, show_default=True)
@click.option("--max-l", type=int, default=5, show_default=True)
@click.option("--inner-radii", type=str, default="0.1,0.2,0.3,0.4,0.5", show_default=True)
@common_options
def rayleigh(experiment, dim, tau, max_l, inner_radii, fmt, output, server):
    """Rayleigh quotient reports (eigen-profiles, or tau=0 annulus sweep)."""
    radii = [float(x) for x in inner_radii.split(",") if x.strip()]
    req = service.RayleighRequest(
        experiment=experiment, dim=dim, tau=tau, max_l=max_l, inner_radii=radii
    )
    _emit("rayleigh", _dispatch("rayleigh", req, server), fmt, output)


@cli.command()
@click.option("--polygons", type=click.Path(exists=True, dir_okay=False), required=True,
              help="JSON file: one vertex array [[x,y],...] or a list of them.")
@click.option("--tau", type=float, default=1.0, show_default=True)
@common_options
def iso(polygons, tau, fmt, output, server):
    """Quantitative isoperimetric reports for polygon domains."""
    data = json.loads(Path(polygons).read_text())
    if data and isinstance(data[0][0], (int, float)):
        data = [data]  # single polygon file
    req = service.IsoRequest(polygons=data, tau=tau)
    _emit("iso", _dispatch("iso", req, server), fmt, output)


@cli.command()
@click.option("--problem", type=click.Choice(["steklov", "neumann"]), default="steklov", show_default=True)
@click.option("--dim", type=int, default=2, show_default=True)
@click.option("--tau", type=float, default=1.0, show_default=True)
@click.option("--orders", type=str, default="1,2,3", show_default=True)
@click.option("--s-values", type=str, default="1,2", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@common_options
def hadamard(problem, dim, tau, orders, s_values, seed, fmt, output, server):
    """Shape-derivative and criticality tables against the scaling oracle."""
    req = service.HadamardRequest(
        problem=problem, dim=dim, tau=tau,
        orders=[int(x) for x in orders.split(",") if x.strip()],
        s_values=[int(x) for x in s_values.split(",") if x.strip()],
        seed=seed,
    )
    _emit("hadamard", _dispatch("hadamard", req, server), fmt, output)


@cli.command()
@click.option("--quick", is_flag=True, help="Reduced sweeps for a fast smoke run.")
@common_options
def selftest(quick, fmt, output, server):
    """Full invariant suite; exit code 0 iff every check passes."""
    req = service.SelftestRequest(quick=quick)
    resp = _dispatch("selftest", req, server)
    for rec in resp.records:
        status = "PASS" if rec.passed else "FAIL"
        click.echo(f"[{status}] {rec.name}: {rec.detail}", err=True)
    _emit("selftest", resp, fmt, output)
    if not resp.all_passed:
        raise SteklovLabError("selftest failed")


@cli.command()
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .api import app

    uvicorn.run(app, host=host, port=port)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except SteklovLabError as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        click.echo(json.dumps(record), err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
