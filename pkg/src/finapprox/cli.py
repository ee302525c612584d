"""Command-line interface.

Usage:
    finapprox norm --input f.json --p 2 --q 2 --alpha 0.5
    finapprox error-decay --input f.json --p 2 --alpha 0.5
    finapprox best-approx --input step.json --sigma 2 --p 2
    finapprox kfunc --input f.json --p 2 --p1 1 --theta 0.5
    finapprox verify --seed 0 --p 2 --q inf --alpha 0.5

Exit status: 0 on success, 1 when a verification check fails, 2 when the
input or the options cannot be parsed.
"""

from __future__ import annotations

import functools
import math
import sys

import click
import numpy as np

from finapprox.errors import DomainError, ParseError
from finapprox.formats import fmt, load_function, load_function_list, to_csv, to_json
from finapprox.kfunc import chain_constant, interp_norm_bounds, k_bounds_grid
from finapprox.norms import (
    QuadratureSpec,
    approx_space_norm,
    error_curve,
    lorentz_norm,
    lp_norm,
    weak_lorentz_norm,
)
from finapprox.profile import INF, NormParams
from finapprox.stepfn import StepFunction, best_approx, rearrange
from finapprox.suite import K_GRID, run_suite


class Exponent(click.ParamType):
    """Positive float, or ``inf``."""

    name = "exponent"

    def convert(self, value, param, ctx):
        if isinstance(value, float):
            return value
        try:
            x = float(value)
        except ValueError:
            self.fail(f"{value!r} is not a number or 'inf'", param, ctx)
        if not x > 0.0:
            self.fail(f"{value!r} must be positive", param, ctx)
        return x


EXPONENT = Exponent()


def _params(p: float, q: float, alpha: float | None, p1: float | None) -> NormParams:
    if alpha is not None and p1 is not None:
        raise click.UsageError("--alpha and --p1 are mutually exclusive")
    if alpha is None and p1 is None:
        alpha = 0.5
    if p == INF:
        raise click.UsageError("--p must be finite")
    try:
        return NormParams(p, q=q, alpha=alpha, p1=p1)
    except DomainError as exc:
        raise click.UsageError(str(exc)) from exc


def common_options(fn):
    @click.option("--input", "input_path", type=click.Path(dir_okay=False), help="Function file (.json or .csv).")
    @click.option("--output", "output_path", type=click.Path(dir_okay=False), help="Write here instead of stdout.")
    @click.option("--format", "fmt_", type=click.Choice(["json", "csv"]), default=None)
    @click.option("--p", "p", type=EXPONENT, default=2.0, show_default=True)
    @click.option("--q", "q", type=EXPONENT, default="inf", show_default=True)
    @click.option("--alpha", type=EXPONENT, default=None, help="Approximation order (default 0.5).")
    @click.option("--p1", type=EXPONENT, default=None, help="Second exponent; excludes --alpha.")
    @click.option("--tol", type=float, default=1e-10, show_default=True, help="Quadrature relative tolerance.")
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ParseError, DomainError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def _emit(text: str, output_path: str | None) -> None:
    if output_path:
        with open(output_path, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _need_input(input_path):
    if not input_path:
        raise click.UsageError("--input is required")
    return load_function(input_path)


def _profile(f):
    return rearrange(f) if isinstance(f, StepFunction) else f


def _num(x: float):
    return x if math.isfinite(x) else None


@click.group()
@click.version_option(package_name="artifact")
def cli():
    """Best approximation by finitely supported functions."""


@cli.command()
@common_options
def norm(input_path, output_path, fmt_, p, q, alpha, p1, tol):
    """All quasinorms of the input for the given exponents."""
    params = _params(p, q, alpha, p1)
    prof = _profile(_need_input(input_path))
    values = {
        "lp_norm": lp_norm(prof, params.p),
        "weak_lorentz_norm": weak_lorentz_norm(prof, params.p),
        "lorentz_norm": lorentz_norm(prof, params.p, params.q),
        "approx_space_norm": approx_space_norm(prof, params, QuadratureSpec(rel_tol=tol)),
        "weak_lorentz_norm_p1": weak_lorentz_norm(prof, params.p1),
        "lorentz_norm_p1": lorentz_norm(prof, params.p1, params.q),
    }
    if fmt_ == "csv":
        _emit(to_csv(["name", "value"], values.items()), output_path)
    else:
        body = {"p": params.p, "q": _num(params.q), "alpha": params.alpha, "p1": params.p1}
        body.update({k: _num(v) for k, v in values.items()})
        _emit(to_json(body), output_path)


@cli.command("error-decay")
@common_options
@click.option("--min-exp", type=int, default=-10, show_default=True, help="Grid starts at 2**min_exp.")
@click.option("--max-exp", type=int, default=20, show_default=True, help="Grid ends at 2**max_exp.")
@click.option("--per-octave", type=int, default=4, show_default=True)
def error_decay(input_path, output_path, fmt_, p, q, alpha, p1, tol, min_exp, max_exp, per_octave):
    """Table of sigma, E_sigma(f)_p and sigma^alpha E_sigma(f)_p."""
    params = _params(p, q, alpha, p1)
    prof = _profile(_need_input(input_path))
    ks = np.arange(min_exp * per_octave, max_exp * per_octave + 1)
    sig = np.exp2(ks / per_octave)
    err = error_curve(prof, sig, params.p)
    weighted = sig**params.alpha * err
    rows = [(float(s), float(e), float(w)) for s, e, w in zip(sig, err, weighted)]
    if fmt_ == "json":
        _emit(to_json([{"sigma": s, "error": _num(e), "sigma_alpha_error": _num(w)} for s, e, w in rows]),
              output_path)
    else:
        _emit(to_csv(["sigma", "error", "sigma_alpha_error"], rows), output_path)


@cli.command("best-approx")
@common_options
@click.option("--sigma", type=float, required=True, help="Support measure budget.")
def best_approx_cmd(input_path, output_path, fmt_, p, q, alpha, p1, tol, sigma):
    """Best approximant of a step function from functions with support measure <= sigma."""
    f = _need_input(input_path)
    if not isinstance(f, StepFunction):
        raise ParseError("best-approx needs a step function (atoms JSON or sample CSV)")
    approx, err = best_approx(f, sigma, p)
    if fmt_ == "csv":
        text = to_csv(["a", "b", "v"], approx.atoms) + f"# residual_norm={fmt(err)}\n"
        _emit(text, output_path)
    else:
        _emit(to_json({"sigma": sigma, "p": p, "approximant": approx.to_dict(), "residual_norm": err}),
              output_path)


@cli.command()
@common_options
@click.option("--theta", type=float, default=0.5, show_default=True, help="Interpolation parameter in (0, 1).")
def kfunc(input_path, output_path, fmt_, p, q, alpha, p1, tol, theta):
    """K-functional bracket on t = 2^-20 .. 2^20 and the interpolation-norm bracket."""
    params = _params(p, q, alpha, p1)
    prof = _profile(_need_input(input_path))
    lower, upper, _ = k_bounds_grid(prof, K_GRID, params)
    bracket = interp_norm_bounds(prof, theta, params.q, params, QuadratureSpec(rel_tol=tol))
    rows = [(float(t), float(lo), float(up)) for t, lo, up in zip(K_GRID, lower, upper)]
    if fmt_ == "json":
        _emit(to_json({
            "grid": [{"t": t, "k_lower": _num(lo), "k_upper": _num(up)} for t, lo, up in rows],
            "interp_bracket": {"theta": theta, "q": _num(params.q),
                               "lower": _num(bracket.lower), "upper": _num(bracket.upper)},
            "chain_constant": chain_constant(params),
        }), output_path)
    else:
        text = to_csv(["t", "k_lower", "k_upper"], rows)
        text += f"# interp_lower={fmt(bracket.lower)}\n# interp_upper={fmt(bracket.upper)}\n"
        _emit(text, output_path)


@cli.command()
@common_options
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--no-builtin", is_flag=True, help="Only check the functions given with --input.")
@click.option("--n-step", type=int, default=500, show_default=True)
@click.option("--n-tail", type=int, default=100, show_default=True)
@click.option("--n-pairs", type=int, default=200, show_default=True)
def verify(input_path, output_path, fmt_, p, q, alpha, p1, tol, seed, no_builtin, n_step, n_tail, n_pairs):
    """Run every inequality check; exit 1 if any fails."""
    params = _params(p, q, alpha, p1)
    extra = load_function_list(input_path) if input_path else []
    if no_builtin and not extra:
        raise click.UsageError("--no-builtin needs --input")
    reports = run_suite(params, seed, extra, n_step, n_tail, n_pairs,
                        QuadratureSpec(rel_tol=tol), builtin=not no_builtin)
    dicts = [r.to_dict() for r in reports]
    if fmt_ == "csv":
        cols = ["name", "lhs", "rhs", "ratio", "constant_claimed", "pass", "inputs", "min_ratio", "max_ratio", "n"]
        rows = [[("" if d.get(c) is None else d.get(c)) for c in cols] for d in dicts]
        _emit(to_csv(cols, rows), output_path)
    else:
        _emit(to_json({
            "seed": seed,
            "params": {"p": params.p, "q": _num(params.q), "alpha": params.alpha, "p1": params.p1},
            "reports": dicts,
        }), output_path)
    for r in reports:
        click.echo(f"{'PASS' if r.passed else 'FAIL'} {r.name}", err=True)
    if not all(r.passed for r in reports):
        sys.exit(1)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
