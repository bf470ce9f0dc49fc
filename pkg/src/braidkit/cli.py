"""Command line: ``braidkit check | act | verify``.

Exit status is 0 when every check passes, 1 when a check fails or cannot be
carried out on the given datum, and 2 for usage or parse errors.
"""
from __future__ import annotations

import json
import re
import sys
import time
from typing import Optional, Tuple

import click

from . import actions, hopf, ncalg, rtensor, suites
from .actions import ActionContext, ActionError
from .ncalg import NCAlgebraError
from .presets import PRESETS, load_preset
from .qcoeff import ONE, PoleError
from .report import VerificationReport
from .rtensor import PairData, RMatrixError

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_GENERATOR = re.compile(r"^(?:(p|c)(\d+)|(S\()?l([+-])(\d)(\d)\)?|s(\^-1)?)$")


class InputError(click.ClickException):
    exit_code = EXIT_USAGE


def _common(fn):
    fn = click.option("--preset", type=click.Choice(sorted(PRESETS)), default=None,
                      help="Built-in datum (default su2-euclidean).")(fn)
    fn = click.option("--rmatrix", "rmatrix_file", type=click.Path(dir_okay=False), default=None,
                      help="R-matrix JSON file.")(fn)
    fn = click.option("--metric", "metric_file", type=click.Path(dir_okay=False), default=None,
                      help="Metric JSON file (overrides any computed metric).")(fn)
    fn = click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")(fn)
    return fn


def _load_pair(preset: Optional[str], rmatrix_file: Optional[str], metric_file: Optional[str],
               need_pair: bool = True) -> Tuple[PairData, bool]:
    """The datum, and whether it carries its own R' (files may give R alone)."""
    if preset and rmatrix_file:
        raise InputError("give either --preset or --rmatrix, not both")
    try:
        if rmatrix_file:
            data = rtensor.load_rmatrix_file(rmatrix_file)
            r_prime = data["r_prime"]
            if r_prime is None:
                if need_pair:
                    raise InputError(f"{rmatrix_file}: no r_prime entries; this command needs the full (R', R) pair")
                r_prime = data["r"]
            lam = data["lam"]
            if lam is None:
                if need_pair:
                    raise InputError(f"{rmatrix_file}: no lambda given")
                lam = ONE
            pair = PairData(r_prime, data["r"], lam, reality=data["reality"],
                            involution=data["involution"], name=data["r"].name or rmatrix_file)
            has_r_prime = data["r_prime"] is not None
        else:
            pair = load_preset(preset or "su2-euclidean")
            has_r_prime = True
        if metric_file:
            pair.metric = rtensor.load_metric_file(metric_file)
            if pair.metric.n != pair.n:
                raise InputError(f"{metric_file}: metric has n={pair.metric.n}, R-matrix has n={pair.n}")
    except OSError as exc:
        raise InputError(str(exc)) from None
    except RMatrixError as exc:
        raise InputError(str(exc)) from None
    return pair, has_r_prime


def _emit(report: VerificationReport, as_json: bool) -> None:
    if as_json:
        click.echo(json.dumps(report.to_json(), indent=2, sort_keys=True))
    else:
        click.echo(str(report))


def _finish(report: VerificationReport, as_json: bool) -> None:
    _emit(report, as_json)
    sys.exit(EXIT_PASS if report.ok else EXIT_FAIL)


@click.group()
def main():
    """Exact checks of q-conformal symmetry on q-spacetime."""


@main.command()
@click.argument("rmatrix_path", required=False, type=click.Path(dir_okay=False))
@click.option("--degree", default=3, show_default=True, type=click.IntRange(1, 6),
              help="Degree for the overlap-ambiguity check.")
@_common
def check(rmatrix_path, degree, preset, rmatrix_file, metric_file, as_json):
    """Yang-Baxter, Hecke, reality and confluence checks on an R-matrix datum."""
    if rmatrix_path and rmatrix_file:
        raise InputError("give the R-matrix file once")
    pair, has_r_prime = _load_pair(preset, rmatrix_path or rmatrix_file, metric_file, need_pair=False)
    parts = [rtensor.check_ybe(pair.r)]
    parts.append(rtensor.check_hecke(pair.small if pair.small is not None else pair.r))
    if pair.reality is not None:
        parts.append(rtensor.check_reality(pair))
    skipped = []
    if has_r_prime:
        parts.append(ncalg.check_confluence(ncalg.build_relations(pair.r_prime), degree))
    else:
        skipped.append("confluence")
    params = {"name": pair.name, "degree": degree}
    if skipped:
        params["skipped"] = skipped
    _finish(VerificationReport.merge("check", parts, params), as_json)


def _parse_generator(text: str):
    m = _GENERATOR.match(text.replace(" ", ""))
    if not m:
        raise InputError(f"cannot parse generator {text!r} (try c1, p2, l+12, l-21, S(l+12), s, s^-1)")
    kind, idx, anti, sign, i, j, inv = m.groups()
    if kind:
        return (kind, int(idx) - 1)
    if sign:
        return ("Sl" if anti else "l", 1 if sign == "+" else -1, int(i) - 1, int(j) - 1)
    return ("s", -1 if inv else 1)


@main.command()
@click.argument("generator")
@click.argument("monomial")
@click.option("--conjugate", is_flag=True, help="Use the conjugate action of c.")
@click.option("--spinorial", is_flag=True, help="Use the spinorial form of the c action.")
@click.option("--q1", is_flag=True, help="Print the classical limit q -> 1.")
@_common
def act(generator, monomial, conjugate, spinorial, q1, preset, rmatrix_file, metric_file, as_json):
    """Apply GENERATOR to MONOMIAL (for example: act c1 "x1.x2")."""
    t0 = time.perf_counter()
    pair, _ = _load_pair(preset, rmatrix_file, metric_file)
    ctx = ActionContext(pair)
    letter = _parse_generator(generator)
    index_slots = letter[1:2] if letter[0] in ("p", "c") else letter[2:] if letter[0] != "s" else ()
    if any(not 0 <= k < ctx.n for k in index_slots):
        raise InputError(f"generator index out of range 1..{ctx.n} in {generator!r}")
    if (conjugate or spinorial) and letter[0] != "c":
        raise InputError("--conjugate and --spinorial apply to c generators only")
    if conjugate and spinorial:
        raise InputError("choose one of --conjugate and --spinorial")
    try:
        m = ctx.alg.parse(monomial)
    except NCAlgebraError as exc:
        raise InputError(str(exc)) from None
    params = {"generator": generator, "input": m.render(), "name": pair.name}
    try:
        if conjugate:
            out = ctx.act_c_conjugate(letter[1], m)
        elif spinorial:
            out = ctx.act_c_spinorial(letter[1], m)
        else:
            out = hopf.act_letter(ctx, letter, m)
        if q1:
            out = actions.at_q1(out, actions.commutative_algebra(ctx.n))
            params["limit"] = "q=1"
    except (ActionError, PoleError) as exc:
        rep = VerificationReport.errored("act", str(exc), params)
        rep.millis = (time.perf_counter() - t0) * 1000.0
        _finish(rep, as_json)
        return
    params["result"] = out.render()
    if as_json:
        rep = VerificationReport.passed("act", params)
        rep.millis = (time.perf_counter() - t0) * 1000.0
        _emit(rep, True)
    else:
        click.echo(out.render())


@main.command()
@click.argument("suite", type=click.Choice(list(suites.SUITES) + ["all"]))
@click.option("--degree", default=3, show_default=True, type=click.IntRange(1, 6),
              help="Word-degree cap for the sweeps.")
@_common
def verify(suite, degree, preset, rmatrix_file, metric_file, as_json):
    """Run a verification suite (or all of them)."""
    pair, _ = _load_pair(preset, rmatrix_file, metric_file)
    ctx = ActionContext(pair)
    _finish(suites.run_suite(suite, ctx, degree), as_json)


if __name__ == "__main__":  # pragma: no cover
    main()
