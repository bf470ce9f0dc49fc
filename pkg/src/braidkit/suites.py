"""Named bundles of checks, shared by the command line and the acceptance tests."""
from __future__ import annotations

from typing import Callable, Dict, List

from . import actions, hopf, presets, rtensor
from .actions import ActionContext, ActionError
from .ncalg import NCAlgebraError
from .report import VerificationReport, timed
from .rtensor import RMatrixError

SuiteFn = Callable[[ActionContext, int], VerificationReport]


def _guard(check: str, fn, *args, **kwargs) -> VerificationReport:
    """Run a check, turning a structural error into an ``error`` report."""
    try:
        return fn(*args, **kwargs)
    except (ActionError, RMatrixError, NCAlgebraError, hopf.HopfError) as exc:
        return VerificationReport.errored(check, str(exc))


def has_reference_table(ctx: ActionContext) -> bool:
    return ctx.pair.name == "su2-euclidean"


@timed
def table_suite(ctx: ActionContext, degree: int = 0) -> VerificationReport:
    """Every c_j on x_i against the shipped deformed table."""
    params = {"entries": ctx.n * ctx.n}
    if not has_reference_table(ctx):
        return VerificationReport.errored("table", "no reference table for this datum", params)
    got = actions.action_table(ctx)
    want = presets.reference_table(ctx.alg)
    bad = actions.compare_tables(got, want)
    params["matched"] = ctx.n * ctx.n - len(bad)
    if bad:
        j, i = bad[0]
        return VerificationReport.failed(
            "table", f"{len(bad)} of {ctx.n * ctx.n} entries differ; first: c{j + 1} on x{i + 1} gives "
                     f"{got[j][i].render()}, reference {want[j][i].render()}", params)
    return VerificationReport.passed("table", params)


@timed
def relations_suite(ctx: ActionContext, degree: int = 3) -> VerificationReport:
    parts = [
        _guard("algebra-relations", actions.verify_algebra_relations, ctx, degree),
        _guard("cross-relations", actions.verify_cross_relations, ctx, degree),
        _guard("c-action-paths", actions.verify_act_c_paths, ctx, degree),
        _guard("intertwining", actions.verify_intertwining, ctx, degree),
    ]
    if ctx.pair.gauge == "euclidean" and ctx.pair.small is not None:
        parts.append(_guard("spinorial", actions.verify_spinorial, ctx, min(degree, 2)))
    return VerificationReport.merge("relations", parts, {"degree": degree})


@timed
def module_algebra_suite(ctx: ActionContext, degree: int = 3) -> VerificationReport:
    parts = [
        _guard("module-algebra", hopf.verify_module_algebra_all, ctx, degree),
        _guard("hopf-axioms", hopf.verify_hopf_axioms, ctx, min(degree, 2)),
        _guard("relations-U", hopf.verify_relations_U, ctx, min(degree, 2)),
    ]
    return VerificationReport.merge("module-algebra", parts, {"degree": degree})


@timed
def metric_suite(ctx: ActionContext, degree: int = 3) -> VerificationReport:
    parts = [
        _guard("metric", lambda: rtensor.check_metric(ctx.pair, ctx.metric)),
        _guard("metric-scaling", actions.verify_metric_scaling, ctx, degree),
    ]
    return VerificationReport.merge("metric", parts, {"degree": degree})


@timed
def gaussian_suite(ctx: ActionContext, degree: int = 3) -> VerificationReport:
    return _guard("gaussian", actions.verify_gaussian, ctx, degree)


@timed
def conjugation_suite(ctx: ActionContext, degree: int = 2) -> VerificationReport:
    parts = [
        _guard("star", hopf.verify_star, ctx, degree),
        _guard("pairing-bialgebra", hopf.verify_pairing_bialgebra, ctx, min(degree, 2)),
        _guard("exp-inverse", hopf.verify_exp_inverse, ctx, degree),
        _guard("conjugation", hopf.verify_conjugation_identity, ctx, degree),
    ]
    return VerificationReport.merge("conjugation", parts, {"degree": degree})


@timed
def classical_limit_suite(ctx: ActionContext, degree: int = 0) -> VerificationReport:
    parts = [_guard("classical-limit", actions.verify_classical_limit, ctx)]
    if has_reference_table(ctx):
        target = actions.commutative_algebra(ctx.n)
        got = _guard_table(ctx)
        if isinstance(got, VerificationReport):
            parts.append(got)
        else:
            bad = actions.compare_tables(got, presets.classical_table(target))
            params = {"matched": ctx.n * ctx.n - len(bad), "entries": ctx.n * ctx.n}
            parts.append(VerificationReport.failed("classical-table", f"entries differ at {bad}", params) if bad
                         else VerificationReport.passed("classical-table", params))
    return VerificationReport.merge("classical-limit", parts)


def _guard_table(ctx: ActionContext):
    try:
        return actions.classical_limit_table(ctx)
    except ActionError as exc:
        return VerificationReport.errored("classical-table", str(exc))


SUITES: Dict[str, SuiteFn] = {
    "table": table_suite,
    "relations": relations_suite,
    "module-algebra": module_algebra_suite,
    "metric": metric_suite,
    "gaussian": gaussian_suite,
    "conjugation": conjugation_suite,
    "classical-limit": classical_limit_suite,
}


def run_suite(name: str, ctx: ActionContext, degree: int = 3) -> VerificationReport:
    if name == "all":
        return run_all(ctx, degree)
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}") from None
    return fn(ctx, degree)


def applicable_suites(ctx: ActionContext) -> List[str]:
    names = list(SUITES)
    if not has_reference_table(ctx):
        names.remove("table")
    return names


@timed
def run_all(ctx: ActionContext, degree: int = 3) -> VerificationReport:
    names = applicable_suites(ctx)
    parts = [run_suite(name, ctx, degree) for name in names]
    parts.append(divisibility_report(ctx))
    return VerificationReport.merge("all", parts, {"degree": degree, "preset": ctx.pair.name, "suites": names})


def divisibility_report(ctx: ActionContext) -> VerificationReport:
    params = {"divisions": ctx.divisions}
    if ctx.division_failures:
        return VerificationReport.failed("divisibility", ctx.division_failures[0],
                                         dict(params, failures=len(ctx.division_failures)))
    return VerificationReport.passed("divisibility", params)
