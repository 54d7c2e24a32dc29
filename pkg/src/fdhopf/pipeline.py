"""The full verification pipeline, stage by stage."""

from __future__ import annotations

import random
import re
from typing import Callable

from .constructions import HopfProjection, taft_projection
from .hopf import FinHopfAlgebra, NoAntipode, dual, solve_antipode, verify_axioms
from .report import VerificationReport
from .spectral import (
    EvenIndexUnsupported,
    NotAHopfProjection,
    compute_grading,
    compute_index,
    grading_consistency,
    normal_form,
    verify_biproduct,
    verify_lemma_identities,
    verify_pq_theorems,
)
from .structure import (
    EquivalenceViolation,
    ExpressionMismatch,
    IntegralSpaceNotOneDimensional,
    NormalizationImpossible,
    compute_integrals,
    group_likes,
    is_semisimple,
    random_endomorphism,
    trace_formula,
    verify_radford_s4,
)

__all__ = ["run_pipeline", "STAGES"]

STAGES = ("axioms", "integrals", "index", "grading", "normal-form", "lemmas", "pq", "biproduct")
_TAFT_NAME = re.compile(r"taft\((\d+),(\d+)\)")
TRACE_SAMPLES = 20


def _skip_rest(report: VerificationReport, stages, reason: str) -> None:
    for st in stages:
        report.skip(st, reason)


def run_pipeline(H: FinHopfAlgebra, on_stage: Callable[[VerificationReport], None] | None = None,
                 seed: int = 0, group_like_checks: bool = True) -> VerificationReport:
    """Run every verifier in order; ``on_stage`` receives the report after each stage."""
    report = VerificationReport()

    def done():
        if on_stage is not None:
            on_stage(report)

    if H.antipode is None:
        try:
            H = H.with_antipode(solve_antipode(H))
            report.add("antipode-solve", True, "antipode solved from the left identity")
        except NoAntipode as exc:
            report.add("antipode-solve", False, str(exc), {"residual": "no convolution inverse"})
    report.extend(verify_axioms(H))
    done()
    if not report.ok:
        _skip_rest(report, STAGES[1:], "axioms failed")
        done()
        return report

    try:
        pack = compute_integrals(H)
    except (IntegralSpaceNotOneDimensional, NormalizationImpossible) as exc:
        report.add("integrals", False, str(exc), {"residual": type(exc).__name__})
        _skip_rest(report, STAGES[2:], "integrals unavailable")
        done()
        return report
    report.add("integrals", True,
               f"unimodular={pack.unimodular}, dual unimodular={pack.dual_unimodular}")
    try:
        v = is_semisimple(H, pack)
        report.add("semisimplicity", True,
                   f"semisimple={v.semisimple}, Tr(S^2) = {v.trace_s2}, eps(Lambda) = {v.counit_of_integral}")
    except EquivalenceViolation as exc:
        report.add("semisimplicity", False, str(exc), {"residual": "criteria disagree"})
    report.extend(verify_radford_s4(H, pack))
    rng = random.Random(seed)
    try:
        for _ in range(TRACE_SAMPLES):
            trace_formula(H, pack, random_endomorphism(H, rng))
        report.add("trace-formula", True, f"{TRACE_SAMPLES} random endomorphisms")
    except ExpressionMismatch as exc:
        report.add("trace-formula", False, str(exc), {"residual": str(exc)})
    if group_like_checks:
        G = group_likes(H)
        Gd = group_likes(dual(H))
        dual_alpha = [a.coeffs for a in Gd]
        ok = (len(G) and H.dim % len(G) == 0 and H.dim % len(Gd) == 0
              and pack.g in G and pack.alpha.coeffs in dual_alpha)
        report.add("group-likes", bool(ok), f"|G(H)| = {len(G)}, |G(H*)| = {len(Gd)}",
                   {"residual": "distinguished group-likes or divisibility"})
    done()

    try:
        ctx = compute_index(H, pack)
    except ArithmeticError as exc:
        report.add("index", False, str(exc), {"residual": str(exc)})
        _skip_rest(report, STAGES[3:], "index unavailable")
        done()
        return report
    bad = ctx.invariant_violations()
    report.add("index", not bad, f"n = {ctx.n}, o(S^4) = {ctx.order_s4}, o(g) = {ctx.order_g}, "
               f"o(alpha) = {ctx.order_alpha}, x = {ctx.x}", {"residual": "; ".join(bad)})
    done()

    table = None
    try:
        table = compute_grading(H, ctx)
    except EvenIndexUnsupported as exc:
        _skip_rest(report, ("grading", "normal-form", "lemmas"), str(exc))
    if table is not None:
        entry = report.add("grading", True, f"n = {ctx.n}, omega exponent {ctx.omega_exponent}")
        entry.table = table.to_dict()
        report.extend(grading_consistency(ctx, table))
        done()
        report.extend(normal_form(H, pack, ctx, table).report)
        done()
        report.extend(verify_lemma_identities(H, pack, ctx, table))
    report.extend(verify_pq_theorems(H, pack, ctx))
    done()

    m = _TAFT_NAME.fullmatch(H.name)
    if m:
        n, e = int(m.group(1)), int(m.group(2))
        try:
            proj = taft_projection(n, e)
            N = H.cyc_order
            if proj.pi.field is not H.field and N % proj.pi.field.order == 0:
                proj = HopfProjection(proj.pi.coerce(N), proj.gamma.coerce(N), proj.target.coerce(N))
            if proj.pi.shape[1] != H.dim or proj.pi.field is not H.field:
                raise NotAHopfProjection("projection does not fit the input algebra")
            report.extend(verify_biproduct(H, proj, pack))
        except NotAHopfProjection as exc:
            report.add("lemma-6.3", False, str(exc), {"residual": str(exc)})
        except ValueError as exc:
            report.skip("lemma-6.3", f"no projection for this name: {exc}")
    else:
        report.skip("lemma-6.3", "no Hopf projection bundled for this algebra")
    done()
    return report
