"""The full verification suite run by ``finapprox verify``."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from finapprox.errors import PreconditionError
from finapprox.families import FAMILY_VERSION, step_family, step_pairs, tail_family
from finapprox.norms import DEFAULT_QUAD, QuadratureSpec, lorentz_norm
from finapprox.profile import INF, NormParams, PowerTail, ProfilePiece, RearrangementProfile
from finapprox.stepfn import StepFunction, rearrange
from finapprox.theorems import (
    CheckReport,
    SampledDecreasing,
    aggregate,
    check_bernstein,
    check_equivalence,
    check_hardy,
    check_inverse_weak,
    check_jackson,
    check_k_bracket,
    check_quasi_triangle,
)

K_GRID = np.exp2(np.arange(-20, 21).astype(float))


def power_tail_witness(params: NormParams) -> RearrangementProfile:
    """``f* = 1`` on ``[0, 1)`` and ``t^(-1/p1)`` beyond: the Jackson equality case."""
    return RearrangementProfile((ProfilePiece(0.0, 1.0, 1.0),), PowerTail(1.0, 1.0, 1.0 / params.p1))


def _collect(name: str, fn, members, label: str) -> CheckReport | None:
    reports, skipped = [], 0
    for f in members:
        try:
            reports.append(fn(f))
        except PreconditionError:
            skipped += 1
    if not reports:
        return None
    note = f"{label}, {len(reports)} checked, {skipped} outside hypothesis"
    return aggregate(name, reports, note)


def run_suite(
    params: NormParams,
    seed: int = 0,
    extra: Sequence[StepFunction | RearrangementProfile] = (),
    n_step: int = 500,
    n_tail: int = 100,
    n_pairs: int = 200,
    quad_spec: QuadratureSpec = DEFAULT_QUAD,
    builtin: bool = True,
) -> list[CheckReport]:
    """Run every check on the seeded families plus ``extra``; results in a fixed order."""
    steps: list = step_family(seed, n_step) if builtin else []
    tails: list = tail_family(seed, params.p, params.alpha, n_tail) if builtin else []
    steps += [f for f in extra if isinstance(f, StepFunction)]
    tails += [f for f in extra if not isinstance(f, StepFunction)]
    members = steps + tails
    label = f"family v{FAMILY_VERSION} seed={seed}, {len(steps)} step + {len(tails)} profiles"

    out: list[CheckReport] = []
    for name, fn in (
        ("jackson", lambda f: check_jackson(f, params)),
        ("inverse_weak", lambda f: check_inverse_weak(f, params)),
    ):
        rep = _collect(name, fn, members, label)
        if rep is not None:
            out.append(rep)
    if steps:
        out.append(_collect("bernstein", lambda f: check_bernstein(f, params), steps, label))
    out.append(check_jackson(power_tail_witness(params), params))
    out[-1].name = "jackson_sharpness"
    if members:
        out.append(_collect("k_bracket", lambda f: check_k_bracket(f, params, K_GRID), members, label))

    finite = []
    for f in members:
        prof = rearrange(f) if isinstance(f, StepFunction) else f
        ln = lorentz_norm(prof, params.p1, params.q)
        if 0.0 < ln < INF:
            finite.append(prof)
    if finite:
        out.append(check_equivalence(finite, params, quad_spec))

    if builtin and n_pairs:
        pairs = step_pairs(seed, n_pairs)
        reps = [check_quasi_triangle(f, g, params, quad_spec) for f, g in pairs]
        out.append(aggregate("quasi_triangle", reps, f"{len(pairs)} seeded pairs, seed={seed}"))

    out.append(check_hardy(SampledDecreasing(lambda t: math.exp(-t)), 1.0, 0.5, 1.0, quad_spec))
    out[-1].inputs = "varphi=exp(-t), " + out[-1].inputs
    return out
