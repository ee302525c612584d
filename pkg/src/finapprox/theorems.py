"""Numerical checks of the inequalities relating best approximation and Lorentz norms.

Each checker computes both sides of one inequality and returns a
:class:`CheckReport`. Inequalities pass when ``lhs <= rhs * (1 + SLACK)``.
Where no explicit constant is available, the report records
``"unspecified"`` and only finiteness is asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
from scipy.integrate import quad

from finapprox.errors import DomainError, PreconditionError
from finapprox.kfunc import k_bounds_grid
from finapprox.norms import (
    DEFAULT_QUAD,
    QuadratureSpec,
    approx_space_norm,
    error_curve,
    lorentz_norm,
    lp_norm,
    weak_lorentz_norm,
)
from finapprox.profile import INF, NormParams, RearrangementProfile
from finapprox.stepfn import StepFunction, rearrange

SLACK = 1e-8


def _ratio(lhs: float, rhs: float) -> float:
    if rhs > 0.0:
        return lhs / rhs if rhs < INF else 0.0
    return 0.0 if lhs == 0.0 else INF


def _json_num(x: float) -> float | None:
    return x if math.isfinite(x) else None


@dataclass
class CheckReport:
    name: str
    lhs: float
    rhs: float
    constant_claimed: float | str = "unspecified"
    passed: bool = False
    inputs: str = ""
    ratio: float = field(init=False)
    min_ratio: float | None = None
    max_ratio: float | None = None
    n: int | None = None

    def __post_init__(self) -> None:
        self.ratio = _ratio(self.lhs, self.rhs)

    @property
    def is_aggregate(self) -> bool:
        return self.n is not None

    def to_dict(self) -> dict[str, Any]:
        """JSON form; non-finite numbers become ``null``."""
        d: dict[str, Any] = {
            "name": self.name,
            "lhs": _json_num(self.lhs),
            "rhs": _json_num(self.rhs),
            "ratio": _json_num(self.ratio),
            "constant_claimed": self.constant_claimed
            if isinstance(self.constant_claimed, str)
            else _json_num(self.constant_claimed),
            "pass": self.passed,
            "inputs": self.inputs,
        }
        if self.is_aggregate:
            d["min_ratio"] = _json_num(self.min_ratio)
            d["max_ratio"] = _json_num(self.max_ratio)
            d["n"] = self.n
        return d


def _leq(lhs: float, rhs: float) -> bool:
    return lhs <= rhs * (1.0 + SLACK)


def _profile(f) -> RearrangementProfile:
    return rearrange(f) if isinstance(f, StepFunction) else f


def describe(f) -> str:
    """Short, deterministic description of a test function."""
    if isinstance(f, StepFunction):
        return f"step[{len(f.atoms)} atoms, |supp|={f.support_measure!r}]"
    tail = "" if f.tail is None else f", tail c={f.tail.coeff!r} gamma={f.tail.exponent!r}"
    return f"profile[{len(f.pieces)} pieces{tail}]"


def sup_weighted_error(profile: RearrangementProfile, alpha: float, p: float) -> float:
    """``sup_sigma sigma**alpha E_sigma(f)_p``: segment-analytic value, cross-checked on a grid."""
    analytic = approx_space_norm(profile, NormParams(p, q=INF, alpha=alpha))
    if analytic in (0.0, INF):
        return analytic
    lo = profile.pieces[0].t_end
    hi = max(profile.end, lo)
    ks = np.arange(math.floor(math.log2(lo)) - 10, math.ceil(math.log2(hi)) + 11, 0.125)
    sig = np.exp2(ks)
    grid = float(np.max(sig**alpha * error_curve(profile, sig, p)))
    return max(analytic, grid)


def check_jackson(f, params: NormParams) -> CheckReport:
    """``sup sigma^alpha E_sigma(f)_p <= (alpha p)^(-1/p) ||f||_{p1,inf}``."""
    profile = _profile(f)
    p, alpha = params.p, params.alpha
    weak = weak_lorentz_norm(profile, params.p1)
    if weak == INF:
        raise PreconditionError("f is not in L_{p1,inf}")
    const = (alpha * p) ** (-1.0 / p)
    lhs = sup_weighted_error(profile, alpha, p)
    rhs = const * weak
    return CheckReport("jackson", lhs, rhs, const, _leq(lhs, rhs), describe(f))


def check_inverse_weak(f, params: NormParams) -> CheckReport:
    """``||f||_{p1,inf} <= 2^(alpha + 1/p) sup sigma^alpha E_sigma(f)_p``."""
    profile = _profile(f)
    p, alpha = params.p, params.alpha
    sup = sup_weighted_error(profile, alpha, p)
    if sup == INF:
        raise PreconditionError("sup sigma^alpha E_sigma(f)_p is infinite")
    const = 2.0 ** (alpha + 1.0 / p)
    lhs = weak_lorentz_norm(profile, params.p1)
    rhs = const * sup
    return CheckReport("inverse_weak", lhs, rhs, const, _leq(lhs, rhs), describe(f))


def check_bernstein(phi: StepFunction, params: NormParams) -> CheckReport:
    """``||phi||_{p1,inf} <= |supp phi|^r ||phi||_p`` (constant 1)."""
    profile = rearrange(phi)
    sigma = profile.end
    lhs = weak_lorentz_norm(profile, params.p1)
    rhs = sigma**params.r * lp_norm(profile, params.p) if sigma > 0.0 else 0.0
    return CheckReport("bernstein", lhs, rhs, 1.0, _leq(lhs, rhs), describe(phi))


def check_quasi_triangle(f: StepFunction, g: StepFunction, params: NormParams,
                         quad_spec: QuadratureSpec = DEFAULT_QUAD) -> CheckReport:
    """``||f + g||_A <= 2^alpha (||f||_A + ||g||_A)`` for the approximation-space quasinorm."""
    const = 2.0**params.alpha
    lhs = approx_space_norm(rearrange(f + g), params, quad_spec)
    rhs = const * (
        approx_space_norm(rearrange(f), params, quad_spec)
        + approx_space_norm(rearrange(g), params, quad_spec)
    )
    return CheckReport("quasi_triangle", lhs, rhs, const, _leq(lhs, rhs),
                       f"{describe(f)} + {describe(g)}")


def check_k_bracket(f, params: NormParams, ts: Sequence[float]) -> CheckReport:
    """``k_lower(t) <= k_upper(t)`` on a grid; reports the worst ``t``."""
    lower, upper, _ = k_bounds_grid(f, ts, params)
    ratios = np.array([_ratio(lo, up) for lo, up in zip(lower, upper)])
    j = int(np.argmax(ratios))
    ok = bool(np.all(lower <= upper))
    return CheckReport("k_bracket", float(lower[j]), float(upper[j]), "unspecified", ok,
                       f"{describe(f)}, t={float(ts[j])!r}")


@dataclass(frozen=True)
class SampledDecreasing:
    """Nonnegative nonincreasing function on ``(0, inf)`` known on ``[t_min, t_max]``.

    Below ``t_min`` it is continued by the constant ``func(t_min)``; above
    ``t_max`` by ``func(t_max) * (t / t_max)**(-tail_exponent)``, or by zero
    when ``tail_exponent`` is ``None``. Jumps of ``func`` should be listed
    in ``breakpoints`` so that quadrature never straddles them.
    """

    func: Callable[[float], float]
    t_min: float = 1e-12
    t_max: float = 1e4
    tail_exponent: float | None = None
    breakpoints: tuple[float, ...] = ()
    n_check: int = 2001

    def validate(self) -> None:
        ts = np.unique(np.concatenate((
            np.geomspace(self.t_min, self.t_max, self.n_check),
            [b for b in self.breakpoints if self.t_min <= b <= self.t_max],
        )))
        vals = np.array([self.func(float(t)) for t in ts])
        if np.any(vals < 0.0) or not np.all(np.isfinite(vals)):
            raise PreconditionError("varphi must be finite and nonnegative")
        if np.any(np.diff(vals) > 0.0):
            raise PreconditionError("varphi must be nonincreasing")

    def nodes(self, per_efold: int = 2) -> np.ndarray:
        n = max(2, int(math.ceil(math.log(self.t_max / self.t_min) * per_efold)) + 1)
        grid = np.geomspace(self.t_min, self.t_max, n)
        inner = [b for b in self.breakpoints if self.t_min < b < self.t_max]
        return np.unique(np.concatenate((grid, inner)))


def _q(f, a, b, quad_spec):
    val, _ = quad(f, a, b, epsabs=0.0, epsrel=quad_spec.rel_tol, limit=quad_spec.max_depth)
    return val


def hardy_sides(varphi: SampledDecreasing, r: float, theta: float, q: float,
                quad_spec: QuadratureSpec = DEFAULT_QUAD) -> tuple[float, float]:
    """Both sides of the weighted Hardy inequality for ``phi(t) = t^r varphi(t)``.

    lhs = int_0^inf (s^-theta int_0^s phi(t) dt/t)^q ds/s
    rhs = int_0^inf (t^-theta phi(t))^q dt/t

    Integrals over ``[t_min, t_max]`` are done by adaptive quadrature in
    ``u = log t``; the two outer ranges use the constant / power-law
    continuation in closed form (or a single improper quadrature).
    """
    t_min, t_max = varphi.t_min, varphi.t_max
    phi0, phim = varphi.func(t_min), varphi.func(t_max)
    beta = varphi.tail_exponent
    tq = theta * q
    low_exp = (r - theta) * q

    def low_part(scale: float) -> float:
        if scale == 0.0:
            return 0.0
        if low_exp <= 0.0:
            return INF
        return scale**q * t_min**low_exp / low_exp

    def weight(t: float) -> float:
        return t ** (r - 1.0) * varphi.func(t)

    nodes = varphi.nodes()
    # I(s) = int_0^s t^(r-1) varphi(t) dt at the nodes
    acc = [phi0 * t_min**r / r]
    for a, b in zip(nodes[:-1], nodes[1:]):
        acc.append(acc[-1] + _q(weight, a, b, quad_spec))

    def inner(s: float, k: int) -> float:
        return acc[k] + (_q(weight, nodes[k], s, quad_spec) if s > nodes[k] else 0.0)

    lhs_parts = [low_part(phi0 / r)]
    rhs_parts = [low_part(phi0)]
    for k, (a, b) in enumerate(zip(nodes[:-1], nodes[1:])):
        lhs_parts.append(_q(lambda u, k=k: math.exp(-tq * u) * inner(math.exp(u), k) ** q,
                            math.log(a), math.log(b), quad_spec))
        rhs_parts.append(_q(lambda u: (math.exp((r - theta) * u) * varphi.func(math.exp(u))) ** q,
                            math.log(a), math.log(b), quad_spec))

    i_max = acc[-1]
    if beta is None or phim == 0.0:
        lhs_parts.append(i_max**q * t_max ** (-tq) / tq)
    else:
        e = r - beta
        scale = phim * t_max**beta

        def grow(s: float) -> float:
            if e == 0.0:
                return scale * math.log(s / t_max)
            return scale * (s**e - t_max**e) / e

        if e >= theta:
            lhs_parts.append(INF)
        else:
            val, _ = quad(lambda s: s ** (-tq - 1.0) * (i_max + grow(s)) ** q,
                          t_max, np.inf, epsabs=0.0, epsrel=quad_spec.rel_tol,
                          limit=quad_spec.max_depth)
            lhs_parts.append(val)
        high_exp = (r - theta - beta) * q
        rhs_parts.append(INF if high_exp >= 0.0 else phim**q * t_max ** ((r - theta) * q) / (-high_exp))

    lhs_sum, rhs_sum = math.fsum(lhs_parts), math.fsum(rhs_parts)
    return lhs_sum, rhs_sum


def check_hardy(varphi: SampledDecreasing, r: float, theta: float, q: float,
                quad_spec: QuadratureSpec = DEFAULT_QUAD) -> CheckReport:
    """Weighted Hardy inequality: passes iff lhs is finite whenever rhs is."""
    if not (r > 0.0 and theta > 0.0 and 0.0 < q < INF):
        raise DomainError("need r > 0, theta > 0 and 0 < q < inf")
    varphi.validate()
    lhs, rhs = hardy_sides(varphi, r, theta, q, quad_spec)
    ok = lhs < INF or rhs == INF
    return CheckReport("hardy", lhs, rhs, "unspecified", ok,
                       f"r={r!r}, theta={theta!r}, q={q!r}")


def equivalence_ratio(profile: RearrangementProfile, params: NormParams,
                      quad_spec: QuadratureSpec = DEFAULT_QUAD) -> tuple[float, float]:
    """``(||f||_{A^alpha_{p,q}}, ||f||_{L_{p1,q}})``."""
    return (approx_space_norm(profile, params, quad_spec),
            lorentz_norm(profile, params.p1, params.q))


def check_equivalence(family: Sequence, params: NormParams,
                      quad_spec: QuadratureSpec = DEFAULT_QUAD) -> CheckReport:
    """Ratio band of the approximation-space norm over the Lorentz norm.

    For ``q = inf`` the two-sided constants ``2^-(alpha+1/p)`` and
    ``(alpha p)^(-1/p)`` are known and the band must sit inside them;
    otherwise only a positive finite band is required.
    """
    if not family:
        raise DomainError("empty family")
    ratios, sides = [], []
    for f in family:
        profile = _profile(f)
        a_norm, l_norm = equivalence_ratio(profile, params, quad_spec)
        if not 0.0 < l_norm < INF:
            raise PreconditionError(f"Lorentz norm not positive and finite for {describe(f)}")
        ratios.append(a_norm / l_norm)
        sides.append((a_norm, l_norm))
    lo, hi = min(ratios), max(ratios)
    j = ratios.index(hi)
    ok = 0.0 < lo and hi < INF
    const: float | str = "unspecified"
    if params.q == INF:
        c1 = 2.0 ** (-params.alpha - 1.0 / params.p)
        c2 = (params.alpha * params.p) ** (-1.0 / params.p)
        ok = ok and lo >= c1 * (1.0 - SLACK) and _leq(hi, c2)
        const = c2
    q_txt = "inf" if params.q == INF else repr(params.q)
    return CheckReport(
        "equivalence", sides[j][0], sides[j][1], const, ok,
        f"{len(ratios)} functions, p={params.p!r} q={q_txt} alpha={params.alpha!r}",
        min_ratio=lo, max_ratio=hi, n=len(ratios),
    )


def aggregate(name: str, reports: Sequence[CheckReport], inputs: str = "") -> CheckReport:
    """Collapse per-function reports into one; ``lhs``/``rhs`` come from the worst ratio."""
    if not reports:
        raise DomainError("nothing to aggregate")
    ratios = [r.ratio for r in reports]
    j = int(np.argmax(ratios))
    worst = reports[j]
    return CheckReport(
        name, worst.lhs, worst.rhs, worst.constant_claimed,
        all(r.passed for r in reports), inputs or worst.inputs,
        min_ratio=min(ratios), max_ratio=max(ratios), n=len(reports),
    )
