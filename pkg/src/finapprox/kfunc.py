"""Two-sided bounds for the K-functional of the couple (L_p, L_{p1,inf}).

The exact K-functional is not computed. Lower bounds come from the best
approximation error (a Jackson-type estimate); upper bounds come from
explicit admissible splittings ``f = (f - f 1_A) + f 1_A`` with ``A`` a best
support set of measure ``sigma``, minimised over ``sigma``. For a fixed
``sigma`` the splitting costs

    J(sigma) = E_sigma(f)_p + t * sup_{s < sigma} s**(1/p1) f*(s),

which depends on ``f`` only through its rearrangement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from finapprox.errors import DomainError
from finapprox.norms import (
    DEFAULT_QUAD,
    QuadratureSpec,
    approx_space_norm,
    error_curve,
    lp_norm,
    weak_lorentz_norm,
)
from finapprox.profile import INF, NormParams, RearrangementProfile, approx_error
from finapprox.stepfn import StepFunction, rearrange

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
GOLDEN_RTOL = 1e-10
_GOLDEN_MAX_ITER = 120
DYADIC_RANGE = 2000
# Relative outward rounding applied to both ends of a bracket. numpy's
# vectorised and scalar ``pow`` can disagree in the last bit, which would
# otherwise let a lower bound exceed an upper bound by one ulp.
OUTWARD = 2.0**-50


@dataclass(frozen=True)
class BoundReport:
    lower: float
    upper: float
    witness: str = ""

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError(f"bracket inverted: {self.lower} > {self.upper}")

    def scaled(self, c: float) -> BoundReport:
        return BoundReport(c * self.lower, c * self.upper, self.witness)


def _as_profile(f) -> RearrangementProfile:
    if isinstance(f, StepFunction):
        return rearrange(f)
    return f


def direct_constant(params: NormParams) -> float:
    """Constant ``C`` with ``E_sigma(f)_p <= C K(f, sigma**-r)``.

    ``max(1, (r p)**(-1/p))`` comes from the Jackson estimate for the
    ``L_{p1,inf}`` part; for ``p < 1`` the ``L_p`` quasi-triangle inequality
    adds the factor ``2**(1/p - 1)``.
    """
    p, r = params.p, params.r
    quasi = max(1.0, 2.0 ** (1.0 / p - 1.0))
    return quasi * max(1.0, (r * p) ** (-1.0 / p))


def chain_constant(params: NormParams) -> float:
    """Constant with ``K(f, 2**(-m r)) <= C * k_upper_dyadic(f, m)``.

    Uses ``f*(2**(k-1))**p * 2**(k-2) <= E_{2**(k-2)}(f)_p**p`` on every
    dyadic block below ``2**m`` instead of a triangle inequality in the
    weak space, which is only a quasinorm.
    """
    return max(1.0, 2.0 ** (2.0 / params.p + params.r - 1.0))


def k_lower(f, t: float, params: NormParams) -> float:
    """Lower bound ``E_{t**(-1/r)}(f)_p / C`` for ``K(f, t)``."""
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t}")
    profile = _as_profile(f)
    if profile.is_zero:
        return 0.0
    sigma = t ** (-1.0 / params.r)
    if sigma == 0.0:
        return lp_norm(profile, params.p) / direct_constant(params) * (1.0 - OUTWARD)
    if sigma == INF:
        return 0.0
    return approx_error(profile, sigma, params.p) / direct_constant(params) * (1.0 - OUTWARD)


class _Splitting:
    """Precomputed per-piece data for evaluating ``J(sigma)`` on arrays."""

    def __init__(self, profile: RearrangementProfile, params: NormParams):
        self.profile = profile
        self.p, self.p1, self.r = params.p, params.p1, params.r
        p, p1 = self.p, self.p1
        pieces = [pc for pc in profile.pieces if pc.value > 0.0]
        tail = profile.tail
        g = tail.moment(profile.end, INF, p) if tail is not None else 0.0
        g_b = []
        for pc in reversed(pieces):
            g_b.append(g)
            g += pc.value**p * pc.length
        g_b.reverse()
        self.full = g  # ||f||_p ** p
        self.a = np.array([pc.t_start for pc in pieces])
        self.b = np.array([pc.t_end for pc in pieces])
        self.v = np.array([pc.value for pc in pieces])
        self.w = self.v**p
        self.g_b = np.array(g_b)
        weak_at_end = self.b ** (1.0 / p1) * self.v
        self.w_prev = np.concatenate(([0.0], np.maximum.accumulate(weak_at_end)[:-1]))
        self.w_end = float(weak_at_end.max()) if len(pieces) else 0.0
        with np.errstate(divide="ignore"):
            kink = (self.w_prev / self.v) ** p1
        self.kink = np.clip(kink, self.a, self.b)

    def _error(self, sigma, k):
        resid = self.g_b[k] + self.w[k] * np.maximum(self.b[k] - sigma, 0.0)
        return resid ** (1.0 / self.p)

    def cost(self, sigma, k, t):
        """``J(sigma)`` for ``sigma`` inside piece ``k``."""
        weak = np.maximum(self.w_prev[k], sigma ** (1.0 / self.p1) * self.v[k])
        return self._error(sigma, k) + t * weak

    def minimise(self, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Best cost and the ``sigma`` achieving it, for every ``t`` in ``ts``."""
        ts = np.asarray(ts, dtype=float)
        n_t = ts.size
        T = ts[:, None]
        if self.full == INF:
            return self._tail_only(ts)
        best = np.full(n_t, self.full ** (1.0 / self.p))
        arg = np.zeros(n_t)

        def offer(cost, sig):
            nonlocal best, arg
            cost = np.asarray(cost, dtype=float)
            sig = np.broadcast_to(np.asarray(sig, dtype=float), cost.shape)
            if cost.ndim == 2:
                j = np.argmin(cost, axis=1)
                cost = cost[np.arange(n_t), j]
                sig = sig[np.arange(n_t), j]
            better = cost < best
            best = np.where(better, cost, best)
            arg = np.where(better, sig, arg)

        n = self.a.size
        if n:
            k = np.arange(n)[None, :]
            offer(self.cost(self.b[None, :], k, T), self.b[None, :] + 0.0 * T)
            offer(self.cost(self.kink[None, :], k, T), self.kink[None, :] + 0.0 * T)
            # natural scale sigma = t**(-1/r), clipped into the support
            nat = ts ** (-1.0 / self.r)
            inside = np.searchsorted(self.b, nat, side="right")
            ok = inside < n
            if ok.any():
                kk = np.where(ok, inside, 0)
                cost = np.where(ok, self.cost(nat, kk, ts), INF)
                offer(cost, nat)
            lo = np.broadcast_to(self.kink[None, :], (n_t, n)).copy()
            hi = np.broadcast_to(self.b[None, :], (n_t, n)).copy()
            stop = GOLDEN_RTOL * self.b[None, :]
            c = hi - _GOLDEN * (hi - lo)
            d = lo + _GOLDEN * (hi - lo)
            fc, fd = self.cost(c, k, T), self.cost(d, k, T)
            for _ in range(_GOLDEN_MAX_ITER):
                if np.all(hi - lo <= stop):
                    break
                left = fc < fd
                # keep [lo, d] when the left probe is lower, else [c, hi]
                hi = np.where(left, d, hi)
                lo = np.where(left, lo, c)
                new_c = hi - _GOLDEN * (hi - lo)
                new_d = lo + _GOLDEN * (hi - lo)
                probe = np.where(left, new_c, new_d)
                fp = self.cost(probe, k, T)
                c, d, fc, fd = (
                    np.where(left, new_c, d),
                    np.where(left, c, new_d),
                    np.where(left, fp, fd),
                    np.where(left, fc, fp),
                )
            mid = 0.5 * (lo + hi)
            offer(self.cost(mid, k, T), mid)
        if self.profile.tail is not None:
            cost, sig = self._tail_candidates(ts)
            for c_, s_ in zip(cost, sig):
                offer(c_, s_)
        return best, arg

    def _tail_only(self, ts):
        # E_sigma = inf for every finite sigma: only f1 = f is admissible here.
        weak = weak_lorentz_norm(self.profile, self.p1)
        return ts * weak if weak < INF else np.full(ts.size, INF), np.full(ts.size, INF)

    def _tail_candidates(self, ts):
        tail = self.profile.tail
        p, p1, r = self.p, self.p1, self.r
        gamma, c, T0 = tail.exponent, tail.coeff, tail.t_start
        ce = (c**p / (gamma * p - 1.0)) ** (1.0 / p)
        w_t = self.w_end
        slope = 1.0 / p1 - gamma
        if slope <= 0.0:
            # weak part saturates at the last piece; sigma -> inf removes the L_p part
            return [ts * w_t], [np.full(ts.size, INF)]
        try:
            s_kink = max(T0, (w_t / c) ** (1.0 / slope))
        except OverflowError:
            s_kink = INF
        if s_kink == INF:
            # the weak part never outgrows the pieces; E_sigma -> 0 along the way
            return [ts * w_t], [np.full(ts.size, INF)]
        costs = [ce * s_kink ** (1.0 / p - gamma) + ts * max(w_t, c * s_kink**slope)]
        sigmas = [np.full(ts.size, s_kink)]
        s_star = (ce * (gamma - 1.0 / p) / (ts * c * slope)) ** (1.0 / r)
        s_star = np.maximum(s_star, s_kink)
        costs.append(ce * s_star ** (1.0 / p - gamma) + ts * np.maximum(w_t, c * s_star**slope))
        sigmas.append(s_star)
        return costs, sigmas


def k_bounds_grid(f, ts, params: NormParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Lower bounds, upper bounds and witness ``sigma`` on a grid of ``t`` values."""
    profile = _as_profile(f)
    ts = np.asarray(ts, dtype=float)
    if np.any(ts <= 0.0):
        raise DomainError("t must be positive")
    if profile.is_zero:
        z = np.zeros(ts.size)
        return z, z.copy(), z.copy()
    with np.errstate(over="ignore", divide="ignore"):
        sig = ts ** (-1.0 / params.r)
    lower = np.zeros(ts.size)
    small, mid = sig == 0.0, (sig > 0.0) & (sig < INF)
    lower[small] = lp_norm(profile, params.p)
    lower[mid] = error_curve(profile, sig[mid], params.p)
    lower *= (1.0 - OUTWARD) / direct_constant(params)
    upper, sig = _Splitting(profile, params).minimise(ts)
    return lower, upper * (1.0 + OUTWARD), sig


def k_upper_truncation(f, t: float, params: NormParams) -> BoundReport:
    """Bracket for ``K(f, t)`` whose upper end is the best truncation splitting."""
    lower, upper, sig = k_bounds_grid(f, [t], params)
    return BoundReport(float(lower[0]), float(upper[0]), f"sigma={float(sig[0])!r}")


def k_upper_dyadic(f, m: int, params: NormParams, rel_tol: float = 1e-10) -> float:
    """``E_{2^m} + 2^{-mr} sum_{k<=m} 2^{kr} 2 E_{2^{k-1}}``, series truncated.

    Terms are added from ``k = m`` downward and the sum stops once a term
    drops below ``rel_tol`` times the running sum, after ``DYADIC_RANGE``
    terms, or when ``2**(k-1)`` would underflow.
    """
    profile = _as_profile(f)
    if profile.is_zero:
        return 0.0
    p, r = params.p, params.r
    head = approx_error(profile, math.ldexp(1.0, m), p)
    total = 0.0
    k = m
    while k > m - DYADIC_RANGE and k - 1 >= -1074:
        err = approx_error(profile, math.ldexp(1.0, k - 1), p)
        if err == INF:
            return INF
        term = 2.0 ** ((k - m) * r) * 2.0 * err
        total += term
        if total > 0.0 and term < rel_tol * total:
            break
        k -= 1
    return head + total


def _default_range(profile: RearrangementProfile, r: float) -> tuple[int, int]:
    first = profile.pieces[0].t_end
    last = profile.end
    j_lo = math.floor(-r * math.log2(last)) - 30
    j_hi = math.ceil(-r * math.log2(first)) + 30
    return max(j_lo, -DYADIC_RANGE), min(j_hi, DYADIC_RANGE)


def interp_norm_bounds(
    f,
    theta: float,
    q: float,
    params: NormParams,
    quad_spec: QuadratureSpec = DEFAULT_QUAD,
    j_range: tuple[int, int] | None = None,
    per_octave: int = 1,
) -> BoundReport:
    """Bracket for the ``(L_p, L_{p1,inf})_{theta,q}`` norm of ``f``.

    Lower end: the ``k_lower`` integral, which after ``t = sigma**(-r)`` is
    ``r**(1/q) * ||f||_{A^{theta r}_{p,q}} / C`` and is evaluated exactly.

    Upper end: ``k_upper`` on the grid ``t = 2**(j/per_octave)``, bounding
    ``K`` on each cell by its value at the right end (``K`` is nondecreasing),
    below the grid by ``(t/t_0) K(t_0)`` (``K(t)/t`` is nonincreasing) and
    above it by ``||f||_p``.
    """
    if not 0.0 < theta < 1.0:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    if not q > 0.0:
        raise DomainError(f"q must be positive, got {q}")
    profile = _as_profile(f)
    if profile.is_zero:
        return BoundReport(0.0, 0.0, "zero function")
    r = params.r
    a_params = NormParams(params.p, q=q, alpha=theta * r)
    a_norm = approx_space_norm(profile, a_params, quad_spec)
    if a_norm == INF:
        return BoundReport(INF, INF, "k_lower integral diverges")
    scale = 1.0 if q == INF else r ** (1.0 / q)
    lower = scale * a_norm / direct_constant(params)

    j_lo, j_hi = j_range if j_range is not None else _default_range(profile, r)
    idx = np.arange(j_lo * per_octave, j_hi * per_octave + 1)
    ts = np.exp2(idx / per_octave)
    _, kup, _ = k_bounds_grid(profile, ts, params)
    norm_p = lp_norm(profile, params.p)
    if q == INF:
        cells = ts[:-1] ** (-theta) * kup[1:]
        upper = max(
            float(cells.max()) if cells.size else 0.0,
            ts[0] ** (-theta) * kup[0],
            ts[-1] ** (-theta) * norm_p,
        )
    else:
        tq = theta * q
        weights = (ts[:-1] ** (-tq) - ts[1:] ** (-tq)) / tq
        parts = list(kup[1:] ** q * weights)
        parts.append(kup[0] ** q * ts[0] ** (-tq) / ((1.0 - theta) * q))
        parts.append(norm_p**q * ts[-1] ** (-tq) / tq)
        upper = math.fsum(parts) ** (1.0 / q)
    return BoundReport(lower, upper, f"t-grid 2^[{j_lo},{j_hi}] x{per_octave}")
