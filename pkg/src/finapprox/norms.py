"""L_p, Lorentz and approximation-space quasinorms of a rearrangement profile.

Everything except the ``q < inf`` approximation-space norm is closed form.
That one integrates ``sigma**(alpha q - 1) * G(sigma)**(q/p)`` where
``G(sigma) = int_sigma^inf f*^p`` is affine on every constant piece; each
piece is handed to QUADPACK's algebraic-weight rule (QAWS) so that the
endpoint singularities at ``sigma = 0`` and at the end of the support are
integrated exactly. Beyond the last piece ``G`` is a pure power and the
remaining integral is evaluated in closed form.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from finapprox.errors import DomainError
from finapprox.profile import INF, NormParams, RearrangementProfile, p_moment, pow_diff


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    max_depth: int = 60

    def __post_init__(self) -> None:
        if not self.rel_tol > 0.0:
            raise DomainError("rel_tol must be positive")
        if self.max_depth < 1:
            raise DomainError("max_depth must be >= 1")


DEFAULT_QUAD = QuadratureSpec()


def _check_exp(name: str, x: float, allow_inf: bool = False) -> None:
    if not x > 0.0 or (x == INF and not allow_inf):
        raise DomainError(f"{name} must lie in (0, {'inf]' if allow_inf else 'inf)'}, got {x}")


def _homogeneous(fn):
    """Evaluate on ``f / f*(0+)`` and scale back.

    Dividing by the top value makes ``norm(2**k f) == 2**k norm(f)`` hold
    bit for bit, so ratios of norms do not move under power-of-two scaling.
    """

    @functools.wraps(fn)
    def wrapper(profile: RearrangementProfile, *args, **kwargs):
        if profile.is_zero:
            return fn(profile, *args, **kwargs)
        top = profile.pieces[0].value
        if top == 1.0:
            return fn(profile, *args, **kwargs)
        return top * fn(profile.scaled(1.0 / top), *args, **kwargs)

    return wrapper


@_homogeneous
def lp_norm(profile: RearrangementProfile, p: float) -> float:
    _check_exp("p", p)
    if profile.is_zero:
        return 0.0
    return p_moment(profile, 0.0, INF, p) ** (1.0 / p)


@_homogeneous
def weak_lorentz_norm(profile: RearrangementProfile, p: float) -> float:
    """``sup_t t**(1/p) f*(t)``, attained at piece right ends or the tail start."""
    _check_exp("p", p)
    best = 0.0
    for pc in profile.pieces:
        best = max(best, pc.t_end ** (1.0 / p) * pc.value)
    tail = profile.tail
    if tail is not None:
        slope = 1.0 / p - tail.exponent
        if slope > 0.0:
            return INF
        if slope == 0.0:
            best = max(best, tail.coeff)
        else:
            best = max(best, tail.coeff * tail.t_start**slope)
    return best


@_homogeneous
def lorentz_norm(profile: RearrangementProfile, p: float, q: float) -> float:
    """``(int_0^inf (t**(1/p) f*(t))**q dt/t)**(1/q)``; ``q = inf`` gives the weak norm."""
    _check_exp("p", p)
    _check_exp("q", q, allow_inf=True)
    if q == INF:
        return weak_lorentz_norm(profile, p)
    s = q / p
    total = 0.0
    for pc in profile.pieces:
        if pc.value > 0.0:
            total += pc.value**q * pow_diff(pc.t_end, pc.t_start, s) / s
    tail = profile.tail
    if tail is not None:
        e = s - tail.exponent * q
        if e >= 0.0:
            return INF
        total += tail.coeff**q * tail.t_start**e / (-e)
    return total ** (1.0 / q)


def _segments(profile: RearrangementProfile, p: float):
    """Yield ``(a, b, w, G_b)`` with ``G(sigma) = G_b + w (b - sigma)`` on ``[a, b)``."""
    g = 0.0
    if profile.tail is not None:
        g = profile.tail.moment(profile.end, INF, p)
    out = []
    for pc in reversed(profile.pieces):
        w = pc.value**p if pc.value > 0.0 else 0.0
        out.append((pc.t_start, pc.t_end, w, g))
        g += w * pc.length
    out.reverse()
    return out


def _segment_integral(a, b, w, g_b, s, beta, quad_spec):
    """``int_a^b sigma**s (g_b + w (b - sigma))**beta dsigma`` for ``s > -1``."""
    if w == 0.0:
        if g_b == 0.0:
            return 0.0
        return g_b**beta * pow_diff(b, a, s + 1.0) / (s + 1.0)
    left = s if a == 0.0 else 0.0
    right = beta if g_b == 0.0 else 0.0
    if g_b == 0.0:
        scale = w**beta
        if a == 0.0:
            def h(x):
                return scale
        else:
            def h(x):
                return scale * x**s
    else:
        if a == 0.0:
            def h(x):
                return (g_b + w * (b - x)) ** beta
        else:
            def h(x):
                return x**s * (g_b + w * (b - x)) ** beta
    val, _ = quad(
        h, a, b, weight="alg", wvar=(left, right),
        epsabs=0.0, epsrel=quad_spec.rel_tol, limit=quad_spec.max_depth,
    )
    return val


def _sup_power_error(profile: RearrangementProfile, alpha: float, p: float) -> float:
    """``sup_sigma sigma**alpha E_sigma(f)_p`` from segment-wise critical points.

    On a piece, ``sigma**(alpha p) * G(sigma) = sigma**(alpha p) (K - w sigma)``
    with ``K = G_b + w b`` peaks at ``sigma = alpha p K / ((alpha p + 1) w)``.
    """
    ap = alpha * p
    best = 0.0
    for a, b, w, g_b in _segments(profile, p):
        if g_b == INF:
            return INF
        K = g_b + w * b
        cands = [b]
        if w > 0.0:
            crit = ap * K / ((ap + 1.0) * w)
            if a < crit < b:
                cands.append(crit)
        for x in cands:
            best = max(best, x**ap * (g_b + w * (b - x)))
    tail = profile.tail
    if tail is not None:
        if tail.exponent * p <= 1.0:
            return INF
        e = ap + 1.0 - tail.exponent * p
        if e > 0.0:
            return INF
        T = tail.t_start
        best = max(best, T**ap * tail.moment(T, INF, p))
    return best ** (1.0 / p)


@_homogeneous
def approx_space_norm(
    profile: RearrangementProfile,
    params: NormParams,
    quad_spec: QuadratureSpec = DEFAULT_QUAD,
) -> float:
    """Quasinorm of the approximation space with exponents ``params``.

    ``(int_0^inf (sigma**alpha E_sigma(f)_p)**q dsigma/sigma)**(1/q)``,
    or the supremum of ``sigma**alpha E_sigma(f)_p`` when ``q = inf``.
    """
    p, q, alpha = params.p, params.q, params.alpha
    if profile.is_zero:
        return 0.0
    if q == INF:
        return _sup_power_error(profile, alpha, p)
    segs = _segments(profile, p)
    if segs and segs[0][3] + segs[0][2] * segs[0][1] == INF:
        return INF
    s, beta = alpha * q - 1.0, q / p
    parts = [_segment_integral(a, b, w, g_b, s, beta, quad_spec) for a, b, w, g_b in segs]
    tail = profile.tail
    if tail is not None:
        if tail.exponent * p <= 1.0:
            return INF
        e = alpha * q + beta - tail.exponent * q
        if e >= 0.0:
            return INF
        lead = (tail.coeff**p / (tail.exponent * p - 1.0)) ** beta
        parts.append(lead * tail.t_start**e / (-e))
    return math.fsum(parts) ** (1.0 / q)


def error_curve(profile: RearrangementProfile, sigmas, p: float):
    """``E_sigma(f)_p`` at every ``sigma`` of a positive array."""
    sigmas = np.asarray(sigmas, dtype=float)
    if np.any(sigmas <= 0.0):
        raise DomainError("sigma must be positive")
    out = np.zeros(sigmas.shape)
    segs = _segments(profile, p)
    for a, b, w, g_b in segs:
        mask = (sigmas >= a) & (sigmas < b)
        out[mask] = g_b + w * (b - sigmas[mask])
    tail = profile.tail
    if tail is not None:
        mask = sigmas >= profile.end
        out[mask] = [tail.moment(s, INF, p) for s in sigmas[mask]]
    return out ** (1.0 / p)
