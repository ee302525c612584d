"""Decreasing rearrangements in canonical form.

A :class:`RearrangementProfile` stores a nonincreasing, right-continuous
function on ``(0, inf)`` as finitely many constant pieces tiling ``[0, T)``,
optionally followed by a power tail ``c * t**(-gamma)`` on ``[T, inf)``.
Every quantity the rest of the package needs (distribution function,
``p``-th moments over an interval, best approximation error) has a closed
form on this representation.

Divergent integrals are reported as ``math.inf``, never raised.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Any

from finapprox.errors import DomainError

INF = math.inf

# Slack allowed on the piece/tail junction when profiles come from user JSON.
_JUNCTION_RTOL = 1e-12


def pow_diff(b: float, a: float, s: float) -> float:
    """Return ``b**s - a**s`` for ``0 <= a <= b`` without cancellation."""
    if s == 0.0 or a == b:
        return 0.0
    if a == 0.0:
        return b**s if s > 0 else INF
    return a**s * math.expm1(s * math.log1p((b - a) / a))


@dataclass(frozen=True)
class ProfilePiece:
    t_start: float
    t_end: float
    value: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.t_start < self.t_end < INF):
            raise DomainError(f"invalid piece range [{self.t_start}, {self.t_end})")
        if not (0.0 <= self.value < INF):
            raise DomainError(f"piece value must be finite and >= 0, got {self.value}")

    @property
    def length(self) -> float:
        return self.t_end - self.t_start


@dataclass(frozen=True)
class PowerTail:
    """``f*(t) = coeff * t**(-exponent)`` for ``t >= t_start``."""

    t_start: float
    coeff: float
    exponent: float

    def __post_init__(self) -> None:
        if not (0.0 < self.t_start < INF):
            raise DomainError(f"tail must start at a finite T > 0, got {self.t_start}")
        if not (0.0 < self.coeff < INF) or not (0.0 < self.exponent < INF):
            raise DomainError("tail coefficient and exponent must be positive and finite")
        h = self.height
        if not (0.0 < h < INF):
            raise DomainError("tail value at its start point must be finite and positive")

    @property
    def height(self) -> float:
        return self.coeff * self.t_start ** (-self.exponent)

    def __call__(self, t: float) -> float:
        return self.coeff * t ** (-self.exponent)

    def moment(self, lo: float, hi: float, p: float) -> float:
        """Closed form of ``int_lo^hi (c t^-gamma)^p dt`` with ``T <= lo < hi <= inf``."""
        if hi <= lo:
            return 0.0
        cp = self.coeff**p
        e = 1.0 - self.exponent * p
        if hi == INF:
            if e >= 0.0:
                return INF
            return cp * lo**e / (-e)
        if e == 0.0:
            return cp * math.log1p((hi - lo) / lo)
        return cp * pow_diff(hi, lo, e) / e


@dataclass(frozen=True)
class RearrangementProfile:
    """Nonincreasing step profile with an optional power tail.

    A tail-only profile (no pieces) is read as the tail capped by its
    starting value on ``[0, T)``; the cap is materialised as a piece.
    """

    pieces: tuple[ProfilePiece, ...] = ()
    tail: PowerTail | None = None
    _ends: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        pieces = tuple(self.pieces)
        if not pieces and self.tail is not None:
            pieces = (ProfilePiece(0.0, self.tail.t_start, self.tail.height),)
        if pieces and pieces[0].t_start != 0.0:
            raise DomainError("the first piece must start at t = 0")
        for left, right in zip(pieces, pieces[1:]):
            if left.t_end != right.t_start:
                raise DomainError(
                    f"pieces are not contiguous at t = {left.t_end} / {right.t_start}"
                )
            if right.value > left.value:
                raise DomainError("piece values must be nonincreasing")
        if self.tail is not None:
            if pieces[-1].t_end != self.tail.t_start:
                raise DomainError("tail must start where the last piece ends")
            if self.tail.height > pieces[-1].value * (1.0 + _JUNCTION_RTOL):
                raise DomainError("tail starts above the last piece value")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "_ends", tuple(pc.t_end for pc in pieces))

    @property
    def end(self) -> float:
        """Right end of the last constant piece (0 for the empty profile)."""
        return self._ends[-1] if self._ends else 0.0

    @property
    def support_measure(self) -> float:
        """Measure of ``{t : f*(t) > 0}``."""
        if self.tail is not None:
            return INF
        return distribution(self, 0.0)

    @property
    def is_zero(self) -> bool:
        return self.tail is None and all(pc.value == 0.0 for pc in self.pieces)

    def scaled(self, c: float) -> RearrangementProfile:
        """Profile of ``c * f`` for ``c > 0``."""
        if not c > 0:
            raise DomainError("scale factor must be positive")
        pieces = tuple(ProfilePiece(pc.t_start, pc.t_end, c * pc.value) for pc in self.pieces)
        tail = None
        if self.tail is not None:
            tail = PowerTail(self.tail.t_start, c * self.tail.coeff, self.tail.exponent)
        return RearrangementProfile(pieces, tail)

    def to_dict(self) -> dict[str, Any]:
        tail = None
        if self.tail is not None:
            tail = {"T": self.tail.t_start, "c": self.tail.coeff, "gamma": self.tail.exponent}
        return {
            "pieces": [{"t0": pc.t_start, "t1": pc.t_end, "v": pc.value} for pc in self.pieces],
            "tail": tail,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RearrangementProfile:
        pieces = tuple(
            ProfilePiece(float(d["t0"]), float(d["t1"]), float(d["v"]))
            for d in data.get("pieces", [])
        )
        tail = None
        if data.get("tail") is not None:
            t = data["tail"]
            tail = PowerTail(float(t["T"]), float(t["c"]), float(t["gamma"]))
        return cls(pieces, tail)


@dataclass(frozen=True)
class NormParams:
    """Exponents ``(p, q, alpha)`` with ``p1 = p / (alpha p + 1)``.

    Pass exactly one of ``alpha`` and ``p1``. When ``p1`` is given, ``alpha``
    is set to ``1/p1 - 1/p`` so that :attr:`r` and ``alpha`` coincide in
    both cases.
    """

    p: float
    q: float = INF
    alpha: float | None = None
    p1: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 < self.p < INF):
            raise DomainError(f"p must lie in (0, inf), got {self.p}")
        if not self.q > 0.0:
            raise DomainError(f"q must lie in (0, inf], got {self.q}")
        if (self.alpha is None) == (self.p1 is None):
            raise DomainError("give exactly one of alpha and p1")
        if self.alpha is not None:
            if not (0.0 < self.alpha < INF):
                raise DomainError(f"alpha must be positive, got {self.alpha}")
            object.__setattr__(self, "p1", self.p / (self.alpha * self.p + 1.0))
        else:
            if not (0.0 < self.p1 < self.p):
                raise DomainError(f"p1 must lie in (0, p), got {self.p1}")
            object.__setattr__(self, "alpha", 1.0 / self.p1 - 1.0 / self.p)

    @property
    def r(self) -> float:
        return 1.0 / self.p1 - 1.0 / self.p


def _check_t(t: float) -> None:
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t}")


def evaluate(profile: RearrangementProfile, t: float) -> float:
    """Value of the rearrangement at ``t > 0``."""
    _check_t(t)
    k = bisect.bisect_right(profile._ends, t)
    if k < len(profile.pieces):
        return profile.pieces[k].value
    if profile.tail is not None:
        return profile.tail(t)
    return 0.0


def distribution(profile: RearrangementProfile, lam: float) -> float:
    """Measure of ``{t : f*(t) > lam}``; ``inf`` at ``lam = 0`` with a tail."""
    if not lam >= 0.0:
        raise DomainError(f"lambda must be >= 0, got {lam}")
    tail = profile.tail
    if tail is not None and lam < tail.height:
        if lam == 0.0:
            return INF
        return (tail.coeff / lam) ** (1.0 / tail.exponent)
    # f* is nonincreasing, so the level set is an initial segment [0, t_k).
    measure = 0.0
    for pc in profile.pieces:
        if pc.value > lam:
            measure = pc.t_end
        else:
            break
    return measure


def p_moment(profile: RearrangementProfile, a: float, b: float, p: float) -> float:
    """Closed form of ``int_a^b f*(t)**p dt``; ``inf`` on divergence."""
    if not (0.0 <= a < b) or not p > 0.0:
        raise DomainError(f"need 0 <= a < b and p > 0, got a={a}, b={b}, p={p}")
    total = 0.0
    for pc in profile.pieces:
        lo, hi = max(a, pc.t_start), min(b, pc.t_end)
        if hi > lo and pc.value > 0.0:
            total += pc.value**p * (hi - lo)
    if profile.tail is not None and b > profile.end:
        total += profile.tail.moment(max(a, profile.end), b, p)
    return total


def approx_error(profile: RearrangementProfile, sigma: float, p: float) -> float:
    """Best ``L_p`` error from functions with support measure ``<= sigma``.

    Computed as ``(int_sigma^inf f*(t)**p dt) ** (1/p)``.
    """
    if not sigma > 0.0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if not p > 0.0:
        raise DomainError(f"p must be positive, got {p}")
    if sigma >= profile.end and profile.tail is None:
        return 0.0
    return p_moment(profile, sigma, INF, p) ** (1.0 / p)
