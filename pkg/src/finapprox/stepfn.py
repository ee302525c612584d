"""Step functions on the real line and their best finite-support approximants.

All intervals are half-open ``[a, b)``. Values are stored with their sign;
rearrangement and the choice of the best support only look at ``|value|``.
"""

from __future__ import annotations

import bisect
import math
from collections import defaultdict
from dataclasses import dataclass
from itertools import accumulate
from typing import Any, Iterable, Sequence

from finapprox.errors import DomainError
from finapprox.profile import ProfilePiece, RearrangementProfile, p_moment


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint, non-touching half-open intervals, sorted."""

    intervals: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        ivs = tuple((float(a), float(b)) for a, b in self.intervals)
        for a, b in ivs:
            if not (-math.inf < a < b < math.inf):
                raise DomainError(f"invalid interval [{a}, {b})")
        for (_, b0), (a1, _) in zip(ivs, ivs[1:]):
            if not b0 < a1:
                raise DomainError("intervals must be sorted, disjoint and non-adjacent")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def from_intervals(cls, intervals: Iterable[tuple[float, float]]) -> IntervalSet:
        """Normalise an arbitrary collection: sort, drop empties, merge overlaps."""
        merged: list[list[float]] = []
        for a, b in sorted((a, b) for a, b in intervals if b > a):
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return cls(tuple((a, b) for a, b in merged))

    @property
    def measure(self) -> float:
        return math.fsum(b - a for a, b in self.intervals)

    @property
    def hull(self) -> tuple[float, float] | None:
        if not self.intervals:
            return None
        return self.intervals[0][0], self.intervals[-1][1]

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __contains__(self, x: float) -> bool:
        k = bisect.bisect_right([a for a, _ in self.intervals], x) - 1
        return k >= 0 and x < self.intervals[k][1]

    def union(self, other: IntervalSet) -> IntervalSet:
        return IntervalSet.from_intervals(self.intervals + other.intervals)

    def intersection(self, other: IntervalSet) -> IntervalSet:
        out = []
        i = j = 0
        xs, ys = self.intervals, other.intervals
        while i < len(xs) and j < len(ys):
            lo, hi = max(xs[i][0], ys[j][0]), min(xs[i][1], ys[j][1])
            if hi > lo:
                out.append((lo, hi))
            if xs[i][1] < ys[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet.from_intervals(out)

    def issubset(self, other: IntervalSet) -> bool:
        for a, b in self.intervals:
            if not any(c <= a and b <= d for c, d in other.intervals):
                return False
        return True


def _subtract(a: float, b: float, cut: IntervalSet) -> list[tuple[float, float]]:
    """Pieces of ``[a, b)`` not covered by ``cut``."""
    out = []
    cursor = a
    for c, d in cut.intervals:
        if d <= cursor:
            continue
        if c >= b:
            break
        if c > cursor:
            out.append((cursor, c))
        cursor = max(cursor, d)
        if cursor >= b:
            break
    if cursor < b:
        out.append((cursor, b))
    return out


@dataclass(frozen=True)
class StepFunction:
    """Finitely many atoms ``(a, b, v)``: the value ``v != 0`` on ``[a, b)``, zero elsewhere."""

    atoms: tuple[tuple[float, float, float], ...] = ()

    def __post_init__(self) -> None:
        atoms = tuple(sorted((float(a), float(b), float(v)) for a, b, v in self.atoms))
        for a, b, v in atoms:
            if not (-math.inf < a < b < math.inf):
                raise DomainError(f"invalid atom interval [{a}, {b})")
            if v == 0.0 or not math.isfinite(v):
                raise DomainError(f"atom values must be finite and nonzero, got {v}")
        for (_, b0, _), (a1, _, _) in zip(atoms, atoms[1:]):
            if a1 < b0:
                raise DomainError("atom intervals overlap")
        object.__setattr__(self, "atoms", atoms)

    @property
    def support(self) -> IntervalSet:
        return IntervalSet.from_intervals((a, b) for a, b, _ in self.atoms)

    @property
    def support_measure(self) -> float:
        return math.fsum(b - a for a, b, _ in self.atoms)

    def __call__(self, x: float) -> float:
        k = bisect.bisect_right([a for a, _, _ in self.atoms], x) - 1
        if k >= 0 and x < self.atoms[k][1]:
            return self.atoms[k][2]
        return 0.0

    def distribution(self, lam: float) -> float:
        """Measure of ``{x : |f(x)| > lam}`` straight from the atoms."""
        return math.fsum(b - a for a, b, v in self.atoms if abs(v) > lam)

    def restrict(self, where: IntervalSet) -> StepFunction:
        """``f * 1_where``."""
        out = []
        for a, b, v in self.atoms:
            piece = IntervalSet(((a, b),)).intersection(where)
            out.extend((c, d, v) for c, d in piece)
        return StepFunction(tuple(out))

    def remove(self, where: IntervalSet) -> StepFunction:
        """``f * 1_{complement of where}``."""
        out = []
        for a, b, v in self.atoms:
            out.extend((c, d, v) for c, d in _subtract(a, b, where))
        return StepFunction(tuple(out))

    def scaled(self, c: float) -> StepFunction:
        if c == 0.0:
            return StepFunction()
        return StepFunction(tuple((a, b, c * v) for a, b, v in self.atoms))

    def __add__(self, other: StepFunction) -> StepFunction:
        cuts = sorted({x for a, b, _ in self.atoms + other.atoms for x in (a, b)})
        out = []
        for lo, hi in zip(cuts, cuts[1:]):
            mid = lo + 0.5 * (hi - lo)
            v = self(mid) + other(mid)
            if v != 0.0:
                if out and out[-1][1] == lo and out[-1][2] == v:
                    out[-1] = (out[-1][0], hi, v)
                else:
                    out.append((lo, hi, v))
        return StepFunction(tuple(out))

    def to_dict(self) -> dict[str, Any]:
        return {"atoms": [{"a": a, "b": b, "v": v} for a, b, v in self.atoms]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> StepFunction:
        return cls(tuple((float(d["a"]), float(d["b"]), float(d["v"])) for d in data["atoms"]))


@dataclass(frozen=True)
class SampledFunction:
    """Cell ``i`` covers ``[origin + i*h, origin + (i+1)*h)`` and carries ``samples[i]``."""

    origin: float
    cell_width: float
    samples: Sequence[float]

    def __post_init__(self) -> None:
        if not self.cell_width > 0.0:
            raise DomainError(f"cell width must be positive, got {self.cell_width}")
        if not all(math.isfinite(s) for s in self.samples):
            raise DomainError("samples must be finite")


def rearrange(f: StepFunction) -> RearrangementProfile:
    """Decreasing rearrangement of a step function; equal ``|values|`` merge into one piece."""
    lengths: dict[float, list[float]] = defaultdict(list)
    for a, b, v in f.atoms:
        lengths[abs(v)].append(b - a)
    levels = sorted(lengths, reverse=True)
    ends = list(accumulate(math.fsum(lengths[v]) for v in levels))
    starts = [0.0] + ends[:-1]
    return RearrangementProfile(
        tuple(ProfilePiece(s, e, v) for s, e, v in zip(starts, ends, levels))
    )


def best_support_set(f: StepFunction, sigma: float) -> IntervalSet:
    """A set of measure ``sigma`` carrying the largest possible ``int |f|^p``.

    It contains ``{|f| > f*(sigma)}``; the rest is taken from the leftmost part
    of the plateau ``{|f| = f*(sigma)}``. When ``sigma`` exceeds the support
    measure the whole support is kept and padded by an interval starting at
    the right end of the support's hull. The sets are nested in ``sigma``.
    """
    if not sigma > 0.0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    prof = rearrange(f)
    if sigma >= prof.end:
        support = f.support
        extra = sigma - prof.end
        if extra <= 0.0:
            return support
        right = support.hull[1] if support.hull else 0.0
        return support.union(IntervalSet(((right, right + extra),)))
    k = bisect.bisect_right(prof._ends, sigma)
    level = prof.pieces[k].value
    remaining = sigma - prof.pieces[k].t_start
    chosen = [(a, b) for a, b, v in f.atoms if abs(v) > level]
    if remaining > 0.0:
        for a, b, v in f.atoms:
            if abs(v) != level:
                continue
            take = min(b - a, remaining)
            chosen.append((a, a + take) if take < b - a else (a, b))
            remaining -= take
            if remaining <= 0.0:
                break
    return IntervalSet.from_intervals(chosen)


def best_approx(f: StepFunction, sigma: float, p: float) -> tuple[StepFunction, float]:
    """Best approximant ``f * 1_{A_sigma}`` and its ``L_p`` error."""
    if not p > 0.0:
        raise DomainError(f"p must be positive, got {p}")
    support = best_support_set(f, sigma)
    residual = f.remove(support)
    if not residual.atoms:
        return f.restrict(support), 0.0
    err = p_moment(rearrange(residual), 0.0, math.inf, p) ** (1.0 / p)
    return f.restrict(support), err


def ingest_samples(s: SampledFunction, threshold: float = 0.0) -> StepFunction:
    """Turn cells with ``|sample| > threshold`` into atoms, merging equal neighbours."""
    if not threshold >= 0.0:
        raise DomainError(f"threshold must be >= 0, got {threshold}")
    atoms: list[tuple[float, float, float]] = []
    prev = None
    for i, v in enumerate(s.samples):
        if abs(v) <= threshold:
            prev = None
            continue
        a, b = s.origin + i * s.cell_width, s.origin + (i + 1) * s.cell_width
        if prev == i - 1 and atoms[-1][2] == v:
            atoms[-1] = (atoms[-1][0], b, v)
        else:
            atoms.append((a, b, float(v)))
        prev = i
    return StepFunction(tuple(atoms))
