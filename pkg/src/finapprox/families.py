"""Seeded random test families.

The generators are versioned: any change to the sampling scheme must bump
``FAMILY_VERSION`` so that stored reports stay reproducible.
"""

from __future__ import annotations

import numpy as np

from finapprox.profile import PowerTail, ProfilePiece, RearrangementProfile
from finapprox.stepfn import StepFunction

FAMILY_VERSION = 1

PARAM_GRID_P = (0.5, 1.0, 2.0, 4.0)
PARAM_GRID_ALPHA = (0.25, 0.5, 1.0, 2.0)


def _log_uniform(rng: np.random.Generator, lo: float, hi: float, size=None):
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size))


def random_step_function(rng: np.random.Generator, max_atoms: int = 20) -> StepFunction:
    """Atoms with log-uniform values in ``[1e-3, 1e3]``, random signs, gaps and plateaus."""
    n = int(rng.integers(1, max_atoms + 1))
    x = float(rng.uniform(-10.0, 10.0))
    atoms = []
    mags: list[float] = []
    for _ in range(n):
        if rng.random() < 0.7:
            x += float(_log_uniform(rng, 0.01, 10.0))
        length = float(_log_uniform(rng, 0.05, 20.0))
        if mags and rng.random() < 0.25:
            mag = mags[int(rng.integers(len(mags)))]
        else:
            mag = float(_log_uniform(rng, 1e-3, 1e3))
        mags.append(mag)
        sign = 1.0 if rng.random() < 0.5 else -1.0
        atoms.append((x, x + length, sign * mag))
        x += length
    return StepFunction(tuple(atoms))


def random_tail_profile(
    rng: np.random.Generator, gamma_lo: float, gamma_hi: float, exact_prob: float = 0.15
) -> RearrangementProfile:
    """A few descending pieces followed by ``c t^-gamma``.

    ``gamma`` is drawn from ``[gamma_lo, gamma_hi]``; with probability
    ``exact_prob`` it is exactly ``gamma_lo``.
    """
    n = int(rng.integers(1, 6))
    lengths = _log_uniform(rng, 0.05, 5.0, n)
    ends = np.cumsum(lengths)
    values = np.sort(_log_uniform(rng, 1e-3, 1e3, n))[::-1]
    starts = np.concatenate(([0.0], ends[:-1]))
    pieces = tuple(ProfilePiece(float(a), float(b), float(v)) for a, b, v in zip(starts, ends, values))
    gamma = gamma_lo if rng.random() < exact_prob else float(rng.uniform(gamma_lo, gamma_hi))
    T = float(ends[-1])
    height = float(values[-1]) * (1.0 if rng.random() < 0.2 else float(rng.uniform(0.2, 1.0)))
    return RearrangementProfile(pieces, PowerTail(T, height * T**gamma, gamma))


def step_family(seed: int = 0, n: int = 500, max_atoms: int = 20) -> list[StepFunction]:
    rng = np.random.default_rng([FAMILY_VERSION, seed, 0])
    return [random_step_function(rng, max_atoms) for _ in range(n)]


def tail_family(seed: int, p: float, alpha: float, n: int = 100) -> list[RearrangementProfile]:
    """Tail profiles in ``L_{p1,inf}`` (``gamma >= 1/p1``), hence ``gamma p > 1``."""
    rng = np.random.default_rng([FAMILY_VERSION, seed, 1, int(round(p * 1000)), int(round(alpha * 1000))])
    p1 = p / (alpha * p + 1.0)
    return [random_tail_profile(rng, 1.0 / p1, 3.0 / p1) for _ in range(n)]


def step_pairs(seed: int = 0, n: int = 200, max_atoms: int = 20) -> list[tuple[StepFunction, StepFunction]]:
    rng = np.random.default_rng([FAMILY_VERSION, seed, 2])
    return [(random_step_function(rng, max_atoms), random_step_function(rng, max_atoms)) for _ in range(n)]


def unit_atom_function(rng: np.random.Generator, max_atoms: int = 12, max_value: int = 9) -> StepFunction:
    """Unit-width atoms at distinct integer slots with small integer values."""
    n = int(rng.integers(1, max_atoms + 1))
    slots = np.sort(rng.choice(2 * max_atoms, size=n, replace=False))
    vals = rng.integers(1, max_value + 1, size=n) * rng.choice([-1, 1], size=n)
    return StepFunction(tuple((float(s), float(s) + 1.0, float(v)) for s, v in zip(slots, vals)))


def indicator(length: float, start: float = 0.0) -> StepFunction:
    return StepFunction(((start, start + length, 1.0),))
