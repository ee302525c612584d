import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finapprox import (
    BoundReport,
    NormParams,
    PowerTail,
    ProfilePiece,
    RearrangementProfile,
    StepFunction,
    approx_error,
    interp_norm_bounds,
    k_lower,
    k_upper_dyadic,
    k_upper_truncation,
    lorentz_norm,
    lp_norm,
    rearrange,
)
from finapprox.families import step_family
from finapprox.kfunc import chain_constant, direct_constant, k_bounds_grid

from strategies import profiles

INF = math.inf
ZERO = RearrangementProfile(())
UNIT = RearrangementProfile((ProfilePiece(0, 1, 1),))
PARAMS = NormParams(2.0, p1=1.0)
T_GRID = np.exp2(np.arange(-20, 21, dtype=float))


def splitting_cost(prof, sigma, t, params):
    """Cost of f = f 1_[0,sigma) + f 1_[sigma,inf) measured in L_p and t * L_{p1,inf}, from first principles."""
    inv = 1.0 / params.p1
    err = approx_error(prof, sigma, params.p) if sigma < INF else 0.0
    weak = 0.0
    for pc in prof.pieces:
        if pc.t_start >= sigma:
            break
        weak = max(weak, min(pc.t_end, sigma) ** inv * pc.value)
    tail = prof.tail
    if tail is not None and sigma > tail.t_start:
        ends = [tail.t_start, sigma]
        if sigma == INF:
            if inv > tail.exponent:
                return INF
            ends = [tail.t_start] + ([] if inv < tail.exponent else [INF])
        for s in ends:
            try:
                weak = max(weak, tail.coeff if s == INF else tail.coeff * s ** (inv - tail.exponent))
            except OverflowError:
                return INF
    return err + t * weak


class TestConstants:
    @pytest.mark.parametrize("p, p1, expected", [(2, 1, 1.0), (1, 0.5, 1.0), (4, 2, 1.0), (2, 4 / 3, 2 ** 0.5)])
    def test_direct(self, p, p1, expected):
        assert direct_constant(NormParams(p, p1=p1)) == pytest.approx(expected)

    def test_direct_small_p_includes_quasi_triangle_factor(self):
        params = NormParams(0.5, alpha=2.0)
        assert direct_constant(params) == pytest.approx(2.0 * (params.r * 0.5) ** -2.0)

    def test_chain_at_least_one(self):
        assert chain_constant(PARAMS) >= 1.0


class TestLower:
    def test_p1(self, p1_profile):
        assert k_lower(p1_profile, 4 ** -0.5, PARAMS) == pytest.approx(0.5, rel=1e-15)

    def test_zero(self):
        assert k_lower(ZERO, 3.0, PARAMS) == 0.0

    def test_vanishes_beyond_support(self):
        assert k_lower(UNIT, 0.5, PARAMS) == 0.0

    def test_rejects_nonpositive_t(self):
        with pytest.raises(ValueError):
            k_lower(UNIT, 0.0, PARAMS)


class TestUpper:
    def test_s1(self, s1):
        rep = k_upper_truncation(s1, 1.0, PARAMS)
        assert rep.upper == pytest.approx(3.0, rel=1e-15)
        assert rep.witness == "sigma=3.0"

    def test_small_t_goes_to_zero(self, s1):
        ups = [k_upper_truncation(s1, t, PARAMS).upper for t in (1e-2, 1e-4, 1e-8)]
        assert ups[-1] < 1e-7
        assert ups == sorted(ups, reverse=True)

    def test_large_t_plateaus_at_lp_norm(self, s1):
        assert k_upper_truncation(s1, 1e12, PARAMS).upper == pytest.approx(math.sqrt(11), rel=1e-15)

    def test_report_rejects_inverted(self):
        with pytest.raises(ValueError):
            BoundReport(2.0, 1.0)


@settings(max_examples=60, deadline=None)
@given(profiles(), st.sampled_from([(2.0, 0.5), (1.0, 1.0), (0.5, 2.0), (4.0, 0.25)]),
       st.floats(-15, 15))
def test_upper_is_attained_and_beats_grid(prof, pa, logt):
    """The witness splitting reproduces the bound, and no sigma on a fine grid does better."""
    params = NormParams(pa[0], alpha=pa[1])
    t = 2.0**logt
    rep = k_upper_truncation(prof, t, params)
    sigma = float(rep.witness.split("=")[1])
    if rep.upper == INF:
        assert lp_norm(prof, params.p) == INF
    elif sigma == INF:
        # infimum approached as sigma grows without bound
        assert rep.upper == pytest.approx(splitting_cost(prof, 1e300, t, params), rel=1e-9)
    elif sigma == 0.0:
        assert rep.upper == pytest.approx(lp_norm(prof, params.p), rel=1e-12)
    else:
        assert rep.upper == pytest.approx(splitting_cost(prof, sigma, t, params), rel=1e-12)
    grid = np.exp2(np.arange(-40, 40, 1 / 16))
    candidates = list(grid) + [pc.t_end for pc in prof.pieces]
    best = min(splitting_cost(prof, s, t, params) for s in candidates)
    best = min(best, lp_norm(prof, params.p))
    assert rep.upper <= best * (1 + 1e-9)


@settings(max_examples=60, deadline=None)
@given(profiles(), st.sampled_from([(2.0, 0.5), (1.0, 1.0), (0.5, 2.0), (4.0, 0.25)]))
def test_bracket_order_and_shape(prof, pa):
    params = NormParams(pa[0], alpha=pa[1])
    lo, up, _ = k_bounds_grid(prof, T_GRID, params)
    assert np.all(lo <= up)
    assert np.array_equal(np.isinf(lo), np.isinf(up))
    if not np.all(np.isfinite(up)):
        return
    assert np.all(np.diff(up) >= -1e-12 * up[1:])
    ratio = up / T_GRID
    assert np.all(np.diff(ratio) <= 1e-12 * ratio[:-1])
    assert np.all(np.diff(lo) >= -1e-12 * lo[1:])


@settings(max_examples=40, deadline=None)
@given(profiles(), st.floats(1e-3, 1e3))
def test_homogeneity(prof, c):
    lo, up, _ = k_bounds_grid(prof, T_GRID, PARAMS)
    lo2, up2, _ = k_bounds_grid(prof.scaled(c), T_GRID, PARAMS)
    np.testing.assert_allclose(lo2, c * lo, rtol=1e-12)
    np.testing.assert_allclose(up2, c * up, rtol=1e-12)


class TestDyadic:
    def test_indicator_series(self):
        expected = sum(2 ** (k / 2 + 1) * (1 - 2.0 ** (k - 1)) ** 0.5 for k in range(0, -200, -1))
        assert k_upper_dyadic(UNIT, 0, PARAMS) == pytest.approx(expected, rel=1e-9)

    def test_zero(self):
        assert k_upper_dyadic(ZERO, 5, PARAMS) == 0.0

    def test_compact_support_decays(self):
        """Only k <= 0 contribute, so the value is a fixed sum times 2^(-m r)."""
        base = k_upper_dyadic(UNIT, 10, PARAMS)
        assert k_upper_dyadic(UNIT, 90, PARAMS) == pytest.approx(base * 2.0 ** (-80 * PARAMS.r), rel=1e-9)

    @pytest.mark.parametrize("p, alpha", [(0.5, 2.0), (1.0, 1.0), (2.0, 0.5), (4.0, 0.25)])
    def test_chain_consistency(self, p, alpha):
        params = NormParams(p, alpha=alpha)
        C = chain_constant(params)
        for f in step_family(0, 60):
            for m in (-4, 0, 3, 8):
                up = k_upper_truncation(f, 2.0 ** (-m * params.r), params).upper
                assert up <= C * k_upper_dyadic(f, m, params) * (1 + 1e-9)


class TestInterpolation:
    def test_zero(self):
        rep = interp_norm_bounds(ZERO, 0.5, 2.0, PARAMS)
        assert (rep.lower, rep.upper) == (0.0, 0.0)

    @pytest.mark.parametrize("q", [0.5, 1.0, 2.0, INF])
    def test_bracket_is_ordered_and_finite(self, s1, q):
        rep = interp_norm_bounds(s1, 0.5, q, PARAMS)
        assert 0 < rep.lower <= rep.upper < INF

    def test_lower_matches_direct_integral(self, s1):
        """Compare with a trapezoid sum of (t^-theta k_lower)^q dt/t in log t."""
        theta, q = 0.4, 1.5
        rep = interp_norm_bounds(s1, theta, q, PARAMS)
        u = np.linspace(-40, 40, 400001)
        ts = np.exp(u)
        lo, _, _ = k_bounds_grid(s1, ts, PARAMS)
        brute = (np.trapezoid((ts**-theta * lo) ** q, u)) ** (1 / q)
        assert rep.lower == pytest.approx(brute, rel=1e-6)

    def test_refinement_tightens_upper(self, s1):
        coarse = interp_norm_bounds(s1, 0.5, 2.0, PARAMS, per_octave=1)
        fine = interp_norm_bounds(s1, 0.5, 2.0, PARAMS, per_octave=8)
        assert fine.lower == coarse.lower
        assert fine.lower <= fine.upper <= coarse.upper

    def test_truncated_power_tail_matches_lorentz_scale(self):
        """A compact truncation of 1/t: the bracket and the matching Lorentz norm agree within fixed factors."""
        ts = np.arange(1, 200)
        f = StepFunction(tuple((float(k - 1), float(k), 1.0 / k) for k in ts))
        theta, q = 0.5, 2.0
        rep = interp_norm_bounds(f, theta, q, PARAMS)
        p_theta = 1.0 / ((1 - theta) / PARAMS.p + theta / PARAMS.p1)
        ref = lorentz_norm(rearrange(f), p_theta, q)
        assert 0.05 < rep.lower / ref <= rep.upper / ref < 20

    def test_rejects_bad_theta(self, s1):
        with pytest.raises(ValueError):
            interp_norm_bounds(s1, 1.0, 2.0, PARAMS)
