import math

import pytest
from hypothesis import given, strategies as st

from axtcp.airtime import TimingConstants, legacy_frame_duration, max_payload_bits, mu_ppdu_duration


@pytest.mark.parametrize("bits, rate, pre, sym, expected", [
    (0, 1201.0, 68.8, 13.6, 68.8),
    (1, 1201.0, 68.8, 13.6, 82.4),
    (100000, 1134.2, 64.8, 14.4, 165.6),   # 7 symbols of 16332.48 bits
])
def test_mu_ppdu_duration(bits, rate, pre, sym, expected):
    assert mu_ppdu_duration(bits, rate, pre, sym) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("bits, rate, expected", [
    (0, 48.0, 20.0),
    (800, 48.0, 40.0),     # ceil(800 / 192) = 5 symbols
    (800, 6.0, 156.0),     # ceil(800 / 24) = 34 symbols
])
def test_legacy_frame_duration(bits, rate, expected):
    assert legacy_frame_duration(bits, rate, 20.0) == pytest.approx(expected)


def test_exact_symbol_boundary_not_rounded_up():
    # 25 symbols of 16332.48 bits is an integer bit count; float noise must not add a symbol
    assert mu_ppdu_duration(408312, 1134.2, 64.8, 14.4) == pytest.approx(64.8 + 25 * 14.4)


def test_timing_defaults_consistent():
    t = TimingConstants()
    assert t.dl_symbol == pytest.approx(t.symbol_base + 0.8)
    assert t.ul_symbol == pytest.approx(t.symbol_base + 1.6)
    assert t.avg_backoff == pytest.approx((t.cw_min - 1) / 2 * t.slot_time)
    assert t.channel_access == pytest.approx(110.5)


def test_max_payload_fits():
    bits = max_payload_bits(1201.0, 68.8, 13.6, 5484.0)
    assert mu_ppdu_duration(bits, 1201.0, 68.8, 13.6) <= 5484.0
    assert mu_ppdu_duration(bits + 1, 1201.0, 68.8, 13.6) > 5484.0
    assert max_payload_bits(1.0, 0, 1.0, math.inf) == math.inf


rates = st.sampled_from([6.0, 8.6, 48.0, 143.4, 720.6, 1134.2, 1201.0])
syms = st.sampled_from([4.0, 13.6, 14.4])


@given(st.integers(0, 10**7), st.integers(0, 10**7), rates, syms)
def test_monotone_in_bits(a, b, rate, sym):
    lo, hi = sorted((a, b))
    assert mu_ppdu_duration(lo, rate, 20.0, sym) <= mu_ppdu_duration(hi, rate, 20.0, sym)


@given(st.integers(0, 10**7), rates, rates, syms)
def test_non_increasing_in_rate(bits, r1, r2, sym):
    lo, hi = sorted((r1, r2))
    assert mu_ppdu_duration(bits, hi, 20.0, sym) <= mu_ppdu_duration(bits, lo, 20.0, sym)


@given(st.integers(0, 10**7), rates, syms)
def test_payload_time_is_whole_symbols(bits, rate, sym):
    n = (mu_ppdu_duration(bits, rate, 20.0, sym) - 20.0) / sym
    assert n == pytest.approx(round(n), abs=1e-6)
