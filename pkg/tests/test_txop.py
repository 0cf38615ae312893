import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from axtcp.aggregation import mpdu_bits
from axtcp.airtime import mu_ppdu_duration
from axtcp.sim_engine import ScenarioConfig, make_rng, resolve
from axtcp.txop import (DlAmpdu, NonTerminatingTxop, StationStream, _apply_feedback,
                        build_dl_ampdu, run_txop, strategy_terminated)

TF = 800
FULL = mpdu_bits(7, 1524)


def ctx_for(**kw):
    kw.setdefault("txop_count", 1)
    return resolve(ScenarioConfig(**kw))


# -- build_dl_ampdu --

def test_exact_division_ten_full_mpdus():
    a = build_dl_ampdu(StationStream(), 7, 10 * FULL + TF, 255, 1524, TF)
    assert a.mpdus == (7,) * 10
    assert a.bits == 10 * FULL + TF
    assert a.retransmit == () and a.new_count == 70


def test_retransmission_only_cycle():
    s = StationStream(base=0, next_new=20, holes=[3, 9, 15])
    a = build_dl_ampdu(s, 7, 100 * FULL, 255, 1524, TF, new_segment_quota=0)
    assert a.mpdus == (3,)
    assert a.retransmit == (3, 9, 15) and a.new_count == 0
    assert a.bits == mpdu_bits(3, 1524) + TF


def test_quota_limited_packing():
    a = build_dl_ampdu(StationStream(), 7, 100 * FULL, 255, 1524, TF, new_segment_quota=10)
    assert a.mpdus == (7, 3)
    assert a.segments() == list(range(10))


def test_holes_first_then_new():
    s = StationStream(base=0, next_new=10, holes=[2, 5])
    a = build_dl_ampdu(s, 7, 2 * FULL + TF, 255, 1524, TF)
    assert a.segments() == [2, 5] + list(range(10, 22))
    assert a.mpdu_segments() == [[2, 5, 10, 11, 12, 13, 14], [15, 16, 17, 18, 19, 20, 21]]


def test_tail_partial_fills_leftover_budget():
    budget = 2 * FULL + mpdu_bits(3, 1524) + TF
    a = build_dl_ampdu(StationStream(), 7, budget, 255, 1524, TF)
    assert a.mpdus == (7, 7, 3)
    assert a.bits == budget


def test_ba_window_cap():
    a = build_dl_ampdu(StationStream(), 1, math.inf, 255, 1524, TF)
    assert len(a.mpdus) == 255


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 42), st.integers(0, 3_000_000), st.integers(0, 40),
       st.one_of(st.none(), st.integers(0, 500)))
def test_build_invariants(x_star, budget, n_holes, quota):
    holes = list(range(0, 2 * n_holes, 2))
    s = StationStream(base=0, next_new=2 * n_holes, holes=holes)
    a = build_dl_ampdu(s, x_star, budget + TF, 255, 272, TF, quota)
    assert a.bits <= budget + TF
    assert len(a.mpdus) <= 255
    assert all(0 < m <= x_star for m in a.mpdus)
    assert sum(a.mpdus) == a.segment_count
    assert list(a.retransmit) == holes[:len(a.retransmit)]
    if quota is not None:
        assert a.new_count <= quota


# -- strategy_terminated --

S = 11960


def test_strategy_examples():
    assert strategy_terminated([S, 0, 0, 0], 1, None, S)
    assert not strategy_terminated([S, S, S, S - 1], 2, None, S)
    assert strategy_terminated([S] * 4, 3, 1.0, S)
    with pytest.raises(ValueError):
        strategy_terminated([S] * 4, 4, None, S)
    with pytest.raises(ValueError):
        strategy_terminated([S] * 4, 3, 0.0, S)


@given(st.lists(st.integers(0, 3 * 500), min_size=1, max_size=32), st.integers(1, 1000))
def test_load_one_equals_strategy_two(pending, s):
    assert strategy_terminated(pending, 3, 1.0, s) == strategy_terminated(pending, 2, None, s)


@given(st.lists(st.integers(0, 2000), min_size=1, max_size=8), st.integers(1, 1000))
def test_strategy_nesting(pending, s):
    # all-stations implies some-station
    if strategy_terminated(pending, 2, None, s):
        assert strategy_terminated(pending, 1, None, s)


# -- feedback --

def test_feedback_failed_new_become_holes():
    s = StationStream()
    a = build_dl_ampdu(s, 7, 3 * FULL + TF, 255, 1524, TF)
    _apply_feedback(s, a, np.array([False, True, False]))
    assert s.holes == list(range(7, 14))
    assert s.next_new == 21
    assert s.pending_acks == 7


def test_feedback_failed_retx_stay_below_other_holes():
    s = StationStream(base=0, next_new=30, holes=[1, 2, 20])
    a = DlAmpdu((1, 2), 30, 0, (1, 1), 0)
    _apply_feedback(s, a, np.array([True, False]))
    assert s.holes == [1, 20]
    s.check()


# -- run_txop --

def test_strategy2_cycles_at_zero_ber():
    ctx = ctx_for()
    per_cycle = build_dl_ampdu(StationStream(), ctx.x_star, ctx.dl_budget_bits, 255,
                               ctx.msdu_len, TF).segment_count
    streams = [StationStream() for _ in range(4)]
    rec = run_txop(streams, ctx, make_rng(1))
    assert rec.dl_cycles == math.ceil(ctx.s / per_cycle)
    assert rec.data_segments_delivered == 4 * ctx.s
    assert rec.data_bits_delivered == 4 * ctx.s * 1460 * 8


def test_strategy3_low_load_one_cycle():
    ctx = ctx_for(strategy=3, load=0.03)
    rec = run_txop([StationStream() for _ in range(4)], ctx, make_rng(1))
    assert rec.dl_cycles == 1


def test_forced_loss_hits_cycle_guard():
    from dataclasses import replace
    ctx = replace(ctx_for(max_cycles=50), dl_error_rate=1.0)
    with pytest.raises(NonTerminatingTxop):
        run_txop([StationStream() for _ in range(4)], ctx, make_rng(1))


def test_duration_equals_trace_sum():
    ctx = ctx_for(snr_db=32.5, strategy=1)
    trace = []
    rec = run_txop([StationStream() for _ in range(4)], ctx, make_rng(3), trace)
    assert rec.duration == sum(p.duration for p in trace)
    names = [p.phase for p in trace]
    assert names[0] == "access" and names[-3:] == ["ul_acks", "sifs", "mba"]
    assert names.count("dl_data") == rec.dl_cycles
    for prev, cur in zip(trace, trace[1:]):
        assert cur.start == prev.start + prev.duration


def test_ul_ack_ppdu_caps():
    ctx = ctx_for(snr_db=32.5)
    trace = []
    run_txop([StationStream() for _ in range(4)], ctx, make_rng(5), trace)
    ul = [p for p in trace if p.phase == "ul_acks"][0]
    assert ul.duration <= ctx.timing.max_ppdu_duration


@pytest.mark.parametrize("snr, strategy, load", [(32.5, 1, None), (33.5, 2, None), (35.1, 3, 0.3),
                                                 (24.7, 3, 0.8)])
def test_conservation_and_monotone_base(snr, strategy, load):
    ctx = ctx_for(snr_db=snr, strategy=strategy, load=load)
    rng = make_rng(11)
    streams = [StationStream() for _ in range(4)]
    delivered = 0
    for i in range(15):
        before = [s.base for s in streams]
        rec = run_txop(streams, ctx, rng, None, i)
        delivered += rec.data_segments_delivered
        for s, b in zip(streams, before):
            s.check()
            assert s.base >= b
            assert s.pending_acks <= s.next_new - s.base
    # every generated segment is acked, a hole, or MAC-acked and waiting
    generated = sum(s.next_new for s in streams)
    waiting = sum(s.next_new - s.base - len(s.holes) for s in streams)
    holes = sum(len(s.holes) for s in streams)
    assert delivered + holes + waiting == generated
    assert delivered == sum(s.base for s in streams)


def test_no_retransmission_at_zero_ber():
    ctx = ctx_for(strategy=3, load=0.5)
    streams = [StationStream() for _ in range(4)]
    rng = make_rng(2)
    sent = [set() for _ in range(4)]
    orig = build_dl_ampdu

    import axtcp.txop as txop_mod

    def spy(stream, *a, **k):
        out = orig(stream, *a, **k)
        ids = [id(s) for s in streams]
        if id(stream) not in ids:   # capacity probe
            return out
        i = ids.index(id(stream))
        segs = set(out.segments())
        assert not segs & sent[i]
        sent[i] |= segs
        return out

    txop_mod.build_dl_ampdu = spy
    try:
        for i in range(5):
            run_txop(streams, ctx, rng, None, i)
    finally:
        txop_mod.build_dl_ampdu = orig
    assert all(not s.holes for s in streams)


def test_load_one_trace_matches_strategy_two():
    a, b = [], []
    c2 = ctx_for(snr_db=33.5)
    c3 = ctx_for(snr_db=33.5, strategy=3, load=1.0)
    sa, sb = [StationStream() for _ in range(4)], [StationStream() for _ in range(4)]
    ra, rb = make_rng(9), make_rng(9)
    for i in range(5):
        run_txop(sa, c2, ra, a, i)
        run_txop(sb, c3, rb, b, i)
    assert a == b


def test_dl_ppdu_within_cap():
    ctx = ctx_for(stations=32, segment_bytes=208, assume_same_ber=True)
    trace = []
    run_txop([StationStream() for _ in range(32)], ctx, make_rng(0), trace)
    cap = ctx.timing.max_ppdu_duration
    assert all(p.duration <= cap for p in trace if p.phase in ("dl_data", "ul_acks"))
    assert mu_ppdu_duration(0, ctx.dl.dl_rate, ctx.dl.dl_preamble, ctx.timing.dl_symbol) < cap
