"""One TXOP of the HE DL-MU TCP operation mode.

A TXOP is: backoff + AIFS, one or more DL data cycles (DL MU PPDU, SIFS, UL MU
BAck, SIFS), a broadcast trigger frame, the UL MU ack PPDU and a final
multi-station block ack.  Per-station TCP sequence state persists across
TXOPs in :class:`StationStream`.

Segments are numbered from 0 per station.  Between cycles every segment in
``[base, next_new)`` is either MAC-acknowledged or a hole awaiting
retransmission, because block acks are never lost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .aggregation import (DEFAULT_ARITHMETIC, FrameArithmetic, mpdu_bits, mpdu_success_probability,
                          plan_ack_ampdu)
from .airtime import TimingConstants, legacy_frame_duration, max_payload_bits, mu_ppdu_duration
from .phy_tables import McsEntry

STRATEGIES = (1, 2, 3)
FILL_POLICIES = ("capacity", "quota")


class ConfigurationError(ValueError):
    """The scenario cannot form a TXOP at all."""


class NonTerminatingTxop(RuntimeError):
    """The strategy never reached its ack target within the cycle guard."""


@dataclass(frozen=True)
class ControlFrameSizes:
    tf_bytes: int = 100
    back_bytes: int = 64
    mba_per_station_bytes: int = 40
    mba_base_bytes: int = 24

    def __post_init__(self):
        for name, v in vars(self).items():
            if v <= 0:
                raise ValueError(f"{name} must be > 0")


@dataclass
class StationStream:
    base: int = 0
    next_new: int = 0
    holes: list[int] = field(default_factory=list)  # sorted, all in [base, next_new)

    @property
    def pending_acks(self) -> int:
        return (self.holes[0] if self.holes else self.next_new) - self.base

    @property
    def mac_acked(self) -> set[int]:
        return set(range(self.base, self.next_new)) - set(self.holes)

    def check(self) -> None:
        assert self.base <= self.next_new
        assert self.holes == sorted(set(self.holes))
        assert all(self.base <= h < self.next_new for h in self.holes)


@dataclass(frozen=True)
class TxopRecord:
    duration: float               # us, access through end of M-BA
    dl_cycles: int
    data_segments_delivered: int
    data_bits_delivered: int
    acks_transmitted: int


@dataclass(frozen=True)
class TracePhase:
    txop: int
    phase: str
    start: float
    duration: float
    bits: int


@dataclass(frozen=True)
class DlAmpdu:
    """Segments a station sends in one DL A-MPDU.

    ``mpdus`` holds the per-MPDU segment counts, in transmission order over
    the sequence ``retransmit + range(first_new, first_new + new_count)``.
    """

    retransmit: tuple[int, ...]
    first_new: int
    new_count: int
    mpdus: tuple[int, ...]
    bits: int                    # data MPDUs plus the aggregated TF MPDU

    @property
    def segment_count(self) -> int:
        return len(self.retransmit) + self.new_count

    def segments(self) -> list[int]:
        return list(self.retransmit) + list(range(self.first_new, self.first_new + self.new_count))

    def mpdu_segments(self) -> list[list[int]]:
        segs = self.segments()
        out, i = [], 0
        for n in self.mpdus:
            out.append(segs[i:i + n])
            i += n
        return out


@dataclass(frozen=True)
class TxopContext:
    """Everything a TXOP needs, resolved once per scenario."""

    stations: int
    segment_bytes: int
    msdu_len: int
    x_star: int
    s: int
    strategy: int
    load: Optional[float]
    dl: McsEntry
    ul: McsEntry
    dl_error_rate: float
    error_model: str = "mpdu"
    timing: TimingConstants = TimingConstants()
    frames: ControlFrameSizes = ControlFrameSizes()
    arith: FrameArithmetic = DEFAULT_ARITHMETIC
    max_cycles: int = 10_000
    fill_policy: str = "capacity"

    @property
    def dl_budget_bits(self) -> float:
        return max_payload_bits(self.dl.dl_rate, self.dl.dl_preamble, self.timing.dl_symbol,
                                self.timing.max_ppdu_duration)

    @property
    def max_data_mpdus(self) -> int:
        return self.arith.ba_window - 1  # one slot goes to the TF MPDU

    @property
    def ack_target(self) -> int:
        if self.strategy == 3:
            return math.ceil(self.load * self.stations * self.s)
        return self.s


def build_dl_ampdu(stream: StationStream, x_star: int, budget_bits: float, max_mpdus: int,
                   msdu_len: int, tf_bits: int, new_segment_quota: Optional[int] = None,
                   arith: FrameArithmetic = DEFAULT_ARITHMETIC) -> DlAmpdu:
    """Pack holes first, then new segments, ``x_star`` per MPDU, within the A-MPDU budget.

    A shortfall of segments or of budget leaves the final MPDU with fewer than
    ``x_star`` segments.  ``new_segment_quota=None`` means saturated.
    """
    room = budget_bits - tf_bits
    full = mpdu_bits(x_star, msdu_len, arith)
    n_full_cap = max(0, min(max_mpdus, int(room // full))) if room != math.inf else max_mpdus
    cap_segments = n_full_cap * x_star
    tail_cap = 0
    if n_full_cap < max_mpdus and room != math.inf:
        left = room - n_full_cap * full
        tail_cap = max(0, min(x_star - 1, int((left / 8 - arith.mpdu_overhead) // msdu_len)))
    cap_segments += tail_cap

    available = len(stream.holes) + (cap_segments if new_segment_quota is None
                                     else new_segment_quota)
    count = min(cap_segments, available)
    n_retx = min(len(stream.holes), count)
    new = count - n_retx

    full_n, rest = divmod(count, x_star)
    mpdus = (x_star,) * full_n + ((rest,) if rest else ())
    bits = 8 * (arith.mpdu_overhead * len(mpdus) + count * msdu_len) + tf_bits
    return DlAmpdu(tuple(stream.holes[:n_retx]), stream.next_new, new, mpdus, bits)


def strategy_terminated(pending: Sequence[int], strategy: int, load: Optional[float], s: int) -> bool:
    if strategy == 1:
        return any(p >= s for p in pending)
    if strategy == 2:
        return all(p >= s for p in pending)
    if strategy == 3:
        if load is None or not 0 < load <= 1:
            raise ValueError("strategy 3 needs 0 < load <= 1")
        return sum(min(p, s) for p in pending) >= math.ceil(load * len(pending) * s)
    raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def _apply_feedback(stream: StationStream, ampdu: DlAmpdu, lost: np.ndarray) -> None:
    """Update holes/next_new from one BAck bitmap (``lost`` is per MPDU)."""
    n_retx = len(ampdu.retransmit)
    if not lost.any():
        del stream.holes[:n_retx]
    else:
        segs = ampdu.mpdu_segments()
        failed = [s for mpdu, bad in zip(segs, lost) if bad for s in mpdu]
        rest = stream.holes[n_retx:]
        # failed retransmissions sit below every untouched hole; failed new ones above
        low = [s for s in failed if s < ampdu.first_new]
        high = [s for s in failed if s >= ampdu.first_new]
        stream.holes = low + rest + high
    stream.next_new += ampdu.new_count


def _quota_split(total: int, n: int) -> list[int]:
    q, r = divmod(total, n)
    return [q + (1 if i < r else 0) for i in range(n)]


def check_context(ctx: TxopContext) -> None:
    if ctx.strategy not in STRATEGIES:
        raise ConfigurationError(f"unknown strategy {ctx.strategy}")
    if ctx.strategy == 3 and (ctx.load is None or not 0 < ctx.load <= 1):
        raise ConfigurationError("strategy 3 needs 0 < load <= 1")
    if ctx.fill_policy not in FILL_POLICIES:
        raise ConfigurationError(f"unknown fill policy {ctx.fill_policy!r}")
    if ctx.s <= 0:
        raise ConfigurationError("a station cannot send a single TCP ack in one UL PPDU (S = 0)")
    probe = build_dl_ampdu(StationStream(), ctx.x_star, ctx.dl_budget_bits, ctx.max_data_mpdus,
                           ctx.msdu_len, 8 * ctx.frames.tf_bytes, None, ctx.arith)
    if probe.segment_count == 0:
        raise ConfigurationError("the DL PPDU cannot carry a single TCP data segment")


def run_txop(streams: list[StationStream], ctx: TxopContext, rng: np.random.Generator,
             trace: Optional[list[TracePhase]] = None, txop_index: int = 0) -> TxopRecord:
    """Run one TXOP, mutating ``streams`` in place."""
    check_context(ctx)
    if len(streams) != ctx.stations:
        raise ConfigurationError(f"expected {ctx.stations} streams, got {len(streams)}")
    t = ctx.timing
    fr = ctx.frames
    tf_bits = 8 * fr.tf_bytes
    budget = ctx.dl_budget_bits
    clock = 0.0

    def phase(name: str, dur: float, bits: int = 0) -> None:
        nonlocal clock
        if trace is not None:
            trace.append(TracePhase(txop_index, name, clock, dur, bits))
        clock += dur

    phase("access", t.channel_access)

    quotas: Optional[list[int]] = None
    if ctx.strategy == 3 and ctx.fill_policy == "quota":
        quotas = _quota_split(ctx.ack_target, ctx.stations)

    back_dur = mu_ppdu_duration(8 * fr.back_bytes, ctx.ul.ul_rate, ctx.ul.ul_preamble, t.ul_symbol)
    cycles = 0
    while True:
        if cycles >= ctx.max_cycles:
            raise NonTerminatingTxop(
                f"no termination after {ctx.max_cycles} DL cycles "
                f"(strategy {ctx.strategy}, DL error rate {ctx.dl_error_rate})")
        cycles += 1
        ampdus = [build_dl_ampdu(st, ctx.x_star, budget, ctx.max_data_mpdus, ctx.msdu_len, tf_bits,
                                 None if quotas is None else quotas[i], ctx.arith)
                  for i, st in enumerate(streams)]
        dl_dur = mu_ppdu_duration(max(a.bits for a in ampdus), ctx.dl.dl_rate, ctx.dl.dl_preamble,
                                  t.dl_symbol)
        phase("dl_data", dl_dur, sum(a.bits for a in ampdus))

        # one uniform draw per data MPDU, stations in order, MPDUs in order
        sizes = np.concatenate([np.asarray(a.mpdus, dtype=np.int64) for a in ampdus])
        draws = rng.random(sizes.size)
        p_err = 1.0 - mpdu_success_probability(ctx.dl_error_rate, 8 * (ctx.arith.mpdu_overhead
                                                                        + sizes * ctx.msdu_len),
                                               ctx.error_model)
        lost = draws < p_err
        off = 0
        for i, (st, a) in enumerate(zip(streams, ampdus)):
            k = len(a.mpdus)
            _apply_feedback(st, a, lost[off:off + k])
            off += k
            if quotas is not None:
                quotas[i] -= a.new_count

        phase("sifs", t.sifs)
        phase("back", back_dur, 8 * fr.back_bytes * ctx.stations)
        phase("sifs", t.sifs)
        if strategy_terminated([st.pending_acks for st in streams], ctx.strategy, ctx.load, ctx.s):
            break

    legacy_rate, legacy_pre = ctx.dl.legacy_rate, ctx.dl.legacy_preamble
    phase("tf", legacy_frame_duration(tf_bits, legacy_rate, legacy_pre, t.legacy_symbol), tf_bits)
    phase("sifs", t.sifs)

    acks = [min(st.pending_acks, ctx.s) for st in streams]
    plans = [plan_ack_ampdu(n, ctx.ul, ctx.arith, t) for n in acks]
    assert all(p.total_msdus == n for p, n in zip(plans, acks))
    ul_dur = mu_ppdu_duration(max(p.on_air_bits for p in plans), ctx.ul.ul_rate, ctx.ul.ul_preamble,
                              t.ul_symbol)
    phase("ul_acks", ul_dur, sum(p.on_air_bits for p in plans))
    phase("sifs", t.sifs)
    mba_bits = 8 * (fr.mba_base_bytes + ctx.stations * fr.mba_per_station_bytes)
    phase("mba", legacy_frame_duration(mba_bits, legacy_rate, legacy_pre, t.legacy_symbol), mba_bits)

    for st, n in zip(streams, acks):
        st.base += n

    delivered = sum(acks)
    return TxopRecord(
        duration=clock,
        dl_cycles=cycles,
        data_segments_delivered=delivered,
        data_bits_delivered=delivered * ctx.segment_bytes * 8,
        acks_transmitted=delivered,
    )
