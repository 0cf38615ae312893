"""MSDU/MPDU/A-MPDU size arithmetic and MPDU packing.

Sizes are in bytes unless a name says ``bits``.  Two readings of a table
error rate are supported when computing MPDU delivery probability:

``"bit"``
    the value is a per-bit error rate; an MPDU of ``b`` bits survives with
    probability ``(1 - ber) ** b``.
``"mpdu"``
    the value is the probability that one MPDU is received in error,
    independent of its length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .airtime import TimingConstants, max_payload_bits, mu_ppdu_duration
from .phy_tables import McsEntry

ERROR_MODELS = ("bit", "mpdu")


class DegenerateChannelError(ValueError):
    """Every MPDU is lost, so no packing can deliver data."""


@dataclass(frozen=True)
class FrameArithmetic:
    mac_header: int = 28
    fcs: int = 4
    tcp_ip_headers: int = 40
    llc_snap: int = 8
    subheader: int = 14
    msdu_align: int = 4
    mpdu_size_limit: int = 11454
    ba_window: int = 256

    def __post_init__(self):
        for name, v in vars(self).items():
            if v <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def mpdu_overhead(self) -> int:
        return self.mac_header + self.fcs


DEFAULT_ARITHMETIC = FrameArithmetic()


@dataclass(frozen=True)
class MpduPlan:
    msdus_per_mpdu: int
    mpdu_count: int
    last_mpdu_msdus: int   # size of the Partial MPDU, 0 if none
    total_msdus: int
    on_air_bits: int


@dataclass(frozen=True)
class PackingResult:
    x_star: int
    u_at_x_star: float     # Mbps
    table: np.ndarray      # U(X) for X = 1..len(table)


def msdu_on_air_size(tcp_payload: int, arith: FrameArithmetic = DEFAULT_ARITHMETIC) -> int:
    """Aggregated MSDU length for a TCP segment with ``tcp_payload`` bytes (0 = pure ack)."""
    if tcp_payload < 0:
        raise ValueError("tcp_payload must be >= 0")
    raw = tcp_payload + arith.tcp_ip_headers + arith.llc_snap + arith.subheader
    a = arith.msdu_align
    return -(-raw // a) * a


def max_msdus_per_mpdu(msdu_len: int, arith: FrameArithmetic = DEFAULT_ARITHMETIC) -> int:
    # Header bytes deliberately excluded: this is what yields 7 / 42 / 178.
    if msdu_len <= 0:
        raise ValueError("msdu_len must be > 0")
    return arith.mpdu_size_limit // msdu_len


def mpdu_bits(msdu_count: int, msdu_len: int, arith: FrameArithmetic = DEFAULT_ARITHMETIC) -> int:
    return 8 * (arith.mpdu_overhead + msdu_count * msdu_len)


def n_max(arith: FrameArithmetic = DEFAULT_ARITHMETIC) -> int:
    """Protocol cap on TCP acks in one A-MPDU (BA window x acks per MPDU)."""
    return arith.ba_window * max_msdus_per_mpdu(msdu_on_air_size(0, arith), arith)


def mpdu_success_probability(error_rate, bits, error_model: str = "bit"):
    """Probability that an MPDU of ``bits`` bits is received intact."""
    bits = np.asarray(bits, dtype=float)
    if error_model == "bit":
        p = np.power(1.0 - error_rate, bits)
    elif error_model == "mpdu":
        p = np.full(bits.shape, 1.0 - error_rate)
    else:
        raise ValueError(f"unknown error model {error_model!r}; expected one of {ERROR_MODELS}")
    return p if p.ndim else float(p)


def local_throughput(x, ber: float, dl_rate: float, msdu_len: int, l_data_bits: float,
                     error_model: str = "bit",
                     arith: FrameArithmetic = DEFAULT_ARITHMETIC):
    """Expected delivered TCP payload per unit MPDU airtime (Mbps) for ``x`` segments per MPDU."""
    x = np.asarray(x)
    bits = 8 * (arith.mpdu_overhead + x * msdu_len)
    p_ok = mpdu_success_probability(ber, bits, error_model)
    return x * l_data_bits * p_ok / (bits / dl_rate)


def optimal_segments_per_mpdu(ber: float, dl_rate: float, msdu_len: int, l_data_bits: float,
                              error_model: str = "bit",
                              arith: FrameArithmetic = DEFAULT_ARITHMETIC) -> PackingResult:
    """Exhaustive search of the local-throughput-maximising number of segments per MPDU.

    Ties go to the smaller count.
    """
    if not 0 <= ber <= 1:
        raise ValueError("ber must be in [0, 1]")
    if ber >= 1:
        raise DegenerateChannelError("error rate 1: no MPDU can be delivered")
    if dl_rate <= 0:
        raise ValueError("dl_rate must be > 0")
    cap = max_msdus_per_mpdu(msdu_len, arith)
    if cap < 1:
        raise ValueError(f"an MSDU of {msdu_len} bytes does not fit in one MPDU")
    xs = np.arange(1, cap + 1)
    u = local_throughput(xs, ber, dl_rate, msdu_len, l_data_bits, error_model, arith)
    i = int(np.argmax(u))  # first maximum -> smallest X
    return PackingResult(x_star=i + 1, u_at_x_star=float(u[i]), table=u)


# -- UL ack A-MPDU ------------------------------------------------------------

def _ul_budget_bits(ul_entry: McsEntry, timing: TimingConstants) -> float:
    return max_payload_bits(ul_entry.ul_rate, ul_entry.ul_preamble, timing.ul_symbol,
                            timing.max_ppdu_duration)


def plan_ack_ampdu(ack_count: int, ul_entry: McsEntry,
                   limits: FrameArithmetic = DEFAULT_ARITHMETIC,
                   timing: TimingConstants = TimingConstants()) -> MpduPlan:
    """Full MPDUs plus at most one Partial, truncated to the BA window and PPDU duration caps."""
    if ack_count < 0:
        raise ValueError("ack_count must be >= 0")
    ack_len = msdu_on_air_size(0, limits)
    per = max_msdus_per_mpdu(ack_len, limits)
    full_bits = mpdu_bits(per, ack_len, limits)
    budget = _ul_budget_bits(ul_entry, timing)

    want_full, want_part = divmod(ack_count, per)
    fit_full = want_full if budget == math.inf else min(want_full, int(budget // full_bits))
    n_full = min(fit_full, limits.ba_window)
    part = 0
    if n_full < limits.ba_window:
        remaining = budget - n_full * full_bits
        room = per if remaining == math.inf else int((remaining / 8 - limits.mpdu_overhead) // ack_len)
        wanted = want_part if n_full == want_full else per - 1
        part = max(0, min(wanted, room))
    total = n_full * per + part
    count = n_full + (1 if part else 0)
    bits = n_full * full_bits + (mpdu_bits(part, ack_len, limits) if part else 0)
    return MpduPlan(per, count, part, total, bits)


def max_acks_per_station(ul_entry: McsEntry,
                         limits: FrameArithmetic = DEFAULT_ARITHMETIC,
                         timing: TimingConstants = TimingConstants()) -> int:
    """S: the largest ack count a station can send, all of it, in one UL A-MPDU."""
    lo, hi = 0, n_max(limits)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if plan_ack_ampdu(mid, ul_entry, limits, timing).total_msdus == mid:
            lo = mid
        else:
            hi = mid - 1
    return lo


def ack_ppdu_duration(plan: MpduPlan, ul_entry: McsEntry, timing: TimingConstants) -> float:
    return mu_ppdu_duration(plan.on_air_bits, ul_entry.ul_rate, ul_entry.ul_preamble, timing.ul_symbol)
