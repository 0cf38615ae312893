"""On-air durations of HE MU PPDUs and legacy control frames (all times in us)."""

from __future__ import annotations

import math
from dataclasses import dataclass

# Guards ceil/floor against float noise when bits land exactly on a symbol boundary.
_EPS = 1e-9


@dataclass(frozen=True)
class TimingConstants:
    sifs: float = 16.0
    aifs_ap: float = 43.0
    aifs_sta: float = 52.0
    slot_time: float = 9.0
    cw_min: int = 16
    avg_backoff: float = 67.5
    symbol_base: float = 12.8
    dl_symbol: float = 13.6
    ul_symbol: float = 14.4
    legacy_symbol: float = 4.0
    max_ppdu_duration: float = 5484.0

    def __post_init__(self):
        for name in ("sifs", "aifs_ap", "aifs_sta", "slot_time", "avg_backoff"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        for name in ("dl_symbol", "ul_symbol", "legacy_symbol", "max_ppdu_duration"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")

    @property
    def channel_access(self) -> float:
        """Mean backoff plus the AP's AIFS, paid once per TXOP."""
        return self.avg_backoff + self.aifs_ap


def symbols_needed(payload_bits: float, bits_per_symbol: float) -> int:
    if payload_bits <= 0:
        return 0
    return math.ceil(payload_bits / bits_per_symbol - _EPS)


def mu_ppdu_duration(payload_bits: float, rate: float, preamble: float, symbol: float) -> float:
    """preamble + ceil(bits / (rate * symbol)) * symbol; rate in Mbps, times in us."""
    if payload_bits < 0:
        raise ValueError("payload_bits must be >= 0")
    if rate <= 0:
        raise ValueError("rate must be > 0")
    return preamble + symbols_needed(payload_bits, rate * symbol) * symbol


def legacy_frame_duration(payload_bits: float, legacy_rate: float, legacy_preamble: float,
                          legacy_symbol: float = 4.0) -> float:
    return mu_ppdu_duration(payload_bits, legacy_rate, legacy_preamble, legacy_symbol)


def max_payload_bits(rate: float, preamble: float, symbol: float, max_duration: float) -> float:
    """Largest payload (bits) whose PPDU still fits within ``max_duration``."""
    if max_duration == math.inf:
        return math.inf
    n_sym = math.floor((max_duration - preamble) / symbol + _EPS)
    if n_sym <= 0:
        return 0.0
    return n_sym * rate * symbol


def mu_ppdu_duration_max(payload_bits, rate: float, preamble: float, symbol: float) -> float:
    """Duration of an MU PPDU: every user gets the same RU/rate, so the longest payload sets it."""
    return mu_ppdu_duration(max(payload_bits, default=0), rate, preamble, symbol)
