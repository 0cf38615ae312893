"""SNR -> (DL MCS, UL MCS) selection.

The UL carries the TCP acks and must be reliable, so it uses the highest MCS
whose error rate is exactly zero.  The DL takes whichever MCS maximises the
local MPDU throughput at its own optimal packing.
"""

from __future__ import annotations

from typing import Sequence

from .aggregation import (DEFAULT_ARITHMETIC, DegenerateChannelError, FrameArithmetic,
                          optimal_segments_per_mpdu)
from .phy_tables import BerTable, ChannelUnusableError, PhyTable

DEFAULT_ERROR_MODEL = "mpdu"


def select_ul_mcs(ber_row: Sequence[float]) -> int:
    zero = [m for m, b in enumerate(ber_row) if b == 0]
    if not zero:
        raise ChannelUnusableError("no MCS has a zero error rate; the UL cannot be made reliable")
    return max(zero)


def dl_goodput_by_mcs(ber_row: Sequence[float], phy: PhyTable, msdu_len: int, l_data_bits: float,
                      error_model: str = DEFAULT_ERROR_MODEL,
                      arith: FrameArithmetic = DEFAULT_ARITHMETIC) -> list[float]:
    """U(X*) for every MCS in the row (0.0 where the channel is dead)."""
    out = []
    for entry, ber in zip(phy.entries, ber_row):
        try:
            res = optimal_segments_per_mpdu(ber, entry.dl_rate, msdu_len, l_data_bits, error_model, arith)
        except DegenerateChannelError:
            out.append(0.0)
            continue
        out.append(res.u_at_x_star)
    return out


def select_dl_mcs(ber_row: Sequence[float], phy: PhyTable, msdu_len: int, l_data_bits: float,
                  error_model: str = DEFAULT_ERROR_MODEL,
                  arith: FrameArithmetic = DEFAULT_ARITHMETIC) -> int:
    """Argmax of U(X*) over MCS; ties go to the higher index."""
    u = dl_goodput_by_mcs(ber_row, phy, msdu_len, l_data_bits, error_model, arith)
    best = max(u)
    if best <= 0:
        raise ChannelUnusableError("no MCS delivers any data on the DL")
    return max(m for m, v in enumerate(u) if v == best)


def select_mcs_pair(ber_table: BerTable, snr_db: float, phy: PhyTable, msdu_len: int,
                    l_data_bits: float, error_model: str = DEFAULT_ERROR_MODEL,
                    arith: FrameArithmetic = DEFAULT_ARITHMETIC) -> tuple[int, int]:
    """(dl_mcs, ul_mcs) for ``snr_db``."""
    row = ber_table.row(snr_db)
    return (select_dl_mcs(row, phy, msdu_len, l_data_bits, error_model, arith),
            select_ul_mcs(row))
