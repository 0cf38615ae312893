"""
Airtime and MPDU packing
========================

How long a PPDU lasts, how many TCP segments fit into one MPDU, and how the
packing that maximises local throughput shifts as the channel gets worse.
"""

import numpy as np

from axtcp import (TimingConstants, max_acks_per_station, msdu_on_air_size, max_msdus_per_mpdu,
                   mu_ppdu_duration, optimal_segments_per_mpdu, default_phy_table, lookup_mcs)

t = TimingConstants()
mcs11 = lookup_mcs(default_phy_table(4), 11)

# A DL PPDU carrying one full MPDU of seven 1460 byte segments
bits = 8 * (32 + 7 * 1524)
print("DL PPDU us:", mu_ppdu_duration(bits, mcs11.dl_rate, mcs11.dl_preamble, t.dl_symbol))

for payload in (1460, 208, 0):
    size = msdu_on_air_size(payload)
    print(f"payload {payload:4d} B -> MSDU {size:4d} B, {max_msdus_per_mpdu(size)} per MPDU")

# Exhaustive search with the bit error model: X* falls quickly as the bit error rate grows
for ber in np.geomspace(1e-9, 1e-5, 5):
    res = optimal_segments_per_mpdu(ber, mcs11.dl_rate, 272, 8 * 208, "bit")
    print(f"ber {ber:.1e}: X* = {res.x_star:2d}, U = {res.u_at_x_star:7.1f} Mbps")

# S: the most TCP acks one station can return in a single UL PPDU
print("S at MCS 11, 4 stations:", max_acks_per_station(mcs11))
