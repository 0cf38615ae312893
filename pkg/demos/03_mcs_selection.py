"""
MCS selection
=============

The UL uses the fastest MCS that is error free; the DL picks the MCS whose
best packing delivers the most goodput, even if it is lossy.
"""

from axtcp import default_ber_table, default_phy_table, dl_goodput_by_mcs, select_mcs_pair

ber = default_ber_table()
phy = default_phy_table(4)
print(" SNR   DL  UL")
for snr in reversed(ber.snr_db):
    dl, ul = select_mcs_pair(ber, snr, phy, 1524, 8 * 1460)
    print(f"{snr:5.1f}  {dl:2d}  {ul:2d}")

# At 33.5 dB MCS 9 loses 0.05% of MPDUs but is still worth it over MCS 8
u = dl_goodput_by_mcs(ber.row(33.5), phy, 1524, 8 * 1460)
print("U(X*) at 33.5 dB, MCS 8..10:", [round(v, 1) for v in u[8:11]])
