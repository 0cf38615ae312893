"""
PHY and BER tables
==================

The simulator ships the PHY rate table for 4, 8, 16 and 32 stations and the
160 MHz SNR/BER table.  Both can be dumped to CSV, edited and loaded back.
"""

from axtcp import default_ber_table, default_phy_table, dump_ber_table, load_ber_table, lookup_ber, lookup_mcs
import io

# One MCS row: rates in Mbps, preambles in microseconds
phy = default_phy_table(4)
print(lookup_mcs(phy, 11))
print("bandwidth per station:", phy.bandwidth_mhz, "MHz")

# BER lookup is a step function: the row with the largest SNR not above the query
ber = default_ber_table()
for snr in (36.6, 36.5, 35.1, 33.5):
    print(f"SNR {snr:5.1f} dB  MCS 11 error {lookup_ber(ber, snr, 11)}  MCS 9 error {lookup_ber(ber, snr, 9)}")

# Round trip through CSV is exact
text = dump_ber_table(ber)
print(text.splitlines()[0])
assert load_ber_table(io.StringIO(text)) == ber
