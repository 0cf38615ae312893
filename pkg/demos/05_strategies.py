"""
Scheduling strategies
=====================

Strategy 1 stops the DL as soon as one station could fill a UL PPDU with
acks, strategy 2 waits for all of them, and strategy 3 stops once a load
fraction of the total is reached.  Low loads trade a little goodput for a
much shorter TXOP.
"""

from axtcp import ScenarioConfig, simulate

base = ScenarioConfig(stations=4, segment_bytes=1460, snr_db=36.6, txop_count=500)
runs = {"s1": base.replace(strategy=1), "s2": base.replace(strategy=2),
        "s3@0.03": base.replace(strategy=3, load=0.03), "s3@0.5": base.replace(strategy=3, load=0.5)}
for name, cfg in runs.items():
    m = simulate(cfg)
    print(f"{name:8s} goodput {m.goodput:7.1f} Mbps  TXOP {m.mean_txop:7.2f} ms  "
          f"DL cycles {m.mean_dl_cycles:5.2f}")

g2 = simulate(runs["s2"]).goodput
g3 = simulate(runs["s3@0.03"]).goodput
print(f"load 0.03 keeps {g3 / g2:.1%} of the strategy 2 goodput")
