"""
Goodput versus delay
====================

Sweep the strategy 3 load and write tidy plot data (x, series, y) that any
plotting tool can read.  Each point uses seed ``base.seed ^ index``.
"""

import numpy as np

from axtcp import ScenarioConfig, emit_plot_data, sweep, write_results

loads = np.geomspace(0.01, 1.0, 8)
results = []
for seg in (1460, 208):
    base = ScenarioConfig(segment_bytes=seg, strategy=3, load=0.01, txop_count=200)
    rows = sweep(base, "load", loads)
    results += [(f"{seg}B", r) for r in rows]
    for r in rows:
        m = r.metrics
        print(f"{seg:4d} B  load {r.value:5.3f}  delay {m.mean_txop:7.2f} ms  goodput {m.goodput:7.1f} Mbps")

print(emit_plot_data(results, "goodput_vs_delay"))
print(write_results([r for _, r in results[:3]]))

# An unusable SNR does not stop a sweep; the row just carries the error
rows = sweep(ScenarioConfig(txop_count=5), "snr", [36.6, 9.0])
print(rows[1].error)
