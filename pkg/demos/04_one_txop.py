"""
Inside one TXOP
===============

Run a single TXOP on a lossy channel and print its phase trace: channel
access, repeated DL data / BAck cycles, then the trigger frame, the UL TCP
acks and the multi-station block ack.
"""

from axtcp import ScenarioConfig, StationStream, make_rng, resolve, run_txop

cfg = ScenarioConfig(snr_db=32.5, strategy=1)
ctx = resolve(cfg)
print(f"DL MCS {ctx.dl.mcs_index} (error {ctx.dl_error_rate}), UL MCS {ctx.ul.mcs_index}, "
      f"X* {ctx.x_star}, S {ctx.s}")

streams = [StationStream() for _ in range(cfg.stations)]
trace = []
rec = run_txop(streams, ctx, make_rng(1), trace)
for p in trace[:6] + [None] + trace[-5:]:
    print("   ..." if p is None else f"{p.phase:8s} {p.start:10.1f} {p.duration:8.1f} us {p.bits:9d} bits")
print(rec)
for i, s in enumerate(streams):
    print(f"station {i}: base {s.base}, next {s.next_new}, holes {len(s.holes)}, pending {s.pending_acks}")
