"""CSV writers for results, plot data and TXOP traces."""

from __future__ import annotations

import csv
import io
import logging
import math
from typing import Iterable, Optional, Sequence

from .sim_engine import Metrics, ScenarioConfig, SweepRow
from .txop import TracePhase

log = logging.getLogger(__name__)

RESULT_COLUMNS = [
    "scenario_id", "stations", "segment", "strategy", "load", "snr_db", "dl_mcs", "ul_mcs",
    "goodput_mbps", "mean_txop_ms", "txop_p95_ms", "mean_dl_cycles", "goodput_stderr",
]
PLOT_LAYOUTS = ("goodput_vs_snr", "delay_vs_snr", "goodput_vs_delay", "goodput_vs_load")
TRACE_COLUMNS = ["txop", "phase", "start_us", "duration_us", "bits"]


def series_key(cfg: ScenarioConfig, axis: Optional[str] = None) -> str:
    """"s1", "s2" or "s3@<load>"; plain "s3" when load is the swept axis."""
    if cfg.strategy == 3 and axis != "load":
        return f"s3@{cfg.load:g}"
    return f"s{cfg.strategy}"


def _num(v: float) -> str:
    return repr(float(v))


def result_row(scenario_id: int, cfg: ScenarioConfig, m: Optional[Metrics]) -> list[str]:
    head = [str(scenario_id), str(cfg.stations), str(cfg.segment_bytes), str(cfg.strategy),
            "" if cfg.load is None else _num(cfg.load), _num(cfg.snr_db)]
    if m is None:
        return head + ["NA"] * (len(RESULT_COLUMNS) - len(head))
    return head + [str(m.dl_mcs), str(m.ul_mcs), _num(m.goodput), _num(m.mean_txop),
                   _num(m.txop_p95), _num(m.mean_dl_cycles), _num(m.goodput_stderr)]


def write_results(rows: Sequence[SweepRow], dest=None, header_comments: Iterable[str] = ()) -> str:
    """Results CSV; failed points get NA metrics followed by a ``# error`` comment line."""
    buf = io.StringIO()
    for line in header_comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_COLUMNS)
    for i, r in enumerate(rows):
        w.writerow(result_row(i, r.config, r.metrics))
        if r.error:
            buf.write(f"# error scenario_id={i}: {r.error}\n")
    return _finish(buf, dest)


def plot_rows(results: Sequence[tuple[str, SweepRow]], layout: str) -> list[tuple[float, str, float]]:
    """Tidy (x, series, y) triples for one of :data:`PLOT_LAYOUTS`."""
    if layout not in PLOT_LAYOUTS:
        raise ValueError(f"unknown layout {layout!r}; expected one of {PLOT_LAYOUTS}")
    ok = [(s, r) for s, r in results if r.metrics is not None]
    if not ok:
        raise ValueError("no successful results to plot")
    out = []
    if layout == "goodput_vs_delay":
        by_series: dict[str, list[SweepRow]] = {}
        for s, r in ok:
            by_series.setdefault(s, []).append(r)
        for s, rs in by_series.items():
            by_load = sorted(rs, key=lambda r: (r.config.load or 0.0))
            delays = [r.metrics.mean_txop for r in by_load]
            if any(b < a for a, b in zip(delays, delays[1:])):
                log.warning("series %s: mean TXOP is not monotone in load", s)
            for r in sorted(rs, key=lambda r: r.metrics.mean_txop):
                out.append((r.metrics.mean_txop, s, r.metrics.goodput))
        return out
    for s, r in ok:
        m, c = r.metrics, r.config
        if layout == "goodput_vs_snr":
            out.append((c.snr_db, s, m.goodput))
        elif layout == "delay_vs_snr":
            out.append((c.snr_db, s, m.mean_txop))
        else:
            out.append((math.nan if c.load is None else c.load, s, m.goodput))
    return out


def emit_plot_data(results: Sequence[tuple[str, SweepRow]], layout: str, dest=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "series", "y"])
    for x, s, y in plot_rows(results, layout):
        w.writerow([_num(x), s, _num(y)])
    return _finish(buf, dest)


def write_trace(trace: Sequence[TracePhase], dest=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for p in trace:
        w.writerow([p.txop, p.phase, _num(p.start), _num(p.duration), p.bits])
    return _finish(buf, dest)


def read_trace(source) -> list[TracePhase]:
    if isinstance(source, str) and "\n" in source:
        fh = io.StringIO(source)
    else:
        fh = open(source, newline="")
    with fh:
        rows = list(csv.DictReader(fh))
    return [TracePhase(int(r["txop"]), r["phase"], float(r["start_us"]), float(r["duration_us"]),
                       int(r["bits"])) for r in rows]


def replay_durations(trace: Sequence[TracePhase]) -> dict[int, float]:
    """Per-TXOP duration re-summed from the trace in phase order."""
    out: dict[int, float] = {}
    for p in trace:
        out[p.txop] = out.get(p.txop, 0.0) + p.duration
    return out


def _finish(buf: io.StringIO, dest) -> str:
    text = buf.getvalue()
    if dest is not None:
        with open(dest, "w", newline="") as fh:
            fh.write(text)
    return text
