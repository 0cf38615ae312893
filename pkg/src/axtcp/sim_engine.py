"""Monte-Carlo driver: many TXOPs per scenario, goodput/delay metrics, sweeps.

Randomness comes only from DL MPDU losses, drawn from numpy's PCG64 bit
generator seeded with ``ScenarioConfig.seed``.  The PRNG identity is part of
the reproducibility contract: the same config and seed give bit-identical
metrics on any platform numpy supports.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .aggregation import (DEFAULT_ARITHMETIC, FrameArithmetic, max_acks_per_station, msdu_on_air_size,
                          optimal_segments_per_mpdu)
from .airtime import TimingConstants
from .mcs_select import DEFAULT_ERROR_MODEL, select_dl_mcs, select_ul_mcs
from .phy_tables import (BerTable, ChannelUnusableError, PhyTable, RU_BANDWIDTH_MHZ, TableError,
                         default_ber_table, default_phy_table, lookup_mcs)
from .txop import (ConfigurationError, ControlFrameSizes, StationStream, TracePhase, TxopContext,
                   check_context, run_txop)

SWEEP_AXES = ("snr", "load", "stations", "segment", "strategy")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class ScenarioConfig:
    stations: int = 4
    segment_bytes: int = 1460
    strategy: int = 2
    load: Optional[float] = None
    snr_db: float = 36.6
    txop_count: int = 10_000
    seed: int = 0
    timing: TimingConstants = TimingConstants()
    frames: ControlFrameSizes = ControlFrameSizes()
    arithmetic: FrameArithmetic = DEFAULT_ARITHMETIC
    phy_table: Optional[PhyTable] = None
    ber_table: Optional[BerTable] = None
    assume_same_ber: bool = False
    mcs: Optional[tuple[int, int]] = None     # (dl, ul) override
    error_model: str = DEFAULT_ERROR_MODEL
    max_cycles: int = 10_000
    fill_policy: str = "capacity"

    def __post_init__(self):
        if self.stations not in RU_BANDWIDTH_MHZ:
            raise ConfigurationError(f"stations must be one of {sorted(RU_BANDWIDTH_MHZ)}")
        if self.segment_bytes <= 0:
            raise ConfigurationError("segment_bytes must be > 0")
        if self.strategy not in (1, 2, 3):
            raise ConfigurationError(f"strategy must be 1, 2 or 3, got {self.strategy}")
        if self.strategy == 3 and (self.load is None or not 0 < self.load <= 1):
            raise ConfigurationError("strategy 3 requires 0 < load <= 1")
        if self.txop_count < 1:
            raise ConfigurationError("txop_count must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")
        if self.max_cycles < 1:
            raise ConfigurationError("max_cycles must be >= 1")

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def phy(self) -> PhyTable:
        if self.phy_table is not None:
            if self.phy_table.station_count != self.stations:
                raise ConfigurationError("PHY table station count does not match the scenario")
            return self.phy_table
        return default_phy_table(self.stations)

    def ber(self) -> BerTable:
        bw = RU_BANDWIDTH_MHZ[self.stations]
        if self.ber_table is not None:
            return self.ber_table
        if bw == 160 or self.assume_same_ber:
            return default_ber_table()
        raise TableError(f"no BER table for {bw} MHz RUs: supply one or set assume_same_ber")


@dataclass(frozen=True)
class Metrics:
    goodput: float          # Mbps
    mean_txop: float        # ms
    txop_p95: float         # ms
    mean_dl_cycles: float
    goodput_stderr: float   # Mbps
    dl_mcs: int = -1
    ul_mcs: int = -1
    s: int = 0
    x_star: int = 0


def resolve(cfg: ScenarioConfig) -> TxopContext:
    """Pick MCSs, packing and S for a scenario; raises if the SNR is unusable."""
    phy = cfg.phy()
    ber = cfg.ber()
    row = ber.row(cfg.snr_db)
    msdu_len = msdu_on_air_size(cfg.segment_bytes, cfg.arithmetic)
    l_data_bits = 8 * cfg.segment_bytes
    if cfg.mcs is not None:
        dl_mcs, ul_mcs = cfg.mcs
    else:
        ul_mcs = select_ul_mcs(row)
        dl_mcs = select_dl_mcs(row, phy, msdu_len, l_data_bits, cfg.error_model, cfg.arithmetic)
    dl, ul = lookup_mcs(phy, dl_mcs), lookup_mcs(phy, ul_mcs)
    err = row[dl_mcs]
    if err >= 1:
        raise ChannelUnusableError(f"DL MCS {dl_mcs} loses every MPDU at {cfg.snr_db} dB")
    x_star = optimal_segments_per_mpdu(err, dl.dl_rate, msdu_len, l_data_bits, cfg.error_model,
                                       cfg.arithmetic).x_star
    s = max_acks_per_station(ul, cfg.arithmetic, cfg.timing)
    ctx = TxopContext(
        stations=cfg.stations, segment_bytes=cfg.segment_bytes, msdu_len=msdu_len, x_star=x_star,
        s=s, strategy=cfg.strategy, load=cfg.load, dl=dl, ul=ul, dl_error_rate=err,
        error_model=cfg.error_model, timing=cfg.timing, frames=cfg.frames, arith=cfg.arithmetic,
        max_cycles=cfg.max_cycles, fill_policy=cfg.fill_policy,
    )
    check_context(ctx)
    return ctx


def ratio_stderr(bits: np.ndarray, durations: np.ndarray) -> float:
    """Delta-method standard error of sum(bits) / sum(durations)."""
    n = bits.size
    if n < 2:
        return 0.0
    g = bits.sum() / durations.sum()
    resid = bits - g * durations
    return float(np.sqrt((resid @ resid) / (n * (n - 1))) / durations.mean())


def summarize(bits: np.ndarray, durations: np.ndarray, cycles: np.ndarray, ctx: TxopContext) -> Metrics:
    return Metrics(
        goodput=float(bits.sum() / durations.sum()),
        mean_txop=float(durations.mean() / 1000.0),
        txop_p95=float(np.percentile(durations, 95) / 1000.0),
        mean_dl_cycles=float(cycles.mean()),
        goodput_stderr=ratio_stderr(bits.astype(float), durations),
        dl_mcs=ctx.dl.mcs_index,
        ul_mcs=ctx.ul.mcs_index,
        s=ctx.s,
        x_star=ctx.x_star,
    )


def simulate(cfg: ScenarioConfig, trace: Optional[list[TracePhase]] = None,
             streams: Optional[list[StationStream]] = None) -> Metrics:
    """Run ``cfg.txop_count`` TXOPs with persistent streams and summarise them."""
    ctx = resolve(cfg)
    rng = make_rng(cfg.seed)
    if streams is None:
        streams = [StationStream() for _ in range(cfg.stations)]
    n = cfg.txop_count
    bits = np.empty(n, dtype=np.int64)
    dur = np.empty(n)
    cycles = np.empty(n, dtype=np.int64)
    for i in range(n):
        rec = run_txop(streams, ctx, rng, trace, i)
        bits[i], dur[i], cycles[i] = rec.data_bits_delivered, rec.duration, rec.dl_cycles
    return summarize(bits, dur, cycles, ctx)


@dataclass(frozen=True)
class SweepRow:
    value: object
    config: ScenarioConfig
    metrics: Optional[Metrics] = None
    error: Optional[str] = None


def _axis_change(axis: str, value) -> dict:
    if axis == "snr":
        return {"snr_db": float(value)}
    if axis == "load":
        return {"load": float(value), "strategy": 3}
    if axis == "stations":
        return {"stations": int(value)}
    if axis == "segment":
        return {"segment_bytes": int(value)}
    if axis == "strategy":
        return {"strategy": int(value)}
    raise ValueError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def _run_point(cfg: ScenarioConfig) -> tuple[Optional[Metrics], Optional[str]]:
    try:
        return simulate(cfg), None
    except (ValueError, RuntimeError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def sweep(base: ScenarioConfig, axis: str, values: Sequence, workers: int = 1) -> list[SweepRow]:
    """One simulation per value with seed ``base.seed ^ index``; errors are kept per row."""
    if len(values) == 0:
        raise ValueError("sweep needs at least one value")
    configs: list[Optional[ScenarioConfig]] = []
    rows: list[Optional[SweepRow]] = []
    for i, v in enumerate(values):
        try:
            configs.append(base.replace(seed=base.seed ^ i, **_axis_change(axis, v)))
            rows.append(None)
        except ConfigurationError as exc:
            configs.append(None)
            rows.append(SweepRow(v, base, None, f"{type(exc).__name__}: {exc}"))
    todo = [c for c in configs if c is not None]
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_point, todo))
    else:
        results = [_run_point(c) for c in todo]
    it = iter(results)
    out = []
    for v, c, r in zip(values, configs, rows):
        if r is not None:
            out.append(r)
        else:
            m, err = next(it)
            out.append(SweepRow(v, c, m, err))
    return out
