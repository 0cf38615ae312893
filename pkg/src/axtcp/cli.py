"""Command-line front end.

    axtcp simulate --stations 4 --segment 1460 --strategy 3 --load 0.03 --snr 36.6 --out r.csv
    axtcp sweep --axis load --values 0.01:1.0:log20 --snr 36.6 --out loads.csv
    axtcp tables export --kind ber --out ber160.csv
    axtcp packing --snr 33.5 --mcs 9

Every option can also come from ``--config FILE`` (flat ``key=value`` lines,
keys spelled like the long option without dashes, e.g. ``tf_bytes=100``).
Command-line flags override the file.  Failures print one JSON line on
stderr and exit non-zero (2 for usage errors).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .aggregation import ERROR_MODELS, msdu_on_air_size, optimal_segments_per_mpdu
from .airtime import TimingConstants
from .output import PLOT_LAYOUTS, emit_plot_data, series_key, write_results, write_trace
from .phy_tables import (dump_ber_table, dump_phy_table, load_ber_table, load_phy_table,
                         RU_BANDWIDTH_MHZ)
from .sim_engine import SWEEP_AXES, ScenarioConfig, SweepRow, resolve, simulate, sweep
from .txop import FILL_POLICIES, ControlFrameSizes

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# option name -> (type, default, help); shared by simulate/sweep/packing and the config file
SCENARIO_OPTIONS = {
    "stations": (int, 4, "number of stations: 4, 8, 16 or 32 (160/80/40/20 MHz RUs)"),
    "segment": (int, 1460, "TCP data segment payload in bytes"),
    "strategy": (int, 2, "scheduling strategy 1, 2 or 3"),
    "load": (float, None, "strategy-3 load in (0, 1]"),
    "snr": (float, 36.6, "SNR in dB"),
    "mcs": (str, None, "pin the MCS pair as DL:UL, bypassing selection"),
    "txops": (int, 10_000, "TXOPs to simulate per scenario"),
    "seed": (int, 0, "64-bit PRNG seed"),
    "phy_table": (str, None, "PHY table CSV"),
    "ber_table": (str, None, "BER table CSV"),
    "assume_same_ber": (bool, False, "reuse the 160 MHz BER table for narrower RUs"),
    "tf_bytes": (int, 100, "trigger frame size"),
    "back_bytes": (int, 64, "per-station block ack size"),
    "mba_base": (int, 24, "multi-station block ack fixed part"),
    "mba_per_sta": (int, 40, "multi-station block ack per-station part"),
    "max_cycles": (int, 10_000, "DL cycle guard per TXOP"),
    "error_model": (str, "mpdu", f"how BER table values apply to MPDUs: {'/'.join(ERROR_MODELS)}"),
    "fill_policy": (str, "capacity", f"strategy-3 DL fill: {'/'.join(FILL_POLICIES)}"),
    "sifs": (float, 16.0, "SIFS (us)"),
    "aifs": (float, 43.0, "AP AIFS (us)"),
    "avg_backoff": (float, 67.5, "mean backoff (us)"),
    "max_ppdu": (float, 5484.0, "maximum PPDU duration (us)"),
}


def _to_bool(v: str) -> bool:
    low = v.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {v!r}")


def read_config_file(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            key, val = (p.strip() for p in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in SCENARIO_OPTIONS:
                raise UsageError(f"{path}:{n}: unknown key {key!r}")
            typ = SCENARIO_OPTIONS[key][0]
            try:
                values[key] = _to_bool(val) if typ is bool else typ(val)
            except ValueError:
                raise UsageError(f"{path}:{n}: bad value for {key}: {val!r}") from None
    return values


def parse_values(spec: str, axis: str) -> list:
    """``a,b,c`` | ``start:stop:N`` (linear) | ``start:stop:logN`` | ``table`` (SNR rows)."""
    spec = spec.strip()
    if spec == "table":
        if axis != "snr":
            raise UsageError("'table' values only apply to the snr axis")
        return list(load_ber_table().snr_db)
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"range must be start:stop:N or start:stop:logN, got {spec!r}")
        lo, hi = float(parts[0]), float(parts[1])
        if parts[2].startswith("log"):
            vals = np.geomspace(lo, hi, int(parts[2][3:]))
        else:
            vals = np.linspace(lo, hi, int(parts[2]))
        vals = [float(v) for v in vals]
    else:
        vals = [float(v) for v in spec.split(",") if v.strip()]
    if not vals:
        raise UsageError("no sweep values")
    if axis in ("stations", "segment", "strategy"):
        return [int(round(v)) for v in vals]
    return vals


def _add_scenario_args(p: argparse.ArgumentParser) -> None:
    for name, (typ, _default, help_) in SCENARIO_OPTIONS.items():
        flag = "--" + name.replace("_", "-")
        if typ is bool:
            p.add_argument(flag, dest=name, action="store_const", const=True, default=None, help=help_)
        else:
            p.add_argument(flag, dest=name, type=typ, default=None, help=help_)
    p.add_argument("--config", help="flat key=value config file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="axtcp", description="802.11ax DL-MU TCP TXOP simulator")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one scenario")
    _add_scenario_args(p)
    p.add_argument("--trace", help="write the per-phase TXOP trace CSV here")
    p.add_argument("--out", help="results CSV (default stdout)")

    p = sub.add_parser("sweep", help="run a scenario over one axis")
    _add_scenario_args(p)
    p.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p.add_argument("--values", required=True, help="a,b,c | start:stop:N | start:stop:logN | table")
    p.add_argument("--series", help="comma-separated series to repeat the sweep for, e.g. s1,s2,s3@0.03")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--plot", choices=PLOT_LAYOUTS, help="also emit tidy plot data in this layout")
    p.add_argument("--plot-out", help="plot data CSV (required with --plot)")
    p.add_argument("--out", help="results CSV (default stdout)")

    p = sub.add_parser("tables", help="export or validate PHY/BER tables")
    p.add_argument("action", choices=("export", "check"))
    p.add_argument("--kind", choices=("phy", "ber"), required=True)
    p.add_argument("--stations", type=int, default=4)
    p.add_argument("--file", help="table to check")
    p.add_argument("--out")

    p = sub.add_parser("packing", help="U(X) diagnostic table for the DL MPDU packing")
    _add_scenario_args(p)
    p.add_argument("--out")
    return ap


def scenario_values(args: argparse.Namespace) -> dict:
    values = {k: v[1] for k, v in SCENARIO_OPTIONS.items()}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for k in SCENARIO_OPTIONS:
        v = getattr(args, k, None)
        if v is not None:
            values[k] = v
    return values


def config_from_values(values: dict) -> ScenarioConfig:
    stations = values["stations"]
    if stations not in RU_BANDWIDTH_MHZ:
        raise UsageError(f"--stations must be one of {sorted(RU_BANDWIDTH_MHZ)}")
    if values["strategy"] == 3 and values["load"] is None:
        raise UsageError("--strategy 3 requires --load")
    if values["error_model"] not in ERROR_MODELS:
        raise UsageError(f"--error-model must be one of {ERROR_MODELS}")
    if values["fill_policy"] not in FILL_POLICIES:
        raise UsageError(f"--fill-policy must be one of {FILL_POLICIES}")
    mcs = None
    if values["mcs"]:
        try:
            dl, ul = (int(x) for x in values["mcs"].split(":"))
        except ValueError:
            raise UsageError("--mcs must look like DL:UL, e.g. 11:10") from None
        mcs = (dl, ul)
    bw = RU_BANDWIDTH_MHZ[stations]
    timing = dataclasses.replace(TimingConstants(), sifs=values["sifs"], aifs_ap=values["aifs"],
                                 avg_backoff=values["avg_backoff"], max_ppdu_duration=values["max_ppdu"])
    frames = ControlFrameSizes(values["tf_bytes"], values["back_bytes"], values["mba_per_sta"],
                               values["mba_base"])
    return ScenarioConfig(
        stations=stations,
        segment_bytes=values["segment"],
        strategy=values["strategy"],
        load=values["load"],
        snr_db=values["snr"],
        txop_count=values["txops"],
        seed=values["seed"],
        timing=timing,
        frames=frames,
        phy_table=load_phy_table(values["phy_table"], stations) if values["phy_table"] else None,
        ber_table=load_ber_table(values["ber_table"], bw) if values["ber_table"] else None,
        assume_same_ber=bool(values["assume_same_ber"]),
        mcs=mcs,
        error_model=values["error_model"],
        max_cycles=values["max_cycles"],
        fill_policy=values["fill_policy"],
    )


def _echo(values: dict) -> list[str]:
    return [f"{k}={'' if v is None else v}" for k, v in values.items()]


def _emit(text: str, dest: Optional[str]) -> None:
    if dest is None:
        sys.stdout.write(text)
    else:
        with open(dest, "w", newline="") as fh:
            fh.write(text)


def parse_series(spec: str) -> list[tuple[int, Optional[float]]]:
    out = []
    for tok in spec.split(","):
        tok = tok.strip()
        if tok in ("s1", "s2"):
            out.append((int(tok[1]), None))
        elif tok.startswith("s3@"):
            out.append((3, float(tok[3:])))
        else:
            raise UsageError(f"bad series {tok!r}; use s1, s2 or s3@LOAD")
    return out


def cmd_simulate(args) -> int:
    values = scenario_values(args)
    cfg = config_from_values(values)
    trace = [] if args.trace else None
    m = simulate(cfg, trace=trace)
    if trace is not None:
        write_trace(trace, args.trace)
    _emit(write_results([SweepRow(cfg.snr_db, cfg, m)], header_comments=_echo(values)), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    values = scenario_values(args)
    if args.plot and not args.plot_out:
        raise UsageError("--plot needs --plot-out")
    points = parse_values(args.values, args.axis)
    series = parse_series(args.series) if args.series else [(values["strategy"], values["load"])]
    all_rows: list[tuple[str, SweepRow]] = []
    for strategy, load in series:
        v = dict(values, strategy=strategy, load=load if load is not None else values["load"])
        if args.axis == "load":
            v["strategy"] = 3
            if v["load"] is None:
                v["load"] = points[0]
        base = config_from_values(v)
        rows = sweep(base, args.axis, points, workers=args.workers)
        all_rows.extend((series_key(r.config, args.axis), r) for r in rows)
    _emit(write_results([r for _, r in all_rows], header_comments=_echo(values)), args.out)
    if args.plot:
        emit_plot_data(all_rows, args.plot, args.plot_out)
    return EXIT_OK


def cmd_tables(args) -> int:
    if args.action == "export":
        if args.kind == "phy":
            text = dump_phy_table(load_phy_table(None, args.stations))
        else:
            text = dump_ber_table(load_ber_table())
        _emit(text, args.out)
        return EXIT_OK
    if not args.file:
        raise UsageError("tables check needs --file")
    if args.kind == "phy":
        load_phy_table(args.file, args.stations)
    else:
        load_ber_table(args.file, RU_BANDWIDTH_MHZ.get(args.stations, 160))
    print(json.dumps({"status": "ok", "file": args.file}))
    return EXIT_OK


def cmd_packing(args) -> int:
    values = scenario_values(args)
    cfg = config_from_values(values)
    ctx = resolve(cfg)
    res = optimal_segments_per_mpdu(ctx.dl_error_rate, ctx.dl.dl_rate,
                                    msdu_on_air_size(cfg.segment_bytes, cfg.arithmetic),
                                    8 * cfg.segment_bytes, cfg.error_model, cfg.arithmetic)
    lines = [f"# dl_mcs={ctx.dl.mcs_index} error_rate={ctx.dl_error_rate!r} x_star={res.x_star}",
             "x,u_mbps"]
    lines += [f"{x},{float(u)!r}" for x, u in enumerate(res.table, start=1)]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "sweep": cmd_sweep, "tables": cmd_tables, "packing": cmd_packing}


def _fail(kind: str, exc: BaseException, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "type": type(exc).__name__, "message": str(exc)}) + "\n")
    return code


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail("usage", exc, EXIT_USAGE)
    except (OSError, ValueError, RuntimeError) as exc:
        return _fail("runtime", exc, EXIT_FAIL)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
