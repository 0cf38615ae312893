"""802.11ax PHY rate/preamble tables and SNR -> BER tables.

The embedded PHY tables hold per-spatial-stream rates for the four RU
allocations (4/8/16/32 stations on 160/80/40/20 MHz RUs).  Only the 160 MHz
SNR/BER table is embedded; other bandwidths must be loaded from CSV or
explicitly approximated with the 160 MHz one.
"""

from __future__ import annotations

import bisect
import csv
import io
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

NUM_MCS = 12
STATION_COUNTS = (4, 8, 16, 32)
RU_BANDWIDTH_MHZ = {4: 160, 8: 80, 16: 40, 32: 20}

PHY_CSV_HEADER = [
    "mcs", "ul_rate", "ul_preamble", "dl_rate", "dl_preamble",
    "legacy_rate", "legacy_preamble",
]
BER_CSV_HEADER = ["snr_db"] + [f"mcs{m}" for m in range(NUM_MCS)]


class TableError(ValueError):
    """Malformed or inconsistent table data."""


class ChannelUnusableError(ValueError):
    """The SNR is too low for any usable MCS on this channel."""


@dataclass(frozen=True)
class McsEntry:
    mcs_index: int
    ul_rate: float          # Mbps per SS, GI 1.6 us
    ul_preamble: float      # us
    dl_rate: float          # Mbps per SS, GI 0.8 us
    dl_preamble: float      # us
    legacy_rate: float      # Mbps, TF / M-BA
    legacy_preamble: float  # us


@dataclass(frozen=True)
class PhyTable:
    station_count: int
    entries: tuple[McsEntry, ...]

    def __post_init__(self):
        if self.station_count not in STATION_COUNTS:
            raise TableError(f"station_count must be one of {STATION_COUNTS}, got {self.station_count}")
        if [e.mcs_index for e in self.entries] != list(range(NUM_MCS)):
            raise TableError("PHY table must list MCS 0..11 in order with no gaps")
        for e in self.entries:
            if min(e.ul_rate, e.dl_rate, e.legacy_rate) <= 0:
                raise TableError(f"non-positive rate at MCS {e.mcs_index}")
            if min(e.ul_preamble, e.dl_preamble, e.legacy_preamble) < 0:
                raise TableError(f"negative preamble at MCS {e.mcs_index}")

    @property
    def bandwidth_mhz(self) -> int:
        return RU_BANDWIDTH_MHZ[self.station_count]


@dataclass(frozen=True)
class BerTable:
    """SNR rows (ascending) each holding one error rate per MCS."""

    snr_db: tuple[float, ...]
    ber: tuple[tuple[float, ...], ...]
    bandwidth_mhz: int = 160

    def __post_init__(self):
        if len(self.snr_db) == 0:
            raise TableError("BER table has no rows")
        if len(self.snr_db) != len(self.ber):
            raise TableError("snr_db and ber row counts differ")
        for a, b in zip(self.snr_db, self.snr_db[1:]):
            if a == b:
                raise TableError(f"duplicate SNR row {a}")
            if b < a:
                raise TableError("SNR rows must be sorted ascending")
        for snr, row in zip(self.snr_db, self.ber):
            if len(row) != NUM_MCS:
                raise TableError(f"row {snr} has {len(row)} values, expected {NUM_MCS}")
            if any(not 0.0 <= v <= 1.0 for v in row):
                raise TableError(f"row {snr} has a value outside [0, 1]")
            if any(row[m] > row[m + 1] for m in range(NUM_MCS - 1)):
                raise TableError(f"row {snr}: BER must be non-decreasing in MCS")
        for m in range(NUM_MCS):
            col = [row[m] for row in self.ber]
            if any(col[i + 1] > col[i] for i in range(len(col) - 1)):
                raise TableError(f"MCS {m}: BER must be non-increasing in SNR")

    @property
    def min_snr(self) -> float:
        return self.snr_db[0]

    def row(self, snr_db: float) -> tuple[float, ...]:
        """BER row of the largest table SNR not above ``snr_db``."""
        i = bisect.bisect_right(self.snr_db, snr_db) - 1
        if i < 0:
            raise ChannelUnusableError(
                f"SNR {snr_db} dB is below the smallest usable row ({self.min_snr} dB) "
                f"for the {self.bandwidth_mhz} MHz table"
            )
        return self.ber[i]


# (ul_rate, ul_preamble, dl_rate, dl_preamble, legacy_rate, legacy_preamble) per MCS
_PHY_ROWS = {
    4: [
        (68.1, 64.8, 72.1, 72.8, 48.0, 20.0),
        (136.1, 64.8, 144.1, 72.8, 48.0, 20.0),
        (204.2, 64.8, 216.2, 68.8, 48.0, 20.0),
        (272.2, 64.8, 288.2, 68.8, 48.0, 20.0),
        (408.3, 64.8, 432.4, 68.8, 48.0, 20.0),
        (544.4, 64.8, 576.5, 68.8, 48.0, 20.0),
        (612.5, 64.8, 648.5, 68.8, 48.0, 20.0),
        (680.6, 64.8, 720.6, 68.8, 48.0, 20.0),
        (816.7, 64.8, 864.7, 68.8, 48.0, 20.0),
        (907.4, 64.8, 960.7, 68.8, 48.0, 20.0),
        (1020.8, 64.8, 1080.4, 68.8, 48.0, 20.0),
        (1134.2, 64.8, 1201.0, 68.8, 48.0, 20.0),
    ],
    8: [
        (34.0, 64.8, 36.0, 76.8, 36.0, 20.0),
        (68.1, 64.8, 72.1, 76.8, 48.0, 20.0),
        (102.1, 64.8, 108.1, 72.8, 48.0, 20.0),
        (136.1, 64.8, 144.1, 72.8, 48.0, 20.0),
        (204.2, 64.8, 216.2, 68.8, 48.0, 20.0),
        (272.2, 64.8, 288.2, 68.8, 48.0, 20.0),
        (306.3, 64.8, 324.3, 68.8, 48.0, 20.0),
        (340.3, 64.8, 360.3, 68.8, 48.0, 20.0),
        (408.3, 64.8, 432.4, 68.8, 48.0, 20.0),
        (453.7, 64.8, 480.4, 68.8, 48.0, 20.0),
        (510.4, 64.8, 540.4, 68.8, 48.0, 20.0),
        (567.1, 64.8, 600.4, 68.8, 48.0, 20.0),
    ],
    16: [
        (16.3, 64.8, 17.2, 84.8, 12.0, 20.0),
        (32.5, 64.8, 34.4, 84.8, 12.0, 20.0),
        (48.8, 64.8, 51.6, 76.8, 24.0, 20.0),
        (65.0, 64.8, 68.8, 76.8, 48.0, 20.0),
        (97.5, 64.8, 103.2, 72.8, 48.0, 20.0),
        (130.0, 64.8, 137.6, 72.8, 48.0, 20.0),
        (146.3, 64.8, 154.9, 72.8, 48.0, 20.0),
        (162.5, 64.8, 172.1, 72.8, 48.0, 20.0),
        (195.0, 64.8, 206.5, 72.8, 48.0, 20.0),
        (216.7, 64.8, 229.4, 72.8, 48.0, 20.0),
        (243.8, 64.8, 258.1, 72.8, 48.0, 20.0),
        (270.8, 64.8, 286.8, 72.8, 48.0, 20.0),
    ],
    32: [
        (8.1, 64.8, 8.6, 104.8, 6.0, 20.0),
        (16.3, 64.8, 17.2, 104.8, 12.0, 20.0),
        (24.4, 64.8, 25.8, 84.8, 24.0, 20.0),
        (32.5, 64.8, 34.4, 84.8, 24.0, 20.0),
        (48.8, 64.8, 51.6, 80.8, 48.0, 20.0),
        (65.0, 64.8, 68.8, 80.8, 48.0, 20.0),
        (73.1, 64.8, 77.4, 80.8, 48.0, 20.0),
        (81.3, 64.8, 86.0, 80.8, 48.0, 20.0),
        (97.5, 64.8, 103.2, 80.8, 48.0, 20.0),
        (108.3, 64.8, 114.7, 80.8, 48.0, 20.0),
        (121.9, 64.8, 129.0, 80.8, 48.0, 20.0),
        (135.4, 64.8, 143.4, 80.8, 48.0, 20.0),
    ],
}

# 160 MHz RU, one spatial stream
_BER_160_ROWS = [
    (10.2, [0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]),
    (13.6, [0, 0, 0.4188, 1, 1, 1, 1, 1, 1, 1, 1, 1]),
    (14.6, [0, 0, 0.0003, 1, 1, 1, 1, 1, 1, 1, 1, 1]),
    (16.4, [0, 0, 0, 0.4973, 1, 1, 1, 1, 1, 1, 1, 1]),
    (17.5, [0, 0, 0, 0.0005, 1, 1, 1, 1, 1, 1, 1, 1]),
    (19.7, [0, 0, 0, 0, 0.5970, 1, 1, 1, 1, 1, 1, 1]),
    (20.1, [0, 0, 0, 0, 0.1417, 1, 1, 1, 1, 1, 1, 1]),
    (24.7, [0, 0, 0, 0, 0, 0.0010, 0.832, 1, 1, 1, 1, 1]),
    (25.9, [0, 0, 0, 0, 0, 0, 0.0022, 1, 1, 1, 1, 1]),
    (27.1, [0, 0, 0, 0, 0, 0, 0, 0.0749, 1, 1, 1, 1]),
    (30.2, [0, 0, 0, 0, 0, 0, 0, 0, 0.6457, 1, 1, 1]),
    (31.7, [0, 0, 0, 0, 0, 0, 0, 0, 0, 0.9412, 1, 1]),
    (32.5, [0, 0, 0, 0, 0, 0, 0, 0, 0, 0.0987, 1, 1]),
    (33.5, [0, 0, 0, 0, 0, 0, 0, 0, 0, 0.0005, 0.4958, 1]),
    (33.6, [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0.3696, 1]),
    (34.0, [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0.0222, 1]),
    (35.1, [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0.6595]),
    (36.6, [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
]


def default_phy_table(stations: int) -> PhyTable:
    if stations not in _PHY_ROWS:
        raise TableError(f"no embedded PHY table for {stations} stations; use one of {STATION_COUNTS}")
    entries = tuple(McsEntry(m, *map(float, row)) for m, row in enumerate(_PHY_ROWS[stations]))
    return PhyTable(stations, entries)


def default_ber_table() -> BerTable:
    """The embedded 160 MHz SNR/BER table."""
    return BerTable(
        snr_db=tuple(s for s, _ in _BER_160_ROWS),
        ber=tuple(tuple(float(v) for v in row) for _, row in _BER_160_ROWS),
        bandwidth_mhz=160,
    )


def lookup_mcs(table: PhyTable, mcs: int) -> McsEntry:
    if not 0 <= mcs < NUM_MCS:
        raise ValueError(f"MCS index must be in 0..{NUM_MCS - 1}, got {mcs}")
    return table.entries[mcs]


def lookup_ber(table: BerTable, snr_db: float, mcs: int) -> float:
    """Floor step lookup: the row with the largest SNR <= ``snr_db``."""
    if not 0 <= mcs < NUM_MCS:
        raise ValueError(f"MCS index must be in 0..{NUM_MCS - 1}, got {mcs}")
    return table.row(snr_db)[mcs]


# -- CSV I/O ---------------------------------------------------------------

def _read_rows(source) -> tuple[list[str], list[list[str]]]:
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    else:
        rows = [r for r in csv.reader(source) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise TableError("empty table file")
    return [h.strip() for h in rows[0]], rows[1:]


def _floats(row: Sequence[str], n: int, where: str) -> list[float]:
    if len(row) != n:
        raise TableError(f"{where}: expected {n} columns, got {len(row)}")
    try:
        return [float(v) for v in row]
    except ValueError as exc:
        raise TableError(f"{where}: {exc}") from None


def load_phy_table(source=None, stations: int = 4) -> PhyTable:
    """Load a PHY table from CSV, or return the embedded one when ``source`` is None."""
    if source is None:
        return default_phy_table(stations)
    header, rows = _read_rows(source)
    if header != PHY_CSV_HEADER:
        raise TableError(f"PHY table header must be {','.join(PHY_CSV_HEADER)}")
    if len(rows) != NUM_MCS:
        raise TableError(f"PHY table must have {NUM_MCS} data rows, got {len(rows)}")
    entries = []
    for i, row in enumerate(rows):
        vals = _floats(row, len(PHY_CSV_HEADER), f"row {i + 1}")
        if vals[0] != int(vals[0]):
            raise TableError(f"row {i + 1}: non-integer MCS index")
        entries.append(McsEntry(int(vals[0]), *vals[1:]))
    return PhyTable(stations, tuple(entries))


def load_ber_table(source=None, bandwidth_mhz: int = 160) -> BerTable:
    """Load a BER table from CSV, or return the embedded 160 MHz one."""
    if source is None:
        if bandwidth_mhz != 160:
            raise TableError(
                f"no embedded BER table for {bandwidth_mhz} MHz; supply one or "
                "opt into reusing the 160 MHz table"
            )
        return default_ber_table()
    header, rows = _read_rows(source)
    if header != BER_CSV_HEADER:
        raise TableError(f"BER table header must be {','.join(BER_CSV_HEADER)}")
    parsed = [_floats(r, len(BER_CSV_HEADER), f"row {i + 1}") for i, r in enumerate(rows)]
    return BerTable(
        snr_db=tuple(r[0] for r in parsed),
        ber=tuple(tuple(r[1:]) for r in parsed),
        bandwidth_mhz=bandwidth_mhz,
    )


def _fmt(v: float) -> str:
    return repr(float(v))


def dump_phy_table(table: PhyTable, dest=None) -> str:
    """Write ``table`` as CSV; returns the text (also written to ``dest`` if given)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PHY_CSV_HEADER)
    for e in table.entries:
        w.writerow([e.mcs_index] + [_fmt(v) for v in (
            e.ul_rate, e.ul_preamble, e.dl_rate, e.dl_preamble, e.legacy_rate, e.legacy_preamble)])
    return _finish(buf, dest)


def dump_ber_table(table: BerTable, dest=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BER_CSV_HEADER)
    for snr, row in zip(table.snr_db, table.ber):
        w.writerow([_fmt(snr)] + [_fmt(v) for v in row])
    return _finish(buf, dest)


def _finish(buf: io.StringIO, dest) -> str:
    text = buf.getvalue()
    if dest is not None:
        with open(dest, "w", newline="") as fh:
            fh.write(text)
    return text


def ber_rows(table: BerTable) -> Iterable[tuple[float, tuple[float, ...]]]:
    return zip(table.snr_db, table.ber)
