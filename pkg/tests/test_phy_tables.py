import io

import pytest

from axtcp.phy_tables import (BER_CSV_HEADER, NUM_MCS, PHY_CSV_HEADER, ChannelUnusableError,
                              TableError, default_ber_table, default_phy_table, dump_ber_table,
                              dump_phy_table, load_ber_table, load_phy_table, lookup_ber, lookup_mcs)


def test_lookup_mcs_4_stations_top_row():
    e = lookup_mcs(default_phy_table(4), 11)
    assert (e.ul_rate, e.dl_rate, e.ul_preamble, e.dl_preamble, e.legacy_rate) == \
        (1134.2, 1201.0, 64.8, 68.8, 48.0)


def test_lookup_mcs_32_stations_bottom_row():
    e = lookup_mcs(default_phy_table(32), 0)
    assert (e.ul_rate, e.dl_rate, e.dl_preamble, e.legacy_rate) == (8.1, 8.6, 104.8, 6.0)


@pytest.mark.parametrize("mcs", [-1, 12])
def test_lookup_mcs_out_of_range(mcs):
    with pytest.raises(ValueError):
        lookup_mcs(default_phy_table(4), mcs)


@pytest.mark.parametrize("stations", [4, 8, 16, 32])
def test_embedded_phy_invariants(stations):
    t = default_phy_table(stations)
    assert [e.mcs_index for e in t.entries] == list(range(NUM_MCS))
    for e in t.entries:
        assert e.dl_rate >= e.ul_rate > 0
        assert e.legacy_preamble == 20.0


def test_bandwidth_mapping():
    assert [default_phy_table(n).bandwidth_mhz for n in (4, 8, 16, 32)] == [160, 80, 40, 20]


def test_lookup_ber_examples():
    t = default_ber_table()
    assert lookup_ber(t, 36.6, 11) == 0
    assert lookup_ber(t, 35.1, 11) == 0.6595
    with pytest.raises(ChannelUnusableError):
        lookup_ber(t, 9.0, 0)


def test_lookup_ber_is_floor_step():
    t = default_ber_table()
    # 36.5 sits between the 35.1 and 36.6 rows
    assert lookup_ber(t, 36.5, 11) == 0.6595
    assert lookup_ber(t, 100.0, 11) == 0
    assert lookup_ber(t, 10.2, 0) == 0


def test_embedded_ber_rows_monotone_in_mcs():
    for row in default_ber_table().ber:
        assert all(row[m] <= row[m + 1] for m in range(NUM_MCS - 1))


def test_lookup_ber_pure():
    t = default_ber_table()
    assert [lookup_ber(t, 33.5, 9) for _ in range(3)] == [0.0005] * 3


def test_no_file_returns_embedded():
    assert load_phy_table(None, 4) == default_phy_table(4)
    assert load_ber_table(None) == default_ber_table()


def test_no_embedded_ber_for_narrow_rus():
    with pytest.raises(TableError):
        load_ber_table(None, bandwidth_mhz=80)


@pytest.mark.parametrize("stations", [4, 8, 16, 32])
def test_phy_round_trip(stations, tmp_path):
    t = default_phy_table(stations)
    path = tmp_path / "phy.csv"
    dump_phy_table(t, path)
    assert load_phy_table(path, stations) == t


def test_ber_round_trip(tmp_path):
    path = tmp_path / "ber.csv"
    dump_ber_table(default_ber_table(), path)
    assert load_ber_table(path) == default_ber_table()


def _ber_csv(rows):
    lines = [",".join(BER_CSV_HEADER)] + [",".join(str(v) for v in r) for r in rows]
    return io.StringIO("\n".join(lines) + "\n")


def test_ber_schema_error_on_11_columns():
    bad = io.StringIO(",".join(BER_CSV_HEADER[:-1]) + "\n" + ",".join(["20"] + ["0"] * 11) + "\n")
    with pytest.raises(TableError):
        load_ber_table(bad)


def test_ber_short_row_rejected():
    with pytest.raises(TableError):
        load_ber_table(_ber_csv([[20] + [0] * 11]))


def test_ber_increasing_in_snr_rejected():
    rows = [[20] + [0] * 11 + [0.1], [25] + [0] * 11 + [0.2]]
    with pytest.raises(TableError, match="non-increasing in SNR"):
        load_ber_table(_ber_csv(rows))


def test_ber_decreasing_in_mcs_rejected():
    with pytest.raises(TableError, match="non-decreasing in MCS"):
        load_ber_table(_ber_csv([[20, 0.5] + [0] * 11]))


def test_ber_duplicate_rows_rejected():
    rows = [[20] + [0] * 12, [20] + [0] * 12]
    with pytest.raises(TableError, match="duplicate"):
        load_ber_table(_ber_csv(rows))


def test_phy_schema_errors():
    header = ",".join(PHY_CSV_HEADER)
    rows = [f"{m},1,64.8,1,68.8,6,20" for m in range(11)]
    with pytest.raises(TableError, match="12 data rows"):
        load_phy_table(io.StringIO(header + "\n" + "\n".join(rows) + "\n"))
    with pytest.raises(TableError, match="header"):
        load_phy_table(io.StringIO("mcs,rate\n0,1\n"))


def test_phy_gap_rejected():
    header = ",".join(PHY_CSV_HEADER)
    rows = [f"{m},1,64.8,1,68.8,6,20" for m in list(range(11)) + [12]]
    with pytest.raises(TableError, match="no gaps"):
        load_phy_table(io.StringIO(header + "\n" + "\n".join(rows) + "\n"))
