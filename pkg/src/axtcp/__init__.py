"""Monte-Carlo simulator of IEEE 802.11ax DL multi-user TCP with TCP-aware TXOP scheduling."""

from .aggregation import (FrameArithmetic, MpduPlan, PackingResult, max_acks_per_station,
                          max_msdus_per_mpdu, mpdu_bits, msdu_on_air_size, n_max,
                          optimal_segments_per_mpdu, plan_ack_ampdu)
from .airtime import TimingConstants, legacy_frame_duration, mu_ppdu_duration
from .mcs_select import dl_goodput_by_mcs, select_dl_mcs, select_mcs_pair, select_ul_mcs
from .phy_tables import (BerTable, ChannelUnusableError, McsEntry, PhyTable, TableError,
                         default_ber_table, default_phy_table, dump_ber_table, dump_phy_table,
                         load_ber_table, load_phy_table, lookup_ber, lookup_mcs)
from .sim_engine import Metrics, ScenarioConfig, SweepRow, make_rng, resolve, simulate, sweep
from .txop import (ConfigurationError, ControlFrameSizes, NonTerminatingTxop, StationStream,
                   TracePhase, TxopContext, TxopRecord, build_dl_ampdu, run_txop,
                   strategy_terminated)
from .output import emit_plot_data, read_trace, series_key, write_results, write_trace

__version__ = "0.1.0"
