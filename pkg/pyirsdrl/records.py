"""
Per-slot records of a run and the files they end up in.
"""
import csv
import json
import os
from collections import namedtuple

import arrow
import numpy as np

from . import converters, err

UE_COLUMNS = ("slot", "cell", "ue", "sinr_db", "rate_bps_hz", "power_idx", "combiner_idx")
BS_COLUMNS = ("slot", "cell", "reward", "penalty_sum", "epsilon", "loss", "irs_idx")

#: column -> decoder name, see converters.decoders
SCHEMA = {
    "slot": "int", "cell": "int", "ue": "int",
    "sinr_db": "float", "rate_bps_hz": "float",
    "power_idx": "int", "combiner_idx": "int", "irs_idx": "int",
    "reward": "float", "penalty_sum": "float", "epsilon": "float", "loss": "float",
}

UERecord = namedtuple('UERecord', UE_COLUMNS)
BSRecord = namedtuple('BSRecord', BS_COLUMNS)

SUMMARY_FILE = "summary.json"
TIMING_FILE = "timing.json"
TOPOLOGY_FILE = "topology.json"
CODEBOOK_FILE = "codebooks.json"


def sinr_db(sinr):
    return 10.0 * np.log10(sinr) if sinr > 0 else float("-inf")


def slot_records(result):
    """Split one slot's result into UE rows and BS rows."""
    sinr = result.measurement.sinr
    rates = result.measurement.rates
    variables = result.variables
    L, K = sinr.shape
    ue_rows = [UERecord(result.slot, l, k, float(sinr_db(sinr[l, k])), float(rates[l, k]),
                        int(variables.power_idx[l, k]), int(variables.combiner_idx[l, k]))
               for l in range(L) for k in range(K)]
    bs_rows = [BSRecord(result.slot, l, float(result.rewards[l]), float(result.penalty_sums[l]),
                        result.epsilons[l], result.losses[l], int(variables.irs_idx[l]))
               for l in range(L)]
    return ue_rows, bs_rows


class RecordWriter(object):
    """
    Streams the UE and BS tables of one run to ``<scheme>_ue.csv`` and
    ``<scheme>_bs.csv`` under *out_dir*. Headers are written on open, so a
    run without slots leaves header-only files.
    """

    def __init__(self, out_dir, scheme, mapping=None):
        self.out_dir = out_dir
        self.scheme = scheme
        self.mapping = mapping or converters.encoders
        self.rowcount = 0
        self.ue_path = os.path.join(out_dir, "%s_ue.csv" % scheme)
        self.bs_path = os.path.join(out_dir, "%s_bs.csv" % scheme)
        try:
            self._ue_file = open(self.ue_path, "w", newline="")
            self._bs_file = open(self.bs_path, "w", newline="")
        except OSError as e:
            raise err.OperationalError("cannot write records to %s: %s" % (out_dir, e))
        self._ue = csv.writer(self._ue_file, lineterminator="\n")
        self._bs = csv.writer(self._bs_file, lineterminator="\n")
        self._ue.writerow(UE_COLUMNS)
        self._bs.writerow(BS_COLUMNS)

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        del exc_info
        self.close()

    @property
    def closed(self):
        return self._ue is None

    def _check_open(self):
        if self.closed:
            raise err.InterfaceError("RecordWriter closed")

    def write_ue_rows(self, rows):
        self._check_open()
        for row in rows:
            self._ue.writerow(converters.escape_row(row, self.mapping))
            self.rowcount += 1

    def write_bs_rows(self, rows):
        self._check_open()
        for row in rows:
            self._bs.writerow(converters.escape_row(row, self.mapping))
            self.rowcount += 1

    def write_slot(self, result):
        ue_rows, bs_rows = slot_records(result)
        self.write_ue_rows(ue_rows)
        self.write_bs_rows(bs_rows)

    def close(self):
        if self.closed:
            return
        try:
            self._ue_file.close()
            self._bs_file.close()
        finally:
            self._ue = self._bs = None


def read_records(path):
    """Read a UE or BS table back into namedtuples with decoded fields."""
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = tuple(next(reader))
        if header == UE_COLUMNS:
            record = UERecord
        elif header == BS_COLUMNS:
            record = BSRecord
        else:
            raise err.DataError("%s is not a record table" % path)
        return [record(*(converters.convert_column_data(SCHEMA[c], v)
                         for c, v in zip(header, row)))
                for row in reader]


def moving_average(series, window=1000):
    """output[n] = mean(series[max(0, n - window + 1) .. n])."""
    if window < 1:
        raise err.DataError("window must be >= 1, got %r" % (window,))
    series = np.asarray(series, dtype=float)
    if series.size == 0:
        return series
    sums = np.cumsum(series)
    out = np.empty_like(series)
    out[:window] = sums[:window] / np.arange(1, min(window, series.size) + 1)
    if series.size > window:
        out[window:] = (sums[window:] - sums[:-window]) / window
    return out


def slot_mean_rates(ue_records):
    """Average UE rate per slot, in slot order."""
    by_slot = {}
    for r in ue_records:
        by_slot.setdefault(r.slot, []).append(r.rate_bps_hz)
    return [float(np.mean(by_slot[s])) for s in sorted(by_slot)]


def write_json(path, data):
    try:
        with open(path, "w") as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write("\n")
    except OSError as e:
        raise err.OperationalError("cannot write %s: %s" % (path, e))


def read_json(path):
    with open(path) as f:
        return json.load(f)


def build_summary(config, scheme, mean_rates, reward_sums, exchanged):
    """
    The deterministic run summary.

    :param mean_rates: average UE rate of every slot
    :param reward_sums: per-cell sum of rewards over the run
    """
    slots = len(mean_rates)
    averaged = moving_average(mean_rates, config.ma_window)
    return {
        "scheme": scheme,
        "slots": slots,
        "final_ma_rate": float(averaged[-1]) if slots else None,
        "mean_rate_all_ue": float(np.mean(mean_rates)) if slots else None,
        "config_hash": config.config_hash(),
        "cell_reward_mean": [float(s) / slots if slots else None for s in reward_sums],
        "exchanged_reals_per_cell": exchanged,
        "config": config.to_dict(volatile=False),
    }


def write_outputs(out_dir, summary, started, finished):
    """Write ``summary.json`` and the wall-clock data to ``timing.json``."""
    write_json(os.path.join(out_dir, SUMMARY_FILE), summary)
    write_json(os.path.join(out_dir, TIMING_FILE), {
        "runtime_s": (finished - started).total_seconds(),
        "started_at": started.isoformat(),
        "finished_at": finished.isoformat(),
    })


def now():
    return arrow.utcnow()
