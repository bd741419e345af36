"""
Simulation configuration.

Every field of :class:`SimConfig` has a default that reproduces the
reference deployment: seven hexagonal cells, three UEs per cell, five BS
antennas, five IRS elements per surface.
"""
import dataclasses
import hashlib
import json
import os
import typing
from dataclasses import dataclass, field

from . import err
from .channel import MobilityParams, PathLossParams
from .constants import SCHEME
from .numerics import db2lin
from .optionfile import Parser

DEFAULT_FILE = "pyirsdrl.cnf"
DEFAULT_GROUP = "irs-sim"

# fields that change where or how fast a run goes, never what it computes
_VOLATILE = {"volatile": True}


@dataclass(frozen=True)
class SimConfig(object):
    # topology
    cells: int = 7
    ues_per_cell: int = 3
    antennas: int = 5
    irs_elements: int = 5
    bs_spacing: float = 100.0
    bs_height: float = 10.0
    ue_height: float = 1.5
    irs_offset: float = 10.0
    irs_height: float = 10.0
    irs_azimuth_deg: float = 0.0

    # channel
    speed_kmh: float = 3.0
    rho: typing.Optional[float] = None
    carrier_hz: float = 2.5e9
    slot_s: float = 5e-3
    noise_dbm: float = -114.0
    bandwidth: float = 1.0
    beta0_db: float = -30.0
    d0: float = 1.0
    alpha_ub: float = 3.75
    alpha_ui: float = 2.2
    alpha_ib: float = 1.0
    alpha_ii: float = 2.0

    # design sets
    p_min_dbm: float = 10.0
    p_max_dbm: float = 30.0
    power_levels: int = 10
    combiner_size: int = 30
    irs_size: int = 30
    codebook_seed: typing.Optional[int] = None

    # neighbor sets
    interfering: int = 2
    interfered: int = 2
    neighbor_period: int = 1

    # agents
    gamma: float = 0.7
    epsilon0: float = 0.6
    epsilon_min: float = 0.005
    epsilon_decay: float = 1.0 - 10.0 ** -3.5
    batch_size: int = 10
    pool_size: int = 300
    align_period: int = 50
    learning_rate: float = 1e-3
    rms_decay: float = 0.9
    rms_eps: float = 1e-8
    loss: str = "mse"
    huber_delta: float = 1.0
    hidden_layers: tuple = ()

    # run
    scheme: str = SCHEME.DQN2
    cell_schemes: tuple = ()
    slots: int = 20000
    ma_window: int = 1000
    seed: int = 0
    out_dir: str = field(default="out", metadata=_VOLATILE)
    dump_topology: bool = field(default=False, metadata=_VOLATILE)
    dump_codebooks: bool = field(default=False, metadata=_VOLATILE)
    workers: int = field(default=1, metadata=_VOLATILE)
    checkpoint_dir: typing.Optional[str] = field(default=None, metadata=_VOLATILE)
    resume_from: typing.Optional[str] = None

    def __post_init__(self):
        for name in ("cells", "ues_per_cell", "antennas", "irs_elements", "combiner_size",
                     "irs_size", "neighbor_period", "align_period", "ma_window", "workers"):
            _require(getattr(self, name) >= 1, "%s must be >= 1" % name)
        for name in ("bs_spacing", "slot_s", "carrier_hz", "bandwidth", "d0",
                     "alpha_ub", "alpha_ui", "alpha_ib", "alpha_ii", "learning_rate",
                     "rms_eps", "huber_delta"):
            _require(getattr(self, name) > 0, "%s must be positive" % name)
        _require(self.speed_kmh >= 0, "speed_kmh must be non-negative")
        _require(self.rho is None or 0.0 <= self.rho <= 1.0, "rho must lie in [0, 1]")
        _require(self.power_levels >= 2, "power_levels must be >= 2")
        _require(self.p_min_dbm < self.p_max_dbm, "p_min_dbm must be below p_max_dbm")
        _require(self.interfering >= 0 and self.interfered >= 0,
                 "neighbor set sizes must be non-negative")
        _require(0.0 <= self.gamma < 1.0, "gamma must lie in [0, 1)")
        _require(0.0 <= self.epsilon_min <= self.epsilon0 <= 1.0,
                 "need 0 <= epsilon_min <= epsilon0 <= 1")
        _require(0.0 < self.epsilon_decay <= 1.0, "epsilon_decay must lie in (0, 1]")
        _require(1 <= self.batch_size <= self.pool_size, "need 1 <= batch_size <= pool_size")
        _require(0.0 <= self.rms_decay < 1.0, "rms_decay must lie in [0, 1)")
        _require(self.loss in ("mse", "huber"), "loss must be 'mse' or 'huber'")
        _require(all(int(h) >= 1 for h in self.hidden_layers), "hidden layer widths must be >= 1")
        _require(self.slots >= 0, "slots must be non-negative")
        _require(self.scheme in SCHEME.ALL, "unknown scheme %r" % (self.scheme,))
        if self.cell_schemes:
            _require(len(self.cell_schemes) == self.cells,
                     "cell_schemes needs one entry per cell")
            unknown = [s for s in self.cell_schemes if s not in SCHEME.ALL]
            _require(not unknown, "unknown schemes %r" % (unknown,))

    @property
    def sigma2(self):
        """Noise power, mW."""
        return db2lin(self.noise_dbm)

    @property
    def p_min(self):
        return db2lin(self.p_min_dbm)

    @property
    def p_max(self):
        return db2lin(self.p_max_dbm)

    @property
    def path_loss(self):
        return PathLossParams(self.beta0_db, self.d0, self.alpha_ub, self.alpha_ui,
                              self.alpha_ib, self.alpha_ii)

    @property
    def mobility(self):
        return MobilityParams(self.speed_kmh, self.carrier_hz, self.slot_s, self.rho)

    def cell_scheme(self, cell):
        if self.cell_schemes:
            return self.cell_schemes[cell]
        return self.scheme

    def replace(self, **changes):
        try:
            return dataclasses.replace(self, **_coerce_all(changes))
        except TypeError as e:
            raise err.ConfigError(str(e))

    def to_dict(self, volatile=True):
        return {f.name: _plain(getattr(self, f.name)) for f in dataclasses.fields(self)
                if volatile or not f.metadata.get("volatile")}

    def config_hash(self):
        """SHA-256 of the canonical JSON of every field that affects results."""
        canonical = json.dumps(self.to_dict(volatile=False), sort_keys=True,
                               separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    @classmethod
    def template(cls):
        """The full default configuration as a plain dict."""
        return cls().to_dict()

    @classmethod
    def load(cls, read_default_file=None, read_default_group=None, **overrides):
        """
        Build a configuration from defaults, an optional file and explicit
        overrides, in increasing order of precedence.

        :param read_default_file: JSON file (``*.json``) or option file
            read under ``[irs-sim]``
        :param read_default_group: group to read from the file
        :param overrides: field values; None means "not given"
        """
        if read_default_group and not read_default_file:
            read_default_file = DEFAULT_FILE
        values = {}
        if read_default_file:
            values.update(_read_file(os.path.expanduser(read_default_file),
                                     read_default_group or DEFAULT_GROUP))
        values.update({k: v for k, v in overrides.items() if v is not None})
        unknown = sorted(set(values) - _FIELDS.keys())
        if unknown:
            raise err.ConfigError("unknown configuration keys: %s" % ", ".join(unknown))
        try:
            return cls(**_coerce_all(values))
        except (TypeError, ValueError) as e:
            raise err.ConfigError(str(e))


def _require(condition, message):
    if not condition:
        raise err.ConfigError(message)


def _plain(value):
    if isinstance(value, tuple):
        return list(value)
    return value


def _read_file(path, group):
    if not os.path.exists(path):
        raise err.ConfigError("configuration file %s does not exist" % path)
    if path.endswith(".json"):
        try:
            with open(path) as f:
                data = json.load(f)
        except (OSError, ValueError) as e:
            raise err.ConfigError("cannot read %s: %s" % (path, e))
        if not isinstance(data, dict):
            raise err.ConfigError("%s must hold a JSON object" % path)
        if isinstance(data.get(group), dict):
            data = data[group]
        return data
    cfg = Parser()
    try:
        cfg.read(path)
    except Exception as e:
        raise err.ConfigError("cannot read %s: %s" % (path, e))
    if not cfg.has_section(group):
        raise err.ConfigError("%s has no [%s] group" % (path, group))
    return cfg.group(group)


_FIELDS = {f.name: f for f in dataclasses.fields(SimConfig)}

_TRUE = ("1", "true", "yes", "on")
_FALSE = ("0", "false", "no", "off")


def _coerce_bool(name, value):
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.strip().lower() in _TRUE + _FALSE:
        return value.strip().lower() in _TRUE
    raise err.ConfigError("%s must be a boolean, got %r" % (name, value))


def _coerce_tuple(name, value):
    if isinstance(value, str):
        value = [v.strip() for v in value.split(",") if v.strip()]
    if not isinstance(value, (list, tuple)):
        raise err.ConfigError("%s must be a list, got %r" % (name, value))
    items = []
    for v in value:
        if isinstance(v, str) and v.lstrip("-").isdigit():
            v = int(v)
        items.append(v)
    return tuple(items)


def _coerce(name, value):
    kind = _FIELDS[name].type
    if typing.get_origin(kind) is typing.Union:
        if value is None or (isinstance(value, str) and value.strip().lower() in ("", "none", "null")):
            return None
        kind = [t for t in typing.get_args(kind) if t is not type(None)][0]
    if kind is bool:
        return _coerce_bool(name, value)
    if kind is tuple:
        return _coerce_tuple(name, value)
    if kind is str:
        if not isinstance(value, str):
            raise err.ConfigError("%s must be a string, got %r" % (name, value))
        return value
    if isinstance(value, bool):
        raise err.ConfigError("%s must be a number, got %r" % (name, value))
    try:
        if kind is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        return float(value)
    except (TypeError, ValueError):
        raise err.ConfigError("%s must be %s, got %r" % (name, kind.__name__, value))


def _coerce_all(values):
    unknown = sorted(set(values) - _FIELDS.keys())
    if unknown:
        raise err.ConfigError("unknown configuration keys: %s" % ", ".join(unknown))
    return {name: _coerce(name, value) for name, value in values.items()}
