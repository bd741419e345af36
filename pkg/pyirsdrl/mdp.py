"""
Per-BS agent environment: network variables, measurements, neighbor sets,
information exchange, state construction, index-gradient actions, reward
and penalty.

Scalar effective powers are carried as a (L, K, L, K) array ``S`` with
``S[i, j, l, k] = |z_{l,k}^H h_{(i,j),l}|^2``. BS ``l`` measures the slice
``S[:, :, l, :]`` only; everything below reads that slice or what other
BSs send it.
"""
import logging
import math
from collections import namedtuple
from dataclasses import dataclass, replace

import numpy as np

from . import err
from .signal_model import achievable_rate, effective_channels, scalar_powers, sinr_all

logger = logging.getLogger(__name__)

#: Channel powers enter the state as clip((10 log10 x + POWER_FLOOR_DB) / POWER_SPAN_DB, 0, 2).
POWER_FLOOR_DB = 140.0
POWER_SPAN_DB = 70.0
#: Cell index used for neighbor slots left empty when L - 1 < B.
NO_CELL = -1


def _frozen(a, dtype=None):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class NetworkVariables(object):
    """
    Indices of every UE power, BS combiner and IRS beamformer, resolved
    against a :class:`~pyirsdrl.codebook.DesignSpace` on access.

    :ivar power_idx: (L, K) indices into the power set
    :ivar combiner_idx: (L, K) indices into the combiner codebook
    :ivar irs_idx: (L,) indices into the IRS codebook
    :ivar irs_enabled: (L,) False switches IRS l off (all-zero beamformer)
    """
    space: object
    power_idx: np.ndarray
    combiner_idx: np.ndarray
    irs_idx: np.ndarray
    irs_enabled: np.ndarray

    def __post_init__(self):
        n_power, n_combiner, n_irs = self.space.sizes
        for name, size in (("power_idx", n_power), ("combiner_idx", n_combiner),
                           ("irs_idx", n_irs)):
            a = _frozen(getattr(self, name), dtype=int)
            if np.any(a < 0) or np.any(a >= size):
                raise err.DataError("%s out of range [0, %d)" % (name, size))
            object.__setattr__(self, name, a)
        if self.power_idx.shape != self.combiner_idx.shape:
            raise err.DimensionError("power and combiner indices differ in shape")
        if self.irs_idx.shape != (self.power_idx.shape[0],):
            raise err.DimensionError("need one IRS index per cell")
        object.__setattr__(self, "irs_enabled", _frozen(self.irs_enabled, dtype=bool))

    @classmethod
    def create(cls, space, power_idx, combiner_idx, irs_idx, irs_enabled=None):
        if irs_enabled is None:
            irs_enabled = np.ones(len(irs_idx), dtype=bool)
        return cls(space, power_idx, combiner_idx, irs_idx, irs_enabled)

    @property
    def shape(self):
        return self.power_idx.shape

    @property
    def powers(self):
        return self.space.power_set.values[self.power_idx]

    @property
    def combiners(self):
        return self.space.combiners.codewords[self.combiner_idx]

    @property
    def phi(self):
        return self.space.irs.codewords[self.irs_idx] * self.irs_enabled[:, None]

    def with_cell(self, cell, power_idx=None, combiner_idx=None, irs_idx=None):
        """Copy with cell *cell*'s indices replaced where given."""
        changes = {}
        if power_idx is not None:
            a = self.power_idx.copy()
            a[cell] = power_idx
            changes["power_idx"] = a
        if combiner_idx is not None:
            a = self.combiner_idx.copy()
            a[cell] = combiner_idx
            changes["combiner_idx"] = a
        if irs_idx is not None:
            a = self.irs_idx.copy()
            a[cell] = irs_idx
            changes["irs_idx"] = a
        return replace(self, **changes)

    def local_indices(self, cell):
        return (self.power_idx[cell].tolist(), self.combiner_idx[cell].tolist(),
                int(self.irs_idx[cell]))


def random_variables(space, cells, K, stream, irs_enabled=None):
    """Uniformly random indices for every variable."""
    n_power, n_combiner, n_irs = space.sizes
    return NetworkVariables.create(space,
                                   stream.integers(n_power, size=(cells, K)),
                                   stream.integers(n_combiner, size=(cells, K)),
                                   stream.integers(n_irs, size=cells),
                                   irs_enabled)


@dataclass(frozen=True, eq=False)
class Measurement(object):
    """
    What the BSs observe after one set of variables has been applied.

    :ivar effective: (L, K, L, M) vector effective channels
    :ivar scalars: (L, K, L, K) scalar effective powers
    :ivar sinr: (L, K)
    :ivar rates: (L, K), bits/s/Hz
    """
    effective: np.ndarray
    scalars: np.ndarray
    sinr: np.ndarray
    rates: np.ndarray

    @property
    def norms(self):
        """(L, K, L): ||h_{(i,j),l}||^2, the AGC-measured received powers."""
        return np.sum(np.abs(self.effective) ** 2, axis=-1)

    def sum_rates(self):
        return self.rates.sum(axis=1)

    def is_finite(self):
        return bool(np.all(np.isfinite(self.scalars)) and np.all(np.isfinite(self.rates)))


def measure(channels, variables, sigma2, bandwidth=1.0):
    effective = effective_channels(channels, variables.phi, variables.powers)
    scalars = scalar_powers(variables.combiners, effective)
    sinr = sinr_all(scalars, sigma2)
    return Measurement(effective, scalars, sinr, achievable_rate(sinr, bandwidth))


def measure_with(channels, variables):
    """Scalar powers on *channels* with the given (typically stale) variables."""
    effective = effective_channels(channels, variables.phi, variables.powers)
    return scalar_powers(variables.combiners, effective)


NeighborSets = namedtuple('NeighborSets', 'cell interfering interfered degenerate')
NeighborSets.__doc__ = """\
Dominantly interfering (B1) and interfered (B2) cells of ``cell``; both are
tuples ordered by decreasing power. ``degenerate`` is True when fewer than
B other cells exist."""


def _top_cells(scores, cell, size):
    others = [i for i in range(len(scores)) if i != cell]
    others.sort(key=lambda i: (-scores[i], i))
    return tuple(others[:size])


def neighbor_sets(norms, cell, b1, b2):
    """
    Rank the other cells by aggregate effective-channel power.

    :param norms: (L, K, L) array, ``norms[i, j, l] = ||h_{(i,j),l}||^2``
    :param cell: the agent's cell
    :return: :class:`NeighborSets`; ties go to the lower cell index
    """
    norms = np.asarray(norms, dtype=float)
    if norms.ndim != 3 or norms.shape[0] != norms.shape[2]:
        raise err.DimensionError("norms must have shape (L, K, L), got %r" % (norms.shape,))
    if not np.all(np.isfinite(norms)):
        raise err.DataError("norms must be finite")
    L = norms.shape[0]
    if not 0 <= cell < L:
        raise err.DataError("cell %r out of range" % (cell,))
    incoming = norms[:, :, cell].sum(axis=1)
    outgoing = norms[cell, :, :].sum(axis=0)
    degenerate = L - 1 < max(b1, b2)
    if degenerate:
        logger.debug("cell %d has %d neighbors, fewer than B=%d", cell, L - 1, max(b1, b2))
    return NeighborSets(cell, _top_cells(incoming, cell, b1),
                        _top_cells(outgoing, cell, b2), degenerate)


def all_neighbor_sets(norms, b1, b2):
    return [neighbor_sets(norms, cell, b1, b2) for cell in range(np.shape(norms)[0])]


ExchangeMessage = namedtuple('ExchangeMessage', 'sender receiver scalars penalty')
ExchangeMessage.__doc__ = """\
Sent by BS ``sender`` to BS ``receiver`` where sender is in the receiver's
interfered set: ``scalars[k, j] = |h_{(receiver,k),sender,j}|^2`` and the
penalty P_{receiver,sender}."""


def exchange_overhead(K, b2):
    """Reals a BS receives per slot: K^2 scalar powers plus one penalty per interfered neighbor."""
    return b2 * (K * K + 1)


def exchange_messages(measurement, neighbors, penalties):
    """
    Build every BS's inbox.

    :param neighbors: list of :class:`NeighborSets`, one per cell
    :param penalties: (L, L) array, ``penalties[l, i] = P_{l,i}``
    :return: list of dicts ``{sender: ExchangeMessage}``, one per receiver
    """
    scalars = measurement.scalars
    inboxes = []
    for sets in neighbors:
        receiver = sets.cell
        inbox = {}
        for sender in sets.interfered:
            inbox[sender] = ExchangeMessage(sender, receiver,
                                            scalars[receiver, :, sender, :].copy(),
                                            float(penalties[receiver, sender]))
        inboxes.append(inbox)
    return inboxes


def encode_power(x):
    """Normalized dB encoding of channel powers; x = 0 maps to 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise err.InvalidStateError("channel powers must be finite and non-negative")
    with np.errstate(divide='ignore'):
        db = 10.0 * np.log10(x)
    encoded = np.clip((db + POWER_FLOOR_DB) / POWER_SPAN_DB, 0.0, 2.0)
    return np.where(x > 0, encoded, 0.0)


def state_size(K, b1=2, b2=2):
    """2K^2 + B1(K^2 + 1) + B2(K^2 + 1) + 2K + 2; 6K^2 + 2K + 6 for B1 = B2 = 2."""
    return 2 * K * K + (b1 + b2) * (K * K + 1) + 2 * K + 2


def build_state(cell, previous, current, neighbors, inbox, variables, sum_rate, b1, b2):
    """
    Assemble the state vector of the agent at *cell*.

    Layout, in order:

    1. local powers ``S[cell, j, cell, k]`` at t - T, then the same with
       time-t channels and the t - T variables (K^2 each, row-major in j, k)
    2. for each slot of the interfering set, ``S[i, j, cell, k]`` (K^2),
       then the B1 cell indices
    3. for each slot of the interfered set, the K^2 powers received from
       that neighbor, then the B2 cell indices
    4. K power indices, K combiner indices, the IRS index, the local
       sum-rate at t - T

    :param previous: (L, K, L, K) scalars measured at t - T
    :param current: (L, K, L, K) scalars of time-t channels with old variables
    :param neighbors: :class:`NeighborSets` the exchange at t - T was built on
    :param inbox: ``{sender: ExchangeMessage}`` received at t - T
    :param variables: :class:`NetworkVariables` in force at t - T
    """
    if previous is None or current is None:
        raise err.InvalidStateError("cell %d: measurement missing" % cell)
    K = variables.shape[1]
    empty = np.zeros(K * K)

    parts = [encode_power(previous[cell, :, cell, :]).ravel(),
             encode_power(current[cell, :, cell, :]).ravel()]

    interfering = list(neighbors.interfering[:b1])
    for slot in range(b1):
        if slot < len(interfering):
            parts.append(encode_power(previous[interfering[slot], :, cell, :]).ravel())
        else:
            parts.append(empty)
    parts.append(_padded_indices(interfering, b1))

    interfered = list(neighbors.interfered[:b2])
    for slot in range(b2):
        if slot < len(interfered):
            message = inbox.get(interfered[slot])
            if message is None:
                raise err.InvalidStateError("cell %d: no message from cell %d"
                                            % (cell, interfered[slot]))
            parts.append(encode_power(message.scalars).ravel())
        else:
            parts.append(empty)
    parts.append(_padded_indices(interfered, b2))

    powers, combiners, irs = variables.local_indices(cell)
    parts.append(np.array(powers + combiners + [irs, sum_rate], dtype=float))

    state = np.concatenate(parts)
    if not np.all(np.isfinite(state)):
        raise err.InvalidStateError("cell %d: non-finite state entry" % cell)
    return state


def _padded_indices(cells, size):
    return np.array(list(cells) + [NO_CELL] * (size - len(cells)), dtype=float)


def action_count(arity, slots):
    return arity ** slots


def decode_action(index, arity, slots):
    """
    Little-endian digits of *index* in base *arity*, mapped to gradients:
    {0: -1, 1: +1} for arity 2, {0: -1, 1: 0, 2: +1} for arity 3.
    """
    if arity not in (2, 3):
        raise err.DataError("arity must be 2 or 3, got %r" % (arity,))
    index = int(index)
    if not 0 <= index < arity ** slots:
        raise err.DataError("action %d out of range for %d^%d" % (index, arity, slots))
    digits = np.empty(slots, dtype=int)
    for s in range(slots):
        index, digits[s] = divmod(index, arity)
    return 2 * digits - 1 if arity == 2 else digits - 1


def encode_action(gradients, arity):
    """Inverse of :func:`decode_action`."""
    gradients = np.asarray(gradients, dtype=int)
    if arity == 2:
        valid = np.all(np.abs(gradients) == 1)
        digits = (gradients + 1) // 2
    else:
        valid = np.all(np.abs(gradients) <= 1)
        digits = gradients + 1
    if arity not in (2, 3) or not valid:
        raise err.DataError("gradients %r not valid for arity %d" % (gradients.tolist(), arity))
    return int(sum(int(d) * arity ** s for s, d in enumerate(digits)))


def step_index(index, gradient, size):
    """index + gradient clamped to [0, size - 1]."""
    return np.clip(np.asarray(index) + gradient, 0, size - 1)


def apply_action(variables, cell, gradients, update_combiners=True):
    """
    Apply one agent's index gradients.

    :param gradients: K power gradients, then K combiner gradients when
        *update_combiners*, then one IRS gradient
    """
    K = variables.shape[1]
    gradients = np.asarray(gradients, dtype=int)
    expected = 2 * K + 1 if update_combiners else K + 1
    if gradients.shape != (expected,):
        raise err.DimensionError("expected %d gradients, got %r" % (expected, gradients.shape))
    n_power, n_combiner, n_irs = variables.space.sizes
    power = step_index(variables.power_idx[cell], gradients[:K], n_power)
    combiner = None
    if update_combiners:
        combiner = step_index(variables.combiner_idx[cell], gradients[K:2 * K], n_combiner)
    irs = step_index(variables.irs_idx[cell], gradients[-1], n_irs)
    return variables.with_cell(cell, power_idx=power, combiner_idx=combiner, irs_idx=irs)


def compute_penalty(interfered, offender, scalars, sigma2, scope=None, bandwidth=1.0):
    """
    Rate loss cell *offender* causes at BS *interfered*, evaluated at that BS.

    :param scalars: (L, K, K) slice ``S[:, :, interfered, :]`` measured at
        the interfered BS: ``scalars[i', j', j]`` is UE (i', j')'s power
        through combiner j
    :param scope: cells whose UEs the BS measures; others count as zero.
        None means every cell.
    :return: P >= 0; exactly 0 when the offender contributes nothing
    """
    scalars = np.asarray(scalars, dtype=float)
    L, K, _ = scalars.shape
    if interfered == offender:
        raise err.DataError("a cell cannot penalize itself")
    if not sigma2 > 0:
        raise err.DataError("noise power must be positive")
    in_scope = np.zeros(L, dtype=bool)
    in_scope[list(range(L)) if scope is None else list(scope)] = True

    penalty = 0.0
    for j in range(K):
        column = np.where(in_scope[:, None], scalars[:, :, j], 0.0)
        signal = column[interfered, j]
        others = column.copy()
        others[interfered, j] = 0.0
        offending = others[offender].sum()
        others[offender] = 0.0
        free = others.sum()
        if offending == 0.0:
            continue
        without = math.log2(1.0 + signal / (free + sigma2))
        with_offender = math.log2(1.0 + signal / (free + offending + sigma2))
        penalty += bandwidth * (without - with_offender)
    return max(0.0, penalty)


def cell_penalties(measurement, neighbors, sigma2, bandwidth=1.0):
    """
    Every penalty that crosses a cell boundary this slot.

    :return: (L, L) array, ``[l, i] = P_{l,i}`` for i in l's interfered
        set, 0 elsewhere
    """
    L = len(neighbors)
    penalties = np.zeros((L, L))
    for sets in neighbors:
        for i in sets.interfered:
            scope = (i,) + neighbors[i].interfering
            penalties[sets.cell, i] = compute_penalty(
                i, sets.cell, measurement.scalars[:, :, i, :], sigma2,
                scope=scope, bandwidth=bandwidth)
    return penalties


def compute_reward(rates, penalties):
    """Local sum-rate minus the received penalties (exactly rounded sums)."""
    return math.fsum(float(r) for r in rates) - math.fsum(float(p) for p in penalties)
