"""
Network geometry, large-scale fading and the time evolution of the
small-scale channels.

Array conventions (uniform cell sizes, one IRS per cell, R = L):

    h_ub  (L, K, L, M)   UE (i, j) -> BS l             direct channel
    h_ui  (L, K, R, N)   UE (i, j) -> IRS r
    g_ib  (R, L, M, N)   IRS r -> BS l                 stationary
    g_ii  (R, R, N, N)   IRS r1 -> IRS r2 at [r1, r2]  stationary, zero for r1 == r2
"""
import math
from dataclasses import dataclass

import numpy as np

from . import err
from .numerics import bessel_j0, complex_gaussian_array

SPEED_OF_LIGHT = 3e8
_SQRT3 = math.sqrt(3.0)

# axial hex directions, counter-clockwise from +x
_HEX_DIRECTIONS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


@dataclass(frozen=True)
class PathLossParams(object):
    beta0_db: float = -30.0
    d0: float = 1.0
    alpha_ub: float = 3.75
    alpha_ui: float = 2.2
    alpha_ib: float = 1.0
    alpha_ii: float = 2.0

    def __post_init__(self):
        if not self.d0 > 0:
            raise err.DataError("reference distance d0 must be positive")
        for name in ("alpha_ub", "alpha_ui", "alpha_ib", "alpha_ii"):
            if not getattr(self, name) > 0:
                raise err.DataError("path-loss exponent %s must be positive" % name)


@dataclass(frozen=True)
class MobilityParams(object):
    speed_kmh: float = 3.0
    carrier_hz: float = 2.5e9
    slot_s: float = 5e-3
    rho: float = None

    def __post_init__(self):
        if not self.slot_s > 0:
            raise err.DataError("slot duration must be positive")
        if self.rho is not None and not 0.0 <= self.rho <= 1.0:
            raise err.DataError("rho must lie in [0, 1], got %r" % self.rho)

    @property
    def correlation(self):
        if self.rho is not None:
            return float(self.rho)
        return jakes_rho(self.speed_kmh, self.carrier_hz, self.slot_s)


@dataclass(frozen=True, eq=False)
class Topology(object):
    """
    Positions (meters) and per-cell counts of the network.

    :ivar bs_positions: (L, 3)
    :ivar irs_positions: (L, 3), IRS l sits in cell l
    :ivar ue_positions: (L, K, 3)
    """
    spacing: float
    bs_positions: np.ndarray
    irs_positions: np.ndarray
    ue_positions: np.ndarray
    ues_per_cell: tuple
    antennas: tuple
    irs_elements: tuple

    @property
    def cells(self):
        return len(self.bs_positions)

    def _uniform(self, counts, what):
        if len(set(counts)) != 1:
            raise err.NotSupportedError("cells with different %s counts: %r" % (what, counts))
        return counts[0]

    @property
    def K(self):
        return self._uniform(self.ues_per_cell, "UE")

    @property
    def M(self):
        return self._uniform(self.antennas, "antenna")

    @property
    def N(self):
        return self._uniform(self.irs_elements, "IRS element")

    @property
    def circumradius(self):
        return self.spacing / _SQRT3

    def to_dict(self):
        return {
            "cells": self.cells,
            "spacing": self.spacing,
            "ues_per_cell": list(self.ues_per_cell),
            "antennas": list(self.antennas),
            "irs_elements": list(self.irs_elements),
            "bs_positions": self.bs_positions.tolist(),
            "irs_positions": self.irs_positions.tolist(),
            "ue_positions": self.ue_positions.tolist(),
        }


def hex_centers(cells, spacing):
    """
    Horizontal BS coordinates for *cells* hexagonal cells laid on spiral
    rings: the center cell first, then ring 1 counter-clockwise from +x,
    then ring 2, and so on.
    """
    if cells < 1:
        raise err.DataError("need at least one cell, got %r" % cells)
    axial = [(0, 0)]
    ring = 1
    while len(axial) < cells:
        q, r = ring * _HEX_DIRECTIONS[0][0], ring * _HEX_DIRECTIONS[0][1]
        for side in range(6):
            dq, dr = _HEX_DIRECTIONS[(side + 2) % 6]
            for _ in range(ring):
                axial.append((q, r))
                q, r = q + dq, r + dr
        ring += 1
    axial = np.array(axial[:cells], dtype=float)
    x = spacing * (axial[:, 0] + axial[:, 1] / 2.0)
    y = spacing * (_SQRT3 / 2.0) * axial[:, 1]
    return np.stack([x, y], axis=1)


def in_hexagon(dx, dy, spacing):
    """True where (dx, dy) lies in the cell hexagon centered at the origin."""
    apothem = spacing / 2.0
    inside = np.abs(dx) <= apothem
    for angle in (math.pi / 3.0, 2.0 * math.pi / 3.0):
        inside &= np.abs(dx * math.cos(angle) + dy * math.sin(angle)) <= apothem
    return inside


def build_topology(config, stream):
    """
    Lay out BSs, IRSs and UEs.

    UEs are dropped uniformly inside their cell hexagon by rejection
    sampling; each IRS sits ``irs_offset`` meters from its BS at azimuth
    ``irs_azimuth_deg``.
    """
    cells = int(config.cells)
    K, M, N = int(config.ues_per_cell), int(config.antennas), int(config.irs_elements)
    if min(K, M, N) < 1:
        raise err.DataError("UE, antenna and IRS element counts must be >= 1")
    spacing = float(config.bs_spacing)
    if not spacing > 0:
        raise err.DataError("BS spacing must be positive")

    centers = hex_centers(cells, spacing)
    bs = np.column_stack([centers, np.full(cells, float(config.bs_height))])

    azimuth = math.radians(config.irs_azimuth_deg)
    offset = float(config.irs_offset) * np.array([math.cos(azimuth), math.sin(azimuth)])
    irs = np.column_stack([centers + offset, np.full(cells, float(config.irs_height))])

    radius = spacing / _SQRT3
    ues = np.empty((cells, K, 3))
    for cell in range(cells):
        placed = 0
        while placed < K:
            dx, dy = stream.uniform(-radius, radius, size=2)
            if not in_hexagon(dx, dy, spacing):
                continue
            ues[cell, placed] = (centers[cell, 0] + dx, centers[cell, 1] + dy, config.ue_height)
            placed += 1

    return Topology(spacing=spacing, bs_positions=bs, irs_positions=irs,
                    ue_positions=ues, ues_per_cell=(K,) * cells,
                    antennas=(M,) * cells, irs_elements=(N,) * cells)


def path_loss_db(d, alpha, p):
    """
    Large-scale fading in dB: beta0 - 10 alpha log10(d / d0).

    Distances below d0 are clamped to d0. Accepts scalars or arrays.
    """
    d = np.asarray(d, dtype=float)
    if np.any(~(d > 0)):
        raise err.DataError("distances must be positive")
    d = np.maximum(d, p.d0)
    beta = p.beta0_db - 10.0 * alpha * np.log10(d / p.d0)
    if beta.ndim == 0:
        return float(beta)
    return beta


def jakes_rho(speed_kmh, carrier_hz, slot_s):
    """Time correlation J0(2 pi f_d T) with Doppler f_d = v f_c / c."""
    if speed_kmh < 0:
        raise err.DataError("speed must be non-negative, got %r" % speed_kmh)
    doppler = (speed_kmh / 3.6) * carrier_hz / SPEED_OF_LIGHT
    return bessel_j0(2.0 * math.pi * doppler * slot_s)


def _distances(a, b):
    return np.linalg.norm(a[..., None, :] - b, axis=-1)


def _db_to_linear(beta_db):
    return 10.0 ** (np.asarray(beta_db) / 10.0)


class ChannelSet(object):
    """
    All channels of the network at one slot.

    ``u_ub`` and ``u_ui`` are the normalized fading states; the channels
    themselves are ``sqrt(beta) * u``. ``g_ib`` and ``g_ii`` never change
    after :func:`init_channels`.
    """

    def __init__(self, beta_ub, beta_ui, beta_ib, beta_ii, u_ub, u_ui, g_ib, g_ii, rho):
        self.beta_ub = beta_ub
        self.beta_ui = beta_ui
        self.beta_ib = beta_ib
        self.beta_ii = beta_ii
        self.u_ub = u_ub
        self.u_ui = u_ui
        self.g_ib = g_ib
        self.g_ii = g_ii
        self.rho = float(rho)
        self.h_ub = np.sqrt(beta_ub)[..., None] * u_ub
        self.h_ui = np.sqrt(beta_ui)[..., None] * u_ui

    @property
    def shape(self):
        """(L, K, M, R, N)"""
        L, K, _, M = self.u_ub.shape
        R, N = self.u_ui.shape[2], self.u_ui.shape[3]
        return L, K, M, R, N

    def evolve(self, u_ub, u_ui):
        return ChannelSet(self.beta_ub, self.beta_ui, self.beta_ib, self.beta_ii,
                          u_ub, u_ui, self.g_ib, self.g_ii, self.rho)


def large_scale(topology, params):
    """Linear large-scale coefficients (beta_ub, beta_ui, beta_ib, beta_ii)."""
    ue = topology.ue_positions
    bs = topology.bs_positions
    irs = topology.irs_positions
    beta_ub = _db_to_linear(path_loss_db(_distances(ue, bs), params.alpha_ub, params))
    beta_ui = _db_to_linear(path_loss_db(_distances(ue, irs), params.alpha_ui, params))
    beta_ib = _db_to_linear(path_loss_db(_distances(irs, bs), params.alpha_ib, params))
    d_ii = _distances(irs, irs)
    off = ~np.eye(len(irs), dtype=bool)
    beta_ii = np.zeros_like(d_ii)
    if off.any():
        beta_ii[off] = _db_to_linear(path_loss_db(d_ii[off], params.alpha_ii, params))
    return beta_ub, beta_ui, beta_ib, beta_ii


def init_channels(topology, params, stream, rho=1.0):
    """
    Draw the channels of slot 0.

    Fading states are CN(0, I); G^IB and G^II entries are CN(0, beta) with
    their link's large-scale coefficient.
    """
    L, K, M, N = topology.cells, topology.K, topology.M, topology.N
    R = L
    beta_ub, beta_ui, beta_ib, beta_ii = large_scale(topology, params)
    u_ub = complex_gaussian_array((L, K, L, M), stream)
    u_ui = complex_gaussian_array((L, K, R, N), stream)
    g_ib = np.sqrt(beta_ib)[:, :, None, None] * complex_gaussian_array((R, L, M, N), stream)
    g_ii = np.sqrt(beta_ii)[:, :, None, None] * complex_gaussian_array((R, R, N, N), stream)
    return ChannelSet(beta_ub, beta_ui, beta_ib, beta_ii, u_ub, u_ui, g_ib, g_ii, rho)


def advance_channels(channels, stream):
    """
    One first-order Gauss-Markov step of every UE-BS and UE-IRS fading
    state: u[t] = rho u[t-T] + sqrt(1 - rho^2) n.
    """
    rho = channels.rho
    innovation = math.sqrt(max(0.0, 1.0 - rho * rho))
    n_ub = complex_gaussian_array(channels.u_ub.shape, stream)
    n_ui = complex_gaussian_array(channels.u_ui.shape, stream)
    u_ub = rho * channels.u_ub + innovation * n_ub
    u_ui = rho * channels.u_ui + innovation * n_ui
    return channels.evolve(u_ub, u_ui)
