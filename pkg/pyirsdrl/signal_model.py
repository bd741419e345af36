"""
Effective channels through the IRSs (direct, single and double
reflections), scalar effective powers, SINR and achievable rate, plus a
Monte Carlo received-signal path used as an oracle for the analytic SINR.

Beamformers are passed as a (R, N) array ``phi`` whose row r is the
diagonal of Phi_r; transmit powers as a (L, K) array of linear powers;
combiners as a (L, K, M) array whose [l, k] row is z_{l,k}.
"""
import math

import numpy as np

from . import err
from .numerics import check_vector, complex_gaussian_array


def _check_inputs(channels, phi, powers=None):
    L, K, M, R, N = channels.shape
    phi = np.asarray(phi)
    if phi.shape != (R, N):
        raise err.DimensionError("beamformers have shape %r, expected %r" % (phi.shape, (R, N)))
    if np.any(np.abs(phi) > 1.0 + 1e-12):
        raise err.DataError("IRS reflection amplitudes must not exceed 1")
    if powers is not None:
        powers = np.asarray(powers, dtype=float)
        if powers.shape != (L, K):
            raise err.DimensionError("powers have shape %r, expected %r" % (powers.shape, (L, K)))
        if np.any(powers < 0):
            raise err.DataError("transmit powers must be non-negative")
    return phi, powers


def effective_channel(channels, phi, p, ue, bs):
    """
    Effective channel of UE ``ue = (i, j)`` at BS ``bs``:

        sqrt(p) (h_ub + sum_r G_ib[r] Phi_r h_ui[r]
                 + sum_r2 sum_{r1 != r2} G_ib[r2] Phi_r2 G_ii[r1, r2] Phi_r1 h_ui[r1])
    """
    phi, _ = _check_inputs(channels, phi)
    if p < 0:
        raise err.DataError("transmit power must be non-negative, got %r" % p)
    i, j = ue
    R = phi.shape[0]
    h_ui = channels.h_ui[i, j]
    total = channels.h_ub[i, j, bs].copy()
    for r in range(R):
        total += channels.g_ib[r, bs] @ (phi[r] * h_ui[r])
    for r2 in range(R):
        for r1 in range(R):
            if r1 == r2:
                continue
            bounced = channels.g_ii[r1, r2] @ (phi[r1] * h_ui[r1])
            total += channels.g_ib[r2, bs] @ (phi[r2] * bounced)
    return math.sqrt(p) * total


def effective_channels(channels, phi, powers):
    """Every effective channel at once, shape (L, K, L, M): [i, j, l] = h_{(i,j),l}."""
    phi, powers = _check_inputs(channels, phi, powers)
    R = phi.shape[0]
    g_ii = channels.g_ii * (1.0 - np.eye(R))[:, :, None, None]
    first = phi * channels.h_ui
    second = np.einsum('abnm,ijam->ijbn', g_ii, first)
    reflected = phi * (channels.h_ui + second)
    total = channels.h_ub + np.einsum('rlmn,ijrn->ijlm', channels.g_ib, reflected)
    return np.sqrt(powers)[:, :, None, None] * total


def scalar_effective_power(z, h):
    """|z^H h|^2"""
    z = check_vector(z, name="z")
    h = check_vector(h, len(z), name="h")
    return float(abs(np.vdot(z, h)) ** 2)


def scalar_powers(combiners, effective):
    """All |z_{l,k}^H h_{(i,j),l}|^2 as a (L, K, L, K) array [i, j, l, k]."""
    combiners = np.asarray(combiners)
    L, K, _, M = effective.shape
    if combiners.shape != (L, K, M):
        raise err.DimensionError("combiners have shape %r, expected %r"
                                 % (combiners.shape, (L, K, M)))
    return np.abs(np.einsum('lkm,ijlm->ijlk', combiners.conj(), effective)) ** 2


def sinr_from_scalars(target, scalars, sigma2):
    """
    SINR of UE ``target = (l, k)`` from its column of scalar effective
    powers.

    :param scalars: (L, K) array, [i, j] = |h_{(i,j),l,k}|^2 measured with
        combiner z_{l,k}; NaN marks a missing measurement
    :param sigma2: noise power
    """
    scalars = np.asarray(scalars, dtype=float)
    l, k = target
    if scalars.ndim != 2 or not (0 <= l < scalars.shape[0] and 0 <= k < scalars.shape[1]):
        raise err.DataError("scalar powers of shape %r do not cover UE %r" % (scalars.shape, target))
    if not np.all(np.isfinite(scalars)):
        raise err.DataError("missing or non-finite scalar power for SINR of UE %r" % (target,))
    if not sigma2 > 0:
        raise err.DataError("noise power must be positive")
    interference = np.where(_own_mask(scalars.shape, target), 0.0, scalars).sum()
    return float(scalars[l, k] / (interference + sigma2))


def _own_mask(shape, target):
    mask = np.zeros(shape, dtype=bool)
    mask[target] = True
    return mask


def sinr_all(scalars, sigma2):
    """SINR of every UE from the full (L, K, L, K) scalar power array."""
    L, K = scalars.shape[:2]
    own = np.eye(L, dtype=bool)[:, None, :, None] & np.eye(K, dtype=bool)[None, :, None, :]
    signal = scalars[own].reshape(L, K)
    interference = np.where(own, 0.0, scalars).sum(axis=(0, 1))
    return signal / (interference + sigma2)


def sinr_direct(channels, phi, powers, z, sigma2, target):
    """
    SINR of UE ``target = (l, k)`` evaluated straight from the channel
    matrices; the oracle for :func:`sinr_from_scalars`.
    """
    phi, powers = _check_inputs(channels, phi, powers)
    L, K, M, _, _ = channels.shape
    z = check_vector(z, M, name="z")
    if not sigma2 > 0:
        raise err.DataError("noise power must be positive")
    l, k = target
    signal = 0.0
    interference = 0.0
    for i in range(L):
        for j in range(K):
            h = effective_channel(channels, phi, powers[i, j], (i, j), l)
            power = abs(np.vdot(z, h)) ** 2
            if (i, j) == (l, k):
                signal = power
            else:
                interference += power
    return float(signal / (interference + sigma2))


def achievable_rate(sinr, bandwidth=1.0):
    """W log2(1 + SINR), bits/s/Hz for the default W = 1."""
    sinr = np.asarray(sinr, dtype=float)
    if np.any(sinr < 0):
        raise err.DataError("SINR must be non-negative")
    rate = bandwidth * np.log2(1.0 + sinr)
    if rate.ndim == 0:
        return float(rate)
    return rate


def qpsk_symbols(shape, stream):
    """Unit-modulus QPSK symbols e^{j(pi/4 + k pi/2)}."""
    k = stream.integers(4, size=shape)
    return np.exp(1j * (np.pi / 4.0 + k * np.pi / 2.0))


def simulate_received_symbol(channels, phi, powers, symbols, noise, bs, z=None):
    """
    Received vector at BS ``bs`` and, when a combiner is given, the
    combined sample z^H y.

    :param symbols: (L, K) or (D, L, K) transmit symbols
    :param noise: (M,) or (D, M) noise draws
    :return: ``(y, y_hat)``; ``y_hat`` is None without a combiner
    """
    L, K, M, _, _ = channels.shape
    symbols = np.asarray(symbols)
    noise = np.asarray(noise)
    if symbols.shape[-2:] != (L, K):
        raise err.DimensionError("symbols have shape %r, expected (..., %d, %d)" % (symbols.shape, L, K))
    if noise.shape[-1] != M or noise.shape[:-1] != symbols.shape[:-2]:
        raise err.DimensionError("noise has shape %r, symbols %r" % (noise.shape, symbols.shape))
    effective = effective_channels(channels, phi, powers)[:, :, bs, :]
    y = np.einsum('...ij,ijm->...m', symbols, effective) + noise
    if z is None:
        return y, None
    z = check_vector(z, M, name="z")
    return y, y @ z.conj()


def empirical_sinr(channels, phi, powers, z, sigma2, target, draws, stream):
    """
    Monte Carlo SINR of UE ``target`` with QPSK symbols and CN(0, sigma2 I)
    noise: mean desired power over mean interference-plus-noise power.
    """
    L, K, M, _, _ = channels.shape
    l, k = target
    symbols = qpsk_symbols((draws, L, K), stream)
    noise = math.sqrt(sigma2) * complex_gaussian_array((draws, M), stream)
    _, combined = simulate_received_symbol(channels, phi, powers, symbols, noise, l, z)
    own = effective_channel(channels, phi, np.asarray(powers)[l, k], (l, k), l)
    desired = np.vdot(z, own) * symbols[:, l, k]
    rest = combined - desired
    return float(np.mean(np.abs(desired) ** 2) / np.mean(np.abs(rest) ** 2))
