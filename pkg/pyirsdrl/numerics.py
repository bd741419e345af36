"""
Complex vectors, seeded random streams and the special functions shared by
the rest of the package.

CVec / CMat are plain ``numpy`` ``complex128`` arrays of rank 1 / 2. The
helpers here check dimensions explicitly instead of relying on numpy
broadcasting.
"""
import hashlib
import math

import numpy as np
from scipy import special

from . import err

TO_LINEAR = "to-linear"
TO_DB = "to-db"


def _stream_key(seed, path):
    # two rounds of sha256 over "<seed>/<path>", first 16 bytes as the Philox key
    raw = ("%d/%s" % (int(seed), path)).encode('utf-8')
    digest = hashlib.sha256(hashlib.sha256(raw).digest()).digest()[:16]
    return int.from_bytes(digest, 'little')


class RngStream(object):
    """
    Named, seedable pseudo-random stream.

    Backed by a counter-based Philox generator keyed from the global seed
    and the stream path, so adding a stream never perturbs another one.
    Identical seed and identical call sequence give bit-identical draws.
    """

    def __init__(self, seed, path):
        self.seed = int(seed)
        self.path = path
        self.generator = np.random.Generator(np.random.Philox(key=_stream_key(seed, path)))

    def __repr__(self):
        return "RngStream(seed=%d, path=%r)" % (self.seed, self.path)

    def normal(self, size=None, scale=1.0):
        return self.generator.normal(0.0, scale, size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self.generator.uniform(low, high, size)

    def random(self):
        return self.generator.random()

    def integers(self, high, size=None):
        return self.generator.integers(0, high, size)

    def choice(self, n, size, replace=False):
        return self.generator.choice(n, size=size, replace=replace)


class StreamRegistry(object):
    """
    Hands out one RngStream per entity path for a global seed.

    Every stream that was requested is listed by :attr:`paths`, which makes
    the set of random consumers of a run enumerable.
    """

    def __init__(self, seed):
        self.seed = int(seed)
        self._streams = {}

    def stream(self, *parts):
        path = "/".join(str(p) for p in parts)
        if path not in self._streams:
            self._streams[path] = RngStream(self.seed, path)
        return self._streams[path]

    __call__ = stream

    @property
    def paths(self):
        return sorted(self._streams)


def complex_gaussian(n, stream):
    """Draw *n* i.i.d. CN(0, 1) samples: N(0, 1/2) + i N(0, 1/2)."""
    return complex_gaussian_array((n,), stream)


def complex_gaussian_array(shape, stream):
    if isinstance(shape, int):
        shape = (shape,)
    shape = tuple(int(s) for s in shape)
    if not shape or any(s < 1 for s in shape):
        raise err.DataError("complex_gaussian needs a positive count, got %r" % (shape,))
    scale = math.sqrt(0.5)
    re = stream.normal(shape, scale)
    im = stream.normal(shape, scale)
    return re + 1j * im


def bessel_j0(x):
    """Zeroth order Bessel function of the first kind."""
    x = float(x)
    if not math.isfinite(x):
        raise err.DataError("bessel_j0 needs a finite argument, got %r" % x)
    return float(special.j0(x))


def db_convert(value, direction):
    """
    Convert between dB and linear scale.

    :param value: value to convert
    :param direction: ``"to-linear"`` (10^(v/10)) or ``"to-db"`` (10 log10 v)
    :raise DomainError: converting a non-positive value to dB
    """
    if direction == TO_LINEAR:
        return 10.0 ** (float(value) / 10.0)
    if direction == TO_DB:
        if not value > 0:
            raise err.DomainError("cannot convert %r to dB" % (value,))
        return 10.0 * math.log10(value)
    raise err.DataError("unknown conversion direction %r" % (direction,))


def db2lin(value):
    return db_convert(value, TO_LINEAR)


def lin2db(value):
    return db_convert(value, TO_DB)


def check_vector(v, length=None, name="vector"):
    v = np.asarray(v)
    if v.ndim != 1:
        raise err.DimensionError("%s must be rank 1, got shape %r" % (name, v.shape))
    if length is not None and v.shape[0] != length:
        raise err.DimensionError("%s has length %d, expected %d" % (name, v.shape[0], length))
    return v


def check_matrix(a, shape=None, name="matrix"):
    a = np.asarray(a)
    if a.ndim != 2:
        raise err.DimensionError("%s must be rank 2, got shape %r" % (name, a.shape))
    if shape is not None and a.shape != tuple(shape):
        raise err.DimensionError("%s has shape %r, expected %r" % (name, a.shape, tuple(shape)))
    return a


def inner(u, v):
    """Hermitian inner product u^H v."""
    u = check_vector(u, name="u")
    v = check_vector(v, len(u), name="v")
    return complex(np.vdot(u, v))


def norm(v):
    return float(np.linalg.norm(check_vector(v)))


def matvec(a, v):
    a = check_matrix(a)
    v = check_vector(v, a.shape[1])
    return a @ v


def diag_scale(phi, v):
    """diag(phi) v."""
    phi = check_vector(phi, name="phi")
    v = check_vector(v, len(phi))
    return phi * v
