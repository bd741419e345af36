"""
Discrete design spaces: the UE power set, the BS combiner codebook, the IRS
beamformer codebook, and MRC codeword selection.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import err
from .numerics import complex_gaussian_array, check_vector

COMBINER = "combiner"
IRS = "irs"


@dataclass(frozen=True, eq=False)
class PowerSet(object):
    """Geometrically spaced linear powers (mW), strictly increasing."""
    values: np.ndarray

    def __len__(self):
        return len(self.values)

    def __getitem__(self, index):
        return self.values[index]

    @property
    def max_index(self):
        return len(self.values) - 1

    def nearest(self, power):
        """Index whose value is closest to *power*; ties go to the lower index."""
        return int(np.argmin(np.abs(self.values - power)))


@dataclass(frozen=True, eq=False)
class Codebook(object):
    """Ordered codewords, one per row of ``codewords``."""
    kind: str
    codewords: np.ndarray

    def __len__(self):
        return self.codewords.shape[0]

    def __getitem__(self, index):
        return self.codewords[index]

    @property
    def dimension(self):
        return self.codewords.shape[1]

    def to_dict(self):
        return {
            "kind": self.kind,
            "size": len(self),
            "dimension": self.dimension,
            "codewords": {str(i): [[float(c.real), float(c.imag)] for c in row]
                          for i, row in enumerate(self.codewords)},
        }


def build_power_set(p_min, p_max, size):
    """
    p_min e^{i dp}, i = 0..size-1, dp = (ln p_max - ln p_min) / (size - 1).

    :param p_min: minimum power, linear (mW)
    :param p_max: maximum power, linear (mW)
    """
    if size < 2:
        raise err.DataError("power set needs at least two levels, got %r" % size)
    if not 0 < p_min < p_max:
        raise err.DataError("need 0 < p_min < p_max, got %r, %r" % (p_min, p_max))
    step = (math.log(p_max) - math.log(p_min)) / (size - 1)
    values = p_min * np.exp(step * np.arange(size))
    values[0] = p_min
    values[-1] = p_max
    return PowerSet(values)


def build_combiner_codebook(M, size, stream):
    """RVQ combiners: unit-norm normalized CN(0, I) vectors."""
    if M < 1 or size < 1:
        raise err.DataError("combiner codebook needs M >= 1 and size >= 1")
    raw = complex_gaussian_array((size, M), stream)
    return Codebook(COMBINER, raw / np.linalg.norm(raw, axis=1, keepdims=True))


def build_irs_codebook(N, size, stream):
    """RVQ IRS beamformers with unit-modulus entries e^{j 2 pi theta}."""
    if N < 1 or size < 1:
        raise err.DataError("IRS codebook needs N >= 1 and size >= 1")
    theta = stream.uniform(0.0, 1.0, size=(size, N))
    return Codebook(IRS, np.exp(2j * np.pi * theta))


def mrc_scores(codebook, h):
    h = check_vector(h, codebook.dimension, name="h")
    return np.abs(codebook.codewords.conj() @ h) ** 2


def mrc_select(codebook, h):
    """argmax_i |Z(i)^H h|^2, ties broken toward the lowest index."""
    if len(codebook) == 0:
        raise err.DataError("cannot select from an empty codebook")
    return int(np.argmax(mrc_scores(codebook, h)))


def mrc_select_all(codebook, h):
    """Vectorized :func:`mrc_select` over the leading axes of *h* (..., M)."""
    if len(codebook) == 0:
        raise err.DataError("cannot select from an empty codebook")
    h = np.asarray(h)
    if h.shape[-1] != codebook.dimension:
        raise err.DimensionError("channels have width %d, codebook %d"
                                 % (h.shape[-1], codebook.dimension))
    scores = np.abs(h @ codebook.codewords.conj().T) ** 2
    return np.argmax(scores, axis=-1)


@dataclass(frozen=True, eq=False)
class DesignSpace(object):
    """The three discrete sets every agent picks its variables from."""
    power_set: PowerSet
    combiners: Codebook
    irs: Codebook

    @property
    def sizes(self):
        return len(self.power_set), len(self.combiners), len(self.irs)

    def to_dict(self):
        return {
            "powers_mw": self.power_set.values.tolist(),
            "combiners": self.combiners.to_dict(),
            "irs": self.irs.to_dict(),
        }


def build_design_space(config, registry):
    """
    Build 𝒫, 𝒵 and 𝒬 from *config*. Codebook streams are keyed by
    ``config.codebook_seed`` when set, so the codebooks can be held fixed
    while the rest of a run is re-seeded.
    """
    if config.codebook_seed is not None:
        registry = type(registry)(config.codebook_seed)
    power_set = build_power_set(config.p_min, config.p_max, config.power_levels)
    combiners = build_combiner_codebook(config.antennas, config.combiner_size,
                                        registry.stream("codebook", COMBINER))
    irs = build_irs_codebook(config.irs_elements, config.irs_size,
                             registry.stream("codebook", IRS))
    return DesignSpace(power_set, combiners, irs)
