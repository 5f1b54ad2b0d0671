"""
Deterministic, splittable random streams and the primitive samplers.

A stream is addressed by a master seed and a path of indices (e.g. ``[m, v, b]`` for outer replication, inner
replication and bootstrap replicate). The path is hashed together with the seed by numpy's ``SeedSequence``, so any
stream can be re-derived in O(1) without consuming other streams, and the result does not depend on which thread
derives it. All samplers take the stream explicitly; there is no global random state.
"""

from typing import Sequence

import numpy as np

from bootsim.exceptions import ParameterError

Stream = np.random.Generator

_SEED_LIMIT = 2 ** 64


def derive_stream(master_seed: int, path: Sequence[int] = ()) -> Stream:
    """
    Return a fresh generator for ``(master_seed, path)``.

    The path length is hashed in front of the indices; ``SeedSequence`` pads short entropy with zeros, so without it
    ``[3]`` and ``[3, 0]`` would share a stream.
    """

    if not 0 <= int(master_seed) < _SEED_LIMIT:
        raise ParameterError("master_seed", "must be a 64-bit unsigned integer")

    for index in path:
        if not 0 <= int(index) < _SEED_LIMIT:
            raise ParameterError("path", "indices must be 64-bit unsigned integers")

    key = (len(path), *(int(index) for index in path))
    seed_sequence = np.random.SeedSequence(int(master_seed), spawn_key=key)
    return np.random.Generator(np.random.Philox(seed_sequence))


def replicate_streams(master_seed: int, prefix: Sequence[int], count: int) -> list[Stream]:
    """
    Streams ``prefix + [b]`` for ``b = 0..count-1``, one per bootstrap replicate.
    """

    return [derive_stream(master_seed, [*prefix, b]) for b in range(count)]


def sample_std_normal(stream: Stream, n: int) -> np.ndarray:
    if n < 0:
        raise ParameterError("n", "sample size cannot be negative")

    return stream.standard_normal(n)


def stacked_normals(streams: Sequence[Stream], n: int) -> np.ndarray:
    """
    One row of ``n`` standard normals per stream, shape ``(len(streams), n)``.
    """

    if len(streams) == 0:
        return np.empty((0, n))

    return np.vstack([sample_std_normal(stream, n) for stream in streams])


def sample_uniform_permutation(stream: Stream, n: int) -> np.ndarray:
    """
    Uniformly distributed permutation of ``range(n)`` (Fisher-Yates driven by the stream).
    """

    if n < 1:
        raise ParameterError("n", "a permutation needs at least one element")

    return stream.permutation(n)


def sample_symmetric_stable(stream: Stream, alpha: float, n: int) -> np.ndarray:
    """
    Symmetric, strictly alpha-stable draws with unit scale (Chambers-Mallows-Stuck).

    With ``phi ~ U(-pi/2, pi/2)`` and ``w ~ Exp(1)``,

        x = sin(alpha * phi) / cos(phi) ** (1 / alpha) * (cos((1 - alpha) * phi) / w) ** ((1 - alpha) / alpha)

    which is ``tan(phi)`` (Cauchy) at ``alpha = 1`` and ``2 * sqrt(w) * sin(phi)`` (N(0, 2)) at ``alpha = 2``.
    """

    if not 0 < alpha <= 2:
        raise ParameterError("alpha", "tail index must lie in (0, 2]")

    if n < 0:
        raise ParameterError("n", "sample size cannot be negative")

    phi = stream.uniform(-np.pi / 2, np.pi / 2, n)
    w = stream.standard_exponential(n)

    if alpha == 1:
        return np.tan(phi)

    if alpha == 2:
        return 2.0 * np.sqrt(w) * np.sin(phi)

    return (np.sin(alpha * phi) / np.cos(phi) ** (1.0 / alpha)
            * (np.cos((1.0 - alpha) * phi) / w) ** ((1.0 - alpha) / alpha))
