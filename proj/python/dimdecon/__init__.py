"""Recover the layout of a flattened bit stream by scoring candidate partitions."""

from ._dimdecon import (
    CtmTable,
    DimdeconError,
    ScoreSeries,
    ctm_value,
    detect_spikes,
    flip_count_for_rate,
    lz_compress,
    lz_decompress,
)
from . import _dimdecon as _native

__all__ = [
    "CtmTable",
    "DimdeconError",
    "ScoreSeries",
    "amplify",
    "as_bits",
    "binarize_text",
    "complement",
    "ctm_value",
    "detect_spikes",
    "flip_count_for_rate",
    "flip_random",
    "lz_compress",
    "lz_decompress",
    "perturbation_curve",
    "read_bits",
    "read_pbm",
    "reconstruct",
    "scramble_segments",
    "score",
    "sweep",
]


def as_bits(x):
    """Accept "0101" strings, bytes of 0/1 values, or any iterable of 0/1 ints."""
    if isinstance(x, str):
        return x
    if isinstance(x, (bytes, bytearray)):
        x = list(x)
    out = []
    for v in x:
        v = int(v)
        if v not in (0, 1):
            raise DimdeconError(f"bit values must be 0 or 1, got {v}")
        out.append("1" if v else "0")
    return "".join(out)


def score(bits, measure="bdm", dims=None, block_shape=None, table=None):
    return _native.score(as_bits(bits), measure, dims, block_shape, table)


def sweep(bits, measure="bdm", table=None, **options):
    return _native.sweep(as_bits(bits), measure, table, **options)


def flip_random(bits, count, seed):
    return _native.flip_random(as_bits(bits), count, seed)


def scramble_segments(bits, segment_len, seed):
    return _native.scramble_segments(as_bits(bits), segment_len, seed)


def complement(bits):
    return _native.complement(as_bits(bits))


def amplify(bits, dims, factors):
    return _native.amplify(as_bits(bits), list(dims), list(factors))


def perturbation_curve(bits, schedule, **options):
    return _native.perturbation_curve(as_bits(bits), list(schedule), **options)


def reconstruct(bits, dims):
    return _native.reconstruct(as_bits(bits), list(dims))


def binarize_text(text, scheme="vowel"):
    return _native.binarize_text(text, scheme)


def read_bits(path):
    return _native.read_bits(str(path))


def read_pbm(path):
    return _native.read_pbm(str(path))
