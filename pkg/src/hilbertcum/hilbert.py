"""Hilbert curve in any number of dimensions, at any resolution.

Positions along the curve and lattice points are converted with Skilling's
transpose algorithm ("Programming the Hilbert curve", AIP Conf. Proc. 707,
2004).  A position is a plain Python ``int`` in ``[0, 2**(p*b))``, so the
index width ``p*b`` is not limited by the machine word.

Two entry points per direction:

* :func:`decode_index` / :func:`encode_point` work on a single point with
  exact integer arithmetic.
* :func:`encode_points` / :func:`decode_points` handle whole arrays at once
  with numpy; the scoring code uses the former.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "CurveParams",
    "HilbertRangeError",
    "decode_index",
    "decode_points",
    "encode_point",
    "encode_points",
    "transpose_to_index",
    "index_to_transpose",
]


class HilbertRangeError(ValueError):
    """An index or coordinate lies outside the lattice of the curve."""


@dataclass(frozen=True)
class CurveParams:
    """Dimension count ``p`` and bits of resolution per dimension ``b``."""

    p: int
    b: int

    def __post_init__(self):
        if int(self.p) != self.p or int(self.b) != self.b:
            raise ValueError(f"p and b must be integers, got p={self.p!r}, b={self.b!r}")
        if self.p < 1 or self.b < 1:
            raise ValueError(f"p and b must be positive, got p={self.p}, b={self.b}")

    @property
    def side(self) -> int:
        """Number of lattice points along each axis."""
        return 1 << self.b

    @property
    def n_cells(self) -> int:
        return 1 << (self.p * self.b)


def index_to_transpose(params: CurveParams, index: int) -> list[int]:
    """Spread the bits of ``index`` over ``p`` words of ``b`` bits.

    Bit ``j`` of word ``i`` is bit ``(j*p + p-1-i)`` of the index, so word 0
    carries the most significant bit of each ``p``-bit group.
    """
    p, b = params.p, params.b
    x = [0] * p
    for j in range(b):
        for i in range(p):
            if (index >> (j * p + p - 1 - i)) & 1:
                x[i] |= 1 << j
    return x


def transpose_to_index(params: CurveParams, x: Sequence[int]) -> int:
    """Inverse of :func:`index_to_transpose`."""
    p, b = params.p, params.b
    index = 0
    for j in range(b - 1, -1, -1):
        for i in range(p):
            index = (index << 1) | ((x[i] >> j) & 1)
    return index


def decode_index(params: CurveParams, index: int) -> tuple[int, ...]:
    """Lattice point visited at position ``index`` along the curve."""
    index = int(index)
    if not 0 <= index < params.n_cells:
        raise HilbertRangeError(
            f"index {index} outside [0, 2**{params.p * params.b}) for p={params.p}, b={params.b}"
        )
    p = params.p
    x = index_to_transpose(params, index)

    # Gray decode
    t = x[p - 1] >> 1
    for i in range(p - 1, 0, -1):
        x[i] ^= x[i - 1]
    x[0] ^= t

    # undo excess work
    q = 2
    stop = 2 << (params.b - 1)
    while q != stop:
        mask = q - 1
        for i in range(p - 1, -1, -1):
            if x[i] & q:
                x[0] ^= mask
            else:
                t = (x[0] ^ x[i]) & mask
                x[0] ^= t
                x[i] ^= t
        q <<= 1
    return tuple(x)


def encode_point(params: CurveParams, point: Sequence[int]) -> int:
    """Position along the curve of a lattice point (inverse of :func:`decode_index`)."""
    p = params.p
    if len(point) != p:
        raise HilbertRangeError(f"point has {len(point)} coordinates, expected {p}")
    x = [int(c) for c in point]
    for c in x:
        if not 0 <= c < params.side:
            raise HilbertRangeError(f"coordinate {c} outside [0, 2**{params.b})")

    # inverse undo
    q = 1 << (params.b - 1)
    while q > 1:
        mask = q - 1
        for i in range(p):
            if x[i] & q:
                x[0] ^= mask
            else:
                t = (x[0] ^ x[i]) & mask
                x[0] ^= t
                x[i] ^= t
        q >>= 1

    # Gray encode
    for i in range(1, p):
        x[i] ^= x[i - 1]
    t = 0
    q = 1 << (params.b - 1)
    while q > 1:
        if x[p - 1] & q:
            t ^= q - 1
        q >>= 1
    for i in range(p):
        x[i] ^= t
    return transpose_to_index(params, x)


def encode_points(params: CurveParams, points: np.ndarray) -> list[int]:
    """Encode every row of an ``(m, p)`` array of lattice coordinates.

    Same result as calling :func:`encode_point` row by row.  Needs
    ``b <= 64`` so each coordinate fits in ``uint64``; the returned
    positions are Python ints of arbitrary width.
    """
    pts = np.asarray(points)
    if pts.ndim != 2 or pts.shape[1] != params.p:
        raise HilbertRangeError(f"expected an (m, {params.p}) array, got shape {pts.shape}")
    if params.b > 64:
        return [encode_point(params, row) for row in pts.tolist()]
    if pts.size and (pts.min() < 0 or int(pts.max()) >= params.side):
        raise HilbertRangeError(f"coordinates must lie in [0, 2**{params.b})")

    p, b = params.p, params.b
    m = pts.shape[0]
    x = [pts[:, i].astype(np.uint64) for i in range(p)]
    zero = np.uint64(0)

    q = 1 << (b - 1)
    while q > 1:
        mask = np.uint64(q - 1)
        uq = np.uint64(q)
        for i in range(p):
            hit = (x[i] & uq) != zero
            t = np.where(hit, zero, (x[0] ^ x[i]) & mask)
            x[0] = x[0] ^ np.where(hit, mask, zero) ^ t
            if i:
                x[i] = x[i] ^ t
        q >>= 1

    for i in range(1, p):
        x[i] = x[i] ^ x[i - 1]
    t = np.zeros(m, dtype=np.uint64)
    q = 1 << (b - 1)
    while q > 1:
        t ^= np.where((x[p - 1] & np.uint64(q)) != zero, np.uint64(q - 1), zero)
        q >>= 1
    for i in range(p):
        x[i] = x[i] ^ t

    # interleave into big-endian bit strings, most significant level first
    nbits = p * b
    bits = np.empty((m, nbits), dtype=np.uint8)
    for j in range(b):
        level = b - 1 - j
        for i in range(p):
            bits[:, level * p + i] = ((x[i] >> np.uint64(j)) & np.uint64(1)).astype(np.uint8)
    packed = np.packbits(bits, axis=1)
    pad = packed.shape[1] * 8 - nbits
    return [int.from_bytes(row.tobytes(), "big") >> pad for row in packed]


def decode_points(params: CurveParams, indices) -> np.ndarray:
    """Decode many positions at once into an ``(m, p)`` array.

    Vectorized when ``p*b <= 64``; otherwise falls back to
    :func:`decode_index` per position.
    """
    p, b = params.p, params.b
    if p * b > 64:
        return np.array([decode_index(params, int(i)) for i in indices], dtype=object)
    h = np.asarray(indices, dtype=np.uint64).reshape(-1)
    if h.size and int(h.max()) >= params.n_cells:
        raise HilbertRangeError(f"index outside [0, 2**{p * b})")
    one, zero = np.uint64(1), np.uint64(0)
    x = [np.zeros(h.shape, dtype=np.uint64) for _ in range(p)]
    for j in range(b):
        for i in range(p):
            bit = (h >> np.uint64(j * p + p - 1 - i)) & one
            x[i] |= bit << np.uint64(j)

    t = x[p - 1] >> one
    for i in range(p - 1, 0, -1):
        x[i] = x[i] ^ x[i - 1]
    x[0] = x[0] ^ t

    q = 2
    while q != 2 << (b - 1):
        mask = np.uint64(q - 1)
        for i in range(p - 1, -1, -1):
            hit = (x[i] & np.uint64(q)) != zero
            t = np.where(hit, zero, (x[0] ^ x[i]) & mask)
            x[0] = x[0] ^ np.where(hit, mask, zero) ^ t
            if i:
                x[i] = x[i] ^ t
        q <<= 1
    return np.stack(x, axis=1)
