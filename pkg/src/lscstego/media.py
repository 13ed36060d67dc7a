"""Grayscale image I/O and bit-plane addressing.

Images are 8-bit grayscale rasters read and written in PGM (P2 ASCII /
P5 binary). Every pixel occupies one 8-bit word regardless of maxval, so
an image of w*h pixels exposes exactly 8*w*h addressable bit positions.
Global bit index k addresses bit ``7 - (k % 8)`` of pixel ``k // 8``
(MSB first: index 0 is the most significant bit of the first pixel).

A significance table assigns an importance weight to each bit position;
thresholding the weights splits the positions into most-significant,
least-significant and passive coefficient sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class PgmError(ValueError):
    """Base class for PGM parse failures."""


class BadMagicError(PgmError):
    pass


class BadHeaderError(PgmError):
    pass


class MaxvalRangeError(PgmError):
    pass


class PixelCountError(PgmError):
    pass


class PixelRangeError(PgmError):
    pass


class ThresholdError(ValueError):
    """Raised when the partition thresholds do not satisfy low < high."""


@dataclass(frozen=True)
class Image:
    """Immutable grayscale raster, row-major, top-to-bottom."""

    width: int
    height: int
    maxval: int
    pixels: tuple

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        if not 1 <= self.maxval <= 255:
            raise ValueError("maxval must lie in [1, 255]")
        if len(self.pixels) != self.width * self.height:
            raise ValueError("pixel count does not match dimensions")
        for p in self.pixels:
            if not 0 <= p <= self.maxval:
                raise ValueError("pixel value %r outside [0, maxval]" % (p,))

    @property
    def bit_length(self):
        return 8 * self.width * self.height


@dataclass(frozen=True)
class SignificationTable:
    """Periodic weight table: bit position k has weight weights[k % period]."""

    weights: tuple

    def __post_init__(self):
        if len(self.weights) == 0:
            raise ValueError("weights must be non-empty")

    @property
    def period(self):
        return len(self.weights)


def byte_plane_significance():
    """Default table for 8-bit pixels: the MSB of each pixel weighs 8,
    the LSB weighs 1."""
    return SignificationTable(weights=(8, 7, 6, 5, 4, 3, 2, 1))


def significance(table: SignificationTable, k: int) -> float:
    """Weight of bit position k (defined for every k >= 0)."""
    if k < 0:
        raise ValueError("bit index must be non-negative")
    return table.weights[k % table.period]


@dataclass(frozen=True)
class CoefficientPartition:
    """Disjoint split of bit positions 0..bit_length-1 into most
    significant (msc), least significant (lsc) and passive sets, each
    strictly increasing."""

    msc: tuple
    lsc: tuple
    passive: tuple
    bit_length: int

    def __post_init__(self):
        total = len(self.msc) + len(self.lsc) + len(self.passive)
        if total != self.bit_length:
            raise ValueError("partition does not cover all bit positions")


def partition(table, bit_length, low, high) -> CoefficientPartition:
    """Split bit positions by weight: lsc where weight <= low, msc where
    weight >= high, passive strictly in between. Requires low < high."""
    if low >= high:
        raise ThresholdError("low threshold %r must be < high threshold %r"
                             % (low, high))
    if bit_length < 1:
        raise ValueError("bit_length must be >= 1")
    weights = np.asarray(table.weights, dtype=float)
    w = weights[np.arange(bit_length) % table.period]
    msc = np.nonzero(w >= high)[0]
    lsc = np.nonzero(w <= low)[0]
    passive = np.nonzero((w > low) & (w < high))[0]
    return CoefficientPartition(msc=tuple(int(i) for i in msc),
                                lsc=tuple(int(i) for i in lsc),
                                passive=tuple(int(i) for i in passive),
                                bit_length=bit_length)


def extract_bits(img: Image, indices) -> list:
    """Read the bits at the given global indices, in the given order."""
    nbits = img.bit_length
    out = []
    pixels = img.pixels
    for k in indices:
        if not 0 <= k < nbits:
            raise IndexError("bit index %d out of range" % k)
        out.append((pixels[k >> 3] >> (7 - (k & 7))) & 1)
    return out


def write_bits(img: Image, indices, bits) -> Image:
    """Return a copy of img with the bits at `indices` replaced by `bits`.

    Positions not listed are untouched; the input image is not mutated.
    """
    if len(indices) != len(bits):
        raise ValueError("indices and bits must have equal length")
    nbits = img.bit_length
    pixels = list(img.pixels)
    for k, b in zip(indices, bits):
        if not 0 <= k < nbits:
            raise IndexError("bit index %d out of range" % k)
        if b not in (0, 1):
            raise ValueError("bits must be 0 or 1")
        shift = 7 - (k & 7)
        pixels[k >> 3] = (pixels[k >> 3] & ~(1 << shift)) | (b << shift)
    return Image(width=img.width, height=img.height, maxval=img.maxval,
                 pixels=tuple(pixels))


def pack_bits(bits) -> bytes:
    """Pack a bit list into bytes, MSB first. Length must be a multiple of 8."""
    if len(bits) % 8 != 0:
        raise ValueError("bit count must be a multiple of 8")
    out = bytearray()
    for i in range(0, len(bits), 8):
        v = 0
        for b in bits[i:i + 8]:
            v = (v << 1) | b
        out.append(v)
    return bytes(out)


def unpack_bits(data: bytes) -> list:
    """Inverse of pack_bits: bytes to a bit list, MSB first."""
    out = []
    for byte in data:
        for shift in range(7, -1, -1):
            out.append((byte >> shift) & 1)
    return out


def _header_tokens(data, pos, count):
    # Whitespace-separated tokens; '#' starts a comment running to end of line.
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n:
            c = data[pos:pos + 1]
            if c == b"#":
                while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            elif c.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() \
                and data[pos:pos + 1] != b"#":
            pos += 1
        if pos == start:
            raise BadHeaderError("truncated PGM header")
        tokens.append(data[start:pos])
    return tokens, pos


def parse_pgm(data: bytes) -> Image:
    """Parse an ASCII (P2) or binary (P5) PGM byte string."""
    magic = bytes(data[:2])
    if magic not in (b"P2", b"P5"):
        raise BadMagicError("not a P2/P5 PGM (magic %r)" % magic)
    tokens, pos = _header_tokens(data, 2, 3)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise BadHeaderError("non-numeric PGM header field") from None
    if width < 1 or height < 1:
        raise BadHeaderError("non-positive image dimensions")
    if not 1 <= maxval <= 255:
        raise MaxvalRangeError("maxval %d outside [1, 255]" % maxval)
    count = width * height

    if magic == b"P5":
        # Exactly one whitespace byte separates the header from the raster.
        if pos >= len(data) or not data[pos:pos + 1].isspace():
            raise BadHeaderError("missing separator before binary raster")
        raster = data[pos + 1:]
        if len(raster) != count:
            raise PixelCountError("expected %d raster bytes, got %d"
                                  % (count, len(raster)))
        pixels = tuple(raster)
    else:
        fields = data[pos:].split()
        if len(fields) != count:
            raise PixelCountError("expected %d pixel values, got %d"
                                  % (count, len(fields)))
        try:
            pixels = tuple(int(f) for f in fields)
        except ValueError:
            raise PixelCountError("non-numeric pixel value") from None
        if any(p < 0 for p in pixels):
            raise PixelRangeError("negative pixel value")

    for p in pixels:
        if p > maxval:
            raise PixelRangeError("pixel value %d exceeds maxval %d"
                                  % (p, maxval))
    return Image(width=width, height=height, maxval=maxval, pixels=pixels)


def write_pgm(img: Image, binary: bool = True) -> bytes:
    """Serialize to canonical PGM. Binary: "P5\\n<w> <h>\\n<maxval>\\n" +
    raster. ASCII: one image row per text line. Comments are never emitted."""
    header = b"%s\n%d %d\n%d\n" % (b"P5" if binary else b"P2",
                                   img.width, img.height, img.maxval)
    if binary:
        return header + bytes(img.pixels)
    rows = []
    for y in range(img.height):
        row = img.pixels[y * img.width:(y + 1) * img.width]
        rows.append(" ".join(str(p) for p in row).encode("ascii") + b"\n")
    return header + b"".join(rows)
