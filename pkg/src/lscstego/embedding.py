"""Iterated write-position embedding over an LSC channel.

The embedder takes the channel bits x of a cover (the least significant
coefficients, length N), a message m of P bits (P <= N) and a strategy
S of length L > P. It iterates L single-bit writes: at step n, position
S[n] is overwritten with m[S[n]]. Because the write value depends only
on the position and the permutation tail touches every position, the
final channel provably equals m on positions 0..P-1 and x elsewhere;
`substitute` implements that closed form and serves as an independent
cross-check of the iteration.

Extraction therefore just reads the first P channel bits. Placement is
not key-dependent: confidentiality rests on encrypting the message
before embedding, not on hiding where it sits.
"""

from __future__ import annotations

import math
import warnings

from .media import (Image, SignificationTable, extract_bits, pack_bits,
                    partition, unpack_bits, write_bits)
from .strategy import StegoKey, Strategy, generate_strategy, make_stream


class CapacityError(ValueError):
    """Message does not fit the available channel."""


def embed_word(x0: int, n_bits: int, m_word: int, p_width: int, terms) -> int:
    """Core iteration on machine words (bit i of a word = channel bit i).

    Runs one single-position write per strategy term and returns the
    final channel word.
    """
    x = x0
    for s in terms:
        x = (x & ~(1 << s)) | (((m_word >> s) & 1) << s)
    return x


def _to_word(bits):
    w = 0
    for i, b in enumerate(bits):
        w |= (b & 1) << i
    return w


def _from_word(word, n):
    return [(word >> i) & 1 for i in range(n)]


def embed(x0, message, strat: Strategy):
    """Embed message bits into channel bits by iterating the strategy.

    Returns the stego channel (same length as x0). Raises CapacityError
    when the message is longer than the channel; warns when it fills
    more than half of it.
    """
    n = len(x0)
    p = len(message)
    if p != strat.p_width:
        raise ValueError("message length %d != strategy p_width %d"
                         % (p, strat.p_width))
    if p > n:
        raise CapacityError("message of %d bits exceeds channel of %d" % (p, n))
    if p > n // 2:
        warnings.warn("message fills more than half the channel; "
                      "it should be far smaller", stacklevel=2)
    y = embed_word(_to_word(x0), n, _to_word(message), p, strat.terms)
    return _from_word(y, n)


def substitute(x0, message):
    """Closed-form oracle: message bits on the prefix, cover bits after."""
    if len(message) > len(x0):
        raise CapacityError("message longer than channel")
    return list(message) + list(x0[len(message):])


def extract(y, p_width):
    """Read the embedded message back: the first p_width channel bits."""
    if p_width > len(y):
        raise ValueError("cannot extract %d bits from a %d-bit channel"
                         % (p_width, len(y)))
    return list(y[:p_width])


def randomize_lscs(img: Image, part, key: StegoKey) -> Image:
    """Overwrite every LSC bit position with a keyed-stream bit.

    MSC and passive positions are untouched. Deterministic in
    (img, part, key).
    """
    stream = make_stream(key, b"lsc")
    bits = [stream.next_bit() for _ in part.lsc]
    return write_bits(img, part.lsc, bits)


def _warn_if_message_biased(bits):
    # The scheme's security argument assumes uniformly distributed
    # message bits; a grossly lopsided message means it was not encrypted.
    n = len(bits)
    if n < 100:
        return
    ones = sum(bits)
    s = abs(2 * ones - n) / math.sqrt(n)
    if math.erfc(s / math.sqrt(2)) < 1e-6:
        warnings.warn("message bits are far from uniform "
                      "(%d ones of %d); encrypt the message before "
                      "embedding" % (ones, n), stacklevel=3)


def embed_in_image(img: Image, table: SignificationTable, low, high,
                   message: bytes, key: StegoKey, lam=None,
                   prerandomize: bool = True) -> Image:
    """Full pipeline: partition the image, optionally randomize the LSC
    plane, embed the message bytes with a key-derived strategy and write
    the channel back.

    lam is the iteration count (default 2*P+1, must exceed P). MSC and
    passive bits of the result are bit-identical to the input.
    """
    part = partition(table, img.bit_length, low, high)
    n = len(part.lsc)
    p = 8 * len(message)
    if p > n:
        raise CapacityError("message of %d bits exceeds LSC capacity of %d"
                            % (p, n))
    if p < 1:
        raise ValueError("message must be non-empty")
    if lam is None:
        lam = 2 * p + 1
    bits = unpack_bits(message)
    _warn_if_message_biased(bits)
    if prerandomize:
        img = randomize_lscs(img, part, key)
    channel = extract_bits(img, part.lsc)
    strat = generate_strategy(key, p, lam)
    stego_channel = embed(channel, bits, strat)
    return write_bits(img, part.lsc, stego_channel)


def extract_from_image(img: Image, table: SignificationTable, low, high,
                       n_bytes: int) -> bytes:
    """Read the first 8*n_bytes LSC bits in partition order and pack them
    MSB-first into bytes."""
    part = partition(table, img.bit_length, low, high)
    p = 8 * n_bytes
    if p > len(part.lsc):
        raise CapacityError("requested %d bits but channel has only %d"
                            % (p, len(part.lsc)))
    bits = extract_bits(img, part.lsc[:p])
    return pack_bits(bits)
