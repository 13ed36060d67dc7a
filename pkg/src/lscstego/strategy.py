"""Keyed pseudorandom strategies.

A strategy is a finite sequence of write positions over [0, P-1] whose
last P terms are pairwise distinct, so the tail is a permutation of the
full position range. Strategies are derived deterministically from a
key through one of two bit generators:

* ``fast`` -- SHA-256 in counter mode, keyed by the seed. Quick, and
  adequate for tests and experiments.
* ``bbs`` -- the quadratic-residue generator x <- x^2 mod n with
  n = p*q, p and q primes congruent to 3 mod 4, emitting the parity of
  each new state. The default p and q here are small test parameters;
  at this size the generator is NOT cryptographically secure. Supply
  large primes for real use.

Uniform draws below a bound use rejection sampling on fixed-width bit
reads (modulo reduction would bias them); permutations come from a
Fisher-Yates shuffle driven by the same stream.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass


class StrategyError(ValueError):
    """Raised for invalid strategy parameters (e.g. length <= p_width)."""


# Default BBS test modulus: both primes are 3 mod 4 (Blum primes).
DEFAULT_BBS_P = 65519
DEFAULT_BBS_Q = 65539


@dataclass(frozen=True)
class StegoKey:
    """Embedding key: a seed plus the generator it drives.

    Seeds of at least 16 bytes are recommended. bbs_p/bbs_q only matter
    for generator="bbs".
    """

    seed: bytes
    generator: str = "fast"
    bbs_p: int = DEFAULT_BBS_P
    bbs_q: int = DEFAULT_BBS_Q
    # 0 means: derive the BBS start state from the seed
    bbs_x0: int = 0

    def __post_init__(self):
        if len(self.seed) == 0:
            raise ValueError("key seed must be non-empty")
        if self.generator not in ("fast", "bbs"):
            raise ValueError("unknown generator %r" % (self.generator,))


@dataclass(frozen=True)
class BbsState:
    modulus: int
    state: int

    def __post_init__(self):
        if not 1 < self.state < self.modulus:
            raise ValueError("BBS state must satisfy 1 < x < n")
        if math.gcd(self.state, self.modulus) != 1:
            raise ValueError("BBS state must be coprime to the modulus")


def bbs_next_bit(st: BbsState):
    """One generator step: square the state mod n, emit its parity."""
    x = (st.state * st.state) % st.modulus
    return x & 1, BbsState(modulus=st.modulus, state=x)


def sequence_support(seq):
    """Set of distinct values taken by a finite sequence."""
    return set(seq)


@dataclass(frozen=True)
class SequenceClassification:
    injective: bool
    onto: bool
    bijective: bool


def classify_sequence(seq, n) -> SequenceClassification:
    """Classify a sequence over [0, n-1]: injective (all terms distinct),
    onto (every value reached), bijective (both)."""
    for t in seq:
        if not 0 <= t < n:
            raise ValueError("term %r outside [0, %d)" % (t, n))
    support = sequence_support(seq)
    injective = len(seq) == len(support)
    onto = len(support) == n
    return SequenceClassification(injective=injective, onto=onto,
                                  bijective=injective and onto)


class _Sha256Stream:
    """Keyed bit stream: SHA-256 over (key || counter), MSB-first bits."""

    def __init__(self, seed: bytes, domain: bytes = b""):
        material = len(domain).to_bytes(2, "big") + domain + seed
        self._key = hashlib.sha256(material).digest()
        self._counter = 0
        self._buf = 0
        self._avail = 0

    def next_bit(self) -> int:
        if self._avail == 0:
            block = hashlib.sha256(
                self._key + self._counter.to_bytes(8, "big")).digest()
            self._counter += 1
            self._buf = int.from_bytes(block, "big")
            self._avail = 256
        self._avail -= 1
        return (self._buf >> self._avail) & 1


class _BbsStream:
    """Bit stream backed by a BBS state, initial state derived from the seed."""

    def __init__(self, seed: bytes, modulus: int, domain: bytes = b"",
                 x0: int = 0):
        if x0:
            x = x0
        else:
            digest = hashlib.sha256(
                len(domain).to_bytes(2, "big") + domain + seed).digest()
            x = 2 + int.from_bytes(digest, "big") % (modulus - 3)
        while math.gcd(x, modulus) != 1 or not 1 < x < modulus:
            x = 2 + (x - 1) % (modulus - 3)
        self._state = BbsState(modulus=modulus, state=x)

    def next_bit(self) -> int:
        bit, self._state = bbs_next_bit(self._state)
        return bit


def make_stream(key: StegoKey, domain: bytes = b""):
    """Deterministic keyed bit stream for a purpose domain. Distinct
    domains (e.g. strategy generation vs. channel randomization) yield
    independent-looking streams from the same key."""
    if key.generator == "bbs":
        return _BbsStream(key.seed, key.bbs_p * key.bbs_q, domain,
                          x0=key.bbs_x0)
    return _Sha256Stream(key.seed, domain)


def take_bits(stream, k) -> int:
    """Read k bits as an integer, MSB first."""
    v = 0
    for _ in range(k):
        v = (v << 1) | stream.next_bit()
    return v


def uniform_int(stream, bound) -> int:
    """Exact uniform draw from [0, bound) by rejection sampling."""
    if bound < 1:
        raise ValueError("bound must be positive")
    if bound == 1:
        return 0
    width = (bound - 1).bit_length()
    while True:
        v = take_bits(stream, width)
        if v < bound:
            return v


def keyed_shuffle(stream, items) -> list:
    """Fisher-Yates shuffle with exact-uniform index draws."""
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = uniform_int(stream, i + 1)
        out[i], out[j] = out[j], out[i]
    return out


@dataclass(frozen=True)
class Strategy:
    """Write-position sequence with a permutation tail.

    terms[i] is the position written at step i (0-based). The last
    p_width terms are pairwise distinct, hence a permutation of
    [0, p_width-1]: every position is written during the final p_width
    steps.
    """

    terms: tuple
    p_width: int

    def __post_init__(self):
        if self.p_width < 1:
            raise StrategyError("p_width must be >= 1")
        if len(self.terms) <= self.p_width:
            raise StrategyError("strategy length %d must exceed p_width %d"
                                % (len(self.terms), self.p_width))
        for t in self.terms:
            if not 0 <= t < self.p_width:
                raise StrategyError("term %r outside [0, %d)"
                                    % (t, self.p_width))
        tail = self.terms[-self.p_width:]
        if not classify_sequence(tail, self.p_width).injective:
            raise StrategyError("final %d terms must be pairwise distinct"
                                % self.p_width)

    @property
    def length(self):
        return len(self.terms)


def generate_strategy(key: StegoKey, p_width: int, length: int) -> Strategy:
    """Derive a strategy from the key: length - p_width i.i.d. uniform
    head terms followed by a uniformly shuffled permutation tail.
    Deterministic in (key, p_width, length)."""
    if p_width < 1:
        raise StrategyError("p_width must be >= 1")
    if length <= p_width:
        raise StrategyError("length %d must exceed p_width %d"
                            % (length, p_width))
    stream = make_stream(key, b"strategy")
    head = [uniform_int(stream, p_width) for _ in range(length - p_width)]
    tail = keyed_shuffle(stream, range(p_width))
    return Strategy(terms=tuple(head + tail), p_width=p_width)
