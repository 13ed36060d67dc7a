"""Security verification and randomness probes.

Two kinds of checks live here:

* An exhaustive oracle for the scheme's core security property: over
  all cover channels x in B^N, all messages m in B^P and a sample of
  valid strategies, the distribution of stego channels must be exactly
  uniform over B^N. Counting is done in exact integer arithmetic
  (probabilities as rationals), so "uniform" means uniform, not
  uniform-up-to-epsilon. Deliberately broken embedder variants are
  provided as mutation checks that the oracle can actually fail.

* Desk-scale statistical probes: NIST-style monobit and runs tests, a
  Pearson chi-square uniformity test, and the classic pairs-of-values
  chi-square attack against LSB-plane embedding. These stand in for
  large-corpus steganalysis, which needs external image databases and
  trained classifiers and is out of scope here.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from scipy.special import gammaincc

from .embedding import embed_word
from .media import Image
from .strategy import StegoKey, generate_strategy

DEFAULT_ALPHA = 0.01

# Exhaustive enumeration cost is 2^(n_bits + p_width) per strategy.
MAX_ENUM_BITS = 24


class EnumerationBoundError(ValueError):
    """Requested enumeration exceeds the tractable size bound."""


class DegenerateHistogramError(ValueError):
    """Histogram has no usable value pairs (all mass in one bin)."""


@dataclass(frozen=True)
class DistributionTable:
    """Exact output distribution: counts[y] over all enumerated inputs."""

    n_bits: int
    counts: dict
    total: int

    def probability(self, state: int) -> Fraction:
        return Fraction(self.counts.get(state, 0), self.total)

    def max_deviation(self) -> Fraction:
        """Largest |p(y) - 2^-n_bits| over all output states."""
        target = Fraction(1, 2 ** self.n_bits)
        dev = Fraction(0)
        for y in range(2 ** self.n_bits):
            d = abs(self.probability(y) - target)
            if d > dev:
                dev = d
        return dev


@dataclass(frozen=True)
class TestReport:
    """Outcome of one statistical test."""

    test_name: str
    statistic: float
    p_value: float
    passed: bool
    sample_size: int
    note: str = ""

    def to_json_dict(self):
        return {"test": self.test_name, "statistic": self.statistic,
                "p_value": self.p_value, "pass": self.passed,
                "n": self.sample_size}


@dataclass(frozen=True)
class UniformityResult:
    uniform: bool
    max_deviation: Fraction
    n_bits: int
    total: int

    def to_json_dict(self):
        return {"n_bits": self.n_bits, "total": self.total,
                "max_deviation_num": self.max_deviation.numerator,
                "max_deviation_den": self.max_deviation.denominator,
                "uniform": self.uniform}


def double_write_embedder(x0, n_bits, m_word, p_width, terms):
    """Broken variant: each step also copies the message bit to the next
    position, correlating adjacent output bits."""
    x = x0
    for s in terms:
        bit = (m_word >> s) & 1
        x = (x & ~(1 << s)) | (bit << s)
        s2 = (s + 1) % n_bits
        x = (x & ~(1 << s2)) | (bit << s2)
    return x


def strategy_leak_embedder(x0, n_bits, m_word, p_width, terms):
    """Broken variant: stamps the parity of the first strategy term into
    the top channel bit, leaking the strategy into the output."""
    x = embed_word(x0, n_bits, m_word, p_width, terms)
    top = n_bits - 1
    return (x & ~(1 << top)) | ((terms[0] & 1) << top)


def enumerate_stego_distribution(n_bits, p_width, strategies,
                                 embedder=embed_word) -> DistributionTable:
    """Exact output counts over ALL (cover, message) pairs and the given
    strategies.

    counts[y] is the number of triples (x0, m, S) mapped to y by the
    embedder. Enforces n_bits + p_width <= 24.
    """
    if p_width > n_bits:
        raise ValueError("p_width must not exceed n_bits")
    if n_bits + p_width > MAX_ENUM_BITS:
        raise EnumerationBoundError(
            "n_bits + p_width = %d exceeds bound %d"
            % (n_bits + p_width, MAX_ENUM_BITS))
    counts = Counter()
    for strat in strategies:
        terms = strat.terms
        for m_word in range(2 ** p_width):
            for x0 in range(2 ** n_bits):
                counts[embedder(x0, n_bits, m_word, p_width, terms)] += 1
    total = len(strategies) * 2 ** (n_bits + p_width)
    return DistributionTable(n_bits=n_bits, counts=dict(counts), total=total)


def check_stego_security(n_bits, p_width, strategy_samples=5,
                         key=None, embedder=embed_word) -> UniformityResult:
    """Enumerate the stego distribution and compare it, exactly, to the
    uniform distribution on n_bits-bit states."""
    if key is None:
        key = StegoKey(seed=b"stego-security-check")
    strategies = []
    for i in range(strategy_samples):
        k = StegoKey(seed=key.seed + i.to_bytes(4, "big"),
                     generator=key.generator,
                     bbs_p=key.bbs_p, bbs_q=key.bbs_q)
        strategies.append(generate_strategy(k, p_width, 2 * p_width + 1))
    table = enumerate_stego_distribution(n_bits, p_width, strategies,
                                         embedder=embedder)
    dev = table.max_deviation()
    return UniformityResult(uniform=(dev == 0), max_deviation=dev,
                            n_bits=n_bits, total=table.total)


def _chi2_sf(statistic, dof):
    # Survival function of the chi-square distribution via the
    # regularized upper incomplete gamma function.
    return float(gammaincc(dof / 2.0, statistic / 2.0))


def monobit_test(bits, alpha=DEFAULT_ALPHA) -> TestReport:
    """Frequency (monobit) test.

    Statistic is |#ones - #zeros| / sqrt(n); the p-value is
    erfc(s / sqrt(2)). Requires n >= 100.
    """
    n = len(bits)
    if n < 100:
        raise ValueError("monobit test needs at least 100 bits")
    ones = sum(bits)
    s = abs(2 * ones - n) / math.sqrt(n)
    p = math.erfc(s / math.sqrt(2))
    return TestReport(test_name="monobit", statistic=s, p_value=p,
                      passed=p >= alpha, sample_size=n)


def runs_test(bits, alpha=DEFAULT_ALPHA) -> TestReport:
    """Runs test: compares the number of maximal same-bit runs against
    its expectation under randomness.

    Applicable only when the ones proportion pi is within 2/sqrt(n) of
    1/2; otherwise the report is an automatic fail with a note.
    Requires n >= 100.
    """
    n = len(bits)
    if n < 100:
        raise ValueError("runs test needs at least 100 bits")
    pi = sum(bits) / n
    if abs(pi - 0.5) >= 2 / math.sqrt(n):
        return TestReport(test_name="runs", statistic=float("nan"),
                          p_value=0.0, passed=False, sample_size=n,
                          note="monobit precondition failed (pi=%.4f)" % pi)
    v = 1 + sum(1 for i in range(1, n) if bits[i] != bits[i - 1])
    num = abs(v - 2 * n * pi * (1 - pi))
    den = 2 * math.sqrt(2 * n) * pi * (1 - pi)
    p = math.erfc(num / den)
    return TestReport(test_name="runs", statistic=float(v), p_value=p,
                      passed=p >= alpha, sample_size=n)


def chi_square_uniformity(values, k, alpha=DEFAULT_ALPHA) -> TestReport:
    """Pearson chi-square test of the k-ary values against the uniform
    distribution on [0, k-1]. Requires at least 5*k samples."""
    n = len(values)
    if n < 5 * k:
        raise ValueError("need at least %d samples for %d categories"
                         % (5 * k, k))
    counts = Counter(values)
    for v in counts:
        if not 0 <= v < k:
            raise ValueError("value %r outside [0, %d)" % (v, k))
    expected = n / k
    stat = sum((counts.get(i, 0) - expected) ** 2 / expected
               for i in range(k))
    p = _chi2_sf(stat, k - 1)
    return TestReport(test_name="chi_square_uniformity", statistic=stat,
                      p_value=p, passed=p >= alpha, sample_size=n)


def lsb_chi_square_attack(img: Image) -> TestReport:
    """Pairs-of-values chi-square attack on the pixel histogram.

    LSB-plane embedding equalizes the histogram bins (2i, 2i+1). The
    reported p_value is the embedding likelihood: near 1 when the pair
    bins are equalized, near 0 for the skew typical of untouched
    covers. `passed` flags likelihoods >= 0.95 as suspected embedding.

    Pairs whose expected count falls below 5 are dropped; if fewer than
    two pairs remain the histogram is degenerate.
    """
    hist = Counter(img.pixels)
    observed = []
    expected = []
    for i in range(128):
        even = hist.get(2 * i, 0)
        odd = hist.get(2 * i + 1, 0)
        e = (even + odd) / 2.0
        if e < 5:
            continue
        observed.append(even)
        expected.append(e)
    if len(observed) < 2:
        raise DegenerateHistogramError(
            "fewer than two usable histogram pairs")
    stat = sum((o - e) ** 2 / e for o, e in zip(observed, expected))
    likelihood = _chi2_sf(stat, len(observed) - 1)
    return TestReport(test_name="lsb_chi_square_attack", statistic=stat,
                      p_value=likelihood, passed=likelihood >= 0.95,
                      sample_size=len(img.pixels),
                      note="p_value is the embedding likelihood")
