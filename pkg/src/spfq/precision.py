"""Working-precision policy for all high-precision evaluation.

Default is 160 bits; the SPFQ_PRECISION environment variable overrides it
but never below 113 bits (IEEE quad significand).  Values landing within
ten^-12 of a decision threshold are treated as inconclusive rather than
silently passed or failed.
"""

from __future__ import annotations

import os
from fractions import Fraction

from mpmath import mp

DEFAULT_PREC_BITS = 160
MIN_PREC_BITS = 113

INCONCLUSIVE_BAND = Fraction(1, 10 ** 12)


def working_prec() -> int:
    raw = os.environ.get("SPFQ_PRECISION")
    if raw is None:
        return DEFAULT_PREC_BITS
    try:
        bits = int(raw)
    except ValueError:
        return DEFAULT_PREC_BITS
    return max(bits, MIN_PREC_BITS)


def mpf_frac(x):
    """Exact conversion of a Fraction/int to mpf at the current precision."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / mp.mpf(x.denominator)
    return mp.mpf(x)
