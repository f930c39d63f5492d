"""Arbitrary-precision scalar support.

All coordinates, scales and log-quantities in this package are gmpy2.mpfr
values with a configurable mantissa width (default 256 bits).  With dyadic
construction ratios every generated endpoint is exactly representable, so
covering counts are free of rounding artifacts even for very deep sets.

gmpy2 contexts are thread-local; worker threads must call
:func:`apply_context` before doing arithmetic.
"""

from __future__ import annotations

import os
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

DEFAULT_PRECISION_BITS = 256
MIN_PRECISION_BITS = 53

_precision_bits = DEFAULT_PRECISION_BITS


def _env_bits() -> int:
    raw = os.environ.get("QADIM_PRECISION_BITS")
    if raw is None:
        return DEFAULT_PRECISION_BITS
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"QADIM_PRECISION_BITS must be an integer, got {raw!r}")


def set_precision(bits: int) -> int:
    """Set the working mantissa width in bits (clamped to >= 53); returns it."""
    global _precision_bits
    if bits < MIN_PRECISION_BITS:
        raise ValueError(f"precision must be >= {MIN_PRECISION_BITS} bits, got {bits}")
    _precision_bits = int(bits)
    apply_context()
    return _precision_bits


def get_precision() -> int:
    return _precision_bits


def apply_context() -> None:
    """Install the package precision into the current thread's gmpy2 context."""
    ctx = gmpy2.get_context()
    ctx.precision = _precision_bits


def scalar(x) -> mpfr:
    """Convert int/float/str/Fraction/mpfr to an mpfr at working precision."""
    if isinstance(x, mpfr):
        return x
    if isinstance(x, Fraction):
        return mpfr(x.numerator) / mpfr(x.denominator)
    return mpfr(x)


def pow2(e) -> mpfr:
    """2**e for an integer or scalar exponent."""
    if isinstance(e, int):
        return gmpy2.exp2(mpfr(e))
    return gmpy2.exp2(scalar(e))


def fmt(x, digits: int = 17) -> str:
    """Deterministic decimal rendering, safe for magnitudes beyond float range."""
    if isinstance(x, (int,)):
        return str(x)
    v = scalar(x)
    return "{:.{d}Ng}".format(v, d=digits)


# Initialise the importing thread.
_precision_bits = _env_bits()
if _precision_bits < MIN_PRECISION_BITS:
    raise ValueError(
        f"QADIM_PRECISION_BITS={_precision_bits} below minimum {MIN_PRECISION_BITS}"
    )
apply_context()
