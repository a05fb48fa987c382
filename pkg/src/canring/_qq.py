"""Rational coefficient backend.

gmpy2's ``mpq`` is used when available; setting ``CANRING_PURE=1`` in the
environment forces the stdlib ``fractions.Fraction`` path.  The two backends are
never mixed inside one process.
"""

import os
from fractions import Fraction

BACKEND = "fraction"
QQ = Fraction

if os.environ.get("CANRING_PURE", "").strip() not in ("1", "true", "yes"):
    try:
        from gmpy2 import mpq as _mpq
    except ImportError:  # pragma: no cover - gmpy2 is optional
        pass
    else:
        QQ = _mpq
        BACKEND = "gmpy2"

ZERO = QQ(0)
ONE = QQ(1)


def qq(value):
    """Coerce an int, Fraction, mpq or ``"a/b"`` string to the backend type."""
    if isinstance(value, QQ):
        return value
    if isinstance(value, str):
        return QQ(Fraction(value.strip()).numerator, Fraction(value.strip()).denominator)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, int):
        return QQ(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return QQ(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def format_q(value) -> str:
    n, d = int(value.numerator), int(value.denominator)
    return str(n) if d == 1 else f"{n}/{d}"
