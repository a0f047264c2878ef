"""Scalar handling for the two numeric modes.

Exact mode stores every monetary quantity as a :class:`fractions.Fraction`;
float mode stores Python floats and compares with an absolute tolerance.
"""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union[Fraction, float]

TOL = 1e-9


def to_exact(value) -> Fraction:
    """Convert ``value`` to a Fraction without precision loss.

    Strings may be integers, decimals (``"2.2"``) or fractions (``"22/10"``).
    Floats go through their shortest repr, so ``2.2`` becomes ``11/5``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not monetary amounts")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite amount {value!r}")
        return Fraction(repr(value))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse amount {value!r}") from exc
    # gmpy2 / numpy scalars and similar
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot convert {value!r} to an exact amount") from exc


def to_float(value) -> float:
    if isinstance(value, str):
        return float(to_exact(value))
    return float(value)


def convert(value, exact: bool) -> Scalar:
    return to_exact(value) if exact else to_float(value)


def tol(exact: bool) -> float:
    return 0 if exact else TOL


def lt(a, b, exact: bool) -> bool:
    """Strict ``a < b``; in float mode ``a`` must be below ``b`` by more than TOL."""
    return a < b if exact else a < b - TOL


def le(a, b, exact: bool) -> bool:
    return a <= b if exact else a <= b + TOL


def eq(a, b, exact: bool) -> bool:
    return a == b if exact else abs(a - b) <= TOL


def is_zero(a, exact: bool) -> bool:
    return a == 0 if exact else abs(a) <= TOL


def format_scalar(value) -> str:
    """Canonical text form: ``"11/5"``, ``"3"`` or a float repr."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return repr(float(value))
