"""Exact rational scalars.

Everything in the package computes with ``gmpy2.mpq``; this module holds the
conversions to and from the ``"p/q"`` strings used by the JSON formats.
"""
from fractions import Fraction

from gmpy2 import mpq

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)


def to_q(value):
    """Coerce ints, Fractions, mpq values and ``"p/q"`` strings to mpq."""
    if isinstance(value, type(ONE)):
        return value
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return mpq(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def q_str(value) -> str:
    return str(to_q(value))
