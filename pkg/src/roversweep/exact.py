"""Exact arithmetic for weights, times and deadlines.

Finite values are plain ints or ``fractions.Fraction`` (never floats: the
solvers compare sums of weights for equality, and a float tie would make
feasibility verdicts platform-dependent).  ``INFINITY`` is a shared
sentinel that compares greater than every finite value and absorbs
addition; it doubles as "no deadline" and "unreachable".

Integral values are kept as ints where convenient.  ``Fraction``
interoperates exactly with ints, and integer-weight instances (the common
case) stay fast in the hot DP loops.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class _Infinity:
    """Positive infinity.  A single shared instance, see ``INFINITY``."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    # --- ordering: greater than every finite number, equal to itself ---

    def __eq__(self, other):
        return other is self

    def __ne__(self, other):
        return other is not self

    def __hash__(self):
        return hash("roversweep.INFINITY")

    def __lt__(self, other):
        if isinstance(other, (_Infinity, int, Fraction)):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, _Infinity):
            return True
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, _Infinity):
            return False
        if isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (_Infinity, int, Fraction)):
            return True
        return NotImplemented

    # --- arithmetic: absorbs addition, rejects indeterminate forms ---

    def __add__(self, other):
        if isinstance(other, (_Infinity, int, Fraction)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, _Infinity):
            raise ArithmeticError("INFINITY - INFINITY is undefined")
        if isinstance(other, (int, Fraction)):
            return self
        return NotImplemented

    def __rsub__(self, other):
        raise ArithmeticError("cannot subtract INFINITY from a finite value")

    def __mul__(self, other):
        if isinstance(other, _Infinity):
            return self
        if isinstance(other, (int, Fraction)):
            if other > 0:
                return self
            raise ArithmeticError("INFINITY times a non-positive value is undefined")
        return NotImplemented

    __rmul__ = __mul__

    def __bool__(self):
        return True


INFINITY = _Infinity()

#: A non-negative exact rational, or INFINITY.
ExactNumber = Union[int, Fraction, _Infinity]


def is_finite(x: ExactNumber) -> bool:
    return x is not INFINITY


def simplify(x: ExactNumber) -> ExactNumber:
    """Collapse integral Fractions to plain ints (value-preserving)."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def parse_number(text: str) -> Union[int, Fraction]:
    """Parse a decimal string ("2", "0.5") or a ratio string ("3/4") exactly."""
    value = Fraction(text.strip())
    return simplify(value)


def format_number(x: ExactNumber) -> str:
    """Render exactly: ints as "p", proper fractions as "p/q", INFINITY as "inf"."""
    if x is INFINITY:
        return "inf"
    x = simplify(x)
    if isinstance(x, int):
        return str(x)
    return f"{x.numerator}/{x.denominator}"


def decimal_str(x: ExactNumber, digits: int = 6) -> str:
    """Human-readable decimal approximation (display only, never computed with)."""
    if x is INFINITY:
        return "inf"
    try:
        return f"{float(x):.{digits}g}"
    except OverflowError:
        return str(int(x))  # magnitude beyond float range: integer digits suffice


def halve(x: ExactNumber) -> ExactNumber:
    """Exact division by two."""
    if x is INFINITY:
        return INFINITY
    if isinstance(x, int):
        return x // 2 if x % 2 == 0 else Fraction(x, 2)
    return simplify(x / 2)


def exact_min(*values: ExactNumber) -> ExactNumber:
    return min(values)


def exact_max(*values: ExactNumber) -> ExactNumber:
    return max(values)
