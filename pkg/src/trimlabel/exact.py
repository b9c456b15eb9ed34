"""Exact rational values: parsing and printing.

Every numeric quantity in this package is a ``fractions.Fraction`` kept in
lowest terms.  Input is decimal strings (or ``p/q``) converted exactly;
output is an exact decimal when one exists and ``p/q`` otherwise.  No
floating point enters any comparison.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError

Rational = Fraction


def parse_exact(text: str) -> Fraction:
    """Convert a decimal string like ``-2.375`` or a fraction ``3/4`` exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not an exact rational: {text!r}") from exc


def format_exact(value: Fraction) -> str:
    """Shortest exact decimal if the denominator is 2^a*5^b, else ``p/q``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    shift = max(twos, fives)
    digits = abs(value.numerator) * 10**shift // value.denominator
    text = str(digits).rjust(shift + 1, "0")
    sign = "-" if value.numerator < 0 else ""
    return f"{sign}{text[:-shift]}.{text[-shift:]}"
