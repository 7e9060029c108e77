"""Exact number handling for payoffs and coordinates.

Payoffs are ordinal: the only thing the solver ever does with them is
compare, and ties must be detected exactly. Coordinates feed a sign test
(the spacetime interval) that must not flip near the light cone. Both are
therefore kept as :class:`fractions.Fraction` end to end; binary floats
are rejected at the boundary instead of being silently rounded.
"""

from __future__ import annotations

from fractions import Fraction


def parse_exact(value: object, where: str = "number") -> Fraction:
    """Convert a JSON-decoded value into an exact rational.

    Accepts ints and strings ("3", "-1.5", "2/7"). Floats are rejected:
    a JSON literal like 0.1 has no exact decimal meaning once decoded.
    """
    if isinstance(value, bool):
        raise ValueError(f"{where}: expected an integer or decimal string, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"{where}: {value!r} is not a valid exact number") from exc
    if isinstance(value, float):
        raise ValueError(
            f"{where}: floating-point literal {value!r} not allowed; "
            "use an integer or a decimal string"
        )
    raise ValueError(f"{where}: expected an integer or decimal string, got {type(value).__name__}")


def format_exact(value: Fraction) -> int | str:
    """Render a Fraction for JSON so that parse_exact round-trips it.

    Integers come back as JSON ints; rationals with a terminating decimal
    expansion as decimal strings; everything else as "p/q".
    """
    if value.denominator == 1:
        return int(value)
    den = value.denominator
    twos = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    fives = 0
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den == 1:
        digits = max(twos, fives)
        scaled = value.numerator * 10**digits // value.denominator
        sign = "-" if scaled < 0 else ""
        text = str(abs(scaled)).rjust(digits + 1, "0")
        return f"{sign}{text[:-digits]}.{text[-digits:]}"
    return f"{value.numerator}/{value.denominator}"
