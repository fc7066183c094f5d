"""Parameter container for the two difference equations under study.

A single ``EquationSpec`` describes one first-order map
``x -> q / (sign*p + x**nu)`` where ``sign`` is +1 on the plus branch and
-1 on the minus branch.  Parameters are exact rationals so that orbits can
be iterated without rounding; floats are rejected at construction to keep
the exact plane honest.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

Rational = Union[int, str, Fraction]


def as_fraction(value: Rational) -> Fraction:
    """Convert to Fraction, refusing floats (use strings like '1/2' instead)."""
    if isinstance(value, float):
        raise TypeError("expected an exact rational (int, str or Fraction), got float")
    return Fraction(value)


class Branch(Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class EquationSpec:
    """One equation x(n+1) = q / (sign*p + x(n)**nu) with p, q > 0 and nu >= 1."""

    branch: Branch
    p: Fraction
    q: Fraction
    nu: int = 1

    def __post_init__(self):
        object.__setattr__(self, "p", as_fraction(self.p))
        object.__setattr__(self, "q", as_fraction(self.q))
        if self.p <= 0 or self.q <= 0:
            raise ValueError("p and q must be positive")
        if not isinstance(self.nu, int) or self.nu < 1:
            raise ValueError("nu must be an integer >= 1")

    @classmethod
    def plus(cls, p: Rational, q: Rational, nu: int = 1) -> "EquationSpec":
        return cls(Branch.PLUS, as_fraction(p), as_fraction(q), nu)

    @classmethod
    def minus(cls, p: Rational, q: Rational, nu: int = 1) -> "EquationSpec":
        return cls(Branch.MINUS, as_fraction(p), as_fraction(q), nu)

    @property
    def sign(self) -> int:
        """+1 for the +p denominator, -1 for the -p denominator."""
        return 1 if self.branch is Branch.PLUS else -1

    def denominator(self, x):
        """sign*p + x**nu, staying in the arithmetic of x (exact or float)."""
        return x ** self.nu + self.sign * self.p
