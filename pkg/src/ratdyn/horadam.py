"""Exact engine for second-order linear recurrences W(n+1) = p*W(n) + q*W(n-1).

All sequence values are computed over ``fractions.Fraction``, so identity
checks can demand residuals that are exactly zero.  Floating point enters
only through the characteristic roots of x**2 = p*x + q (``binet_roots``),
which are irrational for generic parameters.

Negative indices are defined by running the recurrence backwards,
W(n-1) = (W(n+1) - p*W(n)) / q, which needs q != 0.  For canonical seeds
(0, 1) and q = 1 this reproduces the reflection law W(-n) = (-1)**(n+1) * W(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Tuple, Union

from .equation import Rational, as_fraction
from .errors import (
    IndexConstraintViolated,
    NonRealRoots,
    SpecNotCanonical,
    ZeroDenominator,
)


@dataclass(frozen=True)
class HoradamSpec:
    """Recurrence data (a, b; p, q): seeds W0 = a, W1 = b and coefficients p, q."""

    a: Fraction
    b: Fraction
    p: Fraction
    q: Fraction

    def __post_init__(self):
        for name in ("a", "b", "p", "q"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.p * self.p + 4 * self.q == 0:
            raise ValueError("p^2 + 4q must be nonzero (characteristic roots coincide)")

    @classmethod
    def canonical(cls, p: Rational, q: Rational) -> "HoradamSpec":
        """The (0, 1; p, q) spec that ratio and identity statements assume."""
        return cls(Fraction(0), Fraction(1), as_fraction(p), as_fraction(q))

    @property
    def is_canonical(self) -> bool:
        return self.a == 0 and self.b == 1


def horadam_at(spec: HoradamSpec, n: int) -> Fraction:
    """Return W(n) exactly; n may be negative (backward recurrence, divides by q)."""
    if n >= 0:
        w0, w1 = spec.a, spec.b
        for _ in range(n):
            w0, w1 = w1, spec.p * w1 + spec.q * w0
        return w0
    if spec.q == 0:
        raise ZeroDenominator("negative indices require q != 0")
    w0, w1 = spec.a, spec.b
    for _ in range(-n):
        w0, w1 = (w1 - spec.p * w0) / spec.q, w0
    return w0


def horadam_range(spec: HoradamSpec, start: int, stop: int) -> list:
    """W(start), ..., W(stop) inclusive, computed in one sweep."""
    if stop < start:
        raise ValueError("stop must be >= start")
    return [horadam_at(spec, n) for n in range(start, stop + 1)]


def canonical_table(p: Rational, q: Rational, upto: int) -> list:
    """W(0..upto) for the canonical (0, 1; p, q) sequence."""
    p, q = as_fraction(p), as_fraction(q)
    ws = [Fraction(0), Fraction(1)]
    while len(ws) <= upto:
        ws.append(p * ws[-1] + q * ws[-2])
    return ws[: upto + 1]


@dataclass(frozen=True)
class QuadraticElement:
    """Element u + v*phi of the ring where phi**2 = p*phi + q, coordinates exact.

    Multiplication follows from the defining relation:
    (u1 + v1*phi)(u2 + v2*phi) = (u1*u2 + q*v1*v2) + (u1*v2 + u2*v1 + p*v1*v2)*phi.
    """

    u: Fraction
    v: Fraction
    p: Fraction
    q: Fraction

    def _check_compatible(self, other: "QuadraticElement") -> None:
        if self.p != other.p or self.q != other.q:
            raise ValueError("elements live in different quadratic rings")

    def __add__(self, other: "QuadraticElement") -> "QuadraticElement":
        self._check_compatible(other)
        return QuadraticElement(self.u + other.u, self.v + other.v, self.p, self.q)

    def __sub__(self, other: "QuadraticElement") -> "QuadraticElement":
        self._check_compatible(other)
        return QuadraticElement(self.u - other.u, self.v - other.v, self.p, self.q)

    def __mul__(self, other: "QuadraticElement") -> "QuadraticElement":
        self._check_compatible(other)
        u1, v1, u2, v2 = self.u, self.v, other.u, other.v
        return QuadraticElement(
            u1 * u2 + self.q * v1 * v2,
            u1 * v2 + u2 * v1 + self.p * v1 * v2,
            self.p,
            self.q,
        )

    def evaluate(self, root: float) -> float:
        """Numeric value u + v*root at a floating characteristic root."""
        return float(self.u) + float(self.v) * root

    @classmethod
    def one(cls, p: Rational, q: Rational) -> "QuadraticElement":
        return cls(Fraction(1), Fraction(0), as_fraction(p), as_fraction(q))

    @classmethod
    def phi(cls, p: Rational, q: Rational) -> "QuadraticElement":
        return cls(Fraction(0), Fraction(1), as_fraction(p), as_fraction(q))


def phi_power(p: Rational, q: Rational, n: int) -> QuadraticElement:
    """phi**n by exact repeated multiplication in the quadratic ring.

    For the canonical sequence the coordinates come out as
    phi**n = q*W(n-1) + W(n)*phi.
    """
    if n < 0:
        raise IndexConstraintViolated("phi_power requires n >= 0")
    acc = QuadraticElement.one(p, q)
    base = QuadraticElement.phi(p, q)
    for _ in range(n):
        acc = acc * base
    return acc


@dataclass(frozen=True)
class QuadraticRoots:
    """Floating characteristic data for x**2 = p*x + q."""

    phi_plus: float
    phi_minus: float
    discriminant: float
    A: float
    B: float

    def binet_value(self, n: int) -> float:
        """(A*phi_plus**n - B*phi_minus**n) / (phi_plus - phi_minus)."""
        return (self.A * self.phi_plus ** n - self.B * self.phi_minus ** n) / (
            self.phi_plus - self.phi_minus
        )


def binet_roots(p, q, a=0, b=1) -> QuadraticRoots:
    """Both roots (p +- sqrt(p^2+4q))/2 plus the coefficients A = b - a*phi_minus,
    B = b - a*phi_plus used in the closed form for W(n).

    Raises NonRealRoots when p^2 + 4q <= 0 (cannot happen for p, q > 0).
    """
    p, q, a, b = float(p), float(q), float(a), float(b)
    disc = p * p + 4.0 * q
    if disc <= 0.0:
        raise NonRealRoots(f"p^2 + 4q = {disc} is not positive")
    root = math.sqrt(disc)
    phi_plus = (p + root) / 2.0
    phi_minus = (p - root) / 2.0
    return QuadraticRoots(
        phi_plus=phi_plus,
        phi_minus=phi_minus,
        discriminant=disc,
        A=b - a * phi_minus,
        B=b - a * phi_plus,
    )


class IdentityKind(Enum):
    CONVOLUTION = "convolution"
    CASSINI = "cassini"
    DOCAGNE = "docagne"
    JOHNSON = "johnson"
    PHI_POWER = "phi_power"


def _require_canonical(spec: HoradamSpec) -> None:
    if not spec.is_canonical:
        raise SpecNotCanonical("identity checks are stated for seeds (0, 1)")


def check_identity(
    kind: IdentityKind, spec: HoradamSpec, indices: Tuple[int, ...]
) -> Union[Fraction, Tuple[Fraction, Fraction]]:
    """Exact residual LHS - RHS of one classical identity; zero means it holds.

    Index tuples per kind:
      CONVOLUTION (n, k): n > k+1, k >= 0,
          W(n) = W(k+1)*W(n-k) + q*W(k)*W(n-k-1)
      CASSINI (n,): n > 0,
          W(n-1)*W(n+1) - W(n)**2 = -(-q)**(n-1)
      DOCAGNE (n, r): n, r >= 1,
          W(n+r)*W(n+1) - W(n+r+1)*W(n) = (-1)**n * q**n * W(r)
      JOHNSON (k, l, m, n, r): k + l = m + n,
          W(k)*W(l) - W(m)*W(n) = (-q)**r * (W(k-r)*W(l-r) - W(m-r)*W(n-r))
      PHI_POWER (n,): n >= 1, residual pair of ring coordinates of
          phi**n - (q*W(n-1) + W(n)*phi)

    The phi-power law carries the factor q on W(n-1); dropping it is only
    valid when q = 1.
    """
    _require_canonical(spec)
    w = lambda i: horadam_at(spec, i)
    q = spec.q

    if kind is IdentityKind.CONVOLUTION:
        n, k = indices
        if k < 0 or n <= k + 1:
            raise IndexConstraintViolated("convolution requires n > k+1 and k >= 0")
        return w(n) - (w(k + 1) * w(n - k) + q * w(k) * w(n - k - 1))

    if kind is IdentityKind.CASSINI:
        (n,) = indices
        if n <= 0:
            raise IndexConstraintViolated("cassini requires n > 0")
        return w(n - 1) * w(n + 1) - w(n) ** 2 + (-q) ** (n - 1)

    if kind is IdentityKind.DOCAGNE:
        n, r = indices
        if n < 1 or r < 1:
            raise IndexConstraintViolated("docagne requires n, r >= 1")
        return w(n + r) * w(n + 1) - w(n + r + 1) * w(n) - (-1) ** n * q ** n * w(r)

    if kind is IdentityKind.JOHNSON:
        k, l, m, n, r = indices
        if k + l != m + n:
            raise IndexConstraintViolated("johnson requires k + l = m + n")
        lhs = w(k) * w(l) - w(m) * w(n)
        rhs = (-q) ** r * (w(k - r) * w(l - r) - w(m - r) * w(n - r))
        return lhs - rhs

    if kind is IdentityKind.PHI_POWER:
        (n,) = indices
        if n < 1:
            raise IndexConstraintViolated("phi_power check requires n >= 1")
        element = phi_power(spec.p, spec.q, n)
        return (element.u - q * w(n - 1), element.v - w(n))

    raise ValueError(f"unknown identity kind: {kind!r}")


def ratio_estimate(spec: HoradamSpec, r: int, n: int) -> float:
    """W(n+r)/W(n) as a float; for large n this approaches phi_plus**r."""
    wn = horadam_at(spec, n)
    if wn == 0:
        raise ZeroDenominator(f"W({n}) = 0")
    return float(horadam_at(spec, n + r) / wn)
