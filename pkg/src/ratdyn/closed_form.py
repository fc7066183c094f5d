"""Closed-form solutions, forbidden sets and product limits for nu = 1.

For nu = 1 both maps are Moebius transformations and every orbit is a
rational expression in the canonical recurrence values W(n) = W(n; 0,1,p,q):

    plus branch:   x(n) = q*(W(n) + x0*W(n-1)) / (W(n+1) + x0*W(n))
    minus branch:  y(n) = -q*(W(n) - y0*W(n-1)) / (W(n+1) - y0*W(n))

The minus form is the plus form conjugated through y = -x; equivalently it
is the negative-index solution formula with the signs of the odd-index
terms folded in.  Everything here runs on exact rationals except the
limit values, which involve the irrational roots phi_plus/phi_minus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

from . import dynamics
from .equation import Branch, EquationSpec, Rational, as_fraction
from .errors import (
    ForbiddenInitialCondition,
    InitialAtMinusPhiPlus,
    Singularity,
    ZeroDenominator,
)
from .horadam import binet_roots, canonical_table

EXCLUDED_POINT_TOL = 1e-12


def _require_nu_one(eq: EquationSpec) -> None:
    if eq.nu != 1:
        raise ValueError("closed-form operations require nu = 1")


def rational_sqrt(value: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def rational_phi_plus(p: Fraction, q: Fraction) -> Optional[Fraction]:
    """phi_plus as an exact rational when p^2 + 4q is a perfect square, else None."""
    root = rational_sqrt(p * p + 4 * q)
    if root is None:
        return None
    return (p + root) / 2


@dataclass(frozen=True)
class ForbiddenPoint:
    """Initial condition that reaches a zero denominator after exactly m steps."""

    m: int
    value: Fraction


def forbidden_points(eq: EquationSpec, depth: int) -> List[ForbiddenPoint]:
    """The first `depth` forbidden initial conditions, ordered by depth.

    On the plus branch these are -W(m+1)/W(m); on the minus branch
    +W(m+1)/W(m).  Iterating forward from the depth-m point produces a zero
    denominator at step m exactly, never earlier.
    """
    _require_nu_one(eq)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    ws = canonical_table(eq.p, eq.q, depth + 1)
    sign = -1 if eq.branch is Branch.PLUS else 1
    return [ForbiddenPoint(m, sign * ws[m + 1] / ws[m]) for m in range(1, depth + 1)]


def forbidden_depth(eq: EquationSpec, x0: Rational, depth: int = 64) -> Optional[int]:
    """Depth m <= depth at which x0 is forbidden, or None if clear to `depth`.

    The forbidden set is countably infinite, so None certifies only
    "clear to this depth", never global membership.
    """
    _require_nu_one(eq)
    x0 = as_fraction(x0)
    ws = canonical_table(eq.p, eq.q, depth + 1)
    sign = 1 if eq.branch is Branch.PLUS else -1
    for m in range(1, depth + 1):
        if ws[m + 1] + sign * x0 * ws[m] == 0:
            return m
    return None


def solve_closed_form(eq: EquationSpec, x0: Rational, n: int) -> Fraction:
    """Value of the orbit at index n straight from the closed form.

    Equals exact forward iteration whenever the orbit exists; raises
    ForbiddenInitialCondition(m) for the first m <= n whose denominator
    vanishes.
    """
    _require_nu_one(eq)
    if n < 0:
        raise ValueError("n must be nonnegative")
    x0 = as_fraction(x0)
    ws = canonical_table(eq.p, eq.q, n + 1)
    sign = 1 if eq.branch is Branch.PLUS else -1
    for m in range(1, n + 1):
        if ws[m + 1] + sign * x0 * ws[m] == 0:
            raise ForbiddenInitialCondition(m)
    if n == 0:
        return x0
    if eq.branch is Branch.PLUS:
        return eq.q * (ws[n] + x0 * ws[n - 1]) / (ws[n + 1] + x0 * ws[n])
    return -eq.q * (ws[n] - x0 * ws[n - 1]) / (ws[n + 1] - x0 * ws[n])


class RootChoice(Enum):
    PHI_PLUS = "phi_plus"
    PHI_MINUS = "phi_minus"


def fixed_solution(eq: EquationSpec, which: RootChoice) -> Tuple[float, float]:
    """(initial, constant_value) of a genuinely constant orbit.

    Plus branch: the constant solutions are q/phi_plus and q/phi_minus (the
    two fixed points of the map, also expressible as phi_minus - p reflected);
    the orbit is constant exactly when started there.  Minus branch: the
    fixed points are phi_plus and phi_minus themselves.

    Note q/phi coincides with 1/phi only when q = 1; the initial condition
    returned here is the fixed point itself so that iteration reproduces
    `constant_value` at every step.
    """
    _require_nu_one(eq)
    roots = binet_roots(float(eq.p), float(eq.q))
    root = roots.phi_plus if which is RootChoice.PHI_PLUS else roots.phi_minus
    if eq.branch is Branch.PLUS:
        value = float(eq.q) / root
        return (value, value)
    return (root, root)


def asymptotic_limit(eq: EquationSpec) -> float:
    """Limit of generic orbits: -phi_minus on the plus branch, phi_minus on minus."""
    _require_nu_one(eq)
    roots = binet_roots(float(eq.p), float(eq.q))
    if eq.branch is Branch.PLUS:
        return -roots.phi_minus
    return roots.phi_minus


def excluded_points(eq: EquationSpec) -> Tuple[float, float]:
    """The two irrational initial conditions excluded from the solution set:
    (1/phi_plus, 1/phi_minus) on the plus branch, (phi_plus, phi_minus) on minus."""
    _require_nu_one(eq)
    roots = binet_roots(float(eq.p), float(eq.q))
    if eq.branch is Branch.PLUS:
        return (1.0 / roots.phi_plus, 1.0 / roots.phi_minus)
    return (roots.phi_plus, roots.phi_minus)


def near_excluded_point(eq: EquationSpec, x0, tol: float = EXCLUDED_POINT_TOL) -> bool:
    """Floating-plane flag: is x0 within tol of one of the excluded points?

    For generic integer parameters the excluded points are irrational, hence
    unreachable from rational x0; this proximity check is the honest
    substitute for exact membership.
    """
    x = float(x0)
    return any(abs(x - point) < tol for point in excluded_points(eq))


def conjugate_orbit_check(p: Rational, q: Rational, x0: Rational, n: int) -> Fraction:
    """x(n) + y(n) with y0 = -x0, both from their closed forms; exactly zero
    when the sign conjugacy between the two branches holds."""
    p, q, x0 = as_fraction(p), as_fraction(q), as_fraction(x0)
    xn = solve_closed_form(EquationSpec.plus(p, q), x0, n)
    yn = solve_closed_form(EquationSpec.minus(p, q), -x0, n)
    return xn + yn


def product_closed_form(p: Rational, q: Rational, x0: Rational, n: int) -> Fraction:
    """Running product x0*x1*...*xn of the plus-branch orbit as the single
    rational expression q**n * x0 / (W(n+1) + x0*W(n))."""
    p, q, x0 = as_fraction(p), as_fraction(q), as_fraction(x0)
    ws = canonical_table(p, q, n + 1)
    den = ws[n + 1] + x0 * ws[n]
    if den == 0:
        raise ZeroDenominator(f"product denominator vanishes at n = {n}")
    return q ** n * x0 / den


class Regime(Enum):
    P_GREATER_QM1 = "PGreaterQm1"
    P_EQUAL_QM1 = "PEqualQm1"
    P_LESS_QM1 = "PLessQm1"


@dataclass(frozen=True)
class ProductAnalysis:
    """Partial products of an orbit plus the regime-determined limit prediction.

    regime is fixed by sign(p - (q-1)) alone.  predicted_limit is exact:
    0 when p > q-1; x0*(q+1)/(q+x0) when p = q-1 on the plus branch (in this
    regime sqrt(p^2+4q) = q+1 and phi_plus = q are rational).  On the minus
    branch with p = q-1 the partial products split by parity: the even-index
    subsequence tends to predicted_limit = y0*(q+1)/(q-y0) and the odd-index
    subsequence to its negative (`alternating` is set).  When p < q-1 the
    products diverge and predicted_limit is None; divergence is certified by
    growth of the running maximum, not asserted symbolically.
    """

    regime: Regime
    predicted_limit: Optional[Fraction]
    alternating: bool
    partials: Tuple[Fraction, ...]


def product_analysis(eq: EquationSpec, x0: Rational, steps: int) -> ProductAnalysis:
    """Exact partial products prod(i=0..n) x(i) for n = 0..steps with limit data."""
    _require_nu_one(eq)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    x0 = as_fraction(x0)

    # The repelling fixed point makes the product formula denominator vanish
    # in the limit; it is representable by a rational x0 only when the
    # discriminant is a perfect square.
    phi_plus = rational_phi_plus(eq.p, eq.q)
    if phi_plus is not None:
        blocked = -phi_plus if eq.branch is Branch.PLUS else phi_plus
        if x0 == blocked:
            raise InitialAtMinusPhiPlus(f"initial condition {x0} is the repelling fixed point")

    partials: List[Fraction] = []
    x = x0
    acc = Fraction(1)
    for m in range(steps + 1):
        if m > 0:
            try:
                x = dynamics.step(eq, x)
            except Singularity:
                raise ForbiddenInitialCondition(m)
        acc *= x
        partials.append(acc)

    diff = eq.p - (eq.q - 1)
    if diff > 0:
        regime = Regime.P_GREATER_QM1
        predicted: Optional[Fraction] = Fraction(0)
        alternating = False
    elif diff == 0:
        regime = Regime.P_EQUAL_QM1
        if eq.branch is Branch.PLUS:
            predicted = x0 * (eq.q + 1) / (eq.q + x0)
            alternating = False
        else:
            predicted = x0 * (eq.q + 1) / (eq.q - x0)
            alternating = True
    else:
        regime = Regime.P_LESS_QM1
        predicted = None
        alternating = False
    return ProductAnalysis(
        regime=regime,
        predicted_limit=predicted,
        alternating=alternating,
        partials=tuple(partials),
    )


def reconstruct_horadam(p: Rational, q: Rational, k: int, n: int) -> Fraction:
    """Recover W(n) from the orbit started at x0 = q*W(k)/W(k+1).

    Iterates the plus map n-(k+1) steps exactly and returns
    q**(n-k-1) * W(k+1) / prod(i=1..n-k-1) x(i), which equals W(n).
    """
    p, q = as_fraction(p), as_fraction(q)
    if k < 0:
        raise ValueError("k must be >= 0")
    if n <= k + 1:
        raise ValueError("n must exceed k + 1")
    ws = canonical_table(p, q, k + 1)
    eq = EquationSpec.plus(p, q)
    x = q * ws[k] / ws[k + 1]
    prod = Fraction(1)
    for _ in range(n - k - 1):
        x = dynamics.step(eq, x)  # positive orbit, cannot be singular
        prod *= x
    return q ** (n - k - 1) * ws[k + 1] / prod


def docagne_product(p: Rational, q: Rational, n: int, r: int) -> Fraction:
    """(-1)**n * prod(i=1..n) x(i) from x0 = -W(n+r+1)/W(n+r), by exact iteration.

    The starting point is forbidden at depth n+r, so the n iterates used
    here always exist.  The value equals W(n+r)/W(r).
    """
    p, q = as_fraction(p), as_fraction(q)
    if n < 1 or r < 1:
        raise ValueError("n and r must be >= 1")
    ws = canonical_table(p, q, n + r + 1)
    eq = EquationSpec.plus(p, q)
    x = -ws[n + r + 1] / ws[n + r]
    prod = Fraction(1)
    for _ in range(n):
        try:
            x = dynamics.step(eq, x)
        except Singularity as exc:  # unreachable for admissible n, r
            raise ZeroDenominator(str(exc))
        prod *= x
    return (-1) ** n * prod


def johnson_product(p: Rational, q: Rational, r: int, n: int) -> Fraction:
    """(-1)**(r+1) * q**(r-n) * prod(i=1..n) x(i) from x0 = -W(r+1)/W(r), n > r.

    The prescribed x0 is itself forbidden at depth r, so for n > r the literal
    orbit stops before step n; the product is evaluated through its closed
    rational expression q**n / (W(n+1) + x0*W(n)), which continues the running
    product past the singular step.  The value equals W(r)/W(n-r).
    """
    p, q = as_fraction(p), as_fraction(q)
    if r < 1:
        raise ValueError("r must be >= 1")
    if n <= r:
        raise ValueError("n must exceed r")
    ws = canonical_table(p, q, max(n, r) + 1)
    x0 = -ws[r + 1] / ws[r]
    den = ws[n + 1] + x0 * ws[n]
    if den == 0:
        raise ZeroDenominator("product expression undefined at this index pair")
    prod = q ** n / den
    return (-1) ** (r + 1) * q ** (r - n) * prod
