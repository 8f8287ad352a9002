"""Shifted diagonal lattices attached to m-gonal forms.

Completing the square turns sum(a_j * P_m(x_j)) = ell into a counting
problem on a shifted lattice: with s = (m-4) / (2*(m-2)) in lowest terms
c/N (c normalized into [0, N)), the integer ell is represented by the form
iff the rational target

    h(ell) = 2*ell/(m-2) + sum(a_j) * s**2

is represented by the quadratic map sum(a_j * (lambda_j - c/N)**2) over
integer vectors lambda.  The sign of the shift is irrelevant to counts
because negation is a bijection of the integer vectors (covered by tests,
not assumed silently).

All arithmetic here is exact rational; no floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalConsistencyError, ResourceCapError
from .polygonal import PolygonalForm, represented_set

DEFAULT_CELL_CAP = 10**8


def shift_fraction(m: int) -> Fraction:
    """(m-4) / (2*(m-2)) in lowest terms; the per-coordinate shift size."""
    if m < 3:
        raise ValueError("m must be >= 3")
    return Fraction(m - 4, 2 * (m - 2))


@dataclass(frozen=True)
class ShiftedDiagonalLattice:
    """Diagonal gram coefficients plus a shift of -c/N in every coordinate.

    N is the conductor: the least positive integer with N * shift integral.
    c is coprime to N and reduced into [0, N); c = 0 forces N = 1 and means
    no shift at all.
    """

    gram: tuple[int, ...]
    c: int
    N: int

    def __post_init__(self) -> None:
        if not isinstance(self.gram, tuple):
            object.__setattr__(self, "gram", tuple(self.gram))
        for a in self.gram:
            if not isinstance(a, int) or a < 1:
                raise ValueError(f"gram entries must be positive integers, got {a!r}")
        if self.N < 1 or not (0 <= self.c < self.N):
            raise ValueError("need 0 <= c < N with N >= 1")
        if math.gcd(self.c, self.N) != 1:
            raise ValueError("c must be coprime to N")

    @property
    def n(self) -> int:
        return len(self.gram)

    @property
    def shift(self) -> Fraction:
        return Fraction(self.c, self.N)

    @property
    def squared_shift_sum(self) -> Fraction:
        """sum(a_j) * (c/N)**2, the constant part of every target value."""
        return sum(self.gram) * self.shift**2


def lattice_from_form(form: PolygonalForm) -> ShiftedDiagonalLattice:
    """The shifted lattice whose counts answer representation questions for
    the form."""
    s = shift_fraction(form.m)
    N = s.denominator
    c = s.numerator % N
    return ShiftedDiagonalLattice(form.coeffs, c, N)


def h_of_ell(form: PolygonalForm, ell: int) -> Fraction:
    """The lattice target corresponding to the integer ell.

    Strictly increasing in ell; h(0) equals the squared-shift constant.
    """
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    s = shift_fraction(form.m)
    return Fraction(2 * ell, form.m - 2) + sum(form.coeffs) * s**2


def admissible(X: ShiftedDiagonalLattice, h: Fraction | int) -> bool:
    """Integrality condition the density machinery needs of a target:

        (h - sum(a_j * (c/N)**2)) * gcd(N, 4) * N / 8  must be an integer.
    """
    h = Fraction(h)
    val = (h - X.squared_shift_sum) * math.gcd(X.N, 4) * X.N / 8
    return val.denominator == 1


def representation_count(
    X: ShiftedDiagonalLattice,
    h: Fraction | int,
    *,
    cell_cap: int = DEFAULT_CELL_CAP,
) -> int:
    """Number of integer vectors lambda with sum(a_j*(lambda_j - c/N)**2) = h.

    Exact enumeration: clearing denominators, count y_j = N*lambda_j - c
    (so y_j = -c mod N) with sum(a_j * y_j**2) = h * N**2.  Coordinates are
    consumed largest-coefficient-first for pruning.  The estimated search
    box is checked against cell_cap before any work is done.
    """
    h = Fraction(h)
    if h < 0:
        raise ValueError("target must be nonnegative")
    H_frac = h * X.N * X.N
    if H_frac.denominator != 1:
        return 0
    H = int(H_frac)
    if X.n == 0:
        return 1 if H == 0 else 0

    coeffs = sorted(X.gram, reverse=True)
    cells = 1
    for a in coeffs:
        cells *= 2 * math.isqrt(H // a) // X.N + 2
        if cells > cell_cap:
            raise ResourceCapError(
                f"enumeration box of ~{cells} cells exceeds cap {cell_cap}"
            )

    N, c = X.N, X.c
    residue = (-c) % N

    def count_from(j: int, rem: int) -> int:
        a = coeffs[j]
        if j == len(coeffs) - 1:
            if rem % a:
                return 0
            sq = rem // a
            s = math.isqrt(sq)
            if s * s != sq:
                return 0
            if s == 0:
                return 1 if residue == 0 else 0
            total = 0
            if s % N == residue:
                total += 1
            if (-s) % N == residue:
                total += 1
            return total
        total = 0
        limit = math.isqrt(rem // a)
        y = -limit + ((residue - (-limit)) % N)  # smallest y >= -limit, y = -c mod N
        while y <= limit:
            total += count_from(j + 1, rem - a * y * y)
            y += N
        return total

    return count_from(0, H)


def represents_equivalence_check(form: PolygonalForm, ell: int, bound: int) -> bool:
    """Answer "does the form represent ell?" by two independent routes and
    insist they agree.

    Route one is the bitset DP over [0, bound]; route two counts lattice
    vectors hitting h(ell).  Disagreement is a library bug and raises
    InternalConsistencyError.
    """
    if not 0 <= ell <= bound:
        raise ValueError("need 0 <= ell <= bound")
    by_set = ell in represented_set(form, bound)
    by_count = representation_count(lattice_from_form(form), h_of_ell(form, ell)) > 0
    if by_set != by_count:
        raise InternalConsistencyError(
            f"set membership says {by_set} but lattice count says {by_count} "
            f"for m={form.m}, coeffs={form.coeffs}, ell={ell}"
        )
    return by_set
