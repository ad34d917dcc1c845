"""Exact scalar arithmetic: rationals, sparse polynomials, rational
matrices with deterministic reduction, and series on a shifted exponent
lattice.

Everything here is exact.  Rationals are ``fractions.Fraction`` (always
in lowest terms), polynomials and matrices store only nonzero entries,
and all reductions are deterministic: the same input always yields the
same object, independent of construction order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

#: Exact rational scalar type used throughout the package.
Rational = Fraction


def format_rational(q: Fraction) -> str:
    """Serialise ``q`` as ``"num/den"``, or a bare integer when den == 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse a rational literal ("5", "-7/3"); always in lowest terms."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational literal: {text!r}") from exc
    return value


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise DomainError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial over the rationals in the variable ``z``.

    Stored sparsely as a tuple of ``(degree, coefficient)`` pairs, sorted
    by degree with no zero coefficients, so equal polynomials are equal
    (and hashable) as objects.
    """

    terms: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        cleaned: dict[int, Fraction] = {}
        for degree, coeff in self.terms:
            if degree < 0:
                raise DomainError("polynomial degrees must be nonnegative")
            c = _coerce(coeff)
            if c:
                cleaned[degree] = cleaned.get(degree, Fraction(0)) + c
        normalised = tuple(
            (d, cleaned[d]) for d in sorted(cleaned) if cleaned[d]
        )
        object.__setattr__(self, "terms", normalised)

    @classmethod
    def constant(cls, value) -> Polynomial:
        return cls(((0, _coerce(value)),))

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> Polynomial:
        return cls(((degree, _coerce(coeff)),))

    @classmethod
    def from_coefficients(cls, dense) -> Polynomial:
        """Build from a dense low-to-high coefficient list."""
        return cls(tuple(enumerate(dense)))

    @property
    def degree(self) -> int:
        """Degree, with the convention that the zero polynomial has -1."""
        return self.terms[-1][0] if self.terms else -1

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, degree: int) -> Fraction:
        for d, c in self.terms:
            if d == degree:
                return c
        return Fraction(0)

    def leading_coefficient(self) -> Fraction:
        return self.terms[-1][1] if self.terms else Fraction(0)

    def coefficients(self) -> list[Fraction]:
        """Dense low-to-high coefficient list (empty for zero)."""
        out = [Fraction(0)] * (self.degree + 1)
        for d, c in self.terms:
            out[d] = c
        return out

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return Polynomial(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple((d, -c) for d, c in self.terms))

    def __sub__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self + (-other)

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            return Polynomial(tuple((d, c * other) for d, c in self.terms))
        if not isinstance(other, Polynomial):
            return NotImplemented
        acc: dict[int, Fraction] = {}
        for d1, c1 in self.terms:
            for d2, c2 in other.terms:
                acc[d1 + d2] = acc.get(d1 + d2, Fraction(0)) + c1 * c2
        return Polynomial(tuple(acc.items()))

    def __rmul__(self, other) -> Polynomial:
        return self.__mul__(other)

    def shift(self, amount: int) -> Polynomial:
        """Multiply by ``z**amount``."""
        return Polynomial(tuple((d + amount, c) for d, c in self.terms))

    def derivative(self) -> Polynomial:
        return Polynomial(tuple((d - 1, c * d) for d, c in self.terms if d))

    def __call__(self, point) -> Fraction:
        x = _coerce(point)
        total = Fraction(0)
        for d, c in self.terms:
            total += c * x**d
        return total

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if not isinstance(other, Polynomial) or other.is_zero():
            raise DomainError("polynomial division by zero")
        quotient = Polynomial()
        remainder = self
        while remainder.degree >= other.degree:
            shift = remainder.degree - other.degree
            factor = remainder.leading_coefficient() / other.leading_coefficient()
            step = Polynomial.monomial(shift, factor)
            quotient = quotient + step
            remainder = remainder - step * other
        return quotient, remainder

    def __floordiv__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def exact_divide(self, other: Polynomial) -> Polynomial:
        quotient, remainder = divmod(self, other)
        if not remainder.is_zero():
            raise DomainError("division is not exact")
        return quotient

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for d, c in reversed(self.terms):
            if d == 0:
                parts.append(format_rational(c))
            else:
                var = "z" if d == 1 else f"z^{d}"
                if c == 1:
                    parts.append(var)
                elif c == -1:
                    parts.append(f"-{var}")
                else:
                    parts.append(f"{format_rational(c)}*{var}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")


#: The polynomial ``z``, for building expressions.
Z = Polynomial.monomial(1)

ZERO_POLY = Polynomial()
ONE_POLY = Polynomial.constant(1)


def polynomial_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor over the rationals."""
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a * (1 / a.leading_coefficient())


@dataclass(frozen=True)
class RationalMatrix:
    """Sparse matrix over the rationals with a fixed shape.

    Entries are a sorted tuple of ``(row, col, value)`` with all values
    nonzero, so equal matrices compare equal.
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, int, Fraction], ...] = ()

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DomainError("matrix shape must be nonnegative")
        cleaned: dict[tuple[int, int], Fraction] = {}
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise DomainError(f"entry ({r},{c}) outside a {self.rows}x{self.cols} matrix")
            value = _coerce(v)
            if value:
                cleaned[(r, c)] = cleaned.get((r, c), Fraction(0)) + value
        normalised = tuple(
            (r, c, cleaned[(r, c)])
            for (r, c) in sorted(cleaned)
            if cleaned[(r, c)]
        )
        object.__setattr__(self, "entries", normalised)

    @classmethod
    def from_rows(cls, data) -> RationalMatrix:
        data = [list(row) for row in data]
        rows = len(data)
        cols = len(data[0]) if data else 0
        if any(len(row) != cols for row in data):
            raise DomainError("ragged rows")
        entries = tuple(
            (r, c, _coerce(v))
            for r, row in enumerate(data)
            for c, v in enumerate(row)
        )
        return cls(rows, cols, entries)

    def entry(self, r: int, c: int) -> Fraction:
        for er, ec, v in self.entries:
            if (er, ec) == (r, c):
                return v
        return Fraction(0)

    def to_rows(self) -> list[list[Fraction]]:
        dense = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries:
            dense[r][c] = v
        return dense

    def transpose(self) -> RationalMatrix:
        return RationalMatrix(
            self.cols, self.rows, tuple((c, r, v) for r, c, v in self.entries)
        )


def _rref(dense: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place reduced row echelon form; returns (matrix, pivot columns)."""
    if not dense:
        return dense, []
    rows, cols = len(dense), len(dense[0])
    pivots: list[int] = []
    target = 0
    for col in range(cols):
        pivot_row = None
        for r in range(target, rows):
            if dense[r][col]:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        dense[target], dense[pivot_row] = dense[pivot_row], dense[target]
        scale = dense[target][col]
        dense[target] = [v / scale for v in dense[target]]
        for r in range(rows):
            if r != target and dense[r][col]:
                factor = dense[r][col]
                dense[r] = [
                    a - factor * b for a, b in zip(dense[r], dense[target])
                ]
        pivots.append(col)
        target += 1
        if target == rows:
            break
    return dense, pivots


def row_reduce(matrix: RationalMatrix) -> tuple[RationalMatrix, tuple[int, ...], int]:
    """Reduced row echelon form with pivot columns and rank.

    The reduction is fully deterministic: pivots are chosen leftmost
    first, scanning rows top to bottom, and zero rows sink to the bottom.
    """
    dense, pivots = _rref(matrix.to_rows())
    entries = tuple(
        (r, c, v)
        for r, row in enumerate(dense)
        for c, v in enumerate(row)
        if v
    )
    echelon = RationalMatrix(matrix.rows, matrix.cols, entries)
    return echelon, tuple(pivots), len(pivots)


def cokernel_basis(matrix: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the cokernel of ``matrix`` acting on column vectors.

    Reduces the transpose and returns the standard-basis vectors sitting
    at the non-pivot row positions, so the result is a canonical set of
    representatives for ``target / image``.
    """
    _, pivots, _ = row_reduce(matrix.transpose())
    pivot_set = set(pivots)
    basis = []
    for position in range(matrix.rows):
        if position not in pivot_set:
            vector = [Fraction(0)] * matrix.rows
            vector[position] = Fraction(1)
            basis.append(tuple(vector))
    return basis


@dataclass(frozen=True)
class OffsetSeries:
    """Truncated series supported on the lattice ``offset + step*j``.

    ``coefficients[j]`` is the coefficient of the exponent
    ``offset + step*j``; exponents past the stored range are unknown,
    not zero.
    """

    offset: Fraction
    step: Fraction
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        step = _coerce(self.step)
        if step <= 0:
            raise DomainError("series step must be positive")
        object.__setattr__(self, "offset", _coerce(self.offset))
        object.__setattr__(self, "step", step)
        object.__setattr__(
            self, "coefficients", tuple(_coerce(c) for c in self.coefficients)
        )

    def __len__(self) -> int:
        return len(self.coefficients)

    @property
    def truncation_order(self) -> Fraction:
        """First exponent whose coefficient is *not* determined."""
        return self.offset + self.step * len(self.coefficients)

    def exponent(self, j: int) -> Fraction:
        return self.offset + self.step * j

    def coefficient_at(self, exponent) -> Fraction:
        """Coefficient at an exact exponent; zero off the lattice."""
        e = _coerce(exponent)
        if e >= self.truncation_order:
            raise DomainError(
                f"exponent {e} is beyond the truncation order {self.truncation_order}"
            )
        position = (e - self.offset) / self.step
        if position < 0 or position.denominator != 1:
            return Fraction(0)
        return self.coefficients[int(position)]


def series_mul(a: OffsetSeries, b: OffsetSeries) -> OffsetSeries:
    """Product of two lattice series; offsets add, truncation is the min.

    Both factors must live on the same step lattice.
    """
    if a.step != b.step:
        raise DomainError(f"incompatible series steps {a.step} and {b.step}")
    length = min(len(a), len(b))
    coeffs = [Fraction(0)] * length
    for i, ca in enumerate(a.coefficients[:length]):
        if not ca:
            continue
        for j, cb in enumerate(b.coefficients[: length - i]):
            coeffs[i + j] += ca * cb
    return OffsetSeries(a.offset + b.offset, a.step, tuple(coeffs))


def series_pow(series: OffsetSeries, exponent: int) -> OffsetSeries:
    """Integer power ``exponent >= 1`` by repeated multiplication."""
    if not isinstance(exponent, int) or exponent < 1:
        raise DomainError("series exponent must be an integer >= 1")
    result = series
    for _ in range(exponent - 1):
        result = series_mul(result, series)
    return result


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def compositions(parts: int, total: int):
    """Yield all tuples of ``parts`` nonnegative integers summing to ``total``.

    Deterministic order (stars and bars over ascending cut positions).
    """
    if parts <= 0:
        if total == 0:
            yield ()
        return
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        previous = -1
        out = []
        for cut in cuts:
            out.append(cut - previous - 1)
            previous = cut
        out.append(total + parts - 2 - previous)
        yield tuple(out)
