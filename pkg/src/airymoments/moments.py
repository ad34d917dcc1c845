"""Closed-form combinatorics for symmetric powers of order-n Airy-type
connections: lattice-point counts over cyclotomic relations, irregularity
and cohomology dimension formulas, the formal exponent multiset at
infinity, and the discrete invariants of the Fourier-dual family.

Everything in this module is a finite exact computation; the expensive
operations enumerate compositions and are guarded by a configurable cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .errors import DomainError, InconsistencyError, SizeLimitError
from .exact import Polynomial, binomial, compositions

#: Default ceiling on the number of compositions an enumeration may visit.
DEFAULT_ENUMERATION_CAP = 10**7


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> Polynomial:
    """The n-th cyclotomic polynomial, by exact recursive division."""
    if n < 1:
        raise DomainError("cyclotomic index must be positive")
    numerator = Polynomial.monomial(n) - Polynomial.constant(1)
    for d in range(1, n):
        if n % d == 0:
            numerator = numerator.exact_divide(cyclotomic(d))
    return numerator


@lru_cache(maxsize=None)
def _power_residues(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Dense coefficient vectors of x^i mod the n-th cyclotomic, i < n."""
    phi = cyclotomic(n)
    width = phi.degree
    table = []
    for i in range(n):
        remainder = Polynomial.monomial(i) % phi
        dense = remainder.coefficients()
        dense += [Fraction(0)] * (width - len(dense))
        table.append(tuple(dense))
    return tuple(table)


def _check_cap(n: int, k: int, cap: int) -> None:
    if cap < 1:
        raise DomainError("enumeration cap must be positive")
    count = binomial(n - 1 + k, k)
    if count > cap:
        raise SizeLimitError(
            f"enumerating {count} compositions exceeds the cap {cap}"
        )


def s_nk(n: int, k: int, *, cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    """Number of compositions a of k into n parts whose weighted power sum
    vanishes in the n-th cyclotomic field.

    The condition is sum(a[i] * x**i) == 0 mod the n-th cyclotomic
    polynomial; this counts the rank of the regular part at infinity of
    the k-th symmetric power.
    """
    if n < 2:
        raise DomainError("need at least two parts")
    if k < 0:
        raise DomainError("total must be nonnegative")
    _check_cap(n, k, cap)
    residues = _power_residues(n)
    width = len(residues[0])
    count = 0
    for a in compositions(n, k):
        acc = [0] * width
        for i, weight in enumerate(a):
            if weight:
                row = residues[i]
                for pos in range(width):
                    if row[pos]:
                        acc[pos] += weight * row[pos]
        if not any(acc):
            count += 1
    return count


def irr(n: int, k: int, *, cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    """Irregularity at infinity of the k-th symmetric power of the
    order-n connection: (n+1)/n * (binom(n-1+k, k) - s_nk)."""
    total = binomial(n - 1 + k, k) - s_nk(n, k, cap=cap)
    value = Fraction(n + 1, n) * total
    if value.denominator != 1:
        raise InconsistencyError(
            f"irregularity {value} is not an integer for n={n}, k={k}"
        )
    return int(value)


class H1Dims(NamedTuple):
    """Dimensions of first de Rham cohomology and its middle part."""

    all: int
    mid: int


def h1_dims(n: int, k: int, *, cap: int = DEFAULT_ENUMERATION_CAP) -> H1Dims:
    """Closed-form dimensions of H^1 over the affine line for the k-th
    symmetric power of the order-n connection, with the middle part.

    dim = (1/n) binom(k+n-1, k) - ((n+1)/n) s_nk.  The middle dimension
    subtracts s_nk exactly when k is a multiple of n (n odd) or of 2n
    (n even).
    """
    if n < 2:
        raise DomainError("connection order must be at least 2")
    if k < 1:
        raise DomainError("symmetric power must be at least 1")
    s = s_nk(n, k, cap=cap)
    total = Fraction(binomial(k + n - 1, k), n) - Fraction(n + 1, n) * s
    if total.denominator != 1:
        raise InconsistencyError(
            f"dimension formula gave non-integer {total} for n={n}, k={k}"
        )
    dim_all = int(total)
    period = n if n % 2 else 2 * n
    dim_mid = dim_all - (s if k % period == 0 else 0)
    if dim_mid < 0:
        raise InconsistencyError(
            f"negative middle dimension {dim_mid} for n={n}, k={k}"
        )
    return H1Dims(dim_all, dim_mid)


@dataclass(frozen=True)
class ExponentMultiset:
    """Formal exponents at infinity of a symmetric power.

    Each irregular summand is recorded by the coefficient of its
    exponential factor, reduced mod the n-th cyclotomic polynomial and
    stored as a dense low-to-high coefficient tuple.  ``regular_rank``
    counts the summands whose exponent vanishes.
    """

    n: int
    k: int
    regular_rank: int
    entries: tuple[tuple[tuple[Fraction, ...], int], ...]

    @property
    def irregular_count(self) -> int:
        return sum(mult for _, mult in self.entries)

    def exponent_polynomials(self) -> list[tuple[Polynomial, int]]:
        return [
            (Polynomial.from_coefficients(coeffs), mult)
            for coeffs, mult in self.entries
        ]


def formal_decomposition(
    n: int, k: int, *, cap: int = DEFAULT_ENUMERATION_CAP
) -> ExponentMultiset:
    """Multiset of formal exponents at infinity for the k-th symmetric
    power of the order-n connection.

    Composition a contributes the exponent -n/(n+1) * sum(a[i] * x**i)
    reduced mod the n-th cyclotomic polynomial; the zero exponents are
    the regular part, of rank s_nk.
    """
    if n < 2:
        raise DomainError("connection order must be at least 2")
    if k < 0:
        raise DomainError("symmetric power must be nonnegative")
    _check_cap(n, k, cap)
    residues = _power_residues(n)
    width = len(residues[0])
    scale = Fraction(-n, n + 1)
    tally: dict[tuple[Fraction, ...], int] = {}
    regular = 0
    for a in compositions(n, k):
        acc = [Fraction(0)] * width
        for i, weight in enumerate(a):
            if weight:
                row = residues[i]
                for pos in range(width):
                    acc[pos] += weight * row[pos]
        if not any(acc):
            regular += 1
            continue
        key = tuple(scale * c for c in acc)
        tally[key] = tally.get(key, 0) + 1
    if regular != s_nk(n, k, cap=cap):
        raise InconsistencyError(
            "regular rank disagrees with the direct lattice count"
        )
    entries = tuple(sorted(tally.items()))
    return ExponentMultiset(n=n, k=k, regular_rank=regular, entries=entries)


def _check_epsilon(epsilon: int) -> None:
    if epsilon not in (0, 1, 2):
        raise DomainError("epsilon must be 0, 1 or 2")


def rho_preimage(k: int, epsilon: int, p: int) -> int:
    """Size of the fiber over p of the floor map j -> (k+j+epsilon)//3
    on {j in [0,k] : k+j+epsilon not divisible by 3}.

    Fibers have size 0, 1 or 2: of three consecutive integers exactly one
    is dropped by the divisibility condition.
    """
    if k < 1:
        raise DomainError("k must be positive")
    _check_epsilon(epsilon)
    count = 0
    for j in range(k + 1):
        total = k + j + epsilon
        if total % 3 and total // 3 == p:
            count += 1
    return count


def psi_eigenspace_dim(k: int, epsilon: int, epsilon_prime: int) -> int:
    """Dimension of the nearby-cycle eigenspace pairing twist epsilon
    with character epsilon_prime: the count of j in [0,k] with
    k + j = epsilon_prime - epsilon mod 3."""
    if k < 1:
        raise DomainError("k must be positive")
    _check_epsilon(epsilon)
    _check_epsilon(epsilon_prime)
    residue = (epsilon_prime - epsilon) % 3
    return sum(1 for j in range(k + 1) if (k + j) % 3 == residue)


@dataclass(frozen=True)
class MkInvariants:
    """Discrete invariants of the Fourier-dual module of a symmetric
    power twisted by a cube-root character epsilon."""

    k: int
    epsilon: int
    rank: int
    singular_points: tuple[Fraction, ...]
    nu: tuple[int, int, int]
    phi_unit_dim: int
    psi_unit_dim: int


def mk_invariants(k: int, epsilon: int) -> MkInvariants:
    """Rank, finite singular points, residue-class partition, and the
    unit-eigenvalue vanishing/nearby-cycle dimensions of the Fourier-dual
    module for even k.

    The rank is computed two ways (residue-class count and the piecewise
    closed form) and must agree.
    """
    if k < 2 or k % 2:
        raise DomainError("the dual family is defined for even k >= 2")
    _check_epsilon(epsilon)
    nu = tuple(
        sum(1 for j in range(k + 1) if (k + j) % 3 == c) for c in range(3)
    )
    rank = (k + 1) - nu[(-epsilon) % 3]
    third = k // 3
    if epsilon == 0:
        closed = 2 * (third + 1) if k % 3 else 2 * third
    else:
        closed = 2 * third + 1 if k % 3 != 2 else 2 * (third + 1)
    if rank != closed:
        raise InconsistencyError(
            f"rank mismatch for k={k}, epsilon={epsilon}: {rank} vs {closed}"
        )
    points = tuple(Fraction(2 * (2 * j - k), 3) for j in range(k + 1))
    phi = 1 if epsilon == 0 else 0
    psi = rank if epsilon == 0 else rank - 1
    return MkInvariants(
        k=k,
        epsilon=epsilon,
        rank=rank,
        singular_points=points,
        nu=nu,
        phi_unit_dim=phi,
        psi_unit_dim=psi,
    )
