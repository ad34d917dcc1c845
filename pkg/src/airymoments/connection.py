"""Symmetric powers of Airy-type connections as explicit free modules
over the polynomial ring, with first de Rham cohomology computed two
independent ways:

* brute force: exact sparse elimination on truncations of the derivation,
  with a stabilisation certificate (truncation degree is doubled until
  the computed dimension repeats, and every truncated row must land a
  new pivot, witnessing that the derivation has no kernel);
* closed form: explicit cohomology bases whose size and independence are
  checked against the brute-force answer.

Degrees are indexed so that the monomials of degree at most E form a
suffix of the coordinate order.  Row reduction therefore computes, in
one pass, the dimension of the image intersected with every such window,
and normal forms of low-degree vectors never leave the window.  That is
what makes the truncated quotient an exact model of the true cokernel
once the dimension stabilises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DomainError,
    InconsistencyError,
    SizeLimitError,
    StabilityError,
)
from .exact import Polynomial, binomial, compositions, row_reduce, RationalMatrix

HALF = Fraction(1, 2)

#: Refuse to build symmetric powers with more generators than this.
DEFAULT_SIZE_CAP = 100_000

#: Largest truncation degree the brute-force engine will try.
DEFAULT_TRUNCATION_CEILING = 4096

#: Sparse column of a derivation: (target index, polynomial coefficient).
Column = tuple[tuple[int, Polynomial], ...]


@dataclass(frozen=True)
class ConnectionModule:
    """Free module over the polynomial ring carrying a derivation.

    ``partial`` describes d/dz on generators: column j lists pairs
    (i, p) meaning that d/dz of generator j contains p(z) times
    generator i.  ``theta`` describes z d/dz + twist in the same layout.
    For a nonzero twist only ``theta`` is polynomial, so ``partial`` is
    None.
    """

    n: int
    k: int
    twist: Fraction
    labels: tuple[str, ...]
    partial: tuple[Column, ...] | None
    theta: tuple[Column, ...]

    @property
    def rank(self) -> int:
        return len(self.labels)

    def derivation_matrix(self) -> list[list[Polynomial]]:
        """Dense matrix of the module's natural derivation, d/dz when
        the twist is zero and z d/dz + twist otherwise; entry [i][j] is
        the generator-i coefficient of the image of generator j."""
        columns = self.theta if self.twist else self.partial
        dense = [
            [Polynomial() for _ in self.labels] for _ in self.labels
        ]
        for j, column in enumerate(columns):
            for i, poly in column:
                dense[i][j] = poly
        return dense

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DomainError(f"unknown generator {label!r}") from None


def build_airy(n: int) -> ConnectionModule:
    """The order-n Airy-type connection: companion module of the
    operator (d/dz)^n - z on generators v0..v(n-1), with
    d/dz v_i = v_(i+1) and d/dz v_(n-1) = z v_0."""
    if n < 2:
        raise DomainError("connection order must be at least 2")
    labels = tuple(f"v{i}" for i in range(n))
    partial = []
    theta = []
    for j in range(n):
        if j < n - 1:
            column = ((j + 1, Polynomial.constant(1)),)
        else:
            column = ((0, Polynomial.monomial(1)),)
        partial.append(column)
        theta.append(tuple((i, p.shift(1)) for i, p in column))
    return ConnectionModule(
        n=n,
        k=1,
        twist=Fraction(0),
        labels=labels,
        partial=tuple(partial),
        theta=tuple(theta),
    )


def _symk_labels(n: int, exponents: tuple[tuple[int, ...], ...]) -> tuple[str, ...]:
    if n == 2:
        return tuple(f"u{a[1]}" for a in exponents)
    return tuple("v(" + ",".join(map(str, a)) + ")" for a in exponents)


def build_symk(
    n: int,
    k: int,
    twist: Fraction | int = 0,
    *,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> ConnectionModule:
    """The k-th symmetric power of the order-n Airy-type connection.

    Generators are monomials of total degree k in the solutions basis,
    indexed by exponent tuples in descending lexicographic order; for
    n = 2 the generator with exponent (k-j, j) is labelled u{j}.  The
    optional twist (only 0 or 1/2, and only for n = 2) shifts the Euler
    derivation, which is how the square-root line bundle twist acts.
    """
    if n < 2:
        raise DomainError("connection order must be at least 2")
    if k < 1:
        raise DomainError("symmetric power must be at least 1")
    twist = Fraction(twist)
    if twist not in (Fraction(0), HALF):
        raise DomainError("twist must be 0 or 1/2")
    if twist and n != 2:
        raise DomainError("the half twist is only defined for order 2")
    rank = binomial(n - 1 + k, k)
    if rank > size_cap:
        raise SizeLimitError(
            f"symmetric power has {rank} generators, above the cap {size_cap}"
        )
    exponents = tuple(sorted(compositions(n, k), reverse=True))
    index = {a: pos for pos, a in enumerate(exponents)}
    partial: list[Column] = []
    theta: list[Column] = []
    for a in exponents:
        terms: dict[int, Polynomial] = {}
        for i in range(n - 1):
            if a[i]:
                target = list(a)
                target[i] -= 1
                target[i + 1] += 1
                pos = index[tuple(target)]
                terms[pos] = terms.get(pos, Polynomial()) + Polynomial.constant(a[i])
        if a[n - 1]:
            target = list(a)
            target[n - 1] -= 1
            target[0] += 1
            pos = index[tuple(target)]
            terms[pos] = terms.get(pos, Polynomial()) + Polynomial.monomial(
                1, a[n - 1]
            )
        column = tuple(sorted(terms.items()))
        partial.append(column)
        twisted: dict[int, Polynomial] = {
            i: p.shift(1) for i, p in column
        }
        if twist:
            own = index[a]
            twisted[own] = twisted.get(own, Polynomial()) + Polynomial.constant(twist)
        theta.append(tuple(sorted(twisted.items())))
    return ConnectionModule(
        n=n,
        k=k,
        twist=twist,
        labels=_symk_labels(n, exponents),
        partial=None if twist else tuple(partial),
        theta=tuple(theta),
    )


@dataclass(frozen=True)
class ModuleElement:
    """Element of a connection module: polynomial coefficients keyed by
    generator label, stored sorted with zero coefficients dropped."""

    coordinates: tuple[tuple[str, Polynomial], ...] = ()

    def __post_init__(self):
        merged: dict[str, Polynomial] = {}
        for label, poly in self.coordinates:
            if not isinstance(poly, Polynomial):
                poly = Polynomial.constant(poly)
            merged[label] = merged.get(label, Polynomial()) + poly
        cleaned = tuple(
            (label, merged[label])
            for label in sorted(merged)
            if not merged[label].is_zero()
        )
        object.__setattr__(self, "coordinates", cleaned)

    def as_dict(self) -> dict[str, Polynomial]:
        return dict(self.coordinates)

    def is_zero(self) -> bool:
        return not self.coordinates

    def max_degree(self) -> int:
        return max((p.degree for _, p in self.coordinates), default=-1)

    def __add__(self, other: ModuleElement) -> ModuleElement:
        return ModuleElement(self.coordinates + other.coordinates)

    def __sub__(self, other: ModuleElement) -> ModuleElement:
        return self + (-1) * other

    def __mul__(self, scalar) -> ModuleElement:
        if isinstance(scalar, Polynomial):
            return ModuleElement(
                tuple((lab, p * scalar) for lab, p in self.coordinates)
            )
        factor = Fraction(scalar)
        return ModuleElement(
            tuple((lab, p * factor) for lab, p in self.coordinates)
        )

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.coordinates:
            return "0"
        parts = []
        for label, poly in self.coordinates:
            if poly == Polynomial.constant(1):
                parts.append(label)
            elif len(poly.terms) == 1:
                parts.append(f"{poly}*{label}")
            else:
                parts.append(f"({poly})*{label}")
        return " + ".join(parts)


def monomial_element(label: str, degree: int = 0, coeff=1) -> ModuleElement:
    """The element coeff * z**degree * generator."""
    return ModuleElement(((label, Polynomial.monomial(degree, coeff)),))


@dataclass(frozen=True)
class CohomologyBasis:
    """An ordered basis of classes in first de Rham cohomology.

    ``space`` is "a1" (cohomology over the affine line), "gm" (over the
    punctured line) or "mid" (the middle part inside the affine-line
    cohomology).  ``g_levels`` carries the irregular filtration level of
    each class when a closed form for it exists, else None.
    """

    space: str
    k: int
    twist: Fraction
    classes: tuple[ModuleElement, ...]
    g_levels: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if self.space not in ("a1", "gm", "mid"):
            raise DomainError(f"unknown cohomology space {self.space!r}")
        if self.g_levels is not None and len(self.g_levels) != len(self.classes):
            raise DomainError("one level per class required")

    def __len__(self) -> int:
        return len(self.classes)


def residue(element: ModuleElement) -> dict[str, Fraction]:
    """Residue at the origin of element * dz/z: the constant-term vector
    in the fiber spanned by the generators."""
    out = {}
    for label, poly in element.coordinates:
        c = poly.coefficient(0)
        if c:
            out[label] = c
    return out


# ---------------------------------------------------------------------------
# Brute-force cohomology via stabilised truncations.
#
# Monomial z^d * g_i gets the integer id (anchor - d) * gens + i, so ids
# decrease as the degree grows and the window of degrees <= E is exactly
# the suffix of ids >= (anchor - E) * gens.  Echelon rows whose leading
# id lies in that suffix have their entire support in it, which keeps
# window computations exact.
# ---------------------------------------------------------------------------


class _Echelon:
    """Incremental integer row echelon keyed by leading coordinate."""

    def __init__(self):
        self.rows: dict[int, dict[int, int]] = {}

    @staticmethod
    def _reduce_content(row: dict[int, int]) -> None:
        g = 0
        for value in row.values():
            g = math.gcd(g, value)
            if g == 1:
                return
        if g > 1:
            for pos in row:
                row[pos] //= g

    def insert(self, row: dict[int, int]) -> bool:
        """Reduce ``row`` against the current rows and store what is
        left; returns False when the row reduced to zero."""
        rows = self.rows
        while row:
            lead = min(row)
            pivot = rows.get(lead)
            if pivot is None:
                self._reduce_content(row)
                if row[lead] < 0:
                    for pos in row:
                        row[pos] = -row[pos]
                rows[lead] = row
                return True
            a = pivot[lead]
            b = row.pop(lead)
            g = math.gcd(a, b)
            ma, mb = a // g, b // g
            for pos in row:
                row[pos] *= ma
            for pos, value in pivot.items():
                if pos == lead:
                    continue
                updated = row.get(pos, 0) - mb * value
                if updated:
                    row[pos] = updated
                else:
                    row.pop(pos, None)
            if row:
                self._reduce_content(row)
        return False

    def pivots_at_or_above(self, threshold: int) -> int:
        return sum(1 for lead in self.rows if lead >= threshold)


@dataclass
class _StableImage:
    """Certificate-bearing echelon of the derivation's image."""

    gens: int
    anchor: int
    window: int
    degree: int
    dim: int
    echelon: _Echelon


_STABLE_CACHE: dict[tuple, _StableImage] = {}


def _derivation_terms(
    module: ConnectionModule, where: str
) -> list[list[tuple[int, int, Fraction]]]:
    """Static part of the derivation as (degree shift, target, coeff)
    per generator; the degree-dependent diagonal term is added by the
    row builder."""
    columns = module.partial if where == "a1" else module.theta
    out = []
    for column in columns:
        terms = []
        for i, poly in column:
            for m, c in poly.terms:
                terms.append((m, i, c))
        out.append(terms)
    return out


def _image_row(
    where: str,
    terms: list[tuple[int, int, Fraction]],
    d: int,
    j: int,
    gens: int,
    anchor: int,
) -> dict[int, int]:
    """Integer coordinate row of the derivation applied to z^d * g_j."""
    sparse: dict[int, Fraction] = {}
    if where == "a1":
        if d:
            sparse[(anchor - (d - 1)) * gens + j] = Fraction(d)
    else:
        if d:
            sparse[(anchor - d) * gens + j] = Fraction(d)
    for m, i, c in terms:
        pos = (anchor - (d + m)) * gens + i
        sparse[pos] = sparse.get(pos, Fraction(0)) + c
    denominator = math.lcm(*(v.denominator for v in sparse.values())) if sparse else 1
    return {
        pos: int(v * denominator) for pos, v in sparse.items() if v
    }


def _stable_image(
    module: ConnectionModule, where: str, ceiling: int
) -> _StableImage:
    key = (module.n, module.k, module.twist, where, ceiling)
    cached = _STABLE_CACHE.get(key)
    if cached is not None:
        return cached
    gens = module.rank
    anchor = ceiling + 2
    terms = _derivation_terms(module, where)
    echelon = _Echelon()
    degree = 3 * (module.k + 1) + 6
    processed = -1
    previous = None
    while True:
        if degree > ceiling:
            raise StabilityError(
                f"dimension did not stabilise below truncation degree {ceiling}"
            )
        for d in range(processed + 1, degree + 1):
            for j in range(gens):
                row = _image_row(where, terms[j], d, j, gens, anchor)
                if not echelon.insert(row):
                    raise InconsistencyError(
                        "derivation row reduced to zero: the derivation "
                        "has a kernel at truncation degree "
                        f"{degree}, which contradicts irregularity"
                    )
        processed = degree
        window = degree // 2
        threshold = (anchor - window) * gens
        dim = gens * (window + 1) - echelon.pivots_at_or_above(threshold)
        if previous == dim:
            state = _StableImage(
                gens=gens,
                anchor=anchor,
                window=window,
                degree=degree,
                dim=dim,
                echelon=echelon,
            )
            _STABLE_CACHE[key] = state
            return state
        previous = dim
        degree *= 2


def h1_dim_bruteforce(
    module: ConnectionModule,
    where: str,
    *,
    truncation_ceiling: int = DEFAULT_TRUNCATION_CEILING,
) -> tuple[int, int]:
    """Dimension of H^1 for ``module`` over the affine line ("a1") or
    the punctured line ("gm"), by exact elimination on truncations.

    Returns (dimension, truncation degree at which it stabilised).  The
    affine-line case is the cokernel of d/dz and requires an untwisted
    module; the punctured-line case is the cokernel of z d/dz + twist.
    """
    if where not in ("a1", "gm"):
        raise DomainError(f"unknown cohomology space {where!r}")
    if where == "a1" and module.twist:
        raise DomainError("affine-line cohomology requires an untwisted module")
    state = _stable_image(module, where, truncation_ceiling)
    return state.dim, state.degree


def _element_ids(
    element: ModuleElement,
    module: ConnectionModule,
    state: _StableImage,
) -> dict[int, Fraction]:
    index = {label: i for i, label in enumerate(module.labels)}
    out: dict[int, Fraction] = {}
    for label, poly in element.coordinates:
        i = index.get(label)
        if i is None:
            raise DomainError(f"element uses unknown generator {label!r}")
        for d, c in poly.terms:
            if d > state.window:
                raise StabilityError(
                    f"element degree {d} exceeds the stabilised window "
                    f"{state.window}; raise the truncation ceiling"
                )
            out[(state.anchor - d) * state.gens + i] = c
    return out


def _normal_form(
    vector: dict[int, Fraction], echelon: _Echelon
) -> dict[int, Fraction]:
    """Fully reduce a rational vector against the integer echelon; the
    result is zero exactly when the vector lies in the row space."""
    work = dict(vector)
    out: dict[int, Fraction] = {}
    while work:
        pos = min(work)
        value = work.pop(pos)
        pivot = echelon.rows.get(pos)
        if pivot is None:
            out[pos] = value
            continue
        factor = value / pivot[pos]
        for q, v in pivot.items():
            if q == pos:
                continue
            updated = work.get(q, Fraction(0)) - factor * v
            if updated:
                work[q] = updated
            else:
                work.pop(q, None)
    return out


def _normal_forms(
    classes,
    module: ConnectionModule,
    where: str,
    ceiling: int,
) -> tuple[_StableImage, list[dict[int, Fraction]]]:
    state = _stable_image(module, where, ceiling)
    return state, [
        _normal_form(_element_ids(c, module, state), state.echelon)
        for c in classes
    ]


def gm_cokernel_basis(
    k: int,
    twist: Fraction | int = 0,
    *,
    truncation_ceiling: int = DEFAULT_TRUNCATION_CEILING,
) -> CohomologyBasis:
    """Basis of H^1 over the punctured line for the k-th symmetric power
    of the order-2 connection, twist 0 or 1/2.

    The classes are z^p * u0 for p from floor((k-1)/2)+1 (k odd) or
    floor((k-1)/2) (k even) down to 1, followed by u0..uk.  Their count
    and linear independence are verified against the brute-force
    cohomology before returning.
    """
    if k < 1:
        raise DomainError("symmetric power must be at least 1")
    module = build_symk(2, k, twist)
    kp = (k - 1) // 2
    top = kp + 1 if k % 2 else kp
    classes = [monomial_element("u0", p) for p in range(top, 0, -1)]
    classes += [monomial_element(f"u{j}") for j in range(k + 1)]
    dim, _ = h1_dim_bruteforce(
        module, "gm", truncation_ceiling=truncation_ceiling
    )
    if dim != len(classes):
        raise InconsistencyError(
            f"closed-form basis has {len(classes)} classes but the "
            f"brute-force dimension is {dim} (k={k}, twist={module.twist})"
        )
    state, forms = _normal_forms(classes, module, "gm", truncation_ceiling)
    if _rank_of_forms(forms) != len(classes):
        raise InconsistencyError(
            f"closed-form classes are dependent in cohomology (k={k}, "
            f"twist={module.twist})"
        )
    return CohomologyBasis(
        space="gm",
        k=k,
        twist=module.twist,
        classes=tuple(classes),
        g_levels=None,
    )


def _rank_of_forms(forms: list[dict[int, Fraction]]) -> int:
    pivots: dict[int, dict[int, Fraction]] = {}
    rank = 0
    for form in forms:
        work = dict(form)
        while work:
            pos = min(work)
            pivot = pivots.get(pos)
            if pivot is None:
                pivots[pos] = work
                rank += 1
                break
            factor = work.pop(pos) / pivot[pos]
            for q, v in pivot.items():
                if q == pos:
                    continue
                updated = work.get(q, Fraction(0)) - factor * v
                if updated:
                    work[q] = updated
                else:
                    work.pop(q, None)
    return rank


def omega_class(i: int) -> ModuleElement:
    """The class z^(i-1) * u0 (a differential form after multiplying by
    dz), the i-th member of the affine-line cohomology basis."""
    if i < 1:
        raise DomainError("basis index starts at 1")
    return monomial_element("u0", i - 1)


def omega_level(k: int, i: int) -> Fraction:
    """Irregular filtration level of the i-th basis class."""
    return Fraction(k + 1) - Fraction(k + 2 * i, 3)


def h1_a1_basis(k: int) -> CohomologyBasis:
    """Basis of H^1 over the affine line for the k-th symmetric power of
    the order-2 connection: classes z^(i-1) u0 for i = 1..floor((k-1)/2)
    plus one more when k is odd, each with its filtration level."""
    if k < 2:
        raise DomainError("need a symmetric power of at least 2")
    kp = (k - 1) // 2
    top = kp + 1 if k % 2 else kp
    classes = tuple(omega_class(i) for i in range(1, top + 1))
    levels = tuple(omega_level(k, i) for i in range(1, top + 1))
    return CohomologyBasis(
        space="a1",
        k=k,
        twist=Fraction(0),
        classes=classes,
        g_levels=levels,
    )


def reduce_to_basis(
    element: ModuleElement,
    basis: CohomologyBasis,
    module: ConnectionModule,
    *,
    truncation_ceiling: int = DEFAULT_TRUNCATION_CEILING,
) -> tuple[Fraction, ...]:
    """Coordinates of ``element``'s cohomology class in ``basis``.

    Works inside the stabilised brute-force quotient: the element and
    the basis classes are reduced to normal form against the image of
    the derivation, and the resulting exact linear system is solved.
    Raises InconsistencyError when the basis classes are dependent or
    the element lies outside their span.
    """
    if module.twist != basis.twist:
        raise DomainError("element module and basis have different twists")
    where = "gm" if basis.space == "gm" else "a1"
    _, forms = _normal_forms(
        list(basis.classes) + [element], module, where, truncation_ceiling
    )
    target = forms.pop()
    count = len(forms)
    if count == 0:
        if target:
            raise InconsistencyError(
                "element is nonzero in cohomology but the basis is empty"
            )
        return ()
    positions = sorted(set().union(*forms, target))
    dense = [
        [form.get(pos, Fraction(0)) for form in forms]
        + [target.get(pos, Fraction(0))]
        for pos in positions
    ]
    echelon, pivots, rank = row_reduce(
        RationalMatrix.from_rows(dense) if dense else RationalMatrix(0, count + 1)
    )
    if count in pivots:
        raise InconsistencyError(
            "element does not lie in the span of the basis classes"
        )
    if rank < count:
        raise InconsistencyError("basis classes are dependent in cohomology")
    solution = [Fraction(0)] * count
    for r, col in enumerate(pivots):
        solution[col] = echelon.entry(r, count)
    return tuple(solution)
