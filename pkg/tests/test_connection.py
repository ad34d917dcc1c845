from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from airymoments.errors import (
    DomainError,
    InconsistencyError,
    SizeLimitError,
    StabilityError,
)
from airymoments.exact import Polynomial, Z
from airymoments.connection import (
    CohomologyBasis,
    build_airy,
    build_symk,
    gm_cokernel_basis,
    h1_a1_basis,
    h1_dim_bruteforce,
    monomial_element,
    omega_class,
    omega_level,
    reduce_to_basis,
    residue,
)

HALF = Fraction(1, 2)
ONE = Polynomial.constant(1)


def test_airy_order_two_derivation():
    m = build_airy(2)
    assert m.labels == ("v0", "v1")
    matrix = m.derivation_matrix()
    assert matrix[0][0].is_zero()
    assert matrix[0][1] == Z
    assert matrix[1][0] == ONE
    assert matrix[1][1].is_zero()


def test_airy_general_order_wraps_with_z():
    m = build_airy(4)
    matrix = m.derivation_matrix()
    assert matrix[1][0] == ONE
    assert matrix[2][1] == ONE
    assert matrix[3][2] == ONE
    assert matrix[0][3] == Z
    with pytest.raises(DomainError):
        build_airy(1)


def test_symmetric_square_derivation():
    m = build_symk(2, 2)
    assert m.labels == ("u0", "u1", "u2")
    matrix = m.derivation_matrix()
    # d/dz u0 = 2 u1, d/dz u1 = u2 + z u0, d/dz u2 = 2z u1
    assert matrix[1][0] == Polynomial.constant(2)
    assert matrix[2][1] == ONE
    assert matrix[0][1] == Z
    assert matrix[1][2] == 2 * Z
    assert matrix[0][0].is_zero()


def test_symmetric_power_half_twist_shifts_diagonal():
    m = build_symk(2, 2, HALF)
    assert m.partial is None
    matrix = m.derivation_matrix()
    assert matrix[0][0] == Polynomial.constant(HALF)
    assert matrix[1][0] == 2 * Z


def test_build_symk_validation():
    with pytest.raises(DomainError):
        build_symk(1, 2)
    with pytest.raises(DomainError):
        build_symk(2, 0)
    with pytest.raises(DomainError):
        build_symk(3, 2, HALF)
    with pytest.raises(DomainError):
        build_symk(2, 2, Fraction(1, 3))
    with pytest.raises(SizeLimitError):
        build_symk(2, 50, size_cap=10)


def test_general_order_labels_are_exponent_tuples():
    m = build_symk(3, 2)
    assert m.labels[0] == "v(2,0,0)"
    assert len(m.labels) == 6


def test_bruteforce_dimensions_order_two():
    assert h1_dim_bruteforce(build_symk(2, 3), "a1")[0] == 2
    assert h1_dim_bruteforce(build_symk(2, 2), "a1")[0] == 0
    assert h1_dim_bruteforce(build_symk(2, 2), "gm")[0] == 3
    assert h1_dim_bruteforce(build_symk(2, 1), "gm")[0] == 3
    assert h1_dim_bruteforce(build_airy(2), "a1")[0] == 1


def test_bruteforce_reports_truncation_degree():
    dim, used = h1_dim_bruteforce(build_symk(2, 3), "a1")
    assert dim == 2
    assert used >= 3 * 4 + 6


def test_bruteforce_twist_invariance():
    for k in range(1, 7):
        plain = h1_dim_bruteforce(build_symk(2, k), "gm")[0]
        twisted = h1_dim_bruteforce(build_symk(2, k, HALF), "gm")[0]
        assert plain == twisted


def test_bruteforce_gm_matches_closed_count():
    for k in range(1, 9):
        kp = (k - 1) // 2
        expected = 3 * (kp + 1) if k % 2 else k + kp + 1
        assert h1_dim_bruteforce(build_symk(2, k), "gm")[0] == expected


def test_exact_sequence_of_dimensions():
    # removing the origin adds exactly the k+1 residue classes
    for k in range(1, 9):
        a1 = h1_dim_bruteforce(build_symk(2, k), "a1")[0]
        gm = h1_dim_bruteforce(build_symk(2, k), "gm")[0]
        assert a1 + (k + 1) == gm


def test_bruteforce_where_validation():
    m = build_symk(2, 2)
    with pytest.raises(DomainError):
        h1_dim_bruteforce(m, "p1")
    twisted = build_symk(2, 2, HALF)
    with pytest.raises(DomainError):
        h1_dim_bruteforce(twisted, "a1")


def test_bruteforce_ceiling_failure():
    with pytest.raises(StabilityError):
        h1_dim_bruteforce(build_symk(2, 2), "a1", truncation_ceiling=10)


def test_gm_basis_shapes():
    b1 = gm_cokernel_basis(1)
    assert [str(c) for c in b1.classes] == ["z*u0", "u0", "u1"]
    b4 = gm_cokernel_basis(4)
    assert [str(c) for c in b4.classes] == [
        "z*u0",
        "u0",
        "u1",
        "u2",
        "u3",
        "u4",
    ]
    twisted = gm_cokernel_basis(4, HALF)
    assert twisted.twist == HALF
    assert len(twisted) == len(b4)


def test_residues_of_gm_basis_span_the_fiber():
    basis = gm_cokernel_basis(3)
    by_label = []
    for element in basis.classes:
        res = residue(element)
        if res:
            by_label.append(res)
    assert by_label == [{f"u{j}": Fraction(1)} for j in range(4)]
    assert residue(monomial_element("u0", 2)) == {}


def test_a1_basis_levels():
    basis = h1_a1_basis(3)
    assert [str(c) for c in basis.classes] == ["u0", "z*u0"]
    assert basis.g_levels == (Fraction(7, 3), Fraction(5, 3))
    assert h1_a1_basis(4).g_levels == (Fraction(3),)
    assert len(h1_a1_basis(2)) == 0
    with pytest.raises(DomainError):
        h1_a1_basis(1)


def test_omega_levels_match_basis():
    for k in range(2, 12):
        basis = h1_a1_basis(k)
        assert basis.g_levels == tuple(
            omega_level(k, i) for i in range(1, len(basis) + 1)
        )


def test_reduce_basis_classes_to_unit_vectors():
    m = build_symk(2, 5)
    basis = h1_a1_basis(5)
    for pos in range(len(basis)):
        coords = reduce_to_basis(basis.classes[pos], basis, m)
        expected = tuple(
            Fraction(1 if q == pos else 0) for q in range(len(basis))
        )
        assert coords == expected


def test_reduce_known_exact_class():
    # z^2 u0 = d/dz(z u1) - u1 - 2z u2 with u1 and z u2 both exact
    m = build_symk(2, 3)
    coords = reduce_to_basis(monomial_element("u0", 2), h1_a1_basis(3), m)
    assert coords == (Fraction(0), Fraction(0))


@given(st.fractions(min_value=-5, max_value=5, max_denominator=6),
       st.fractions(min_value=-5, max_value=5, max_denominator=6))
@settings(max_examples=25, deadline=None)
def test_reduce_is_linear(a, b):
    m = build_symk(2, 5)
    basis = h1_a1_basis(5)
    c1 = monomial_element("u0", 0)
    c2 = monomial_element("u0", 2)
    lhs = reduce_to_basis(a * c1 + b * c2, basis, m)
    x1 = reduce_to_basis(c1, basis, m)
    x2 = reduce_to_basis(c2, basis, m)
    assert lhs == tuple(a * p + b * q for p, q in zip(x1, x2))


def test_reduce_rejects_dependent_basis():
    m = build_symk(2, 3)
    degenerate = CohomologyBasis(
        space="a1",
        k=3,
        twist=Fraction(0),
        classes=(omega_class(1), omega_class(1)),
    )
    with pytest.raises(InconsistencyError):
        reduce_to_basis(omega_class(2), degenerate, m)


def test_reduce_rejects_class_outside_span():
    m = build_symk(2, 4)
    empty = CohomologyBasis(
        space="a1", k=4, twist=Fraction(0), classes=()
    )
    with pytest.raises(InconsistencyError):
        reduce_to_basis(omega_class(1), empty, m)


def test_reduce_twist_mismatch():
    m = build_symk(2, 3, HALF)
    with pytest.raises(DomainError):
        reduce_to_basis(omega_class(1), h1_a1_basis(3), m)


def test_general_order_bruteforce_matches_closed_form():
    from airymoments.moments import h1_dims

    assert h1_dim_bruteforce(build_symk(3, 3), "a1")[0] == h1_dims(3, 3).all
    assert h1_dim_bruteforce(build_symk(4, 3), "a1")[0] == h1_dims(4, 3).all


def test_module_element_algebra():
    a = monomial_element("u0", 1, 2)
    b = monomial_element("u0", 1)
    assert (a - 2 * b).is_zero()
    assert str(monomial_element("u1") + monomial_element("u0")) == "u0 + u1"
    assert (Z * monomial_element("u0")).max_degree() == 1
