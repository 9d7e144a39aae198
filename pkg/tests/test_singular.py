"""Tests for singular-fiber location, the elimination oracle, the trichotomy.

The locus formula and the discriminant oracle share no code: one evaluates a
closed form of the relation vector, the other stratifies the plane curve and
eliminates variables.  Their agreement over a corpus is therefore a genuine
two-route check, and the pinned polynomials below were each verified against
a hand computation before being frozen.
"""

from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from sympy.abc import t

from corpus import nondegenerate_surfaces, surface_from_affine_triples
from delsarte.errors import UnsupportedShapeError, ValidationError
from delsarte.reduction import plane_model, reduce_to_minimal
from delsarte.singular import (
    Isotrivial,
    SemistableAway,
    Superelliptic,
    SuperellipticForm,
    classify_isotrivial,
    classify_trichotomy,
    constant_j_value,
    discriminant_oracle,
    fiber_singularities_are_nodal,
    generic_fiber_genus,
    generic_profile,
    oracle_matches_locus,
    singular_locus,
    structure_decomposition,
    superelliptic_form,
    superelliptic_genus,
)


def minimal_and_plane(triples):
    m = reduce_to_minimal(surface_from_affine_triples(triples))
    return m, plane_model(m)


def oracle_factors(plane) -> set:
    """Irreducible factors of the oracle output, content and powers dropped."""
    _, factors = sympy.factor_list(discriminant_oracle(plane).as_expr(), t)
    return {base.as_expr() for base, _ in factors}


def in_oracle_scope(m, p) -> bool:
    """Locus == oracle is claimed for distinct monomials and positive genus.

    A duplicated monomial has no closed-form locus at all, and a rational
    fibration (cyclic-cover genus 0) can be smooth over every t != 0 even
    though the closed form has roots, so both are out of scope.
    """
    if len(set(p.exponents)) < 4:
        return False
    if any(p.kernel[i] == 0 for i in range(3)):
        return generic_fiber_genus(superelliptic_form(m, p)) >= 1
    return True


# ---------------------------------------------------------------------------
# Closed-form locus
# ---------------------------------------------------------------------------


def test_locus_cusp_family():
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (2, 0, 0), (0, 0, 1)])
    loc = singular_locus(p)
    assert p.kernel == (0, 2, -3, 1)
    assert (loc.exponent, loc.value) == (1, Fraction(-4, 27))
    assert loc.rational_points == (Fraction(-4, 27),)
    assert not loc.degenerate


def test_locus_square_orbit():
    # y^2 + x^3 + x + t: k4 = 2, both singular values are irrational
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (1, 0, 0), (0, 0, 1)])
    loc = singular_locus(p)
    assert p.kernel == (0, 1, -3, 2)
    assert (loc.exponent, loc.value) == (2, Fraction(-4, 27))
    assert loc.rational_points == ()


def test_locus_shifted_carrier():
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (2, 0, 0), (1, 0, 1)])
    loc = singular_locus(p)
    assert p.kernel == (0, 1, -2, 1)
    assert (loc.exponent, loc.value) == (1, Fraction(1, 4))


def test_locus_rational_pair():
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (1, 0, 0), (2, 0, 1)])
    loc = singular_locus(p)
    assert (loc.exponent, loc.value) == (2, Fraction(4))
    assert loc.rational_points == (Fraction(-2), Fraction(2))


def test_locus_all_kernel_entries_nonzero():
    _, p = minimal_and_plane([(1, 2, 0), (3, 1, 0), (0, 1, 0), (1, 0, 1)])
    loc = singular_locus(p)
    assert p.kernel == (3, -2, -4, 3)
    assert (loc.exponent, loc.value) == (3, Fraction(729, 1024))
    assert loc.rational_points == ()


def test_locus_degenerate_duplicate_monomial():
    # t rides on a copy of x^2: no closed form, the duplicate is reported
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (2, 0, 0), (2, 0, 1)])
    loc = singular_locus(p)
    assert loc.degenerate
    assert loc.duplicate_index == 2
    assert loc.exponent is None and loc.value is None
    with pytest.raises(AssertionError):
        loc.polynomial()


# ---------------------------------------------------------------------------
# Discriminant oracle
# ---------------------------------------------------------------------------


def test_oracle_cusp_family():
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (2, 0, 0), (0, 0, 1)])
    assert oracle_factors(p) == {t, 27 * t + 4}


def test_oracle_square_orbit():
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (1, 0, 0), (0, 0, 1)])
    assert oracle_factors(p) == {27 * t**2 + 4}


def test_oracle_shifted_carrier():
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (2, 0, 0), (1, 0, 1)])
    assert oracle_factors(p) == {t, 4 * t - 1}


def test_oracle_singularities_on_coordinate_lines():
    # y^2 + x^3 + x + t x^2 degenerates at (x, y) = (1, 0) and (-1, 0) for
    # t = -+2: the oracle must pick those up from the line strata
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (1, 0, 0), (2, 0, 1)])
    assert oracle_factors(p) == {t - 2, t + 2}


def test_oracle_duplicate_family_collision_value():
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (2, 0, 0), (2, 0, 1)])
    assert oracle_factors(p) == {t + 1}


def test_oracle_persistent_vertex_cone_degeneration():
    # 1 + y + x^3 y + t x^2 y: the vertex (0:1:0) is singular for every t,
    # with local cubic cone x^3 + t x^2 z + z^3 degenerating at 4t^3 = -27;
    # only the Newton-boundary face analysis sees this stratum
    _, p = minimal_and_plane([(0, 0, 0), (0, 1, 0), (3, 1, 0), (2, 1, 1)])
    assert oracle_factors(p) == {4 * t**3 + 27}
    assert oracle_matches_locus(discriminant_oracle(p), singular_locus(p))


def test_oracle_genus_zero_family_has_no_away_roots():
    # y + y^3 + x y^2 + t solves for x: every fiber is rational and stays
    # equisingular, so the closed form's roots t^2 = -4/27 are spurious and
    # the oracle correctly returns nothing away from t = 0
    m, p = minimal_and_plane([(0, 1, 0), (0, 3, 0), (1, 2, 0), (0, 0, 1)])
    assert generic_fiber_genus(superelliptic_form(m, p)) == 0
    factors = oracle_factors(p)
    assert factors <= {t}
    assert not oracle_matches_locus(discriminant_oracle(p), singular_locus(p))


def test_oracle_matches_locus_on_pinned_cases():
    for triples in (
        [(0, 2, 0), (3, 0, 0), (2, 0, 0), (0, 0, 1)],
        [(0, 2, 0), (3, 0, 0), (1, 0, 0), (0, 0, 1)],
        [(0, 2, 0), (3, 0, 0), (2, 0, 0), (1, 0, 1)],
        [(0, 2, 0), (3, 0, 0), (1, 0, 0), (2, 0, 1)],
        [(1, 2, 0), (3, 1, 0), (0, 1, 0), (1, 0, 1)],
    ):
        _, p = minimal_and_plane(triples)
        assert oracle_matches_locus(discriminant_oracle(p), singular_locus(p))


@settings(max_examples=60, deadline=None)
@given(nondegenerate_surfaces())
def test_oracle_matches_locus_property(surface):
    m = reduce_to_minimal(surface)
    p = plane_model(m)
    assume(in_oracle_scope(m, p))
    assert oracle_matches_locus(discriminant_oracle(p), singular_locus(p))


# ---------------------------------------------------------------------------
# Orbit structure of the away fibers
# ---------------------------------------------------------------------------


def test_structure_one_orbit_under_rotation():
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (1, 0, 0), (0, 0, 1)])
    orbit = structure_decomposition(p)
    assert orbit.exponent == 2
    assert orbit.value == Fraction(-4, 27)
    # the two away fibers are swapped by t -> -t
    assert orbit.negation_invariant


def test_structure_trivial_orbit():
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (2, 0, 0), (0, 0, 1)])
    orbit = structure_decomposition(p)
    assert orbit.exponent == 1
    assert not orbit.negation_invariant


def test_structure_survives_degenerate_locus():
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (2, 0, 0), (2, 0, 1)])
    orbit = structure_decomposition(p)
    assert orbit.exponent == 1
    assert orbit.value == Fraction(-1)
    assert orbit.locus.degenerate


# ---------------------------------------------------------------------------
# Trichotomy
# ---------------------------------------------------------------------------


def test_trichotomy_isotrivial_duplicate():
    m, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (2, 0, 0), (2, 0, 1)])
    tri = classify_trichotomy(m, p)
    assert isinstance(tri, Isotrivial)
    assert tri.duplicate_index == 2
    assert tri.degeneration_value == Fraction(-1)


def test_trichotomy_isotrivial_constant_term():
    m, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (0, 0, 0), (0, 0, 1)])
    tri = classify_trichotomy(m, p)
    assert isinstance(tri, Isotrivial)
    assert tri.duplicate_index == 2


def test_trichotomy_superelliptic_weierstrass_shape():
    m, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (2, 0, 0), (0, 0, 1)])
    tri = classify_trichotomy(m, p)
    assert isinstance(tri, Superelliptic)
    assert tri.form == SuperellipticForm(
        2,
        (
            (Fraction(-1), 3, False),
            (Fraction(-1), 2, False),
            (Fraction(-1), 0, True),
        ),
    )
    assert tri.generic_genus == 1
    assert tri.constant_j is None  # hyperelliptic involution says nothing


def test_trichotomy_superelliptic_after_coordinate_change():
    # k = (0, -1, -1, 2): the three on-line monomials are not axis-aligned,
    # so the normal form needs the unimodular substitution
    m, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (1, 0, 0), (2, 0, 1)])
    tri = classify_trichotomy(m, p)
    assert isinstance(tri, Superelliptic)
    assert tri.form.cover_exponent == 2
    assert [(e, flag) for _, e, flag in tri.form.terms] == [
        (3, False),
        (1, False),
        (2, True),
    ]
    assert tri.generic_genus == 1


def test_trichotomy_superelliptic_genus_two():
    m, p = minimal_and_plane([(0, 5, 0), (2, 0, 0), (1, 0, 0), (0, 0, 3)])
    tri = classify_trichotomy(m, p)
    assert isinstance(tri, Superelliptic)
    assert tri.form.cover_exponent == 5
    assert tri.generic_genus == 2
    assert tri.constant_j is None


def test_trichotomy_constant_j_cover():
    m, p = minimal_and_plane([(0, 3, 0), (3, 0, 0), (2, 0, 0), (0, 0, 1)])
    tri = classify_trichotomy(m, p)
    assert isinstance(tri, Superelliptic)
    assert (tri.form.cover_exponent, tri.generic_genus) == (3, 1)
    assert tri.constant_j == Fraction(0)

    m, p = minimal_and_plane([(0, 4, 0), (2, 0, 0), (1, 0, 0), (0, 0, 1)])
    tri = classify_trichotomy(m, p)
    assert tri.constant_j == Fraction(1728)


def test_trichotomy_semistable_branch():
    m, p = minimal_and_plane([(1, 2, 0), (3, 1, 0), (0, 1, 0), (1, 0, 1)])
    tri = classify_trichotomy(m, p)
    assert isinstance(tri, SemistableAway)
    assert (tri.locus.exponent, tri.locus.value) == (3, Fraction(729, 1024))


def test_trichotomy_rejects_rational_fibers():
    m, p = minimal_and_plane([(0, 1, 0), (0, 3, 0), (1, 2, 0), (0, 0, 1)])
    with pytest.raises(ValidationError):
        classify_trichotomy(m, p)


def test_trichotomy_branch_two_iff_kernel_zero():
    # the branch decision must agree with the independently computed kernel
    for triples in (
        [(0, 2, 0), (3, 0, 0), (2, 0, 0), (0, 0, 1)],
        [(1, 2, 0), (3, 1, 0), (0, 1, 0), (1, 0, 1)],
        [(0, 3, 0), (3, 0, 0), (2, 0, 0), (0, 0, 1)],
    ):
        m, p = minimal_and_plane(triples)
        tri = classify_trichotomy(m, p)
        has_zero = any(p.kernel[i] == 0 for i in range(3))
        assert isinstance(tri, Superelliptic) == has_zero


# ---------------------------------------------------------------------------
# Cyclic-cover genus arithmetic
# ---------------------------------------------------------------------------


def test_superelliptic_genus_table():
    assert superelliptic_genus(2, [1, 1, 1]) == 1
    assert superelliptic_genus(2, [1, 1, 1, 1]) == 1
    assert superelliptic_genus(2, [1] * 5) == 2  # hyperelliptic, (5-1)/2
    assert superelliptic_genus(3, [1, 1, 1]) == 1
    assert superelliptic_genus(3, [1, 1]) == 1
    assert superelliptic_genus(4, [1, 1]) == 1
    assert superelliptic_genus(6, [2, 1]) == 1
    assert superelliptic_genus(2, [2, 1]) == 0
    assert superelliptic_genus(1, [1, 1, 1]) == 0


def test_superelliptic_genus_rejects_reducible_cover():
    # y^2 = (x - r)^2 (...) with every multiplicity and the degree even:
    # the cover splits into two components and has no single genus
    with pytest.raises(ValidationError):
        superelliptic_genus(2, [2])
    with pytest.raises(ValidationError):
        superelliptic_genus(4, [2, 2, 4])


def test_superelliptic_genus_rejects_bad_input():
    with pytest.raises(ValidationError):
        superelliptic_genus(0, [1])
    with pytest.raises(ValidationError):
        superelliptic_genus(2, [0, 1])


def test_generic_profile_with_repeated_origin_root():
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (2, 0, 0), (1, 0, 1)])
    m = reduce_to_minimal(surface_from_affine_triples(
        [(0, 2, 0), (3, 0, 0), (2, 0, 0), (1, 0, 1)]
    ))
    form = superelliptic_form(m, p)
    assert sorted(e for _, e, _ in form.terms) == [1, 2, 3]
    assert generic_profile(form) == [1, 1, 1]


def test_constant_j_rejects_wrong_genus():
    form = SuperellipticForm(
        5,
        ((Fraction(-1), 2, False), (Fraction(-1), 1, False), (Fraction(-1), 0, True)),
    )
    with pytest.raises(ValidationError):
        constant_j_value(form)


# ---------------------------------------------------------------------------
# Nodality of individual fibers
# ---------------------------------------------------------------------------


def test_away_fiber_is_nodal():
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (2, 0, 0), (0, 0, 1)])
    assert fiber_singularities_are_nodal(p, Fraction(-4, 27))


def test_duplicate_family_node_vs_cusp():
    _, p = minimal_and_plane([(0, 2, 0), (3, 0, 0), (2, 0, 0), (2, 0, 1)])
    # t = 0: y^2 + x^3 + x^2 has an ordinary node at the origin
    assert fiber_singularities_are_nodal(p, Fraction(0))
    # t = -1: y^2 + x^3 has a cusp
    assert not fiber_singularities_are_nodal(p, Fraction(-1))


# ---------------------------------------------------------------------------
# Named constant-modulus families
# ---------------------------------------------------------------------------


def test_isotrivial_family_duplicate():
    m, _ = minimal_and_plane([(0, 2, 0), (3, 0, 0), (0, 0, 0), (0, 0, 1)])
    fam = classify_isotrivial(m)
    assert (fam.kind, fam.power) == ("duplicate_monomial", 1)


def test_isotrivial_family_cubic_cover():
    m, _ = minimal_and_plane([(0, 3, 0), (3, 0, 0), (2, 0, 0), (0, 0, 2)])
    fam = classify_isotrivial(m)
    assert fam.kind == "cubic_cover"
    assert fam.power == 2
    assert fam.cover_exponent == 3
    assert fam.j_value == Fraction(0)


def test_isotrivial_family_cubic_cover_swapped_variables():
    m, _ = minimal_and_plane([(3, 0, 0), (0, 3, 0), (0, 2, 0), (0, 0, 1)])
    fam = classify_isotrivial(m)
    assert (fam.kind, fam.power) == ("cubic_cover", 1)


def test_isotrivial_family_conic_cover():
    m, _ = minimal_and_plane([(0, 5, 0), (2, 0, 0), (1, 0, 0), (0, 0, 3)])
    fam = classify_isotrivial(m)
    assert fam.kind == "conic_cover"
    assert (fam.power, fam.cover_exponent, fam.j_value) == (3, 5, None)

    m, _ = minimal_and_plane([(0, 4, 0), (2, 0, 0), (1, 0, 0), (0, 0, 1)])
    fam = classify_isotrivial(m)
    assert (fam.cover_exponent, fam.j_value) == (4, Fraction(1728))


def test_isotrivial_family_rejects_moving_modulus():
    m, _ = minimal_and_plane([(0, 2, 0), (3, 0, 0), (1, 0, 0), (0, 0, 1)])
    with pytest.raises(UnsupportedShapeError):
        classify_isotrivial(m)
