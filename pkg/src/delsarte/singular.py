"""Singular fibers of a minimal four-monomial fibration.

Everything here works off the plane projective model: four monomials
N1..N4 in (x, y, z) of common degree, pairwise distinct, with the parameter
t multiplying N4, and the primitive relation vector k (k . exponents = 0,
sum(k) = 0, k[3] > 0).

Two independent routes to the singular fibers are provided:

* ``singular_locus`` evaluates the closed-form criterion: away from t = 0
  and t = infinity the fiber over t0 is singular exactly when

      t0^{k4} = prod_i k_i^{k_i} / prod_i coeff_i^{k_i},

  a single orbit of values (the "away" orbit).

* ``discriminant_oracle`` knows nothing about k.  It stratifies the plane
  (torus, the three punctured coordinate lines, the three vertices) and
  eliminates the curve variables from the critical equations on each
  stratum with Groebner bases, returning the product of the eliminants.
  Strata that are singular for every t (this happens at a vertex when every
  monomial vanishes there to order >= 2) say nothing about any particular
  fiber and are dropped.

The structure classification (``classify_trichotomy``) splits minimal
fibrations three ways, by the shape of k:

1. the t-monomial repeats another monomial's (x, y)-part -- the family is a
   fixed curve with one coefficient moving, degenerating at a single t;
2. some k_i = 0 (i < 4) -- the generic fiber is a cyclic cover u^a = psi(v)
   of the line, made explicit by ``superelliptic_form``;
3. all k_i != 0 -- the away fibers are expected to be nodal; use
   ``fiber_singularities_are_nodal`` to certify particular members.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd
from typing import Optional, Sequence, Union

import sympy
from sympy.abc import t as T_SYM
from sympy.abc import u as U_SYM
from sympy.abc import x as X_SYM
from sympy.abc import y as Y_SYM
from sympy.abc import z as Z_SYM

from .errors import UnsupportedShapeError, ValidationError
from .exact import rational_kth_roots
from .model import AffineEquation
from .reduction import MinimalFibration, PlaneModel

# ---------------------------------------------------------------------------
# sympy bridge
# ---------------------------------------------------------------------------


def _rat(q: Fraction) -> sympy.Rational:
    return sympy.Rational(q.numerator, q.denominator)


def equation_as_expr(eq: AffineEquation, x=X_SYM, y=Y_SYM, t=T_SYM):
    """The affine equation as a sympy expression (t-exponents must be >= 0)."""
    total = sympy.Integer(0)
    for coeff, (ex, ey, et) in eq.terms:
        if et < 0:
            raise ValidationError("cannot convert Laurent equation to polynomial")
        total += _rat(coeff) * x**ex * y**ey * t**et
    return total


def plane_curve_expr(plane: PlaneModel, x=X_SYM, y=Y_SYM, z=Z_SYM, t=T_SYM):
    """The plane projective family: sum of coeff * t^{[i = 4]} * x^a y^b z^c."""
    total = sympy.Integer(0)
    for i, ((a, b, c), coeff) in enumerate(zip(plane.exponents, plane.coefficients)):
        term = _rat(coeff) * x**a * y**b * z**c
        if i == 3:
            term *= t
        total += term
    return total


# ---------------------------------------------------------------------------
# Closed-form singular locus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SingularLocus:
    """The away orbit of singular fibers: the solutions of t^exponent = value.

    ``rational_points`` lists the members of the orbit that are rational
    (0, 1 or 2 of them); the rest live in a cyclotomic-radical extension.

    When the moving monomial duplicates one of the fixed ones the closed form
    does not apply; the locus is reported as ``degenerate`` with the equation
    omitted and ``duplicate_index`` pointing at the repeated monomial (the
    fibration is m1 + m2 + (gamma_i + gamma_4 t) m_i in that case).
    """

    exponent: Optional[int]
    value: Optional[Fraction]
    rational_points: tuple[Fraction, ...]
    degenerate: bool = False
    duplicate_index: Optional[int] = None

    def polynomial(self):
        """t^exponent - value, as a sympy Poly in t."""
        assert not self.degenerate, "degenerate locus has no closed form"
        return sympy.Poly(T_SYM**self.exponent - _rat(self.value), T_SYM)


def _kernel_product(plane: PlaneModel) -> Fraction:
    """prod k_i^{k_i} * gamma_i^{-k_i} over the nonzero kernel entries."""
    value = Fraction(1)
    for ki, coeff in zip(plane.kernel, plane.coefficients):
        if ki != 0:
            value *= Fraction(ki) ** ki
        value *= coeff ** (-ki)
    return value


def singular_locus(plane: PlaneModel) -> SingularLocus:
    """Evaluate the closed-form locus from the relation vector and coefficients."""
    for i in range(3):
        if plane.exponents[i] == plane.exponents[3]:
            return SingularLocus(None, None, (), degenerate=True, duplicate_index=i)
    value = _kernel_product(plane)
    exponent = plane.kernel[3]
    points = tuple(rational_kth_roots(value, exponent))
    return SingularLocus(exponent, value, points)


# ---------------------------------------------------------------------------
# Discriminant oracle (stratified elimination; independent of k)
# ---------------------------------------------------------------------------


def _eliminant(system, eliminate, keep) -> Optional[sympy.Expr]:
    """Generator of (ideal of ``system``) intersected with QQ[keep].

    Returns None when the elimination ideal is zero (the stratum is critical
    for every value of ``keep``), 1 when the system is infeasible.
    """
    basis = sympy.groebner(system, *eliminate, keep, order="lex")
    only_keep = [p for p in basis.exprs if p.free_symbols <= {keep}]
    if not only_keep:
        return None
    g = sympy.Integer(0)
    for p in only_keep:
        g = sympy.gcd(g, p)
    return sympy.expand(g)


def _newton_boundary(points):
    """Vertices of the compact Newton boundary of a plane curve germ.

    ``points`` are the exponent pairs of the local equation; the boundary is
    the chain of negative-slope edges of the convex hull of points + (Z>=0)^2,
    returned as hull vertices sorted by first coordinate.
    """
    pts = sorted(set(points))
    minimal = [
        p
        for p in pts
        if not any(q != p and q[0] <= p[0] and q[1] <= p[1] for q in pts)
    ]
    hull: list[tuple[int, int]] = []
    for p in minimal:  # already sorted: d1 ascending, d2 strictly descending
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0])
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _persistent_vertex_eliminant(coeff_at, v1, v2) -> Optional[sympy.Expr]:
    """t-values where a persistently singular vertex degenerates further.

    The germ at the vertex is singular for every t, so the fiber only differs
    from its neighbours there when the equisingularity type jumps.  With the
    Newton boundary constant in t that happens exactly when some boundary face
    polynomial becomes critical on the torus, or when a boundary monomial's
    coefficient vanishes (changing the boundary itself).  Faces that are
    degenerate for every t carry no information and make us give up (None).
    """
    t, u = T_SYM, U_SYM
    hull = _newton_boundary(coeff_at)
    result = sympy.Integer(1)
    for point in hull:
        coefficient = coeff_at[point]
        if t in coefficient.free_symbols:
            result *= coefficient
    for start, end in zip(hull, hull[1:]):
        dx, dy = end[0] - start[0], end[1] - start[1]
        face = sympy.Integer(0)
        for (a, b), coefficient in coeff_at.items():
            if (a - start[0]) * dy == (b - start[1]) * dx and (
                min(start[0], end[0]) <= a <= max(start[0], end[0])
            ):
                face += coefficient * v1**a * v2**b
        system = [face, face.diff(v1), face.diff(v2), u * v1 * v2 - 1]
        if t in face.free_symbols:
            eliminant = _eliminant(system, (u, v1, v2), t)
            if eliminant is None:
                return None
            result *= eliminant
        else:
            basis = sympy.groebner(system, u, v1, v2, order="grevlex")
            if list(basis.exprs) != [sympy.Integer(1)]:
                return None
    return sympy.expand(result)


def discriminant_oracle(plane: PlaneModel) -> sympy.Poly:
    """Product of per-stratum eliminants, a polynomial in t whose roots are
    the parameters with a singular member (plus possibly t = 0 factors).

    This route never looks at the relation vector, which makes it a genuine
    second opinion on ``singular_locus``.
    """
    x, y, z, t, u = X_SYM, Y_SYM, Z_SYM, T_SYM, U_SYM
    F = plane_curve_expr(plane)
    contributions = []

    def add(expr: Optional[sympy.Expr]) -> None:
        if expr is None:  # persistent stratum: singular for all t, no info
            return
        p = sympy.Poly(expr, t)
        if not p.is_zero and p.degree() > 0:
            contributions.append(p)

    # torus (chart z = 1, x y != 0)
    f = F.subs(z, 1)
    add(_eliminant([f, f.diff(x), f.diff(y), u * x * y - 1], (u, x, y), t))

    # punctured line x = 0 (chart z = 1, y != 0)
    add(
        _eliminant(
            [f.subs(x, 0), f.diff(x).subs(x, 0), f.diff(y).subs(x, 0), u * y - 1],
            (u, y),
            t,
        )
    )
    # punctured line y = 0 (chart z = 1, x != 0)
    add(
        _eliminant(
            [f.subs(y, 0), f.diff(x).subs(y, 0), f.diff(y).subs(y, 0), u * x - 1],
            (u, x),
            t,
        )
    )
    # punctured line z = 0 (chart y = 1, x != 0)
    h = F.subs(y, 1)
    add(
        _eliminant(
            [h.subs(z, 0), h.diff(x).subs(z, 0), h.diff(z).subs(z, 0), u * x - 1],
            (u, x),
            t,
        )
    )

    # the three vertices: multiplicity >= 2 there means every monomial of
    # local degree <= 1 has vanishing t-coefficient
    for chart_vars, expr in (
        ((x, y), f),                  # vertex (0 : 0 : 1)
        ((x, z), F.subs(y, 1)),       # vertex (0 : 1 : 0)
        ((y, z), F.subs(x, 1)),       # vertex (1 : 0 : 0)
    ):
        v1, v2 = chart_vars
        p = sympy.Poly(expr, v1, v2)
        coeff_at = dict(zip(p.monoms(), p.coeffs()))
        conditions = [c for mono, c in coeff_at.items() if mono[0] + mono[1] <= 1]
        if conditions:
            g = sympy.Integer(0)
            for cond in conditions:
                g = sympy.gcd(g, cond)
            add(sympy.expand(g))
            continue
        add(_persistent_vertex_eliminant(coeff_at, v1, v2))

    result = sympy.Poly(1, t)
    for p in contributions:
        result *= p
    return result


def oracle_matches_locus(oracle: sympy.Poly, locus: SingularLocus) -> bool:
    """Do the nonzero roots of the oracle agree exactly with the away orbit?

    Compares the squarefree part of the oracle, with all powers of t divided
    out, against t^{k4} - c up to a constant.
    """
    t = T_SYM
    expr = oracle.as_expr()
    if expr.is_zero:
        return False
    _, factors = sympy.factor_list(expr, t)
    reduced = sympy.Integer(1)
    for base, _mult in factors:
        if base == t:
            continue
        reduced *= base
    lhs = sympy.Poly(reduced, t)
    rhs = locus.polynomial()
    if lhs.degree() != rhs.degree():
        return False
    return lhs.monic() == rhs.monic()


# ---------------------------------------------------------------------------
# Orbit structure of the away fibers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitStructure:
    """The away singular fibers as one orbit under t -> zeta * t.

    The locus polynomial t^exponent - value only involves t^exponent, so the
    away fibers are permuted by the order-``exponent`` rotation group of the
    base; in the quotient parameter s = t^exponent they sit over the single
    value s = ``value``.
    """

    exponent: int
    value: Fraction
    locus: SingularLocus

    @property
    def negation_invariant(self) -> bool:
        """Is the away locus stable under t -> -t?"""
        return self.exponent % 2 == 0


def structure_decomposition(plane: PlaneModel) -> OrbitStructure:
    # knowable from the kernel alone, even when the closed-form locus is
    # degenerate (duplicated monomial)
    locus = singular_locus(plane)
    return OrbitStructure(plane.kernel[3], _kernel_product(plane), locus)


# ---------------------------------------------------------------------------
# Trichotomy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Isotrivial:
    """The t-monomial duplicates monomial ``duplicate_index``: the family is
    one fixed curve with a moving coefficient, degenerating at one value."""

    branch = "isotrivial"
    duplicate_index: int
    degeneration_value: Fraction


@dataclass(frozen=True)
class SuperellipticForm:
    """Normal form u^a = psi(v) of the generic fiber as a cyclic cover.

    ``terms`` are the three monomials of psi: (coefficient, exponent,
    carries_t), exponents pairwise distinct and >= 0, exactly one term
    flagged as carrying the parameter.
    """

    cover_exponent: int
    terms: tuple[tuple[Fraction, int, bool], ...]

    def psi_expr(self, v, t):
        total = sympy.Integer(0)
        for coeff, e, has_t in self.terms:
            term = _rat(coeff) * v**e
            if has_t:
                term *= t
            total += term
        return total


@dataclass(frozen=True)
class Superelliptic:
    branch = "superelliptic"
    form: SuperellipticForm
    generic_genus: int
    constant_j: Optional[Fraction]


@dataclass(frozen=True)
class SemistableAway:
    """All k_i nonzero: no cyclic-cover structure, singular away fibers are
    isolated and expected nodal."""

    branch = "semistable_away"
    locus: SingularLocus


Trichotomy = Union[Isotrivial, Superelliptic, SemistableAway]


def classify_trichotomy(minimal: MinimalFibration, plane: PlaneModel) -> Trichotomy:
    pairs = [(ex, ey) for _, (ex, ey, _) in minimal.equation.terms]
    coeffs = [c for c, _ in minimal.equation.terms]
    for i in range(3):
        if pairs[i] == pairs[3]:
            return Isotrivial(i, -coeffs[i] / coeffs[3])
    k = plane.kernel
    if any(k[i] == 0 for i in range(3)):
        form = superelliptic_form(minimal, plane)
        genus = generic_fiber_genus(form)
        if genus < 1:
            raise ValidationError(
                "generic fiber is rational (cyclic-cover genus 0); the "
                "trichotomy assumes positive genus"
            )
        jval = None
        if genus == 1 and form.cover_exponent >= 3:
            jval = constant_j_value(form)
        return Superelliptic(form, genus, jval)
    return SemistableAway(singular_locus(plane))


# ---------------------------------------------------------------------------
# Superelliptic normal form
# ---------------------------------------------------------------------------


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, u) with a*s + b*u = g = gcd(a, b); iterative, deterministic."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_u, u = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_u, u = u, old_u - q * u
    if old_r < 0:
        old_r, old_s, old_u = -old_r, -old_s, -old_u
    return old_r, old_s, old_u


def superelliptic_form(
    minimal: MinimalFibration, plane: PlaneModel
) -> SuperellipticForm:
    """Rewrite the generic fiber as u^a = psi(v).

    When k_i = 0 the other three monomials have collinear exponent vectors.
    A unimodular change of torus coordinates sends the common direction to
    the v-axis, putting those three at one u-level and the k_i = 0 monomial
    at another; the level gap is the cover exponent a, and dividing through
    (after a final u -> u * v^s twist to clear negative exponents, s minimal)
    leaves psi as minus the three-term side over the off-line coefficient.
    """
    k = plane.kernel
    zero_positions = [i for i in range(3) if k[i] == 0]
    if len(zero_positions) != 1:
        raise ValidationError("superelliptic form needs exactly one k_i = 0, i < 4")
    off = zero_positions[0]
    pairs = [(ex, ey) for _, (ex, ey, _) in minimal.equation.terms]
    coeffs = [c for c, _ in minimal.equation.terms]
    line = [j for j in range(4) if j != off]

    (a1, b1), (a2, b2) = pairs[line[0]], pairs[line[1]]
    da, db = a2 - a1, b2 - b1
    g = gcd(da, db)
    assert g != 0, "collinear monomials must be distinct"
    da, db = da // g, db // g
    if da < 0 or (da == 0 and db < 0):
        da, db = -da, -db
    # all three line points must actually be collinear along (da, db)
    (a3, b3) = pairs[line[2]]
    assert (a3 - a1) * db == (b3 - b1) * da, "kernel zero without collinearity"

    # unimodular M with (da, db) . M = (0, 1): columns (-db, da) and a Bezout
    # pair; new exponents of (p, q) are (p, q) . M
    _, mu, nu = _egcd(da, db)

    def transform(p: int, q: int) -> tuple[int, int]:
        return (-db * p + da * q, mu * p + nu * q)

    new_pairs = [transform(*pq) for pq in pairs]
    levels = {new_pairs[j][0] for j in line}
    assert len(levels) == 1, "line monomials must share a u-level"
    level = levels.pop()
    off_level, off_v = new_pairs[off]
    a = abs(off_level - level)
    assert a >= 1, "off-line monomial cannot share the line's u-level"

    raw = [new_pairs[j][1] - off_v for j in line]
    shift = max(0, ceil(-min(raw) / a)) * a
    exponents = [r + shift for r in raw]
    assert len(set(exponents)) == 3
    terms = tuple(
        (-coeffs[j] / coeffs[off], e, j == 3) for j, e in zip(line, exponents)
    )
    return SuperellipticForm(a, terms)


def generic_profile(form: SuperellipticForm) -> list[int]:
    """Multiplicities of the distinct roots of psi for generic t.

    psi = v^m * (trinomial with nonzero constant term); for all but finitely
    many t the trinomial is squarefree with nonzero roots, so the profile is
    one root of multiplicity m (if m > 0) plus deg - m simple roots.
    """
    exps = sorted(e for _, e, _ in form.terms)
    m = exps[0]
    simple = exps[2] - m
    return ([m] if m > 0 else []) + [1] * simple


def superelliptic_genus(cover_exponent: int, multiplicities: Sequence[int]) -> int:
    """Genus of the smooth model of u^a = psi(v) from the multiplicity profile
    of psi (one entry per distinct root; the degree is their sum).

    Riemann-Hurwitz over the v-line: 2g - 2 = -2a + sum over branch places
    (the roots and v = infinity) of (a - gcd(a, multiplicity)).
    """
    a = cover_exponent
    if a < 1:
        raise ValidationError("cover exponent must be >= 1")
    if any(m < 1 for m in multiplicities):
        raise ValidationError("multiplicities must be >= 1")
    degree = sum(multiplicities)
    component_count = gcd(a, gcd(degree, *multiplicities) if multiplicities else a)
    if component_count > 1:
        raise ValidationError(
            f"cover splits into {component_count} components; genus undefined"
        )
    total = -2 * a + (a - gcd(a, degree))
    for m in multiplicities:
        total += a - gcd(a, m)
    assert total % 2 == 0
    return total // 2 + 1


def generic_fiber_genus(form: SuperellipticForm) -> int:
    return superelliptic_genus(form.cover_exponent, generic_profile(form))


def constant_j_value(form: SuperellipticForm) -> Fraction:
    """j-invariant of a genus-one cover with cover exponent >= 3.

    Such a curve has an automorphism of order a >= 3 fixing the base map, so
    j is 0 or 1728 independently of t: 1728 exactly for a = 4.
    """
    a = form.cover_exponent
    if generic_fiber_genus(form) != 1 or a < 3:
        raise ValidationError("constant j only applies to genus-one covers, a >= 3")
    assert a in (3, 4, 6)
    return Fraction(1728) if a == 4 else Fraction(0)


# ---------------------------------------------------------------------------
# Nodality certification (branch 3, individual fibers)
# ---------------------------------------------------------------------------


def fiber_singularities_are_nodal(plane: PlaneModel, t0: Fraction) -> bool:
    """True when every singular point of the fiber over t0 is an ordinary
    node (nondegenerate Hessian).

    Checked exactly: in each of the three affine charts of the plane, the
    system {g = 0, grad g = 0, det Hess g = 0} must be infeasible over the
    complex numbers, which the Groebner basis decides.
    """
    x, y, z = X_SYM, Y_SYM, Z_SYM
    F = plane_curve_expr(plane).subs(T_SYM, _rat(t0))
    for g, (v1, v2) in (
        (F.subs(z, 1), (x, y)),
        (F.subs(y, 1), (x, z)),
        (F.subs(x, 1), (y, z)),
    ):
        g1, g2 = g.diff(v1), g.diff(v2)
        hess = g1.diff(v1) * g2.diff(v2) - g1.diff(v2) ** 2
        basis = sympy.groebner([g, g1, g2, hess], v1, v2, order="grevlex")
        if list(basis.exprs) != [sympy.Integer(1)]:
            return False
    return True


# ---------------------------------------------------------------------------
# Named constant-modulus families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IsotrivialFamily:
    """A recognized family whose fibers have constant modulus.

    kinds: "duplicate_monomial" (a fixed three-term curve, one moving
    coefficient), "cubic_cover" (cube cover of a nodal-cubic base shape:
    u^3 + v^3 + v^2 + t^n), "conic_cover" (u^a + v^2 + v + t^n).
    """

    kind: str
    power: int
    cover_exponent: Optional[int]
    j_value: Optional[Fraction]


def classify_isotrivial(minimal: MinimalFibration) -> IsotrivialFamily:
    """Match a minimal fibration against the named constant-modulus shapes.

    The patterns are matched on exponents, up to swapping the two fiber
    variables and reordering the t-free monomials.  ``power`` is the degree
    of the base change recorded during reduction (the family as given was
    m1 + m2 + m3 + t^power * m4).
    """
    n = abs(minimal.base_change.degree)
    pairs = [(ex, ey) for _, (ex, ey, _) in minimal.equation.terms]
    for i in range(3):
        if pairs[i] == pairs[3]:
            return IsotrivialFamily("duplicate_monomial", n, None, None)

    if pairs[3] != (0, 0):
        raise UnsupportedShapeError("no constant-modulus pattern matched")
    for swap in (False, True):
        qs = [(q, p) for p, q in pairs[:3]] if swap else list(pairs[:3])
        if sorted(qs) == [(0, 3), (2, 0), (3, 0)]:
            # u^3 + v^3 + v^2 + t^n: cube cover of a three-term cubic, j = 0
            return IsotrivialFamily("cubic_cover", n, 3, Fraction(0))
        onvar = sorted(pq for pq in qs if pq[1] == 0)
        offvar = [pq for pq in qs if pq[0] == 0 and pq[1] != 0]
        if onvar == [(1, 0), (2, 0)] and len(offvar) == 1:
            # u^a + v^2 + v + t^n: degree-a cover of a moving conic
            a = offvar[0][1]
            j = None
            if a == 3:
                j = Fraction(0)
            elif a == 4:
                j = Fraction(1728)
            return IsotrivialFamily("conic_cover", n, a, j)
    raise UnsupportedShapeError("no constant-modulus pattern matched")
