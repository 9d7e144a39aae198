"""Genus-one pipeline: Weierstrass models, Kodaira fiber types, gamma.

Everything is exact.  Models live over Q(t): the five coefficients are sympy
expressions in t, the invariants are computed by the standard b/c formulas
(with the two classical identities asserted on every call), and places of the
base line are rational numbers, the point at infinity, or a polynomial whose
roots form one Galois orbit.

The classification at a place uses the characteristic-zero correspondence
between Kodaira symbols and the valuations (v(c4), v(c6), v(delta)) of the
minimal model there; minimality is reached by shifting with the largest
k <= min(v4/4, v6/6, vd/12), which in residue characteristic zero is the
whole of Tate's algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import sympy
from sympy.abc import t as T_SYM
from sympy.abc import x as X_SYM

from .errors import NotConvertibleError, UnsupportedShapeError, ValidationError
from .reduction import MinimalFibration, plane_model
from .singular import (
    Isotrivial,
    Superelliptic,
    classify_isotrivial,
    classify_trichotomy,
    singular_locus,
    superelliptic_form,
)

AT_INFINITY = sympy.oo


def _rat(q: Fraction) -> sympy.Rational:
    return sympy.Rational(q.numerator, q.denominator)


# ---------------------------------------------------------------------------
# Models and invariants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q(t)."""

    a1: sympy.Expr
    a2: sympy.Expr
    a3: sympy.Expr
    a4: sympy.Expr
    a6: sympy.Expr

    @classmethod
    def short(cls, a2=0, a4=0, a6=0) -> "WeierstrassModel":
        """y^2 = x^3 + a2 x^2 + a4 x + a6."""
        return cls(
            sympy.Integer(0),
            sympy.sympify(a2),
            sympy.Integer(0),
            sympy.sympify(a4),
            sympy.sympify(a6),
        )


@dataclass(frozen=True)
class WeierstrassInvariants:
    b2: sympy.Expr
    b4: sympy.Expr
    b6: sympy.Expr
    b8: sympy.Expr
    c4: sympy.Expr
    c6: sympy.Expr
    delta: sympy.Expr
    j: sympy.Expr


def weierstrass_invariants(model: WeierstrassModel) -> WeierstrassInvariants:
    """The b-, c-invariants, discriminant and j, with both classical
    identities (4 b8 = b2 b6 - b4^2 and c4^3 - c6^2 = 1728 delta) asserted."""
    a1, a2, a3, a4, a6 = (
        sympy.expand(sympy.sympify(a))
        for a in (model.a1, model.a2, model.a3, model.a4, model.a6)
    )
    b2 = sympy.expand(a1**2 + 4 * a2)
    b4 = sympy.expand(2 * a4 + a1 * a3)
    b6 = sympy.expand(a3**2 + 4 * a6)
    b8 = sympy.expand(a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2)
    c4 = sympy.expand(b2**2 - 24 * b4)
    c6 = sympy.expand(-(b2**3) + 36 * b2 * b4 - 216 * b6)
    delta = sympy.expand(-(b2**2) * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6)
    if delta == 0:
        raise ValidationError(
            "discriminant vanishes identically: not an elliptic fibration"
        )
    assert sympy.expand(4 * b8 - (b2 * b6 - b4**2)) == 0
    assert sympy.expand(c4**3 - c6**2 - 1728 * delta) == 0
    j = sympy.cancel(c4**3 / delta)
    return WeierstrassInvariants(b2, b4, b6, b8, c4, c6, delta, j)


# ---------------------------------------------------------------------------
# Kodaira symbols
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KodairaFiber:
    """A Kodaira symbol with its Euler number and conductor exponent.

    ``n`` is the index for I_n and I_n* and 0 otherwise; the smooth fiber is
    I0 with (n, e, f) = (0, 0, 0).
    """

    symbol: str
    n: int
    euler: int
    conductor: int


_ADDITIVE_EULER = {"II": 2, "III": 3, "IV": 4, "I0*": 6, "IV*": 8, "III*": 9, "II*": 10}


def kodaira_fiber(symbol: str) -> KodairaFiber:
    """Build a fiber record from its symbol ("I3", "I1*", "IV*", ...)."""
    if symbol == "I0":
        return KodairaFiber("I0", 0, 0, 0)
    if symbol in _ADDITIVE_EULER:
        return KodairaFiber(symbol, 0, _ADDITIVE_EULER[symbol], 2)
    body = symbol[1:-1] if symbol.endswith("*") else symbol[1:]
    if symbol.startswith("I") and body.isdigit() and int(body) >= 1:
        n = int(body)
        if symbol.endswith("*"):
            return KodairaFiber(symbol, n, 6 + n, 2)
        return KodairaFiber(symbol, n, n, 1)
    raise ValidationError(f"unknown Kodaira symbol {symbol!r}")


Place = Union[Fraction, sympy.Expr]


def _multiplicity(p: sympy.Poly, pi: sympy.Poly) -> int:
    n = 0
    while True:
        q, r = sympy.div(p, pi)
        if not r.is_zero:
            return n
        p, n = q, n + 1


def _valuation(expr: sympy.Expr, place: Place):
    """Order of vanishing at a place of P^1; sympy.oo for the zero function."""
    expr = sympy.cancel(sympy.sympify(expr))
    if expr == 0:
        return sympy.oo
    num_e, den_e = sympy.fraction(sympy.together(expr))
    num = sympy.Poly(num_e, T_SYM)
    den = sympy.Poly(den_e, T_SYM)
    if place is AT_INFINITY:
        return den.degree() - num.degree()
    if isinstance(place, Fraction):
        pi = sympy.Poly(T_SYM - _rat(place), T_SYM)
    else:
        pi = sympy.Poly(place, T_SYM)
    return _multiplicity(num, pi) - _multiplicity(den, pi)


def _classify_valuations(v4, v6, vd) -> KodairaFiber:
    # pass to the minimal model: u-substitutions shift by multiples of
    # (4, 6, 12), and vd is always finite
    k = vd // 12
    if v4 is not sympy.oo:
        k = min(k, v4 // 4)
    if v6 is not sympy.oo:
        k = min(k, v6 // 6)
    a = v4 - 4 * k if v4 is not sympy.oo else sympy.oo
    b = v6 - 6 * k if v6 is not sympy.oo else sympy.oo
    d = vd - 12 * k
    assert d >= 0
    if d == 0:
        return kodaira_fiber("I0")
    if a == 0:
        return kodaira_fiber(f"I{d}")
    if a == 2 and b == 3 and d >= 7:
        return kodaira_fiber(f"I{d - 6}*")
    table = {2: "II", 3: "III", 4: "IV", 6: "I0*", 8: "IV*", 9: "III*", 10: "II*"}
    symbol = table.get(d)
    sane = {
        "II": b == 1,
        "III": a == 1,
        "IV": b == 2,
        "I0*": a >= 2 and b >= 3,
        "IV*": b == 4,
        "III*": a == 3,
        "II*": b == 5,
    }
    if symbol is None or not sane[symbol]:
        raise AssertionError(f"no Kodaira symbol for valuations {(a, b, d)}")
    return kodaira_fiber(symbol)


def kodaira_type(model: WeierstrassModel, place: Place) -> KodairaFiber:
    """Fiber type of the relatively minimal model over the given place.

    ``place`` is a rational number, AT_INFINITY, or a polynomial in t whose
    roots form one orbit (it is factored; the conjugate places must agree on
    their valuation data, which is asserted).
    """
    inv = weierstrass_invariants(model)
    if place is AT_INFINITY or isinstance(place, Fraction):
        factors = [place]
    else:
        _, parts = sympy.factor_list(sympy.sympify(place), T_SYM)
        factors = [base for base, _ in parts if base.has(T_SYM)]
        assert factors, "orbit place must involve t"
    triples = {
        (
            _valuation(inv.c4, pi),
            _valuation(inv.c6, pi),
            _valuation(inv.delta, pi),
        )
        for pi in factors
    }
    assert len(triples) == 1, f"conjugate places disagree: {triples}"
    return _classify_valuations(*triples.pop())


# ---------------------------------------------------------------------------
# gamma
# ---------------------------------------------------------------------------


def gamma(
    at_zero: KodairaFiber,
    at_infinity: KodairaFiber,
    away: Sequence[tuple[KodairaFiber, int]],
) -> Fraction:
    """sum over away places of (f - e/6), minus n0/6 and n_infinity/6.

    ``away`` lists each away fiber type once with its number of places (an
    orbit contributes its size); n is the I_n / I_n* index, 0 for the other
    types.
    """
    total = Fraction(0)
    for fiber, count in away:
        total += count * (Fraction(fiber.conductor) - Fraction(fiber.euler, 6))
    return total - Fraction(at_zero.n, 6) - Fraction(at_infinity.n, 6)


# ---------------------------------------------------------------------------
# From minimal fibrations to Weierstrass models
# ---------------------------------------------------------------------------


def _psi_direct(minimal: MinimalFibration) -> Optional[sympy.Expr]:
    """When one monomial is y^2 and the rest are y-free, the fibration reads
    y^2 = psi(x, t) directly; returns psi or None."""
    eq = minimal.equation
    pairs = [(ex, ey) for _, (ex, ey, _) in eq.terms]
    coeffs = [c for c, _ in eq.terms]
    for i, pair in enumerate(pairs):
        if pair != (0, 2):
            continue
        if any(ey != 0 for j, (_, ey) in enumerate(pairs) if j != i):
            continue
        lead = _rat(coeffs[i]) * (T_SYM if i == 3 else 1)
        psi = sympy.Integer(0)
        for j, (ex, _) in enumerate(pairs):
            if j == i:
                continue
            term = _rat(coeffs[j]) * X_SYM**ex
            if j == 3:
                term *= T_SYM
            psi += term
        return sympy.cancel(-psi / lead)
    return None


def _double_cover_model(psi: sympy.Expr) -> WeierstrassModel:
    """Weierstrass model of u^2 = psi(v), psi in Q(t)[v] of genus one.

    Square factors of v are absorbed into u first; the reduced right side
    must be a cubic (straightened by X = a v, Y = a u) or a quartic (replaced
    by its Jacobian via the classical binary-quartic invariants I and J —
    same j, same fiber types).
    """
    p = sympy.Poly(sympy.expand(psi), X_SYM)
    if p.is_zero:
        raise NotConvertibleError("zero right-hand side")
    mu = min(m[0] for m in p.monoms())
    shift = {m[0] - 2 * (mu // 2): c for m, c in zip(p.monoms(), p.coeffs())}
    degree = max(shift)
    if degree == 3:
        a, b, c, d = (shift.get(i, sympy.Integer(0)) for i in (3, 2, 1, 0))
        return WeierstrassModel(
            sympy.Integer(0),
            sympy.expand(b),
            sympy.Integer(0),
            sympy.expand(a * c),
            sympy.expand(a**2 * d),
        )
    if degree == 4:
        a, b, c, d, e = (shift.get(i, sympy.Integer(0)) for i in (4, 3, 2, 1, 0))
        inv_i = 12 * a * e - 3 * b * d + c**2
        inv_j = (
            72 * a * c * e
            - 27 * a * d**2
            - 27 * b**2 * e
            + 9 * b * c * d
            - 2 * c**3
        )
        return WeierstrassModel.short(
            a4=sympy.expand(-27 * inv_i), a6=sympy.expand(-27 * inv_j)
        )
    raise NotConvertibleError(
        f"double cover has degree {degree} after clearing squares; need 3 or 4"
    )


def genus_one_weierstrass(minimal: MinimalFibration) -> WeierstrassModel:
    """Weierstrass model of a genus-one minimal fibration, when the equation
    is (or straightens to) a double cover y^2 = cubic-or-quartic; raises
    NotConvertibleError otherwise."""
    psi = _psi_direct(minimal)
    if psi is None:
        plane = plane_model(minimal)
        zeros = [i for i in range(3) if plane.kernel[i] == 0]
        if len(zeros) != 1:
            raise NotConvertibleError(
                "no y^2-in-x shape and no cyclic-cover structure"
            )
        form = superelliptic_form(minimal, plane)
        if form.cover_exponent != 2:
            raise NotConvertibleError(
                f"cyclic cover of exponent {form.cover_exponent}, not 2"
            )
        psi = form.psi_expr(X_SYM, T_SYM)
    return _double_cover_model(psi)


# ---------------------------------------------------------------------------
# The eligibility verdict
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantJ:
    """All smooth fibers share one modulus; j may be unknown (None) for
    isotrivial shapes with no recognized model."""

    kind = "constant_j"
    j_value: Optional[Fraction]


@dataclass(frozen=True)
class BaseChangeOfGammaLessOne:
    """The fibration is the degree-k4 base change of a rational elliptic
    fibration with one away fiber and gamma < 1."""

    kind = "base_change_gamma_lt_one"
    gamma: Fraction
    away_fiber: KodairaFiber
    base_change_exponent: int
    at_zero: KodairaFiber
    at_infinity: KodairaFiber


FastenbergVerdict = Union[ConstantJ, BaseChangeOfGammaLessOne]


def _exponents_multiple_of(expr: sympy.Expr, k: int) -> bool:
    num, den = sympy.fraction(sympy.together(expr))
    for part in (num, den):
        poly = sympy.Poly(part, T_SYM)
        if any(m[0] % k != 0 for m in poly.monoms()):
            return False
    return True


def _isotrivial_j(minimal: MinimalFibration) -> Optional[Fraction]:
    try:
        inv = weierstrass_invariants(genus_one_weierstrass(minimal))
    except (NotConvertibleError, ValidationError):
        try:
            return classify_isotrivial(minimal).j_value
        except UnsupportedShapeError:
            return None
    if inv.j.has(T_SYM):  # moving coefficient absorbed: cannot happen
        raise AssertionError("isotrivial family with nonconstant j")
    return Fraction(int(inv.j.as_numer_denom()[0]), int(inv.j.as_numer_denom()[1]))


def fastenberg_check(minimal: MinimalFibration) -> FastenbergVerdict:
    """Constant j, or the gamma < 1 base-change verdict of the quotient.

    For nonconstant j the away fibers must be multiplicative (asserted); the
    quotient by t -> t^{k4} has a single away fiber I_nu, and its gamma is
    1 - (nu + n0/k4 + n_inf/k4)/6, the divisibilities being consequences of
    j living in Q(t^{k4}) (asserted too).
    """
    plane = plane_model(minimal)
    trichotomy = classify_trichotomy(minimal, plane)
    if isinstance(trichotomy, Isotrivial):
        return ConstantJ(_isotrivial_j(minimal))
    if isinstance(trichotomy, Superelliptic):
        if trichotomy.generic_genus != 1:
            raise ValidationError(
                f"genus-one pipeline on a genus-{trichotomy.generic_genus} fibration"
            )
        if trichotomy.constant_j is not None:
            return ConstantJ(trichotomy.constant_j)
    model = genus_one_weierstrass(minimal)
    inv = weierstrass_invariants(model)
    if not inv.j.has(T_SYM):
        num, den = inv.j.as_numer_denom()
        return ConstantJ(Fraction(int(num), int(den)))

    k4 = plane.kernel[3]
    locus = singular_locus(plane)
    assert _exponents_multiple_of(inv.j, k4), "j must be a function of t^k4"
    orbit = sympy.expand(T_SYM**k4 - _rat(locus.value))

    # delta = unit * t^m * (t^k4 - c)^nu exactly
    delta_num, delta_den = sympy.fraction(sympy.together(inv.delta))
    assert len(sympy.Poly(delta_den, T_SYM).monoms()) == 1
    num = sympy.Poly(delta_num, T_SYM)
    nu = _multiplicity(num, sympy.Poly(orbit, T_SYM))
    assert nu >= 1, "away locus must divide the discriminant"
    rest = sympy.div(num.as_expr(), orbit**nu)[0]
    assert len(sympy.Poly(rest, T_SYM).monoms()) == 1, (
        "discriminant has roots outside {0, away orbit}"
    )

    away = kodaira_type(model, orbit)
    assert away.symbol == f"I{nu}", "away fiber of a nonconstant-j family"
    at_zero = kodaira_type(model, Fraction(0))
    at_infinity = kodaira_type(model, AT_INFINITY)
    assert at_zero.n % k4 == 0 and at_infinity.n % k4 == 0
    quotient_gamma = 1 - Fraction(nu + at_zero.n // k4 + at_infinity.n // k4, 6)
    return BaseChangeOfGammaLessOne(
        quotient_gamma, away, k4, at_zero, at_infinity
    )
