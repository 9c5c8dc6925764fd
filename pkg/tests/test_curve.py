from fractions import Fraction

import pytest
import sympy

from symdet.curve import (
    CommonComponent,
    CurveError,
    Divisor,
    IncompleteSection,
    NotOnCurve,
    PlaneCurve,
    ProjectivePoint,
    SingularPoint,
    SmoothnessUndecidable,
    apply_automorphism,
    branch_expand,
    divisor_of_function_verify,
    galois_invariant,
    is_smooth,
    local_intersection_multiplicity,
    point_on_curve,
    read_divisor_text,
    section_divisor,
)
from symdet.field import GF, cyclotomic_field
from symdet.poly import fermat, klein_quartic, parse_poly

x, z = sympy.symbols("x z")


def test_point_normalization():
    P = ProjectivePoint([2, 4, 2])
    assert P.coords == (1, 2, 1)
    assert ProjectivePoint([3, 0, 0]).coords == (1, 0, 0)
    assert P == ProjectivePoint([Fraction(1, 2), 1, Fraction(1, 2)])
    with pytest.raises(CurveError):
        ProjectivePoint([0, 0, 0])


def test_point_on_curve_across_fields():
    C = PlaneCurve(klein_quartic())
    K = cyclotomic_field(3)
    z3 = K.gen
    assert point_on_curve(C, ProjectivePoint([z3, z3**2, 1], K))
    assert not point_on_curve(C, ProjectivePoint([1, 1, 1]))


def test_smoothness():
    assert is_smooth(PlaneCurve(klein_quartic()))
    assert is_smooth(PlaneCurve(fermat(7)))
    assert not is_smooth(PlaneCurve(parse_poly("X0^2*X2 - X1^3")))
    assert not is_smooth(PlaneCurve(parse_poly("X0*X1*X2")))
    assert is_smooth(PlaneCurve(parse_poly("X0 + X1")))
    with pytest.raises(SmoothnessUndecidable):
        is_smooth(PlaneCurve(fermat(5, GF(5))))


def test_branch_residual_vanishes():
    C = PlaneCurve(parse_poly("X0^2 + X1^2 - X2^2"))
    exp = branch_expand(C, ProjectivePoint([0, 1, 1]), 4)
    assert exp.residual_order() > 4
    # y = sqrt(1 - x^2) = 1 - x^2/2 - x^4/8
    assert exp.coeffs == [0, 0, Fraction(-1, 2), 0, Fraction(-1, 8)]


def test_branch_at_singular_point():
    C = PlaneCurve(parse_poly("X0^2*X2 - X1^3"))
    with pytest.raises(SingularPoint):
        branch_expand(C, ProjectivePoint([0, 0, 1]), 3)
    with pytest.raises(NotOnCurve):
        branch_expand(C, ProjectivePoint([1, 1, 2]), 3)


def test_multiplicities_on_lines():
    conic = PlaneCurve(parse_poly("X0^2 + X1^2 - X2^2"))
    assert local_intersection_multiplicity(conic, parse_poly("X2 - X1"), ProjectivePoint([0, 1, 1])) == 2
    assert local_intersection_multiplicity(conic, parse_poly("X0"), ProjectivePoint([0, 1, 1])) == 1
    assert local_intersection_multiplicity(conic, parse_poly("X0 - 5*X2"), ProjectivePoint([0, 1, 1])) == 0
    klein = PlaneCurve(klein_quartic())
    # X0 = 0 is the tangent at (0,0,1) and meets the Klein quartic in X1^3 X2: a flex
    assert local_intersection_multiplicity(klein, parse_poly("X0"), ProjectivePoint([0, 0, 1])) == 3
    assert local_intersection_multiplicity(klein, parse_poly("X0"), ProjectivePoint([0, 1, 0])) == 1


def test_multiplicity_against_resultant_oracle():
    C = PlaneCurve(parse_poly("X1*X2 - X0^2"))
    G = parse_poly("X1*X2^2 - X0^3")
    pts = [ProjectivePoint([0, 0, 1]), ProjectivePoint([1, 1, 1]), ProjectivePoint([0, 1, 0])]
    mults = [local_intersection_multiplicity(C, G, P) for P in pts]
    # chart X2 = 1: y = x^2, y = x^3 gives x^2 (1 - x)
    # chart X1 = 1: z = x^2, z^2 = x^3; the resultant in z is x^3 (x - 1)
    res = sympy.factor_list(sympy.resultant(z - x**2, z**2 - x**3, z))
    order_at_zero = dict((f, e) for f, e in res[1])[x]
    assert mults == [2, 1, order_at_zero]
    D, complete = section_divisor(C, G, pts)
    assert complete and D.degree == 6


def test_common_component():
    C = PlaneCurve(parse_poly("X0^2 + X1^2 - X2^2"))
    G = parse_poly("(X0^2 + X1^2 - X2^2)*X0")
    with pytest.raises(CommonComponent):
        local_intersection_multiplicity(C, G, ProjectivePoint([0, 1, 1]))


def test_fermat7_orbit_multiplicities():
    K = cyclotomic_field(42)
    eta = K.gen**7
    C = PlaneCurve(fermat(7))
    P = ProjectivePoint([eta, eta.inverse(), -1], K)
    assert point_on_curve(C, P)
    assert local_intersection_multiplicity(C, klein_quartic(), P) == 2
    # the numerator exactly as printed in the source does not even vanish at P
    printed = parse_poly("X1^3*X2 + X0*X2^3 - X0^3*X1")
    assert printed.change_field(K).evaluate(P.coords)


def test_divisor_arithmetic():
    C = PlaneCurve(parse_poly("X0^2 + X1^2 - X2^2"))
    P, Q = ProjectivePoint([0, 1, 1]), ProjectivePoint([1, 0, 1])
    D = Divisor(C, [(P, 2), (Q, -1)])
    E = Divisor(C, [(Q, 1)])
    assert (D + E).degree == 2
    assert (D + E) == Divisor(C, [(P, 2)])
    assert (D - D).degree == 0 and len(D - D) == 0
    assert not D.is_effective() and (D + E).is_effective()
    assert 3 * E == E.scale(3)
    assert read_divisor_text(D.to_text(), C) == D
    with pytest.raises(NotOnCurve):
        Divisor(C, [(ProjectivePoint([1, 1, 1]), 1)])


def test_galois_invariance():
    C = PlaneCurve(klein_quartic())
    K = cyclotomic_field(3)
    z3 = K.gen
    P = ProjectivePoint([z3, z3**2, 1], K)
    Q = ProjectivePoint([z3**2, z3, 1], K)
    assert galois_invariant(Divisor(C, [(P, 1), (Q, 1)]))
    assert not galois_invariant(Divisor(C, [(P, 1)]))


def test_apply_automorphism():
    K = cyclotomic_field(7)
    A = [[K.gen, 0, 0], [0, 1, 0], [0, 0, 1]]
    P = ProjectivePoint([1, -1, 0])
    AP = apply_automorphism(P, A)
    assert AP.coords == (-K.gen, K.one, K.zero)
    assert point_on_curve(PlaneCurve(fermat(7)), AP)


def test_divisor_of_function_on_conic():
    C = PlaneCurve(parse_poly("X0^2 + X1^2 - X2^2"))
    G = parse_poly("X1")  # through t = 0 and t = infinity: (1,0,1), (-1,0,1)
    H = parse_poly("X0")  # (0, 1, 1) and (0, -1, 1)
    cG = [ProjectivePoint([1, 0, 1]), ProjectivePoint([-1, 0, 1])]
    cH = [ProjectivePoint([0, 1, 1]), ProjectivePoint([0, -1, 1])]
    claimed = Divisor(C, [(P, 1) for P in cG] + [(P, -1) for P in cH])
    assert divisor_of_function_verify(C, G, H, claimed, cG, cH)
    assert not divisor_of_function_verify(C, G, H, claimed.scale(2), cG, cH)
    with pytest.raises(IncompleteSection) as err:
        divisor_of_function_verify(C, G, H, claimed, cG[:1], cH)
    assert err.value.missing == 1


def test_section_rejects_off_curve_candidates():
    C = PlaneCurve(parse_poly("X0^2 + X1^2 - X2^2"))
    with pytest.raises(NotOnCurve):
        section_divisor(C, parse_poly("X0"), [ProjectivePoint([1, 1, 1])])
