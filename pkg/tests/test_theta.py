import pytest

from symdet.curve import Divisor, IncompleteSection, PlaneCurve, ProjectivePoint, matrix_power
from symdet.field import QQ, cyclotomic_field
from symdet.poly import fermat, klein_quartic, parse_poly
from symdet.theta import (
    BitangentWitness,
    ExtensionNeeded,
    GroupRingElement,
    ThetaError,
    TwoTorsionCertificate,
    bitangent_check,
    effectivity_witness,
    fermat7_certificate,
    fermat7_data,
    group_ring_identity_check,
    group_ring_sides,
    klein_birational_verify,
    quotient_map_verify,
    sqrt_in_cyclotomic,
    theta_square_check,
    transport_certificate,
    two_torsion_verify,
)


@pytest.fixture(scope="module")
def f7():
    return fermat7_data()


def test_klein_bitangent():
    C = PlaneCurve(klein_quartic())
    w = bitangent_check(C, (1, 1, 1))
    K = cyclotomic_field(3)
    z3 = K.gen
    assert {w.P, w.Q} == {ProjectivePoint([z3, z3**2, 1], K), ProjectivePoint([z3**2, z3, 1], K)}
    assert w.c == -1
    assert w.q.to_text() == "u^2 + u*v + v^2"
    assert w.restricted == -(w.q * w.q)
    assert theta_square_check(w)


def test_bitangent_with_supplied_candidates():
    C = PlaneCurve(klein_quartic())
    K = cyclotomic_field(3)
    z3 = K.gen
    cands = [ProjectivePoint([z3, z3**2, 1], K), ProjectivePoint([z3**2, z3, 1], K), ProjectivePoint([1, 0, 0])]
    w = bitangent_check(C, (1, 1, 1), candidates=cands)
    assert theta_square_check(w)


def test_not_a_bitangent():
    assert bitangent_check(PlaneCurve(fermat(4)), (0, 0, 1)) is None


def test_bitangent_preconditions():
    C = PlaneCurve(parse_poly("X0*(X0^3 + X1^3 + X2^3)"))
    with pytest.raises(ThetaError):
        bitangent_check(C, (1, 0, 0))
    with pytest.raises(ThetaError):
        bitangent_check(PlaneCurve(fermat(5)), (1, 1, 1))


def test_tampered_witness_fails():
    C = PlaneCurve(klein_quartic())
    w = bitangent_check(C, (1, 1, 1))
    bad = BitangentWitness(C, w.line, w.P, w.P, w.restricted, w.q, w.c)
    assert not theta_square_check(bad)


def test_hyperflex_witness():
    # X0^4 + X1^3 X2 + X2^4 meets X2 = 0 only in (0,1,0), with multiplicity 4
    C = PlaneCurve(parse_poly("X0^4 + X1^3*X2 + X2^4"))
    w = bitangent_check(C, (0, 0, 1))
    assert w.P == w.Q == ProjectivePoint([0, 1, 0])
    assert w.contact_divisor == Divisor(C, [(w.P, 4)])
    assert theta_square_check(w)


def test_square_roots_in_small_conductors():
    K, s = sqrt_in_cyclotomic(-3, QQ)
    assert K.m == 3 and s * s == K(-3)
    K, s = sqrt_in_cyclotomic(3, QQ)
    assert K.m == 12 and s * s == K(3)
    K, s = sqrt_in_cyclotomic(-4, QQ)
    assert K.m == 4 and s * s == K(-4)
    assert sqrt_in_cyclotomic(9, QQ) == (QQ, 3)
    with pytest.raises(ExtensionNeeded):
        sqrt_in_cyclotomic(2, QQ)


def test_fermat7_fixture(f7):
    assert len(f7.D) == 21 and f7.D.degree == 0
    assert sorted(f7.D.support.values()) == [-2] * 7 + [1] * 14
    # A^3 B permutes the 14 orbit points in two 7-cycles
    from symdet.curve import apply_automorphism

    first, second = f7.orbit[:7], f7.orbit[7:]
    for cycle in (first, second):
        images = [apply_automorphism(P, f7.A3B) for P in cycle]
        assert images == cycle[1:] + cycle[:1]


def test_two_torsion_certificate(f7):
    cert = fermat7_certificate(f7)
    assert two_torsion_verify(cert)
    again = TwoTorsionCertificate.from_text(cert.to_text())
    assert again.to_text() == cert.to_text()


def test_sigma_orbit(f7):
    cert = fermat7_certificate(f7)
    for k in (1, 2):
        moved = transport_certificate(cert, matrix_power(f7.sigma, k, f7.field))
        assert two_torsion_verify(moved)
        assert moved.D != cert.D
    wrong = TwoTorsionCertificate(cert.curve, transport_certificate(cert, f7.sigma).D, cert.G, cert.H,
                                  cert.candidates_G, cert.candidates_H)
    assert not two_torsion_verify(wrong)


def test_trivial_class(f7):
    C = f7.curve
    X2 = parse_poly("X2")
    cert = TwoTorsionCertificate(C, Divisor(C, []), X2, X2, f7.R, f7.R)
    assert two_torsion_verify(cert)


def test_incomplete_candidates_reported(f7):
    cert = fermat7_certificate(f7)
    short = TwoTorsionCertificate(cert.curve, cert.D, cert.G, cert.H, cert.candidates_G[1:], cert.candidates_H)
    with pytest.raises(IncompleteSection) as err:
        two_torsion_verify(short)
    assert err.value.missing == 2


def test_effectivity(f7):
    X2 = parse_poly("X2")
    assert effectivity_witness(f7.curve, f7.D, X2, f7.R)
    assert not effectivity_witness(f7.curve, Divisor(f7.curve, [(f7.R[0], -3)]), X2, f7.R)
    assert effectivity_witness(f7.curve, Divisor(f7.curve, []), X2, f7.R)
    with pytest.raises(IncompleteSection):
        effectivity_witness(f7.curve, f7.D, X2, f7.R[:5])


@pytest.mark.parametrize("p,s", [(p, s) for p in (3, 5, 7) for s in range(1, p - 1)])
def test_quotient_maps(p, s):
    assert quotient_map_verify(p, s)


def test_quotient_map_range():
    for p, s in ((7, 0), (7, 6), (4, 1), (2, 1)):
        with pytest.raises(ThetaError):
            quotient_map_verify(p, s)


def test_klein_birational():
    assert klein_birational_verify()
    assert not klein_birational_verify(t_sign=1)
    assert not klein_birational_verify(s_exponent=1)


def test_group_ring():
    lhs, rhs = group_ring_sides(3)
    expected = GroupRingElement.one(3) * -2 + GroupRingElement.basis(3, 2, 1) + GroupRingElement.basis(3, 1, 2)
    assert lhs == expected and rhs == expected
    assert all(group_ring_identity_check(p) for p in (3, 5, 7, 11, 13))
    for bad in (2, 9, 1):
        with pytest.raises(ThetaError):
            group_ring_identity_check(bad)


def test_group_ring_multiplication():
    A = GroupRingElement.basis(5, 1, 0)
    B = GroupRingElement.basis(5, 0, 1)
    assert A**5 == GroupRingElement.one(5)
    assert A * B == B * A == GroupRingElement.basis(5, 1, 1)
    assert (A + B) * (A - B) == A * A - B * B
