"""Theta-characteristic witnesses on the Klein quartic and the Fermat septic.

Everything here is a finite, exact certificate: bitangent contact divisors,
the two-torsion divisor class on X0^7 + X1^7 + X2^7 = 0 with its rational
function, effectivity of D + 2H, the quotient maps to V^p = U(1-U)^s and the
group-ring identity behind the multiplication-by-p decomposition.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .curve import (
    CurveError,
    Divisor,
    IncompleteSection,
    PlaneCurve,
    ProjectivePoint,
    apply_automorphism,
    divisor_of_function_verify,
    galois_invariant,
    is_smooth,
    parse_point,
    point_on_curve,
    section_divisor,
)
from .field import QQ, CyclotomicField, common_field, cyclotomic_field, is_prime, parse_field
from .poly import (
    BinaryForm,
    TernaryPoly,
    exact_divide,
    fermat,
    klein_quartic,
    line_point,
    mat_inverse,
    parse_poly,
    restrict_to_line,
    substitute_linear,
)


class ThetaError(ValueError):
    pass


class ExtensionNeeded(ThetaError):
    pass


# ---------------------------------------------------------------------------
# bitangents


@dataclass
class BitangentWitness:
    curve: PlaneCurve
    line: tuple
    P: ProjectivePoint
    Q: ProjectivePoint
    restricted: BinaryForm
    q: BinaryForm
    c: object

    @property
    def contact_divisor(self) -> Divisor:
        return Divisor(self.curve, [(self.P, 2), (self.Q, 2)])

    def line_form(self) -> TernaryPoly:
        return TernaryPoly.linear(self.curve.field, self.line)


def square_root_of_quartic(b: BinaryForm):
    """(c, q) with b = c*q^2 for a binary quadratic q, or None.

    The square root is pinned by a normalized leading coefficient, so the
    coefficient match below decides the question without any extension.
    """
    K = b.field
    if K.characteristic == 2:
        raise ThetaError("perfect-square test needs characteristic different from 2")
    b0, b1, b2, b3, b4 = b.coeffs
    two = K(2)
    if b0:
        beta = b1 / (two * b0)
        gamma = (b2 / b0 - beta * beta) / two
        if b3 / b0 == two * beta * gamma and b4 / b0 == gamma * gamma:
            return b0, BinaryForm(K, 2, [K.one, beta, gamma])
        return None
    if b1:
        return None
    if b2:
        gamma = b3 / (two * b2)
        if b4 == b2 * gamma * gamma:
            return b2, BinaryForm(K, 2, [K.zero, K.one, gamma])
        return None
    if b3:
        return None
    if b4:
        return b4, BinaryForm(K, 2, [K.zero, K.zero, K.one])
    raise ThetaError("line is a component of the curve")


_QUADRATIC_ROOTS = {
    # conductor: [(d, exponent list describing sqrt(d) in the power basis)]
    1: [(1, {0: 1})],
    3: [(1, {0: 1}), (-3, {0: 1, 1: 2})],
    4: [(1, {0: 1}), (-1, {1: 1})],
    12: [(1, {0: 1}), (-1, {3: 1}), (-3, {0: 1, 4: 2}), (3, {1: 1, 11: 1})],
}


def _rational_sqrt(x: Fraction):
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_in_cyclotomic(delta, base):
    """Square root of a rational delta in the smallest of Q(z_m), m in {1,3,4,12} (over base)."""
    if isinstance(base, CyclotomicField):
        if not base(delta).is_rational():
            raise ExtensionNeeded("extension-needed: discriminant is not rational")
        delta = base(delta).rational_value()
    delta = Fraction(delta)
    base_m = base.m if isinstance(base, CyclotomicField) else 1
    for m, roots in _QUADRATIC_ROOTS.items():
        for d, expo in roots:
            r = _rational_sqrt(delta / d)
            if r is None:
                continue
            M = math.lcm(base_m, m)
            K = cyclotomic_field(M) if M > 1 else QQ
            if K is QQ:
                return QQ, r
            step = M // m
            omega = K.zero
            for e, c in expo.items():
                omega = omega + K.zeta_power(e * step) * c
            return K, omega * r
    raise ExtensionNeeded("extension-needed: contact points lie outside Q(z12)")


def _roots_of_quadratic(q: BinaryForm, base):
    """Roots (u, v) of q over a small cyclotomic extension, with the field used."""
    alpha, beta, gamma = q.coeffs
    if not alpha:
        if not beta:
            return base, [(base.one, base.zero)] * 2
        return base, [(base.one, base.zero), (-gamma / beta, base.one)]
    delta = beta * beta - 4 * alpha * gamma
    K, s = sqrt_in_cyclotomic(delta, base)
    a, b = K(alpha), K(beta)
    return K, [((-b + s) / (2 * a), K.one), ((-b - s) / (2 * a), K.one)]


def bitangent_check(C: PlaneCurve, L, candidates=None):
    """Witness that the line L meets the quartic C in 2P + 2Q, or None."""
    if C.degree != 4:
        raise ThetaError("bitangent check needs a quartic")
    if not is_smooth(C):
        raise ThetaError("bitangent check needs a smooth quartic")
    K0 = C.field
    L = tuple(K0(c) for c in L)
    line = TernaryPoly.linear(K0, L)
    if exact_divide(C.F, line) is not None:
        raise ThetaError("line is a component of the curve")
    b = restrict_to_line(C.F, L)
    sq = square_root_of_quartic(b)
    if sq is None:
        return None
    c, q = sq
    if candidates is not None:
        contact = []
        for P in candidates:
            K = common_field(K0, P.field)
            if not TernaryPoly.linear(K, L).evaluate(P.with_field(K).coords) and point_on_curve(C, P):
                contact.append(P)
        if not contact:
            raise ThetaError("no supplied candidate lies on the line and the curve")
        if len(contact) == 1:
            contact = contact * 2
        if len(contact) != 2:
            raise ThetaError("more than two contact candidates on the line")
    else:
        K, roots = _roots_of_quadratic(q, K0)
        contact = [ProjectivePoint(line_point(L, u, v, K), K) for u, v in roots]
    P, Q = sorted(contact, key=lambda pt: pt.sort_key())
    return BitangentWitness(C, L, P, Q, b, q, c)


def theta_square_check(w: BitangentWitness) -> bool:
    """Section of the line is complete and equals 2P + 2Q (4P when P = Q)."""
    try:
        cands = [w.P] if w.P == w.Q else [w.P, w.Q]
        D, complete = section_divisor(w.curve, w.line_form(), cands)
    except CurveError:
        return False
    return complete and D == w.contact_divisor


# ---------------------------------------------------------------------------
# the Fermat septic


def _diag(a, b, c):
    return [[a, 0, 0], [0, b, 0], [0, 0, c]]


SIGMA = [[0, 1, 0], [0, 0, 1], [1, 0, 0]]


@dataclass
class Fermat7Data:
    field: CyclotomicField
    curve: PlaneCurve
    eps: object
    zeta: object
    eta: object
    P: ProjectivePoint
    Q: ProjectivePoint
    R: list
    orbit: list
    D: Divisor
    G: TernaryPoly
    H: TernaryPoly
    A: list
    B: list
    A3B: list
    sigma: list = dc_field(default_factory=lambda: [row[:] for row in SIGMA])


def fermat7_data() -> Fermat7Data:
    """Points, divisor and function of the two-torsion class on F_7, over Q(z42)."""
    K = cyclotomic_field(42)
    eps = K.zeta_power(3)  # primitive 14th root
    zeta = eps * eps
    eta = K.zeta_power(7)  # primitive 6th root
    C = PlaneCurve(fermat(7))
    A = _diag(zeta, K.one, K.one)
    B = _diag(K.one, zeta, K.one)
    A3B = _diag(zeta**3, zeta, K.one)
    P = ProjectivePoint([eta, eta.inverse(), -1], K)
    Q = ProjectivePoint([eta.inverse(), eta, -1], K)
    R = [ProjectivePoint([eps * zeta**j, 1, 0], K) for j in range(7)]
    orbit = []
    for start in (P, Q):
        X = start
        for _ in range(7):
            orbit.append(X)
            X = apply_automorphism(X, A3B)
    for pt in [P, Q] + R + orbit:
        if not point_on_curve(C, pt):
            raise AssertionError(f"fixture point {pt.to_text()} is not on F_7")
    if len(set(orbit) | set(R)) != 21:
        raise AssertionError("fixture points are not pairwise distinct")
    D = Divisor(C, [(X, 1) for X in orbit] + [(r, -2) for r in R], K)
    # numerator of f: vanishes doubly at the 14 orbit points
    G = klein_quartic()
    H = parse_poly("X2^4")
    return Fermat7Data(K, C, eps, zeta, eta, P, Q, R, orbit, D, G, H, A, B, A3B)


@dataclass
class TwoTorsionCertificate:
    curve: PlaneCurve
    D: Divisor
    G: TernaryPoly
    H: TernaryPoly
    candidates_G: list
    candidates_H: list

    def to_text(self) -> str:
        K = self.D.field
        lines = [
            "certificate: two-torsion",
            f"field: {K.tag}",
            f"curve: {self.curve.F.to_text()}",
            f"numerator: {self.G.to_text()}",
            f"denominator: {self.H.to_text()}",
            "divisor:",
        ]
        lines += [f"  {m} {P.with_field(K).to_text()}" for P, m in self.D.sorted_items()]
        lines.append("candidates-numerator:")
        lines += [f"  {P.with_field(K).to_text()}" for P in sorted(self.candidates_G, key=lambda x: x.with_field(K).sort_key())]
        lines.append("candidates-denominator:")
        lines += [f"  {P.with_field(K).to_text()}" for P in sorted(self.candidates_H, key=lambda x: x.with_field(K).sort_key())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "TwoTorsionCertificate":
        header = {}
        sections = {"divisor": [], "candidates-numerator": [], "candidates-denominator": []}
        current = None
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            m = re.fullmatch(r"([a-z-]+):\s*(.*)", line)
            if m and not line.startswith("("):
                key, val = m.group(1), m.group(2)
                if key in sections:
                    current = key
                else:
                    header[key] = val
                    current = None
                continue
            if current is None:
                raise ThetaError(f"unexpected line {line!r}")
            sections[current].append(line)
        for key in ("field", "curve", "numerator", "denominator"):
            if key not in header:
                raise ThetaError(f"certificate lacks {key!r}")
        K = parse_field(header["field"])
        C = PlaneCurve(parse_poly(header["curve"], K))
        terms = []
        for ln in sections["divisor"]:
            m = re.fullmatch(r"([+-]?\d+)\s+(\(.*\))", ln)
            if not m:
                raise ThetaError(f"bad divisor line {ln!r}")
            terms.append((parse_point(m.group(2), K), int(m.group(1))))
        return cls(
            C,
            Divisor(C, terms, K),
            parse_poly(header["numerator"], K),
            parse_poly(header["denominator"], K),
            [parse_point(ln, K) for ln in sections["candidates-numerator"]],
            [parse_point(ln, K) for ln in sections["candidates-denominator"]],
        )


def fermat7_certificate(data: Fermat7Data | None = None) -> TwoTorsionCertificate:
    data = data or fermat7_data()
    return TwoTorsionCertificate(data.curve, data.D, data.G, data.H, list(data.orbit), list(data.R))


def transport_certificate(cert: TwoTorsionCertificate, M) -> TwoTorsionCertificate:
    """Image of a certificate under a curve automorphism X -> M X."""
    K = cert.D.field
    Minv = mat_inverse([[K(x) for x in row] for row in M], K)
    return TwoTorsionCertificate(
        cert.curve,
        apply_automorphism(cert.D, M),
        substitute_linear(cert.G.change_field(K), Minv),
        substitute_linear(cert.H.change_field(K), Minv),
        [apply_automorphism(P, M) for P in cert.candidates_G],
        [apply_automorphism(P, M) for P in cert.candidates_H],
    )


def two_torsion_verify(cert: TwoTorsionCertificate) -> bool:
    """deg D = 0, D Galois-stable and div(G/H) = 2D."""
    if cert.D.degree != 0:
        return False
    if not galois_invariant(cert.D):
        return False
    return divisor_of_function_verify(
        cert.curve, cert.G, cert.H, cert.D.scale(2), cert.candidates_G, cert.candidates_H
    )


def effectivity_witness(C: PlaneCurve, Dv: Divisor, G_section: TernaryPoly, candidates) -> bool:
    """Whether Dv + 2*(G_section . C) is effective, the section being Bezout-complete."""
    if G_section.is_homogeneous() != 1:
        raise ThetaError("effectivity witness expects a line")
    sec, complete = section_divisor(C, G_section, candidates)
    if not complete:
        missing = C.degree - sec.degree
        raise IncompleteSection(f"line section incomplete: {missing} intersections unaccounted for", missing)
    return (Dv + sec.scale(2)).is_effective()


# ---------------------------------------------------------------------------
# quotient maps


class _RatFun:
    """num/den over the polynomial ring; sums reuse a denominator that divides the other."""

    def __init__(self, num, den=None):
        self.num = num
        self.den = den if den is not None else TernaryPoly.constant(num.field, 1)

    @classmethod
    def const(cls, field, c):
        return cls(TernaryPoly.constant(field, c))

    def __add__(self, o):
        q = exact_divide(o.den, self.den)
        if q is not None:
            return _RatFun(self.num * q + o.num, o.den)
        q = exact_divide(self.den, o.den)
        if q is not None:
            return _RatFun(self.num + o.num * q, self.den)
        return _RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    def __neg__(self):
        return _RatFun(-self.num, self.den)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        return _RatFun(self.num * o.num, self.den * o.den)

    def __pow__(self, k):
        return _RatFun(self.num**k, self.den**k)

    def cleared(self, multiplier: TernaryPoly) -> TernaryPoly:
        """num * multiplier / den, which must be a polynomial."""
        q = exact_divide(multiplier, self.den)
        if q is None:
            raise ThetaError("multiplier does not clear the denominator")
        return self.num * q


def _x(i):
    return TernaryPoly.var(QQ, i)


def quotient_map_residue(p: int, s: int) -> TernaryPoly:
    """X2^(p(s+1)) * (V^p - U(1-U)^s) with U = -(X0/X2)^p, V = (-1)^(s+1) X0 X1^s / X2^(s+1)."""
    X0, X1, X2 = _x(0), _x(1), _x(2)
    U = -(_RatFun(X0, X2) ** p)
    V = _RatFun(X0 * X1**s * (-1) ** (s + 1), X2 ** (s + 1))
    one = _RatFun.const(QQ, 1)
    expr = V**p - U * (one - U) ** s
    return expr.cleared(X2 ** (p * (s + 1)))


def quotient_map_verify(p: int, s: int) -> bool:
    if p < 3 or not is_prime(p):
        raise ThetaError(f"p = {p} is not an odd prime")
    if not 1 <= s <= p - 2:
        raise ThetaError(f"s = {s} outside 1 <= s <= {p - 2}")
    return exact_divide(quotient_map_residue(p, s), fermat(p)) is not None


def klein_birational_residue(t_sign: int = -1, s_exponent: int = 2) -> TernaryPoly:
    """c^k * (t^7 - s(1-s)^e) for s = -a^2 b / c^3, t = t_sign * b / c, cleared."""
    a, b, c = _x(0), _x(1), _x(2)
    s = _RatFun(-(a**2) * b, c**3)
    t = _RatFun(b * t_sign, c)
    one = _RatFun.const(QQ, 1)
    expr = t**7 - s * (one - s) ** s_exponent
    return expr.cleared(c ** max(7, 3 * (s_exponent + 1)))


def klein_birational_verify(t_sign: int = -1, s_exponent: int = 2) -> bool:
    return exact_divide(klein_birational_residue(t_sign, s_exponent), klein_quartic()) is not None


# ---------------------------------------------------------------------------
# group ring Z[(Z/p)^2]


class GroupRingElement:
    """Integer combination of A^i B^j, stored as a p x p array indexed by (i, j)."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p, coeffs=None):
        self.p = p
        self.coeffs = np.zeros((p, p), dtype=object) if coeffs is None else np.array(coeffs, dtype=object)

    @classmethod
    def basis(cls, p, i, j, c=1):
        x = cls(p)
        x.coeffs[i % p, j % p] = c
        return x

    @classmethod
    def one(cls, p):
        return cls.basis(p, 0, 0)

    def __add__(self, other):
        return GroupRingElement(self.p, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return GroupRingElement(self.p, self.coeffs - other.coeffs)

    def __neg__(self):
        return GroupRingElement(self.p, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(self.p, self.coeffs * other)
        out = np.zeros((self.p, self.p), dtype=object)
        for (i, j), c in np.ndenumerate(self.coeffs):
            if c:
                out = out + c * np.roll(np.roll(other.coeffs, i, axis=0), j, axis=1)
        return GroupRingElement(self.p, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = GroupRingElement.one(self.p)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.p == other.p and bool(np.all(self.coeffs == other.coeffs))

    def terms(self):
        return {(i, j): int(c) for (i, j), c in np.ndenumerate(self.coeffs) if c}

    def to_text(self):
        parts = []
        for (i, j), c in sorted(self.terms().items()):
            mono = "*".join(x for x in (f"A^{i}" if i > 1 else "A" if i else "", f"B^{j}" if j > 1 else "B" if j else "") if x)
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") or "0"

    __repr__ = to_text


def _orbit_sum(g: GroupRingElement) -> GroupRingElement:
    total = GroupRingElement(g.p)
    power = GroupRingElement.one(g.p)
    for _ in range(g.p):
        total = total + power
        power = power * g
    return total


def group_ring_sides(p: int):
    """Both sides of the identity sum_s sum_j (A^-s B)^j - p = N_A N_B - N_A - N_B - N_AB."""
    if p < 3 or not is_prime(p):
        raise ThetaError(f"p = {p} is not an odd prime")
    A = GroupRingElement.basis(p, 1, 0)
    B = GroupRingElement.basis(p, 0, 1)
    lhs = GroupRingElement(p)
    for s in range(1, p - 1):
        lhs = lhs + _orbit_sum(GroupRingElement.basis(p, -s, 0) * B)
    lhs = lhs - GroupRingElement.one(p) * p
    NA, NB, NAB = _orbit_sum(A), _orbit_sum(B), _orbit_sum(A * B)
    rhs = NA * NB - NA - NB - NAB
    return lhs, rhs


def group_ring_identity_check(p: int) -> bool:
    lhs, rhs = group_ring_sides(p)
    return lhs == rhs
