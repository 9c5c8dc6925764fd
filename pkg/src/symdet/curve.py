"""Plane curves, projective points, local intersection numbers and divisors.

Intersection multiplicities are measured only at smooth points of the curve:
the curve is solved locally as a power series (Newton iteration) and the
order of vanishing of the second form along that branch is read off.
Section divisors are built from caller-supplied candidate points and carry a
Bezout completeness flag instead of relying on root finding.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .field import (
    QQ,
    CyclotomicElement,
    CyclotomicField,
    common_field,
    field_of,
    parse_field,
)
from .poly import TernaryPoly, exact_divide, field_det, macaulay_resultant


class CurveError(ValueError):
    pass


class NotOnCurve(CurveError):
    pass


class SingularPoint(CurveError):
    pass


class CommonComponent(CurveError):
    pass


class SmoothnessUndecidable(CurveError):
    pass


class IncompleteSection(CurveError):
    def __init__(self, message, missing):
        super().__init__(message)
        self.missing = missing


# ---------------------------------------------------------------------------
# curves and points


class PlaneCurve:
    def __init__(self, F: TernaryPoly):
        n = F.is_homogeneous()
        if n is None or n < 1:
            raise CurveError("a plane curve needs a nonzero homogeneous form of positive degree")
        self.F = F
        self.degree = n
        self.genus = (n - 1) * (n - 2) // 2
        self._smooth = None

    @property
    def field(self):
        return self.F.field

    @property
    def smoothness_certificate(self):
        """The resultant of the partials, once :func:`is_smooth` has run."""
        return self._smooth

    def equation(self, K=None):
        return self.F if K is None else self.F.change_field(K)

    def __eq__(self, other):
        return isinstance(other, PlaneCurve) and self.F == other.F

    def __hash__(self):
        return hash(("curve", self.degree))

    def __repr__(self):
        return f"PlaneCurve({self.F.to_text()!r})"


class ProjectivePoint:
    """Point of P^2 normalized so that its last nonzero coordinate is 1."""

    __slots__ = ("field", "coords")

    def __init__(self, coords, field=None):
        coords = list(coords)
        if len(coords) != 3:
            raise CurveError("projective points have three coordinates")
        if field is None:
            field = QQ
            for c in coords:
                field = common_field(field, field_of(c))
        coords = [field(c) for c in coords]
        nz = [i for i in range(3) if coords[i]]
        if not nz:
            raise CurveError("(0, 0, 0) is not a projective point")
        inv = field.one / coords[nz[-1]]
        self.field = field
        self.coords = tuple(c * inv for c in coords)

    @property
    def chart(self) -> int:
        return max(i for i in range(3) if self.coords[i])

    def with_field(self, K):
        if K == self.field:
            return self
        return ProjectivePoint([K(c) for c in self.coords], K)

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        if self.field != other.field:
            K = common_field(self.field, other.field)
            return self.with_field(K).coords == other.with_field(K).coords
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def galois(self, k):
        return ProjectivePoint([c.galois(k) if isinstance(c, CyclotomicElement) else c for c in self.coords], self.field)

    def to_text(self):
        return "(" + ", ".join(self.field.format(c) for c in self.coords) + ")"

    def sort_key(self):
        return tuple(self.field.format(c) for c in self.coords)

    def __repr__(self):
        return self.to_text()


def _working_field(*fields):
    K = fields[0]
    for L in fields[1:]:
        K = common_field(K, L)
    return K


def point_on_curve(C: PlaneCurve, P: ProjectivePoint) -> bool:
    K = _working_field(C.field, P.field)
    return not C.equation(K).evaluate(P.with_field(K).coords)


def is_smooth(C: PlaneCurve) -> bool:
    """Nonvanishing of the Macaulay resultant of the three partials."""
    p = C.field.characteristic
    if p and C.degree % p == 0:
        raise SmoothnessUndecidable(
            f"smoothness-undecidable-in-char: characteristic {p} divides degree {C.degree}"
        )
    if C.degree == 1:
        C._smooth = C.field.one
        return True
    partials = [C.F.partial(i) for i in range(3)]
    if any(not d for d in partials):
        # two forms of positive degree always meet in P^2
        C._smooth = C.field.zero
        return False
    res = macaulay_resultant(*partials)
    C._smooth = res
    return bool(res)


# ---------------------------------------------------------------------------
# truncated power series (lists of coefficients, constant term first)


def _series_mul(a, b, n, zero):
    out = [zero] * n
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        for j in range(min(len(b), n - i)):
            y = b[j]
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def _series_inv(a, n, K):
    inv0 = K.one / a[0]
    out = [inv0] + [K.zero] * (n - 1)
    for k in range(1, n):
        acc = K.zero
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j]:
                acc = acc + a[j] * out[k - j]
        out[k] = -acc * inv0
    return out


def _bivariate(poly: TernaryPoly):
    """{w-exponent: [t-coefficients]} for a polynomial in t = X0, w = X1."""
    out = {}
    for (i, j, _), c in poly.terms.items():
        row = out.setdefault(j, [])
        if len(row) <= i:
            row.extend([poly.field.zero] * (i + 1 - len(row)))
        row[i] = c
    return out


def _compose(biv, w, n, K):
    """sum_j a_j(t) w(t)^j mod t^n via Horner in w."""
    if not biv:
        return [K.zero] * n
    result = [K.zero] * n
    for j in range(max(biv), -1, -1):
        result = _series_mul(result, w, n, K.zero)
        row = biv.get(j, [])
        for i in range(min(len(row), n)):
            result[i] = result[i] + row[i]
    return result


@dataclass
class BranchExpansion:
    """Local branch of C at a smooth point.

    In the affine chart X_chart = 1 the coordinate X_param equals
    base[param] + t and X_solved equals base[solved] + sum_i coeffs[i] t^i.
    """

    point: ProjectivePoint
    chart: int
    param: int
    solved: int
    coeffs: list
    precision: int
    field: object = dc_field(repr=False)
    _shifted: object = dc_field(default=None, repr=False)

    def series(self, n=None):
        """Coefficients of w(t) = X_solved - base value, padded to length n."""
        n = self.precision + 1 if n is None else n
        K = self.field
        return (list(self.coeffs) + [K.zero] * n)[:n]

    def local_images(self):
        """Affine substitution X -> (base + local parameters) as polynomials in t = X0, w = X1."""
        K = self.field
        images = [None, None, None]
        images[self.chart] = TernaryPoly.constant(K, 1)
        base = self.point.coords
        images[self.param] = TernaryPoly.constant(K, base[self.param]) + TernaryPoly.var(K, 0)
        images[self.solved] = TernaryPoly.constant(K, base[self.solved]) + TernaryPoly.var(K, 1)
        return images

    def compose(self, G: TernaryPoly, n=None):
        """G restricted to the branch, as a series in t of length n."""
        n = self.precision + 1 if n is None else n
        K = self.field
        local = G.change_field(K).substitute(self.local_images())
        return _compose(_bivariate(local), self.series(n), n, K)

    def residual(self):
        return _compose(self._shifted, self.series(), self.precision + 1, self.field)

    def residual_order(self):
        """Order in t of F along the truncated branch (at least precision + 1 when valid)."""
        res = self.residual()
        return next((i for i, c in enumerate(res) if c), self.precision + 1)


def _local_chart(C, P):
    K = _working_field(C.field, P.field)
    P = P.with_field(K)
    F = C.equation(K)
    if F.evaluate(P.coords):
        raise NotOnCurve(f"{P.to_text()} is not on the curve")
    k = P.chart
    a, b = [i for i in range(3) if i != k]
    da = F.partial(a).evaluate(P.coords)
    db = F.partial(b).evaluate(P.coords)
    if not da and not db:
        raise SingularPoint(f"curve is singular at {P.to_text()}")
    solved, param = (b, a) if db else (a, b)
    return K, P, F, k, param, solved


def branch_expand(C: PlaneCurve, P: ProjectivePoint, N: int) -> BranchExpansion:
    """Power series branch of C through P, exact modulo t^(N+1)."""
    if N < 0:
        raise CurveError("precision must be nonnegative")
    K, P, F, k, param, solved = _local_chart(C, P)
    exp = BranchExpansion(P, k, param, solved, [K.zero], N, K)
    shifted = _bivariate(F.substitute(exp.local_images()))
    exp._shifted = shifted
    deriv = {j - 1: [c * j for c in row] for j, row in shifted.items() if j}
    target = N + 1
    w = [K.zero]
    prec = 1
    while prec < target:
        prec = min(2 * prec, target)
        w = (w + [K.zero] * prec)[:prec]
        h = _compose(shifted, w, prec, K)
        hw = _compose(deriv, w, prec, K)
        step = _series_mul(h, _series_inv(hw, prec, K), prec, K.zero)
        w = [x - y for x, y in zip(w, step)]
    exp.coeffs = (w + [K.zero] * target)[:target]
    if exp.residual_order() <= N:
        raise ArithmeticError("branch residual does not vanish to the requested order")
    return exp


def local_intersection_multiplicity(C: PlaneCurve, G: TernaryPoly, P: ProjectivePoint) -> int:
    dG = G.is_homogeneous()
    if dG is None:
        raise CurveError("G must be a nonzero homogeneous form")
    K = _working_field(C.field, G.field, P.field)
    Gk = G.change_field(K)
    if dG >= C.degree and exact_divide(Gk, C.equation(K)) is not None:
        raise CommonComponent("common-component: G is divisible by the curve equation")
    bound = dG * C.degree
    _local_chart(C, P)
    if Gk.evaluate(P.with_field(K).coords):
        return 0
    N = max(2 * dG, 1)
    while True:
        exp = branch_expand(C, P, N)
        values = exp.compose(Gk)
        order = next((i for i, c in enumerate(values) if c), None)
        if order is not None:
            return order
        if N >= bound:
            raise CommonComponent("common-component: order of contact exceeds the Bezout bound")
        N = min(2 * N, bound)


# ---------------------------------------------------------------------------
# divisors


class Divisor:
    """Finite formal sum of points on a curve with nonzero integer multiplicities."""

    def __init__(self, curve: PlaneCurve, terms=(), field=None):
        pairs = list(terms.items()) if isinstance(terms, dict) else list(terms)
        if field is None:
            field = curve.field
            for P, _ in pairs:
                field = common_field(field, P.field)
        support = {}
        F = curve.equation(field)
        for P, m in pairs:
            P = P.with_field(field)
            if F.evaluate(P.coords):
                raise NotOnCurve(f"{P.to_text()} is not on the curve")
            support[P] = support.get(P, 0) + int(m)
        self.curve = curve
        self.field = field
        self.support = {P: m for P, m in support.items() if m}

    def _check(self, other):
        if not isinstance(other, Divisor):
            raise TypeError("expected a Divisor")
        if other.curve != self.curve:
            raise CurveError("divisors live on different curves")

    def __add__(self, other):
        self._check(other)
        return Divisor(self.curve, list(self.support.items()) + list(other.support.items()))

    def __neg__(self):
        return Divisor(self.curve, [(P, -m) for P, m in self.support.items()], self.field)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int):
        return Divisor(self.curve, [(P, k * m) for P, m in self.support.items()], self.field)

    def __rmul__(self, k):
        return self.scale(k)

    @property
    def degree(self) -> int:
        return sum(self.support.values())

    def is_effective(self) -> bool:
        return all(m > 0 for m in self.support.values())

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        if other.curve != self.curve:
            return False
        if self.field != other.field:
            K = common_field(self.field, other.field)
            return Divisor(self.curve, self.support, K).support == Divisor(other.curve, other.support, K).support
        return self.support == other.support

    def __hash__(self):
        return hash(frozenset(self.support.items()))

    def __len__(self):
        return len(self.support)

    def multiplicity(self, P) -> int:
        return self.support.get(P.with_field(self.field), 0)

    def sorted_items(self):
        return sorted(self.support.items(), key=lambda kv: kv[0].sort_key())

    def map_points(self, fn):
        return Divisor(self.curve, [(fn(P), m) for P, m in self.support.items()])

    def to_text(self) -> str:
        lines = [f"field: {self.field.tag}"]
        for P, m in self.sorted_items():
            lines.append(f"{m} {P.to_text()}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        body = " + ".join(f"{m}*{P.to_text()}" for P, m in self.sorted_items())
        return f"Divisor({body or '0'})"


def divisor_add(D1, D2):
    return D1 + D2


def divisor_negate(D):
    return -D


def divisor_scale(D, k):
    return D.scale(k)


def divisor_degree(D):
    return D.degree


def divisor_is_effective(D):
    return D.is_effective()


def divisor_equals(D1, D2):
    return D1 == D2


def _split_top(text):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_point(text: str, field) -> ProjectivePoint:
    t = text.strip()
    if not (t.startswith("(") and t.endswith(")")):
        raise CurveError(f"point must be written as (c0, c1, c2): {text!r}")
    coords = _split_top(t[1:-1])
    if len(coords) != 3:
        raise CurveError(f"point needs three coordinates: {text!r}")
    return ProjectivePoint([field.parse(c) for c in coords], field)


def read_divisor_text(text: str, curve: PlaneCurve) -> Divisor:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("field:"):
        raise CurveError("divisor file must start with 'field:'")
    field = parse_field(lines[0].split(":", 1)[1])
    terms = []
    for ln in lines[1:]:
        m = re.fullmatch(r"([+-]?\d+)\s+(\(.*\))", ln)
        if not m:
            raise CurveError(f"bad divisor line {ln!r}")
        terms.append((parse_point(m.group(2), field), int(m.group(1))))
    return Divisor(curve, terms, field)


# ---------------------------------------------------------------------------
# section divisors and divisors of functions


def section_divisor(C: PlaneCurve, G: TernaryPoly, candidates) -> tuple[Divisor, bool]:
    """Divisor cut out by G among the candidates, with the Bezout completeness flag."""
    dG = G.is_homogeneous()
    if dG is None:
        raise CurveError("G must be a nonzero homogeneous form")
    candidates = list(candidates)
    seen = set()
    K = C.field
    for P in candidates:
        K = common_field(K, P.field)
    terms = []
    for P in candidates:
        Pk = P.with_field(K)
        if Pk in seen:
            raise CurveError(f"duplicate candidate {P.to_text()}")
        seen.add(Pk)
        if not point_on_curve(C, Pk):
            raise NotOnCurve(f"candidate {P.to_text()} is not on the curve")
        m = local_intersection_multiplicity(C, G, Pk)
        if m:
            terms.append((Pk, m))
    D = Divisor(C, terms, K)
    return D, D.degree == dG * C.degree


def divisor_of_function_verify(C, G, H, claimed: Divisor, candidates_G, candidates_H) -> bool:
    """Check div(G/H) = claimed using Bezout-complete section divisors."""
    dG, dH = G.is_homogeneous(), H.is_homogeneous()
    if dG is None or dG != dH:
        raise CurveError("numerator and denominator must be homogeneous of equal degree")
    DG, okG = section_divisor(C, G, candidates_G)
    DH, okH = section_divisor(C, H, candidates_H)
    for name, D, ok, d in (("numerator", DG, okG, dG), ("denominator", DH, okH, dH)):
        if not ok:
            missing = d * C.degree - D.degree
            raise IncompleteSection(f"{name} section incomplete: {missing} intersections unaccounted for", missing)
    return DG - DH == claimed


def galois_invariant(D: Divisor) -> bool:
    K = D.field
    if not isinstance(K, CyclotomicField):
        return True
    for k in K.automorphisms():
        if D.map_points(lambda P: P.galois(k)) != D:
            return False
    return True


def apply_automorphism(x, A):
    """Apply the linear map X -> A X to a point or (pointwise) to a divisor."""
    if isinstance(x, Divisor):
        return x.map_points(lambda P: apply_automorphism(P, A))
    K = x.field
    for row in A:
        for a in row:
            K = common_field(K, field_of(a))
    A = [[K(a) for a in row] for row in A]
    if not field_det(A, K):
        raise CurveError("automorphism matrix is singular")
    c = x.with_field(K).coords
    return ProjectivePoint([sum((A[i][j] * c[j] for j in range(3)), K.zero) for i in range(3)], K)


def matrix_power(A, k, K):
    from .poly import mat_mul

    out = [[K.one if i == j else K.zero for j in range(3)] for i in range(3)]
    for _ in range(k):
        out = mat_mul(A, out, K)
    return out


__all__ = [
    "BranchExpansion",
    "Divisor",
    "PlaneCurve",
    "ProjectivePoint",
    "apply_automorphism",
    "branch_expand",
    "divisor_of_function_verify",
    "galois_invariant",
    "is_smooth",
    "local_intersection_multiplicity",
    "point_on_curve",
    "section_divisor",
]
