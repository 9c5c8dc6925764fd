"""Sparse homogeneous polynomials in X0, X1, X2 over a field context.

Terms are kept in a dict ``{(e0, e1, e2): coeff}`` with no zero coefficients.
Canonical printing and division use the graded lexicographic order.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction

from .field import QQ, ContextMismatch, CyclotomicField, FiniteField, common_field, parse_field

VARS = ("X0", "X1", "X2")


class PolyError(ValueError):
    pass


class ParseError(PolyError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ResultantIndeterminate(PolyError):
    pass


def grlex_key(mono):
    return (sum(mono), mono)


def monomials(d: int) -> list[tuple[int, int, int]]:
    """Monomials of total degree d, graded-lex descending."""
    out = [(a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1)]
    return out


class TernaryPoly:
    __slots__ = ("field", "terms", "_hash")

    def __init__(self, field, terms=None):
        self.field = field
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[tuple(mono)] = c
        self.terms = clean
        self._hash = None

    # constructors -----------------------------------------------------------

    @classmethod
    def constant(cls, field, c):
        return cls(field, {(0, 0, 0): field(c)})

    @classmethod
    def var(cls, field, i):
        e = [0, 0, 0]
        e[i] = 1
        return cls(field, {tuple(e): field.one})

    @classmethod
    def linear(cls, field, coeffs):
        return cls(field, {tuple(int(i == j) for j in range(3)): field(c) for i, c in enumerate(coeffs)})

    @classmethod
    def _raw(cls, field, terms):
        obj = cls.__new__(cls)
        obj.field = field
        obj.terms = terms
        obj._hash = None
        return obj

    # basic queries ------------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self):
        """Common total degree of all terms, or None (the zero polynomial has none)."""
        degs = {sum(m) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    @property
    def degree(self):
        return self.total_degree()

    def constant_coefficient(self):
        return self.terms.get((0, 0, 0), self.field.zero)

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), self.field.zero)

    def leading_term(self):
        mono = max(self.terms, key=grlex_key)
        return mono, self.terms[mono]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def __eq__(self, other):
        if isinstance(other, TernaryPoly):
            if other.field != self.field:
                try:
                    K = common_field(self.field, other.field)
                except ContextMismatch:
                    return False
                return self.change_field(K).terms == other.change_field(K).terms
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == TernaryPoly.constant(self.field, other) if other else not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def change_field(self, K):
        if K == self.field:
            return self
        return TernaryPoly(K, {m: K(c) for m, c in self.terms.items()})

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TernaryPoly):
            if other.field != self.field:
                raise ContextMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        return TernaryPoly.constant(self.field, other)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for m, c in o.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return TernaryPoly._raw(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return TernaryPoly._raw(self.field, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TernaryPoly):
            c = self.field(other)
            if not c:
                return TernaryPoly._raw(self.field, {})
            return TernaryPoly._raw(self.field, {m: v * c for m, v in self.terms.items()})
        o = self._coerce(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return TernaryPoly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PolyError("negative power")
        result = TernaryPoly.constant(self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c):
        return self * c

    # evaluation / substitution -------------------------------------------------

    def evaluate(self, point):
        K = self.field
        vals = [K(v) for v in point]
        total = K.zero
        powers = [[K.one] for _ in range(3)]
        for m, c in self.terms.items():
            term = c
            for i in range(3):
                while len(powers[i]) <= m[i]:
                    powers[i].append(powers[i][-1] * vals[i])
                term = term * powers[i][m[i]]
            total = total + term
        return total

    def substitute(self, images):
        """Replace X_i by the polynomial images[i]."""
        images = [img if isinstance(img, TernaryPoly) else TernaryPoly.constant(self.field, img) for img in images]
        powers = [[TernaryPoly.constant(self.field, 1)] for _ in range(3)]
        result = TernaryPoly(self.field)
        for m, c in self.terms.items():
            term = TernaryPoly.constant(self.field, c)
            for i in range(3):
                while len(powers[i]) <= m[i]:
                    powers[i].append(powers[i][-1] * images[i])
                term = term * powers[i][m[i]]
            result = result + term
        return result

    def partial(self, i: int):
        """Partial derivative in X_i; exponents are reduced into the field."""
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                v = c * m[i]
                if v:
                    out[tuple(e)] = v
        return TernaryPoly._raw(self.field, out)

    # printing -------------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        K = self.field
        pieces = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                VARS[i] if m[i] == 1 else f"{VARS[i]}^{m[i]}" for i in range(3) if m[i]
            )
            if K.is_simple(c):
                text = K.format(c)
                neg = text.startswith("-")
                body = text[1:] if neg else text
                if mono:
                    if body == "1":
                        body = mono
                    else:
                        body = f"{body}*{mono}"
            else:
                neg = False
                text = K.format(c)
                body = f"({text})*{mono}" if mono else f"({text})"
            pieces.append((neg, body))
        out = []
        for idx, (neg, body) in enumerate(pieces):
            if idx == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    __str__ = to_text

    def __repr__(self):
        return f"TernaryPoly({self.to_text()!r} over {self.field!r})"

    def __reduce__(self):
        return (TernaryPoly, (self.field, self.terms))


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>X[012])|(?P<zeta>z\d+)|(?P<gen>g)|(?P<op>[-+*/^()]))"
)


class _Parser:
    def __init__(self, text, field):
        self.text = text
        self.field = field
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                bad = len(text) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[bad]!r}", bad)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, got {val or 'end of input'!r}", pos)

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        result = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return result

    def expr(self):
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            right = self.term()
            left = left + right if op == "+" else left - right
        return left

    def term(self):
        left = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op, pos = self.take()[1], self.peek()[2]
            right = self.unary()
            if op == "*":
                left = left * right
            else:
                if right.total_degree() > 0:
                    raise ParseError("division by a non-constant", pos)
                c = right.constant_coefficient()
                if not c:
                    raise ParseError("division by zero", pos)
                left = left * (self.field.one / c)
        return left

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val in ("+", "-"):
            self.take()
            operand = self.unary()
            return -operand if val == "-" else operand
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer", pos)
            return base ** int(val)
        return base

    def atom(self):
        kind, val, pos = self.take()
        K = self.field
        if kind == "num":
            return TernaryPoly.constant(K, int(val))
        if kind == "var":
            return TernaryPoly.var(K, int(val[1]))
        if kind == "zeta":
            m = int(val[1:])
            if not isinstance(K, CyclotomicField) or K.m != m:
                raise ParseError(f"generator {val} does not belong to {K.tag}", pos)
            return TernaryPoly.constant(K, K.gen)
        if kind == "gen":
            if not isinstance(K, FiniteField) or K.k == 1:
                raise ParseError(f"generator g does not belong to {K.tag}", pos)
            return TernaryPoly.constant(K, K.gen)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def parse_poly(text: str, field=QQ) -> TernaryPoly:
    """Parse ``text`` (terms over X0, X1, X2, z<m>, g) into a polynomial."""
    return _Parser(text, field).parse()


# ---------------------------------------------------------------------------
# ring operations


def poly_arith(f: TernaryPoly, g: TernaryPoly, op: str) -> TernaryPoly:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise PolyError(f"unknown operation {op!r}")


def poly_pow(f: TernaryPoly, k: int) -> TernaryPoly:
    return f**k


def is_homogeneous(f: TernaryPoly):
    return f.is_homogeneous()


def partial_derivative(f: TernaryPoly, i: int) -> TernaryPoly:
    return f.partial(i)


def substitute_linear(f: TernaryPoly, T) -> TernaryPoly:
    """f composed with the linear map X -> T X (T given as 3 rows)."""
    K = f.field
    T = [[K(x) for x in row] for row in T]
    if not field_det(T, K):
        raise PolyError("singular substitution matrix")
    images = [TernaryPoly.linear(K, row) for row in T]
    return f.substitute(images)


def exact_divide(f: TernaryPoly, g: TernaryPoly):
    """q with f = q*g, or None when g does not divide f."""
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    if f.field != g.field:
        raise ContextMismatch(f"{f.field!r} vs {g.field!r}")
    lm, lc = g.leading_term()
    inv = f.field.one / lc
    rem = dict(f.terms)
    quot = {}
    g_terms = list(g.terms.items())
    while rem:
        m = max(rem, key=grlex_key)
        c = rem[m]
        e = (m[0] - lm[0], m[1] - lm[1], m[2] - lm[2])
        if min(e) < 0:
            return None
        qc = c * inv
        quot[e] = qc
        for gm, gc in g_terms:
            k = (gm[0] + e[0], gm[1] + e[1], gm[2] + e[2])
            v = rem.get(k)
            v = -qc * gc if v is None else v - qc * gc
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return TernaryPoly(f.field, quot)


# ---------------------------------------------------------------------------
# binary forms and lines


class BinaryForm:
    """c_0 u^d + c_1 u^(d-1) v + ... + c_d v^d over a field."""

    __slots__ = ("field", "degree", "coeffs")

    def __init__(self, field, degree, coeffs):
        if len(coeffs) != degree + 1:
            raise PolyError("binary form needs degree+1 coefficients")
        self.field = field
        self.degree = degree
        self.coeffs = tuple(field(c) for c in coeffs)

    def honest_degree(self):
        """Degree in u (the largest d - i with c_i nonzero), or -1 for zero."""
        for i, c in enumerate(self.coeffs):
            if c:
                return self.degree - i
        return -1

    def is_zero(self):
        return not any(self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, BinaryForm):
            c = self.field(other)
            return BinaryForm(self.field, self.degree, [x * c for x in self.coeffs])
        out = [self.field.zero] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return BinaryForm(self.field, self.degree + other.degree, out)

    __rmul__ = __mul__

    def __neg__(self):
        return BinaryForm(self.field, self.degree, [-c for c in self.coeffs])

    def __eq__(self, other):
        return (
            isinstance(other, BinaryForm)
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.degree, self.coeffs))

    def __call__(self, u, v):
        K = self.field
        u, v = K(u), K(v)
        total = K.zero
        for i, c in enumerate(self.coeffs):
            total = total + c * u ** (self.degree - i) * v**i
        return total

    def to_poly(self) -> TernaryPoly:
        """The form as a polynomial with u = X0, v = X1."""
        return TernaryPoly(self.field, {(self.degree - i, i, 0): c for i, c in enumerate(self.coeffs)})

    def to_text(self):
        return self.to_poly().to_text().replace("X0", "u").replace("X1", "v")

    __str__ = to_text

    def __repr__(self):
        return f"BinaryForm({self.to_text()!r})"


def line_parametrization(L, field):
    """Three linear forms in (u, v) = (X0, X1) tracing the line L . X = 0.

    The variable of the last nonzero coefficient of L is solved for; the two
    remaining variables, in index order, become u and v.
    """
    L = [field(c) for c in L]
    nonzero = [i for i in range(3) if L[i]]
    if not nonzero:
        raise PolyError("line coefficients are all zero")
    k = nonzero[-1]
    free = [i for i in range(3) if i != k]
    u = TernaryPoly.var(field, 0)
    v = TernaryPoly.var(field, 1)
    params = {free[0]: u, free[1]: v}
    solved = -(params[free[0]] * (L[free[0]] / L[k]) + params[free[1]] * (L[free[1]] / L[k]))
    images = [params.get(i, solved) for i in range(3)]
    return images, k, free


def line_point(L, u, v, field):
    """Point of the line at parameter (u, v)."""
    images, _, _ = line_parametrization(L, field)
    return [img.evaluate((u, v, 0)) for img in images]


def restrict_to_line(f: TernaryPoly, L) -> BinaryForm:
    d = f.is_homogeneous()
    if d is None:
        if f.is_zero():
            d = 0
        else:
            raise PolyError("restriction needs a homogeneous polynomial")
    images, _, _ = line_parametrization(L, f.field)
    g = f.substitute(images)
    coeffs = [g.coefficient((d - i, i, 0)) for i in range(d + 1)]
    return BinaryForm(f.field, d, coeffs)


# ---------------------------------------------------------------------------
# linear algebra over a field


def field_det(matrix, field) -> object:
    """Determinant by Gaussian elimination over an exact field."""
    n = len(matrix)
    A = [list(row) for row in matrix]
    det = field.one
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col]), None)
        if pivot is None:
            return field.zero
        if pivot != col:
            A[col], A[pivot] = A[pivot], A[col]
            det = -det
        p = A[col][col]
        det = det * p
        inv = field.one / p
        for r in range(col + 1, n):
            if A[r][col]:
                factor = A[r][col] * inv
                row_c = A[col]
                row_r = A[r]
                for c in range(col + 1, n):
                    if row_c[c]:
                        row_r[c] = row_r[c] - factor * row_c[c]
                row_r[col] = field.zero
    return det


def mat_mul(A, B, field):
    n, m, k = len(A), len(B), len(B[0])
    return [[sum((A[i][t] * B[t][j] for t in range(m)), field.zero) for j in range(k)] for i in range(n)]


def transpose(A):
    return [list(r) for r in zip(*A)]


def mat_inverse(A, field):
    n = len(A)
    M = [[field(x) for x in row] + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col]), None)
        if pivot is None:
            raise PolyError("singular matrix")
        M[col], M[pivot] = M[pivot], M[col]
        inv = field.one / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [row[n:] for row in M]


# ---------------------------------------------------------------------------
# Macaulay resultant


def _macaulay_quotient(forms, field):
    degs = [f.is_homogeneous() for f in forms]
    D = sum(degs) - 2
    monos = monomials(D)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    nonreduced = []
    for m in monos:
        divisible = [i for i in range(3) if m[i] >= degs[i]]
        i = divisible[0]
        shift = list(m)
        shift[i] -= degs[i]
        row = [field.zero] * len(monos)
        for fm, c in forms[i].terms.items():
            row[index[(fm[0] + shift[0], fm[1] + shift[1], fm[2] + shift[2])]] = c
        rows.append(row)
        if len(divisible) > 1:
            nonreduced.append(index[m])
    minor = [[rows[r][c] for c in nonreduced] for r in nonreduced]
    den = field_det(minor, field) if minor else field.one
    if not den:
        return None
    return field_det(rows, field) / den


def macaulay_resultant(f: TernaryPoly, g: TernaryPoly, h: TernaryPoly, seed: int = 0, attempts: int = 8):
    """Classical Macaulay resultant of three ternary forms.

    Computed as det(Macaulay matrix) / det(extraneous minor).  When the minor
    vanishes the forms are moved by a random linear change of coordinates T
    and the value is corrected by det(T)^(d1 d2 d3).
    """
    forms = [f, g, h]
    field = f.field
    if any(p.field != field for p in forms):
        raise ContextMismatch("resultant inputs live in different fields")
    degs = [p.is_homogeneous() for p in forms]
    if any(d is None for d in degs):
        raise PolyError("resultant needs nonzero homogeneous forms")
    if any(d < 1 for d in degs):
        raise PolyError("resultant needs forms of positive degree")
    value = _macaulay_quotient(forms, field)
    if value is not None:
        return value
    rng = random.Random(seed)
    span = max(3, getattr(field, "q", 7))
    for _ in range(attempts):
        T = [[field(rng.randrange(-span, span + 1)) for _ in range(3)] for _ in range(3)]
        detT = field_det(T, field)
        if not detT:
            continue
        moved = [substitute_linear(p, T) for p in forms]
        value = _macaulay_quotient(moved, field)
        if value is not None:
            return value / detT ** (degs[0] * degs[1] * degs[2])
    raise ResultantIndeterminate("resultant-indeterminate: extraneous minor vanished on every attempt")


# ---------------------------------------------------------------------------
# curve files


def read_curve_text(text: str) -> TernaryPoly:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if len(lines) < 2:
        raise PolyError("curve file needs a field header and a polynomial line")
    m = re.fullmatch(r"field:\s*(.+)", lines[0])
    if not m:
        raise PolyError("first line must be 'field: ...'")
    field = parse_field(m.group(1))
    return parse_poly(" ".join(lines[1:]), field)


def read_curve_file(path) -> TernaryPoly:
    with open(path, encoding="utf-8") as fh:
        return read_curve_text(fh.read())


def field_header(field) -> str:
    return field.tag


def write_curve_text(f: TernaryPoly) -> str:
    return f"field: {field_header(f.field)}\n{f.to_text()}\n"


def klein_quartic(field=QQ) -> TernaryPoly:
    return parse_poly("X0^3*X1 + X1^3*X2 + X2^3*X0", field)


def fermat(p: int, field=QQ) -> TernaryPoly:
    return parse_poly(f"X0^{p} + X1^{p} + X2^{p}", field)


__all__ = [
    "BinaryForm",
    "ParseError",
    "PolyError",
    "ResultantIndeterminate",
    "TernaryPoly",
    "exact_divide",
    "field_det",
    "is_homogeneous",
    "macaulay_resultant",
    "monomials",
    "parse_poly",
    "partial_derivative",
    "poly_arith",
    "poly_pow",
    "restrict_to_line",
    "substitute_linear",
]
