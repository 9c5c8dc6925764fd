"""Exact scalar fields: Q, cyclotomic fields Q(zeta_m) and finite fields F_q.

Rationals are plain :class:`fractions.Fraction` values.  Cyclotomic elements
are stored in the power basis modulo the m-th cyclotomic polynomial with a
common integer denominator; finite field elements carry an integer encoding
(the residue for prime fields, the base-p digits of the coefficient vector
otherwise).

Every field object doubles as a context: ``K(3)`` coerces, ``K.parse("z42^3")``
reads the element syntax, ``K.zero``/``K.one`` are the constants.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from itertools import product


class FieldError(ValueError):
    pass


class ContextMismatch(FieldError):
    pass


# ---------------------------------------------------------------------------
# univariate integer / rational polynomial helpers (coefficient lists, low first)


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_divmod(a, b):
    """Long division of coefficient lists over Q (or Z when b is monic)."""
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [0] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        coef = a[-1] if lead == 1 else Fraction(a[-1]) / lead
        q[shift] = coef
        for i, bc in enumerate(b):
            a[shift + i] -= coef * bc
        a = _trim(a)
    return _trim(q), a


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def euler_phi(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the m-th cyclotomic polynomial.

    Obtained by exact division of t^m - 1 by every Phi_d with d | m, d < m.
    """
    if m < 1:
        raise FieldError("conductor must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m)[:-1]:
        num, rem = _poly_divmod(num, list(cyclotomic_poly(d)))
        if rem:
            raise ArithmeticError("inexact cyclotomic division")  # pragma: no cover
    return tuple(int(c) for c in num)


# ---------------------------------------------------------------------------
# rationals


class RationalField:
    """The field Q; elements are :class:`Fraction` instances."""

    characteristic = 0
    tag = "Q"

    def __repr__(self):
        return "Q"

    def __reduce__(self):
        return (_rational_field, ())

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, CyclotomicElement) and x.is_rational():
            return x.rational_value()
        raise ContextMismatch(f"cannot coerce {x!r} into Q")

    def contains(self, x) -> bool:
        return isinstance(x, (int, Fraction))

    def parse(self, text: str):
        m = re.fullmatch(r"\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*", text)
        if m:
            den = int(m.group(2)) if m.group(2) else 1
            if den == 0:
                raise FieldError("zero denominator")
            return Fraction(int(m.group(1)), den)
        return _parse_constant(text, self)

    def format(self, x) -> str:
        return str(Fraction(x))

    def is_simple(self, x) -> bool:
        return True

    def sort_key(self, x):
        return (Fraction(x),)


_QQ = RationalField()


def _rational_field():
    return _QQ


QQ = _QQ


# ---------------------------------------------------------------------------
# cyclotomic fields


class CyclotomicField:
    """Q(zeta_m) in the power basis 1, zeta, ..., zeta^(phi(m)-1)."""

    characteristic = 0

    def __init__(self, m: int):
        if m < 1:
            raise FieldError("conductor must be positive")
        self.m = m
        self.degree = euler_phi(m)
        self.modulus = cyclotomic_poly(m)
        self.tag = f"Q(z{m})"
        # power basis image of zeta^i for 0 <= i < m
        d = self.degree
        table = []
        for i in range(m):
            if i < d:
                v = [0] * d
                v[i] = 1
            else:
                prev = table[i - 1]
                # zeta * prev, then reduce zeta^d = -sum modulus[k] zeta^k
                top = prev[-1]
                v = [0] + prev[:-1]
                if top:
                    for k in range(d):
                        v[k] -= top * self.modulus[k]
            table.append(v)
        self._powers = table
        self.zero = CyclotomicElement(self, (0,) * d, 1)
        self.one = self.from_rational(1)
        self.gen = self.zeta_power(1)

    def __repr__(self):
        return f"CyclotomicField({self.m})"

    def __reduce__(self):
        return (CyclotomicField_, (self.m,))

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.m == self.m

    def __hash__(self):
        return hash(("cyc", self.m))

    # construction ---------------------------------------------------------

    def _reduce_long(self, coeffs, den=1):
        """Element from an arbitrary-length integer list sum c_i zeta^i / den."""
        d, m = self.degree, self.m
        out = [0] * d
        for i, c in enumerate(coeffs):
            if not c:
                continue
            if i < d:
                out[i] += c
            else:
                for k, t in enumerate(self._powers[i % m]):
                    if t:
                        out[k] += c * t
        return CyclotomicElement._make(self, out, den)

    def from_rational(self, x):
        x = Fraction(x)
        v = [0] * self.degree
        v[0] = x.numerator
        return CyclotomicElement(self, tuple(v), x.denominator)

    def zeta_power(self, k: int):
        v = self._powers[k % self.m]
        return CyclotomicElement(self, tuple(v), 1)

    def from_coeffs(self, coeffs):
        """Element from rational power-basis coefficients (any length)."""
        fr = [Fraction(c) for c in coeffs]
        den = math.lcm(*(f.denominator for f in fr)) if fr else 1
        return self._reduce_long([int(f * den) for f in fr], den)

    def __call__(self, x):
        if isinstance(x, CyclotomicElement):
            if x.field == self:
                return x
            return embed(x, self.m)
        if isinstance(x, (int, Fraction)):
            return self.from_rational(x)
        if isinstance(x, str):
            return self.parse(x)
        raise ContextMismatch(f"cannot coerce {x!r} into {self.tag}")

    def contains(self, x) -> bool:
        return isinstance(x, (int, Fraction)) or (isinstance(x, CyclotomicElement) and x.field == self)

    def parse(self, text: str):
        return _parse_constant(text, self)

    def format(self, x) -> str:
        return self(x).to_text()

    def is_simple(self, x) -> bool:
        return self(x).is_monomial()

    def sort_key(self, x):
        return self(x).sort_key()

    def automorphisms(self) -> list[int]:
        return [k for k in range(1, self.m + 1) if math.gcd(k, self.m) == 1]


@lru_cache(maxsize=None)
def CyclotomicField_(m: int) -> CyclotomicField:
    return CyclotomicField(m)


def cyclotomic_field(m: int) -> CyclotomicField:
    return CyclotomicField_(m)


class CyclotomicElement:
    __slots__ = ("field", "nums", "den")

    def __init__(self, field, nums, den):
        self.field = field
        self.nums = nums
        self.den = den

    @classmethod
    def _make(cls, field, nums, den):
        if den < 0:
            nums = [-c for c in nums]
            den = -den
        g = den
        for c in nums:
            if c:
                g = math.gcd(g, c)
                if g == 1:
                    break
        if not any(nums):
            return cls(field, (0,) * field.degree, 1)
        if g != 1:
            nums = [c // g for c in nums]
            den //= g
        return cls(field, tuple(nums), den)

    # coercion helpers -----------------------------------------------------

    def _other(self, other):
        if isinstance(other, CyclotomicElement):
            if other.field.m != self.field.m:
                raise ContextMismatch(f"{self.field.tag} vs {other.field.tag}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise FieldError("element is not rational")
        return Fraction(self.nums[0], self.den)

    def is_monomial(self) -> bool:
        return sum(1 for c in self.nums if c) <= 1

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        d1, d2 = self.den, o.den
        if d1 == d2:
            return CyclotomicElement._make(self.field, [a + b for a, b in zip(self.nums, o.nums)], d1)
        return CyclotomicElement._make(
            self.field, [a * d2 + b * d1 for a, b in zip(self.nums, o.nums)], d1 * d2
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.field, tuple(-c for c in self.nums), self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            fr = Fraction(other)
            return CyclotomicElement._make(
                self.field, [c * fr.numerator for c in self.nums], self.den * fr.denominator
            )
        o = self._other(other)
        if o is None:
            return NotImplemented
        a, b = self.nums, o.nums
        prod = [0] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return self.field._reduce_long(prod, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("division by zero in " + self.field.tag)
        if self.is_rational():
            return self.field.from_rational(1 / self.rational_value())
        # extended Euclid: s*x + t*Phi = 1
        r0, r1 = list(self.field.modulus), _trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        c = r1[0]
        return self.field.from_coeffs([Fraction(v) / c for v in s1])

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return any(self.nums)

    def __eq__(self, other):
        if isinstance(other, CyclotomicElement):
            return self.field.m == other.field.m and self.nums == other.nums and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.nums[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.nums[0], self.den))
        return hash((self.field.m, self.nums, self.den))

    # galois ---------------------------------------------------------------

    def galois(self, k: int):
        """Image under zeta -> zeta^k (k coprime to the conductor)."""
        if math.gcd(k, self.field.m) != 1:
            raise FieldError(f"{k} is not a unit modulo {self.field.m}")
        m = self.field.m
        long = [0] * m
        for i, c in enumerate(self.nums):
            if c:
                long[(i * k) % m] += c
        return self.field._reduce_long(long, self.den)

    def sort_key(self):
        return tuple(Fraction(c, self.den) for c in self.nums)

    def to_text(self) -> str:
        name = f"z{self.field.m}"
        parts = []
        for i in range(len(self.nums) - 1, -1, -1):
            c = Fraction(self.nums[i], self.den)
            if not c:
                continue
            mono = "" if i == 0 else (name if i == 1 else f"{name}^{i}")
            parts.append(_signed_term(c, mono))
        return _join_terms(parts)

    def __repr__(self):
        return self.to_text()

    def __reduce__(self):
        return (CyclotomicElement, (self.field, self.nums, self.den))


def _signed_term(c: Fraction, mono: str) -> tuple[bool, str]:
    neg = c < 0
    a = -c if neg else c
    if not mono:
        return neg, str(a)
    if a == 1:
        return neg, mono
    return neg, f"{a}*{mono}"


def _join_terms(parts) -> str:
    if not parts:
        return "0"
    out = []
    for idx, (neg, body) in enumerate(parts):
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def embed(x, M: int):
    """Image of x under zeta_m -> zeta_M^(M/m)."""
    if isinstance(x, (int, Fraction)):
        return cyclotomic_field(M).from_rational(x)
    if not isinstance(x, CyclotomicElement):
        raise ContextMismatch(f"cannot embed {x!r}")
    m = x.field.m
    if M % m:
        raise FieldError(f"conductor {m} does not divide {M}")
    target = cyclotomic_field(M)
    step = M // m
    long = [0] * (step * (len(x.nums) - 1) + 1)
    for i, c in enumerate(x.nums):
        long[i * step] = c
    return target._reduce_long(long, x.den)


def galois_orbit(x) -> list:
    """Distinct images of x under zeta -> zeta^k, gcd(k, m) = 1, by increasing k."""
    if isinstance(x, (int, Fraction)):
        return [x]
    orbit = []
    for k in x.field.automorphisms():
        y = x.galois(k)
        if y not in orbit:
            orbit.append(y)
    return orbit


def minimal_polynomial(x) -> list[Fraction]:
    """Coefficients (constant first) of the minimal polynomial of x over Q."""
    orbit = galois_orbit(x)
    if isinstance(x, (int, Fraction)):
        return [-Fraction(x), Fraction(1)]
    K = x.field
    coeffs = [K.one]
    for y in orbit:
        # multiply by (t - y)
        new = [K.zero] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i + 1] = new[i + 1] + c
            new[i] = new[i] - c * y
        coeffs = new
    return [c.rational_value() for c in coeffs]


# ---------------------------------------------------------------------------
# finite fields


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1 or not is_prime(p):
                break
            return p, k
    raise FieldError(f"{q} is not a prime power")


def _modp_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _modp_rem(a, b, p):
    a = _modp_trim([x % p for x in a])
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        coef = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bc) % p
        a = _modp_trim(a)
    return a


@lru_cache(maxsize=None)
def irreducible_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k over F_p.

    Candidates are ordered by the integer sum c_i p^i of their lower
    coefficients; irreducibility is checked by trial division.
    """
    if k == 1:
        return (0, 1)
    small = [list(c) + [1] for d in range(1, k // 2 + 1) for c in product(range(p), repeat=d)]
    for code in range(p**k):
        lower = [(code // p**i) % p for i in range(k)]
        f = lower + [1]
        if lower[0] == 0:
            continue
        if all(_modp_rem(f, g, p) for g in small):
            return tuple(f)
    raise FieldError(f"no irreducible of degree {k} over F_{p}")  # pragma: no cover


class FiniteField:
    """F_q with q = p^k; elements are encoded as integers in [0, q)."""

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p) or k < 1:
            raise FieldError(f"invalid finite field parameters p={p}, k={k}")
        self.p = p
        self.k = k
        self.q = p**k
        self.characteristic = p
        self.modulus = irreducible_modulus(p, k)
        self.tag = f"F{self.q}"
        self._mul_table = None
        self.zero = FiniteFieldElement(self, 0)
        self.one = FiniteFieldElement(self, 1)

    def __repr__(self):
        return f"FiniteField({self.p}, {self.k})"

    def __reduce__(self):
        return (finite_field, (self.p, self.k))

    def __eq__(self, other):
        return isinstance(other, FiniteField) and other.q == self.q

    def __hash__(self):
        return hash(("ff", self.q))

    # encoding --------------------------------------------------------------

    def digits(self, v: int) -> list[int]:
        return [(v // self.p**i) % self.p for i in range(self.k)]

    def encode(self, digits) -> int:
        return sum((d % self.p) * self.p**i for i, d in enumerate(digits))

    def _add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self.encode([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def _neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self.encode([-x for x in self.digits(a)])

    def _mul_raw(self, a: int, b: int) -> int:
        prod = _poly_mul(self.digits(a), self.digits(b))
        return self.encode(_modp_rem(prod, list(self.modulus), self.p) if prod else [])

    def _mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if self._mul_table is None and self.q <= 1024:
            self._mul_table = [[self._mul_raw(x, y) for y in range(self.q)] for x in range(self.q)]
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_raw(a, b)

    def _inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"division by zero in {self.tag}")
        if self.k == 1:
            return pow(a, -1, self.p)
        return self._pow(a, self.q - 2)

    def _pow(self, a: int, e: int) -> int:
        r, b = 1, a
        while e:
            if e & 1:
                r = self._mul(r, b)
            b = self._mul(b, b)
            e >>= 1
        return r

    # context API ----------------------------------------------------------

    def __call__(self, x):
        if isinstance(x, FiniteFieldElement):
            if x.field != self:
                raise ContextMismatch(f"{x.field.tag} vs {self.tag}")
            return x
        if isinstance(x, int):
            return FiniteFieldElement(self, x % self.p)
        if isinstance(x, Fraction):
            num = FiniteFieldElement(self, x.numerator % self.p)
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator vanishes in {self.tag}")
            return num / FiniteFieldElement(self, x.denominator % self.p)
        if isinstance(x, str):
            return self.parse(x)
        raise ContextMismatch(f"cannot coerce {x!r} into {self.tag}")

    def element(self, code: int):
        """Element with the given integer encoding."""
        if not 0 <= code < self.q:
            raise FieldError(f"encoding {code} out of range for {self.tag}")
        return FiniteFieldElement(self, code)

    @property
    def gen(self):
        """Class of t modulo the fixed modulus; only meaningful for k > 1."""
        if self.k == 1:
            raise FieldError(f"{self.tag} is a prime field")
        return self.element(self.p)

    def elements(self):
        return [FiniteFieldElement(self, v) for v in range(self.q)]

    def contains(self, x) -> bool:
        return isinstance(x, int) or (isinstance(x, FiniteFieldElement) and x.field == self)

    def parse(self, text: str):
        return _parse_constant(text, self)

    def format(self, x) -> str:
        return self(x).to_text()

    def is_simple(self, x) -> bool:
        return self.k == 1 or sum(1 for d in self.digits(self(x).value) if d) <= 1

    def sort_key(self, x):
        return (self(x).value,)

    @lru_cache(maxsize=None)
    def primitive_root(self):
        order = self.q - 1
        factors = [f for f in range(2, order + 1) if order % f == 0 and is_prime(f)]
        for v in range(1, self.q):
            if all(self._pow(v, order // f) != 1 for f in factors):
                return FiniteFieldElement(self, v)
        raise FieldError("no primitive root")  # pragma: no cover


@lru_cache(maxsize=None)
def finite_field(p: int, k: int = 1) -> FiniteField:
    return FiniteField(p, k)


def GF(q: int) -> FiniteField:
    p, k = prime_power(q)
    return finite_field(p, k)


class FiniteFieldElement:
    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = value

    def _other(self, other):
        if isinstance(other, FiniteFieldElement):
            if other.field.q != self.field.q:
                raise ContextMismatch(f"{self.field.tag} vs {other.field.tag}")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        if isinstance(other, Fraction):
            return self.field(other).value
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FiniteFieldElement(self.field, self.field._add(self.value, o))

    __radd__ = __add__

    def __neg__(self):
        return FiniteFieldElement(self.field, self.field._neg(self.value))

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FiniteFieldElement(self.field, self.field._add(self.value, self.field._neg(o)))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FiniteFieldElement(self.field, self.field._add(o, self.field._neg(self.value)))

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FiniteFieldElement(self.field, self.field._mul(self.value, o))

    __rmul__ = __mul__

    def inverse(self):
        return FiniteFieldElement(self.field, self.field._inv(self.value))

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FiniteFieldElement(self.field, self.field._mul(self.value, self.field._inv(o)))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FiniteFieldElement(self.field, self.field._mul(o, self.field._inv(self.value)))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FiniteFieldElement(self.field, self.field._pow(self.value, e))

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, FiniteFieldElement):
            return self.field.q == other.field.q and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.value))

    def to_text(self) -> str:
        F = self.field
        if F.k == 1:
            return str(self.value)
        parts = []
        digits = F.digits(self.value)
        for i in range(F.k - 1, -1, -1):
            if digits[i]:
                mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
                parts.append(_signed_term(Fraction(digits[i]), mono))
        return _join_terms(parts)

    def __repr__(self):
        return self.to_text()

    def __reduce__(self):
        return (FiniteFieldElement, (self.field, self.value))


# ---------------------------------------------------------------------------
# generic helpers


def field_arith(a, b, op: str, context=None):
    """Exact a (op) b for op in add/sub/mul/div, inside one field context."""
    if context is not None:
        a, b = context(a), context(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise ZeroDivisionError("division by zero")
        if isinstance(a, int) and isinstance(b, int):
            return Fraction(a, b)
        return a / b
    raise FieldError(f"unknown operation {op!r}")


def common_field(K1, K2):
    """Smallest field of the supported kinds containing both K1 and K2."""
    if K1 == K2:
        return K1
    if isinstance(K1, RationalField):
        if isinstance(K2, CyclotomicField):
            return K2
    if isinstance(K2, RationalField):
        if isinstance(K1, CyclotomicField):
            return K1
    if isinstance(K1, CyclotomicField) and isinstance(K2, CyclotomicField):
        return cyclotomic_field(math.lcm(K1.m, K2.m))
    raise ContextMismatch(f"no common field for {K1!r} and {K2!r}")


def field_of(x):
    if isinstance(x, (int, Fraction)):
        return QQ
    return x.field


def parse_field(text: str):
    """Field from its header syntax: ``Q``, ``Q(z<m>)`` or ``F<q>``."""
    t = text.strip()
    if t == "Q":
        return QQ
    m = re.fullmatch(r"Q\(\s*z(\d+)\s*\)", t)
    if m:
        return cyclotomic_field(int(m.group(1)))
    m = re.fullmatch(r"F_?(\d+)", t)
    if m:
        return GF(int(m.group(1)))
    raise FieldError(f"unknown field {text!r}")


def _parse_constant(text, field):
    from .poly import parse_poly

    f = parse_poly(text, field)
    if f.total_degree() > 0:
        raise FieldError(f"{text!r} is not a constant")
    return f.constant_coefficient()
