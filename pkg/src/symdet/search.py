"""Finite-field search for symmetric determinantal representations, and conics over Q.

The search walks every triple of symmetric n x n matrices over F_q, encoded
as a base-q integer over the 3*n(n+1)/2 upper-triangular entries (M0 first,
row-major, most significant digit first).  Determinants are expanded for a
whole block of encodings at once with numpy table arithmetic.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import permutations, product

import numpy as np

from .field import QQ, FiniteField, finite_field
from .pencil import SymmetricPencil, verify_representation
from .poly import TernaryPoly, field_det, mat_inverse, monomials

DEFAULT_BUDGET = 2**30
BLOCK = 1 << 16


class SearchError(ValueError):
    pass


class BudgetExceeded(SearchError):
    def __init__(self, required, budget):
        super().__init__(f"search needs {required} candidates, budget is {budget}")
        self.required = required
        self.budget = budget


class ConicError(ValueError):
    pass


# ---------------------------------------------------------------------------
# encodings


def _upper(n):
    return [(i, j) for i in range(n) for j in range(i, n)]


def free_entries(n: int) -> int:
    return 3 * n * (n + 1) // 2


def decode(code: int, q: int, n: int) -> list:
    """Digits of an encoding, most significant first."""
    D = free_entries(n)
    out = [0] * D
    for t in range(D - 1, -1, -1):
        code, out[t] = divmod(code, q)
    return out


def encode(digits, q: int) -> int:
    code = 0
    for d in digits:
        code = code * q + d
    return code


def _matrices_from_digits(digits, n):
    mats = []
    k = n * (n + 1) // 2
    for m in range(3):
        M = [[0] * n for _ in range(n)]
        for (i, j), d in zip(_upper(n), digits[m * k : (m + 1) * k]):
            M[i][j] = M[j][i] = d
        mats.append(M)
    return mats


def _digits_from_matrices(mats, n):
    return [M[i][j] for M in mats for (i, j) in _upper(n)]


def pencil_from_code(code: int, a_code: int, K: FiniteField, n: int) -> SymmetricPencil:
    mats = _matrices_from_digits(decode(code, K.q, n), n)
    el = K.element
    return SymmetricPencil(*[[[el(x) for x in row] for row in M] for M in mats], a=el(a_code), field=K)


def code_of_pencil(pen: SymmetricPencil):
    K = pen.field
    mats = [[[x.value for x in row] for row in M] for M in pen.matrices]
    return encode(_digits_from_matrices(mats, pen.n), K.q), pen.a.value


# ---------------------------------------------------------------------------
# table arithmetic


class _Tables:
    def __init__(self, K: FiniteField):
        q = K.q
        self.q = q
        self.add = np.array([[K._add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
        self.mul = np.array([[K._mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
        self.neg = np.array([K._neg(a) for a in range(q)], dtype=np.int64)
        self.inv = np.array([0] + [K._inv(a) for a in range(1, q)], dtype=np.int64)


def _form_mul(f, g, T):
    out = {}
    for ma, ca in f.items():
        for mb, cb in g.items():
            m = (ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2])
            prod = T.mul[ca, cb]
            out[m] = T.add[out[m], prod] if m in out else prod
    return out


def _block_determinants(lo, hi, q, n, T):
    """Coefficient arrays (block, #monomials) of det(X0 M0 + X1 M1 + X2 M2)."""
    D = free_entries(n)
    codes = np.arange(lo, hi, dtype=np.int64)
    digits = np.empty((hi - lo, D), dtype=np.int64)
    rest = codes.copy()
    for t in range(D - 1, -1, -1):
        digits[:, t] = rest % q
        rest //= q
    k = n * (n + 1) // 2
    index = {ij: s for s, ij in enumerate(_upper(n))}
    units = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]

    def entry(i, j):
        s = index[(min(i, j), max(i, j))]
        return {units[m]: digits[:, m * k + s] for m in range(3)}

    entries = [[entry(i, j) for j in range(n)] for i in range(n)]
    total = {}
    for perm in permutations(range(n)):
        sign = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]) % 2
        term = entries[0][perm[0]]
        for i in range(1, n):
            term = _form_mul(term, entries[i][perm[i]], T)
        for m, c in term.items():
            c = T.neg[c] if sign else c
            total[m] = T.add[total[m], c] if m in total else c
    zero = np.zeros(hi - lo, dtype=np.int64)
    return np.stack([total.get(m, zero) for m in monomials(n)], axis=1)


def _search_range(args):
    lo, hi, p, k, n, target = args
    K = finite_field(p, k)
    T = _Tables(K)
    target = np.array(target, dtype=np.int64)
    i0 = int(np.nonzero(target)[0][0])
    inv_t0 = T.inv[target[i0]]
    hits = []
    for start in range(lo, hi, BLOCK):
        stop = min(hi, start + BLOCK)
        dets = _block_determinants(start, stop, K.q, n, T)
        lam = T.mul[dets[:, i0], inv_t0]  # det = lam * F forces this lam
        ok = (lam != 0) & np.all(dets == T.mul[lam[:, None], target[None, :]], axis=1)
        for idx in np.nonzero(ok)[0]:
            hits.append((start + int(idx), int(T.inv[lam[idx]])))
    return hits


@dataclass
class SearchReport:
    curve: TernaryPoly
    q: int
    n: int
    tested: int
    found: list
    classes: list = dc_field(default_factory=list)
    elapsed: float = 0.0

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @property
    def representatives(self) -> list:
        return [cls[0] for cls in self.classes]

    def summary(self) -> dict:
        return {
            "curve": self.curve.to_text(),
            "field": f"F{self.q}",
            "n": self.n,
            "tested": self.tested,
            "found": len(self.found),
            "classes": self.class_count,
            "class_sizes": [len(c) for c in self.classes],
            "representatives": [_pencil_summary(p) for p in self.representatives],
            "seconds": round(self.elapsed, 3),
        }

    def to_text(self) -> str:
        lines = [
            f"curve: {self.curve.to_text()}",
            f"field: F{self.q}",
            f"n: {self.n}",
            f"tested: {self.tested}",
            f"found: {len(self.found)}",
            f"classes: {self.class_count}",
        ]
        for idx, cls in enumerate(self.classes):
            lines.append(f"class {idx} (size {len(cls)}), representative:")
            lines += ["  " + ln for ln in cls[0].to_text().splitlines()[2:]]
        return "\n".join(lines) + "\n"


def _pencil_summary(pen):
    K = pen.field
    return {
        "a": K.format(pen.a),
        "M": [[[K.format(x) for x in row] for row in M] for M in pen.matrices],
    }


def enumerate_representations(F: TernaryPoly, n: int, workers: int = 1, budget: int = DEFAULT_BUDGET,
                              shuffle_seed=None, classify: bool = True, mode: str = "auto") -> SearchReport:
    """Every pencil (M0, M1, M2, a) over F_q with a*det(sum X_i M_i) = F."""
    K = F.field
    if not isinstance(K, FiniteField):
        raise SearchError("exhaustive search needs a finite field")
    if F.is_homogeneous() != n:
        raise SearchError(f"polynomial is not a form of degree {n}")
    q = K.q
    triples = q ** free_entries(n)
    tested = triples * (q - 1)
    if tested > budget:
        raise BudgetExceeded(tested, budget)
    t0 = time.perf_counter()
    target = [F.coefficient(m).value for m in monomials(n)]
    workers = max(1, int(workers))
    pieces = max(workers * 4, 1) if workers > 1 else 1
    # split by high-order digits: equal slices of the code range
    step = -(-triples // pieces)
    jobs = [(lo, min(triples, lo + step), K.p, K.k, n, target) for lo in range(0, triples, step)]
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(jobs)
    if workers == 1:
        results = [_search_range(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search_range, jobs))
    hits = sorted(h for part in results for h in part)
    found = [pencil_from_code(c, a, K, n) for c, a in hits]
    for pen in found:
        if not verify_representation(F, pen):
            raise AssertionError("search produced a pencil that does not verify")  # pragma: no cover
    report = SearchReport(F, q, n, tested, found)
    if classify:
        report.classes = classify_equivalence(found, q, n, mode=mode)
    report.elapsed = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# equivalence classes


FULL_GROUP_LIMIT = 200_000


def gl_order(n, q):
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


class _Action:
    """(P, c) acting on coded pencils by M_i -> c P^t M_i P, a -> a / (c^n det(P)^2)."""

    def __init__(self, K: FiniteField, n: int):
        self.K = K
        self.n = n
        q = K.q
        self.add = [[K._add(a, b) for b in range(q)] for a in range(q)]
        self.mul = [[K._mul(a, b) for b in range(q)] for a in range(q)]
        self.inv = [0] + [K._inv(a) for a in range(1, q)]

    def _matmul(self, A, B):
        n = self.n
        out = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                s = 0
                for t in range(n):
                    s = self.add[s][self.mul[A[i][t]][B[t][j]]]
                out[i][j] = s
        return out

    def det(self, P):
        K = self.K
        return field_det([[K.element(x) for x in row] for row in P], K).value

    def apply(self, key, P, c, detP):
        code, a = key
        n, q = self.n, self.K.q
        Pt = [list(r) for r in zip(*P)]
        mats = []
        for M in _matrices_from_digits(decode(code, q, n), n):
            R = self._matmul(self._matmul(Pt, M), P)
            mats.append([[self.mul[c][x] for x in row] for row in R])
        scale = self.mul[self._pow(c, n)][self.mul[detP][detP]]
        return encode(_digits_from_matrices(mats, n), q), self.mul[a][self.inv[scale]]

    def _pow(self, x, e):
        r = 1
        for _ in range(e):
            r = self.mul[r][x]
        return r


def _generators(K: FiniteField, n: int):
    """Transvections over an additive basis, diag(g, 1, ...), and the scalar g."""
    g = K.primitive_root().value
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    gens = []
    basis = [K.encode([1 if t == s else 0 for t in range(K.k)]) for s in range(K.k)]
    for i in range(n):
        for j in range(n):
            if i != j:
                for alpha in basis:
                    E = [row[:] for row in ident]
                    E[i][j] = alpha
                    gens.append((E, 1))
    D = [row[:] for row in ident]
    D[0][0] = g
    gens.append((D, 1))
    gens.append((ident, g))
    return gens


def _all_group_elements(K: FiniteField, n: int, act: _Action):
    q = K.q
    for entries in product(range(q), repeat=n * n):
        P = [list(entries[i * n : (i + 1) * n]) for i in range(n)]
        d = act.det(P)
        if d:
            for c in range(1, q):
                yield P, c, d


def classify_equivalence(found, q: int, n: int, mode: str = "auto") -> list:
    """Partition found pencils into congruence orbits; each class sorted, least member first."""
    if not found:
        return []
    K = found[0].field
    if K.q != q or found[0].n != n:
        raise SearchError("pencils do not match the stated field or size")
    group_size = gl_order(n, q) * (q - 1)
    if mode == "auto":
        mode = "full" if group_size <= FULL_GROUP_LIMIT else "generators"
    if mode == "full" and group_size > FULL_GROUP_LIMIT:
        raise SearchError(f"group of order {group_size} is too large for full enumeration; use generator mode")
    if mode not in ("full", "generators"):
        raise SearchError(f"unknown classification mode {mode!r}")
    act = _Action(K, n)
    keys = sorted(code_of_pencil(p) for p in found)
    remaining = set(keys)
    by_key = {code_of_pencil(p): p for p in found}
    if mode == "full":
        elements = list(_all_group_elements(K, n, act))
    else:
        elements = [(P, c, act.det(P)) for P, c in _generators(K, n)]
    classes = []
    for key in keys:
        if key not in remaining:
            continue
        if mode == "full":
            orbit = {act.apply(key, P, c, d) for P, c, d in elements}
        else:
            orbit = {key}
            frontier = [key]
            while frontier:
                nxt = []
                for x in frontier:
                    for P, c, d in elements:
                        y = act.apply(x, P, c, d)
                        if y not in orbit:
                            orbit.add(y)
                            nxt.append(y)
                frontier = nxt
        if not orbit <= remaining:
            raise AssertionError("orbit leaves the found set")  # pragma: no cover
        remaining -= orbit
        classes.append([by_key[k] for k in sorted(orbit)])
    return classes


# ---------------------------------------------------------------------------
# F_q-points


def count_points(F: TernaryPoly) -> int:
    """Number of F_q-rational points of the plane curve F = 0."""
    K = F.field
    els = K.elements()
    count = 0
    for x0, x1, x2 in product(els, repeat=3):
        # normalized representatives: last nonzero coordinate equal to 1
        last = x2 if x2 else x1 if x1 else x0
        if last == K.one and not F.evaluate((x0, x1, x2)):
            count += 1
    return count


# ---------------------------------------------------------------------------
# conics over Q


@dataclass
class ConicDecision:
    coefficients: tuple
    solvable: bool
    witness: tuple | None
    obstructions: list

    def to_text(self) -> str:
        lines = [f"conic: {diagonal_conic(*self.coefficients).to_text()}"]
        if self.solvable:
            lines.append("rational point: yes")
            lines.append("witness: (" + ", ".join(str(x) for x in self.witness) + ")")
        else:
            lines.append("rational point: no")
            lines.append("obstructions: " + ", ".join(str(v) for v in self.obstructions))
        return "\n".join(lines) + "\n"


def _factor(n: int) -> dict:
    from sympy import factorint

    return factorint(abs(n))


def _squarefree(n: int):
    """(squarefree part, square root of the square part) of a nonzero integer."""
    sf, root = (1 if n > 0 else -1), 1
    for p, e in _factor(n).items():
        root *= p ** (e // 2)
        if e % 2:
            sf *= p
    return sf, root


def _split(x: int, p: int):
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def hilbert_symbol(x: int, y: int, p) -> int:
    """(x, y)_p for nonzero integers; p a prime or 'inf'."""
    if p == "inf":
        return -1 if x < 0 and y < 0 else 1
    alpha, u = _split(x, p)
    beta, v = _split(y, p)
    if p == 2:
        eps = lambda t: ((t - 1) // 2) % 2
        omega = lambda t: ((t * t - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    leg = lambda t: 1 if pow(t % p, (p - 1) // 2, p) == 1 else -1
    sign = -1 if (alpha * beta * (p - 1) // 2) % 2 else 1
    return sign * leg(u) ** beta * leg(v) ** alpha


def _integral(a, b, c):
    vals = [Fraction(x) for x in (a, b, c)]
    if any(v == 0 for v in vals):
        raise ConicError("degenerate conic: a coefficient is zero")
    den = math.lcm(*(v.denominator for v in vals))
    ints = [int(v * den) for v in vals]
    g = math.gcd(*ints)
    return vals, [x // g for x in ints]


def conic_has_rational_point(a, b, c) -> ConicDecision:
    """Decide a X0^2 + b X1^2 + c X2^2 = 0 over Q, with a witness when solvable."""
    vals, ints = _integral(a, b, c)
    reduced = [_squarefree(x) for x in ints]
    A, B, C = (sf for sf, _ in reduced)
    x, y = -A * C, -B * C
    places = ["inf", 2] + sorted({p for v in (A, B, C) for p in _factor(v) if p != 2})
    obstructions = [v for v in places if hilbert_symbol(x, y, v) == -1]
    coeffs = tuple(vals)
    if obstructions:
        return ConicDecision(coeffs, False, None, obstructions)
    # a solvable squarefree form has a solution with |X0|, |X1| <= sqrt(|ABC|)
    bound = math.isqrt(abs(A * B * C))
    for Y in range(bound + 1):
        for X in range(bound + 1):
            if X == 0 and Y == 0:
                continue
            z2 = Fraction(-(A * X * X + B * Y * Y), C)
            if z2 < 0:
                continue
            zn, zd = math.isqrt(z2.numerator), math.isqrt(z2.denominator)
            if zn * zn != z2.numerator or zd * zd != z2.denominator:
                continue
            # undo the square scalings: ints[i] = sf_i * r_i^2
            pt = [Fraction(X, reduced[0][1]), Fraction(Y, reduced[1][1]), Fraction(zn, zd * reduced[2][1])]
            den = math.lcm(*(v.denominator for v in pt))
            w = [int(v * den) for v in pt]
            g = math.gcd(*w)
            witness = tuple(v // g for v in w)
            assert sum(k * t * t for k, t in zip(vals, witness)) == 0
            return ConicDecision(coeffs, True, witness, [])
    raise AssertionError("locally solvable conic without a witness in the search box")  # pragma: no cover


def _cross(u, v):
    return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]


def conic_representation(a, b, c):
    """A 2x2 symmetric pencil over Q for a X0^2 + b X1^2 + c X2^2, or None without Q-points.

    With W the witness, V a second isotropic vector and U orthogonal to both,
    X = ((Y0+Y2)/2) W + Y1 U + ((Y0-Y2)/2) V turns the form into
    gamma (Y0^2 + Y1^2 - Y2^2); the pencil [[Y0+Y2, Y1], [Y1, -Y0+Y2]] is then
    pulled back through Y = T^-1 X.
    """
    dec = conic_has_rational_point(a, b, c)
    if not dec.solvable:
        return None
    d = list(dec.coefficients)
    Q = lambda v: sum(k * t * t for k, t in zip(d, v))
    Bf = lambda v, w: sum(k * s * t for k, s, t in zip(d, v, w))
    W = [Fraction(t) for t in dec.witness]
    detD = d[0] * d[1] * d[2]
    i = next(i for i in range(3) if d[i] * W[i])
    V0 = [Fraction(int(t == i)) for t in range(3)]
    b0 = Bf(W, V0)
    V1 = [-Q(V0) * w + 2 * b0 * v for w, v in zip(W, V0)]
    kappa = -detD / (b0 * b0)
    V = [kappa * t for t in V1]
    gamma = Bf(W, V) / 2
    DW = [k * t for k, t in zip(d, W)]
    DV = [k * t for k, t in zip(d, V)]
    U = [t / (2 * detD) for t in _cross(DW, DV)]
    assert Q(V) == 0 and Bf(U, W) == 0 and Bf(U, V) == 0 and Q(U) == gamma
    cols = [[(w + v) / 2 for w, v in zip(W, V)], U, [(w - v) / 2 for w, v in zip(W, V)]]
    T = [[cols[j][i] for j in range(3)] for i in range(3)]
    Tinv = mat_inverse(T, QQ)
    base = [
        [[1, 0], [0, -1]],  # coefficient of Y0
        [[0, 1], [1, 0]],  # Y1
        [[1, 0], [0, 1]],  # Y2
    ]
    mats = []
    for j in range(3):
        mats.append([[sum(Tinv[i][j] * base[i][r][s] for i in range(3)) for s in range(2)] for r in range(2)])
    pen = SymmetricPencil(*mats, a=-gamma, field=QQ)
    if not verify_representation(diagonal_conic(*d), pen):
        raise AssertionError("conic pencil does not verify")  # pragma: no cover
    return pen


def diagonal_conic(a, b, c, field=QQ) -> TernaryPoly:
    return TernaryPoly(field, {(2, 0, 0): field(a), (0, 2, 0): field(b), (0, 0, 2): field(c)})
