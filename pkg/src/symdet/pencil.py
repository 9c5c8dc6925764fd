"""Symmetric linear pencils X0*M0 + X1*M1 + X2*M2 and their determinants."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations

from .field import QQ, parse_field
from .poly import PolyError, TernaryPoly, exact_divide, field_det, mat_mul, transpose


class PencilError(ValueError):
    pass


class DegreeMismatch(PencilError):
    pass


def _freeze(M, field):
    return tuple(tuple(field(x) for x in row) for row in M)


@dataclass(frozen=True)
class SymmetricPencil:
    """Triple of symmetric n x n matrices with the scalar a of a*det(...)."""

    field: object
    matrices: tuple
    a: object

    def __init__(self, M0, M1, M2, a=1, field=QQ):
        mats = tuple(_freeze(M, field) for M in (M0, M1, M2))
        n = len(mats[0])
        for M in mats:
            if len(M) != n or any(len(row) != n for row in M):
                raise PencilError("pencil matrices must be square of equal size")
            for i in range(n):
                for j in range(i + 1, n):
                    if M[i][j] != M[j][i]:
                        raise PencilError(f"matrix is not symmetric at ({i}, {j})")
        a = field(a)
        if not a:
            raise PencilError("scalar a must be nonzero")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return len(self.matrices[0])

    def linear_matrix(self):
        """n x n matrix of linear forms X0*M0[i][j] + X1*M1[i][j] + X2*M2[i][j]."""
        K = self.field
        M0, M1, M2 = self.matrices
        return [
            [TernaryPoly.linear(K, (M0[i][j], M1[i][j], M2[i][j])) for j in range(self.n)]
            for i in range(self.n)
        ]

    def with_scalar(self, a):
        return SymmetricPencil(*self.matrices, a=a, field=self.field)

    def to_text(self) -> str:
        K = self.field
        lines = [f"field: {K.tag}", f"n: {self.n}", f"a: {K.format(self.a)}"]
        for idx, M in enumerate(self.matrices):
            lines.append(f"M{idx}:")
            for row in M:
                lines.append(" ".join(K.format(x).replace(" ", "") for x in row))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# determinants of matrices of polynomials


def det_bareiss(matrix) -> TernaryPoly:
    """Fraction-free (Bareiss) elimination over the polynomial ring."""
    n = len(matrix)
    if n == 0:
        raise PencilError("empty matrix")
    field = matrix[0][0].field
    A = [list(row) for row in matrix]
    sign = 1
    prev = TernaryPoly.constant(field, 1)
    for k in range(n - 1):
        if not A[k][k]:
            swap = next((r for r in range(k + 1, n) if A[r][k]), None)
            if swap is None:
                return TernaryPoly(field)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                q = exact_divide(num, prev)
                if q is None:
                    raise ArithmeticError("Bareiss step was not exact")  # pragma: no cover
                A[i][j] = q
            A[i][k] = TernaryPoly(field)
        prev = A[k][k]
    det = A[n - 1][n - 1]
    return det if sign > 0 else -det


def det_cofactor(matrix) -> TernaryPoly:
    """Literal Laplace expansion along the first row."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    field = matrix[0][0].field
    total = TernaryPoly(field)
    for j in range(n):
        if not matrix[0][j]:
            continue
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        term = matrix[0][j] * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_leibniz(matrix) -> TernaryPoly:
    n = len(matrix)
    field = matrix[0][0].field
    total = TernaryPoly(field)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = TernaryPoly.constant(field, 1)
        for i in range(n):
            term = term * matrix[i][perm[i]]
        total = total - term if inversions % 2 else total + term
    return total


def pencil_det(pen: SymmetricPencil) -> TernaryPoly:
    """det(X0*M0 + X1*M1 + X2*M2), expanded exactly (without the scalar a)."""
    return det_bareiss(pen.linear_matrix())


def verify_representation(F: TernaryPoly, pen: SymmetricPencil) -> bool:
    """True iff F = a * det(X0*M0 + X1*M1 + X2*M2)."""
    d = F.is_homogeneous()
    if d != pen.n:
        raise DegreeMismatch(f"curve degree {d} does not match pencil size {pen.n}")
    if F.field != pen.field:
        F = F.change_field(pen.field)
    return F == pencil_det(pen) * pen.a


@dataclass(frozen=True)
class CongruenceMove:
    """The move M_i -> a * P^t M_i P."""

    P: tuple
    a: object


def congruence_transform(pen: SymmetricPencil, mv: CongruenceMove) -> SymmetricPencil:
    K = pen.field
    P = [[K(x) for x in row] for row in mv.P]
    n = pen.n
    if len(P) != n or any(len(r) != n for r in P):
        raise PencilError("move size does not match pencil")
    c = K(mv.a)
    if not c:
        raise PencilError("scalar of a congruence move must be nonzero")
    detP = field_det(P, K)
    if not detP:
        raise PencilError("congruence matrix is singular")
    Pt = transpose(P)
    mats = [[[x * c for x in row] for row in mat_mul(mat_mul(Pt, [list(r) for r in M], K), P, K)] for M in pen.matrices]
    new_a = pen.a / (c**n * detP**2)
    return SymmetricPencil(*mats, a=new_a, field=K)


# ---------------------------------------------------------------------------
# fixtures


def klein_pencil() -> SymmetricPencil:
    """The 4x4 pencil whose determinant is minus the Klein quartic."""
    M0 = [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0]]
    M1 = [[0, 0, 0, -1], [0, 1, 0, 0], [0, 0, 0, 0], [-1, 0, 0, 0]]
    M2 = [[0, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0]]
    return SymmetricPencil(M0, M1, M2, a=-1)


def conic_pencil() -> SymmetricPencil:
    """[[X0+X2, X1], [X1, -X0+X2]] with a = -1, representing X0^2 + X1^2 - X2^2."""
    return SymmetricPencil([[1, 0], [0, -1]], [[0, 1], [1, 0]], [[1, 0], [0, 1]], a=-1)


# ---------------------------------------------------------------------------
# pencil files


def read_pencil_text(text: str) -> SymmetricPencil:
    header = {}
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line or re.fullmatch(r"M[012]\s*:", line):
            continue
        m = re.fullmatch(r"(field|n|a)\s*:\s*(.+)", line)
        if m:
            header[m.group(1)] = m.group(2).strip()
            continue
        rows.append(line.split())
    for key in ("field", "n"):
        if key not in header:
            raise PencilError(f"pencil file lacks '{key}:' header")
    field = parse_field(header["field"])
    n = int(header["n"])
    if len(rows) != 3 * n or any(len(r) != n for r in rows):
        raise PencilError(f"expected three {n}x{n} matrices")
    try:
        mats = [[[field.parse(tok) for tok in rows[k * n + i]] for i in range(n)] for k in range(3)]
        a = field.parse(header.get("a", "1"))
    except (PolyError, ValueError) as exc:
        raise PencilError(f"bad matrix entry: {exc}") from exc
    return SymmetricPencil(*mats, a=a, field=field)


def read_pencil_file(path) -> SymmetricPencil:
    with open(path, encoding="utf-8") as fh:
        return read_pencil_text(fh.read())
