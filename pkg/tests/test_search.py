import random
from fractions import Fraction

import numpy as np
import pytest

from symdet.field import GF
from symdet.pencil import CongruenceMove, SymmetricPencil, congruence_transform, conic_pencil, verify_representation
from symdet.poly import parse_poly
from symdet.search import (
    BudgetExceeded,
    ConicError,
    SearchError,
    classify_equivalence,
    code_of_pencil,
    conic_has_rational_point,
    conic_representation,
    count_points,
    decode,
    diagonal_conic,
    encode,
    enumerate_representations,
    hilbert_symbol,
    pencil_from_code,
)


def test_encoding_roundtrip():
    K = GF(3)
    for code in (0, 1, 17, 3**9 - 1):
        pen = pencil_from_code(code, 2, K, 2)
        assert code_of_pencil(pen) == (code, 2)
    # the most significant digit is M0[0][0]
    pen = pencil_from_code(3**8, 1, K, 2)
    assert pen.matrices[0][0][0] == K(1)
    assert encode(decode(1234, 3, 2), 3) == 1234


def test_linear_forms_over_f3():
    F = parse_poly("X0 + 2*X1 + X2", GF(3))
    rep = enumerate_representations(F, 1)
    assert rep.tested == 27 * 2
    assert len(rep.found) == 2 and rep.class_count == 1


def test_conic_over_f5_nonempty():
    rep = enumerate_representations(parse_poly("X0^2 + X1^2 + X2^2", GF(5)), 2)
    assert rep.found and rep.class_count == 1
    assert all(verify_representation(rep.curve, p) for p in rep.found)
    # least member first in each class
    assert rep.representatives[0] == rep.classes[0][0]
    assert code_of_pencil(rep.classes[0][0]) == min(code_of_pencil(p) for p in rep.classes[0])


def test_fermat_cubic_over_f2_empty():
    F = parse_poly("X0^3 + X1^3 + X2^3", GF(2))
    assert count_points(F) == 3
    rep = enumerate_representations(F, 3)
    assert rep.tested == 2**18
    assert rep.found == [] and rep.class_count == 0


def test_budget_refusal():
    with pytest.raises(BudgetExceeded) as err:
        enumerate_representations(parse_poly("X0^2 + X1^2 + X2^2", GF(5)), 2, budget=10)
    assert err.value.required == 5**9 * 4


def test_search_preconditions():
    with pytest.raises(SearchError):
        enumerate_representations(parse_poly("X0^2 + X1^2"), 2)
    with pytest.raises(SearchError):
        enumerate_representations(parse_poly("X0^2 + X1", GF(3)), 2)


def test_workers_and_order_do_not_change_the_report():
    F = parse_poly("X0^2 + 2*X1^2 + X2^2", GF(3))
    base = enumerate_representations(F, 2)
    par = enumerate_representations(F, 2, workers=2, shuffle_seed=11)
    assert [code_of_pencil(p) for p in base.found] == [code_of_pencil(p) for p in par.found]
    assert base.class_count == par.class_count == 1


def test_extension_field_search():
    F = parse_poly("X0^2 + g*X1^2 + X2^2", GF(4))
    rep = enumerate_representations(F, 2)
    assert rep.found
    assert all(verify_representation(F, p) for p in rep.found)


def test_classification_modes_agree():
    F = parse_poly("X0^2 + X1^2 + 2*X2^2", GF(3))
    rep = enumerate_representations(F, 2, classify=False)
    full = classify_equivalence(rep.found, 3, 2, mode="full")
    gens = classify_equivalence(rep.found, 3, 2, mode="generators")
    assert [[code_of_pencil(p) for p in c] for c in full] == [[code_of_pencil(p) for p in c] for c in gens]
    assert classify_equivalence([], 3, 2) == []
    with pytest.raises(SearchError):
        classify_equivalence(rep.found, 3, 2, mode="bogus")


def test_transform_pairs_share_a_class():
    K = GF(5)
    F = parse_poly("X0^2 + X1^2 - X2^2", K)
    rep = enumerate_representations(F, 2)
    pen = SymmetricPencil(*[[[K(x) for x in row] for row in M] for M in conic_pencil().matrices], a=K(-1), field=K)
    moved = congruence_transform(pen, CongruenceMove([[1, 2], [3, 2]], 2))
    cls = next(c for c in rep.classes if pen in c)
    assert moved in cls


def test_hilbert_symbols():
    assert hilbert_symbol(-1, -1, "inf") == -1
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(-1, -1, 3) == 1
    assert hilbert_symbol(2, 3, 3) == -1
    assert hilbert_symbol(5, 5, 5) == 1  # 5 = 1 mod 4


def test_conic_examples():
    d = conic_has_rational_point(1, 1, 1)
    assert not d.solvable and "inf" in d.obstructions
    d = conic_has_rational_point(1, 1, -1)
    assert d.solvable and d.witness == (1, 0, 1)
    assert conic_has_rational_point(2, 3, -5).witness == (1, 1, 1)
    with pytest.raises(ConicError):
        conic_has_rational_point(1, -1, 0)


def test_conic_representations():
    pen = conic_representation(1, 1, -1)
    assert pen == conic_pencil()
    pen = conic_representation(2, 3, -5)
    assert verify_representation(diagonal_conic(2, 3, -5), pen)
    assert conic_representation(1, 1, 1) is None
    pen = conic_representation(Fraction(1, 3), -12, 7)
    if pen is not None:
        assert verify_representation(diagonal_conic(Fraction(1, 3), -12, 7), pen)


def _brute_force_has_point(a, b, c, H=50):
    r = np.arange(-H, H + 1, dtype=np.int64)
    x, y = np.meshgrid(r, r)
    lhs = -(a * x * x + b * y * y)
    zs = c * r * r
    mask = np.isin(lhs, zs) & ((x != 0) | (y != 0))
    return bool(mask.any())


def test_conic_soundness_against_brute_force():
    rng = random.Random(5)
    for _ in range(60):
        a, b, c = (rng.choice([-1, 1]) * rng.randint(1, 30) for _ in range(3))
        d = conic_has_rational_point(a, b, c)
        if d.solvable:
            x, y, z = d.witness
            assert a * x * x + b * y * y + c * z * z == 0 and (x, y, z) != (0, 0, 0)
            assert verify_representation(diagonal_conic(a, b, c), conic_representation(a, b, c))
        else:
            assert d.obstructions and len(d.obstructions) % 2 == 0
            assert not _brute_force_has_point(a, b, c)
