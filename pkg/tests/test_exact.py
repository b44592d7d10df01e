from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from hnlab.exact import (GF, QQ, BinaryForm, ExactMatrix, FieldMismatch, HomPoly, KtPoly, evaluate,
                         form_gcd, multiply, partial, poly_det, poly_gcd, poly_xgcd, rref, same_span,
                         smith_form, snf_kt, substitute)
from hnlab.exact.snf import matmul
from hnlab.rng import SplitMix64
from hnlab.tor import random_unimodular

F7, F101 = GF(7), GF(101)


def kt(*cs, field=QQ):
    return KtPoly(list(cs), field)


# ---------------------------------------------------------------- scalars

def test_prime_field_canonical_representatives():
    assert F7(-1).value == 6
    assert F7(3) / F7(5) * F7(5) == F7(3)
    assert F7("2/3") == F7(2) / F7(3)


def test_field_validation():
    for bad in (2, 9, 1, 0, -7, 2 ** 31 + 11):
        with pytest.raises(ValueError):
            GF(bad)


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        F7(1) + Fraction(1, 2)
    with pytest.raises(FieldMismatch):
        F7(1) + GF(11)(1)


def test_rationals_reduced():
    x = QQ(Fraction(6, -4))
    assert x == Fraction(-3, 2) and x.denominator == 2


# ---------------------------------------------------------------- rref

def test_rref_identity():
    r = rref(ExactMatrix.identity(3))
    assert r.rank == 3 and r.kernel_basis == []


def test_rref_zero():
    r = rref(ExactMatrix.zeros(2, 2))
    assert r.rank == 0 and len(r.kernel_basis) == 2


def test_rref_hand_example():
    m = ExactMatrix.from_rows([[1, 2], [2, 4]])
    r = rref(m)
    assert r.rank == 1
    assert same_span(r.kernel_basis, [[-2, 1]], 2, QQ)


def test_mixed_field_matrix_rejected():
    with pytest.raises((FieldMismatch, ValueError)):
        ExactMatrix.from_rows([[F7(1), Fraction(1)]])


small_ints = st.integers(-4, 4)


@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_rref_kernel_property(r, c, data):
    rows = data.draw(st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r))
    m = ExactMatrix.from_rows(rows)
    res = rref(m)
    assert res.rank + len(res.kernel_basis) == c
    for k in res.kernel_basis:
        assert all(x == 0 for x in m.apply(k))
    # independent oracle
    assert res.rank == sympy.Matrix(rows).rank()
    assert same_span(res.image_basis, [m.column(j) for j in range(c)], r, QQ)


@given(st.integers(1, 4), st.data())
def test_rref_mod_p_kernel(n, data):
    rows = data.draw(st.lists(st.lists(st.integers(0, 100), min_size=n, max_size=n), min_size=n, max_size=n))
    m = ExactMatrix.from_rows(rows, F101)
    for k in rref(m).kernel_basis:
        assert all(x == 0 for x in m.apply(k))
    assert (m.det() == 0) == (rref(m).rank < n)


def test_same_span_is_double_inclusion():
    assert same_span([[1, 0, 0], [0, 1, 0]], [[1, 1, 0], [1, -1, 0]], 3, QQ)
    assert not same_span([[1, 0, 0]], [[1, 0, 0], [0, 1, 0]], 3, QQ)
    assert not same_span([[1, 0, 0]], [[0, 1, 0]], 3, QQ)


# ---------------------------------------------------------------- k[t]

def test_ktpoly_arithmetic():
    a, b = kt(1, 1), kt(-1, 1)
    assert a * b == kt(-1, 0, 1)
    q, r = divmod(kt(-1, 0, 1), a)
    assert q == b and r.is_zero()
    g, s, u = poly_xgcd(kt(0, 0, 1), kt(1, 1))
    assert g == kt(1) and s * kt(0, 0, 1) + u * kt(1, 1) == g
    assert poly_gcd(kt(0, 2), kt(0, 0, 3)) == kt(0, 1)


@given(st.lists(small_ints, max_size=5), st.lists(small_ints, min_size=1, max_size=4))
def test_division_identity(a, b):
    A, B = kt(*a), kt(*b)
    if B.is_zero():
        return
    q, r = divmod(A, B)
    assert q * B + r == A and r.degree < B.degree


def test_poly_det_against_cofactor():
    m = [[kt(0, 1), kt(1)], [kt(1), kt(0, 1)]]
    assert poly_det(m, QQ) == kt(-1, 0, 1)


# ---------------------------------------------------------------- Smith form

def test_snf_examples():
    one, t, zero = kt(1), kt(0, 1), KtPoly((), QQ)
    assert snf_kt([[one, zero], [zero, t]]) == [one, t]
    assert snf_kt([[t, one], [zero, t]]) == [one, kt(0, 0, 1)]
    assert snf_kt([[zero, zero], [zero, zero]], QQ) == []


def _determinantal_invariants(m, field):
    """Oracle: d_k = D_k / D_{k-1}, D_k the monic gcd of all k x k minors."""
    R, C = len(m), len(m[0])
    out, prev = [], KtPoly.constant(1, field)
    for k in range(1, min(R, C) + 1):
        g = KtPoly((), field)
        for rows in combinations(range(R), k):
            for cols in combinations(range(C), k):
                g = poly_gcd(g, poly_det([[m[i][j] for j in cols] for i in rows], field))
        if g.is_zero():
            break
        out.append(g // prev)
        prev = g
    return out


def _random_poly_matrix(rng, R, C, field, deg=2):
    from hnlab.rng import random_scalar
    return [[KtPoly([random_scalar(rng, field) for _ in range(rng.randint(0, deg + 1))], field)
             for _ in range(C)] for _ in range(R)]


@pytest.mark.parametrize("field", [QQ, F7, F101], ids=["Q", "F7", "F101"])
def test_snf_matches_determinantal_divisors(field):
    rng = SplitMix64(11)
    for _ in range(60):
        R, C = rng.randint(1, 3), rng.randint(1, 3)
        m = _random_poly_matrix(rng, R, C, field)
        assert snf_kt(m, field) == _determinantal_invariants(m, field)


def test_smith_transforms():
    rng = SplitMix64(5)
    for _ in range(30):
        R, C = rng.randint(1, 3), rng.randint(1, 3)
        m = _random_poly_matrix(rng, R, C, QQ)
        sf = smith_form(m, QQ)
        assert matmul(matmul(sf.U, m, QQ), sf.V, QQ) == sf.D
        ident = matmul(sf.V, sf.V_inv, QQ)
        assert all(ident[i][j] == (1 if i == j else 0) for i in range(C) for j in range(C))
        assert poly_det(sf.U, QQ).degree == 0


def test_snf_unimodular_invariance():
    """200 instances, sizes <= 4, both field kinds."""
    rng = SplitMix64(2024)
    for k in range(200):
        F = F101 if k % 2 else QQ
        n = rng.randint(1, 4)
        m = _random_poly_matrix(rng, n, n, F, deg=1)
        U = random_unimodular(rng, n, F, steps=3)
        V = random_unimodular(rng, n, F, steps=3)
        assert snf_kt(matmul(matmul(U, m, F), V, F), F) == snf_kt(m, F)


def test_snf_product_is_normalized_determinant():
    rng = SplitMix64(9)
    for _ in range(40):
        m = _random_poly_matrix(rng, 3, 3, QQ)
        det = poly_det(m, QQ)
        if det.is_zero():
            continue
        prod = KtPoly.constant(1, QQ)
        for d in snf_kt(m, QQ):
            prod = prod * d
        assert prod == det.monic()


# ---------------------------------------------------------------- binary forms

def test_form_examples():
    x1sq = HomPoly(2, {(2, 0): 1})
    x, y = BinaryForm.monomial(1, 0), BinaryForm.monomial(0, 1)
    assert substitute(x1sq, [x, y]) == BinaryForm.monomial(2, 0)
    assert partial(HomPoly(1, {(4,): 1}), 1) == HomPoly(1, {(3,): 4})
    assert form_gcd(BinaryForm.monomial(2, 1), BinaryForm.monomial(1, 2)) == BinaryForm.monomial(1, 1)


def test_substitute_rejects_bad_input():
    x, y = BinaryForm.monomial(1, 0), BinaryForm.monomial(0, 1)
    with pytest.raises(ValueError):
        substitute(HomPoly(2, {(2, 0): 1, (1, 0): 1}), [x, y])
    with pytest.raises(ValueError):
        substitute(HomPoly(2, {(2, 0): 1}), [x, BinaryForm.monomial(2, 0)])


def test_form_gcd_monic_in_x():
    a = multiply(BinaryForm([2, 3]), BinaryForm([1, -1]))
    b = multiply(BinaryForm([4, 6]), BinaryForm([1, 5]))
    g = form_gcd(a, b)
    assert g == BinaryForm([1, Fraction(3, 2)])


forms = st.builds(lambda cs: BinaryForm(cs), st.lists(small_ints, min_size=1, max_size=4))


@given(st.data())
def test_substitute_multiplicative(data):
    n = data.draw(st.integers(1, 3))
    d = data.draw(st.integers(1, 2))
    g = [BinaryForm(data.draw(st.lists(small_ints, min_size=d + 1, max_size=d + 1))) for _ in range(n)]

    def hompoly(deg):
        exps = data.draw(st.lists(st.lists(st.integers(0, deg), min_size=n, max_size=n), min_size=1, max_size=3))
        terms = {}
        for e in exps:
            e[-1] = 0
            s = sum(e[:-1])
            if s > deg:
                continue
            e[-1] = deg - s
            terms[tuple(e)] = data.draw(st.integers(-3, 3))
        return HomPoly(n, terms) if any(terms.values()) else HomPoly.fermat(n, deg)

    Q, R = hompoly(data.draw(st.integers(1, 2))), hompoly(data.draw(st.integers(1, 2)))
    assert substitute(Q * R, g) == multiply(substitute(Q, g), substitute(R, g))


@given(forms, forms, st.integers(-3, 3), st.integers(-3, 3))
def test_evaluate_multiplicative(a, b, x0, y0):
    assert evaluate(multiply(a, b), (x0, y0)) == evaluate(a, (x0, y0)) * evaluate(b, (x0, y0))
