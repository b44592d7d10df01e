import itertools

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from hnlab.exact import GF, QQ, BinaryForm, ExactMatrix, HomPoly, rref
from hnlab.p1 import (FiberSubspace, GradedMap, SplitType, derivative_map, generic_rank,
                      graded_kernel_dim, h0_twist, h1_twist, is_fiberwise_surjective, jacobian_analysis,
                      kernel_split_type, modified_h0, modify, random_form, sample_experiment)
from hnlab.rng import SplitMix64

F5, F7, F101 = GF(5), GF(7), GF(101)
X3, Y3, XY2 = [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]


def test_h0_h1_examples():
    assert h0_twist([1, 1, 1]) == 6
    assert h0_twist([4]) == 5
    assert h1_twist([-2]) == 1


@given(st.lists(st.integers(-5, 5), max_size=4), st.integers(-6, 6))
def test_euler_characteristic(s, m):
    s = SplitType(s)
    assert h0_twist(s, m) - h1_twist(s, m) == s.degree + s.rank * (m + 1)


def test_split_type_is_sorted():
    assert SplitType([-1, 0]) == SplitType([0, -1]) and list(SplitType([-2, 1])) == [1, -2]


def test_generic_rank_examples():
    zero = GradedMap.from_coeffs([0, 0], [1], [[[], []]])
    assert generic_rank(zero) == 0
    assert generic_rank(GradedMap.identity([0, 0, 0])) == 3
    assert generic_rank(GradedMap.from_coeffs([1, 1, 1], [4], [[X3, Y3, XY2]])) == 1


def test_degree_validation():
    with pytest.raises(ValueError):
        GradedMap.from_coeffs([1, 1], [4], [[X3, [1, 0]]])


def test_kernel_example():
    phi = GradedMap.from_coeffs([1, 1, 1], [4], [[X3, Y3, XY2]])
    k = kernel_split_type(phi)
    assert k.rank == 2 and k.degree == -1
    assert k in (SplitType([0, -1]), SplitType([1, -2]))
    assert kernel_split_type(GradedMap.identity([0, 0])) == SplitType()


def _cubes_dependent(g, field):
    """Oracle for a twist-(-1) kernel section: a constant relation among g_i^3."""
    cubes = [gi * gi * gi for gi in g]
    cols = [list(c.coeffs) if not c.is_zero() else [field.zero] * 4 for c in cubes]
    return rref(ExactMatrix.from_columns(cols, field, rows=4)).rank < 3


def test_F5_search_finds_special_kernel():
    P = HomPoly.fermat(3, 4, F5)
    found = None
    for cs in itertools.product(range(5), repeat=6):
        g = [BinaryForm(cs[2 * i:2 * i + 2], F5) for i in range(3)]
        if any(x.is_zero() or x.degree != 1 for x in g):
            continue
        rep = jacobian_analysis(P, g, 1)
        if rep.surjective and rep.kernel == SplitType([1, -2]):
            found = g
            break
    assert found is not None
    assert _cubes_dependent(found, F5)
    assert jacobian_analysis(P, found, 1).h0_kernel == 2


def test_surjectivity_examples():
    assert is_fiberwise_surjective(GradedMap.from_coeffs([-1, -1], [0], [[[1, 0], [0, 1]]]))
    assert not is_fiberwise_surjective(GradedMap.from_coeffs([-2, -2], [0], [[[1, 0, 0], [0, 1, 0]]]))
    # every entry divisible by y: common zero at (1:0)
    assert not is_fiberwise_surjective(GradedMap.from_coeffs([1, 1, 1], [4], [[XY2, Y3, [0, 1, 0, 0]]]))


def _sympy_common_root(entries, p):
    """Oracle: common zero on P^1 over the algebraic closure of F_p."""
    t = sympy.symbols("t")
    # coefficient i sits on x^(D-i) y^i, so at y = 1 the list is t-descending
    polys = [sympy.Poly([int(c) for c in e.coeffs], t, modulus=p) for e in entries if not e.is_zero()]
    # the point (1:0) is outside the y = 1 chart: value there is the x^D coefficient
    if all(e.coeffs[0] == 0 for e in entries if not e.is_zero()):
        return True
    g = polys[0]
    for q in polys[1:]:
        g = sympy.gcd(g, q)
    return g.degree() > 0


def test_surjectivity_against_root_oracle():
    P = HomPoly.fermat(3, 4, F7)
    rng = SplitMix64(77)
    seen = set()
    for _ in range(150):
        g = [random_form(rng, 1, F7) for _ in range(3)]
        if all(x.is_zero() for x in g):
            continue
        phi = derivative_map(P, g, 1)
        sur = is_fiberwise_surjective(phi)
        assert sur == (not _sympy_common_root(phi.entries[0], 7))
        seen.add(sur)
    assert seen == {True, False}


def test_modify_examples():
    full = FiberSubspace((1, 0), [(1, 0), (0, 1)], 2)
    assert modify([0, 0], full) == SplitType([0, 0])
    assert modify([0, 0], FiberSubspace((1, 0), [(1, 0)], 2)) == SplitType([0, -1])
    assert modify([0], FiberSubspace((1, 0), [], 1)) == SplitType([-1])
    assert modify([1, 1, 1], FiberSubspace((1, 0), [(1, 0, 0), (0, 1, 0)], 3)) == SplitType([1, 1, 0])


def test_modify_h0_counts():
    K = FiberSubspace((1, 0), [(1, 0)], 2)
    assert modified_h0([0, 0], K, 0) == 1 and modified_h0([0, 0], K, 1) == 3


@given(st.lists(st.integers(-2, 3), min_size=1, max_size=3), st.data())
def test_modify_degree_drop_and_h0(E, data):
    E = SplitType(E)
    r = E.rank
    k = data.draw(st.integers(0, r))
    vecs = data.draw(st.lists(st.lists(st.integers(-2, 2), min_size=r, max_size=r), min_size=k, max_size=k))
    basis = [v for v in vecs]
    if basis and rref(ExactMatrix.from_rows(basis)).rank < len(basis):
        return
    point = data.draw(st.sampled_from([(1, 0), (0, 1), (1, 1), (2, -1)]))
    K = FiberSubspace(point, basis, r)
    Ep = modify(E, K)
    assert Ep.degree == E.degree - K.codim
    for m in range(-4, 4):
        assert h0_twist(Ep, m) <= h0_twist(E, m)


def test_jacobian_examples():
    P = HomPoly.fermat(3, 4)
    x, y = BinaryForm([1, 0]), BinaryForm([0, 1])
    rep = jacobian_analysis(P, [x, y, x + y], 1)
    assert rep.hom_dim == 12 and rep.surjective
    assert rep.kernel == SplitType([0, -1]) and rep.h0_kernel == 1 and rep.generic
    one = jacobian_analysis(HomPoly(1, {(1,): 1}), [x], 1)
    assert one.kernel == SplitType() and one.surjective


def test_jacobian_rejects_bad_input():
    x = BinaryForm([1, 0])
    with pytest.raises(ValueError):
        jacobian_analysis(HomPoly(2, {(2, 0): 1, (1, 0): 1}), [x, x], 1)
    with pytest.raises(ValueError):
        jacobian_analysis(HomPoly.fermat(2, 3), [x, BinaryForm([1, 0, 0])])


@pytest.mark.parametrize("field", [QQ, F101], ids=["Q", "F101"])
def test_kernel_invariants_on_samples(field):
    P = HomPoly.fermat(3, 4, field)
    rng = SplitMix64(3)
    for _ in range(40):
        g = [random_form(rng, 1, field) for _ in range(3)]
        if all(x.is_zero() for x in g):
            continue
        phi = derivative_map(P, g, 1)
        if not is_fiberwise_surjective(phi):
            continue
        k = kernel_split_type(phi)
        assert k.rank == 2 and k.degree == 3 * 1 - 4
        for m in range(-3, 4):
            assert h0_twist(k, m) == graded_kernel_dim(phi, m)


def test_sample_experiment_determinism():
    a = sample_experiment(3, 1, 4, F101, 60, seed=9)
    b = sample_experiment(3, 1, 4, F101, 60, seed=9)
    assert a.table == b.table and a.to_json() == b.to_json()
    assert sample_experiment(3, 1, 4, F101, 0).table == []


def test_sample_experiment_redraw_fills_quota():
    plain = sample_experiment(3, 1, 4, QQ, 200, seed=0, bound=1)
    assert plain.rejected > 0 and plain.accepted + plain.rejected == 200
    full = sample_experiment(3, 1, 4, QQ, 200, seed=0, bound=1, redraw=True)
    assert full.accepted == 200 and full.trials == 200 + full.rejected
    assert sum(c for _, c in full.table) == 200


def test_graded_map_json_roundtrip():
    phi = GradedMap.from_coeffs([1, 1, 1], [4], [[X3, Y3, XY2]], F7)
    assert GradedMap.from_json(phi.to_json(), F7) == phi
