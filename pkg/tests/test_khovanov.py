import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from khtoolkit.cube import SignAssignment
from khtoolkit.diagram import disjoint_union, mirror, parse_pd, random_braid_diagram, unlink
from khtoolkit.homalg.complexes import homology
from khtoolkit.khovanov import (FrobeniusV, LaurentPolynomial, build_ckh, disjoint_iso,
                                graded_euler, kauffman_jones, kh_homology, mirror_dual_iso,
                                reversed_cube)

from conftest import HOPF, LEFT_TREFOIL, RIGHT_TREFOIL
from test_diagram import circles_by_hand

TREFOIL_KH = {(0, 1): (1, ()), (0, 3): (1, ()), (2, 5): (1, ()), (3, 9): (1, ()),
              (3, 7): (0, (2,))}

braids = st.builds(lambda seed, n: random_braid_diagram(random.Random(seed), n),
                   st.integers(0, 10**6), st.integers(1, 5))


def bracket_by_hand(d):
    """Unnormalised Jones polynomial from the state sum, as {exponent: coeff}."""
    total = Counter()
    for v in itertools.product((0, 1), repeat=d.n):
        r, w = circles_by_hand(d, v), sum(v)
        # (-q)^w (q + 1/q)^r
        for k in range(r + 1):
            e = w + (r - k) - k
            total[e + d.n_plus - 2 * d.n_minus] += (-1) ** (w + d.n_minus) * _binom(r, k)
    return {e: c for e, c in total.items() if c}


def _binom(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def test_frobenius_axioms():
    assert FrobeniusV.check()
    assert FrobeniusV.delta(1) == {(1, -1): 1, (-1, 1): 1}
    assert FrobeniusV.m(1, -1) == {(-1,): 1}


def test_unknot_complex():
    c = build_ckh(parse_pd("U"))
    assert c.size == 2 and sorted(c.grades) == [(0, -1), (0, 1)]
    assert c.d.is_zero()
    assert kh_homology(parse_pd("U")).data == {(0, 1): (1, ()), (0, -1): (1, ())}


def test_trefoil_complex_rank(trefoil):
    c = build_ckh(trefoil)
    want = sum(2 ** circles_by_hand(trefoil, v) for v in itertools.product((0, 1), repeat=3))
    assert c.size == want
    assert c.d_squared_is_zero() and c.preserves_q()


def test_kink_matches_unknot():
    assert kh_homology(parse_pd("X[1,1,2,2]")) == kh_homology(parse_pd("U"))
    assert kh_homology(parse_pd("X[1,2,2,1]")) == kh_homology(parse_pd("U"))


def test_right_trefoil_homology(trefoil):
    kh = kh_homology(trefoil)
    assert kh.data == TREFOIL_KH
    # universal coefficients: each Z/2 adds an F2 class here and one degree down
    f2 = kh_homology(trefoil, "f2").ranks()
    assert f2 == {(0, 1): 1, (0, 3): 1, (2, 5): 1, (2, 7): 1, (3, 7): 1, (3, 9): 1}
    assert kh_homology(trefoil, "q").ranks() == kh.ranks()


def test_left_trefoil_is_the_dual():
    left = kh_homology(parse_pd(LEFT_TREFOIL))
    # free part reflects through the origin; torsion moves to (1 - i, -j)
    assert left.ranks() == {(-i, -j): r for (i, j), r in kh_homology(parse_pd(RIGHT_TREFOIL)).ranks().items()}
    assert left.torsion(-2, -7) == (2,)


def test_two_component_unlink():
    assert kh_homology(unlink(2)).data == {(0, 2): (1, ()), (0, 0): (2, ()), (0, -2): (1, ())}


@pytest.mark.parametrize("pd, poly", [
    ("U", {-1: 1, 1: 1}),
    (RIGHT_TREFOIL, {1: 1, 3: 1, 5: 1, 9: -1}),
])
def test_jones_examples(pd, poly):
    d = parse_pd(pd)
    assert graded_euler(d).coeffs == poly == kauffman_jones(d).coeffs
    assert bracket_by_hand(d) == poly


def test_jones_of_union_is_product():
    a, b = parse_pd(RIGHT_TREFOIL), parse_pd(HOPF)
    assert graded_euler(disjoint_union(a, b)) == graded_euler(a) * graded_euler(b)


def test_laurent_text():
    p = LaurentPolynomial({1: 1, 3: 1, 5: 1, 9: -1})
    assert str(p) == "q + q^3 + q^5 - q^9"
    assert LaurentPolynomial.parse(str(p)) == p


@given(braids)
def test_complex_is_well_formed(d):
    c = build_ckh(d)
    assert c.d_squared_is_zero() and c.preserves_q()
    assert c.size == sum(2 ** circles_by_hand(d, v)
                         for v in itertools.product((0, 1), repeat=d.n))


@given(braids)
def test_three_jones_computations_agree(d):
    assert graded_euler(d).coeffs == kauffman_jones(d).coeffs == bracket_by_hand(d)


@given(braids, st.integers(0, 10**6))
def test_sign_assignment_does_not_change_homology(d, seed):
    rng = random.Random(seed)
    e = SignAssignment.standard(d.n)
    for _ in range(3):
        e = e.flipped_at(tuple(rng.randint(0, 1) for _ in range(d.n)))
    assert kh_homology(d, "z", e) == kh_homology(d)


@given(braids)
def test_mirror_duality_on_ranks(d):
    a, b = kh_homology(d, "q"), kh_homology(mirror(d), "q")
    assert b.ranks() == {(-i, -j): r for (i, j), r in a.ranks().items()}


def test_disjoint_iso_examples(trefoil):
    f = disjoint_iso(parse_pd("U"), parse_pd("U"))
    assert f.source.size == 4 and f.matrix.to_dense() == [[int(i == j) for j in range(4)]
                                                           for i in range(4)]
    g = disjoint_iso(trefoil, parse_pd("U"))
    assert g.commutes() and not g.bidegree_violations() and g.is_isomorphism()


def _grades_kept(f):
    for j, col in f.matrix.cols.items():
        for i in col:
            assert f.target.grades[i] == f.source.grades[j]


@pytest.mark.parametrize("pd", ["U", RIGHT_TREFOIL, HOPF, "X[1,1,2,2]"])
def test_mirror_dual_iso(pd):
    d = parse_pd(pd)
    for f in (mirror_dual_iso(d), mirror_dual_iso(d, standard_target=True)):
        assert f.commutes() and f.is_isomorphism()
        _grades_kept(f)


def test_mirror_dual_unknot_swaps_labels():
    f = mirror_dual_iso(parse_pd("U"))
    assert f.source.size == 2
    for j, col in f.matrix.cols.items():
        (i, _), = col.items()
        assert f.source.basis[j][1] == tuple(-x for x in f.target.basis[i][0][1])


@pytest.mark.parametrize("pd", ["U", RIGHT_TREFOIL, HOPF])
def test_reversed_cube(pd):
    d = parse_pd(pd)
    rc, gamma = reversed_cube(d)
    assert rc.d_squared_is_zero()
    assert gamma.commutes() and gamma.is_isomorphism()
    _grades_kept(gamma)
    if d.n == 0:
        assert rc.d.is_zero() and rc.size == build_ckh(d).size


@given(braids)
def test_homology_dims_over_fields(d):
    c = build_ckh(d)
    hz, hf = homology(c, "z"), homology(c, "f2")
    for (i, j) in set(hz.data) | set(hf.data):
        two = sum(1 for t in hz.torsion(i, j) if t % 2 == 0)
        up = sum(1 for t in hz.torsion(i + 1, j) if t % 2 == 0)
        assert hf.rank(i, j) == hz.rank(i, j) + two + up
