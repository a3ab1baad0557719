import itertools
import random

import pytest
from hypothesis import given, strategies as st

from khtoolkit.cube import (CubeTooLarge, NoTransform, NotAdjacent, SignAssignment,
                            cochain_transform, edge_data, enumerate_states, standard_sign,
                            verify_sign_assignment)
from khtoolkit.diagram import parse_pd, random_braid_diagram, resolve

from conftest import HOPF


def test_enumerate_states():
    assert enumerate_states(0) == [()]
    assert sorted(enumerate_states(2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(enumerate_states(8)) == 256
    with pytest.raises(CubeTooLarge):
        enumerate_states(21)


def test_states_ordered_by_weight():
    w = [sum(v) for v in enumerate_states(4)]
    assert w == sorted(w)


@pytest.mark.parametrize("u, v, s", [
    ((1, 1, 0), (1, 1, 1), 1),
    ((1, 0), (1, 1), -1),
    ((0, 1, 1), (1, 1, 1), 1),
])
def test_standard_sign(u, v, s):
    assert standard_sign(u, v) == s


def test_not_adjacent():
    with pytest.raises(NotAdjacent):
        standard_sign((0, 0), (1, 1))
    with pytest.raises(NotAdjacent):
        standard_sign((1, 0), (0, 0))


def test_edge_kind_from_circle_counts(trefoil):
    for u, v in [((0, 0, 0), (1, 0, 0)), ((0, 1, 0), (1, 1, 0))]:
        ed = edge_data(trefoil, u, v)
        ru, rv = resolve(trefoil, u).r, resolve(trefoil, v).r
        assert ed.kind == ("merge" if rv == ru - 1 else "split")
        assert abs(ru - rv) == 1


def test_hopf_edge():
    d = parse_pd(HOPF)
    ed = edge_data(d, (0, 0), (1, 0))
    assert ed.kind == ("merge" if resolve(d, (1, 0)).r < resolve(d, (0, 0)).r else "split")


def test_sign_assignment_examples():
    assert verify_sign_assignment(SignAssignment.standard(2), 2)
    flipped = dict(SignAssignment.standard(2).table())
    flipped[((0, 0), (1, 0))] *= -1
    assert not verify_sign_assignment(SignAssignment(2, flipped), 2)
    assert not verify_sign_assignment(SignAssignment.from_function(2, lambda u, v: 1), 2)


def test_cochain_identity():
    e = SignAssignment.standard(3)
    assert set(cochain_transform(e, e).values()) == {1}


@pytest.mark.parametrize("u0", [(0, 0, 0), (1, 0, 1), (1, 1, 1)])
def test_cochain_recovers_vertex_flip(u0):
    e = SignAssignment.standard(3)
    f = cochain_transform(e, e.flipped_at(u0))
    # f is determined up to a global sign
    s = f[u0] * -1
    assert all(f[v] * s == (-1 if v == u0 else 1) for v in f)


def test_no_transform_for_broken_assignment():
    e = SignAssignment.standard(2)
    bad = SignAssignment.from_function(2, lambda u, v: 1)
    with pytest.raises(NoTransform):
        cochain_transform(e, bad)


def test_json_round_trip():
    e = SignAssignment.standard(3).flipped_at((0, 1, 0))
    back = SignAssignment.from_json(e.to_json())
    assert back.table() == e.table()


@given(st.integers(1, 6), st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1),
                                             st.integers(0, 1), st.integers(0, 1),
                                             st.integers(0, 1), st.integers(0, 1)),
                                   max_size=4))
def test_coboundary_changes_preserve_anticommutation(n, flips):
    e = SignAssignment.standard(n)
    for v in flips:
        e = e.flipped_at(v[:n])
    assert verify_sign_assignment(e, n)
    f = cochain_transform(SignAssignment.standard(n), e)
    for (u, v), s in e.table().items():
        assert s * standard_sign(u, v) == f[u] * f[v]


@given(st.integers(0, 10**6))
def test_every_edge_is_merge_or_split(seed):
    d = random_braid_diagram(random.Random(seed), 5)
    for u in itertools.product((0, 1), repeat=d.n):
        for i in range(d.n):
            if u[i] == 0:
                v = u[:i] + (1,) + u[i + 1:]
                ed = edge_data(d, u, v)
                delta = resolve(d, v).r - resolve(d, u).r
                assert delta == (-1 if ed.kind == "merge" else 1)
