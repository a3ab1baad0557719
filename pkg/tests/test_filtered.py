import math
import random

import pytest
from hypothesis import given, strategies as st

from khtoolkit.diagram import random_braid_diagram
from khtoolkit.homalg.complexes import ChainComplex, ChainMap, homology
from khtoolkit.homalg.filtered import (FilteredComplex, FiltrationViolation, UnboundedFiltration,
                                       associated_graded_homology, ord, ord_matrix,
                                       spectral_sequence)
from khtoolkit.homalg.matrix import SparseMatrix
from khtoolkit.khovanov import build_ckh


def per_generator_ord(m, src_levels, tgt_levels):
    """Apply the map to each basis vector and read off the lowest target level."""
    best = math.inf
    dense = m.to_dense()
    for x in range(m.ncols):
        image = [dense[i][x] for i in range(m.nrows)]
        hit = [tgt_levels[i] for i, v in enumerate(image) if v]
        if hit:
            best = min(best, min(hit) - src_levels[x])
    return best


def random_filtered_map(rng, n_src, n_tgt, src_levels, tgt_levels, min_order):
    m = SparseMatrix(n_tgt, n_src)
    for j in range(n_src):
        for i in range(n_tgt):
            if tgt_levels[i] - src_levels[j] >= min_order and rng.random() < 0.3:
                m.add_to(i, j, rng.choice((1, -1, 2, -3)))
    return m


def filtered_pieces(spec, rng):
    """Direct sum of filtered pieces, scrambled by a filtered change of basis.

    ``spec`` entries: ``("free", h, level)`` or ``("arrow", h, level, gap, k)``
    meaning Z -k-> Z from (h, level) to (h + 1, level + gap).  Returns the
    filtered complex and its E_infinity over F2 known by construction.
    """
    degrees, levels, entries, einf = [], [], [], {}

    def bump(key):
        einf[key] = einf.get(key, 0) + 1

    for p in spec:
        if p[0] == "free":
            _, h, lv = p
            degrees.append(h)
            levels.append(lv)
            bump((lv, h))
        else:
            _, h, lv, gap, k = p
            a = len(degrees)
            degrees += [h, h + 1]
            levels += [lv, lv + gap]
            entries.append((a + 1, a, k))
            if k % 2 == 0:
                bump((lv, h))
                bump((lv + gap, h + 1))
    n = len(degrees)
    d = SparseMatrix.from_entries(n, n, entries)
    # filtered unimodular change of basis: x_j += c * x_i only when level_i >= level_j
    p = SparseMatrix.identity(n)
    pinv = SparseMatrix.identity(n)
    for _ in range(2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j or degrees[i] != degrees[j] or levels[i] < levels[j]:
            continue
        c = rng.choice((1, -1))
        e = SparseMatrix.identity(n)
        e.add_to(i, j, c)
        einv = SparseMatrix.identity(n)
        einv.add_to(i, j, -c)
        p, pinv = e @ p, pinv @ einv
    c = ChainComplex(list(range(n)), [(h, 0) for h in degrees], p @ d @ pinv)
    return FilteredComplex(c, levels), einf


fpiece = st.one_of(
    st.tuples(st.just("free"), st.integers(-1, 1), st.integers(-2, 2)),
    st.tuples(st.just("arrow"), st.integers(-1, 1), st.integers(-2, 2), st.integers(0, 3),
              st.sampled_from([1, -1, 2])),
)


def test_ord_examples():
    c = ChainComplex(["a", "b"], [(0, 0), (0, 2)], SparseMatrix(2, 2))
    assert ord(ChainMap.zero(c, c), "q") == math.inf
    assert ord(ChainMap.identity(c), "q") == 0
    lift = ChainMap(c, c, SparseMatrix.from_entries(2, 2, [(1, 0, 1)]), (0, 2))
    assert ord(lift, "q") == 2


def test_filtration_checks():
    c = ChainComplex(["x", "y"], [(0, 0), (1, 0)], SparseMatrix.from_entries(2, 2, [(1, 0, 1)]))
    with pytest.raises(FiltrationViolation):
        FilteredComplex(c, [3, 0])
    with pytest.raises(UnboundedFiltration):
        FilteredComplex(c, [0, math.inf])
    assert FilteredComplex(c, [0, 1], declared_order=1).d_order == 1


def test_zero_differential_pages_are_constant():
    c = ChainComplex(["x", "y", "z"], [(0, 0), (1, 0), (1, 0)], SparseMatrix(3, 3))
    pages = spectral_sequence(FilteredComplex(c, [0, 5, 1]), "q")
    assert all(p.dims == pages[0].dims and p.d_is_zero() for p in pages)


def test_two_step_filtration_dies_at_gap():
    c = ChainComplex(["x", "y"], [(0, 0), (1, 0)], SparseMatrix.from_entries(2, 2, [(1, 0, 1)]))
    pages = spectral_sequence(FilteredComplex(c, [0, 2]), "q")
    assert [p.total for p in pages] == [2, 2, 2, 0]
    assert [p.d_is_zero() for p in pages[:3]] == [True, True, False]
    assert associated_graded_homology(FilteredComplex(c, [0, 2]), "q") == {}


@given(st.lists(fpiece, max_size=6), st.integers(0, 10**6))
def test_e_infinity_of_known_pieces(spec, seed):
    fc, einf = filtered_pieces(spec, random.Random(seed))
    pages = spectral_sequence(fc, "f2")
    last = {k: v for k, v in pages[-1].dims.items() if v}
    assert last == einf
    assert associated_graded_homology(fc, "f2") == einf
    assert pages[-1].total == homology(fc.complex, "f2").total_rank()


@given(st.lists(fpiece, max_size=6), st.integers(0, 10**6))
def test_page_totals_never_grow(spec, seed):
    fc, _ = filtered_pieces(spec, random.Random(seed))
    totals = [p.total for p in spectral_sequence(fc, "q")]
    assert totals == sorted(totals, reverse=True)


@given(st.integers(0, 10**6), st.sampled_from(["h", "q"]))
def test_khovanov_filtrations(seed, which):
    d = random_braid_diagram(random.Random(seed), 5)
    c = build_ckh(d)
    fc = FilteredComplex.by_grading(c, which, 1 if which == "h" else 0)
    pages = spectral_sequence(fc, "f2")
    last = {k: v for k, v in pages[-1].dims.items() if v}
    assert last == associated_graded_homology(fc, "f2")
    if which == "q":
        assert all(p.d_is_zero() for p in pages[1:])


@given(st.integers(0, 10**6))
def test_ord_matches_per_generator(seed):
    rng = random.Random(seed)
    ls = [rng.randint(-3, 3) for _ in range(rng.randint(1, 5))]
    lt = [rng.randint(-3, 3) for _ in range(rng.randint(1, 5))]
    m = random_filtered_map(rng, len(ls), len(lt), ls, lt, -6)
    assert ord_matrix(m, ls, lt) == per_generator_ord(m, ls, lt)


@given(st.integers(0, 10**6))
def test_superadditivity(seed):
    rng = random.Random(seed)
    l1, l2, l3 = ([rng.randint(-3, 3) for _ in range(rng.randint(1, 5))] for _ in range(3))
    f = random_filtered_map(rng, len(l1), len(l2), l1, l2, rng.randint(-2, 2))
    g = random_filtered_map(rng, len(l2), len(l3), l2, l3, rng.randint(-2, 2))
    assert per_generator_ord(g @ f, l1, l3) >= ord_matrix(f, l1, l2) + ord_matrix(g, l2, l3)
