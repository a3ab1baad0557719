import random

import pytest
from hypothesis import assume, given, strategies as st

from khtoolkit.cobordism import (CircleNotFree, FrameMismatch, Movie, MoveError,
                                 MovieSyntaxError, NotFilteredIso, apply_move, birth, birth_map,
                                 ckh, death, death_map, elementary_map, extremal_ranks, faces,
                                 graded_automorphism, identity_map, is_planar, movie_map,
                                 parse_movie, r1_add, r2_add, reidemeister_map, saddle,
                                 saddle_map, sign_uniqueness_check, sphere_movie, torus_movie)
from khtoolkit.diagram import parse_pd, random_braid_diagram
from khtoolkit.homalg.complexes import ChainMap, homology, induced_map, is_chain_homotopic
from khtoolkit.homalg.matrix import SparseMatrix
from khtoolkit.homalg.snf import det

braids = st.builds(lambda seed, n: random_braid_diagram(random.Random(seed), n),
                   st.integers(0, 10**6), st.integers(1, 4))


def vector(c, pairs):
    """Dense column for a combination of enhanced states ``((v, labels), coeff)``."""
    out = [0] * c.size
    for key, k in pairs:
        out[c.index[key]] += k
    return out


def image(f, key):
    out = [0] * f.target.size
    for i, v in f.matrix.cols.get(f.source.index[key], {}).items():
        out[i] = v
    return out


def induces_iso(f):
    hs, ht = homology(f.source, "q"), homology(f.target, "q")
    if hs.ranks() != ht.ranks():
        return False
    for m in induced_map(f, "q").values():
        if m and m[0] and (len(m) != len(m[0]) or det(m) == 0):
            return False
    return True


# ---------------------------------------------------------------------------
# moves


def test_birth_and_death_frames(trefoil):
    b = birth(trefoil)
    assert b.after.component_count == 2 and b.euler == 1
    d = death(b.after, 0)
    assert d.after == trefoil and d.euler == 1


def test_saddles_on_free_loops():
    split = saddle(parse_pd("U"), 1, 1)
    assert split.after.component_count == 2 and split.euler == -1
    merge = saddle(parse_pd("U;U"), 1, 2)
    assert merge.after.component_count == 1


def test_move_errors(trefoil):
    with pytest.raises(MoveError):
        apply_move(trefoil, "twist 1")
    with pytest.raises(MoveError):
        death(trefoil, 0)
    with pytest.raises(CircleNotFree):
        death_map(trefoil, 1)


def test_corpus_diagrams_are_planar(corpus):
    for name, d in corpus.all_diagrams():
        assert is_planar(d), name


# ---------------------------------------------------------------------------
# elementary maps


def test_birth_map_unit():
    f = birth_map(parse_pd("U")).map
    src, tgt = f.source, f.target
    for lab in ((1,), (-1,)):
        assert image(f, ((), lab)) == vector(tgt, [(((), lab + (1,)), 1)])
    assert src.size == 2 and tgt.size == 4


def test_death_map_counit():
    u = parse_pd("U;U")
    f = death_map(u, u.loops[-1]).map
    assert image(f, ((), (1, -1))) == vector(f.target, [(((), (1,)), 1)])
    assert image(f, ((), (1, 1))) == [0, 0]


def test_merge_and_split_tables():
    m = saddle_map(saddle(parse_pd("U;U"), 1, 2)).map
    assert image(m, ((), (1, -1))) == vector(m.target, [(((), (-1,)), 1)])
    assert image(m, ((), (-1, -1))) == [0, 0]
    s = saddle_map(saddle(parse_pd("U"), 1, 1)).map
    assert image(s, ((), (1,))) == vector(s.target, [(((), (1, -1)), 1), (((), (-1, 1)), 1)])


def test_identity_map(trefoil):
    f = identity_map(trefoil)
    f.check()
    assert f.matrix == SparseMatrix.identity(ckh(trefoil).size)


@pytest.mark.parametrize("text", ["r1+ 1 + u", "r1+ 1 - o", "r1+ 2 + o", "r1+ 3 - u"])
def test_r1_maps_on_trefoil(trefoil, text):
    cm = reidemeister_map(apply_move(trefoil, text))
    cm.check()
    assert cm.declared == (0, 0)
    assert induces_iso(cm.map)
    one = ChainMap.identity(cm.source)
    comp = cm.inverse @ cm.map
    assert is_chain_homotopic(comp, one, "q") or is_chain_homotopic(comp, -one, "q")


def test_r1_on_unknot_is_iso():
    cm = reidemeister_map(r1_add(parse_pd("U"), 1, 1))
    cm.check()
    assert induces_iso(cm.map)


def test_r2_on_trefoil(trefoil):
    cm = reidemeister_map(r2_add(trefoil, 1, 3, "o"))
    cm.check()
    assert induces_iso(cm.map)
    assert induces_iso(cm.inverse)


def test_corpus_moves_are_chain_maps(corpus):
    for name, mi in corpus.moves.items():
        cm = elementary_map(mi.move)
        cm.check()
        assert induces_iso(cm.map), name


@given(braids, st.integers(0, 10**6))
def test_random_saddle_birth_death_movies(d, seed):
    rng = random.Random(seed)
    texts, cur = [], d
    for _ in range(3):
        kind = rng.choice(["birth", "saddle", "death"])
        if kind == "birth":
            t = "birth"
        elif kind == "death":
            if not cur.loops:
                continue
            t = "death %d" % rng.randrange(len(cur.loops))
        else:
            face = rng.choice(faces(cur))
            t = "saddle %d %d" % (rng.choice(face)[0], rng.choice(face)[0])
        try:
            cur = apply_move(cur, t).after
        except MoveError:
            continue
        texts.append(t)
    assume(texts)
    mv = Movie.from_moves(d, texts)
    cm = movie_map(mv)
    cm.check()
    assert cm.declared == (0, mv.euler)


@given(braids, st.integers(0, 10**6))
def test_random_r1_maps(d, seed):
    rng = random.Random(seed)
    arc = rng.choice(d.arcs)
    cm = reidemeister_map(r1_add(d, arc, rng.choice((1, -1)), rng.choice("uo")))
    cm.check()
    assert induces_iso(cm.map)


# ---------------------------------------------------------------------------
# movies


def test_empty_movie_is_identity(trefoil):
    mv = Movie((trefoil,), ())
    cm = movie_map(mv)
    assert cm.matrix == SparseMatrix.identity(ckh(trefoil).size)


def test_torus_and_sphere():
    t = movie_map(torus_movie())
    assert t.declared == (0, 0) and t.matrix.to_dense() == [[2]]
    s = movie_map(sphere_movie())
    assert s.declared == (0, 2) and s.matrix.is_zero()


def test_torus_next_to_trefoil(trefoil):
    t = movie_map(torus_movie(trefoil))
    assert t.matrix == SparseMatrix.identity(ckh(trefoil).size).scale(2)


def test_movie_text_round_trip():
    mv = torus_movie()
    back = parse_movie(mv.to_text())
    assert back.moves[0].text == "birth" and len(back.moves) == 4
    assert back.euler == 0


def test_movie_parse_errors():
    with pytest.raises(FrameMismatch):
        parse_movie("D: \nM: birth\nD: U;U\n")
    with pytest.raises(MovieSyntaxError):
        parse_movie("D: U\nD: U\n")
    with pytest.raises(MovieSyntaxError):
        parse_movie("M: birth\n")


# ---------------------------------------------------------------------------
# sign uniqueness


def test_extremal_ranks():
    for l in range(1, 4):
        assert set(extremal_ranks(l).values()) == {(1, ())}


def test_sign_examples():
    one = SparseMatrix.identity(2)
    r = sign_uniqueness_check(1, one, one)
    assert r and r.birth_sign == 1
    r = sign_uniqueness_check(1, one, one.scale(-1))
    assert r and r.birth_sign == -1
    id2 = SparseMatrix.identity(4)
    twist = graded_automorphism(2, {2: 1, 0: -1})
    assert sign_uniqueness_check(2, id2, twist)


def test_non_filtered_pair_rejected():
    swap = SparseMatrix.from_dense([[0, 1], [1, 0]])
    with pytest.raises(NotFilteredIso):
        sign_uniqueness_check(1, SparseMatrix.identity(2), swap)
