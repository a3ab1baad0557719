"""Movies of elementary cobordisms, their maps, and the sign checks.

A movie file alternates ``D: <pd>`` and ``M: <move>`` lines, starting and
ending with a frame.  Each move is applied to the frame above it and the
result must have the shape of the frame below it.  Blank lines and lines
starting with ``#`` are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..diagram import DiagramError, LinkDiagram, parse_pd, unlink
from ..homalg.complexes import ChainMap, homology, induced_map
from ..homalg.matrix import SparseMatrix
from ..homalg.snf import det
from .maps import CobMap, ckh, elementary_map, identity_map
from .moves import (MoveError, _is_over, _strand_slots, _triangle, apply_move, birth,
                    death, r2_add, r2_remove, r3, relabel, saddle)

__all__ = [
    "FrameMismatch",
    "MovieSyntaxError",
    "NotFilteredIso",
    "Movie",
    "parse_movie",
    "movie_map",
    "torus_movie",
    "sphere_movie",
    "birth_power",
    "death_power",
    "SignCheck",
    "sign_uniqueness_check",
    "graded_automorphism",
    "extremal_ranks",
    "r3_conjugate_movie",
    "r3_conjugate_map",
    "sign_normalized",
    "agree_up_to_sign",
]


class FrameMismatch(MoveError):
    pass


class MovieSyntaxError(DiagramError):
    pass


class NotFilteredIso(ValueError):
    pass


@dataclass(frozen=True)
class Movie:
    frames: tuple
    moves: tuple

    def __post_init__(self):
        if len(self.frames) != len(self.moves) + 1:
            raise FrameMismatch("a movie with %d moves needs %d frames"
                                % (len(self.moves), len(self.moves) + 1))
        for k, m in enumerate(self.moves):
            if m.before != self.frames[k] or m.after != self.frames[k + 1]:
                raise FrameMismatch("move %d (%s) does not connect its frames" % (k, m.text))

    @classmethod
    def from_moves(cls, start: LinkDiagram, texts):
        frames, moves = [start], []
        for t in texts:
            m = apply_move(frames[-1], t)
            moves.append(m)
            frames.append(m.after)
        return cls(tuple(frames), tuple(moves))

    @classmethod
    def of(cls, moves):
        moves = tuple(moves)
        if not moves:
            raise FrameMismatch("use Movie.from_moves(d, []) for an empty movie")
        return cls((moves[0].before,) + tuple(m.after for m in moves), moves)

    @property
    def source(self):
        return self.frames[0]

    @property
    def target(self):
        return self.frames[-1]

    @property
    def euler(self):
        return sum(m.euler for m in self.moves)

    def then(self, other: "Movie") -> "Movie":
        if self.target != other.source:
            raise FrameMismatch("movies do not compose")
        return Movie(self.frames + other.frames[1:], self.moves + other.moves)

    def to_text(self):
        lines = ["D: " + self.frames[0].to_pd()]
        for m, f in zip(self.moves, self.frames[1:]):
            lines.append("M: " + m.text)
            lines.append("D: " + f.to_pd())
        return "\n".join(lines) + "\n"


def parse_movie(text: str) -> Movie:
    """Read the line format; frames are checked with ``same_shape``."""
    items = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tag, _, body = line.partition(":")
        if tag not in ("D", "M") or not _:
            raise MovieSyntaxError("line %d: expected 'D:' or 'M:'" % n)
        items.append((n, tag, body.strip()))
    if not items or items[0][1] != "D" or items[-1][1] != "D":
        raise MovieSyntaxError("a movie starts and ends with a D: line")
    for k, (n, tag, _) in enumerate(items):
        if tag != ("D" if k % 2 == 0 else "M"):
            raise MovieSyntaxError("line %d: D: and M: lines must alternate" % n)
    frames = [parse_pd(items[0][2])]
    moves = []
    for k in range(1, len(items), 2):
        n, _, move_text = items[k]
        stated = parse_pd(items[k + 1][2])
        m = apply_move(frames[-1], move_text)
        if not m.after.same_shape(stated):
            raise FrameMismatch("line %d: %s gives %s, the movie says %s"
                                % (n, move_text, m.after, stated))
        moves.append(m)
        frames.append(m.after)
    return Movie(tuple(frames), tuple(moves))


def movie_map(mv: Movie, homotopy=False) -> CobMap:
    """Composite of the elementary maps, checked exactly at the end."""
    cm = identity_map(mv.source)
    for m in mv.moves:
        cm = cm.then(elementary_map(m, homotopy))
    cm.check()
    if cm.declared != (0, mv.euler):
        raise AssertionError("q-shift bookkeeping disagrees with the Euler characteristic")
    return cm


def torus_movie(d: LinkDiagram | None = None) -> Movie:
    """Birth, split, merge, death next to ``d`` (empty by default)."""
    d = d if d is not None else LinkDiagram()
    b = birth(d)
    new = b.after.loops[-1]
    s1 = apply_move(b.after, "saddle %d %d" % (new, new))
    other = s1.after.loops[-1]
    s2 = apply_move(s1.after, "saddle %d %d" % (new, other))
    dth = death(s2.after, s2.after.loops.index(new))
    return Movie.of([b, s1, s2, dth])


def sphere_movie(d: LinkDiagram | None = None) -> Movie:
    d = d if d is not None else LinkDiagram()
    b = birth(d)
    return Movie.of([b, death(b.after, len(b.after.loops) - 1)])


def birth_power(l: int) -> CobMap:
    """``l`` births from the empty diagram: 1 -> v+ ^ l."""
    return movie_map(Movie.from_moves(LinkDiagram(), ["birth"] * l))


def death_power(l: int) -> CobMap:
    """``l`` deaths down to the empty diagram: picks the coefficient of v- ^ l."""
    return movie_map(Movie.from_moves(unlink(l), ["death 0"] * l))


# ---------------------------------------------------------------------------
# extremal components of unlinks and sign uniqueness


def extremal_ranks(l: int):
    """Ranks and torsion of Kh(U_l) at q = l and q = -l."""
    kh = homology(ckh(unlink(l)), "z")
    return {q: (kh.rank(0, q), kh.torsion(0, q)) for q in (l, -l)}


def _as_matrix(f, c):
    m = f.matrix if isinstance(f, ChainMap) else f
    if m.shape != (c.size, c.size):
        raise NotFilteredIso("map has shape %s on a complex of rank %d" % (m.shape, c.size))
    return m


def _check_filtered_iso(m: SparseMatrix, c):
    """Nondecreasing in q with unimodular diagonal blocks."""
    qs = [g[1] for g in c.grades]
    for j, col in m.cols.items():
        for i in col:
            if qs[i] < qs[j]:
                raise NotFilteredIso("entry (%d, %d) lowers the q-level" % (i, j))
    for q in sorted(set(qs)):
        idx = [k for k in range(c.size) if qs[k] == q]
        if det(m.submatrix(idx, idx).to_dense()) not in (1, -1):
            raise NotFilteredIso("block at q = %d is not invertible over Z" % q)


@dataclass(frozen=True)
class SignCheck:
    ok: bool
    birth_sign: int
    death_sign: int

    def __bool__(self):
        return self.ok


def _ratio(u, v):
    """``s`` in {1, -1} with ``u == s v`` (both nonzero), else 0."""
    if u == v and any(u):
        return 1
    if u == [-x for x in v] and any(u):
        return -1
    return 0


def sign_uniqueness_check(l: int, f, g) -> SignCheck:
    """Compare ``f B`` with ``g B`` and ``D f`` with ``D g`` for B = birth^l, D = death^l.

    ``f`` and ``g`` act on CKh(U_l), which has zero differential and so is
    its own homology; they may be chain maps or bare matrices.  Both must
    be q-filtered isomorphisms.  The composites land in (or read off) the
    rank-one extremal groups at q = +l and q = -l, so they agree up to a
    sign, which is reported.
    """
    c = ckh(unlink(l))
    mf, mg = _as_matrix(f, c), _as_matrix(g, c)
    _check_filtered_iso(mf, c)
    _check_filtered_iso(mg, c)
    B = birth_power(l).matrix
    D = death_power(l).matrix
    if B.shape[0] != c.size or D.shape[1] != c.size:
        raise AssertionError("birth/death composites do not meet CKh(U_l)")
    col = lambda m: [m[i, 0] for i in range(m.nrows)]
    row = lambda m: [m[0, j] for j in range(m.ncols)]
    sb = _ratio(col(mf @ B), col(mg @ B))
    sd = _ratio(row(D @ mf), row(D @ mg))
    return SignCheck(bool(sb and sd), sb, sd)


def graded_automorphism(l: int, signs: dict) -> SparseMatrix:
    """Diagonal automorphism of CKh(U_l) scaling each q-level by ``signs[q]``."""
    c = ckh(unlink(l))
    return SparseMatrix.diagonal([signs.get(g[1], 1) for g in c.grades])



# ---------------------------------------------------------------------------
# R3 through births, R2 fingers and saddles


def _slot_map(a, b):
    """Arc bijection a -> b matching crossings slot by slot, or None."""
    mp = {}
    for x, y in zip(a.crossings, b.crossings):
        for p, q in zip(x.arcs, y.arcs):
            if mp.setdefault(p, q) != q:
                return None
    for p, q in zip(a.loops, b.loops):
        if mp.setdefault(p, q) != q:
            return None
    if len(set(mp.values())) != len(mp):
        return None
    return mp


def r3_conjugate_movie(move, over="ooo") -> Movie:
    """A movie from ``move.before`` to ``move.after`` around the R3 move.

    Three circles are born, each is crossed by a finger of the strand
    entering the triangle (R2), the R3 move is made on the enlarged
    diagram, each circle is merged back into its strand by a saddle, and
    the three bigons are removed (R2 inverse).  A final relabeling lines
    the arcs up with the direct move.
    """
    if move.kind != "r3":
        raise MoveError("expected an R3 move")
    d, cs = move.before, move.args
    sides = _triangle(d, cs)
    ins = []
    for s in sides:
        ci, slot = d.tail(s)
        x = d.crossings[ci]
        ins.append(x.arcs[_strand_slots(x, _is_over(x, slot))[0]])
    moves, cur = [], d
    loops = []
    for _ in range(3):
        moves.append(birth(cur))
        cur = moves[-1].after
        loops.append(cur.loops[-1])
    fingers = []
    for e, f, o in zip(ins, loops, over):
        top = cur.max_arc
        moves.append(r2_add(cur, e, f, o))
        cur = moves[-1].after
        fingers.append((e, top + 1, top + 2, top + 3, f))  # e, em, e_out, fm, f
    moves.append(r3(cur, *cs))
    cur = moves[-1].after
    for e, em, e_out, fm, f in fingers:
        for a in (e, e_out):
            for b in (f, fm):
                try:
                    m = saddle(cur, a, b)
                except MoveError:
                    continue
                break
            else:
                continue
            break
        else:
            raise MoveError("no coherent band joins the circle to its strand")
        moves.append(m)
        cur = m.after
    for e, em, e_out, fm, f in reversed(fingers):
        pair = [i for i, x in enumerate(cur.crossings) if em in x.arcs]
        moves.append(r2_remove(cur, *pair))
        cur = moves[-1].after
    mp = _slot_map(cur, move.after)
    if mp is None:
        raise FrameMismatch("conjugated R3 does not end at the direct R3 frame")
    if any(a != b for a, b in mp.items()):
        moves.append(relabel(cur, {a: b for a, b in mp.items() if a != b}))
    mv = Movie.of(moves)
    if mv.target != move.after:
        raise FrameMismatch("conjugated R3 does not end at the direct R3 frame")
    return mv


def r3_conjugate_map(move, over="ooo") -> CobMap:
    return movie_map(r3_conjugate_movie(move, over))


def sign_normalized(maps: dict):
    """Scale a per-bigrade family so its first nonzero entry is positive."""
    for key in sorted(maps):
        for row in maps[key]:
            for v in row:
                if v:
                    s = 1 if v > 0 else -1
                    return {k: [[s * x for x in r] for r in m] for k, m in maps.items()}
    return dict(maps)


def agree_up_to_sign(f, g, field="q"):
    """Do two chain maps with the same ends induce the same map up to sign?"""
    a = sign_normalized(induced_map(f, field))
    b = sign_normalized(induced_map(g, field))
    keys = set(a) | set(b)
    zero = lambda m: not any(v for r in m for v in r)
    return all(a.get(k) == b.get(k) or (zero(a.get(k, [])) and zero(b.get(k, [])))
               for k in keys)
