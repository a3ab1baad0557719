"""The named diagrams and move instances used by the verification suites.

The file ships as package data; the ``KH_CORPUS`` environment variable
points the loader at another file in the same format.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources

from .cobordism.moves import ElementaryMove, apply_move
from .diagram import DiagramError, LinkDiagram, parse_pd

__all__ = ["CorpusError", "Corpus", "MoveInstance", "corpus_path", "load_corpus", "parse_corpus"]


class CorpusError(DiagramError):
    pass


@dataclass(frozen=True)
class MoveInstance:
    name: str
    text: str
    move: ElementaryMove


@dataclass(frozen=True)
class Corpus:
    diagrams: dict
    moves: dict
    source: str = "<string>"

    def __getitem__(self, name) -> LinkDiagram:
        return self.diagrams[name]

    def names(self):
        return list(self.diagrams)

    def all_diagrams(self):
        """Named diagrams followed by both frames of every move instance."""
        out = list(self.diagrams.items())
        for name, mi in self.moves.items():
            out.append((name + ":before", mi.move.before))
            out.append((name + ":after", mi.move.after))
        return out

    def moves_of(self, prefix):
        return [mi for mi in self.moves.values() if mi.move.kind.startswith(prefix)]


def corpus_path():
    env = os.environ.get("KH_CORPUS")
    if env:
        return env
    return str(resources.files("khtoolkit").joinpath("data", "corpus.txt"))


def parse_corpus(text: str, source="<string>") -> Corpus:
    diagrams, moves = {}, {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 2)
        if len(parts) != 3 or parts[0] not in ("diagram", "move"):
            raise CorpusError("%s:%d: expected 'diagram' or 'move' entry" % (source, n))
        kind, name, rest = parts
        if name in diagrams or name in moves:
            raise CorpusError("%s:%d: duplicate name %s" % (source, n, name))
        try:
            if kind == "diagram":
                diagrams[name] = parse_pd(rest)
            else:
                pd, sep, move_text = rest.partition(":")
                if not sep:
                    raise CorpusError("%s:%d: move entries need ':'" % (source, n))
                moves[name] = MoveInstance(name, move_text.strip(),
                                           apply_move(parse_pd(pd), move_text.strip()))
        except DiagramError as exc:
            raise CorpusError("%s:%d: %s" % (source, n, exc)) from None
    return Corpus(diagrams, moves, source)


def load_corpus(path=None) -> Corpus:
    path = path or corpus_path()
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh.read(), path)
