"""The ``kh`` command.

Exit codes: 0 success, 1 a verification check failed, 2 bad input (PD
text, movie file, unknown suite), 3 cube bound exceeded, 4 two independent
computations disagree, 5 movie frames do not match, 6 a chain-map check
failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .cobordism.movie import FrameMismatch, movie_map, parse_movie
from .corpus import CorpusError, load_corpus
from .cube import MAX_CROSSINGS, CubeTooLarge
from .diagram import DiagramError, parse_pd
from .homalg.complexes import ChainMapViolation, homology, induced_map
from .homalg.filtered import FilteredComplex, associated_graded_homology, spectral_sequence
from .khovanov import build_ckh, graded_euler, kauffman_jones

__all__ = ["RunConfig", "main", "build_parser", "cmd_compute", "cmd_jones", "cmd_movie",
           "cmd_verify", "cmd_ss"]

SCHEMA_VERSION = 1


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    command: str
    coeff: str = "z"
    filtration: str = "h"
    field: str = "f2"
    json: bool = False
    max_crossings: int = 16
    seed: int = 0
    corpus: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if not 0 <= self.max_crossings <= MAX_CROSSINGS:
            raise CliError(2, "--max-crossings must lie in 0..%d" % MAX_CROSSINGS)


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True)


def _parse(pd):
    try:
        return parse_pd(pd)
    except DiagramError as exc:
        raise CliError(2, "cannot parse diagram: %s" % exc) from None


def _complex(d, cfg):
    if d.n > cfg.max_crossings:
        raise CliError(3, "diagram has %d crossings; the bound is %d" % (d.n, cfg.max_crossings))
    try:
        return build_ckh(d, bound=cfg.max_crossings)
    except CubeTooLarge as exc:
        raise CliError(3, str(exc)) from None


def _table(group):
    """Rows q (descending), columns h, cells like ``1`` or ``1+Z/2``."""
    if not group.data:
        return "0"
    hs = sorted({h for h, _ in group.data})
    qs = sorted({q for _, q in group.data}, reverse=True)
    cells = {}
    for (h, q), (r, t) in group.data.items():
        parts = [str(r)] if r else []
        parts += ["Z/%d" % n for n in t]
        cells[(h, q)] = "+".join(parts)
    width = max([len(c) for c in cells.values()] + [3]) + 1
    lines = ["q\\h " + "".join(str(h).rjust(width) for h in hs)]
    for q in qs:
        lines.append(str(q).rjust(3) + " " + "".join(cells.get((h, q), ".").rjust(width) for h in hs))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands


def cmd_compute(pd: str, cfg: RunConfig):
    d = _parse(pd)
    c = _complex(d, cfg)
    kh = homology(c, cfg.coeff)
    if cfg.json:
        return _dump({"schema": "kh-compute/%d" % SCHEMA_VERSION, "pd": d.to_pd(),
                      "coeff": cfg.coeff, "homology": kh.to_dict()})
    return "Kh over %s of %s\n%s\n%s" % (cfg.coeff.upper(), d, _table(kh), kh.poincare())


def cmd_jones(pd: str, cfg: RunConfig):
    d = _parse(pd)
    _complex(d, cfg)
    a, b = graded_euler(d), kauffman_jones(d)
    if a != b:
        raise CliError(4, "graded Euler characteristic %s differs from the state sum %s" % (a, b))
    if cfg.json:
        return _dump({"schema": "kh-jones/%d" % SCHEMA_VERSION, "pd": d.to_pd(),
                      "graded_euler": str(a), "kauffman_jones": str(b), "agree": True})
    return "%s\n  graded Euler characteristic: %s\n  Kauffman state sum:          %s" % (a, a, b)


def _fmt(v):
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else "%d/%d" % (v.numerator, v.denominator)


def cmd_movie(path: str, cfg: RunConfig):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(2, "cannot read %s: %s" % (path, exc)) from None
    try:
        mv = parse_movie(text)
    except FrameMismatch as exc:
        raise CliError(5, "frame mismatch: %s" % exc) from None
    except DiagramError as exc:
        raise CliError(2, "cannot parse movie: %s" % exc) from None
    for f in mv.frames:
        _complex(f, cfg)
    try:
        cm = movie_map(mv)
    except ChainMapViolation as exc:
        raise CliError(6, "chain-map check failed: %s" % exc) from None
    src = homology(cm.source, "z")
    tgt = homology(cm.target, "z")
    ind = induced_map(cm.map, "q")
    blocks = {"(%d,%d)" % k: [[_fmt(v) for v in row] for row in m]
              for k, m in sorted(ind.items()) if m and m[0]}
    if cfg.json:
        return _dump({"schema": "kh-movie/%d" % SCHEMA_VERSION, "moves": len(mv.moves),
                      "euler": mv.euler, "declared_bidegree": list(cm.declared),
                      "chain_map": True, "bidegree_ok": True,
                      "source": src.to_dict(), "target": tgt.to_dict(), "induced": blocks})
    lines = ["movie with %d moves, Euler characteristic %d" % (len(mv.moves), mv.euler),
             "declared bidegree %s: chain map ok, bidegree ok" % (cm.declared,),
             "source Kh: " + src.poincare(), "target Kh: " + tgt.poincare(),
             "induced map over Q:"]
    if not blocks:
        lines.append("  0")
    for k, m in blocks.items():
        if len(m) == 1 and len(m[0]) == 1:
            lines.append("  %s: ×%s" % (k, m[0][0]))
        else:
            lines.append("  %s: %s" % (k, m))
    return "\n".join(lines)


def cmd_verify(suite: str, cfg: RunConfig, random_count=200, max_unlink=3):
    from .verify import SUITES, Options, report, run_suite
    if suite not in SUITES:
        raise CliError(2, "unknown suite %r; choose from %s" % (suite, ", ".join(SUITES)))
    opts = Options(seed=cfg.seed, max_crossings=cfg.max_crossings, random_count=random_count,
                   max_unlink=max_unlink, corpus=cfg.corpus)
    try:
        load_corpus(cfg.corpus)
    except (OSError, CorpusError) as exc:
        raise CliError(2, "cannot load corpus: %s" % exc) from None
    results = run_suite(suite, opts, cfg.jobs)
    rep = report(suite, opts, results)
    if cfg.json:
        out = _dump(rep)
    else:
        lines = ["%s %s%s" % ("PASS" if r.passed else "FAIL", r.name,
                              (" (" + r.detail + ")") if r.detail and not r.passed else "")
                 for r in results]
        lines.append("%s: %d/%d checks passed (seed %d)"
                     % (suite, sum(r.passed for r in results), len(results), cfg.seed))
        out = "\n".join(lines)
    return out, rep["passed"]


def cmd_ss(pd: str, cfg: RunConfig):
    d = _parse(pd)
    c = _complex(d, cfg)
    order = 1 if cfg.filtration == "h" else 0
    fc = FilteredComplex.by_grading(c, cfg.filtration, order)
    pages = spectral_sequence(fc, cfg.field)
    einf = {k: v for k, v in pages[-1].dims.items() if v}
    agh = associated_graded_homology(fc, cfg.field)
    if einf != agh:
        raise CliError(4, "E_infinity differs from the associated graded homology")
    total = homology(c, cfg.field).total_rank()
    if sum(einf.values()) != total:
        raise CliError(4, "E_infinity has the wrong total dimension")
    if cfg.json:
        return _dump({"schema": "kh-ss/%d" % SCHEMA_VERSION, "pd": d.to_pd(),
                      "filtration": cfg.filtration, "field": cfg.field,
                      "pages": [p.to_dict() for p in pages], "e_infinity_total": total,
                      "matches_associated_graded": True})
    lines = ["filtration %s over %s; pages E_0..E_%d (last is E_infinity)"
             % (cfg.filtration, cfg.field.upper(), pages[-1].r)]
    for p in pages:
        dims = " ".join("%d,%d:%d" % (k + (v,)) for k, v in sorted(p.dims.items()))
        lines.append("E_%d (total %d)  %s" % (p.r, p.total, dims))
    lines.append("E_infinity matches the associated graded of H (dimension %d)" % total)
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-crossings", type=int, default=None,
                        help="cube-size bound (at most %d)" % MAX_CROSSINGS)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--corpus", default=None, help="corpus file (overrides KH_CORPUS)")

    p = argparse.ArgumentParser(prog="kh", description="Khovanov homology toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("compute", parents=[common], help="bigraded Khovanov homology")
    s.add_argument("pd")
    s.add_argument("--coeff", choices=("z", "q", "f2"), default="z")
    s = sub.add_parser("jones", parents=[common], help="Jones polynomial two ways")
    s.add_argument("pd")
    s = sub.add_parser("movie", parents=[common], help="map of a movie file")
    s.add_argument("file")
    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--random-count", type=int, default=200)
    s.add_argument("--max-unlink", type=int, default=3)
    s = sub.add_parser("ss", parents=[common], help="spectral sequence pages")
    s.add_argument("pd")
    s.add_argument("--filtration", choices=("h", "q"), default="h")
    s.add_argument("--field", choices=("q", "f2"), default="f2")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        kw = dict(command=args.command, json=args.json, seed=args.seed, corpus=args.corpus)
        if args.max_crossings is not None:
            kw["max_crossings"] = args.max_crossings
        elif args.command == "verify":
            kw["max_crossings"] = 8  # size of the random diagrams
        for name in ("coeff", "filtration", "field", "jobs"):
            if hasattr(args, name):
                kw[name] = getattr(args, name)
        cfg = RunConfig(**kw)
        ok = True
        if args.command == "compute":
            out = cmd_compute(args.pd, cfg)
        elif args.command == "jones":
            out = cmd_jones(args.pd, cfg)
        elif args.command == "movie":
            out = cmd_movie(args.file, cfg)
        elif args.command == "verify":
            out, ok = cmd_verify(args.suite, cfg, args.random_count, args.max_unlink)
        else:
            out = cmd_ss(args.pd, cfg)
    except CliError as exc:
        print("kh: %s" % exc, file=sys.stderr)
        return exc.code
    print(out)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
