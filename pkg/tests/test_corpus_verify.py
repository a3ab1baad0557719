import pytest

from khtoolkit.corpus import CorpusError, load_corpus, parse_corpus
from khtoolkit.verify import Options, UnknownSuite, checks_for, report, run_suite

REQUIRED = ["unknot-0", "unknot-1a", "hopf-pos", "hopf-neg", "trefoil-left", "trefoil-right",
            "trefoil-left-4", "trefoil-right-4", "figure-eight", "5_1", "5_2",
            "U_1", "U_2", "U_3", "U_4", "U_5"]


def test_shipped_corpus_contents(corpus):
    for name in REQUIRED:
        assert name in corpus.diagrams
    kinds = {mi.move.kind for mi in corpus.moves.values()}
    assert {"r1+", "r1-", "r2+", "r2-", "r3"} <= kinds


def test_corpus_knot_types(corpus):
    from khtoolkit.khovanov import kh_homology
    for a, b in [("trefoil-right", "trefoil-right-4"), ("trefoil-left", "trefoil-left-4")]:
        assert kh_homology(corpus[a]) == kh_homology(corpus[b])
    assert kh_homology(corpus["unknot-1a"]) == kh_homology(corpus["unknot-0"])


def test_env_override(tmp_path, monkeypatch):
    p = tmp_path / "c.txt"
    p.write_text("diagram only U\n")
    monkeypatch.setenv("KH_CORPUS", str(p))
    assert load_corpus().names() == ["only"]


@pytest.mark.parametrize("text", ["diagram a X[1,2,3]", "knot a U", "diagram a U\ndiagram a U",
                                  "move m U r1+ 1 +", "move m U : twist"])
def test_corpus_errors(text):
    with pytest.raises(CorpusError):
        parse_corpus(text)


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        checks_for("nope", Options())


@pytest.mark.parametrize("suite", ["signs", "invariance", "kunneth", "mirror", "spectral"])
def test_fast_suites_pass(suite):
    results = run_suite(suite, Options(random_count=10))
    assert results and all(r.passed for r in results), [r for r in results if not r.passed]


def test_parallel_run_matches_serial():
    opts = Options(random_count=6, max_crossings=5)
    serial = report("dsquared", opts, run_suite("dsquared", opts))
    parallel = report("dsquared", opts, run_suite("dsquared", opts, jobs=2))
    assert serial == parallel and serial["passed"]


def test_random_diagrams_are_seeded():
    from khtoolkit.verify import _random_diagrams
    pd = lambda seed: [d.to_pd() for _, d in _random_diagrams(Options(seed=seed, random_count=8))]
    assert pd(3) == pd(3)
    assert pd(3) != pd(4)
    assert all(d.n <= 8 for _, d in _random_diagrams(Options(random_count=50)))
