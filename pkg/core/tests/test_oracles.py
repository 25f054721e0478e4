import logging
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import GuardExceededError, InstanceParseError, PreconditionError
from core.ilp.program import IntegerProgram
from core.oracles.corpus import CorpusEntry, check_corpus, check_entry, dump_manifest, load_manifest
from core.oracles.deciders import decide_exact, min_weight_cover_via_cover, separating_lines
from core.oracles.generators import GenSpec, generate
from core.oracles.instances import (
    VARIANTS,
    DiscretizationInstance,
    LongPathInstance,
    McspInstance,
    MultiwayCutInstance,
    RWayCutInstance,
    SetCoverInstance,
    SimpleGraph,
    SteinerInstance,
    WvcInstance,
)
from core.oracles.parsers import parse_instance, write_instance
from core.tests.conftest import graph_file


def parse(text: str, variant: str):
    return parse_instance(text.encode("utf-8"), variant)


def diagonal(n: int, k: int) -> DiscretizationInstance:
    points = [(i, i) for i in range(n)]
    return DiscretizationInstance(tuple(points[0::2]), tuple(points[1::2]), k)


class TestParsers:
    def test_weighted_vertex_cover(self):
        text = "c weighted path\n\np 3 2\ne 0 1\ne 2 1\nw 1 5\nl 5\n"
        inst = parse(text, "wvc")
        assert inst.graph.edges == ((0, 1), (1, 2))
        assert inst.weights == (1, 5, 1)
        assert inst.budget == 5

    def test_each_graph_variant(self):
        edges = [(0, 1), (1, 2), (2, 3)]
        rway = parse(graph_file(4, edges, "r 2", "k 1"), "rway-cut")
        assert rway == RWayCutInstance(SimpleGraph(4, tuple(edges)), 2, 1)
        multiway = parse(graph_file(4, edges, "t 3", "t 0", "k 1"), "multiway-cut")
        assert multiway.terminals == (0, 3)
        assert parse(graph_file(4, edges, "l 4"), "long-path").length == 4
        steiner = parse(graph_file(4, edges, "t 1", "t 2", "l 1"), "steiner")
        assert steiner == SteinerInstance(SimpleGraph(4, tuple(edges)), (1, 2), 1)

    def test_set_cover(self):
        inst = parse("u 3\ns 0 1\ns\ns 2 0\nl 2\n", "set-cover")
        assert inst == SetCoverInstance(3, ((0, 1), (), (0, 2)), 2)

    def test_mcsp_and_discretization(self):
        assert parse("x abab\ny baba\nk 2\n", "mcsp") == McspInstance(b"abab", b"baba", 2)
        inst = parse("pt 1 0 1/2\npt 2 3/4 -1\nk 1\n", "discretization")
        assert inst.first == ((Fraction(0), Fraction(1, 2)),)
        assert inst.second == ((Fraction(3, 4), Fraction(-1)),)

    @pytest.mark.parametrize(
        "text, variant, message, line",
        [
            ("p 3 1\ne 0 1\nq 5\nl 1\n", "wvc", "unexpected line tag 'q'", 3),
            ("p 3 1\ne 0 3\nl 1\n", "wvc", "edge endpoint 3 outside 0..2", 2),
            ("p 3 1\ne 1 1\nl 1\n", "wvc", "self-loop at vertex 1", 2),
            ("p 3 2\ne 0 1\ne 1 0\nl 1\n", "wvc", r"parallel edge \(1, 0\)", 3),
            ("p 3 1\ne 0 1\nl 1\nl 2\n", "wvc", "duplicate 'l' line", 4),
            ("p 3 1\ne 0 1\nw 4 1\nl 1\n", "wvc", "weight for unknown vertex 4", 3),
            ("p 3 1\ne 0 1\nl one\n", "wvc", "l expects an integer, got 'one'", 3),
            ("p 3 1\ne 0 1 2\nl 1\n", "wvc", "'e' line expects 2 integers, got 3", 2),
            ("u 2\ns 0 2\nl 1\n", "set-cover", "element 2 outside the universe 0..1", 2),
            ("pt 3 0 0\nk 1\n", "discretization", "'pt' line expects <1|2> <x> <y>", 1),
            ("pt 1 0 1/0\nk 1\n", "discretization", "not a rational number", 1),
            ("p 4 0\nt 7\nk 1\n", "multiway-cut", "terminal set refers to unknown vertex 7", 2),
        ],
    )
    def test_errors_carry_the_line(self, text, variant, message, line):
        with pytest.raises(InstanceParseError, match=message) as info:
            parse(text, variant)
        assert info.value.line == line
        assert str(info.value).startswith(f"line {line}: ")

    @pytest.mark.parametrize(
        "text, variant, message",
        [
            ("p 3 2\ne 0 1\nl 1\n", "wvc", "header announces 2 edges, found 1"),
            ("p 3 0\n", "wvc", "missing 'l' line"),
            ("e 0 1\nl 1\n", "long-path", "expected exactly one 'p <n> <m>' line"),
            ("x ab\nk 1\n", "mcsp", "expected exactly one 'y' line"),
            ("x ab\ny abc\nk 1\n", "mcsp", "strings differ in length"),
            ("p 3 0\nl 1\n", "matching", "unknown variant 'matching'"),
        ],
    )
    def test_errors_without_a_line(self, text, variant, message):
        with pytest.raises(InstanceParseError, match=message) as info:
            parse(text, variant)
        assert info.value.line is None

    def test_rejects_scalars_of_another_variant(self):
        with pytest.raises(InstanceParseError, match="unexpected line tag 'l'"):
            parse(graph_file(3, [(0, 1)], "r 2", "k 1", "l 3"), "rway-cut")

    def test_not_utf8(self):
        with pytest.raises(InstanceParseError, match="not UTF-8"):
            parse_instance(b"x \xff\ny a\nk 1\n", "mcsp")

    def test_weight_cap_setting(self, settings):
        settings.COMPACT_ILP_WVC_WEIGHT_CAP = 5
        text = graph_file(2, [(0, 1)], "w 0 6", "l 1")
        with pytest.raises(InstanceParseError, match="exceeds the weight cap 5"):
            parse(text, "wvc")

    def test_written_file_starts_with_the_variant(self):
        data = write_instance(LongPathInstance(SimpleGraph(2, ((0, 1),)), 2))
        assert data == b"c long-path\np 2 1\ne 0 1\nl 2\n"

    def test_rationals_are_written_exactly(self):
        inst = DiscretizationInstance(((Fraction(1, 3), 2),), ((0, Fraction(-5, 2)),), 1)
        text = write_instance(inst).decode()
        assert "pt 1 1/3 2\n" in text
        assert "pt 2 0 -5/2\n" in text

    @pytest.mark.parametrize("variant", VARIANTS)
    @pytest.mark.parametrize("mode", ["random", "planted-yes"])
    def test_generated_instances_survive_a_file(self, variant, mode):
        inst = generate(GenSpec(variant=variant, mode=mode, seed=3))
        assert parse_instance(write_instance(inst), variant) == inst


class TestDeciders:
    @pytest.mark.parametrize(
        "inst, expected",
        [
            (SetCoverInstance(3, ((0, 1), (1, 2), (2,)), 2), True),
            (SetCoverInstance(3, ((0, 1), (1, 2), (2,)), 1), False),
            (SetCoverInstance(0, (), 0), True),
            (WvcInstance(SimpleGraph(3, ((0, 1), (1, 2), (0, 2))), (1, 1, 1), 2), True),
            (WvcInstance(SimpleGraph(3, ((0, 1), (1, 2), (0, 2))), (1, 1, 1), 1), False),
            (RWayCutInstance(SimpleGraph(4, ((0, 1), (1, 2), (2, 3))), 2, 1), True),
            (RWayCutInstance(SimpleGraph(3, ((0, 1), (1, 2), (0, 2))), 2, 1), False),
            (RWayCutInstance(SimpleGraph(3, ((0, 1), (1, 2), (0, 2))), 2, 2), True),
            (MultiwayCutInstance(SimpleGraph(4, ((0, 1), (1, 2), (2, 3))), (0, 3), 1), True),
            (MultiwayCutInstance(SimpleGraph(4, ((0, 1), (1, 2), (2, 3))), (0, 3), 0), False),
            (MultiwayCutInstance(SimpleGraph(3, ((0, 1), (1, 2))), (0, 1), 2), False),
            (McspInstance(b"abab", b"baba", 2), True),
            (McspInstance(b"abab", b"baba", 1), False),
            (McspInstance(b"abc", b"abc", 1), True),
            (McspInstance(b"aab", b"abb", 3), False),
            (LongPathInstance(SimpleGraph(4, ((0, 1), (1, 2), (2, 3))), 4), True),
            (LongPathInstance(SimpleGraph(4, ((0, 1), (1, 2), (2, 3))), 5), False),
            (LongPathInstance(SimpleGraph(4, ((0, 1), (0, 2), (0, 3))), 3), True),
            (LongPathInstance(SimpleGraph(4, ((0, 1), (0, 2), (0, 3))), 4), False),
            (LongPathInstance(SimpleGraph(0), 0), True),
            (SteinerInstance(SimpleGraph(4, ((0, 1), (0, 2), (0, 3))), (1, 2, 3), 3), True),
            (SteinerInstance(SimpleGraph(4, ((0, 1), (0, 2), (0, 3))), (1, 2, 3), 2), False),
            (SteinerInstance(SimpleGraph(2), (0, 1), 5), False),
            (DiscretizationInstance(((0, 0),), ((1, 1),), 1), True),
            (DiscretizationInstance(((0, 0),), ((1, 1),), 0), False),
            (diagonal(4, 2), False),
            (diagonal(4, 3), True),
            (IntegerProgram.build([[1, 1]], [2], "="), True),
            (IntegerProgram.build([[2]], [3], "="), False),
            (IntegerProgram.build([[1, -1]], [-2]), True),
        ],
    )
    def test_examples(self, inst, expected):
        assert decide_exact(inst) is expected

    def test_guard(self):
        inst = LongPathInstance(SimpleGraph(11), 1)
        with pytest.raises(GuardExceededError, match="exact decider guard max_vertices is 10"):
            decide_exact(inst)

    def test_guard_setting(self, settings, path4):
        settings.COMPACT_ILP_DECIDER_GUARDS = {"max_vertices": 3}
        with pytest.raises(GuardExceededError, match="vertex count is 4"):
            decide_exact(LongPathInstance(path4, 2))
        # Unlisted guards keep their defaults.
        assert decide_exact(McspInstance(b"ab", b"ab", 1))

    def test_string_guard(self):
        with pytest.raises(GuardExceededError, match="max_string"):
            decide_exact(McspInstance(b"a" * 9, b"a" * 9, 2))

    def test_min_weight_cover_via_cover(self, star3):
        assert min_weight_cover_via_cover(WvcInstance(star3, (5, 1, 1, 1), 0), [0]) == 3
        assert min_weight_cover_via_cover(WvcInstance(star3, (2, 1, 1, 1), 0), [0]) == 2
        path = SimpleGraph(3, ((0, 1), (1, 2)))
        assert min_weight_cover_via_cover(WvcInstance(path, (1, 10, 1), 0), [1]) == 2
        assert min_weight_cover_via_cover(WvcInstance(SimpleGraph(2), (1, 1), 0), []) == 0

    def test_min_weight_cover_needs_a_cover(self, triangle):
        with pytest.raises(PreconditionError, match=r"\(1, 2\)"):
            min_weight_cover_via_cover(WvcInstance(triangle, (1, 1, 1), 0), [0])

    @given(
        st.integers(1, 6).flatmap(
            lambda n: st.tuples(
                st.just(n),
                st.lists(
                    st.sampled_from([(u, v) for u in range(n) for v in range(u + 1, n)] or [None]),
                    unique=True,
                ),
                st.lists(st.integers(0, 4), min_size=n, max_size=n),
            )
        )
    )
    @settings(max_examples=100, deadline=None)
    def test_cover_search_finds_the_minimum_weight(self, drawn):
        from core.modelers.vertex_cover import vc_2approx

        n, edges, weights = drawn
        graph = SimpleGraph(n, tuple(e for e in edges if e is not None))
        cover = vc_2approx(graph).vertices
        best = min_weight_cover_via_cover(WvcInstance(graph, tuple(weights), 0), cover)
        assert decide_exact(WvcInstance(graph, tuple(weights), best))
        if best > 0:
            assert not decide_exact(WvcInstance(graph, tuple(weights), best - 1))

    def test_separating_lines(self):
        assert separating_lines([Fraction(3), Fraction(1), Fraction(1), Fraction(2)]) == [
            Fraction(3, 2),
            Fraction(5, 2),
        ]
        assert separating_lines([Fraction(4)]) == []
        assert separating_lines([]) == []


class TestGenerators:
    def test_same_spec_same_file(self):
        spec = GenSpec(variant="rway-cut", mode="planted-yes", n=8, k=2, seed=11)
        assert write_instance(generate(spec)) == write_instance(generate(spec))

    def test_spec_is_validated(self):
        with pytest.raises(ValueError):
            GenSpec(variant="rway-cut", n=-1)
        with pytest.raises(ValueError):
            GenSpec(variant="rway-cut", colour="red")

    def test_planted_no_clamps_its_parameters(self):
        inst = generate(GenSpec(variant="discretization", mode="planted-no", n=4, k=9))
        assert inst.k == 2
        assert len(inst.first) + len(inst.second) == 4

    def test_scaled_long_path_keeps_a_small_core(self):
        inst = generate(GenSpec(variant="long-path", mode="scaled", n=40, k=9))
        assert inst.graph.n == 40
        assert inst.length == 4
        assert len(inst.graph.edges) == 3 + sum(min(4, 40 - s) - 1 for s in range(3, 40, 4))

    @given(
        st.sampled_from(VARIANTS),
        st.sampled_from(["planted-yes", "planted-no"]),
        st.integers(1, 6),
        st.integers(0, 3),
        st.integers(0, 10_000),
    )
    @settings(max_examples=150, deadline=None)
    def test_planted_answers_hold(self, variant, mode, n, k, seed):
        inst = generate(GenSpec(variant=variant, mode=mode, n=n, k=k, seed=seed))
        assert decide_exact(inst) is (mode == "planted-yes")


def entry(name: str, expected: str, **spec) -> CorpusEntry:
    return CorpusEntry(name=name, spec=GenSpec(**spec), expected=expected)


SMALL_CORPUS = [
    entry("cover", "yes", variant="set-cover", mode="planted-yes", n=4, k=2, sets=4, seed=1),
    entry("wvc", "no", variant="wvc", mode="planted-no", n=5, k=1, seed=1),
    entry("strings", "yes", variant="mcsp", mode="planted-yes", n=4, k=2, seed=1),
    entry("path", "no", variant="long-path", mode="planted-no", n=4, k=3, density=0.0, seed=1),
]


class TestCorpus:
    def test_small_corpus_passes(self):
        report = check_corpus(SMALL_CORPUS, max_bits=16, workers=1)
        assert report.ok
        assert report.entries == 4
        assert report.as_dict()["families"]["mcsp"] == {"passed": 1, "failed": 0, "skipped": 0}

    def test_wrong_expectation_is_reported_by_name(self, caplog):
        wrong = entry("flipped", "no", variant="mcsp", mode="planted-yes", n=4, k=2, seed=1)
        with caplog.at_level(logging.ERROR, logger="core.oracles.corpus"):
            report = check_corpus([wrong], max_bits=16, workers=1)
        assert not report.ok
        assert report.failures == ["flipped: expected no, decide_exact says yes"]
        assert report.families["mcsp"].failed == 1
        assert "flipped" in caplog.text

    def test_long_witnesses_are_skipped(self):
        outcome = check_entry(SMALL_CORPUS[2], max_bits=1)
        assert outcome.failures == []
        assert "check limit is 1" in outcome.skipped[0]

    def test_empty_manifest_passes_with_a_warning(self, write_file, caplog):
        entries = load_manifest(write_file("empty.json", "[]"))
        with caplog.at_level(logging.WARNING, logger="core.oracles.corpus"):
            report = check_corpus(entries)
        assert report.ok
        assert report.entries == 0
        assert "empty" in caplog.text

    @pytest.mark.parametrize(
        "content",
        [
            '[{"name": "x"}]',
            '{"name": "x"}',
            "not json",
            '[{"name": "x", "spec": {"variant": "knapsack"}, "expected": "yes"}]',
        ],
    )
    def test_invalid_manifest(self, write_file, content):
        with pytest.raises(InstanceParseError, match="invalid corpus manifest"):
            load_manifest(write_file("bad.json", content))

    def test_manifest_round_trip(self, write_file):
        path = write_file("corpus.json", dump_manifest(SMALL_CORPUS))
        assert load_manifest(path) == SMALL_CORPUS

    @pytest.mark.slow
    def test_default_corpus_passes(self, settings):
        entries = load_manifest(settings.COMPACT_ILP_DEFAULT_CORPUS)
        assert len(entries) == 48
        report = check_corpus(entries, workers=1)
        assert report.ok, report.failures
        assert set(report.families) == set(VARIANTS)
