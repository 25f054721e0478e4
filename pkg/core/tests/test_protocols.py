import logging
import random
from fractions import Fraction
from itertools import permutations, product

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import EnumerationBudgetError, PreconditionError, WitnessLengthError
from core.ilp.program import IntegerProgram
from core.oracles.deciders import decide_exact
from core.oracles.generators import GenSpec, generate
from core.oracles.instances import (
    DiscretizationInstance,
    LongPathInstance,
    McspInstance,
    MultiwayCutInstance,
    RWayCutInstance,
    SimpleGraph,
    SteinerInstance,
)
from core.protocols.base import Witness, audit_costs, count_width, enumerate_decide, width
from core.protocols.discretization import Separation
from core.protocols.long_path import PathItem
from core.protocols.mcsp import McspWitness
from core.protocols.registry import PROTOCOLS, get_protocol
from core.protocols.rway_cut import RWayCutWitness
from core.protocols.steiner import SteinerWitness
from core.solvers.proximity import reduce_rhs
from core.solvers.support import minimum_support_audit

logger = logging.getLogger(__name__)

PATH4 = SimpleGraph(4, ((0, 1), (1, 2), (2, 3)))
TRIANGLE = SimpleGraph(3, ((0, 1), (1, 2), (0, 2)))
STAR3 = SimpleGraph(4, ((0, 1), (0, 2), (0, 3)))
TWO_EDGES = SimpleGraph(4, ((0, 1), (2, 3)))


def pts(*coords):
    return tuple((Fraction(x), Fraction(y)) for x, y in coords)


def prepared(name, inst):
    protocol = get_protocol(name)
    pre = protocol.preprocess(inst)
    return protocol, pre, protocol.load(pre.advice)


def verdict(name, inst, structured):
    protocol, pre, state = prepared(name, inst)
    report = protocol.verify(pre.advice, protocol.encode(state, structured))
    return report


SMALL_CASES = [
    ("multiway-cut", MultiwayCutInstance(PATH4, (0, 3), 1)),
    ("multiway-cut", MultiwayCutInstance(PATH4, (0, 1), 1)),
    ("multiway-cut", MultiwayCutInstance(TRIANGLE, (0, 1), 1)),
    ("rway-cut", RWayCutInstance(PATH4, 2, 1)),
    ("rway-cut", RWayCutInstance(PATH4, 3, 1)),
    ("rway-cut", RWayCutInstance(TRIANGLE, 2, 1)),
    ("rway-cut", RWayCutInstance(TWO_EDGES, 2, 1)),
    ("mcsp", McspInstance(b"ab", b"ba", 2)),
    ("mcsp", McspInstance(b"ab", b"ba", 1)),
    ("mcsp", McspInstance(b"abab", b"baba", 2)),
    ("mcsp", McspInstance(b"abc", b"cba", 2)),
    ("long-path", LongPathInstance(PATH4, 4)),
    ("long-path", LongPathInstance(PATH4, 5)),
    ("long-path", LongPathInstance(STAR3, 3)),
    ("long-path", LongPathInstance(STAR3, 4)),
    ("steiner", SteinerInstance(PATH4, (0, 3), 3)),
    ("steiner", SteinerInstance(PATH4, (0, 3), 2)),
    ("steiner", SteinerInstance(STAR3, (1, 2), 2)),
    ("steiner", SteinerInstance(TWO_EDGES, (0, 3), 5)),
    ("discretization", DiscretizationInstance(pts((0, 0)), pts((2, 2)), 1)),
    ("discretization", DiscretizationInstance(pts((0, 0)), pts((2, 2)), 0)),
    ("discretization", DiscretizationInstance(pts((0, 0), (2, 2)), pts((2, 0), (0, 2)), 1)),
    ("discretization", DiscretizationInstance(pts((0, 0), (2, 2)), pts((2, 0), (0, 2)), 2)),
    ("ilp", IntegerProgram.build([[1, 1]], [2], "=")),
    ("ilp", IntegerProgram.build([[2]], [3], "=")),
    ("ilp", IntegerProgram.build([[1]], [-1], "=")),
    ("ilp", IntegerProgram.build([[1]], [1])),
]


class TestWitness:
    def test_widths(self):
        assert [width(x) for x in (0, 1, 2, 3, 4, 5, 17)] == [0, 0, 1, 2, 2, 3, 5]
        assert count_width(0) == 0
        assert count_width(1) == 1
        assert count_width(4) == 3

    def test_hex_parsing(self):
        assert Witness.from_hex("0f", 8) == Witness(15, 8)
        assert Witness.from_hex("0x1f", 5).bits() == "11111"
        assert Witness.from_hex("", 0) == Witness(0, 0)
        assert Witness(5, 12).to_hex() == "005"

    def test_hex_digit_count_must_match(self):
        with pytest.raises(WitnessLengthError, match="expects 2"):
            Witness.from_hex("f", 8)

    def test_bits_above_the_length(self):
        with pytest.raises(WitnessLengthError, match="beyond"):
            Witness.from_hex("3f", 5)

    def test_not_hexadecimal(self):
        with pytest.raises(WitnessLengthError, match="not hexadecimal"):
            Witness.from_hex("zz", 8)

    def test_from_bits(self):
        assert Witness.from_bits("0101") == Witness(5, 4)


class TestRegistry:
    def test_names(self):
        assert set(PROTOCOLS) == {
            "rway-cut",
            "multiway-cut",
            "mcsp",
            "long-path",
            "steiner",
            "discretization",
            "ilp",
        }

    def test_unknown(self):
        with pytest.raises(KeyError, match="unknown protocol 'nope'"):
            get_protocol("nope")


class TestVerifier:
    def test_wrong_length_is_a_usage_error(self):
        protocol, pre, state = prepared("mcsp", McspInstance(b"ab", b"ba", 2))
        with pytest.raises(WitnessLengthError, match="6-bit witness"):
            protocol.check(state, Witness(0, 5))

    def test_verification_is_repeatable(self):
        protocol, pre, state = prepared("mcsp", McspInstance(b"ab", b"ba", 2))
        witness = protocol.encode(state, McspWitness((1, 2), (1, 0)))
        first = protocol.verify(pre.advice, witness)
        second = protocol.verify(pre.advice, witness)
        assert first.accepted and second.accepted
        assert first.as_dict() == second.as_dict()

    def test_malformed_witness_is_rejected(self):
        inst = MultiwayCutInstance(SimpleGraph(3, ((0, 1), (1, 2))), (0, 2), 1)
        protocol, pre, state = prepared("multiway-cut", inst)
        report = protocol.check(state, Witness.from_bits("111"))
        assert not report.accepted
        assert report.reason == "malformed: vertex index out of range"


class TestMcsp:
    def test_swap_blocks(self):
        report = verdict("mcsp", McspInstance(b"ab", b"ba", 2), McspWitness((1, 2), (1, 0)))
        assert report.accepted
        assert report.structure_calls == {"string_store": 5}

    def test_identity_order_does_not_match(self):
        report = verdict("mcsp", McspInstance(b"ab", b"ba", 2), McspWitness((1, 2), (0, 1)))
        assert report.reason == "blocks-do-not-match"

    def test_order_must_be_a_permutation(self):
        report = verdict("mcsp", McspInstance(b"ab", b"ba", 2), McspWitness((1, 2), (0, 0)))
        assert report.reason == "malformed: block order is not a permutation"

    def test_blocks_capped_at_string_length(self):
        protocol = get_protocol("mcsp")
        inst = McspInstance(b"ab", b"ab", 5)
        assert protocol.preprocess(inst).length == protocol.length_formula(inst) == 2 * 2 + 2 * 1


class TestMultiwayCut:
    def test_cut_vertex(self):
        assert verdict("multiway-cut", MultiwayCutInstance(PATH4, (0, 3), 1), [1]).accepted

    def test_terminal_in_cut(self):
        report = verdict("multiway-cut", MultiwayCutInstance(PATH4, (0, 3), 1), [0])
        assert report.reason == "x-meets-terminals"

    def test_empty_cut(self):
        report = verdict("multiway-cut", MultiwayCutInstance(PATH4, (0, 3), 1), [])
        assert report.reason == "terminals-connected"

    def test_too_many_terminals(self):
        with pytest.raises(PreconditionError, match="terminal-reduction"):
            get_protocol("multiway-cut").preprocess(MultiwayCutInstance(PATH4, (0, 1, 3), 1))


class TestRWayCut:
    def test_isolate_a_vertex(self):
        inst = RWayCutInstance(TRIANGLE, 2, 2)
        assert verdict("rway-cut", inst, RWayCutWitness((0, 1), ((0, 1),))).accepted

    @pytest.mark.parametrize(
        "inst, witness, reason",
        [
            (RWayCutInstance(TWO_EDGES, 2, 1), RWayCutWitness((), ((0, 2),)), "i-group-spans-components"),
            (RWayCutInstance(TRIANGLE, 2, 2), RWayCutWitness((), ((0,), (1,))), "ii-groups-share-component"),
            (RWayCutInstance(TRIANGLE, 2, 2), RWayCutWitness((), ((0, 1),)), "iii-group-connected"),
            (RWayCutInstance(TRIANGLE, 2, 2), RWayCutWitness((0, 1), ()), "iv-wrong-split-count"),
        ],
    )
    def test_failed_checks(self, inst, witness, reason):
        assert verdict("rway-cut", inst, witness).reason == reason

    def test_early_reject(self):
        protocol, pre, state = prepared("rway-cut", RWayCutInstance(PATH4, 4, 1))
        assert pre.rejected == "early-reject: base components + k < r"
        report = protocol.check(state, Witness(0, pre.length))
        assert report.reason == pre.rejected
        assert report.step_count == 1


class TestLongPath:
    def test_tree_path(self):
        assert verdict("long-path", LongPathInstance(PATH4, 4), [PathItem.subpath(0, 3)]).accepted

    def test_wrong_length(self):
        report = verdict("long-path", LongPathInstance(PATH4, 4), [PathItem.subpath(0, 2)])
        assert report.reason == "i-wrong-length"

    def test_triangle_through_the_feedback_vertex(self):
        protocol, pre, state = prepared("long-path", LongPathInstance(TRIANGLE, 3))
        assert len(state.fvs) == 1 and state.slots == 3
        x = state.fvs[0]
        a, b = [v for v in range(3) if v != x]
        witness = protocol.encode(state, [PathItem.vertex(x), PathItem.subpath(a, b)])
        assert protocol.check(state, witness).accepted

    @pytest.mark.parametrize("target, shape, reason", [
        (3, "repeat", "iii-repeated-vertex"),
        (5, "overlap", "iii-subpaths-intersect"),
        (2, "loop", "ii-items-not-adjacent"),
    ])
    def test_triangle_rejections(self, target, shape, reason):
        protocol, pre, state = prepared("long-path", LongPathInstance(TRIANGLE, target))
        x = state.fvs[0]
        a, b = [v for v in range(3) if v != x]
        items = {
            "repeat": [PathItem.vertex(x), PathItem.subpath(a, a), PathItem.vertex(x)],
            "overlap": [PathItem.subpath(a, b), PathItem.vertex(x), PathItem.subpath(b, a)],
            "loop": [PathItem.vertex(x), PathItem.vertex(x)],
        }[shape]
        assert protocol.check(state, protocol.encode(state, items)).reason == reason


class TestSteiner:
    def test_direct_edge_between_terminals(self):
        assert verdict("steiner", SteinerInstance(PATH4, (0, 3), 3), SteinerWitness((), (0,))).accepted

    def test_star_through_center(self):
        inst = SteinerInstance(STAR3, (1, 2, 3), 3)
        # L = [1, 2, 3, 0]; every terminal hangs below the center.
        assert verdict("steiner", inst, SteinerWitness((0,), (3, 3, 0))).accepted
        assert verdict("steiner", inst, SteinerWitness((), (0, 0))).reason == "over-budget"

    @pytest.mark.parametrize(
        "inst, witness, reason",
        [
            (SteinerInstance(PATH4, (0, 3), 2), SteinerWitness((), (0,)), "over-budget"),
            (SteinerInstance(PATH4, (0, 3), 9), SteinerWitness((3,), (0, 0)), "y-meets-terminals"),
            (SteinerInstance(PATH4, (0, 3), 9), SteinerWitness((), (1,)), "f-not-a-tree"),
            (SteinerInstance(TWO_EDGES, (0, 3), 9), SteinerWitness((), (0,)), "unreachable-pair"),
        ],
    )
    def test_failed_checks(self, inst, witness, reason):
        assert verdict("steiner", inst, witness).reason == reason


class TestDiscretization:
    def test_single_vertical_line(self):
        inst = DiscretizationInstance(pts((0, 0)), pts((2, 2)), 1)
        report = verdict("discretization", inst, Separation((1,), ()))
        assert report.accepted
        assert report.structure_calls == {"bad_tuples": 2}

    def test_no_lines(self):
        inst = DiscretizationInstance(pts((0, 0)), pts((2, 2)), 1)
        assert verdict("discretization", inst, Separation((), ())).reason == "bad-box"


class TestIlp:
    def test_sum_of_two(self):
        protocol, pre, state = prepared("ilp", IntegerProgram.build([[1, 1]], [2], "="))
        assert pre.length == 12
        assert protocol.check(state, protocol.encode(state, {0: 2})).accepted
        assert protocol.check(state, protocol.encode(state, {0: 1})).reason == "rhs-mismatch"

    def test_empty_relaxation_is_rejected_early(self):
        _, pre, _ = prepared("ilp", IntegerProgram.build([[1]], [-1], "="))
        assert pre.rejected == "early-reject: LP relaxation is empty"

    @given(
        st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=1, max_size=2),
        st.lists(st.integers(0, 4), min_size=3, max_size=3),
    )
    @settings(max_examples=60, deadline=None)
    def test_minimum_support_solution_fits_the_layout(self, rows, x):
        p = IntegerProgram.build(rows, [sum(a * v for a, v in zip(row, x)) for row in rows], "=")
        protocol, _, state = prepared("ilp", p)
        audit = minimum_support_audit(reduce_rhs(p).program)
        assert audit.feasible
        support = {j: v for j, v in enumerate(audit.certificate) if v}
        assert len(support) <= state.support
        assert max(support.values(), default=0) <= state.radius
        assert protocol.check(state, protocol.encode(state, support)).accepted


class TestEnumeration:
    @pytest.mark.parametrize("name, inst", SMALL_CASES)
    def test_agrees_with_exact_decider(self, name, inst):
        decision = enumerate_decide(get_protocol(name), inst, max_bits=14)
        assert decision.yes == decide_exact(inst)
        if decision.yes:
            protocol, pre, state = prepared(name, inst)
            assert protocol.check(state, decision.witness).accepted
            assert decision.checked == decision.witness.value + 1

    def test_rejected_instances_check_nothing(self):
        decision = enumerate_decide(get_protocol("rway-cut"), RWayCutInstance(PATH4, 4, 1))
        assert (decision.yes, decision.checked) == (False, 0)

    def test_guard(self):
        with pytest.raises(EnumerationBudgetError, match="enumeration guard is 4"):
            enumerate_decide(get_protocol("ilp"), IntegerProgram.build([[1, 1]], [2], "="), max_bits=4)

    def test_guard_setting(self, settings):
        settings.COMPACT_ILP_WITNESS_MAX_BITS = 2
        with pytest.raises(EnumerationBudgetError):
            enumerate_decide(get_protocol("mcsp"), McspInstance(b"ab", b"ba", 2))

    @pytest.mark.slow
    def test_worker_processes_find_the_same_witness(self):
        inst = IntegerProgram.build([[1, 1]], [2], "=")
        serial = enumerate_decide(get_protocol("ilp"), inst, workers=1)
        parallel = enumerate_decide(get_protocol("ilp"), inst, workers=2)
        assert serial.witness == parallel.witness


AUDIT_CASES = [
    ("rway-cut", RWayCutInstance(TRIANGLE, 2, 2)),
    ("multiway-cut", MultiwayCutInstance(SimpleGraph(6, ((0, 4), (1, 4), (2, 5), (3, 5), (4, 5))), (0, 1, 2, 3), 2)),
    ("mcsp", McspInstance(b"ab" * 8, b"ba" * 8, 2)),
    ("long-path", LongPathInstance(TRIANGLE, 3)),
    ("steiner", SteinerInstance(STAR3, (1, 2, 3), 3)),
    ("discretization", DiscretizationInstance(pts((0, 0), (2, 2)), pts((2, 0), (0, 2)), 3)),
    ("ilp", IntegerProgram.build([[1, 1, 0], [0, 1, 1]], [3, 2], "=")),
]


class TestCostAudit:
    @pytest.mark.parametrize("name, inst", AUDIT_CASES)
    def test_formulas_hold(self, name, inst):
        report = audit_costs(get_protocol(name), inst, samples=16, seed=3)
        assert report.ell == report.formula_ell
        assert report.calls <= report.call_budget
        assert report.samples == 17

    def test_mcsp_length(self):
        report = audit_costs(get_protocol("mcsp"), McspInstance(b"ab" * 8, b"ba" * 8, 2))
        assert report.as_dict() == {
            "protocol": "mcsp",
            "n": 16,
            "k": 2,
            "ell": 12,
            "steps": report.steps,
            "calls": 5,
        }

    def test_multiway_queries_every_terminal_pair_once(self):
        name, inst = AUDIT_CASES[1]
        protocol, pre, state = prepared(name, inst)
        report = protocol.check(state, protocol.encode(state, [4, 5]))
        assert report.accepted
        # One update plus six pair queries.
        assert report.structure_calls == {"failure_oracle": 7}

    @pytest.mark.slow
    def test_mcsp_steps_grow_slowly_with_n(self):
        rng = random.Random(11)
        steps = {}
        for n in (64, 1024):
            x = bytes(rng.choice(b"ab") for _ in range(n))
            report = audit_costs(get_protocol("mcsp"), McspInstance(x, x, 4), samples=8)
            assert report.calls <= 9
            steps[n] = report.steps
        assert steps[1024] < 3 * steps[64]


GEN_MODES = ("random", "planted-yes", "planted-no")


def exhaustive_cases():
    """Seeded generator instances of the cut and Steiner families, all inside the enumeration guard."""
    cases = []
    for mode, n, k, seed in product(GEN_MODES, (4, 6, 8), (1, 2, 3), range(3)):
        spec = GenSpec(variant="multiway-cut", mode=mode, n=n, k=k, terminals=4, seed=seed)
        cases.append(("multiway-cut", generate(spec)))
    for mode, n, k, r in product(GEN_MODES, (3, 4, 5, 6), (0, 1), (2, 3)):
        cases.append(("rway-cut", generate(GenSpec(variant="rway-cut", mode=mode, n=n, k=k, r=r, seed=n))))
    for mode, n, t, budget, seed in product(GEN_MODES, (3, 5, 8), (1, 2), (1, 2, 4), range(2)):
        spec = GenSpec(variant="steiner", mode=mode, n=n, k=budget, terminals=t, seed=seed)
        cases.append(("steiner", generate(spec)))
    return cases


def labeled_trees(rng, sizes, per_size):
    for n in sizes:
        for _ in range(per_size):
            if n == 2:
                yield SimpleGraph(2, ((0, 1),))
            else:
                tree = nx.from_prufer_sequence([rng.randrange(n) for _ in range(n - 2)])
                yield SimpleGraph.from_networkx(tree)


def binary_string_cases():
    """Every pair over {a, b} up to length 3, every rearrangement up to length 5."""
    for n in range(1, 6):
        for x in product(b"ab", repeat=n):
            # Swapping the two letters keeps the answer.
            if x[0] != ord("a"):
                continue
            ys = product(b"ab", repeat=n) if n <= 3 else sorted(set(permutations(x)))
            for y in ys:
                yield bytes(x), bytes(y)


@pytest.mark.slow
class TestExhaustiveAgreement:
    """Enumeration over every witness agrees with the exact deciders."""

    MAX_BITS = 16

    def agrees(self, name, inst):
        decision = enumerate_decide(get_protocol(name), inst, max_bits=self.MAX_BITS)
        assert decision.yes == decide_exact(inst), (name, inst)
        return decision.yes

    def test_generated_graph_instances(self):
        verdicts = {}
        for name, inst in exhaustive_cases():
            verdicts.setdefault(name, set()).add(self.agrees(name, inst))
        assert verdicts == {"multiway-cut": {True, False}, "rway-cut": {True, False}, "steiner": {True, False}}

    def test_binary_strings(self):
        verdicts = set()
        for (x, y), k in product(binary_string_cases(), (1, 2, 3)):
            verdicts.add(self.agrees("mcsp", McspInstance(x, y, k)))
        assert verdicts == {True, False}

    def test_long_paths_in_trees(self):
        rng = random.Random(17)
        verdicts = set()
        for graph in labeled_trees(rng, range(2, 9), per_size=3):
            for target in range(1, graph.n + 2):
                verdicts.add(self.agrees("long-path", LongPathInstance(graph, target)))
        assert verdicts == {True, False}

    def test_four_plus_four_point_sets(self):
        rng = random.Random(23)
        grid = list(product(range(4), repeat=2))
        for _ in range(12):
            chosen = rng.sample(grid, 8)
            for k in (1, 2, 3):
                self.agrees("discretization", DiscretizationInstance(pts(*chosen[:4]), pts(*chosen[4:]), k))


def widest_witness(name, state):
    """A well-formed witness that makes the verifier spend its whole call budget."""
    if name == "multiway-cut":
        return []
    if name == "rway-cut":
        return RWayCutWitness(tuple(range(state.k)), (tuple(range(2 * state.k)),))
    if name == "long-path":
        v = next(v for v in range(state.n) if state.tables.label(v) != -1)
        return [PathItem.subpath(v, v)] * state.slots
    if name == "steiner":
        k = len(state.terminals)
        others = [v for v in range(state.n) if v not in state.terminals][: k - 1]
        return SteinerWitness(tuple(others), (0,) * (2 * k - 2))
    half = state.k // 2
    return Separation(tuple(range(half)), tuple(range(state.k - half)))


LOCALITY_CASES = [
    # name, generator sizes, sizes of n, expected call budget
    ("multiway-cut", {"k": 2, "terminals": 4}, (16, 64, 256, 1024), 1 + 6),
    ("rway-cut", {"k": 2, "r": 3}, (16, 64, 256, 1024), 1 + 6),
    ("long-path", {"k": 4}, (16, 64, 256, 1024), 3 + 3 + 2),
    ("steiner", {"k": 4, "terminals": 3}, (16, 64, 256, 1024), 4),
    # The bad-tuple table grows with the fourth power of the pool, so n stays small.
    ("discretization", {"k": 2}, (4, 8, 12), 4),
]


@pytest.mark.slow
class TestLocality:
    @pytest.mark.parametrize("name, sizes, ns, budget", LOCALITY_CASES)
    def test_calls_do_not_grow_with_n(self, name, sizes, ns, budget):
        protocol = get_protocol(name)
        for n in ns:
            inst = generate(GenSpec(variant=name, mode="scaled", n=n, seed=5, **sizes))
            assert protocol.call_budget(inst) == budget
            _, _, state = prepared(name, inst)
            report = protocol.check(state, protocol.encode(state, widest_witness(name, state)))
            assert report.total_calls == budget, (n, report.structure_calls)
            rng = random.Random(n)
            for _ in range(4):
                assert protocol.check(state, protocol.sample_witness(state, rng)).total_calls <= budget
            logger.info(f"{name} n={n}: {report.total_calls} calls, {report.step_count} steps")
