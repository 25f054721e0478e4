import math
import random
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import BlobFormatError, PreconditionError, StructureUsageError
from core.structures.bad_tuples import NEG_INF, POS_INF, BadTupleIndex, ExtendedRational, box_is_bad, midpoints
from core.structures.counters import OpCounter
from core.structures.failure_oracle import FailureMode, FailureOracle, OracleState, RecomputeOracle
from core.structures.path_tables import RecomputePathTables, TreePathTables
from core.structures.string_store import LiteralStringStore, StringStore

PATH_EDGES = [(0, 1), (1, 2), (2, 3)]


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=10)) if pairs else []
    return n, edges


@st.composite
def forests(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    edges = []
    for v in range(1, n):
        parent = draw(st.integers(-1, v - 1))
        if parent >= 0:
            edges.append((parent, v))
    return n, edges


def random_graph(rng, max_n=7):
    n = rng.randint(1, max_n)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return n, rng.sample(pairs, rng.randint(0, min(10, len(pairs))))


def random_forest(rng, max_n=6):
    n = rng.randint(1, max_n)
    parents = [rng.randint(-1, v - 1) for v in range(1, n)]
    return n, [(p, v) for v, p in enumerate(parents, start=1) if p >= 0]


def grid_points(coords):
    return [(Fraction(x), Fraction(y)) for x, y in coords]


def check_every_tuple(first, second):
    """Compare the stored tuples with the direct box test over the whole extended pool."""
    index = BadTupleIndex.build(first, second)
    px, py = len(index.pool_x) + 2, len(index.pool_y) + 2
    stored = set(index.tuples)
    for x1, x2 in combinations(range(px), 2):
        for y1, y2 in combinations(range(py), 2):
            x_range = (index.extended_x(x1), index.extended_x(x2))
            y_range = (index.extended_y(y1), index.extended_y(y2))
            assert ((x1, x2, y1, y2) in stored) == box_is_bad(first, second, x_range, y_range), (
                first,
                second,
                (x1, x2, y1, y2),
            )
    return index


class TestOpCounter:
    def test_calls_exclude_steps(self):
        counter = OpCounter()
        counter.tick("query", 2)
        counter.tick("update")
        counter.step(10)
        assert counter.calls() == 3
        assert counter.calls(["query"]) == 2
        assert counter.steps == 10
        assert counter.as_dict() == {"query": 2, "steps": 10, "update": 1}
        counter.reset()
        assert counter["query"] == 0


class TestFailureOracle:
    def test_edge_failure_splits_a_path(self):
        oracle = FailureOracle(4, PATH_EDGES, FailureMode.EDGE, d_max=1)
        oracle.update([1])
        assert oracle.query(0, 1)
        assert not oracle.query(0, 3)
        assert oracle.query(2, 3)

    def test_vertex_failure(self):
        oracle = FailureOracle(4, PATH_EDGES, FailureMode.VERTEX, d_max=2)
        oracle.update([1])
        assert not oracle.query(0, 2)
        assert oracle.query(2, 3)
        with pytest.raises(StructureUsageError, match="vertex 1 is in the failure set"):
            oracle.query(1, 2)

    def test_untouched_components_keep_their_answer(self):
        oracle = FailureOracle(5, [(0, 1), (2, 3), (3, 4)], FailureMode.VERTEX, d_max=1)
        assert oracle.component_count == 2
        oracle.update([0])
        assert oracle.query(2, 4)
        assert not oracle.query(1, 2)

    def test_empty_failure_set(self):
        oracle = FailureOracle(4, PATH_EDGES, FailureMode.EDGE, d_max=0)
        oracle.update([])
        assert oracle.query(0, 3)

    def test_usage_errors(self):
        oracle = FailureOracle(4, PATH_EDGES, FailureMode.EDGE, d_max=1)
        with pytest.raises(StructureUsageError, match="query before update"):
            oracle.query(0, 1)
        with pytest.raises(StructureUsageError, match="capacity d_max=1"):
            oracle.update([0, 1])
        with pytest.raises(StructureUsageError, match="unknown edge 3"):
            oracle.update([3])
        oracle.update([0])
        with pytest.raises(StructureUsageError, match="single update"):
            oracle.update([1])
        with pytest.raises(StructureUsageError, match="unknown vertex 7"):
            oracle.query(0, 7)

    def test_fresh_copy_resets_state_and_counters(self):
        oracle = FailureOracle(4, PATH_EDGES, FailureMode.EDGE, d_max=1)
        oracle.update([2])
        oracle.query(0, 3)
        assert oracle.counter["query"] == 1
        clone = oracle.fresh_copy()
        assert clone.state is OracleState.FRESH
        assert clone.counter.calls() == 0
        clone.update([0])
        assert not clone.query(0, 1)

    def test_blob_round_trip(self):
        oracle = FailureOracle(4, PATH_EDGES, FailureMode.VERTEX, d_max=2)
        restored = FailureOracle.from_bytes(oracle.to_bytes())
        assert restored.labels == oracle.labels
        assert (restored.mode, restored.d_max) == (FailureMode.VERTEX, 2)

    def test_blob_errors(self):
        data = FailureOracle(2, [(0, 1)], FailureMode.EDGE, d_max=1).to_bytes()
        with pytest.raises(BlobFormatError, match="not a compact-ilp blob"):
            FailureOracle.from_bytes(b"XXXX" + data[4:])
        with pytest.raises(BlobFormatError, match="truncated"):
            FailureOracle.from_bytes(data[:-3])
        with pytest.raises(BlobFormatError, match="expected a 'failure-oracle' blob"):
            FailureOracle.from_bytes(StringStore("s").to_bytes())

    @given(graphs(), st.sampled_from(list(FailureMode)), st.data())
    @settings(max_examples=150, deadline=None)
    def test_agrees_with_recomputation(self, graph, mode, data):
        n, edges = graph
        universe = len(edges) if mode is FailureMode.EDGE else n
        failures = data.draw(st.sets(st.integers(0, max(universe - 1, 0)), max_size=3)) if universe else set()
        oracle = FailureOracle(n, edges, mode, d_max=3)
        twin = RecomputeOracle(n, edges, mode, d_max=3)
        oracle.update(failures)
        twin.update(failures)
        alive = [v for v in range(n) if mode is FailureMode.EDGE or v not in failures]
        for u, v in product(alive, repeat=2):
            assert oracle.query(u, v) == twin.query(u, v), (u, v)


class TestStringStore:
    def test_split_and_concat(self):
        store = StringStore("test")
        h = store.load([1, 2, 3, 4, 5])
        head, tail = store.split(h, 2)
        assert store.materialize(head) == (1, 2)
        assert store.materialize(tail) == (3, 4, 5)
        assert store.materialize(h) == (1, 2, 3, 4, 5)
        assert store.equal(store.concat(head, tail), h)

    def test_equality(self):
        store = StringStore("test")
        a = store.load([7, 7, 0])
        b = store.concat(store.singleton(7), store.load([7, 0]))
        c = store.load([7, 0, 7])
        assert store.equal(a, b)
        assert not store.equal(a, c)
        assert not store.equal(a, store.load([7, 7]))

    def test_usage_errors(self):
        store = StringStore("test")
        h = store.load([1, 2, 3])
        with pytest.raises(StructureUsageError, match=r"outside \[1, 2\]"):
            store.split(h, 0)
        with pytest.raises(StructureUsageError):
            store.split(h, 3)
        with pytest.raises(StructureUsageError, match="non-negative"):
            store.singleton(-1)
        with pytest.raises(StructureUsageError, match="unknown string handle"):
            store.length(99)
        with pytest.raises(StructureUsageError, match="non-empty"):
            store.load([])

    def test_height_stays_logarithmic(self):
        store = StringStore("test")
        h = store.load(range(1000))
        for _ in range(5):
            head, tail = store.split(h, 333)
            h = store.concat(tail, head)
        assert store.length(h) == 1000
        assert store.height(h) <= 2 * math.ceil(math.log2(1000)) + 2

    def test_counter_tracks_public_operations(self):
        store = StringStore("test")
        a, b = store.singleton(1), store.singleton(2)
        store.equal(a, b)
        assert store.counter.calls() == 3
        assert store.counter["equal"] == 1

    def test_seed_setting(self, settings):
        settings.COMPACT_ILP_STRING_SEED = "from-settings"
        assert StringStore().seed == "from-settings"

    def test_fork_shares_existing_handles(self):
        store = StringStore("test")
        h = store.load([4, 5, 6])
        fork = store.fork()
        fork.split(h, 1)
        assert len(store) == len(fork) - 2
        assert fork.materialize(h) == (4, 5, 6)
        assert fork.counter.calls() == 1

    def test_blob_round_trip(self):
        store = StringStore("test")
        h = store.load([3, 1, 4, 1, 5])
        store.split(h, 3)
        restored = StringStore.from_bytes(store.to_bytes())
        assert restored.seed == "test"
        assert [restored.materialize(i) for i in range(len(restored))] == [
            store.materialize(i) for i in range(len(store))
        ]
        assert restored.counter.calls() == 0

    @given(st.data())
    @settings(max_examples=100, deadline=None)
    def test_agrees_with_literal_strings(self, data):
        store, twin = StringStore("twin"), LiteralStringStore()
        handles = []
        for _ in range(data.draw(st.integers(1, 30))):
            op = data.draw(st.sampled_from(["singleton", "concat", "split", "equal"]))
            if op == "singleton" or not handles:
                symbol = data.draw(st.integers(0, 2))
                h = store.singleton(symbol)
                assert h == twin.singleton(symbol)
                handles.append(h)
            elif op == "concat":
                a, b = data.draw(st.sampled_from(handles)), data.draw(st.sampled_from(handles))
                assert store.concat(a, b) == twin.concat(a, b)
                handles.append(len(handles))
            elif op == "split":
                h = data.draw(st.sampled_from(handles))
                if twin.length(h) < 2:
                    continue
                index = data.draw(st.integers(1, twin.length(h) - 1))
                assert store.split(h, index) == twin.split(h, index)
                handles.extend((len(handles), len(handles) + 1))
            else:
                a, b = data.draw(st.sampled_from(handles)), data.draw(st.sampled_from(handles))
                assert store.equal(a, b) == twin.equal(a, b)
        for h in handles:
            assert store.materialize(h) == twin.materialize(h)
            assert store.length(h) == twin.length(h)


class TestTreePathTables:
    def test_path_lengths_and_disjointness(self):
        tables = TreePathTables.build(4, PATH_EDGES)
        assert tables.length(0, 3) == 4
        assert tables.length(3, 0) == 4
        assert tables.length(2, 2) == 1
        assert tables.disjoint(0, 1, 2, 3)
        assert not tables.disjoint(0, 2, 2, 3)
        assert tables.counter.calls() == 5

    def test_vertices_outside_the_forest(self):
        tables = TreePathTables.build(5, PATH_EDGES, vertices=[0, 1, 2, 3])
        assert tables.label(4) == -1
        with pytest.raises(StructureUsageError, match="not in one tree"):
            tables.length(0, 4)

    def test_two_trees(self):
        tables = TreePathTables.build(4, [(0, 1), (2, 3)])
        assert tables.label(0) != tables.label(2)
        assert tables.disjoint(0, 1, 2, 3)
        with pytest.raises(StructureUsageError):
            tables.length(0, 2)

    def test_cycle_is_rejected(self, triangle):
        with pytest.raises(PreconditionError, match="not a forest"):
            TreePathTables.build(3, triangle.edges)

    def test_edge_leaving_the_vertex_set(self):
        with pytest.raises(PreconditionError, match="leaves"):
            TreePathTables.build(3, [(0, 2)], vertices=[0, 1])

    def test_blob_round_trip(self):
        tables = TreePathTables.build(6, [(0, 1), (1, 2), (1, 3), (4, 5)])
        restored = TreePathTables.from_bytes(tables.to_bytes())
        assert restored.labels == tables.labels
        assert restored.length(0, 3) == 3
        assert restored.disjoint(0, 2, 3, 3)
        assert not restored.disjoint(0, 2, 3, 1)

    @given(forests(max_n=6))
    @settings(max_examples=40, deadline=None)
    def test_agrees_with_recomputation(self, forest):
        n, edges = forest
        tables = TreePathTables.build(n, edges)
        twin = RecomputePathTables(n, edges)
        same_tree = [(a, b) for a, b in product(range(n), repeat=2) if tables.label(a) == tables.label(b)]
        for a, b in same_tree:
            assert tables.length(a, b) == twin.length(a, b)
        for (a, b), (c, d) in product(same_tree, repeat=2):
            assert tables.disjoint(a, b, c, d) == twin.disjoint(a, b, c, d), (a, b, c, d)


class TestBadTupleIndex:
    FIRST = [(Fraction(0), Fraction(0))]
    SECOND = [(Fraction(2), Fraction(2))]

    def test_midpoints(self):
        assert midpoints([0, 1]) == (0, Fraction(1, 2), 1)
        assert midpoints([3, 3]) == (3,)

    def test_pools_and_positions(self):
        index = BadTupleIndex.build(self.FIRST, self.SECOND)
        assert index.pool_x == (0, 1, 2)
        assert index.position_x(NEG_INF) == 0
        assert index.position_x(ExtendedRational.of(1)) == 2
        assert index.position_y(POS_INF) == 4
        assert index.extended_x(3) == ExtendedRational.of(2)
        with pytest.raises(StructureUsageError, match="not in the pool"):
            index.position_x(ExtendedRational.of(3))

    def test_lookup(self):
        index = BadTupleIndex.build(self.FIRST, self.SECOND)
        assert index.lookup(NEG_INF, POS_INF, NEG_INF, POS_INF)
        assert not index.lookup(NEG_INF, ExtendedRational.of(1), NEG_INF, POS_INF)
        assert index.lookup(ExtendedRational.of(0), ExtendedRational.of(2), ExtendedRational.of(0), POS_INF)
        assert index.counter["lookup"] == 3

    def test_extended_order(self):
        assert NEG_INF < ExtendedRational.of(-(10**9)) < ExtendedRational.of(10**9) < POS_INF
        assert str(NEG_INF) == "-inf"

    def test_blob_round_trip(self):
        index = BadTupleIndex.build(self.FIRST, self.SECOND)
        restored = BadTupleIndex.from_bytes(index.to_bytes())
        assert restored.tuples == index.tuples
        assert restored.pool_y == index.pool_y

    @given(
        st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=3, unique=True),
        st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=3, unique=True),
    )
    @settings(max_examples=60, deadline=None)
    def test_agrees_with_direct_box_test(self, first, second):
        second = [p for p in second if p not in first]
        if not second:
            return
        first = [(Fraction(x), Fraction(y)) for x, y in first]
        second = [(Fraction(x), Fraction(y)) for x, y in second]
        check_every_tuple(first, second)


TWIN_TRIALS = 10_000


@pytest.mark.slow
class TestSeededTwinTrials:
    """Long seeded runs of every structure against its recompute twin."""

    @pytest.mark.parametrize("mode", list(FailureMode))
    def test_failure_oracle(self, mode):
        rng = random.Random(f"failure-oracle:{mode.value}")
        for _ in range(TWIN_TRIALS):
            n, edges = random_graph(rng)
            universe = len(edges) if mode is FailureMode.EDGE else n
            failures = rng.sample(range(universe), rng.randint(0, min(3, universe)))
            oracle = FailureOracle(n, edges, mode, d_max=3)
            twin = RecomputeOracle(n, edges, mode, d_max=3)
            oracle.update(failures)
            twin.update(failures)
            alive = [v for v in range(n) if mode is FailureMode.EDGE or v not in failures]
            for _ in range(3 if alive else 0):
                u, v = rng.choice(alive), rng.choice(alive)
                assert oracle.query(u, v) == twin.query(u, v), (n, edges, failures, u, v)

    def test_string_store(self):
        rng = random.Random("string-store")
        for _ in range(TWIN_TRIALS):
            store, twin = StringStore("twin"), LiteralStringStore()
            handles = []
            for _ in range(rng.randint(1, 12)):
                op = rng.choice(("singleton", "concat", "split", "equal"))
                if op == "singleton" or not handles:
                    symbol = rng.randint(0, 2)
                    assert store.singleton(symbol) == twin.singleton(symbol)
                    handles.append(len(handles))
                elif op == "concat":
                    a, b = rng.choice(handles), rng.choice(handles)
                    assert store.concat(a, b) == twin.concat(a, b)
                    handles.append(len(handles))
                elif op == "split":
                    h = rng.choice(handles)
                    if twin.length(h) < 2:
                        continue
                    index = rng.randint(1, twin.length(h) - 1)
                    assert store.split(h, index) == twin.split(h, index)
                    handles.extend((len(handles), len(handles) + 1))
                else:
                    a, b = rng.choice(handles), rng.choice(handles)
                    assert store.equal(a, b) == twin.equal(a, b)
            for h in handles:
                assert store.materialize(h) == twin.materialize(h)

    def test_path_tables(self):
        rng = random.Random("path-tables")
        for _ in range(TWIN_TRIALS):
            n, edges = random_forest(rng)
            tables = TreePathTables.build(n, edges)
            twin = RecomputePathTables(n, edges)
            a = rng.randrange(n)
            same = [v for v in range(n) if tables.label(v) == tables.label(a)]
            b, c, d = rng.choice(same), rng.choice(same), rng.choice(same)
            assert tables.length(a, b) == twin.length(a, b), (n, edges, a, b)
            assert tables.disjoint(a, b, c, d) == twin.disjoint(a, b, c, d), (n, edges, a, b, c, d)

    def test_bad_tuple_lookups(self):
        rng = random.Random("bad-tuples")
        grid = list(product(range(5), repeat=2))
        for _ in range(TWIN_TRIALS // 20):
            chosen = rng.sample(grid, rng.randint(2, 8))
            cut = rng.randint(1, len(chosen) - 1)
            first, second = grid_points(chosen[:cut]), grid_points(chosen[cut:])
            index = BadTupleIndex.build(first, second)
            px, py = len(index.pool_x) + 2, len(index.pool_y) + 2
            for _ in range(20):
                x1, x2 = sorted(rng.sample(range(px), 2))
                y1, y2 = sorted(rng.sample(range(py), 2))
                x_range = (index.extended_x(x1), index.extended_x(x2))
                y_range = (index.extended_y(y1), index.extended_y(y2))
                expected = box_is_bad(first, second, x_range, y_range)
                assert index.lookup_positions((x1, x2, y1, y2)) == expected, (first, second, x1, x2, y1, y2)

    def test_bad_tuples_exhaustive_on_small_pools(self):
        # Coordinates in 0..3 give at most 7 midpoints per axis.
        grid = list(product(range(4), repeat=2))
        for p, q in product(grid, repeat=2):
            if p != q:
                index = check_every_tuple(grid_points([p]), grid_points([q]))
                assert max(len(index.pool_x), len(index.pool_y)) <= 8
        small = list(product(range(3), repeat=2))
        for triple in combinations(small, 3):
            for mask in range(1, 7):
                first = [pt for i, pt in enumerate(triple) if mask >> i & 1]
                second = [pt for i, pt in enumerate(triple) if not mask >> i & 1]
                check_every_tuple(grid_points(first), grid_points(second))
