import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontalg import relations as rel
from ontalg.errors import OntalgError
from ontalg.relations import BinaryRelation, Carrier, FiniteFunction, Partition, UnionFind

import oracles

ABC = Carrier(["a", "b", "c"])
ABCD = Carrier(["a", "b", "c", "d"])


def R(carrier, *pairs):
    return BinaryRelation(carrier, pairs)


def P(carrier, *blocks):
    return Partition(carrier, blocks)


def F(dom, cod, mapping):
    return FiniteFunction(Carrier(dom), Carrier(cod), mapping)


# --- strategies --------------------------------------------------------------


@st.composite
def carriers(draw, max_size=5):
    n = draw(st.integers(1, max_size))
    return Carrier([f"e{i}" for i in range(n)])


@st.composite
def partitions(draw, carrier=None):
    c = carrier or draw(carriers())
    labels = draw(st.lists(st.integers(0, len(c) - 1), min_size=len(c), max_size=len(c)))
    return Partition.by_key(c, dict(zip(c, labels)).__getitem__)


@st.composite
def relations_on(draw, carrier=None):
    c = carrier or draw(carriers(4))
    everything = [(a, b) for a in c for b in c]
    chosen = draw(st.lists(st.sampled_from(everything), unique=True))
    return BinaryRelation(c, chosen)


@st.composite
def functions(draw, max_size=6):
    dom = Carrier(str(i) for i in range(draw(st.integers(1, max_size))))
    cod = Carrier(f"t{i}" for i in range(draw(st.integers(1, max_size))))
    values = draw(st.lists(st.sampled_from(cod.elements), min_size=len(dom), max_size=len(dom)))
    return FiniteFunction(dom, cod, dict(zip(dom, values)))


# --- carriers and constructors -------------------------------------------------


def test_carrier_rejects_empty_and_duplicates():
    with pytest.raises(OntalgError) as exc:
        Carrier([])
    assert exc.value.code == "empty-carrier"
    with pytest.raises(OntalgError) as exc:
        Carrier(["a", "a"])
    assert exc.value.code == "duplicate-element"


def test_relation_endpoints_must_be_members():
    with pytest.raises(OntalgError) as exc:
        R(ABC, ("a", "z"))
    assert exc.value.code == "carrier-mismatch"


def test_partition_is_canonical():
    p = P(ABCD, ["d", "b"], ["c", "a"])
    assert p.blocks == (("a", "c"), ("b", "d"))
    assert p == P(ABCD, ["a", "c"], ["b", "d"])
    assert p.names == ("a", "b")


@pytest.mark.parametrize(
    "blocks, code",
    [([["a", "b"], ["b", "c"]], "bad-partition"), ([["a"], ["b"]], "bad-partition"), ([["a", "b", "c"], []], "bad-partition")],
)
def test_partition_validation(blocks, code):
    with pytest.raises(OntalgError) as exc:
        Partition(ABC, blocks)
    assert exc.value.code == code


def test_function_must_be_total_into_codomain():
    with pytest.raises(OntalgError) as exc:
        F(["1", "2"], ["x"], {"1": "x"})
    assert exc.value.code == "not-total"
    with pytest.raises(OntalgError) as exc:
        F(["1"], ["x"], {"1": "y"})
    assert exc.value.code == "carrier-mismatch"


# --- compose / inverse / classify ---------------------------------------------


def test_compose_examples():
    assert rel.compose(R(ABC, ("a", "b")), R(ABC, ("b", "c"))).pairs == {("a", "c")}
    assert rel.compose(R(ABC), R(ABC, ("b", "c"))).pairs == set()
    swap = R(ABC, ("a", "b"), ("b", "a"))
    assert rel.compose(swap, swap).pairs == {("a", "a"), ("b", "b")}


def test_compose_carrier_mismatch():
    with pytest.raises(OntalgError) as exc:
        rel.compose(R(ABC), R(ABCD))
    assert exc.value.code == "carrier-mismatch"


@given(relations_on(), st.data())
def test_compose_matches_oracle(r, data):
    s = data.draw(relations_on(r.carrier))
    assert rel.compose(r, s).pairs == oracles.compose(set(r.pairs), set(s.pairs))


def test_inverse_examples():
    assert rel.inverse(R(ABC, ("a", "b"))).pairs == {("b", "a")}
    assert rel.inverse(R(ABC, ("a", "a"))).pairs == {("a", "a")}
    assert rel.inverse(R(ABC, ("a", "b"), ("b", "c"))).pairs == {("b", "a"), ("c", "b")}


@given(relations_on())
def test_inverse_is_an_involution(r):
    assert rel.inverse(rel.inverse(r)) == r


def test_classify_examples():
    ab = Carrier(["a", "b"])
    assert rel.classify(BinaryRelation.diagonal(ab)) == (True, True, True, True)
    assert rel.classify(BinaryRelation.full(ABC)) == (True, True, True, True)


def test_single_arrow_is_vacuously_transitive():
    ab = Carrier(["a", "b"])
    r = R(ab, ("a", "b"))
    flags = rel.classify(r)
    assert (flags.reflexive, flags.symmetric, flags.equivalence) == (False, False, False)
    # rr is empty, so rr ⊆ r holds even though rr ≠ r
    assert flags.transitive
    assert rel.compose(r, r).pairs != r.pairs


@given(relations_on())
def test_classify_matches_definitions(r):
    pairs = set(r.pairs)
    flags = rel.classify(r)
    assert flags.reflexive == all((x, x) in pairs for x in r.carrier)
    assert flags.symmetric == all((b, a) in pairs for a, b in pairs)
    assert flags.transitive == all((a, d) in pairs for a, b in pairs for c, d in pairs if b == c)


# --- transitive closure ---------------------------------------------------------


def test_transitive_closure_examples():
    assert rel.transitive_closure(R(ABC, ("a", "b"), ("b", "c"))).pairs == {("a", "b"), ("b", "c"), ("a", "c")}
    closed = R(ABC, ("a", "b"))
    assert rel.transitive_closure(closed) == closed
    cycle = R(ABC, ("a", "b"), ("b", "c"), ("c", "a"))
    assert len(rel.transitive_closure(cycle)) == 9


@given(relations_on())
def test_transitive_closure_is_the_power_union(r):
    t = rel.transitive_closure(r)
    assert t.pairs == oracles.power_closure(set(r.pairs), len(r.carrier))
    assert r.pairs <= t.pairs
    assert rel.transitive_closure(t) == t


@given(relations_on(), st.data())
def test_transitive_closure_is_monotone(r, data):
    s = data.draw(relations_on(r.carrier))
    union = BinaryRelation(r.carrier, r.pairs | s.pairs)
    assert rel.transitive_closure(r).pairs <= rel.transitive_closure(union).pairs


# --- equivalences and partitions --------------------------------------------------


def test_partition_from_equivalence_examples():
    assert rel.partition_from_equivalence(BinaryRelation.diagonal(ABC)) == Partition.discrete(ABC)
    assert rel.partition_from_equivalence(BinaryRelation.full(ABC)) == Partition.indiscrete(ABC)
    r = BinaryRelation(ABC, BinaryRelation.diagonal(ABC).pairs | {("a", "b"), ("b", "a")})
    assert rel.partition_from_equivalence(r).blocks == (("a", "b"), ("c",))


def test_partition_from_non_equivalence_names_the_axiom():
    with pytest.raises(OntalgError) as exc:
        rel.partition_from_equivalence(R(ABC, ("a", "b")))
    assert exc.value.code == "not-an-equivalence"
    assert exc.value.witness["axiom"] == "reflexive"
    not_symmetric = BinaryRelation(ABC, BinaryRelation.diagonal(ABC).pairs | {("a", "b")})
    with pytest.raises(OntalgError) as exc:
        rel.partition_from_equivalence(not_symmetric)
    assert exc.value.witness == {"axiom": "symmetric", "pair": ("a", "b")}


def test_equivalence_from_partition_examples():
    ab = Carrier(["a", "b"])
    assert rel.equivalence_from_partition(Partition.discrete(ab)) == BinaryRelation.diagonal(ab)
    assert len(rel.equivalence_from_partition(Partition.indiscrete(ab))) == 4
    assert len(rel.equivalence_from_partition(P(ABC, ["a", "b"], ["c"]))) == 5


@pytest.mark.parametrize("n", range(1, 6))
def test_partition_equivalence_round_trip_exhaustive(n):
    c = Carrier(f"x{i}" for i in range(n))
    parts = rel.enumerate_partitions(c)
    assert len(parts) == oracles.bell(n)
    expected = {frozenset(map(frozenset, b)) for b in oracles.set_partitions(list(c))}
    assert {frozenset(map(frozenset, p.blocks)) for p in parts} == expected
    for p in parts:
        r = rel.equivalence_from_partition(p)
        assert r.pairs == oracles.pairs_of(p.blocks)
        assert rel.partition_from_equivalence(r) == p
        assert rel.kernel(rel.projection(p)) == p


def test_enumerate_partitions_counts_and_bound():
    assert [len(rel.enumerate_partitions(Carrier(map(str, range(n))))) for n in (1, 3, 4)] == [1, 5, 15]
    with pytest.raises(OntalgError) as exc:
        rel.enumerate_partitions(Carrier(map(str, range(9))))
    assert exc.value.code == "carrier-too-large"


def test_enumeration_bound_reads_the_environment(monkeypatch):
    monkeypatch.setenv("ONTALG_MAX_CARRIER", "3")
    with pytest.raises(OntalgError):
        rel.enumerate_partitions(ABCD)
    monkeypatch.setenv("ONTALG_MAX_CARRIER", "9")
    assert len(rel.enumerate_partitions(Carrier(map(str, range(9))))) == 21147


# --- projection / kernel ----------------------------------------------------------


def test_projection_examples():
    ab = Carrier(["a", "b"])
    assert dict(rel.projection(Partition.discrete(ab)).map) == {"a": "a", "b": "b"}
    assert dict(rel.projection(P(ABC, ["a", "b"], ["c"])).map) == {"a": "a", "b": "a", "c": "c"}
    const = rel.projection(Partition.indiscrete(ABC))
    assert set(const.map.values()) == {"a"} and const.is_surjective()


def test_kernel_examples():
    dom = ["1", "2", "3"]
    assert rel.kernel(F(dom, ["x", "y", "z"], {"1": "x", "2": "y", "3": "z"})).is_discrete()
    assert rel.kernel(F(dom, ["x", "y"], {"1": "x", "2": "x", "3": "y"})).blocks == (("1", "2"), ("3",))
    assert len(rel.kernel(F(dom, ["x"], {"1": "x", "2": "x", "3": "x"}))) == 1


@given(functions())
def test_kernel_blocks_are_fibres(f):
    fibres = {frozenset(x for x in f.domain if f(x) == y) for y in f.map.values()}
    assert oracles.as_blockset(rel.kernel(f).blocks) == fibres


# --- pushforward / pullback -------------------------------------------------------


def test_pushforward_examples():
    f = F(["1", "2", "3"], ["x", "y", "z"], {"1": "x", "2": "y", "3": "z"})
    p = P(f.domain, ["1", "2"], ["3"])
    assert rel.pushforward(f, p).blocks == (("x", "y"), ("z",))
    assert rel.pushforward(f, Partition.discrete(f.domain)).is_discrete()


def test_pushforward_closes_a_non_transitive_image():
    f = F(["1", "2", "3", "4"], ["u", "v", "w"], {"1": "u", "2": "v", "3": "v", "4": "w"})
    p = P(f.domain, ["1", "2"], ["3", "4"])
    raw = rel.image_relation(f, p)
    assert ("u", "v") in raw.pairs and ("v", "w") in raw.pairs and ("u", "w") not in raw.pairs
    assert not rel.classify(raw).transitive
    pushed = rel.pushforward(f, p)
    assert pushed.blocks == (("u", "v", "w"),)
    assert pushed.pairs() == oracles.equivalence_closure(set(raw.pairs), ["u", "v", "w"])


@given(functions(), st.data())
def test_pushforward_is_the_equivalence_closure_of_the_image(f, data):
    p = data.draw(partitions(f.domain))
    img = [y for y in f.codomain if y in set(f.map.values())]
    raw = {(f(a), f(b)) for a, b in oracles.pairs_of(p.blocks)}
    assert rel.pushforward(f, p).pairs() == oracles.equivalence_closure(raw, img)


def test_pullback_examples():
    f = F(["1", "2", "3"], ["x", "y"], {"1": "x", "2": "y", "3": "y"})
    assert rel.pullback(f, Partition.discrete(f.codomain)) == rel.kernel(f)
    assert len(rel.pullback(f, Partition.indiscrete(f.codomain))) == 1
    assert rel.pullback(f, P(f.codomain, ["x", "y"])).blocks == (("1", "2", "3"),)


def test_pushforward_and_pullback_carrier_checks():
    f = F(["1"], ["x"], {"1": "x"})
    with pytest.raises(OntalgError) as exc:
        rel.pushforward(f, Partition.discrete(ABC))
    assert exc.value.code == "carrier-mismatch"
    with pytest.raises(OntalgError) as exc:
        rel.pullback(f, Partition.discrete(ABC))
    assert exc.value.code == "carrier-mismatch"


@given(functions(), st.data())
def test_pushforward_of_pullback_refines(f, data):
    q = data.draw(partitions(f.codomain))
    assert rel.refines(rel.pushforward(f, rel.pullback(f, q)), q.restrict(f.image()))


# --- lattice ----------------------------------------------------------------------


def test_meet_join_examples():
    assert rel.meet([P(ABC, ["a", "b"], ["c"]), P(ABC, ["a"], ["b", "c"])]).is_discrete()
    j = rel.join([P(ABCD, ["a", "b"], ["c"], ["d"]), P(ABCD, ["b", "c"], ["a"], ["d"])])
    assert j.blocks == (("a", "b", "c"), ("d",))
    p = P(ABC, ["a", "c"], ["b"])
    assert rel.join([p, Partition.discrete(ABC)]) == p


def test_meet_join_errors():
    with pytest.raises(OntalgError) as exc:
        rel.meet([])
    assert exc.value.code == "empty-meet-join"
    with pytest.raises(OntalgError) as exc:
        rel.join([Partition.discrete(ABC), Partition.discrete(ABCD)])
    assert exc.value.code == "carrier-mismatch"


@settings(max_examples=200)
@given(st.data())
def test_meet_join_against_pair_sets(data):
    c = data.draw(carriers())
    ps = data.draw(st.lists(partitions(c), min_size=1, max_size=4))
    pair_sets = [oracles.pairs_of(p.blocks) for p in ps]
    assert rel.meet(ps).pairs() == set.intersection(*pair_sets)
    assert rel.join(ps).pairs() == oracles.power_closure(set.union(*pair_sets), len(c))


def test_refines_examples():
    p = P(ABC, ["a", "b"], ["c"])
    assert rel.refines(Partition.discrete(ABC), p)
    assert rel.refines(p, Partition.indiscrete(ABC))
    assert not rel.refines(p, P(ABC, ["a"], ["b", "c"]))


def test_refinement_pair_count_on_four_elements():
    # Π4 has 60 comparable pairs (45 strict); each partition with k blocks lies below Bell(k) others
    parts = rel.enumerate_partitions(ABCD)
    count = sum(rel.refines(p, q) for p in parts for q in parts)
    assert count == sum(oracles.bell(len(p)) for p in parts) == 60


def test_induced_surjection_examples():
    p = P(ABC, ["a", "b"], ["c"])
    assert dict(rel.induced_surjection(p, p).map) == {"a": "a", "c": "c"}
    u = rel.induced_surjection(P(ABCD, ["a"], ["b"], ["c", "d"]), P(ABCD, ["a", "b"], ["c", "d"]))
    assert dict(u.map) == {"a": "a", "b": "a", "c": "c"}
    q = P(ABC, ["a", "c"], ["b"])
    assert dict(rel.induced_surjection(Partition.discrete(ABC), q).map) == dict(rel.projection(q).map)


def test_induced_surjection_needs_refinement():
    with pytest.raises(OntalgError) as exc:
        rel.induced_surjection(P(ABC, ["a", "b"], ["c"]), P(ABC, ["a"], ["b", "c"]))
    assert exc.value.code == "not-a-refinement"
    assert exc.value.witness == ("a", "b")


# --- factorization / lifting --------------------------------------------------------


def test_factorize_examples():
    f = F(["1", "2", "3"], ["x", "y"], {"1": "x", "2": "x", "3": "y"})
    fac = rel.factorize(f)
    assert rel.kernel(fac.projection).blocks == (("1", "2"), ("3",))
    assert dict(fac.injection.map) == {"1": "x", "3": "y"}
    const = F(["1", "2"], ["x", "y"], {"1": "x", "2": "x"})
    assert dict(rel.factorize(const).injection.map) == {"1": "x"}
    inj = F(["1", "2"], ["x", "y"], {"1": "y", "2": "x"})
    assert rel.factorize(inj).projection.is_injective()


def test_factorize_rejects_rho_above_kernel():
    f = F(["1", "2", "3"], ["x", "y"], {"1": "x", "2": "x", "3": "y"})
    with pytest.raises(OntalgError) as exc:
        rel.factorize(f, Partition.indiscrete(f.domain))
    assert exc.value.code == "rho-not-below-kernel"


@given(functions(), st.data())
def test_factorization_recomposes(f, data):
    fac = rel.factorize(f)
    assert all(fac.injection(fac.projection(x)) == f(x) for x in f.domain)
    assert fac.injection.is_injective() and fac.projection.is_surjective()
    rho = rel.meet([rel.kernel(f), data.draw(partitions(f.domain))])
    fac = rel.factorize(f, rho)
    pr = rel.projection(rho)
    assert all(fac.bridge(pr(x)) == fac.projection(x) for x in f.domain)


def test_lift_examples():
    f = FiniteFunction.identity(ABC)
    lifted = rel.lift(f, P(ABC, ["a", "b"], ["c"]), Partition.indiscrete(ABC))
    assert dict(lifted.map) == {"a": "a", "c": "a"}
    same = rel.lift(f, Partition.discrete(ABC), Partition.discrete(ABC))
    assert dict(same.map) == {"a": "a", "b": "b", "c": "c"}


def test_lift_reports_a_witness_pair():
    f = FiniteFunction.identity(ABC)
    with pytest.raises(OntalgError) as exc:
        rel.lift(f, P(ABC, ["a", "b"], ["c"]), Partition.discrete(ABC))
    assert exc.value.code == "not-liftable"
    a, b = exc.value.witness
    assert {a, b} == {"a", "b"}


@given(functions(), st.data())
def test_lift_square_commutes_by_brute_force(f, data):
    p = data.draw(partitions(f.domain))
    q = data.draw(partitions(f.codomain))
    liftable = all(q.same_block(f(a), f(b)) for a, b in oracles.pairs_of(p.blocks))
    if not liftable:
        with pytest.raises(OntalgError):
            rel.lift(f, p, q)
        return
    lifted = rel.lift(f, p, q)
    assert all(lifted(p.name_of(x)) == q.name_of(f(x)) for x in f.domain)
    if f.is_surjective():
        assert lifted.is_surjective()


def test_image_and_pullback_squares_examples():
    inj = F(["1", "2"], ["x", "y", "z"], {"1": "x", "2": "y"})
    sq = rel.image_and_pullback_squares(inj, Partition.discrete(inj.domain), Partition.discrete(inj.codomain))
    assert sq.ftilde.is_injective() and sq.ftilde.is_surjective()
    assert dict(sq.fstar.map) == dict(rel.factorize(inj).injection.map)
    const = F(["1", "2", "3"], ["x", "y"], {"1": "x", "2": "x", "3": "x"})
    sq = rel.image_and_pullback_squares(const, P(const.domain, ["1"], ["2", "3"]), Partition.discrete(const.codomain))
    assert set(sq.ftilde.map.values()) == {"x"}


# --- congruences ------------------------------------------------------------------

Z4 = Carrier(["0", "1", "2", "3"])
SATURATING = {(a, b): str(min(int(a) + int(b), 3)) for a in Z4 for b in Z4}
MOD2 = P(Z4, ["0", "2"], ["1", "3"])


def test_congruence_trivial_cases():
    assert rel.is_congruence(Partition.discrete(Z4), SATURATING)
    assert rel.is_congruence(Partition.indiscrete(Z4), SATURATING)


def test_mod_two_is_not_a_congruence_for_saturating_addition():
    check = rel.congruence_check(MOD2, SATURATING)
    assert not check.ok
    (a0, a), (b0, b) = check.witness
    assert MOD2.same_block(a0, a) and MOD2.same_block(b0, b)
    assert not MOD2.same_block(SATURATING[(a0, b0)], SATURATING[(a, b)])
    # the pairs (0,2),(1,1) do not witness it: 0+1=1 and 2+1=3 are both odd
    assert MOD2.same_block(SATURATING[("0", "1")], SATURATING[("2", "1")])


def test_partial_table_rejected():
    with pytest.raises(OntalgError) as exc:
        rel.is_congruence(MOD2, {("0", "0"): "0"})
    assert exc.value.code == "partial-table"


def test_congruence_closure_is_least_by_exhaustive_search():
    parts = rel.enumerate_partitions(Z4)
    for p in parts:
        got = rel.congruence_closure(p, SATURATING)
        above = [q for q in parts if rel.refines(p, q) and oracles.is_congruence(q.pairs(), list(Z4), SATURATING)]
        least = [q for q in above if all(rel.refines(q, r) for r in above)]
        assert least == [got]
        assert rel.congruence_closure(got, SATURATING) == got


def test_congruence_closure_on_random_tables():
    rng = random.Random(3)
    for _ in range(40):
        table = {(a, b): rng.choice(Z4.elements) for a in Z4 for b in Z4}
        for p in rel.enumerate_partitions(Z4):
            got = rel.congruence_closure(p, table)
            assert oracles.is_congruence(got.pairs(), list(Z4), table)
            assert rel.refines(p, got)
            assert rel.is_congruence(got, table)


def test_union_find_merges_by_size():
    uf = UnionFind(ABCD.elements)
    uf.union("a", "b")
    uf.union_all(["c", "d", "a"])
    assert uf.partition(ABCD) == Partition.indiscrete(ABCD)


def test_partition_restrict_and_by_key():
    p = P(ABCD, ["a", "c"], ["b", "d"])
    sub = ABCD.subset(["d", "c"])
    assert p.restrict(sub).blocks == (("c",), ("d",))
    q = Partition.by_key(ABCD, lambda x: x in "ab")
    assert q.blocks == (("a", "b"), ("c", "d"))
    assert q == Partition(ABCD, q.blocks)
    assert list(itertools.chain.from_iterable(q.blocks)) == ["a", "b", "c", "d"]
