import itertools
import random

import pytest

from ontalg.closure import (
    CAP_EXCEEDED,
    CLOSED,
    Repository,
    closure_quotient_commutes,
    finiteness_probe,
    merging_closure,
)
from ontalg.errors import OntalgError
from ontalg.generators import random_semilattice, random_system, semilattices
from ontalg.merging_system import GraphAlgebra, MergingSystem, is_compatible
from ontalg.ontology import Ontology, canonical_form, load_fixture, merge_by_label
from ontalg.relations import Partition, enumerate_partitions
from ontalg.verify import fresh_label_merge

import oracles


def semilattice():
    return MergingSystem.from_json(load_fixture("semilattice"))


def graph(name):
    return Ontology.from_json(load_fixture(name))


def least_closed_superset(s, seed):
    supersets = oracles.closed_supersets(list(s.carrier), dict(s.merge), set(seed))
    return min(supersets, key=len)


# --- basic examples ----------------------------------------------------------------


def test_closed_members_take_one_round():
    s = semilattice()
    res = merging_closure(Repository(s, ["A", "AB"]))
    assert set(res.closure) == {"A", "AB"} and res.rounds == 1 and res.verdict == CLOSED


def test_semilattice_generators():
    res = merging_closure(Repository(semilattice(), ["A", "B"]))
    assert set(res.closure) == {"A", "B", "AB"}
    assert res.provenance["AB"] in {("A", "B"), ("B", "A")}
    assert res.provenance["A"] == ("seed",)
    assert res.to_json()["closure"] == ["A", "AB", "B"]


def test_empty_repository():
    res = merging_closure(Repository(semilattice(), []))
    assert res.closure == () and res.verdict == CLOSED


def test_members_must_be_in_the_carrier():
    with pytest.raises(OntalgError) as exc:
        Repository(semilattice(), ["Z"])
    assert exc.value.code == "carrier-mismatch"


def test_cap_exceeded_is_a_verdict():
    xs = [f"c{i}" for i in range(6)]
    # c_i ⋄ c_i = c_{i+1} keeps generating new elements
    s = MergingSystem.from_table(xs, {(x, x): xs[min(i + 1, 5)] for i, x in enumerate(xs)})
    res = merging_closure(Repository(s, ["c0"]), cap=3)
    assert res.verdict == CAP_EXCEEDED and len(res.closure) == 4
    assert merging_closure(Repository(s, ["c0"]), cap=10).verdict == CLOSED
    with pytest.raises(OntalgError) as exc:
        merging_closure(Repository(s, xs), cap=2)
    assert exc.value.code == "cap-too-small"


# --- laws ------------------------------------------------------------------------


def test_closure_is_the_least_closed_superset():
    rng = random.Random(5)
    for _ in range(200):
        s = random_system(rng, rng.randint(1, 5))
        seed = rng.sample(list(s.carrier), rng.randint(0, len(s.carrier)))
        res = merging_closure(Repository(s, seed))
        assert set(res.closure) == least_closed_superset(s, seed)
        # idempotence and extensivity
        assert set(merging_closure(Repository(s, res.closure)).closure) == set(res.closure)
        assert set(seed) <= set(res.closure)


def test_closure_is_monotone():
    rng = random.Random(15)
    for _ in range(200):
        s = random_system(rng, rng.randint(1, 5))
        small = rng.sample(list(s.carrier), rng.randint(0, len(s.carrier)))
        big = set(small) | set(rng.sample(list(s.carrier), rng.randint(0, len(s.carrier))))
        assert set(merging_closure(Repository(s, small)).closure) <= set(merging_closure(Repository(s, big)).closure)


def test_closure_ignores_iteration_order():
    rng = random.Random(25)
    for _ in range(100):
        s = random_system(rng, rng.randint(1, 5))
        seed = rng.sample(list(s.carrier), rng.randint(1, len(s.carrier)))
        base = set(merging_closure(Repository(s, seed)).closure)
        for k in range(10):
            assert set(merging_closure(Repository(s, seed), rng=random.Random(k)).closure) == base


def test_provenance_is_acyclic_and_inside_the_closure():
    rng = random.Random(35)
    for _ in range(200):
        s = random_system(rng, rng.randint(1, 5))
        seed = rng.sample(list(s.carrier), rng.randint(1, len(s.carrier)))
        res = merging_closure(Repository(s, seed))
        born = {}
        for i, k in enumerate(res.elements):
            born[k] = i
        for k, prov in res.provenance.items():
            if prov == ("seed",):
                assert k in seed
                continue
            a, b = prov
            assert s.merge[(a, b)] == k
            assert born[a] < born[k] and born[b] < born[k]


# --- quotients --------------------------------------------------------------------


def test_diagonal_quotient_commutes():
    s = semilattice()
    report = closure_quotient_commutes(Repository(s, ["A", "B"]), Partition.discrete(s.carrier))
    assert report.status == "equal"


def test_semilattice_two_block_quotient_commutes():
    s = semilattice()
    p = Partition(s.carrier, [["A"], ["B", "AB"]])
    report = closure_quotient_commutes(Repository(s, ["A", "B"]), p)
    assert report.status == "equal"
    assert report.closure_of_quotient == ("A", "B")


def test_quotient_needs_compatibility():
    s = MergingSystem.from_table(["a", "b", "c"], {("a", "b"): "b"})
    with pytest.raises(OntalgError) as exc:
        closure_quotient_commutes(Repository(s, ["a"]), Partition(s.carrier, [["a"], ["b", "c"]]))
    assert exc.value.code == "not-compatible"


def test_commutation_on_all_four_element_semilattices():
    checked = 0
    for s in semilattices(4):
        parts = [p for p in enumerate_partitions(s.carrier) if is_compatible(p, s).ok]
        for r in range(len(s.carrier) + 1):
            for subset in itertools.combinations(s.carrier, r):
                for p in parts:
                    assert closure_quotient_commutes(Repository(s, subset), p).status == "equal"
                    checked += 1
    assert checked > 1000


def test_extensional_finiteness():
    rng = random.Random(3)
    for _ in range(100):
        s = random_semilattice(rng)
        for p in enumerate_partitions(s.carrier):
            if is_compatible(p, s).ok:
                report = finiteness_probe(Repository(s, list(s.carrier)[:2]), p)
                assert report.status == "finite-both"
                assert report.quotient_closure_size <= report.closure_size


def kinds(g):
    return "|".join(sorted({n.kind or "" for n in g.nodes}))


def test_graph_repository_finiteness():
    en, fr = graph("quebec_en"), graph("quebec_fr")
    report = finiteness_probe(Repository(GraphAlgebra(), [en, fr]), kinds)
    assert report.status == "finite-both"
    assert report.closure_size == 3 and report.quotient_closure_size <= 3


def test_graph_repository_closure_and_commutation():
    en, fr = graph("quebec_en"), graph("quebec_fr")
    res = merging_closure(Repository(GraphAlgebra(), [en, fr]))
    assert set(res.closure) == {canonical_form(g).id for g in (en, fr, merge_by_label(en, fr))}
    report = closure_quotient_commutes(Repository(GraphAlgebra(), [en, fr]), kinds)
    assert report.status == "equal"


def test_graph_algebra_rejects_partitions():
    with pytest.raises(OntalgError) as exc:
        finiteness_probe(Repository(GraphAlgebra(), [graph("quebec_en")]), Partition.discrete(semilattice().carrier))
    assert exc.value.code == "bad-partition"


def test_fresh_label_merges_are_inconclusive():
    fresh = GraphAlgebra(aligned=lambda a, b: True, merge=fresh_label_merge)
    report = finiteness_probe(Repository(fresh, [graph("quebec_en")]), fresh.key, cap=30)
    assert report.status == "inconclusive"
    assert not report.closure_finite and not report.quotient_closure_finite
