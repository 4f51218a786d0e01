from __future__ import annotations

import random

import pytest

from sensekit.corpus import AssertionSet, PropertyKey, parse_corpus
from sensekit.errors import (
    ConfigError,
    ConsistencyError,
    EmptyCorpusError,
    OntologyError,
    UnknownTypeError,
)
from sensekit.hierarchy import (
    InduceConfig,
    TypeDag,
    TypedFact,
    dag_from_json_text,
    dag_to_json,
    dag_to_json_text,
    export_dot,
    induce,
    verify,
)

from conftest import random_assertion_set
from oracles import brute_force_hierarchy

# Expected covering relation for the leaf corpus, by characteristic property.
LEAF_EDGES = {
    ("OLD", "HEAVY"),
    ("OLD", "IMMINENT"),
    ("HEAVY", "HUNGRY"),
    ("HEAVY", "MAKE@object"),
    ("HUNGRY", "ARTICULATE"),
    ("MAKE@object", "MANUFACTURE@object"),
    ("MAKE@object", "RIDE@object"),
    ("RIDE@object", "DRIVE@object"),
}


def edges_by_property(dag: TypeDag) -> set[tuple[str, str]]:
    by_id = {n.id: n for n in dag.nodes}
    out = set()
    for parent, child in dag.edges:
        pp = by_id[parent].characteristic_properties
        cp = by_id[child].characteristic_properties
        out.add((pp[0] if pp else "entity", cp[0] if cp else "entity"))
    return out


def node_by_property(dag: TypeDag, token: str):
    return dag.resolve(token)


# --- induce -------------------------------------------------------------------

def test_leaf_corpus_nine_node_dag(leaf_corpus) -> None:
    dag = induce(leaf_corpus)
    assert len(dag.nodes) == 9
    assert edges_by_property(dag) == LEAF_EDGES
    root = dag.node_by_id(dag.root)
    assert root.characteristic_properties == ("OLD",)
    assert len(root.extent) == 8


def test_leaf_corpus_matches_brute_force(leaf_corpus) -> None:
    node_map, edges, root_extent = brute_force_hierarchy(leaf_corpus)
    dag = induce(leaf_corpus)
    got_nodes = {n.extent: n.characteristic_properties for n in dag.nodes}
    assert got_nodes == node_map
    by_id = {n.id: n for n in dag.nodes}
    got_edges = {(by_id[p].extent, by_id[c].extent) for p, c in dag.edges}
    assert got_edges == edges
    assert by_id[dag.root].extent == root_extent


def test_single_property_single_concept(leaf_corpus) -> None:
    dag = induce(parse_corpus("+ OLD trip\n"))
    assert len(dag.nodes) == 1
    assert dag.edges == ()
    assert dag.node_by_id(dag.root).extent == frozenset({"trip"})


def test_branch_split_corpus(branch_corpus) -> None:
    dag = induce(branch_corpus)
    assemble = node_by_property(dag, "ASSEMBLE@object")
    running = node_by_property(dag, "RUNNING@agent")
    assert (assemble.id, running.id) in dag.edges
    assert running.extent < assemble.extent
    assert "couch" not in running.extent
    assert assemble.direct_members == frozenset({"couch"})


def test_equal_extents_merge_into_one_node() -> None:
    aset = parse_corpus("+ HUNGRY dog\n+ HUNGRY person\n+ ALIVE dog\n+ ALIVE person\n")
    dag = induce(aset)
    assert len(dag.nodes) == 1
    assert dag.node_by_id(dag.root).characteristic_properties == ("ALIVE", "HUNGRY")


def test_merge_can_be_disabled() -> None:
    aset = parse_corpus("+ HUNGRY dog\n+ ALIVE dog\n+ OLD dog\n+ OLD cat\n")
    dag = induce(aset, InduceConfig(merge_equal_extents=False))
    singles = [n for n in dag.nodes if n.extent == frozenset({"dog"})]
    assert len(singles) == 2
    # equal unmerged extents are siblings, never parent/child
    ids = {n.id for n in singles}
    assert not any(p in ids and c in ids for p, c in dag.edges)


def test_synthetic_root_added_when_no_property_covers_everything(branch_corpus) -> None:
    dag = induce(branch_corpus)
    root = dag.node_by_id(dag.root)
    # ASSEMBLE@object covers every mentioned concept here, so it is the root
    assert root.characteristic_properties == ("ASSEMBLE@object",)

    aset = parse_corpus("+ HEAVY rock\n+ IMMINENT trip\n")
    dag = induce(aset)
    root = dag.node_by_id(dag.root)
    assert root.is_synthetic_root
    assert root.extent == frozenset({"rock", "trip"})
    assert edges_by_property(dag) == {("entity", "HEAVY"), ("entity", "IMMINENT")}


def test_concept_seen_only_negatively_still_under_root() -> None:
    aset = parse_corpus("+ DELICIOUS apple\n- DELICIOUS thursday\n")
    dag = induce(aset)
    root = dag.node_by_id(dag.root)
    assert root.is_synthetic_root
    assert root.extent == frozenset({"apple", "thursday"})
    assert root.direct_members == frozenset({"thursday"})


def test_multi_parent_nodes_are_kept_and_flagged() -> None:
    aset = parse_corpus(
        "+ A x\n+ A y\n+ A z\n+ A w\n"
        "+ B x\n+ B y\n"
        "+ C y\n+ C z\n"
        "+ D y\n+ D w\n"
        "+ E y\n"
    )
    dag = induce(aset)
    e_node = dag.resolve("E")
    assert len(dag.parents(e_node.id)) == 3
    assert any(f"node {e_node.id}" in d for d in dag.diagnostics)


def test_empty_corpus_rejected() -> None:
    with pytest.raises(EmptyCorpusError):
        induce(AssertionSet(()))


def test_negative_only_corpus_rejected() -> None:
    with pytest.raises(EmptyCorpusError):
        induce(parse_corpus("- OLD sugar\n"))


def test_inconsistent_corpus_rejected() -> None:
    with pytest.raises(ConsistencyError):
        induce(parse_corpus("+ OLD trip\n- OLD trip\n"))


@pytest.mark.parametrize("tau", [-0.1, 1.5])
def test_tau_out_of_range_rejected(tau: float, leaf_corpus) -> None:
    with pytest.raises(ConfigError):
        induce(leaf_corpus, InduceConfig(tau=tau))


def test_tolerant_inclusion_absorbs_noise() -> None:
    # BIRD has one straggler (penguin) outside FLIER; tau = 0.25 tolerates it
    # without being loose enough to merge the two extents.
    aset = parse_corpus(
        "+ FLIER sparrow\n+ FLIER eagle\n+ FLIER bat\n+ FLIER drone\n"
        "+ FLIER kite\n+ FLIER plane\n"
        "+ BIRD sparrow\n+ BIRD eagle\n+ BIRD kite\n+ BIRD penguin\n"
    )
    exact = induce(aset)
    assert ("FLIER", "BIRD") not in edges_by_property(exact)
    tolerant = induce(aset, InduceConfig(tau=0.25))
    assert ("FLIER", "BIRD") in edges_by_property(tolerant)
    assert len(tolerant.nodes) == 3  # synthetic root + FLIER + BIRD


def test_tolerant_mutual_inclusion_merges() -> None:
    aset = parse_corpus(
        "+ P a\n+ P b\n+ P c\n+ P d\n"
        "+ Q a\n+ Q b\n+ Q c\n+ Q e\n"
    )
    dag = induce(aset, InduceConfig(tau=0.25))
    merged = [n for n in dag.nodes if set(n.characteristic_properties) == {"P", "Q"}]
    assert len(merged) == 1
    assert merged[0].extent == frozenset({"a", "b", "c", "d", "e"})


def test_tau_without_merging_rejected(leaf_corpus) -> None:
    with pytest.raises(ConfigError):
        induce(leaf_corpus, InduceConfig(tau=0.2, merge_equal_extents=False))


# --- invariants over random corpora -----------------------------------------------

def test_oracle_equivalence_on_random_corpora() -> None:
    rng = random.Random(2024)
    checked = 0
    while checked < 120:
        aset = random_assertion_set(rng, allow_negative=False)
        if not aset.assertions:
            continue
        checked += 1
        node_map, edges, root_extent = brute_force_hierarchy(aset)
        dag = induce(aset)
        assert {n.extent: n.characteristic_properties for n in dag.nodes} == node_map
        by_id = {n.id: n for n in dag.nodes}
        assert {(by_id[p].extent, by_id[c].extent) for p, c in dag.edges} == edges
        assert by_id[dag.root].extent == root_extent


def test_antisymmetry_and_edge_soundness_at_tau_zero() -> None:
    rng = random.Random(99)
    for _ in range(60):
        aset = random_assertion_set(rng, allow_negative=False)
        if not aset.assertions:
            continue
        dag = induce(aset)
        extents = [n.extent for n in dag.nodes]
        assert len(extents) == len(set(extents))
        by_id = {n.id: n for n in dag.nodes}
        for parent, child in dag.edges:
            assert by_id[child].extent < by_id[parent].extent


def test_monotone_refinement_changes_labels_not_edges() -> None:
    rng = random.Random(5)
    for _ in range(20):
        aset = random_assertion_set(rng, allow_negative=False)
        if not aset.assertions:
            continue
        dag = induce(aset)
        target = max(dag.nodes, key=lambda n: (len(n.extent), n.id))
        if not target.characteristic_properties:
            continue
        extra = tuple(
            parse_corpus(f"+ ZNEW {name}\n").assertions[0]
            for name in sorted(target.extent)
        )
        refined = induce(AssertionSet(aset.assertions + extra))
        assert refined.edges == dag.edges
        assert [n.extent for n in refined.nodes] == [n.extent for n in dag.nodes]
        refined_target = next(n for n in refined.nodes if n.extent == target.extent)
        assert "ZNEW" in refined_target.characteristic_properties


# --- verify --------------------------------------------------------------------

def test_verify_property_against_own_node(leaf_corpus) -> None:
    dag = induce(leaf_corpus)
    result = verify(dag, TypedFact(PropertyKey("HEAVY"), "HEAVY"), leaf_corpus)
    assert result.consistent
    assert result.violations == ()


def test_verify_reports_violating_concepts(leaf_corpus) -> None:
    dag = induce(leaf_corpus)
    result = verify(dag, TypedFact(PropertyKey("ARTICULATE"), "HUNGRY"), leaf_corpus)
    assert not result.consistent
    assert result.violations == ("dog",)


def test_verify_universal_property_at_root(leaf_corpus) -> None:
    dag = induce(leaf_corpus)
    result = verify(dag, TypedFact(PropertyKey("OLD"), "OLD"), leaf_corpus)
    assert result.consistent


def test_verify_resolves_via_label_map(leaf_corpus) -> None:
    dag = induce(leaf_corpus)
    labels = {"HUNGRY": "living"}
    result = verify(
        dag, TypedFact(PropertyKey("HUNGRY"), "living"), leaf_corpus, labels=labels
    )
    assert result.consistent


def test_verify_unknown_type_name(leaf_corpus) -> None:
    dag = induce(leaf_corpus)
    with pytest.raises(UnknownTypeError):
        verify(dag, TypedFact(PropertyKey("OLD"), "no-such-type"), leaf_corpus)


# --- exports -------------------------------------------------------------------

def test_dot_two_node_chain() -> None:
    dag = induce(parse_corpus("+ OLD cat\n+ OLD dog\n+ HUNGRY dog\n"))
    dot = export_dot(dag)
    assert dot.startswith("digraph concept_hierarchy {")
    assert dot.count("->") == 1
    assert "n0 -> n1;" in dot


def test_dot_leaf_corpus_lists_nine_nodes(leaf_corpus) -> None:
    dag = induce(leaf_corpus)
    dot = export_dot(dag)
    assert dot.count("[label=") == 9
    assert dot.count("->") == 8


def test_dot_without_labels_uses_property_captions(leaf_corpus) -> None:
    dag = induce(leaf_corpus)
    dot = export_dot(dag, labels=None)
    assert "OLD" in dot
    assert "physical" not in dot


def test_dot_with_label_map(leaf_corpus) -> None:
    dag = induce(leaf_corpus)
    dot = export_dot(dag, labels={"HEAVY": "physical"})
    assert "physical" in dot


def test_dot_deterministic(leaf_corpus) -> None:
    dag1 = induce(leaf_corpus)
    dag2 = induce(leaf_corpus)
    assert export_dot(dag1) == export_dot(dag2)
    assert dag_to_json_text(dag1) == dag_to_json_text(dag2)


def test_ontology_json_round_trip(leaf_corpus) -> None:
    dag = induce(leaf_corpus)
    once = dag_to_json_text(dag)
    twice = dag_to_json_text(dag_from_json_text(once))
    assert once == twice


def test_ontology_json_shape(branch_corpus) -> None:
    dag = induce(branch_corpus)
    data = dag_to_json(dag)
    assert set(data) == {"nodes", "edges", "root"}
    assert data["root"] == dag.root
    assert all(set(n) == {"id", "extent", "props", "members"} for n in data["nodes"])


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("root"),
        lambda d: d["edges"].append([0, 99]),
        lambda d: d["nodes"].append({"id": 0, "extent": [], "props": [], "members": []}),
        lambda d: d["nodes"][0]["members"].append("ghost"),
    ],
)
def test_ontology_json_validation(mutate, leaf_corpus) -> None:
    data = dag_to_json(induce(leaf_corpus))
    mutate(data)
    import json

    with pytest.raises(OntologyError):
        dag_from_json_text(json.dumps(data))


def test_node_ids_follow_size_then_member_order() -> None:
    rng = random.Random(1234)
    for _ in range(40):
        aset = random_assertion_set(rng, allow_negative=False)
        if not aset.assertions:
            continue
        dag = induce(aset)
        keys = [
            (-len(n.extent), tuple(sorted(n.extent)))
            for n in sorted(dag.nodes, key=lambda n: n.id)
        ]
        assert keys == sorted(keys)
        assert [n.id for n in dag.nodes] == list(range(len(dag.nodes)))
