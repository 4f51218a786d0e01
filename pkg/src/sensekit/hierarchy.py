"""Concept-hierarchy induction from property extents.

Every property in a corpus determines an extent: the set of concepts it can
sensibly be said of.  Distinct extents become type nodes, subset inclusion
between extents becomes subsumption, and the transitive reduction of that
order is the induced DAG.  A property that applies to everything (or a
synthetic "entity" node when none does) forms the root.

The output is a DAG rather than a tree: two incomparable extents may both
include a third, which then has two parents.  Nodes with more than two
parents are flagged in TypeDag.diagnostics instead of being reshaped.

With tolerance tau > 0, A counts as included in B when |A \\ B| <= tau*|A|;
extents that tolerantly include each other are merged (their union becomes
the node extent).  tau = 0 is the exact procedure and the default.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from . import jsonio
from .corpus import AssertionSet, PropertyKey, check_consistency, extent
from .errors import (
    ConfigError,
    ConsistencyError,
    EmptyCorpusError,
    OntologyError,
    UnknownTypeError,
)

ROOT_LABEL = "entity"


@dataclass(frozen=True)
class InduceConfig:
    tau: float = 0.0
    merge_equal_extents: bool = True
    emit_labels: bool = True


@dataclass(frozen=True)
class TypeNode:
    """One induced type: a distinct property extent.

    characteristic_properties are the property tokens whose extent is exactly
    this node's extent (empty only for a synthetic root).  direct_members are
    extent members that belong to no child node.
    """

    id: int
    extent: frozenset[str]
    characteristic_properties: tuple[str, ...]
    direct_members: frozenset[str]

    @property
    def is_synthetic_root(self) -> bool:
        return not self.characteristic_properties


@dataclass(frozen=True)
class TypedFact:
    """An applicability claim at the type level: property applies to a whole type."""

    property: PropertyKey
    type_name: str


@dataclass(frozen=True)
class VerifyResult:
    consistent: bool
    violations: tuple[str, ...] = ()


@dataclass(frozen=True)
class TypeDag:
    nodes: tuple[TypeNode, ...]
    edges: tuple[tuple[int, int], ...]
    root: int
    diagnostics: tuple[str, ...] = ()

    def node_by_id(self, node_id: int) -> TypeNode:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise UnknownTypeError(f"no node with id {node_id}")

    def children(self, node_id: int) -> tuple[int, ...]:
        return tuple(c for p, c in self.edges if p == node_id)

    def parents(self, node_id: int) -> tuple[int, ...]:
        return tuple(p for p, c in self.edges if c == node_id)

    def resolve(self, type_name: str, labels: Mapping[str, str] | None = None) -> TypeNode:
        """Resolve a type name to exactly one node.

        A name matches a node when it is one of the node's characteristic
        property tokens, the label assigned to one of them by the optional
        label map, or "entity" for a synthetic root.
        """
        matches: list[TypeNode] = []
        for node in self.nodes:
            hit = type_name in node.characteristic_properties
            if not hit and labels:
                hit = any(
                    labels.get(p) == type_name for p in node.characteristic_properties
                )
            if not hit and node.is_synthetic_root and type_name == ROOT_LABEL:
                hit = True
            if hit:
                matches.append(node)
        if not matches:
            raise UnknownTypeError(f"unknown type name {type_name!r}")
        if len(matches) > 1:
            ids = ", ".join(str(n.id) for n in matches)
            raise UnknownTypeError(f"type name {type_name!r} is ambiguous (nodes {ids})")
        return matches[0]


def _tolerant_subset(a: frozenset[str], b: frozenset[str], tau: float) -> bool:
    return len(a - b) <= tau * len(a)


class _Group:
    """Mutable working node during induction."""

    __slots__ = ("extent", "props")

    def __init__(self, ext: frozenset[str], props: tuple[str, ...]) -> None:
        self.extent = ext
        self.props = props

    def absorb(self, other: "_Group") -> None:
        self.extent = self.extent | other.extent
        self.props = tuple(sorted(set(self.props) | set(other.props)))

    def sort_key(self) -> tuple:
        return (-len(self.extent), tuple(sorted(self.extent)), self.props)


def _merge_mutual_inclusions(groups: list[_Group], tau: float) -> list[_Group]:
    changed = True
    while changed:
        changed = False
        groups.sort(key=_Group.sort_key)
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                a, b = groups[i], groups[j]
                if _tolerant_subset(a.extent, b.extent, tau) and _tolerant_subset(
                    b.extent, a.extent, tau
                ):
                    a.absorb(b)
                    del groups[j]
                    changed = True
                    break
            if changed:
                break
    return groups


def _candidate_edges(groups: Sequence[_Group], tau: float) -> set[tuple[int, int]]:
    edges: set[tuple[int, int]] = set()
    for i, parent in enumerate(groups):
        for j, child in enumerate(groups):
            if i == j:
                continue
            if _tolerant_subset(child.extent, parent.extent, tau) and not _tolerant_subset(
                parent.extent, child.extent, tau
            ):
                edges.add((i, j))
    return edges


def _transitive_reduction(n: int, edges: set[tuple[int, int]]) -> set[tuple[int, int]]:
    # The candidate graph is a DAG: a one-way tolerant inclusion forces the
    # child extent to be strictly smaller than the parent's, so every edge
    # strictly decreases node size and no cycle can close.
    adj: dict[int, set[int]] = {i: set() for i in range(n)}
    indegree = {i: 0 for i in range(n)}
    for u, v in edges:
        adj[u].add(v)
        indegree[v] += 1
    order: list[int] = []
    ready = sorted(i for i in range(n) if indegree[i] == 0)
    while ready:
        u = ready.pop(0)
        order.append(u)
        for v in sorted(adj[u]):
            indegree[v] -= 1
            if indegree[v] == 0:
                ready.append(v)
    if len(order) != n:  # pragma: no cover - impossible by the size argument
        raise OntologyError("internal error: inclusion graph has a cycle")

    desc: dict[int, set[int]] = {i: set() for i in range(n)}
    for u in reversed(order):
        for v in adj[u]:
            desc[u].add(v)
            desc[u] |= desc[v]

    reduced: set[tuple[int, int]] = set()
    for u, v in edges:
        if any(v in desc[w] for w in adj[u] if w != v):
            continue
        reduced.add((u, v))
    return reduced


def induce(aset: AssertionSet, cfg: InduceConfig | None = None) -> TypeDag:
    """Induce the type DAG implicit in an assertion set.

    Deterministic for identical input: nodes are ordered by extent size
    (largest first), then by lexicographic member list, and ids follow that
    order.
    """
    cfg = cfg or InduceConfig()
    if not 0.0 <= cfg.tau <= 1.0:
        raise ConfigError(f"tau must be in [0, 1], got {cfg.tau}")
    if cfg.tau > 0 and not cfg.merge_equal_extents:
        raise ConfigError("tau > 0 requires merge_equal_extents")
    if not aset.assertions:
        raise EmptyCorpusError("cannot induce a hierarchy from an empty corpus")
    conflicts = check_consistency(aset)
    if conflicts:
        shown = ", ".join(f"({p.token}, {c.name})" for p, c in conflicts[:5])
        raise ConsistencyError(
            f"corpus is inconsistent ({len(conflicts)} conflicting pair(s)): {shown}"
        )

    extents: dict[str, frozenset[str]] = {}
    for prop in aset.sensible_properties():
        members = frozenset(c.name for c in extent(aset, prop))
        if members:
            extents[prop.token] = members
    if not extents:
        raise EmptyCorpusError("corpus has no sensible assertions")

    if cfg.merge_equal_extents:
        by_extent: dict[frozenset[str], list[str]] = {}
        for token in sorted(extents):
            by_extent.setdefault(extents[token], []).append(token)
        groups = [_Group(ext, tuple(sorted(props))) for ext, props in by_extent.items()]
    else:
        groups = [_Group(extents[token], (token,)) for token in sorted(extents)]

    if cfg.tau > 0:
        groups = _merge_mutual_inclusions(groups, cfg.tau)

    groups.sort(key=_Group.sort_key)
    edges = _transitive_reduction(len(groups), _candidate_edges(groups, cfg.tau))

    all_concepts = frozenset(c.name for c in aset.concepts)
    root_index = next((i for i, g in enumerate(groups) if g.extent == all_concepts), None)
    if root_index is None:
        groups.append(_Group(all_concepts, ()))
        groups.sort(key=_Group.sort_key)
        # re-index edges after the sort; the synthetic root lands at index 0
        # because its extent is strictly the largest
        if groups[0].props != ():  # pragma: no cover - guarded by construction
            raise OntologyError("internal error: synthetic root is not the largest node")
        edges = {(u + 1, v + 1) for u, v in edges}
        root_index = 0
        with_parent = {v for _, v in edges}
        for i in range(1, len(groups)):
            if i not in with_parent:
                edges.add((0, i))

    child_union: dict[int, set[str]] = {i: set() for i in range(len(groups))}
    for u, v in edges:
        child_union[u] |= groups[v].extent

    nodes = tuple(
        TypeNode(
            id=i,
            extent=g.extent,
            characteristic_properties=g.props,
            direct_members=frozenset(g.extent - child_union[i]),
        )
        for i, g in enumerate(groups)
    )

    parent_count: dict[int, int] = {}
    for _, v in edges:
        parent_count[v] = parent_count.get(v, 0) + 1
    diagnostics = tuple(
        f"node {i} ({', '.join(nodes[i].characteristic_properties) or ROOT_LABEL}) "
        f"has {parent_count[i]} parents"
        for i in sorted(parent_count)
        if parent_count[i] > 2
    )

    return TypeDag(
        nodes=nodes,
        edges=tuple(sorted(edges)),
        root=root_index,
        diagnostics=diagnostics,
    )


def verify(
    dag: TypeDag,
    fact: TypedFact,
    aset: AssertionSet,
    labels: Mapping[str, str] | None = None,
) -> VerifyResult:
    """Check a type-level applicability claim against the corpus.

    Consistent iff every concept in the named node's extent has a sensible
    assertion for the property (closed world); otherwise the violating
    concepts are returned.
    """
    node = dag.resolve(fact.type_name, labels)
    covered = {c.name for c in extent(aset, fact.property)}
    violations = tuple(sorted(node.extent - covered))
    return VerifyResult(consistent=not violations, violations=violations)


# --- exports -----------------------------------------------------------------

def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def node_label(node: TypeNode, labels: Mapping[str, str] | None = None) -> str | None:
    """Human-readable name for a node, if the label map provides one."""
    if node.is_synthetic_root:
        return ROOT_LABEL
    if labels:
        for prop in node.characteristic_properties:
            if prop in labels:
                return labels[prop]
    return None


def export_dot(dag: TypeDag, labels: Mapping[str, str] | None = None) -> str:
    """Render the DAG as a DOT digraph with deterministic ordering."""
    lines = ["digraph concept_hierarchy {", "  node [shape=box];"]
    for node in sorted(dag.nodes, key=lambda n: n.id):
        caption: list[str] = []
        name = node_label(node, labels)
        if name:
            caption.append(name)
        caption.append(", ".join(node.characteristic_properties) or "(no properties)")
        if node.direct_members:
            caption.append("members: " + ", ".join(sorted(node.direct_members)))
        text = _dot_escape("\\n".join(caption))
        lines.append(f'  n{node.id} [label="{text}"];')
    for parent, child in sorted(dag.edges):
        lines.append(f"  n{parent} -> n{child};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dag_to_json(dag: TypeDag) -> dict:
    return {
        "nodes": [
            {
                "id": n.id,
                "extent": sorted(n.extent),
                "props": list(n.characteristic_properties),
                "members": sorted(n.direct_members),
            }
            for n in sorted(dag.nodes, key=lambda n: n.id)
        ],
        "edges": [list(e) for e in sorted(dag.edges)],
        "root": dag.root,
    }


def dag_to_json_text(dag: TypeDag) -> str:
    return jsonio.dumps(dag_to_json(dag))


def dag_from_json(data: object) -> TypeDag:
    if not isinstance(data, dict):
        raise OntologyError("ontology JSON must be an object")
    try:
        raw_nodes = data["nodes"]
        raw_edges = data["edges"]
        root = int(data["root"])
    except (KeyError, TypeError, ValueError) as exc:
        raise OntologyError(f"ontology JSON is missing nodes/edges/root: {exc}") from exc
    nodes = []
    seen_ids: set[int] = set()
    for i, raw in enumerate(raw_nodes):
        try:
            node = TypeNode(
                id=int(raw["id"]),
                extent=frozenset(str(x) for x in raw["extent"]),
                characteristic_properties=tuple(str(p) for p in raw["props"]),
                direct_members=frozenset(str(x) for x in raw["members"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise OntologyError(f"ontology JSON: node {i}: {exc}") from exc
        if node.id in seen_ids:
            raise OntologyError(f"ontology JSON: duplicate node id {node.id}")
        if not node.direct_members <= node.extent:
            raise OntologyError(f"ontology JSON: node {node.id}: members not within extent")
        seen_ids.add(node.id)
        nodes.append(node)
    if root not in seen_ids:
        raise OntologyError(f"ontology JSON: root {root} is not a node id")
    edges = []
    for i, raw in enumerate(raw_edges):
        try:
            parent, child = (int(raw[0]), int(raw[1]))
        except (TypeError, ValueError, IndexError) as exc:
            raise OntologyError(f"ontology JSON: edge {i}: {exc}") from exc
        if parent not in seen_ids or child not in seen_ids:
            raise OntologyError(f"ontology JSON: edge {i} references unknown node")
        edges.append((parent, child))

    parent_count: dict[int, int] = {}
    for _, child in edges:
        parent_count[child] = parent_count.get(child, 0) + 1
    by_id = {n.id: n for n in nodes}
    diagnostics = tuple(
        f"node {i} ({', '.join(by_id[i].characteristic_properties) or ROOT_LABEL}) "
        f"has {parent_count[i]} parents"
        for i in sorted(parent_count)
        if parent_count[i] > 2
    )
    return TypeDag(
        nodes=tuple(sorted(nodes, key=lambda n: n.id)),
        edges=tuple(sorted(edges)),
        root=root,
        diagnostics=diagnostics,
    )


def dag_from_json_text(text: str) -> TypeDag:
    return dag_from_json(jsonio.loads(text, what="ontology JSON"))
