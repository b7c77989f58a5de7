"""Discrete multi-agent influence diagram data model.

A diagram is a DAG of typed nodes (decision, chance, deterministic, value,
utility) owned by agents with opposed interests. Chance nodes belong to
nature; decision, value and utility nodes belong to a defender or attacker
agent. All tables are total over the Cartesian product of their parents'
domains, and parent order is the key order for every table lookup.

Diagrams are immutable after construction. `build_diagram` refuses to hand
out anything that fails validation; `validate_diagram` reports every
violation it can find instead of stopping at the first.
"""
from __future__ import annotations

import enum
import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

ROW_SUM_TOL = 1e-9
WEIGHT_SUM_TOL = 1e-9


class AgentKind(enum.Enum):
    DEFENDER = "defender"
    ATTACKER = "attacker"
    NATURE = "nature"


class NodeKind(enum.Enum):
    DECISION = "decision"
    CHANCE = "chance"
    DETERMINISTIC = "deterministic"
    VALUE = "value"
    UTILITY = "utility"


@dataclass(frozen=True)
class Agent:
    id: str
    kind: AgentKind
    display_name: str = ""


@dataclass(frozen=True)
class Domain:
    """Ordered finite outcome labels, optionally tagged with numeric values.

    Numeric tags carry the monetary amount (or unitless score) a label
    stands for; value functions of form linear/power_root read them.
    Tags are all-or-none: either every label has one or none does.
    """

    labels: tuple[str, ...]
    numeric_tags: tuple[float, ...] | None = None

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def tag(self, label: str) -> float:
        if self.numeric_tags is None:
            raise ValueError(f"domain has no numeric tags (label {label!r})")
        return self.numeric_tags[self.labels.index(label)]

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class Cpt:
    """Conditional probability table: parent-value tuple -> distribution.

    Each row is a probability vector over the child domain, in domain
    order. Rows must cover exactly the Cartesian product of the parent
    domains and sum to 1 within ROW_SUM_TOL.
    """

    rows: Mapping[tuple[str, ...], tuple[float, ...]]


@dataclass(frozen=True)
class DetTable:
    """Deterministic node: parent-value tuple -> single output label."""

    rows: Mapping[tuple[str, ...], str]


@dataclass(frozen=True)
class ValueSpec:
    """Score function attached to a value node.

    Forms:
      table      -- explicit parent-tuple -> score rows
      linear     -- v = offset - x / scale, x = parent label's numeric tag
      power_root -- v = (x / scale) ** (1 / root)
      indicator  -- labels in `one_labels` score 1, labels in `zero_labels` 0
    """

    form: str
    rows: Mapping[tuple[str, ...], float] | None = None
    scale: float | None = None
    offset: float | None = None
    root: float | None = None
    zero_labels: frozenset[str] = frozenset()
    one_labels: frozenset[str] = frozenset()

    FORMS = ("table", "linear", "power_root", "indicator")

    def score(self, parent_values: tuple[str, ...], parent_domains: Sequence[Domain]) -> float:
        if self.form == "table":
            assert self.rows is not None
            return self.rows[parent_values]
        if self.form == "indicator":
            (label,) = parent_values
            return 1.0 if label in self.one_labels else 0.0
        (label,) = parent_values
        x = parent_domains[0].tag(label)
        if self.form == "linear":
            return self.offset - x / self.scale
        if self.form == "power_root":
            if x < 0:
                raise ValueError(f"power_root value function needs x >= 0, got {x}")
            return (x / self.scale) ** (1.0 / self.root)
        raise ValueError(f"unknown value form {self.form!r}")


@dataclass(frozen=True)
class UtilitySpec:
    """Additive utility: weights over an agent's value nodes, summing to 1."""

    weights: Mapping[str, float]


Payload = Cpt | DetTable | ValueSpec | UtilitySpec | None


@dataclass(frozen=True)
class Node:
    id: str
    kind: NodeKind
    owner: str | None = None  # agent id; None means nature
    domain: Domain | None = None  # None for value and utility nodes
    parents: tuple[str, ...] = ()
    payload: Payload = None


@dataclass(frozen=True)
class Violation:
    """A single structural-invariant failure, as data."""

    code: str
    message: str
    node: str | None = None
    key: tuple[str, ...] | None = None

    def __str__(self) -> str:
        return self.message


class DiagramError(ValueError):
    """Raised by build_diagram when the assembled definitions are invalid."""

    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        lines = "\n".join(f"  - {v}" for v in self.violations)
        super().__init__(f"invalid diagram ({len(self.violations)} violation(s)):\n{lines}")


@dataclass(frozen=True)
class Diagram:
    """Immutable diagram: agents, nodes and per-agent decision order.

    `decision_order[agent_id]` is the temporal sequence in which that
    agent's decisions are taken; a decision's parents are the information
    observed at decision time.
    """

    agents: tuple[Agent, ...]
    nodes: Mapping[str, Node]
    decision_order: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def agent(self, agent_id: str) -> Agent:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise KeyError(f"no agent {agent_id!r}")

    def node(self, node_id: str) -> Node:
        return self.nodes[node_id]

    def nodes_of_kind(self, kind: NodeKind) -> list[Node]:
        return [n for n in self.nodes.values() if n.kind == kind]

    def decisions_of(self, agent_id: str) -> list[Node]:
        return [n for n in self.nodes.values()
                if n.kind == NodeKind.DECISION and n.owner == agent_id]

    def utility_node_of(self, agent_id: str) -> Node:
        found = [n for n in self.nodes.values()
                 if n.kind == NodeKind.UTILITY and n.owner == agent_id]
        if len(found) != 1:
            raise ValueError(f"agent {agent_id!r} has {len(found)} utility nodes, expected 1")
        return found[0]

    def children(self, node_id: str) -> list[str]:
        return [n.id for n in self.nodes.values() if node_id in n.parents]

    def replace_nodes(self, new_nodes: Iterable[Node],
                      decision_order: Mapping[str, tuple[str, ...]] | None = None) -> "Diagram":
        """Copy with some nodes swapped out (same ids); revalidates."""
        merged = dict(self.nodes)
        for n in new_nodes:
            merged[n.id] = n
        order = decision_order if decision_order is not None else self.decision_order
        return build_diagram(self.agents, merged.values(), order)


def stochastic_row_violation(probs: Sequence[float]) -> str | None:
    """Check one probability row; returns a problem description or None.

    Shared with the model-format parser so row diagnostics carry the same
    wording with a line number attached.
    """
    if any(p < 0.0 or p > 1.0 for p in probs):
        return "probability outside [0, 1]"
    total = sum(probs)
    if abs(total - 1.0) > ROW_SUM_TOL:
        return f"row sums to {total:.10g}"
    return None


def parent_tuples(diagram_nodes: Mapping[str, Node], node: Node) -> Iterable[tuple[str, ...]]:
    """All parent-value tuples of `node`, in parent-domain product order."""
    domains = []
    for pid in node.parents:
        parent = diagram_nodes[pid]
        if parent.domain is None:
            return  # invalid structure; caught elsewhere
        domains.append(parent.domain.labels)
    yield from itertools.product(*domains)


def build_diagram(agents: Iterable[Agent], nodes: Iterable[Node],
                  decision_order: Mapping[str, Sequence[str]] | None = None) -> Diagram:
    """Assemble and validate a diagram.

    Raises DiagramError carrying the full violation list when anything is
    wrong; never returns a partially valid diagram.
    """
    # canonical storage: agents sorted by id, empty decision orders dropped,
    # so that equal diagrams compare equal regardless of assembly order
    agents = tuple(sorted(agents, key=lambda a: a.id))
    node_list = list(nodes)
    node_map: dict[str, Node] = {}
    dup: list[Violation] = []
    for n in node_list:
        if n.id in node_map:
            dup.append(Violation("duplicate-id", f"duplicate node id {n.id!r}", node=n.id))
        node_map[n.id] = n
    order = {a: tuple(seq) for a, seq in (decision_order or {}).items() if len(tuple(seq))}
    d = Diagram(agents=agents, nodes=node_map, decision_order=order)
    violations = dup + validate_diagram(d)
    if violations:
        raise DiagramError(violations)
    return d


def validate_diagram(d: Diagram) -> list[Violation]:
    """Exhaustive structural check; returns every violation found."""
    v: list[Violation] = []
    agent_ids = [a.id for a in d.agents]
    for a_id in agent_ids:
        if agent_ids.count(a_id) > 1:
            v.append(Violation("duplicate-id", f"duplicate agent id {a_id!r}"))
    nature = [a for a in d.agents if a.kind == AgentKind.NATURE]
    if len(nature) > 1:
        v.append(Violation("multiple-nature", "more than one nature agent declared"))
    nature_ids = {a.id for a in nature}
    player_ids = {a.id for a in d.agents if a.kind != AgentKind.NATURE}

    for n in d.nodes.values():
        v.extend(_check_node_shape(d, n, player_ids, nature_ids))

    v.extend(_check_graph(d))
    v.extend(_check_decision_orders(d))
    return v


def _check_node_shape(d: Diagram, n: Node, player_ids: set[str],
                      nature_ids: set[str]) -> list[Violation]:
    v: list[Violation] = []
    for pid in n.parents:
        if pid not in d.nodes:
            v.append(Violation("unknown-parent",
                               f"node {n.id!r} references unknown parent {pid!r}", node=n.id))
    if len(set(n.parents)) != len(n.parents):
        v.append(Violation("duplicate-parent", f"node {n.id!r} lists a parent twice", node=n.id))

    owned_kinds = (NodeKind.DECISION, NodeKind.VALUE, NodeKind.UTILITY)
    if n.kind in owned_kinds and n.owner not in player_ids:
        v.append(Violation("ownership",
                           f"{n.kind.value} node {n.id!r} must be owned by a declared "
                           f"defender/attacker agent", node=n.id))
    if n.kind == NodeKind.CHANCE and n.owner is not None and n.owner not in nature_ids:
        v.append(Violation("ownership",
                           f"chance node {n.id!r} cannot be owned by a defender/attacker",
                           node=n.id))
    if n.kind == NodeKind.DETERMINISTIC and n.owner is not None and n.owner not in (
            player_ids | nature_ids):
        v.append(Violation("ownership",
                           f"deterministic node {n.id!r} has unknown owner {n.owner!r}",
                           node=n.id))

    needs_domain = n.kind in (NodeKind.DECISION, NodeKind.CHANCE, NodeKind.DETERMINISTIC)
    if needs_domain and n.domain is None:
        v.append(Violation("missing-domain", f"node {n.id!r} needs a domain", node=n.id))
    if n.kind in (NodeKind.VALUE, NodeKind.UTILITY) and n.domain is not None:
        v.append(Violation("unexpected-domain",
                           f"{n.kind.value} node {n.id!r} must not declare a domain", node=n.id))
    if n.domain is not None:
        v.extend(_check_domain(n))

    if any(pid not in d.nodes for pid in n.parents):
        return v  # table checks need resolvable parents

    if n.kind == NodeKind.CHANCE:
        if not isinstance(n.payload, Cpt):
            v.append(Violation("missing-table", f"chance node {n.id!r} needs a CPT", node=n.id))
        elif n.domain is not None:
            v.extend(_check_cpt(d, n))
    elif n.kind == NodeKind.DETERMINISTIC:
        if not isinstance(n.payload, DetTable):
            v.append(Violation("missing-table",
                               f"deterministic node {n.id!r} needs a table", node=n.id))
        elif n.domain is not None:
            v.extend(_check_det(d, n))
    elif n.kind == NodeKind.VALUE:
        if not isinstance(n.payload, ValueSpec):
            v.append(Violation("missing-spec", f"value node {n.id!r} needs a value spec", node=n.id))
        else:
            v.extend(_check_value(d, n))
    elif n.kind == NodeKind.UTILITY:
        if not isinstance(n.payload, UtilitySpec):
            v.append(Violation("missing-spec",
                               f"utility node {n.id!r} needs a utility spec", node=n.id))
        else:
            v.extend(_check_utility(d, n))
    elif n.kind == NodeKind.DECISION and n.payload is not None:
        v.append(Violation("unexpected-payload",
                           f"decision node {n.id!r} must not carry a table", node=n.id))
    return v


def _check_domain(n: Node) -> list[Violation]:
    v = []
    dom = n.domain
    if len(dom.labels) < 1:
        v.append(Violation("empty-domain", f"node {n.id!r} has an empty domain", node=n.id))
    if len(set(dom.labels)) != len(dom.labels):
        v.append(Violation("duplicate-label", f"node {n.id!r} repeats a domain label", node=n.id))
    if dom.numeric_tags is not None and len(dom.numeric_tags) != len(dom.labels):
        v.append(Violation("tag-arity",
                           f"node {n.id!r}: numeric tags must cover every label or none",
                           node=n.id))
    return v


def _check_cpt(d: Diagram, n: Node) -> list[Violation]:
    v = []
    expected = set(parent_tuples(d.nodes, n))
    got = set(n.payload.rows)
    for missing in sorted(expected - got):
        v.append(Violation("incomplete-table",
                           f"incomplete table: node {n.id!r} missing row {missing}",
                           node=n.id, key=missing))
    for extra in sorted(got - expected):
        v.append(Violation("extra-row",
                           f"node {n.id!r} has a row for unknown parent tuple {extra}",
                           node=n.id, key=extra))
    for key, row in n.payload.rows.items():
        if key not in expected:
            continue
        if len(row) != len(n.domain):
            v.append(Violation("row-arity",
                               f"node {n.id!r} row {key}: {len(row)} entries for "
                               f"{len(n.domain)} labels", node=n.id, key=key))
            continue
        problem = stochastic_row_violation(row)
        if problem:
            v.append(Violation("non-stochastic-row",
                               f"non-stochastic row: node {n.id!r} row {key}: {problem}",
                               node=n.id, key=key))
    return v


def _check_det(d: Diagram, n: Node) -> list[Violation]:
    v = []
    expected = set(parent_tuples(d.nodes, n))
    got = set(n.payload.rows)
    for missing in sorted(expected - got):
        v.append(Violation("incomplete-table",
                           f"incomplete table: node {n.id!r} missing row {missing}",
                           node=n.id, key=missing))
    for extra in sorted(got - expected):
        v.append(Violation("extra-row",
                           f"node {n.id!r} has a row for unknown parent tuple {extra}",
                           node=n.id, key=extra))
    for key, label in n.payload.rows.items():
        if key in expected and label not in n.domain.labels:
            v.append(Violation("unknown-output",
                               f"node {n.id!r} row {key} outputs {label!r}, not in domain",
                               node=n.id, key=key))
    return v


def _check_value(d: Diagram, n: Node) -> list[Violation]:
    v = []
    spec: ValueSpec = n.payload
    if spec.form not in ValueSpec.FORMS:
        return [Violation("bad-form", f"value node {n.id!r}: unknown form {spec.form!r}", node=n.id)]
    if spec.form == "table":
        if spec.rows is None:
            return [Violation("missing-spec", f"value node {n.id!r}: table form without rows",
                              node=n.id)]
        expected = set(parent_tuples(d.nodes, n))
        got = set(spec.rows)
        for missing in sorted(expected - got):
            v.append(Violation("incomplete-table",
                               f"incomplete table: value node {n.id!r} missing row {missing}",
                               node=n.id, key=missing))
        for extra in sorted(got - expected):
            v.append(Violation("extra-row",
                               f"value node {n.id!r} has a row for unknown tuple {extra}",
                               node=n.id, key=extra))
        for key, s in spec.rows.items():
            if not math.isfinite(s):
                v.append(Violation("non-finite-score",
                                   f"value node {n.id!r} row {key} is not finite",
                                   node=n.id, key=key))
        return v
    # single-parent analytic forms
    if len(n.parents) != 1:
        return [Violation("value-parents",
                          f"value node {n.id!r}: form {spec.form!r} needs exactly one parent",
                          node=n.id)]
    parent = d.nodes[n.parents[0]]
    if spec.form == "indicator":
        labels = set(parent.domain.labels) if parent.domain else set()
        if (spec.zero_labels | spec.one_labels) != labels or (spec.zero_labels & spec.one_labels):
            v.append(Violation("indicator-labels",
                               f"value node {n.id!r}: zero/one label sets must partition the "
                               f"parent domain", node=n.id))
        return v
    if parent.domain is None or parent.domain.numeric_tags is None:
        v.append(Violation("missing-tags",
                           f"value node {n.id!r}: parent {parent.id!r} needs numeric tags",
                           node=n.id))
        return v
    if not spec.scale:
        v.append(Violation("bad-parameter",
                           f"value node {n.id!r}: scale must be nonzero", node=n.id))
    if spec.form == "linear" and spec.offset is None:
        v.append(Violation("bad-parameter", f"value node {n.id!r}: linear form needs an offset",
                           node=n.id))
    if spec.form == "power_root":
        if not spec.root:
            v.append(Violation("bad-parameter",
                               f"value node {n.id!r}: power_root form needs a nonzero root",
                               node=n.id))
        if any(t < 0 for t in parent.domain.numeric_tags):
            v.append(Violation("negative-tag",
                               f"value node {n.id!r}: power_root needs nonnegative tags",
                               node=n.id))
    return v


def _check_utility(d: Diagram, n: Node) -> list[Violation]:
    v = []
    spec: UtilitySpec = n.payload
    if set(spec.weights) != set(n.parents):
        v.append(Violation("weight-keys",
                           f"utility node {n.id!r}: weights must cover exactly its parents",
                           node=n.id))
    for pid in n.parents:
        p = d.nodes.get(pid)
        if p is not None and (p.kind != NodeKind.VALUE or p.owner != n.owner):
            v.append(Violation("utility-parents",
                               f"utility node {n.id!r}: parent {pid!r} is not a value node of "
                               f"the same agent", node=n.id))
    if any(w < 0.0 or w > 1.0 for w in spec.weights.values()):
        v.append(Violation("weight-range",
                           f"utility node {n.id!r}: weights must lie in [0, 1]", node=n.id))
    total = sum(spec.weights.values())
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        v.append(Violation("weight-sum",
                           f"utility node {n.id!r}: weights sum to {total:.10g}", node=n.id))
    return v


def _ancestors(d: Diagram, start: str) -> set[str]:
    seen: set[str] = set()
    stack = [p for p in d.nodes[start].parents if p in d.nodes]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        stack.extend(p for p in d.nodes[cur].parents if p in d.nodes)
    return seen


def _check_graph(d: Diagram) -> list[Violation]:
    """Cycle and temporal-order checks.

    Arcs into decision nodes are information arcs, not causal ones. A
    directed cycle that never enters a decision node is a structural cycle;
    a parent of a decision that (transitively) depends on the decision
    itself, or on a later decision of the same agent, is an information arc
    that cannot be resolved in time.
    """
    v: list[Violation] = []
    ids = set(d.nodes)

    # causal subgraph: drop arcs into decision nodes
    indeg = {i: 0 for i in ids}
    children: dict[str, list[str]] = {i: [] for i in ids}
    for n in d.nodes.values():
        if n.kind == NodeKind.DECISION:
            continue
        for p in n.parents:
            if p in ids:
                children[p].append(n.id)
                indeg[n.id] += 1
    queue = [i for i in sorted(ids) if indeg[i] == 0]
    done = 0
    while queue:
        cur = queue.pop()
        done += 1
        for c in children[cur]:
            indeg[c] -= 1
            if indeg[c] == 0:
                queue.append(c)
    if done != len(ids):
        cyclic = sorted(i for i in ids if indeg[i] > 0)
        v.append(Violation("cycle", f"cycle detected among nodes {cyclic}"))

    # information arcs must be resolvable before the decision is taken
    for n in d.nodes.values():
        if n.kind != NodeKind.DECISION:
            continue
        later = _later_decisions(d, n)
        for p in n.parents:
            if p not in ids:
                continue
            upstream = _ancestors(d, p) | {p}
            if n.id in upstream:
                v.append(Violation(
                    "temporal-order",
                    f"information arc violates temporal order: {p!r} -> {n.id!r} "
                    f"(observed node depends on the decision itself)", node=n.id))
            elif upstream & later:
                bad = sorted(upstream & later)
                v.append(Violation(
                    "temporal-order",
                    f"information arc violates temporal order: {p!r} -> {n.id!r} "
                    f"(observed node depends on later decision(s) {bad})", node=n.id))
    return v


def _later_decisions(d: Diagram, n: Node) -> set[str]:
    seq = d.decision_order.get(n.owner or "", ())
    if n.id not in seq:
        return set()
    return set(seq[seq.index(n.id) + 1:])


def _check_decision_orders(d: Diagram) -> list[Violation]:
    v = []
    for a in d.agents:
        if a.kind == AgentKind.NATURE:
            continue
        decisions = {n.id for n in d.decisions_of(a.id)}
        declared = d.decision_order.get(a.id, ())
        if set(declared) != decisions or len(set(declared)) != len(declared):
            if declared or decisions:
                v.append(Violation("order-coverage",
                                   f"decision order for agent {a.id!r} must list exactly its "
                                   f"decision nodes {sorted(decisions)}, got {list(declared)}"))
            continue
        for i, dec in enumerate(declared):
            node = d.nodes[dec]
            for p in node.parents:
                if p in declared and declared.index(p) >= i:
                    v.append(Violation(
                        "temporal-order",
                        f"information arc violates temporal order: decision {p!r} is observed "
                        f"by {dec!r} but is not declared earlier", node=dec))
    return v


def topological_order(d: Diagram) -> list[str]:
    """Parents-before-children order; ties broken by ascending node id."""
    indeg = {i: 0 for i in d.nodes}
    children: dict[str, list[str]] = {i: [] for i in d.nodes}
    for n in d.nodes.values():
        for p in n.parents:
            children[p].append(n.id)
            indeg[n.id] += 1
    heap = [i for i in d.nodes if indeg[i] == 0]
    heapq.heapify(heap)
    out: list[str] = []
    while heap:
        cur = heapq.heappop(heap)
        out.append(cur)
        for c in children[cur]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(heap, c)
    if len(out) != len(d.nodes):
        raise ValueError("diagram has a cycle; validate before ordering")
    return out
