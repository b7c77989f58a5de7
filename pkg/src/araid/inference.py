"""Exact inference and expected utility over influence diagrams.

Two independent evaluation routes live here on purpose:

* a variable-elimination engine on numpy factors (the production path, used
  by tables and the adversarial solver), and
* a brute-force enumerator over joint assignments (the reference oracle the
  tests hold the engine against).

All operations are pure functions of immutable inputs; cells of a decision
table may be evaluated concurrently by callers.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .diagram import (
    Diagram,
    Node,
    NodeKind,
    UtilitySpec,
    ValueSpec,
    topological_order,
)

# A decision rule maps each observed-parent tuple to a chosen alternative;
# a policy assigns a rule to every decision node it covers.
DecisionRule = Mapping[tuple[str, ...], str]
Policy = Mapping[str, DecisionRule]
Evidence = Mapping[str, str]

EU_AGREEMENT_TOL = 1e-9  # spread allowed when several opponent fixings define a cell


class ImpossibleEvidenceError(ValueError):
    """The conditioning event has probability zero under the given policy."""


class AmbiguousCellError(ValueError):
    """A table cell's value depends on an opponent decision left unfixed."""


def parent_tuples_of(d: Diagram, node_id: str):
    """Parent-value tuples of one node, in parent-domain product order."""
    from .diagram import parent_tuples
    return parent_tuples(d.nodes, d.nodes[node_id])


def constant_rule(d: Diagram, decision: str, alternative: str) -> dict[tuple[str, ...], str]:
    """Rule choosing `alternative` for every observed-parent tuple."""
    node = d.nodes[decision]
    if alternative not in node.domain.labels:
        raise ValueError(f"{alternative!r} is not an alternative of {decision!r}")
    from .diagram import parent_tuples
    return {key: alternative for key in parent_tuples(d.nodes, node)}


def constant_policy(d: Diagram, choices: Mapping[str, str]) -> dict[str, dict[tuple[str, ...], str]]:
    return {dec: constant_rule(d, dec, alt) for dec, alt in choices.items()}


def _check_policy(d: Diagram, policy: Policy, covered: Iterable[str]) -> None:
    from .diagram import parent_tuples
    for dec in covered:
        node = d.nodes[dec]
        if dec not in policy:
            raise ValueError(f"policy missing a rule for decision {dec!r}")
        rule = policy[dec]
        for key in parent_tuples(d.nodes, node):
            if key not in rule:
                raise ValueError(f"rule for {dec!r} missing observed tuple {key}")
            if rule[key] not in node.domain.labels:
                raise ValueError(f"rule for {dec!r} picks {rule[key]!r}, not in its domain")


def _check_evidence(d: Diagram, evidence: Evidence) -> None:
    for nid, label in evidence.items():
        node = d.nodes.get(nid)
        if node is None:
            raise ValueError(f"evidence on unknown node {nid!r}")
        if node.kind not in (NodeKind.CHANCE, NodeKind.DETERMINISTIC):
            raise ValueError(f"evidence keys must be chance/deterministic nodes, got {nid!r}")
        if label not in node.domain.labels:
            raise ValueError(f"evidence label {label!r} not in domain of {nid!r}")


# ---------------------------------------------------------------------------
# factor algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    vars: tuple[str, ...]
    table: np.ndarray  # one axis per var, in order

    def reduce(self, var: str, index: int) -> "Factor":
        axis = self.vars.index(var)
        return Factor(self.vars[:axis] + self.vars[axis + 1:],
                      np.take(self.table, index, axis=axis))


def _letters(order: Mapping[str, int]):
    import string
    alphabet = string.ascii_letters
    return {v: alphabet[i] for v, i in order.items()}


class ContractionTape:
    """Planned sum-product: the elimination schedule, replayable on new tables.

    Variables outside `keep` are eliminated deepest-first (reverse
    topological), ties broken by how few factors mention them, then by id.
    Planning once and replaying matters for Monte Carlo loops that swap a
    couple of factor tables thousands of times.
    """

    def __init__(self, var_lists: Sequence[tuple[str, ...]], keep: Sequence[str],
                 elim_priority: Mapping[str, tuple]):
        self.keep = tuple(keep)
        all_vars: dict[str, int] = {}
        for vs in var_lists:
            for v in vs:
                all_vars.setdefault(v, len(all_vars))
        letters = _letters(all_vars)
        keep_set = set(keep)
        elim = [v for v in all_vars if v not in keep_set]
        elim.sort(key=lambda v: (elim_priority.get(v, (0,)),
                                 sum(v in vs for vs in var_lists), v))

        # slots: initial factors first, step results appended after
        live: list[tuple[int, tuple[str, ...]]] = list(enumerate(var_lists))
        next_slot = len(var_lists)
        self.steps: list[tuple[str, tuple[int, ...]]] = []
        for v in elim:
            group = [(s, vs) for s, vs in live if v in vs]
            if not group:
                continue
            rest = [(s, vs) for s, vs in live if v not in vs]
            out_vars = tuple(dict.fromkeys(w for _, vs in group for w in vs if w != v))
            spec = ",".join("".join(letters[w] for w in vs) for _, vs in group)
            spec += "->" + "".join(letters[w] for w in out_vars)
            self.steps.append((spec, tuple(s for s, _ in group)))
            live = rest + [(next_slot, out_vars)]
            next_slot += 1

        self.present = [v for v in keep if any(v in vs for _, vs in live)]
        if live:
            spec = ",".join("".join(letters[w] for w in vs) for _, vs in live)
            spec += "->" + "".join(letters[w] for w in self.present)
            self.steps.append((spec, tuple(s for s, _ in live)))
        self.missing_axes = [i for i, v in enumerate(keep) if v not in self.present]
        self.n_inputs = len(var_lists)

    def execute(self, tables: Sequence[np.ndarray]) -> np.ndarray:
        slots = list(tables)
        if not self.steps:
            result = np.array(1.0)
        else:
            for spec, operands in self.steps:
                slots.append(np.einsum(spec, *(slots[i] for i in operands)))
            result = slots[-1]
        # axes come out in keep order already; insert singleton axes for kept
        # variables no factor mentions so callers can broadcast (the result
        # is constant along them)
        for i in self.missing_axes:
            result = np.expand_dims(result, axis=i)
        return result


def _contract(factors: Sequence[Factor], keep: Sequence[str],
              elim_priority: Mapping[str, tuple]) -> np.ndarray:
    tape = ContractionTape([f.vars for f in factors], keep, elim_priority)
    return tape.execute([f.table for f in factors])


# ---------------------------------------------------------------------------
# compiled model
# ---------------------------------------------------------------------------

@dataclass
class CompiledModel:
    """Diagram lowered to numpy factors, ready for repeated queries.

    `overrides` in query methods lets callers swap individual probability
    factors or utility weights per evaluation without rebuilding (the
    adversarial solver leans on this for Monte Carlo draws).
    """

    diagram: Diagram
    sizes: dict[str, int] = field(default_factory=dict)
    prob_factors: dict[str, Factor] = field(default_factory=dict)
    value_factors: dict[str, Factor] = field(default_factory=dict)
    elim_priority: dict[str, tuple] = field(default_factory=dict)

    @classmethod
    def compile(cls, d: Diagram) -> "CompiledModel":
        m = cls(diagram=d)
        topo = topological_order(d)
        depth = {nid: i for i, nid in enumerate(topo)}
        m.elim_priority = {nid: (-depth[nid],) for nid in topo}
        for n in d.nodes.values():
            if n.domain is not None:
                m.sizes[n.id] = len(n.domain)
        for n in d.nodes.values():
            if n.kind == NodeKind.CHANCE:
                m.prob_factors[n.id] = m._cpt_factor(n)
            elif n.kind == NodeKind.DETERMINISTIC:
                m.prob_factors[n.id] = m._det_factor(n)
            elif n.kind == NodeKind.VALUE:
                m.value_factors[n.id] = m._value_factor(n)
        return m

    def _cpt_factor(self, n: Node) -> Factor:
        vars_ = n.parents + (n.id,)
        shape = [self.sizes[v] for v in vars_]
        table = np.zeros(shape)
        parents = [self.diagram.nodes[p] for p in n.parents]
        for key, row in n.payload.rows.items():
            idx = tuple(p.domain.index(lbl) for p, lbl in zip(parents, key))
            table[idx] = row
        return Factor(vars_, table)

    def _det_factor(self, n: Node) -> Factor:
        vars_ = n.parents + (n.id,)
        table = np.zeros([self.sizes[v] for v in vars_])
        parents = [self.diagram.nodes[p] for p in n.parents]
        for key, label in n.payload.rows.items():
            idx = tuple(p.domain.index(lbl) for p, lbl in zip(parents, key))
            table[idx + (n.domain.index(label),)] = 1.0
        return Factor(vars_, table)

    def _value_factor(self, n: Node, spec: ValueSpec | None = None) -> Factor:
        from .diagram import parent_tuples
        spec = spec if spec is not None else n.payload
        parents = [self.diagram.nodes[p] for p in n.parents]
        table = np.zeros([self.sizes[p.id] for p in parents])
        domains = [p.domain for p in parents]
        for key in parent_tuples(self.diagram.nodes, n):
            idx = tuple(p.domain.index(lbl) for p, lbl in zip(parents, key))
            table[idx] = spec.score(key, domains)
        return Factor(tuple(n.parents), table)

    def value_factor_with(self, node_id: str, spec: ValueSpec) -> Factor:
        """Value factor rebuilt with a substituted spec (same parents)."""
        return self._value_factor(self.diagram.nodes[node_id], spec)

    def _rule_factor(self, dec: str, rule: DecisionRule) -> Factor:
        n = self.diagram.nodes[dec]
        vars_ = n.parents + (dec,)
        table = np.zeros([self.sizes[v] for v in vars_])
        parents = [self.diagram.nodes[p] for p in n.parents]
        for key, alt in rule.items():
            idx = tuple(p.domain.index(lbl) for p, lbl in zip(parents, key))
            table[idx + (n.domain.index(alt),)] = 1.0
        return Factor(vars_, table)

    # -- query plumbing ----------------------------------------------------

    def _relevant(self, targets: Iterable[str]) -> set[str]:
        """Targets plus every ancestor (barren nodes drop out)."""
        seen: set[str] = set()
        stack = list(targets)
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(self.diagram.nodes[cur].parents)
        return seen

    def _assemble(self, policy: Policy, evidence: Evidence, targets: Iterable[str],
                  free_decisions: set[str]
                  ) -> tuple[list[tuple[str | None, Factor]], dict[str, str]]:
        """Reduced factors tagged with their override slot, plus all reductions.

        Decisions under a constant rule are bound like evidence (their axis
        is sliced away everywhere) rather than carried as 0/1 factors; that
        keeps algebra that should cancel exactly cancelling exactly.
        """
        relevant = self._relevant(targets)
        bindings: dict[str, str] = {}
        raw: list[tuple[str | None, Factor]] = []
        rule_factors: list[tuple[str, DecisionRule]] = []
        for nid in sorted(relevant):
            n = self.diagram.nodes[nid]
            if n.kind in (NodeKind.CHANCE, NodeKind.DETERMINISTIC):
                raw.append((nid, self.prob_factors[nid]))
            elif n.kind == NodeKind.DECISION:
                if nid in free_decisions:
                    continue  # kept as a free axis
                if nid not in policy:
                    raise ValueError(f"no rule or axis for decision {nid!r}")
                alternatives = set(policy[nid].values())
                if len(alternatives) == 1:
                    bindings[nid] = next(iter(alternatives))
                else:
                    rule_factors.append((nid, policy[nid]))
        reductions = dict(evidence)
        reductions.update(bindings)
        for nid, rule in rule_factors:
            raw.append((None, self._rule_factor(nid, rule)))
        return [(slot, self._reduce(f, reductions)) for slot, f in raw], reductions

    def _reduce(self, f: Factor, reductions: Mapping[str, str]) -> Factor:
        for nid, label in reductions.items():
            if nid in f.vars:
                f = f.reduce(nid, self.diagram.nodes[nid].domain.index(label))
        return f

    def probability_table(self, policy: Policy, evidence: Evidence,
                          keep: Sequence[str], extra_targets: Iterable[str] = (),
                          free_decisions: set[str] | None = None) -> np.ndarray:
        """P(evidence) as a table over `keep` (free decision/chance axes)."""
        free = free_decisions if free_decisions is not None else set()
        targets = set(keep) | set(evidence) | set(extra_targets)
        factors, _ = self._assemble(policy, evidence, targets, free)
        result = _contract([f for _, f in factors], keep, self.elim_priority)
        return np.broadcast_to(result, [self.sizes[v] for v in keep]).copy() if keep else result

    def prepare_utility_query(self, agent: str, policy: Policy, evidence: Evidence,
                              keep: Sequence[str],
                              free_decisions: set[str] | None = None,
                              value_nodes: Sequence[str] | None = None
                              ) -> "PreparedUtilityQuery":
        """Plan a conditional expected-utility query for repeated evaluation."""
        free = free_decisions if free_decisions is not None else set()
        util: UtilitySpec = self.diagram.utility_node_of(agent).payload
        if value_nodes is None:
            value_nodes = tuple(util.weights)
        base_weights = {vid: util.weights.get(vid, 0.0) for vid in value_nodes}
        value_parents: set[str] = set()
        for vid in value_nodes:
            value_parents.update(self.diagram.nodes[vid].parents)
        targets = value_parents | set(evidence) | set(keep)
        tagged, reductions = self._assemble(policy, evidence, targets, free)
        # probability factors reduced all the way to scalars multiply the
        # numerator and denominator identically; pulling them out makes the
        # cancellation exact instead of rounding twice (and catches
        # impossible evidence via an exact zero)
        scalars = [(slot, f) for slot, f in tagged if f.vars == ()]
        tagged = [(slot, f) for slot, f in tagged if f.vars != ()]
        slots = [slot for slot, _ in tagged]
        tables = [f.table for _, f in tagged]
        var_lists = [f.vars for _, f in tagged]
        norm_tape = ContractionTape(var_lists, keep, self.elim_priority)
        value_tapes: dict[str, tuple[ContractionTape, Factor]] = {}
        for vid in value_nodes:
            vf = self._reduce(self.value_factors[vid], reductions)
            value_tapes[vid] = (ContractionTape(var_lists + [vf.vars], keep,
                                                self.elim_priority), vf)
        return PreparedUtilityQuery(
            model=self, reductions=reductions, keep=tuple(keep),
            shape=tuple(self.sizes[v] for v in keep), slots=slots,
            base_tables=tables, scalar_slots=scalars, norm_tape=norm_tape,
            value_tapes=value_tapes, base_weights=base_weights)

    def utility_table(self, agent: str, policy: Policy, evidence: Evidence,
                      keep: Sequence[str],
                      free_decisions: set[str] | None = None,
                      overrides: Mapping[str, Factor] | None = None,
                      weights: Mapping[str, float] | None = None) -> np.ndarray:
        """Conditional expected utility over `keep` axes.

        Raises ImpossibleEvidenceError as soon as any cell of the
        conditioning probability table is zero; a silent NaN there would
        hide modeling bugs.
        """
        plan = self.prepare_utility_query(
            agent, policy, evidence, keep, free_decisions,
            value_nodes=tuple(weights) if weights is not None else None)
        return plan.evaluate(overrides=overrides, weights=weights)


@dataclass
class PreparedUtilityQuery:
    """Replayable utility query; per-call overrides swap factor tables.

    Override keys are node ids: chance/deterministic ids swap the
    corresponding probability factor, value-node ids swap that score
    factor. `weights` replaces the utility weights (same value nodes).
    """

    model: "CompiledModel"
    reductions: dict[str, str]  # evidence plus constant-rule decision bindings
    keep: tuple[str, ...]
    shape: tuple[int, ...]
    slots: list[str | None]
    base_tables: list[np.ndarray]
    scalar_slots: list[tuple[str | None, Factor]]
    norm_tape: ContractionTape
    value_tapes: dict[str, tuple[ContractionTape, Factor]]
    base_weights: dict[str, float]

    def evaluate(self, overrides: Mapping[str, Factor] | None = None,
                 weights: Mapping[str, float] | None = None) -> np.ndarray:
        w = self.base_weights if weights is None else weights
        if any(vid not in self.value_tapes for vid in w):
            raise ValueError("weights reference value nodes outside the prepared query")
        tables = self.base_tables
        if overrides:
            tables = list(tables)
            for i, slot in enumerate(self.slots):
                if slot is not None and slot in overrides:
                    tables[i] = self.model._reduce(
                        overrides[slot], self.reductions).table

        impossible = False
        for slot, f in self.scalar_slots:
            value = f.table
            if overrides and slot is not None and slot in overrides:
                value = self.model._reduce(overrides[slot], self.reductions).table
            if float(value) <= 0.0:
                impossible = True
        norm = self.norm_tape.execute(tables)
        if impossible or np.any(norm <= 0.0):
            raise ImpossibleEvidenceError(
                f"impossible evidence: {self.reductions!r} has zero probability "
                f"for some combination of {list(self.keep) or 'the query'}")

        total = np.zeros(self.shape) if self.keep else np.array(0.0)
        for vid, weight in w.items():
            tape, base_vf = self.value_tapes[vid]
            vf = base_vf
            if overrides and vid in overrides:
                vf = self.model._reduce(overrides[vid], self.reductions)
            num = tape.execute(tables + [vf.table])
            total = total + weight * np.broadcast_to(num, self.shape)
        return total / np.broadcast_to(norm, self.shape) if self.keep else total / norm


# ---------------------------------------------------------------------------
# public operations (variable-elimination route)
# ---------------------------------------------------------------------------

def joint_probability(d: Diagram, policy: Policy, assignment: Mapping[str, str]) -> float:
    """Chain-rule probability of one full assignment.

    The assignment must cover every decision, chance and deterministic
    node; it has probability zero as soon as any decision or deterministic
    node disagrees with its rule/table output.
    """
    _check_policy(d, policy, (n.id for n in d.nodes.values() if n.kind == NodeKind.DECISION))
    prob = 1.0
    for n in d.nodes.values():
        if n.kind in (NodeKind.VALUE, NodeKind.UTILITY):
            continue
        if n.id not in assignment:
            raise ValueError(f"assignment missing node {n.id!r}")
        label = assignment[n.id]
        if label not in n.domain.labels:
            raise ValueError(f"label {label!r} not in domain of {n.id!r}")
        key = tuple(assignment[p] for p in n.parents)
        if n.kind == NodeKind.CHANCE:
            prob *= n.payload.rows[key][n.domain.index(label)]
        elif n.kind == NodeKind.DETERMINISTIC:
            if n.payload.rows[key] != label:
                return 0.0
        else:  # decision
            if policy[n.id][key] != label:
                return 0.0
    return prob


def marginal_distribution(d: Diagram, policy: Policy, evidence: Evidence,
                          target: str) -> dict[str, float]:
    """Conditional distribution of `target` given evidence, via elimination."""
    _check_evidence(d, evidence)
    node = d.nodes[target]
    if node.domain is None:
        raise ValueError(f"{target!r} has no outcome domain")
    _check_policy(d, policy, (n.id for n in d.nodes.values() if n.kind == NodeKind.DECISION))
    m = CompiledModel.compile(d)
    if target in evidence:
        return {lbl: 1.0 if lbl == evidence[target] else 0.0 for lbl in node.domain.labels}
    table = m.probability_table(policy, evidence, [target])
    total = float(table.sum())
    if total <= 0.0:
        raise ImpossibleEvidenceError(f"impossible evidence: {dict(evidence)!r}")
    return {lbl: float(table[i] / total) for i, lbl in enumerate(node.domain.labels)}


def expected_utility(d: Diagram, agent: str, policy: Policy,
                     evidence: Evidence | None = None) -> float:
    """Agent's conditional expected utility under a full policy."""
    evidence = evidence or {}
    _check_evidence(d, evidence)
    _check_policy(d, policy, (n.id for n in d.nodes.values() if n.kind == NodeKind.DECISION))
    m = CompiledModel.compile(d)
    return float(m.utility_table(agent, policy, evidence, []))


def expected_value(d: Diagram, value_node: str, policy: Policy,
                   evidence: Evidence | None = None) -> float:
    """Conditional expectation of a single value node's score."""
    evidence = evidence or {}
    _check_evidence(d, evidence)
    node = d.nodes[value_node]
    if node.kind != NodeKind.VALUE:
        raise ValueError(f"{value_node!r} is not a value node")
    m = CompiledModel.compile(d)
    agent = node.owner
    return float(m.utility_table(agent, policy, evidence, [], weights={value_node: 1.0}))


@dataclass(frozen=True)
class EuTable:
    """Expected utilities indexed by axis labels, T11/T12-shaped.

    `argmax` flags, per combination of the non-decision ("context") axes,
    every cell attaining the maximum over the requested agent's own
    decision axes — the paper's boldface marking.
    """

    agent: str
    axes: tuple[str, ...]
    labels: Mapping[str, tuple[str, ...]]
    cells: Mapping[tuple[str, ...], float]
    group_axes: tuple[str, ...]
    argmax: frozenset[tuple[str, ...]]

    def rows(self) -> Iterable[tuple[tuple[str, ...], float, bool]]:
        for key in itertools.product(*(self.labels[a] for a in self.axes)):
            yield key, self.cells[key], key in self.argmax


def decision_table(d: Diagram, agent: str, axes: Sequence[str],
                   fixed: Policy | None = None,
                   argmax_tol: float = 1e-12) -> EuTable:
    """Expected-utility table over decision/chance axes.

    Decision axes are pinned cell by cell (a value, not a rule); chance
    axes become conditioning evidence. Opponent decisions neither in
    `axes` nor in `fixed` are resolved per cell: each alternative that
    keeps the cell's evidence possible must yield the same utility
    (within EU_AGREEMENT_TOL), otherwise the cell is ambiguous.
    """
    fixed = dict(fixed or {})
    axis_nodes = []
    for a in axes:
        if a not in d.nodes:
            raise ValueError(f"unknown axis node {a!r}")
        n = d.nodes[a]
        if n.kind not in (NodeKind.DECISION, NodeKind.CHANCE, NodeKind.DETERMINISTIC):
            raise ValueError(f"axis {a!r} must be a decision or chance node")
        axis_nodes.append(n)
    labels = {n.id: n.domain.labels for n in axis_nodes}
    decision_axes = [n.id for n in axis_nodes if n.kind == NodeKind.DECISION]
    chance_axes = [n.id for n in axis_nodes if n.kind != NodeKind.DECISION]
    unfixed = sorted(n.id for n in d.nodes.values()
                     if n.kind == NodeKind.DECISION and n.id not in decision_axes
                     and n.id not in fixed)

    m = CompiledModel.compile(d)
    cells: dict[tuple[str, ...], float] = {}
    fillings = [dict(zip(unfixed, combo)) for combo in itertools.product(
        *(d.nodes[u].domain.labels for u in unfixed))] or [{}]

    for key in itertools.product(*(labels[a] for a in axes)):
        cell_policy_axes = {a: lbl for a, lbl in zip(axes, key) if a in decision_axes}
        evidence = {a: lbl for a, lbl in zip(axes, key) if a in chance_axes}
        candidates: list[float] = []
        for filling in fillings:
            policy = dict(fixed)
            policy.update(constant_policy(d, cell_policy_axes))
            policy.update(constant_policy(d, filling))
            try:
                eu = float(m.utility_table(agent, policy, evidence, []))
            except ImpossibleEvidenceError:
                continue
            candidates.append(eu)
        if not candidates:
            raise ImpossibleEvidenceError(
                f"impossible evidence: table cell {dict(zip(axes, key))!r} has zero "
                f"probability under every completion")
        if max(candidates) - min(candidates) > EU_AGREEMENT_TOL:
            raise AmbiguousCellError(
                f"cell {dict(zip(axes, key))!r} depends on unfixed opponent decision(s) "
                f"{unfixed}; fix them explicitly")
        cells[key] = candidates[0]

    own = [a for a in axes if a in decision_axes and d.nodes[a].owner == agent]
    group_axes = tuple(a for a in axes if a not in own)
    argmax: set[tuple[str, ...]] = set()
    group_idx = [axes.index(a) for a in group_axes]
    groups: dict[tuple[str, ...], list[tuple[str, ...]]] = {}
    for key in cells:
        groups.setdefault(tuple(key[i] for i in group_idx), []).append(key)
    for members in groups.values():
        top = max(cells[k] for k in members)
        argmax.update(k for k in members if cells[k] >= top - argmax_tol)
    return EuTable(agent=agent, axes=tuple(axes), labels=labels, cells=cells,
                   group_axes=group_axes, argmax=frozenset(argmax))


# ---------------------------------------------------------------------------
# brute-force reference oracle
# ---------------------------------------------------------------------------

def _iter_joint(d: Diagram, policy: Policy):
    """Yield (assignment, probability) for every positive-probability joint.

    Walks nodes in topological order; chance nodes branch, decisions and
    deterministic nodes are forced. Purposefully naive — this is the
    oracle the elimination engine is checked against.
    """
    order = [nid for nid in topological_order(d)
             if d.nodes[nid].kind not in (NodeKind.VALUE, NodeKind.UTILITY)]

    def walk(i: int, assignment: dict[str, str], prob: float):
        if i == len(order):
            yield dict(assignment), prob
            return
        n = d.nodes[order[i]]
        key = tuple(assignment[p] for p in n.parents)
        if n.kind == NodeKind.CHANCE:
            row = n.payload.rows[key]
            for label, p in zip(n.domain.labels, row):
                if p > 0.0:
                    assignment[n.id] = label
                    yield from walk(i + 1, assignment, prob * p)
                    del assignment[n.id]
        elif n.kind == NodeKind.DETERMINISTIC:
            assignment[n.id] = n.payload.rows[key]
            yield from walk(i + 1, assignment, prob)
            del assignment[n.id]
        else:
            assignment[n.id] = policy[n.id][key]
            yield from walk(i + 1, assignment, prob)
            del assignment[n.id]

    yield from walk(0, {}, 1.0)


def _matches(assignment: Mapping[str, str], evidence: Evidence) -> bool:
    return all(assignment.get(k) == v for k, v in evidence.items())


def _utility_of(d: Diagram, agent: str, assignment: Mapping[str, str]) -> float:
    util = d.utility_node_of(agent)
    spec: UtilitySpec = util.payload
    total = 0.0
    for vid, weight in spec.weights.items():
        vnode = d.nodes[vid]
        vspec: ValueSpec = vnode.payload
        key = tuple(assignment[p] for p in vnode.parents)
        domains = [d.nodes[p].domain for p in vnode.parents]
        total += weight * vspec.score(key, domains)
    return total


def enumerate_expected_utility(d: Diagram, agent: str, policy: Policy,
                               evidence: Evidence | None = None) -> float:
    """Reference expected utility by exhaustive enumeration."""
    evidence = evidence or {}
    _check_evidence(d, evidence)
    _check_policy(d, policy, (n.id for n in d.nodes.values() if n.kind == NodeKind.DECISION))
    num = 0.0
    den = 0.0
    for assignment, prob in _iter_joint(d, policy):
        if not _matches(assignment, evidence):
            continue
        den += prob
        num += prob * _utility_of(d, agent, assignment)
    if den <= 0.0:
        raise ImpossibleEvidenceError(f"impossible evidence: {dict(evidence)!r}")
    return num / den


def enumerate_marginal(d: Diagram, policy: Policy, evidence: Evidence,
                       target: str) -> dict[str, float]:
    """Reference conditional marginal by exhaustive enumeration."""
    evidence = evidence or {}
    _check_evidence(d, evidence)
    node = d.nodes[target]
    mass = {lbl: 0.0 for lbl in node.domain.labels}
    den = 0.0
    for assignment, prob in _iter_joint(d, policy):
        if not _matches(assignment, evidence):
            continue
        den += prob
        mass[assignment[target]] += prob
    if den <= 0.0:
        raise ImpossibleEvidenceError(f"impossible evidence: {dict(evidence)!r}")
    return {lbl: p / den for lbl, p in mass.items()}


def enumerate_expected_value(d: Diagram, value_node: str, policy: Policy,
                             evidence: Evidence | None = None) -> float:
    """Reference conditional expectation of one value node's score."""
    evidence = evidence or {}
    node = d.nodes[value_node]
    vspec: ValueSpec = node.payload
    domains = [d.nodes[p].domain for p in node.parents]
    num = 0.0
    den = 0.0
    for assignment, prob in _iter_joint(d, policy):
        if not _matches(assignment, evidence):
            continue
        den += prob
        key = tuple(assignment[p] for p in node.parents)
        num += prob * vspec.score(key, domains)
    if den <= 0.0:
        raise ImpossibleEvidenceError(f"impossible evidence: {dict(evidence)!r}")
    return num / den
