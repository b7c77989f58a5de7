"""Adversarial risk analysis over influence diagrams.

The supported agent (the defender) cannot know the intruder's exact
probabilities and preferences. She solves his problem instead: rebuild the
diagram from his point of view (her unobservable decisions become chance
nodes carrying his assumed beliefs), put distributions on the parameters
she is unsure about, and propagate that uncertainty by Monte Carlo. Each
draw yields his optimal action per observable context; the tally over
draws is the attack forecast, which then replaces the attack decision so
her own problem can be solved by plain policy enumeration.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .diagram import (
    AgentKind,
    Cpt,
    Diagram,
    Node,
    NodeKind,
    ValueSpec,
    build_diagram,
)
from .inference import (
    CompiledModel,
    Factor,
    constant_policy,
    parent_tuples_of,
)

TIE_TOL = 1e-12

AttackerBeliefs = Mapping[str, Mapping[str, float]]


def _unique_agent(d: Diagram, kind: AgentKind) -> str:
    found = [a.id for a in d.agents if a.kind == kind]
    if len(found) != 1:
        raise ValueError(f"diagram needs exactly one {kind.value} agent, found {found}")
    return found[0]


def _check_beliefs(d: Diagram, beliefs: AttackerBeliefs) -> None:
    for nid, dist in beliefs.items():
        node = d.nodes.get(nid)
        if node is None or node.kind != NodeKind.DECISION:
            raise ValueError(f"belief target {nid!r} is not a decision node")
        if set(dist) != set(node.domain.labels):
            raise ValueError(f"belief for {nid!r} must cover exactly its alternatives")
        total = sum(dist.values())
        if abs(total - 1.0) > 1e-9 or any(p < 0 for p in dist.values()):
            raise ValueError(f"belief for {nid!r} is not a distribution (sums to {total:.10g})")


def attacker_view(d: Diagram, beliefs: AttackerBeliefs,
                  observed: set[str] | frozenset[str],
                  attacker: str | None = None) -> Diagram:
    """The diagram as the attacker sees it.

    Defender decisions he cannot observe become parentless chance nodes
    with his assumed distribution; observed ones stay decisions, to be
    pinned per context. Everything else, including the defender's value
    and utility nodes, is retained.
    """
    attacker = attacker or _unique_agent(d, AgentKind.ATTACKER)
    _check_beliefs(d, beliefs)
    opponent_decisions = {n.id for n in d.nodes.values()
                          if n.kind == NodeKind.DECISION and n.owner != attacker}
    observed = set(observed)
    if observed & set(beliefs):
        raise ValueError("a decision cannot be both observed and belief-distributed")
    if observed | set(beliefs) != opponent_decisions:
        missing = opponent_decisions - observed - set(beliefs)
        raise ValueError(f"no belief given for unobserved decision(s) {sorted(missing)}")

    new_nodes = []
    for nid, dist in beliefs.items():
        old = d.nodes[nid]
        row = tuple(float(dist[lbl]) for lbl in old.domain.labels)
        new_nodes.append(Node(nid, NodeKind.CHANCE, owner=None, domain=old.domain,
                              parents=(), payload=Cpt({(): row})))
    order = dict(d.decision_order)
    for agent_id, seq in list(order.items()):
        order[agent_id] = tuple(x for x in seq if x not in beliefs)
    merged = dict(d.nodes)
    for n in new_nodes:
        merged[n.id] = n
    return build_diagram(d.agents, merged.values(), order)


@dataclass(frozen=True)
class BestResponse:
    decision: str
    expected: Mapping[str, float]  # alternative -> expected utility
    optimal: tuple[str, ...]       # all maximizers, domain order

    def strictly_prefers(self, alternative: str) -> bool:
        return self.optimal == (alternative,)


def best_response(d_view: Diagram, agent: str,
                  context: Mapping[str, str]) -> BestResponse:
    """Exhaustively evaluate the agent's one remaining decision.

    `context` pins the other decisions still present in the view and may
    condition on chance nodes (the information the agent sees when
    moving, e.g. contextual threat state).
    """
    own = [n for n in d_view.nodes.values()
           if n.kind == NodeKind.DECISION and n.owner == agent]
    if len(own) != 1:
        raise ValueError(f"expected exactly one free decision for {agent!r}, "
                         f"found {[n.id for n in own]}")
    decision = own[0]
    policy_part: dict[str, str] = {}
    evidence: dict[str, str] = {}
    for nid, label in context.items():
        node = d_view.nodes[nid]
        if node.kind == NodeKind.DECISION:
            policy_part[nid] = label
        else:
            evidence[nid] = label
    other = [n.id for n in d_view.nodes.values()
             if n.kind == NodeKind.DECISION and n.id != decision.id]
    uncovered = [nid for nid in other if nid not in policy_part]
    if uncovered:
        raise ValueError(f"context must pin decision(s) {uncovered}")

    m = CompiledModel.compile(d_view)
    expected: dict[str, float] = {}
    for alt in decision.domain.labels:
        policy = constant_policy(d_view, {**policy_part, decision.id: alt})
        expected[alt] = float(m.utility_table(agent, policy, evidence, []))
    top = max(expected.values())
    optimal = tuple(lbl for lbl in decision.domain.labels if expected[lbl] >= top - TIE_TOL)
    return BestResponse(decision=decision.id, expected=expected, optimal=optimal)


# ---------------------------------------------------------------------------
# parameter uncertainty
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointRule:
    """Degenerate sampling: keep the model's stated value."""

    def sample_vector(self, base: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        return base.copy()

    def sample_scalar(self, base: float, rng: np.random.Generator) -> float:
        return base


@dataclass(frozen=True)
class DirichletRule:
    """Dirichlet draw over a probability row or weight vector."""

    concentration: tuple[float, ...]

    def sample_vector(self, base: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        if len(self.concentration) != len(base):
            raise ValueError("concentration length does not match the target vector")
        return rng.dirichlet(self.concentration)


@dataclass(frozen=True)
class PerturbRule:
    """Independent uniform jitter of +-half_width, clipped and renormalized."""

    half_width: float

    def sample_vector(self, base: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        jittered = np.clip(base + rng.uniform(-self.half_width, self.half_width,
                                              size=len(base)), 0.0, None)
        total = jittered.sum()
        if total <= 0:
            raise ValueError("perturbed vector collapsed to zero mass")
        return jittered / total


@dataclass(frozen=True)
class UniformRule:
    """Uniform scalar on [low, high]."""

    low: float
    high: float

    def sample_scalar(self, base: float, rng: np.random.Generator) -> float:
        return float(rng.uniform(self.low, self.high))


SamplingRule = PointRule | DirichletRule | PerturbRule | UniformRule

# targets: ("belief", node) | ("weights", utility_node)
#        | ("cpt_row", node, parent_tuple) | ("value_scale", node) | ("value_root", node)
Target = tuple


@dataclass(frozen=True)
class ParameterUncertainty:
    """What the defender is unsure about on the attacker's side.

    Maps each uncertain quantity to its sampling rule. Anything absent is
    held at the model's stated value (a point rule).
    """

    rules: Mapping[Target, SamplingRule] = field(default_factory=dict)

    def validate(self, view: Diagram) -> None:
        for target, rule in self.rules.items():
            kind = target[0]
            node = view.nodes.get(target[1]) if len(target) > 1 else None
            if node is None:
                raise ValueError(f"uncertainty target {target!r}: unknown node")
            if kind == "belief":
                if node.kind != NodeKind.CHANCE or node.parents:
                    raise ValueError(f"{target!r}: belief targets must be parentless "
                                     f"chance nodes in the attacker view")
                self._check_vector_rule(rule, len(node.domain), target)
            elif kind == "cpt_row":
                if node.kind != NodeKind.CHANCE or target[2] not in node.payload.rows:
                    raise ValueError(f"{target!r}: no such CPT row")
                self._check_vector_rule(rule, len(node.domain), target)
            elif kind == "weights":
                if node.kind != NodeKind.UTILITY:
                    raise ValueError(f"{target!r}: weights target must be a utility node")
                self._check_vector_rule(rule, len(node.parents), target)
            elif kind in ("value_scale", "value_root"):
                if node.kind != NodeKind.VALUE or node.payload.form not in (
                        "linear", "power_root"):
                    raise ValueError(f"{target!r}: scalar targets need an analytic value node")
                if not isinstance(rule, (UniformRule, PointRule)):
                    raise ValueError(f"{target!r}: scalar targets take uniform/point rules")
                if isinstance(rule, UniformRule):
                    if not (rule.low <= rule.high):
                        raise ValueError(f"{target!r}: empty interval")
                    if rule.low <= 0:
                        raise ValueError(f"{target!r}: bounds must stay positive")
            else:
                raise ValueError(f"unknown uncertainty target kind {kind!r}")

    @staticmethod
    def _check_vector_rule(rule: SamplingRule, length: int, target: Target) -> None:
        if isinstance(rule, UniformRule):
            raise ValueError(f"{target!r}: vector targets take point/dirichlet/perturb rules")
        if isinstance(rule, DirichletRule):
            if len(rule.concentration) != length:
                raise ValueError(f"{target!r}: concentration needs {length} entries")
            if any(a <= 0 for a in rule.concentration):
                raise ValueError(f"{target!r}: concentration must be positive")
        if isinstance(rule, PerturbRule) and rule.half_width < 0:
            raise ValueError(f"{target!r}: half_width must be nonnegative")


def _target_sort_key(target: Target) -> tuple:
    return tuple(str(x) for x in target)


def _draw_rng(seed: int, index: int) -> np.random.Generator:
    # independent substream per draw: the forecast cannot depend on the
    # order draws are evaluated in
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _sampled_overrides(view: Diagram, compiled: CompiledModel,
                       uncertainty: ParameterUncertainty,
                       rng: np.random.Generator
                       ) -> tuple[dict[str, Factor], dict[str, float] | None]:
    overrides: dict[str, Factor] = {}
    weights: dict[str, float] | None = None
    for target in sorted(uncertainty.rules, key=_target_sort_key):
        rule = uncertainty.rules[target]
        kind, nid = target[0], target[1]
        node = view.nodes[nid]
        if kind in ("belief", "cpt_row"):
            row_key = () if kind == "belief" else target[2]
            base_factor = overrides.get(nid, compiled.prob_factors[nid])
            table = base_factor.table.copy()
            base_row = np.asarray(node.payload.rows[row_key], dtype=float)
            idx = tuple(view.nodes[p].domain.index(lbl)
                        for p, lbl in zip(node.parents, row_key))
            table[idx] = rule.sample_vector(base_row, rng)
            overrides[nid] = Factor(base_factor.vars, table)
        elif kind == "weights":
            base = np.array([node.payload.weights[p] for p in node.parents])
            sampled = rule.sample_vector(base, rng)
            weights = dict(zip(node.parents, (float(w) for w in sampled)))
        elif kind == "value_scale":
            spec: ValueSpec = node.payload
            new_spec = replace(spec, scale=rule.sample_scalar(spec.scale, rng))
            overrides[nid] = compiled.value_factor_with(nid, new_spec)
        elif kind == "value_root":
            spec = node.payload
            new_spec = replace(spec, root=rule.sample_scalar(spec.root, rng))
            overrides[nid] = compiled.value_factor_with(nid, new_spec)
    return overrides, weights


# ---------------------------------------------------------------------------
# forecast
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AttackForecast:
    """Per-context distribution of the attacker's optimal action.

    probabilities[context] holds, per alternative (domain order), the
    fraction of draws in which that alternative was optimal; ties within a
    draw are split equally.
    """

    decision: str
    context_nodes: tuple[str, ...]
    alternatives: tuple[str, ...]
    probabilities: Mapping[tuple[str, ...], tuple[float, ...]]
    draws: int
    seed: int

    def probability(self, context: tuple[str, ...], alternative: str) -> float:
        return self.probabilities[context][self.alternatives.index(alternative)]

    def to_json(self) -> str:
        import json
        payload = {
            "decision": self.decision,
            "context_nodes": list(self.context_nodes),
            "alternatives": list(self.alternatives),
            "draws": self.draws,
            "seed": self.seed,
            "contexts": [
                {"context": dict(zip(self.context_nodes, ctx)),
                 "probabilities": dict(zip(self.alternatives, probs))}
                for ctx, probs in sorted(self.probabilities.items())
            ],
        }
        return json.dumps(payload, sort_keys=True)

    @staticmethod
    def constant(d: Diagram, decision: str, probabilities: Mapping[str, float]) -> "AttackForecast":
        """Same action distribution in every observable context."""
        node = d.nodes[decision]
        contexts = list(parent_tuples_of(d, decision))
        row = tuple(float(probabilities[lbl]) for lbl in node.domain.labels)
        if abs(sum(row) - 1.0) > 1e-9 or any(p < 0 for p in row):
            raise ValueError("forecast probabilities must form a distribution")
        return AttackForecast(decision=decision, context_nodes=node.parents,
                              alternatives=node.domain.labels,
                              probabilities={ctx: row for ctx in contexts},
                              draws=0, seed=0)


def forecast_attack(d: Diagram, beliefs: AttackerBeliefs,
                    uncertainty: ParameterUncertainty,
                    draws: int, seed: int,
                    observed: set[str] | None = None,
                    attacker: str | None = None,
                    workers: int = 1) -> AttackForecast:
    """Monte Carlo forecast of the attacker's optimal action per context.

    Each draw samples one realization of the uncertain parameters, solves
    the attacker's best response in every observable context, and scores
    the winners. Bit-reproducible for fixed (seed, draws); draws use
    independent substreams so `workers` only affects wall time.
    """
    if draws < 1:
        raise ValueError("draws must be >= 1")
    attacker = attacker or _unique_agent(d, AgentKind.ATTACKER)
    if observed is None:
        observed = {n.id for n in d.nodes.values()
                    if n.kind == NodeKind.DECISION and n.owner != attacker
                    and n.id not in beliefs}
    view = attacker_view(d, beliefs, observed, attacker=attacker)
    uncertainty.validate(view)
    compiled = CompiledModel.compile(view)

    own = [n for n in view.nodes.values()
           if n.kind == NodeKind.DECISION and n.owner == attacker]
    if len(own) != 1:
        raise ValueError(f"attacker must have exactly one decision, found "
                         f"{[n.id for n in own]}")
    decision = own[0]
    context_nodes = decision.parents
    alternatives = decision.domain.labels
    contexts = list(itertools.product(
        *(view.nodes[p].domain.labels for p in context_nodes)))
    context_idx = {ctx: tuple(view.nodes[p].domain.index(lbl)
                              for p, lbl in zip(context_nodes, ctx))
                   for ctx in contexts}
    keep = list(context_nodes) + [decision.id]
    free = {n.id for n in view.nodes.values() if n.kind == NodeKind.DECISION}
    plan = compiled.prepare_utility_query(attacker, {}, {}, keep, free_decisions=free)

    def run_chunk(indices: Sequence[int]) -> dict[tuple[str, ...], list[Fraction]]:
        tally = {ctx: [Fraction(0)] * len(alternatives) for ctx in contexts}
        for i in indices:
            rng = _draw_rng(seed, i)
            overrides, weights = _sampled_overrides(view, compiled, uncertainty, rng)
            eu = plan.evaluate(overrides=overrides, weights=weights)
            for ctx in contexts:
                row = eu[context_idx[ctx]]
                top = row.max()
                winners = [j for j in range(len(alternatives)) if row[j] >= top - TIE_TOL]
                share = Fraction(1, len(winners))
                for j in winners:
                    tally[ctx][j] += share
        return tally

    if workers > 1 and draws > 1:
        from concurrent.futures import ThreadPoolExecutor
        chunks = [list(range(draws))[k::workers] for k in range(workers)]
        chunks = [c for c in chunks if c]
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            partials = list(pool.map(run_chunk, chunks))
        tally = {ctx: [sum(p[ctx][j] for p in partials) for j in range(len(alternatives))]
                 for ctx in contexts}
    else:
        tally = run_chunk(range(draws))

    probabilities = {ctx: tuple(float(f / draws) for f in tally[ctx]) for ctx in contexts}
    return AttackForecast(decision=decision.id, context_nodes=context_nodes,
                          alternatives=alternatives, probabilities=probabilities,
                          draws=draws, seed=seed)


# ---------------------------------------------------------------------------
# defender optimization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RankedPolicy:
    policy: Mapping[str, Mapping[tuple[str, ...], str]]
    expected_utility: float

    def choice(self, decision: str, observed: tuple[str, ...] = ()) -> str:
        return self.policy[decision][observed]


@dataclass(frozen=True)
class DefenderSolution:
    optimal: RankedPolicy
    ranking: tuple[RankedPolicy, ...]

    @property
    def ties(self) -> tuple[RankedPolicy, ...]:
        best = self.ranking[0].expected_utility
        return tuple(r for r in self.ranking if r.expected_utility >= best - TIE_TOL)


def _policy_sort_key(policy: Mapping[str, Mapping[tuple[str, ...], str]]) -> tuple:
    return tuple((dec, tuple(sorted(policy[dec].items()))) for dec in sorted(policy))


def apply_forecast(d: Diagram, forecast: AttackForecast) -> Diagram:
    """Replace the forecast decision with a chance node driven by it."""
    node = d.nodes[forecast.decision]
    if node.kind != NodeKind.DECISION:
        raise ValueError(f"{forecast.decision!r} is not a decision node")
    if tuple(forecast.context_nodes) != node.parents:
        raise ValueError(f"forecast contexts {forecast.context_nodes} do not match the "
                         f"information set {node.parents} of {forecast.decision!r}")
    if tuple(forecast.alternatives) != node.domain.labels:
        raise ValueError("forecast alternatives do not match the decision's domain")
    rows = {}
    for key in parent_tuples_of(d, forecast.decision):
        if key not in forecast.probabilities:
            raise ValueError(f"context missing from forecast: {key}")
        rows[key] = tuple(forecast.probabilities[key])
    chance = Node(node.id, NodeKind.CHANCE, owner=None, domain=node.domain,
                  parents=node.parents, payload=Cpt(rows))
    order = {a: tuple(x for x in seq if x != node.id)
             for a, seq in d.decision_order.items()}
    merged = dict(d.nodes)
    merged[node.id] = chance
    return build_diagram(d.agents, merged.values(), order)


def _all_rules(d: Diagram, decision: str):
    node = d.nodes[decision]
    keys = list(parent_tuples_of(d, decision))
    for combo in itertools.product(node.domain.labels, repeat=len(keys)):
        yield dict(zip(keys, combo))


def solve_defender(d: Diagram, forecast: AttackForecast,
                   defender: str | None = None) -> DefenderSolution:
    """Best defender policy against a forecast attacker.

    Enumerates every combination of decision rules (a rule maps each
    observed-information tuple to an alternative) and ranks them by
    expected utility; deterministic tie order by policy content.
    """
    defender = defender or _unique_agent(d, AgentKind.DEFENDER)
    solved = apply_forecast(d, forecast)
    m = CompiledModel.compile(solved)
    decisions = sorted(n.id for n in solved.decisions_of(defender))
    ranked: list[RankedPolicy] = []
    for rules in itertools.product(*(list(_all_rules(solved, dec)) for dec in decisions)):
        policy: dict = dict(zip(decisions, rules))
        eu = float(m.utility_table(defender, policy, {}, []))
        ranked.append(RankedPolicy(policy=policy, expected_utility=eu))
    ranked.sort(key=lambda r: (-r.expected_utility, _policy_sort_key(r.policy)))
    return DefenderSolution(optimal=ranked[0], ranking=tuple(ranked))
