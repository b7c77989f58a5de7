import itertools

import numpy as np
import pytest

from araid.diagram import (
    Agent,
    AgentKind,
    Cpt,
    DetTable,
    Diagram,
    Domain,
    Node,
    NodeKind,
    UtilitySpec,
    ValueSpec,
    build_diagram,
)
from araid.drilling import build_drilling_model


@pytest.fixture(scope="session")
def drilling() -> Diagram:
    return build_drilling_model()


def random_diagram(rng: np.random.Generator, with_decisions: bool = True,
                   with_money: bool = False) -> Diagram:
    """Small random valid diagram: <= 8 nodes, domains <= 3, one player.

    Decisions observe only earlier chance nodes, so the declared order is
    always temporally consistent by construction.
    """
    labels = ("a", "b", "c")
    n_chance = int(rng.integers(2, 5))
    n_decision = int(rng.integers(1, 3)) if with_decisions else 0
    n_value = int(rng.integers(1, 3))
    use_det = bool(rng.integers(0, 2)) and n_chance >= 2

    nodes: list[Node] = []
    random_order: list[str] = []  # chance/det ids in creation order
    domains: dict[str, Domain] = {}

    def make_domain(nid: str) -> Domain:
        k = int(rng.integers(2, 4))
        tags = tuple(float(x) for x in rng.integers(0, 50, size=k)) if with_money else None
        dom = Domain(labels[:k], numeric_tags=tags)
        domains[nid] = dom
        return dom

    def random_parents(limit: int = 2) -> tuple[str, ...]:
        pool = random_order
        if not pool:
            return ()
        count = int(rng.integers(0, min(limit, len(pool)) + 1))
        picked = rng.choice(len(pool), size=count, replace=False)
        return tuple(pool[i] for i in sorted(picked))

    def random_cpt(nid: str, parents: tuple[str, ...]) -> Cpt:
        size = len(domains[nid])
        rows = {}
        for key in itertools.product(*(domains[p].labels for p in parents)):
            rows[key] = tuple(rng.dirichlet(np.ones(size)))
        return Cpt(rows)

    for i in range(n_chance):
        nid = f"c{i}"
        dom = make_domain(nid)
        parents = random_parents()
        nodes.append(Node(nid, NodeKind.CHANCE, domain=dom, parents=parents,
                          payload=random_cpt(nid, parents)))
        random_order.append(nid)

    if use_det:
        nid = "t0"
        dom = make_domain(nid)
        parents = random_parents(limit=2)
        rows = {}
        for key in itertools.product(*(domains[p].labels for p in parents)):
            rows[key] = dom.labels[int(rng.integers(0, len(dom)))]
        nodes.append(Node(nid, NodeKind.DETERMINISTIC, owner="player", domain=dom,
                          parents=parents, payload=DetTable(rows)))
        random_order.append(nid)

    decision_ids = []
    for i in range(n_decision):
        nid = f"d{i}"
        dom = make_domain(nid)
        parents = random_parents(limit=1)
        nodes.append(Node(nid, NodeKind.DECISION, owner="player", domain=dom,
                          parents=parents))
        decision_ids.append(nid)
        random_order.append(nid)

    value_ids = []
    scorable = [n for n in random_order]
    for i in range(n_value):
        nid = f"v{i}"
        count = int(rng.integers(1, min(2, len(scorable)) + 1))
        picked = rng.choice(len(scorable), size=count, replace=False)
        parents = tuple(scorable[j] for j in sorted(picked))
        rows = {key: float(np.round(rng.uniform(0, 1), 6))
                for key in itertools.product(*(domains[p].labels for p in parents))}
        nodes.append(Node(nid, NodeKind.VALUE, owner="player", parents=parents,
                          payload=ValueSpec("table", rows=rows)))
        value_ids.append(nid)

    weights = rng.dirichlet(np.ones(len(value_ids)))
    nodes.append(Node("u0", NodeKind.UTILITY, owner="player", parents=tuple(value_ids),
                      payload=UtilitySpec(dict(zip(value_ids, map(float, weights))))))

    agents = [Agent("player", AgentKind.DEFENDER, "Player")]
    order = {"player": tuple(decision_ids)} if decision_ids else {}
    return build_diagram(agents, nodes, order)


def random_policy(rng: np.random.Generator, d: Diagram) -> dict:
    from araid.diagram import parent_tuples
    policy = {}
    for n in d.nodes.values():
        if n.kind != NodeKind.DECISION:
            continue
        rule = {}
        for key in parent_tuples(d.nodes, n):
            rule[key] = n.domain.labels[int(rng.integers(0, len(n.domain)))]
        policy[n.id] = rule
    return policy
