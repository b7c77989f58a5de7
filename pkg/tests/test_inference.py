import numpy as np
import pytest

from araid.diagram import NodeKind, ValueSpec, Node, build_diagram
from araid.inference import (
    AmbiguousCellError,
    ImpossibleEvidenceError,
    constant_policy,
    decision_table,
    enumerate_expected_utility,
    enumerate_marginal,
    expected_utility,
    joint_probability,
    marginal_distribution,
)

from conftest import random_diagram, random_policy


def drilling_policy(d, dp="no_additional", df="no_forensic", dt="accept",
                    dr="continue", ap="perpetrate"):
    return constant_policy(d, {"DP": dp, "DF": df, "DT": dt, "DR": dr, "AP": ap})


# -- joint probability -------------------------------------------------------

def test_joint_single_chance_node():
    from araid.diagram import Cpt, Domain
    d = build_diagram([], [Node("x", NodeKind.CHANCE, domain=Domain(("a", "b")),
                                payload=Cpt({(): (0.3, 0.7)}))])
    assert joint_probability(d, {}, {"x": "a"}) == pytest.approx(0.3)


def test_joint_probability_drilling_full_assignment(drilling):
    policy = drilling_policy(drilling)
    assignment = {
        "DP": "no_additional", "DF": "no_forensic", "DT": "accept", "DR": "continue",
        "AP": "perpetrate", "UC": "riskier", "UA": "attack", "UM": "loss_1_5m",
        "UH": "no_casualties", "URH": "no_casualties", "UCA": "no_identification",
        "DC": "2500000", "AC": "cost",
    }
    # chain-rule product: P(UC) * P(UA|perp,no_add) * P(UM|...) * P(UH|...)
    #                   * P(URH|...) * P(UCA|...), decisions/deterministic match
    expected = 0.3 * 0.40 * 0.85 * 0.96 * 1.0 * 0.9
    assert joint_probability(drilling, policy, assignment) == pytest.approx(expected)


def test_joint_zero_on_deterministic_mismatch(drilling):
    policy = drilling_policy(drilling)
    assignment = {
        "DP": "no_additional", "DF": "no_forensic", "DT": "accept", "DR": "continue",
        "AP": "perpetrate", "UC": "riskier", "UA": "attack", "UM": "loss_1_5m",
        "UH": "no_casualties", "URH": "no_casualties", "UCA": "no_identification",
        "DC": "0", "AC": "cost",  # DC contradicts its table
    }
    assert joint_probability(drilling, policy, assignment) == 0.0


def test_joint_zero_on_policy_mismatch(drilling):
    policy = drilling_policy(drilling, dr="stop")
    assignment = {
        "DP": "no_additional", "DF": "no_forensic", "DT": "accept", "DR": "continue",
        "AP": "perpetrate", "UC": "riskier", "UA": "attack", "UM": "loss_1_5m",
        "UH": "no_casualties", "URH": "no_casualties", "UCA": "no_identification",
        "DC": "2500000", "AC": "cost",
    }
    assert joint_probability(drilling, policy, assignment) == 0.0


# -- marginals ---------------------------------------------------------------

def test_casualty_chances_under_attack(drilling):
    policy = drilling_policy(drilling)
    dist = marginal_distribution(drilling, policy,
                                 {"UA": "attack", "UC": "riskier"}, "UH")
    assert dist["no_casualties"] == pytest.approx(0.96)
    assert dist["casualties"] == pytest.approx(0.04)


def test_marginal_point_mass_on_evidence(drilling):
    policy = drilling_policy(drilling)
    dist = marginal_distribution(drilling, policy, {"UA": "attack"}, "UA")
    assert dist == {"attack": 1.0, "no_attack": 0.0}


def test_residual_risk_marginal_matches_oracle(drilling):
    policy = drilling_policy(drilling, dt="avoid", ap="no_perpetrate")
    got = marginal_distribution(drilling, policy, {}, "URH")
    want = enumerate_marginal(drilling, policy, {}, "URH")
    assert got["no_casualties"] == pytest.approx(want["no_casualties"], abs=1e-12)
    # avoiding still leaves the ordinary-life casualty floor
    assert got["no_casualties"] == pytest.approx(0.99760095, abs=1e-8)


def test_marginals_sum_to_one(drilling):
    policy = drilling_policy(drilling)
    for target in ("UM", "UH", "URH", "UCA", "DC"):
        dist = marginal_distribution(drilling, policy, {"UC": "riskier"}, target)
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-12)


def test_impossible_evidence_raises(drilling):
    policy = drilling_policy(drilling, ap="no_perpetrate")
    with pytest.raises(ImpossibleEvidenceError):
        marginal_distribution(drilling, policy, {"UA": "attack"}, "UH")
    with pytest.raises(ImpossibleEvidenceError):
        expected_utility(drilling, "defender", policy, {"UA": "attack"})


# -- expected utility --------------------------------------------------------

T12_SPOT_CELLS = [
    (("no_additional", "no_forensic", "accept", "continue"), ("normal", "no_attack"), 0.99895),
    (("additional", "forensic", "accept", "stop"), ("riskier", "attack"), 0.98675),
    (("no_additional", "no_forensic", "accept", "continue"), ("riskier", "attack"), 0.95107),
    (("additional", "forensic", "accept", "continue"), ("riskier", "attack"), 0.95092),
    (("no_additional", "no_forensic", "share", "stop"), ("riskier", "attack"), 0.98840),
    (("additional", "forensic", "share", "continue"), ("riskier", "attack"), 0.95935),
    (("no_additional", "no_forensic", "share", "continue"), ("riskier", "attack"), 0.95950),
    (("additional", "forensic", "avoid", "continue"), ("riskier", "attack"), 0.91154),
]


@pytest.mark.parametrize("decisions,event,published", T12_SPOT_CELLS)
def test_published_expected_utility_cells(drilling, decisions, event, published):
    dp, df, dt, dr = decisions
    uc, ua = event
    policy = drilling_policy(drilling, dp, df, dt, dr, ap="perpetrate")
    eu = expected_utility(drilling, "defender", policy, {"UC": uc, "UA": ua})
    assert eu == pytest.approx(published, abs=1e-5)
    oracle = enumerate_expected_utility(drilling, "defender", policy, {"UC": uc, "UA": ua})
    assert eu == pytest.approx(oracle, abs=1e-12)


def test_constant_values_give_unit_utility():
    from araid.diagram import Agent, AgentKind, Cpt, Domain, UtilitySpec
    nodes = [
        Node("x", NodeKind.CHANCE, domain=Domain(("a", "b")), payload=Cpt({(): (0.4, 0.6)})),
        Node("v0", NodeKind.VALUE, owner="player", parents=("x",),
             payload=ValueSpec("table", rows={("a",): 1.0, ("b",): 1.0})),
        Node("v1", NodeKind.VALUE, owner="player", parents=("x",),
             payload=ValueSpec("table", rows={("a",): 1.0, ("b",): 1.0})),
        Node("u0", NodeKind.UTILITY, owner="player", parents=("v0", "v1"),
             payload=UtilitySpec({"v0": 0.25, "v1": 0.75})),
    ]
    d = build_diagram([Agent("player", AgentKind.DEFENDER)], nodes)
    assert expected_utility(d, "player", {}) == pytest.approx(1.0, abs=1e-12)


def test_law_of_total_expectation(drilling):
    policy = drilling_policy(drilling)
    total = expected_utility(drilling, "defender", policy)
    mixed = 0.0
    for ua in ("attack", "no_attack"):
        p = marginal_distribution(drilling, policy, {}, "UA")[ua]
        mixed += p * expected_utility(drilling, "defender", policy, {"UA": ua})
    assert mixed == pytest.approx(total, abs=1e-12)


# -- oracle equivalence on random diagrams ------------------------------------

def test_elimination_matches_enumeration_on_random_diagrams():
    rng = np.random.default_rng(2024)
    checked_evidence = 0
    for _ in range(60):
        d = random_diagram(rng)
        policy = random_policy(rng, d)
        fast = expected_utility(d, "player", policy)
        slow = enumerate_expected_utility(d, "player", policy)
        assert fast == pytest.approx(slow, abs=1e-12)

        chance_ids = [n.id for n in d.nodes.values() if n.kind == NodeKind.CHANCE]
        ev_node = chance_ids[int(rng.integers(0, len(chance_ids)))]
        label = d.nodes[ev_node].domain.labels[0]
        try:
            slow_ev = enumerate_expected_utility(d, "player", policy, {ev_node: label})
        except ImpossibleEvidenceError:
            with pytest.raises(ImpossibleEvidenceError):
                expected_utility(d, "player", policy, {ev_node: label})
            continue
        fast_ev = expected_utility(d, "player", policy, {ev_node: label})
        assert fast_ev == pytest.approx(slow_ev, abs=1e-12)
        checked_evidence += 1
    assert checked_evidence > 20


def test_marginal_matches_enumeration_on_random_diagrams():
    rng = np.random.default_rng(99)
    for _ in range(30):
        d = random_diagram(rng)
        policy = random_policy(rng, d)
        target = next(n.id for n in d.nodes.values() if n.kind == NodeKind.CHANCE)
        fast = marginal_distribution(d, policy, {}, target)
        slow = enumerate_marginal(d, policy, {}, target)
        for lbl in fast:
            assert fast[lbl] == pytest.approx(slow[lbl], abs=1e-12)


# -- decision tables -----------------------------------------------------------

def test_defender_table_has_96_cells_and_correct_argmax(drilling):
    table = decision_table(drilling, "defender", ["DP", "DF", "DT", "DR", "UC", "UA"])
    assert len(table.cells) == 96
    assert table.group_axes == ("UC", "UA")
    best = {key[-2:]: key[:4] for key in table.argmax}
    assert best[("riskier", "attack")] == ("no_additional", "no_forensic", "share", "stop")
    assert best[("normal", "attack")] == ("no_additional", "no_forensic", "share", "stop")
    assert best[("riskier", "no_attack")] == ("no_additional", "no_forensic", "accept", "continue")
    assert best[("normal", "no_attack")] == ("no_additional", "no_forensic", "accept", "continue")


def test_unscreened_opponent_decision_is_ambiguous(drilling):
    # without conditioning on the attack event, the attacker's choice
    # changes the defender's utility, so leaving it unfixed must not
    # silently pick a side
    with pytest.raises(AmbiguousCellError, match="AP"):
        decision_table(drilling, "defender", ["DP", "DF", "DT", "DR"])


def test_fixed_opponent_matches_compatibility_default(drilling):
    free = decision_table(drilling, "defender", ["DP", "DF", "DT", "DR", "UC", "UA"])
    fixed = decision_table(drilling, "defender", ["DP", "DF", "DT", "DR", "UC", "UA"],
                           fixed=constant_policy(drilling, {"AP": "perpetrate"}))
    for key, value in free.cells.items():
        assert value == pytest.approx(fixed.cells[key], abs=1e-9)


def test_tie_cells_all_marked():
    from araid.diagram import Agent, AgentKind, Cpt, Domain, UtilitySpec
    nodes = [
        Node("d0", NodeKind.DECISION, owner="player", domain=Domain(("a", "b"))),
        Node("x", NodeKind.CHANCE, domain=Domain(("l", "r")), payload=Cpt({(): (0.5, 0.5)})),
        Node("v0", NodeKind.VALUE, owner="player", parents=("x",),
             payload=ValueSpec("table", rows={("l",): 0.2, ("r",): 0.8})),
        Node("u0", NodeKind.UTILITY, owner="player", parents=("v0",),
             payload=UtilitySpec({"v0": 1.0})),
    ]
    d = build_diagram([Agent("player", AgentKind.DEFENDER)], nodes,
                      {"player": ("d0",)})
    table = decision_table(d, "player", ["d0"])
    assert table.cells[("a",)] == table.cells[("b",)]
    assert table.argmax == {("a",), ("b",)}


def test_attacker_table_matches_oracle(drilling):
    table = decision_table(drilling, "attacker", ["DP", "DF", "DT", "UC", "DR", "AP"])
    assert len(table.cells) == 96
    rng = np.random.default_rng(5)
    keys = list(table.cells)
    for i in rng.choice(len(keys), size=12, replace=False):
        dp, df, dt, uc, dr, ap = keys[i]
        policy = drilling_policy(drilling, dp, df, dt, dr, ap)
        oracle = enumerate_expected_utility(drilling, "attacker", policy, {"UC": uc})
        assert table.cells[keys[i]] == pytest.approx(oracle, abs=1e-12)


def test_argmax_invariant_under_positive_affine_value_transform():
    rng = np.random.default_rng(31)
    found = 0
    for _ in range(20):
        d = random_diagram(rng)
        decisions = [n.id for n in d.nodes.values() if n.kind == NodeKind.DECISION]
        if not decisions:
            continue
        found += 1
        transformed_nodes = []
        for n in d.nodes.values():
            if n.kind == NodeKind.VALUE:
                spec = n.payload
                rows = {k: 2.0 * v + 0.25 for k, v in spec.rows.items()}
                transformed_nodes.append(Node(n.id, n.kind, n.owner, parents=n.parents,
                                              payload=ValueSpec("table", rows=rows)))
        d2 = d.replace_nodes(transformed_nodes)
        axes = decisions
        t1 = decision_table(d, "player", axes)
        t2 = decision_table(d2, "player", axes)
        assert t1.argmax == t2.argmax
        for key in t1.cells:
            assert t2.cells[key] == pytest.approx(2.0 * t1.cells[key] + 0.25, abs=1e-9)
    assert found >= 10


def test_renaming_nodes_preserves_results(drilling):
    from araid.diagram import UtilitySpec
    mapping = {nid: f"X_{nid}" for nid in drilling.nodes}
    renamed = []
    for n in drilling.nodes.values():
        payload = n.payload
        if isinstance(payload, UtilitySpec):
            payload = UtilitySpec({mapping[k]: w for k, w in payload.weights.items()})
        renamed.append(Node(mapping[n.id], n.kind, n.owner, n.domain,
                            parents=tuple(mapping[p] for p in n.parents), payload=payload))
    order = {a: tuple(mapping[x] for x in seq)
             for a, seq in drilling.decision_order.items()}
    d2 = build_diagram(drilling.agents, renamed, order)

    policy1 = drilling_policy(drilling)
    policy2 = {mapping[k]: v for k, v in policy1.items()}
    eu1 = expected_utility(drilling, "defender", policy1, {"UC": "riskier"})
    eu2 = expected_utility(d2, "defender", policy2, {mapping["UC"]: "riskier"})
    assert eu1 == pytest.approx(eu2, abs=1e-12)
