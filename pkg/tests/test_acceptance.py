"""Acceptance suite: every release criterion, one pass/fail line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
print. Tolerances are pinned here, not configurable.
"""
import csv
import functools
import io
import itertools
import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from araid.ara import AttackForecast, ParameterUncertainty, forecast_attack, solve_defender
from araid.diagram import parent_tuples
from araid.drilling import build_drilling_model, default_beliefs, default_uncertainty
from araid.inference import (
    constant_policy,
    enumerate_expected_utility,
    enumerate_expected_value,
    expected_utility,
    expected_value,
)
from araid.modelfile import parse_model, serialize_model, try_parse_model
from araid.resources import data_path, read_table

from conftest import random_diagram, random_policy
from test_ara import point

DRILLING = str(data_path("drilling.maid"))


def criterion(num: int, text: str):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                print(f"\n[criterion {num}] FAIL: {text}")
                raise
            print(f"\n[criterion {num}] PASS: {text}")
            return result
        return run
    return wrap


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "araid.cli", *args],
                          capture_output=True, text=True)


SPOT_CELLS = {
    ("no_additional", "no_forensic", "accept", "continue", "normal", "no_attack"): 0.99895,
    ("additional", "forensic", "accept", "stop", "riskier", "attack"): 0.98675,
    ("no_additional", "no_forensic", "accept", "continue", "riskier", "attack"): 0.95107,
    ("additional", "forensic", "accept", "continue", "riskier", "attack"): 0.95092,
    ("no_additional", "no_forensic", "share", "stop", "riskier", "attack"): 0.98840,
    ("additional", "forensic", "share", "continue", "riskier", "attack"): 0.95935,
    ("no_additional", "no_forensic", "share", "continue", "riskier", "attack"): 0.95950,
    ("additional", "forensic", "avoid", "continue", "riskier", "attack"): 0.91154,
}


@criterion(1, "published defender table reproduced: 96 cells within 1e-4, "
              "spot cells within 1e-5, CLI runtime under 5 s")
def test_criterion_1_defender_table_reproduction():
    started = time.monotonic()
    proc = run_cli("tables", DRILLING, "--agent", "defender",
                   "--axes", "DP,DF,DT,DR,UC,UA", "--out", "csv")
    elapsed = time.monotonic() - started
    assert proc.returncode == 0, proc.stderr
    rows = {(r["DP"], r["DF"], r["DT"], r["DR"], r["UC"], r["UA"]): float(r["eu"])
            for r in csv.DictReader(io.StringIO(proc.stdout))}
    assert len(rows) == 96
    published = {(r["DP"], r["DF"], r["DT"], r["DR"], r["UC"], r["UA"]): float(r["eu"])
                 for r in read_table("T12_expected.csv")}
    for key, want in published.items():
        assert abs(rows[key] - want) <= 1e-4, (key, rows[key], want)
    for key, want in SPOT_CELLS.items():
        assert abs(rows[key] - want) <= 1e-5, (key, rows[key], want)
    assert elapsed < 5.0, f"took {elapsed:.2f}s"


@criterion(2, "per-column maxima match the published boldface: share/stop in the "
              "attack columns (0.98840, 0.99562), accept/continue otherwise "
              "(0.99590, 0.99895)")
def test_criterion_2_argmax_reproduction():
    from araid.inference import decision_table
    d = build_drilling_model()
    table = decision_table(d, "defender", ["DP", "DF", "DT", "DR", "UC", "UA"])
    best = {}
    for key in table.argmax:
        best[key[-2:]] = (key[:4], table.cells[key])
    for uc, value in (("riskier", 0.98840), ("normal", 0.99562)):
        decisions, eu = best[(uc, "attack")]
        assert decisions == ("no_additional", "no_forensic", "share", "stop")
        assert abs(eu - value) <= 1e-5
    for uc, value in (("riskier", 0.99590), ("normal", 0.99895)):
        decisions, eu = best[(uc, "no_attack")]
        assert decisions == ("no_additional", "no_forensic", "accept", "continue")
        assert abs(eu - value) <= 1e-5


@criterion(3, "ordering claims hold in all four observable (DP, DF) contexts: "
              "believed accept+continue makes perpetrating optimal, believed "
              "share or avoid makes refraining optimal, and a believed stop "
              "weakens the attack's appeal")
def test_criterion_3_ordering_claims():
    from araid.ara import attacker_view, best_response
    d = build_drilling_model()
    contexts = list(itertools.product(("additional", "no_additional"),
                                      ("forensic", "no_forensic")))
    view_attack = attacker_view(d, point("accept", "continue"), observed={"DP", "DF"})
    views_no = {(dt, dr): attacker_view(d, point(dt, dr), observed={"DP", "DF"})
                for dt in ("share", "avoid") for dr in ("continue", "stop")}
    view_stop = attacker_view(d, point("accept", "stop"), observed={"DP", "DF"})
    for dp, df in contexts:
        for uc in ("riskier", "normal"):
            ctx = {"DP": dp, "DF": df, "UC": uc}
            assert best_response(view_attack, "attacker", ctx).optimal == ("perpetrate",)
            for view in views_no.values():
                assert best_response(view, "attacker", ctx).optimal == ("no_perpetrate",)
            gap_continue = _gap(best_response(view_attack, "attacker", ctx))
            gap_stop = _gap(best_response(view_stop, "attacker", ctx))
            assert gap_continue > gap_stop


def _gap(br):
    return br.expected["perpetrate"] - br.expected["no_perpetrate"]


@criterion(4, "published attacker table is NOT reproducible; the shipped oracle "
              "table + delta report stands in, and its structural properties "
              "hold (avoid rows score exactly 1 on the money channel, share "
              "rows ignore context, share-row gaps are pure counter-attack "
              "weight within 1e-12)")
def test_criterion_4_attacker_table_substitute():
    d = build_drilling_model()
    shipped = read_table("T11_reference.csv")
    assert len(shipped) == 96
    assert {"oracle_eu", "published_eu", "delta"} <= set(shipped[0])

    deltas = []
    for row in shipped:
        policy = constant_policy(d, {"DP": row["DP"], "DF": row["DF"], "DT": row["DT"],
                                     "DR": row["DR"], "AP": row["AP"]})
        oracle = enumerate_expected_utility(d, "attacker", policy, {"UC": row["UC"]})
        assert repr(oracle) == row["oracle_eu"], "shipped reference out of date"
        assert abs(float(row["delta"]) - (oracle - float(row["published_eu"]))) < 1e-12
        deltas.append(abs(float(row["delta"])))
    assert max(deltas) > 0.05  # the published table genuinely disagrees

    # avoid rows: money channel exactly 1 on both engine routes
    for dp, df, dr, ap, uc in itertools.product(
            ("additional", "no_additional"), ("forensic", "no_forensic"),
            ("continue", "stop"), ("perpetrate", "no_perpetrate"),
            ("riskier", "normal")):
        policy = constant_policy(d, {"DP": dp, "DF": df, "DT": "avoid",
                                     "DR": dr, "AP": ap})
        assert expected_value(d, "AMV", policy, {"UC": uc}) == 1.0
        assert enumerate_expected_value(d, "AMV", policy, {"UC": uc}) == 1.0

    # share rows: context-invariant, and the perpetrate gap is exactly the
    # counter-attack channel
    for dp, df, dr in itertools.product(("additional", "no_additional"),
                                        ("forensic", "no_forensic"),
                                        ("continue", "stop")):
        eus = {}
        for ap in ("perpetrate", "no_perpetrate"):
            policy = constant_policy(d, {"DP": dp, "DF": df, "DT": "share",
                                         "DR": dr, "AP": ap})
            # invariance is exact in the algebra; both routes may round by
            # an ulp, so hold them to the criterion's 1e-12 scale
            exact = [enumerate_expected_utility(d, "attacker", policy, {"UC": uc})
                     for uc in ("riskier", "normal")]
            assert abs(exact[0] - exact[1]) <= 1e-12
            by_uc = [expected_utility(d, "attacker", policy, {"UC": uc})
                     for uc in ("riskier", "normal")]
            assert abs(by_uc[0] - by_uc[1]) <= 1e-12
            eus[ap] = by_uc[0]
            eus[ap, "acv"] = enumerate_expected_value(d, "ACV", policy, {"UC": "riskier"})
        gap = eus["no_perpetrate"] - eus["perpetrate"]
        acv_gap = 0.03 * (eus["no_perpetrate", "acv"] - eus["perpetrate", "acv"])
        assert abs(gap - acv_gap) <= 1e-12


@criterion(5, "variable elimination equals brute-force enumeration within 1e-12 "
              "on 200 random diagrams, in under 30 s")
def test_criterion_5_oracle_equivalence():
    started = time.monotonic()
    rng = np.random.default_rng(20240817)
    for i in range(200):
        d = random_diagram(rng)
        policy = random_policy(rng, d)
        fast = expected_utility(d, "player", policy)
        slow = enumerate_expected_utility(d, "player", policy)
        assert abs(fast - slow) <= 1e-12, f"diagram {i}: {fast} vs {slow}"
    elapsed = time.monotonic() - started
    assert elapsed < 30.0, f"took {elapsed:.2f}s"


@criterion(6, "Monte Carlo contract: byte-identical forecasts for a fixed seed, "
              "draw-count invariance under point rules, and seed-to-seed drift "
              "within three binomial standard errors at 10,000 draws")
def test_criterion_6_monte_carlo_contract():
    d = build_drilling_model()
    a = forecast_attack(d, default_beliefs(), default_uncertainty(), draws=10_000, seed=1)
    b = forecast_attack(d, default_beliefs(), default_uncertainty(), draws=10_000, seed=1)
    assert a.to_json().encode() == b.to_json().encode()

    p1 = forecast_attack(d, point("accept", "continue"), ParameterUncertainty(),
                         draws=1, seed=1)
    p2 = forecast_attack(d, point("accept", "continue"), ParameterUncertainty(),
                         draws=123, seed=99)
    assert p1.probabilities == p2.probabilities

    c = forecast_attack(d, default_beliefs(), default_uncertainty(), draws=10_000, seed=2)
    for ctx in a.probabilities:
        pa, pb = a.probabilities[ctx][0], c.probabilities[ctx][0]
        pooled = (pa + pb) / 2
        if pooled in (0.0, 1.0):
            assert pa == pb
            continue
        bound = 3 * math.sqrt(pooled * (1 - pooled) / 10_000)
        assert abs(pa - pb) <= bound, (ctx, pa, pb, bound)


@criterion(7, "format robustness: round-trip identity on the shipped model and "
              "100 random diagrams; 10,000 random-byte inputs parse without "
              "abnormal termination")
def test_criterion_7_parser_robustness():
    d = parse_model(data_path("drilling.maid").read_text())
    assert parse_model(serialize_model(d)) == d

    rng = np.random.default_rng(20240818)
    for i in range(100):
        g = random_diagram(rng, with_money=bool(i % 2))
        text = serialize_model(g)
        assert parse_model(text) == g
        assert serialize_model(parse_model(text)) == text

    for _ in range(10_000):
        size = int(rng.integers(0, 300))
        blob = bytes(rng.integers(0, 256, size=size, dtype=np.uint8))
        try_parse_model(blob)  # must not raise or abort


@criterion(8, "defender optimization equals exhaustive evaluation over all 48 "
              "policies for every forecast tried")
def test_criterion_8_defender_brute_force_consistency():
    d = build_drilling_model()
    rng = np.random.default_rng(7)
    forecasts = [
        AttackForecast.constant(d, "AP", {"perpetrate": 0.0, "no_perpetrate": 1.0}),
        AttackForecast.constant(d, "AP", {"perpetrate": 1.0, "no_perpetrate": 0.0}),
        AttackForecast.constant(d, "AP", {"perpetrate": 0.37, "no_perpetrate": 0.63}),
        _jagged_forecast(d, rng),
        forecast_attack(d, default_beliefs(), default_uncertainty(), draws=250, seed=3),
    ]
    for forecast in forecasts:
        solution = solve_defender(d, forecast)
        assert len(solution.ranking) == 2 * 2 * 3 * 4
        top = max(r.expected_utility for r in solution.ranking)
        assert solution.optimal.expected_utility == top  # internal consistency, exact

        from araid.ara import apply_forecast
        solved = apply_forecast(d, forecast)
        best_eu = -1.0
        best_policies = []
        for ranked in solution.ranking:
            oracle_eu = enumerate_expected_utility(solved, "defender", ranked.policy)
            assert abs(oracle_eu - ranked.expected_utility) <= 1e-12
            if oracle_eu > best_eu + 1e-12:
                best_eu = oracle_eu
                best_policies = [ranked.policy]
            elif oracle_eu >= best_eu - 1e-12:
                best_policies.append(ranked.policy)
        assert any(p == solution.optimal.policy for p in best_policies)


def _jagged_forecast(d, rng):
    node = d.nodes["AP"]
    probabilities = {}
    for key in parent_tuples(d.nodes, node):
        p = float(np.round(rng.uniform(0.05, 0.95), 6))
        probabilities[key] = (p, 1.0 - p)
    return AttackForecast(decision="AP", context_nodes=node.parents,
                          alternatives=node.domain.labels,
                          probabilities=probabilities, draws=0, seed=0)
