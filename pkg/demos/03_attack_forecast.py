"""Forecast the attacker's move, then optimize the defender against it.

The defender cannot observe the intruder's reasoning, so she solves his
problem: her risk-treatment and respond decisions become distributions
(what he believes she will do), the parameters she is unsure about get
sampling rules, and Monte Carlo over those draws yields the probability
that attacking is his best move, per observable posture.
"""
from araid import attacker_view, best_response, forecast_attack, solve_defender
from araid.drilling import build_drilling_model, default_beliefs, default_uncertainty

diagram = build_drilling_model()

# --- point beliefs first: the qualitative story ---------------------------
print("best responses under point beliefs (posture: no protection, no forensics):")
for dt, dr in (("accept", "continue"), ("share", "continue"), ("avoid", "continue")):
    beliefs = {
        "DT": {k: 1.0 if k == dt else 0.0 for k in ("avoid", "share", "accept")},
        "DR": {k: 1.0 if k == dr else 0.0 for k in ("continue", "stop")},
    }
    view = attacker_view(diagram, beliefs, observed={"DP", "DF"})
    br = best_response(view, "attacker",
                       {"DP": "no_additional", "DF": "no_forensic", "UC": "riskier"})
    gap = br.expected["perpetrate"] - br.expected["no_perpetrate"]
    print(f"  believes defender will {dt:6s}/{dr}: optimal={br.optimal[0]:13s} "
          f"(gap {gap:+.4f})")
print("-> attacking only pays if he believes the risk will simply be accepted.")

# --- full forecast under parameter uncertainty -----------------------------
forecast = forecast_attack(diagram, default_beliefs(), default_uncertainty(),
                           draws=10_000, seed=42)
print(f"\nattack probability per observable context "
      f"({forecast.draws} draws, seed {forecast.seed}):")
for ctx in sorted(forecast.probabilities):
    p = forecast.probability(ctx, "perpetrate")
    posture = " ".join(f"{n}={v}" for n, v in zip(forecast.context_nodes, ctx))
    print(f"  {posture:55s} P(attack optimal) = {p:.4f}")
print("-> visible protection and forensics both discourage the attack.")

# --- defender optimization ---------------------------------------------------
solution = solve_defender(diagram, forecast)
best = solution.optimal
print(f"\noptimal defender policy against that forecast "
      f"(enumerated {len(solution.ranking)} policies):")
print(f"  protection: {best.choice('DP')}")
print(f"  forensics:  {best.choice('DF')}")
print(f"  treatment:  {best.choice('DT')}")
print(f"  response:   attack->{best.choice('DR', ('attack',))}, "
      f"no attack->{best.choice('DR', ('no_attack',))}")
print(f"  expected utility {best.expected_utility:.6f}")

runner_up = solution.ranking[1]
summary = {dec: sorted(set(rule.values())) for dec, rule in runner_up.policy.items()}
print(f"\nrunner-up at {runner_up.expected_utility:.6f}: {summary}")
