"""Author a small model from scratch in the text format.

A plant operator decides whether to patch a controller now; an outage
either happens or not (patching makes it rarer); the operator cares about
uptime and the patching cost. Shows parsing, diagnostics, evaluation and
the canonical serializer.
"""
from araid import (
    constant_policy,
    decision_table,
    expected_utility,
    parse_model,
    serialize_model,
    try_parse_model,
)

MODEL = """
# patch-or-wait, in the line-oriented model format
agent operator kind=defender

node patch  kind=decision agent=operator domain=now,defer
node outage kind=chance domain=none,brief,extended
node spend  kind=deterministic agent=operator domain=0,25000 money=0.0,25000.0

arc patch -> outage
arc patch -> spend

cpt outage | patch=now   : none=0.90,brief=0.08,extended=0.02
cpt outage | patch=defer : none=0.70,brief=0.20,extended=0.10

det spend | patch=now   : 25000
det spend | patch=defer : 0

node uptime kind=value agent=operator
arc outage -> uptime
value uptime form=table | outage=none     : 1.0
value uptime form=table | outage=brief    : 0.6
value uptime form=table | outage=extended : 0.0

node thrift kind=value agent=operator
arc spend -> thrift
value thrift form=linear scale=100000.0 offset=1.0

node payoff kind=utility agent=operator
arc uptime -> payoff
arc thrift -> payoff
utility payoff weights uptime=0.8 thrift=0.2

order operator patch
"""

diagram = parse_model(MODEL)
print(f"parsed {len(diagram.nodes)} nodes")

for choice in ("now", "defer"):
    eu = expected_utility(diagram, "operator",
                          constant_policy(diagram, {"patch": choice}))
    print(f"  patch {choice:5s}: expected utility {eu:.4f}")

table = decision_table(diagram, "operator", ["patch"])
winner = next(iter(table.argmax))
print(f"optimal: patch {winner[0]}")

# conditioning works the same as in the big model
eu = expected_utility(diagram, "operator", constant_policy(diagram, {"patch": "defer"}),
                      {"outage": "extended"})
print(f"deferred and the outage ran long: utility {eu:.4f}")

# the parser reports every problem with line/column, not just the first
broken = MODEL.replace("none=0.90,brief=0.08,extended=0.02",
                       "none=0.90,brief=0.18,extended=0.02") \
              .replace("order operator patch", "order operator patch ghost")
result, diagnostics = try_parse_model(broken)
print(f"\nbroken variant -> {result}; diagnostics:")
for diag in diagnostics:
    print(f"  line {diag.line}, col {diag.column}: {diag.message}")

# canonical form: stable statement order, shortest round-trip numbers
print("\ncanonical serialization:")
print(serialize_model(diagram))
