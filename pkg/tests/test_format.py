import numpy as np
import pytest

from araid.diagram import validate_diagram
from araid.modelfile import (
    ModelFormatError,
    parse_distribution_rows,
    parse_model,
    serialize_model,
    try_parse_model,
)
from araid.resources import drilling_maid_text

from conftest import random_diagram


def test_minimal_chance_node_parses():
    d = parse_model("node UC kind=chance domain=riskier,normal\n"
                    "cpt UC | : riskier=0.3,normal=0.7\n")
    assert d.nodes["UC"].payload.rows[()] == (0.3, 0.7)


def test_empty_input_reports_no_nodes():
    diagram, diags = try_parse_model("")
    assert diagram is None
    assert any("no nodes declared" in d.message for d in diags)


def test_row_sum_error_carries_line_number():
    text = ("node UC kind=chance domain=riskier,normal\n"
            "cpt UC | : riskier=0.3,normal=0.6\n")
    diagram, diags = try_parse_model(text)
    assert diagram is None
    (diag,) = [d for d in diags if d.severity == "error"]
    assert diag.line == 2
    assert "row sums to 0.9" in diag.message


def test_unknown_keyword_and_undeclared_reference():
    diagram, diags = try_parse_model("frobnicate x\n")
    assert diagram is None and "unknown keyword" in diags[0].message

    text = ("node A kind=chance domain=a\n"
            "cpt A | : a=1.0\n"
            "arc GHOST -> A\n")
    diagram, diags = try_parse_model(text)
    assert diagram is None
    assert any("undeclared node 'GHOST'" in d.message for d in diags)


def test_duplicate_and_missing_rows():
    text = ("node P kind=chance domain=a,b\n"
            "cpt P | : a=0.5,b=0.5\n"
            "node X kind=chance domain=a,b\n"
            "arc P -> X\n"
            "cpt X | P=a : a=1.0,b=0.0\n"
            "cpt X | P=a : a=1.0,b=0.0\n")
    diagram, diags = try_parse_model(text)
    assert diagram is None
    messages = " / ".join(d.message for d in diags)
    assert "duplicate row" in messages
    assert "incomplete table" in messages


def test_row_before_declaration_is_an_error():
    text = ("cpt X | : a=1.0\n"
            "node X kind=chance domain=a\n")
    diagram, diags = try_parse_model(text)
    assert diagram is None
    assert any("must follow their node declaration" in d.message for d in diags)


def test_malformed_number():
    text = ("node X kind=chance domain=a,b\n"
            "cpt X | : a=0.5,b=zebra\n")
    diagram, diags = try_parse_model(text)
    assert diagram is None
    assert any("malformed number 'zebra'" in d.message for d in diags)


def test_diagnostics_are_stable():
    text = ("node X kind=chance domain=a,b\n"
            "cpt X | : a=0.9,b=0.2\n"
            "arc GHOST -> X\n"
            "banana\n")
    _, first = try_parse_model(text)
    _, second = try_parse_model(text)
    assert first == second
    assert [d.line for d in first] == sorted(d.line for d in first)


def test_drilling_round_trip_identity(drilling):
    text = serialize_model(drilling)
    again = parse_model(text)
    assert again == drilling
    assert serialize_model(again) == text


def test_shipped_model_file_matches_builder(drilling):
    assert drilling_maid_text() == serialize_model(drilling)
    parsed = parse_model(drilling_maid_text())
    assert validate_diagram(parsed) == []
    assert parsed == drilling


def test_round_trip_on_random_diagrams():
    rng = np.random.default_rng(64)
    for i in range(40):
        d = random_diagram(rng, with_money=bool(i % 3 == 0))
        text = serialize_model(d)
        again = parse_model(text)
        assert again == d, f"diagram {i} not identical after round trip"
        assert serialize_model(again) == text


def test_round_trip_preserves_table_bits(drilling):
    again = parse_model(serialize_model(drilling))
    for nid, node in drilling.nodes.items():
        other = again.nodes[nid]
        if hasattr(node.payload, "rows") and node.payload is not None:
            assert other.payload.rows == node.payload.rows  # bit-equal floats


def test_fuzz_random_bytes_never_raise():
    rng = np.random.default_rng(1234)
    for _ in range(1500):
        size = int(rng.integers(0, 200))
        blob = bytes(rng.integers(0, 256, size=size, dtype=np.uint8))
        diagram, diags = try_parse_model(blob)  # must not raise
        if diagram is None:
            assert diags


def test_fuzz_structured_garbage_never_raises():
    rng = np.random.default_rng(4321)
    words = ["node", "cpt", "arc", "agent", "order", "value", "utility", "det",
             "|", ":", "=", ",", "->", "kind=chance", "domain=a,b", "x", "0.5",
             "\n", "#", "nan", "inf", "-", "1e309"]
    for _ in range(1500):
        n = int(rng.integers(1, 40))
        text = " ".join(words[int(i)] for i in rng.integers(0, len(words), size=n))
        try_parse_model(text)  # must not raise


def test_parse_distribution_rows():
    text = ("# beliefs\n"
            "cpt DT | : avoid=0.0,share=0.0,accept=1.0\n"
            "cpt DR | : continue=1.0,stop=0.0\n")
    beliefs = parse_distribution_rows(text)
    assert beliefs == {"DT": {"avoid": 0.0, "share": 0.0, "accept": 1.0},
                       "DR": {"continue": 1.0, "stop": 0.0}}
    with pytest.raises(ModelFormatError):
        parse_distribution_rows("node X kind=chance\n")
