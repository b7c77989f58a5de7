"""Line-oriented text format for diagrams (`.maid` files).

One statement per line, `#` starts a comment, UTF-8. Statement kinds:

    agent <id> kind=<defender|attacker|nature> [name=<word>]
    node <id> kind=<decision|chance|deterministic|value|utility>
         [agent=<id>] [domain=a,b,c] [money=<f>,<f>,...]
    arc <src> -> <dst>
    cpt <node> | <parent>=<label>,... : <label>=<prob>,...
    det <node> | <parent>=<label>,... : <label>
    value <node> form=linear scale=<f> offset=<f>
    value <node> form=power_root scale=<f> root=<f>
    value <node> form=indicator one=<labels> zero=<labels>
    value <node> form=table | <parent>=<label>,... : <score>
    utility <node> weights <value-node>=<w> ...
    order <agent> <decision> ...

Statement order is free except that cpt/det/value-table rows must follow
their node declaration. Parent order (the key order of every table) is the
order arcs are declared in. The parser reports *all* diagnostics, with
1-based line and column; the serializer emits a canonical form that parses
back to an identical diagram.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .diagram import (
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
    Violation,
    build_diagram,
    parent_tuples,
    stochastic_row_violation,
    topological_order,
    validate_diagram,
)

_WORD = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_.+-]*$")


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    severity: str  # "error" | "warning"
    message: str
    text: str = ""

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class ModelFormatError(ValueError):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        summary = "\n".join(f"  {d}" for d in diagnostics[:20])
        more = "" if len(diagnostics) <= 20 else f"\n  ... {len(diagnostics) - 20} more"
        super().__init__(f"model text has {len(diagnostics)} problem(s):\n{summary}{more}")


@dataclass
class _NodeDraft:
    line: int
    id: str
    kind: str | None = None
    agent: str | None = None
    domain: tuple[str, ...] | None = None
    money: tuple[float, ...] | None = None
    parents: list[str] = field(default_factory=list)
    cpt_rows: list[tuple[int, dict[str, str], dict[str, float]]] = field(default_factory=list)
    det_rows: list[tuple[int, dict[str, str], str]] = field(default_factory=list)
    value_rows: list[tuple[int, dict[str, str], float]] = field(default_factory=list)
    value_params: dict[str, str] | None = None
    value_line: int = 0
    weights: dict[str, float] | None = None


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.diags: list[ParseDiagnostic] = []
        self.agents: dict[str, tuple[int, Agent]] = {}
        self.nodes: dict[str, _NodeDraft] = {}
        self.arcs: list[tuple[int, str, str]] = []
        self.orders: dict[str, tuple[int, tuple[str, ...]]] = {}

    # -- diagnostics helpers -------------------------------------------------

    def error(self, line_no: int, message: str, token: str = "") -> None:
        col = 1
        if token:
            lines = self.text.split("\n")
            if 1 <= line_no <= len(lines):
                pos = lines[line_no - 1].find(token)
                col = pos + 1 if pos >= 0 else 1
        self.diags.append(ParseDiagnostic(line_no, col, "error", message, token))

    def _word(self, line_no: int, token: str, what: str) -> str | None:
        if not _WORD.match(token):
            self.error(line_no, f"malformed {what} {token!r}", token)
            return None
        return token

    def _float(self, line_no: int, token: str) -> float | None:
        try:
            value = float(token)
        except ValueError:
            self.error(line_no, f"malformed number {token!r}", token)
            return None
        if value != value:  # NaN never belongs in a model file
            self.error(line_no, f"malformed number {token!r}", token)
            return None
        return value

    def _kv_pairs(self, line_no: int, tokens: list[str]) -> dict[str, str] | None:
        out: dict[str, str] = {}
        for tok in tokens:
            if "=" not in tok:
                self.error(line_no, f"expected key=value, got {tok!r}", tok)
                return None
            k, v = tok.split("=", 1)
            if k in out:
                self.error(line_no, f"duplicate key {k!r}", tok)
                return None
            out[k] = v
        return out

    # -- statement dispatch ----------------------------------------------------

    def parse(self) -> None:
        for line_no, raw in enumerate(self.text.split("\n"), start=1):
            stmt = raw.split("#", 1)[0].strip()
            if not stmt:
                continue
            tokens = stmt.split()
            keyword = tokens[0]
            handler = getattr(self, f"_stmt_{keyword}", None)
            if handler is None:
                self.error(line_no, f"unknown keyword {keyword!r}", keyword)
                continue
            handler(line_no, stmt, tokens[1:])

    def _stmt_agent(self, line_no: int, stmt: str, args: list[str]) -> None:
        if not args:
            return self.error(line_no, "agent statement needs an id")
        aid = self._word(line_no, args[0], "agent id")
        kv = self._kv_pairs(line_no, args[1:])
        if aid is None or kv is None:
            return
        if aid in self.agents:
            return self.error(line_no, f"duplicate agent {aid!r}", aid)
        kind_token = kv.pop("kind", None)
        name = kv.pop("name", "")
        if kv:
            return self.error(line_no, f"unknown agent attribute(s) {sorted(kv)}")
        try:
            kind = AgentKind(kind_token)
        except ValueError:
            return self.error(line_no, f"agent kind must be defender/attacker/nature, "
                                       f"got {kind_token!r}", kind_token or "")
        self.agents[aid] = (line_no, Agent(aid, kind, name))

    def _stmt_node(self, line_no: int, stmt: str, args: list[str]) -> None:
        if not args:
            return self.error(line_no, "node statement needs an id")
        nid = self._word(line_no, args[0], "node id")
        kv = self._kv_pairs(line_no, args[1:])
        if nid is None or kv is None:
            return
        if nid in self.nodes:
            return self.error(line_no, f"duplicate node {nid!r}", nid)
        draft = _NodeDraft(line=line_no, id=nid)
        draft.kind = kv.pop("kind", None)
        if draft.kind not in {k.value for k in NodeKind}:
            return self.error(line_no, f"node kind must be one of decision/chance/"
                                       f"deterministic/value/utility, got {draft.kind!r}")
        draft.agent = kv.pop("agent", None)
        if "domain" in kv:
            labels = tuple(kv.pop("domain").split(","))
            for lbl in labels:
                if not _WORD.match(lbl):
                    return self.error(line_no, f"malformed domain label {lbl!r}", lbl)
            draft.domain = labels
        if "money" in kv:
            tags = []
            for tok in kv.pop("money").split(","):
                val = self._float(line_no, tok)
                if val is None:
                    return
                tags.append(val)
            draft.money = tuple(tags)
            if draft.domain is None or len(draft.money) != len(draft.domain):
                return self.error(line_no, "money= must tag each domain label, in order")
        if kv:
            return self.error(line_no, f"unknown node attribute(s) {sorted(kv)}")
        self.nodes[nid] = draft

    def _stmt_arc(self, line_no: int, stmt: str, args: list[str]) -> None:
        if len(args) != 3 or args[1] != "->":
            return self.error(line_no, "arc statement must be `arc <src> -> <dst>`")
        src = self._word(line_no, args[0], "node id")
        dst = self._word(line_no, args[2], "node id")
        if src and dst:
            self.arcs.append((line_no, src, dst))

    def _split_row(self, line_no: int, stmt: str) -> tuple[str, str, str] | None:
        """Split `<kw> <head...> | conds : outcome` into (head, conds, outcome)."""
        body = stmt.split(None, 1)[1] if len(stmt.split(None, 1)) > 1 else ""
        if "|" not in body:
            self.error(line_no, "row statement needs `| <conditions> : <outcome>`")
            return None
        head, rest = body.split("|", 1)
        if ":" not in rest:
            self.error(line_no, "row statement needs `:` before the outcome")
            return None
        conds, outcome = rest.split(":", 1)
        return head.strip(), conds.strip(), outcome.strip()

    def _parse_conditions(self, line_no: int, conds: str) -> dict[str, str] | None:
        out: dict[str, str] = {}
        if not conds:
            return out
        for part in conds.split(","):
            part = part.strip()
            if "=" not in part:
                self.error(line_no, f"condition must be parent=label, got {part!r}", part)
                return None
            k, v = part.split("=", 1)
            if k in out:
                self.error(line_no, f"condition repeats parent {k!r}", part)
                return None
            out[k] = v
        return out

    def _row_target(self, line_no: int, node: str) -> _NodeDraft | None:
        if node not in self.nodes:
            self.error(line_no, f"row for undeclared node {node!r} "
                                f"(rows must follow their node declaration)", node)
            return None
        return self.nodes[node]

    def _stmt_cpt(self, line_no: int, stmt: str, args: list[str]) -> None:
        parts = self._split_row(line_no, stmt)
        if parts is None:
            return
        node, conds_text, outcome_text = parts
        if not self._word(line_no, node, "node id"):
            return
        draft = self._row_target(line_no, node)
        conds = self._parse_conditions(line_no, conds_text)
        if draft is None or conds is None:
            return
        probs: dict[str, float] = {}
        for part in outcome_text.split(","):
            part = part.strip()
            if "=" not in part:
                return self.error(line_no, f"outcome must be label=prob, got {part!r}", part)
            lbl, ptok = part.split("=", 1)
            p = self._float(line_no, ptok)
            if p is None:
                return
            if lbl in probs:
                return self.error(line_no, f"outcome repeats label {lbl!r}", part)
            probs[lbl] = p
        problem = stochastic_row_violation(list(probs.values()))
        if problem:
            self.error(line_no, problem)
        draft.cpt_rows.append((line_no, conds, probs))

    def _stmt_det(self, line_no: int, stmt: str, args: list[str]) -> None:
        parts = self._split_row(line_no, stmt)
        if parts is None:
            return
        node, conds_text, outcome = parts
        if not self._word(line_no, node, "node id"):
            return
        draft = self._row_target(line_no, node)
        conds = self._parse_conditions(line_no, conds_text)
        if draft is None or conds is None:
            return
        if not _WORD.match(outcome):
            return self.error(line_no, f"malformed output label {outcome!r}", outcome)
        draft.det_rows.append((line_no, conds, outcome))

    def _stmt_value(self, line_no: int, stmt: str, args: list[str]) -> None:
        if not args:
            return self.error(line_no, "value statement needs a node id")
        if "|" in stmt:  # table row form
            parts = self._split_row(line_no, stmt)
            if parts is None:
                return
            head, conds_text, outcome = parts
            # head is `<node> form=table`
            node = head.split()[0] if head.split() else ""
            if not self._word(line_no, node, "node id"):
                return
            draft = self._row_target(line_no, node)
            conds = self._parse_conditions(line_no, conds_text)
            if draft is None or conds is None:
                return
            head_kv = self._kv_pairs(line_no, head.split()[1:])
            if head_kv is None or head_kv.get("form", "table") != "table":
                return self.error(line_no, "row-style value statements must use form=table")
            score = self._float(line_no, outcome)
            if score is None:
                return
            if draft.value_params is None:
                draft.value_params = {"form": "table"}
                draft.value_line = line_no
            elif draft.value_params.get("form") != "table":
                return self.error(line_no, f"conflicting value forms for {draft.id!r}")
            draft.value_rows.append((line_no, conds, score))
            return
        nid = self._word(line_no, args[0], "node id")
        if nid is None:
            return
        draft = self._row_target(line_no, nid)
        kv = self._kv_pairs(line_no, args[1:])
        if draft is None or kv is None:
            return
        if draft.value_params is not None:
            return self.error(line_no, f"duplicate value statement for {nid!r}", nid)
        if kv.get("form") not in ValueSpec.FORMS:
            return self.error(line_no, f"value form must be one of {ValueSpec.FORMS}")
        draft.value_params = kv
        draft.value_line = line_no

    def _stmt_utility(self, line_no: int, stmt: str, args: list[str]) -> None:
        if len(args) < 2 or args[1] != "weights":
            return self.error(line_no, "utility statement must be "
                                       "`utility <node> weights <value>=<w> ...`")
        nid = self._word(line_no, args[0], "node id")
        if nid is None:
            return
        draft = self._row_target(line_no, nid)
        kv = self._kv_pairs(line_no, args[2:])
        if draft is None or kv is None:
            return
        if draft.weights is not None:
            return self.error(line_no, f"duplicate utility statement for {nid!r}", nid)
        weights: dict[str, float] = {}
        for k, tok in kv.items():
            w = self._float(line_no, tok)
            if w is None:
                return
            weights[k] = w
        draft.weights = weights

    def _stmt_order(self, line_no: int, stmt: str, args: list[str]) -> None:
        if not args:
            return self.error(line_no, "order statement needs an agent id")
        aid = self._word(line_no, args[0], "agent id")
        if aid is None:
            return
        if aid in self.orders:
            return self.error(line_no, f"duplicate order statement for {aid!r}", aid)
        decisions = []
        for tok in args[1:]:
            w = self._word(line_no, tok, "node id")
            if w is None:
                return
            decisions.append(w)
        self.orders[aid] = (line_no, tuple(decisions))

    # -- assembly ---------------------------------------------------------------

    def assemble(self) -> Diagram | None:
        if not self.nodes and not self.diags:
            self.error(1, "no nodes declared")
        for line_no, src, dst in self.arcs:
            if src not in self.nodes:
                self.error(line_no, f"arc references undeclared node {src!r}", src)
            elif dst not in self.nodes:
                self.error(line_no, f"arc references undeclared node {dst!r}", dst)
            elif src in self.nodes[dst].parents:
                self.error(line_no, f"duplicate arc {src} -> {dst}", src)
            else:
                self.nodes[dst].parents.append(src)

        flagged_rows: set[tuple[str, tuple[str, ...]]] = set()
        built: list[Node] = []
        for draft in self.nodes.values():
            node = self._assemble_node(draft, flagged_rows)
            if node is not None:
                built.append(node)

        agents = tuple(a for _, a in self.agents.values())
        order = {aid: seq for aid, (_, seq) in self.orders.items()}
        draft_diagram = Diagram(agents=tuple(sorted(agents, key=lambda a: a.id)),
                                nodes={n.id: n for n in built},
                                decision_order=order)
        for violation in validate_diagram(draft_diagram):
            if violation.node and violation.key is not None and \
                    (violation.node, violation.key) in flagged_rows:
                continue  # already reported with the row's own line number
            self.error(self._line_of(violation), str(violation))
        if any(d.severity == "error" for d in self.diags):
            return None
        return build_diagram(agents, built, order)

    def _line_of(self, violation: Violation) -> int:
        if violation.node and violation.node in self.nodes:
            return self.nodes[violation.node].line
        return 1

    def _ordered_key(self, draft: _NodeDraft, line_no: int,
                     conds: dict[str, str]) -> tuple[str, ...] | None:
        if set(conds) != set(draft.parents):
            self.error(line_no, f"row conditions {sorted(conds)} must name exactly the "
                                f"declared parents {draft.parents} of {draft.id!r}")
            return None
        return tuple(conds[p] for p in draft.parents)

    def _assemble_node(self, draft: _NodeDraft,
                       flagged: set[tuple[str, tuple[str, ...]]]) -> Node | None:
        kind = NodeKind(draft.kind)
        domain = None
        if draft.domain is not None:
            domain = Domain(labels=draft.domain, numeric_tags=draft.money)
        payload = None

        if kind == NodeKind.CHANCE:
            rows: dict[tuple[str, ...], tuple[float, ...]] = {}
            for line_no, conds, probs in draft.cpt_rows:
                key = self._ordered_key(draft, line_no, conds)
                if key is None:
                    continue
                if key in rows:
                    self.error(line_no, f"duplicate row {key} for node {draft.id!r}")
                    continue
                if domain is not None and set(probs) != set(domain.labels):
                    self.error(line_no, f"row must give one probability per domain label "
                                        f"of {draft.id!r}")
                    continue
                rows[key] = tuple(probs[lbl] for lbl in domain.labels)
                if stochastic_row_violation(rows[key]):
                    flagged.add((draft.id, key))
            payload = Cpt(rows)
        elif kind == NodeKind.DETERMINISTIC:
            drows: dict[tuple[str, ...], str] = {}
            for line_no, conds, label in draft.det_rows:
                key = self._ordered_key(draft, line_no, conds)
                if key is None:
                    continue
                if key in drows:
                    self.error(line_no, f"duplicate row {key} for node {draft.id!r}")
                    continue
                drows[key] = label
            payload = DetTable(drows)
        elif kind == NodeKind.VALUE:
            payload = self._assemble_value(draft)
        elif kind == NodeKind.UTILITY:
            payload = UtilitySpec(draft.weights or {})
            if draft.weights is None:
                self.error(draft.line, f"utility node {draft.id!r} has no weights statement")

        if draft.cpt_rows and kind != NodeKind.CHANCE:
            self.error(draft.cpt_rows[0][0], f"cpt rows given for non-chance node {draft.id!r}")
        if draft.det_rows and kind != NodeKind.DETERMINISTIC:
            self.error(draft.det_rows[0][0],
                       f"det rows given for non-deterministic node {draft.id!r}")
        if (draft.value_params or draft.value_rows) and kind != NodeKind.VALUE:
            self.error(draft.value_line or draft.line,
                       f"value statement given for non-value node {draft.id!r}")
        if draft.weights is not None and kind != NodeKind.UTILITY:
            self.error(draft.line, f"weights given for non-utility node {draft.id!r}")

        return Node(id=draft.id, kind=kind, owner=draft.agent, domain=domain,
                    parents=tuple(draft.parents), payload=payload)

    def _assemble_value(self, draft: _NodeDraft) -> ValueSpec | None:
        if draft.value_params is None:
            self.error(draft.line, f"value node {draft.id!r} has no value statement")
            return None
        params = dict(draft.value_params)
        form = params.pop("form")
        line = draft.value_line
        if form == "table":
            rows: dict[tuple[str, ...], float] = {}
            for line_no, conds, score in draft.value_rows:
                key = self._ordered_key(draft, line_no, conds)
                if key is None:
                    continue
                if key in rows:
                    self.error(line_no, f"duplicate row {key} for node {draft.id!r}")
                    continue
                rows[key] = score
            return ValueSpec("table", rows=rows)
        if form == "indicator":
            one = frozenset(params.pop("one", "").split(",")) - {""}
            zero = frozenset(params.pop("zero", "").split(",")) - {""}
            if params:
                self.error(line, f"unknown value attribute(s) {sorted(params)}")
            return ValueSpec("indicator", one_labels=one, zero_labels=zero)
        scale = self._float(line, params.pop("scale", "nan"))
        if form == "linear":
            offset = self._float(line, params.pop("offset", "nan"))
            if params:
                self.error(line, f"unknown value attribute(s) {sorted(params)}")
            if scale is None or offset is None:
                return None
            return ValueSpec("linear", scale=scale, offset=offset)
        root = self._float(line, params.pop("root", "nan"))
        if params:
            self.error(line, f"unknown value attribute(s) {sorted(params)}")
        if scale is None or root is None:
            return None
        return ValueSpec("power_root", scale=scale, root=root)


def try_parse_model(text: str | bytes) -> tuple[Diagram | None, list[ParseDiagnostic]]:
    """Parse, reporting every diagnostic; never raises on malformed input."""
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    parser = _Parser(text)
    try:
        parser.parse()
        diagram = parser.assemble()
    except Exception as exc:  # containment: arbitrary input must not abort
        parser.diags.append(ParseDiagnostic(1, 1, "error", f"internal parser error: {exc}"))
        diagram = None
    diags = sorted(parser.diags, key=lambda d: (d.line, d.column, d.message))
    if any(d.severity == "error" for d in diags):
        return None, diags
    return diagram, diags


def parse_model(text: str | bytes) -> Diagram:
    """Parse or raise ModelFormatError with the full diagnostic list."""
    diagram, diags = try_parse_model(text)
    if diagram is None:
        raise ModelFormatError([d for d in diags if d.severity == "error"])
    return diagram


def parse_distribution_rows(text: str | bytes) -> dict[str, dict[str, float]]:
    """Parse bare `cpt <node> | : label=p,...` rows (belief files)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    out: dict[str, dict[str, float]] = {}
    diags: list[ParseDiagnostic] = []
    parser = _Parser(text)
    for line_no, raw in enumerate(text.split("\n"), start=1):
        stmt = raw.split("#", 1)[0].strip()
        if not stmt:
            continue
        tokens = stmt.split()
        if tokens[0] != "cpt":
            diags.append(ParseDiagnostic(line_no, 1, "error",
                                         "belief files hold only cpt rows"))
            continue
        parts = parser._split_row(line_no, stmt)
        if parts is None:
            continue
        node, conds, outcome = parts
        if conds:
            parser.error(line_no, "belief rows are unconditional (leave `|  :` empty)")
            continue
        probs: dict[str, float] = {}
        ok = True
        for part in outcome.split(","):
            part = part.strip()
            if "=" not in part:
                parser.error(line_no, f"outcome must be label=prob, got {part!r}")
                ok = False
                break
            lbl, ptok = part.split("=", 1)
            p = parser._float(line_no, ptok)
            if p is None:
                ok = False
                break
            probs[lbl] = p
        if ok:
            out[node] = probs
    diags.extend(parser.diags)
    errors = [d for d in diags if d.severity == "error"]
    if errors:
        raise ModelFormatError(sorted(errors, key=lambda d: (d.line, d.column)))
    return out


# ---------------------------------------------------------------------------
# canonical serializer
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def _check_word(token: str, what: str) -> str:
    if not _WORD.match(token):
        raise ValueError(f"{what} {token!r} cannot be written in model-file syntax")
    return token


def serialize_model(d: Diagram) -> str:
    """Canonical text: agents, nodes (topological), arcs, tables, values,
    utilities, orders. Numbers print in shortest round-trip form, so
    parsing the output reproduces every table bit for bit."""
    lines: list[str] = []
    for a in sorted(d.agents, key=lambda a: a.id):
        line = f"agent {_check_word(a.id, 'agent id')} kind={a.kind.value}"
        if a.display_name:
            line += f" name={_check_word(a.display_name, 'display name')}"
        lines.append(line)

    topo = topological_order(d)
    for nid in topo:
        n = d.nodes[nid]
        line = f"node {_check_word(nid, 'node id')} kind={n.kind.value}"
        if n.owner is not None:
            line += f" agent={_check_word(n.owner, 'agent id')}"
        if n.domain is not None:
            labels = ",".join(_check_word(lbl, "label") for lbl in n.domain.labels)
            line += f" domain={labels}"
            if n.domain.numeric_tags is not None:
                line += " money=" + ",".join(_fmt(t) for t in n.domain.numeric_tags)
        lines.append(line)

    for nid in topo:
        for p in d.nodes[nid].parents:
            lines.append(f"arc {p} -> {nid}")

    def conds(n: Node, key: tuple[str, ...]) -> str:
        return ",".join(f"{p}={v}" for p, v in zip(n.parents, key))

    for nid in topo:
        n = d.nodes[nid]
        if n.kind == NodeKind.CHANCE:
            for key in parent_tuples(d.nodes, n):
                row = n.payload.rows[key]
                outcome = ",".join(f"{lbl}={_fmt(p)}"
                                   for lbl, p in zip(n.domain.labels, row))
                lines.append(f"cpt {nid} | {conds(n, key)} : {outcome}")
        elif n.kind == NodeKind.DETERMINISTIC:
            for key in parent_tuples(d.nodes, n):
                lines.append(f"det {nid} | {conds(n, key)} : {n.payload.rows[key]}")

    for nid in topo:
        n = d.nodes[nid]
        if n.kind != NodeKind.VALUE:
            continue
        spec: ValueSpec = n.payload
        if spec.form == "table":
            for key in parent_tuples(d.nodes, n):
                lines.append(f"value {nid} form=table | {conds(n, key)} : "
                             f"{_fmt(spec.rows[key])}")
        elif spec.form == "linear":
            lines.append(f"value {nid} form=linear scale={_fmt(spec.scale)} "
                         f"offset={_fmt(spec.offset)}")
        elif spec.form == "power_root":
            lines.append(f"value {nid} form=power_root scale={_fmt(spec.scale)} "
                         f"root={_fmt(spec.root)}")
        else:
            one = ",".join(sorted(spec.one_labels))
            zero = ",".join(sorted(spec.zero_labels))
            lines.append(f"value {nid} form=indicator one={one} zero={zero}")

    for nid in topo:
        n = d.nodes[nid]
        if n.kind == NodeKind.UTILITY:
            weights = " ".join(f"{p}={_fmt(n.payload.weights[p])}" for p in n.parents)
            lines.append(f"utility {nid} weights {weights}")

    for aid in sorted(d.decision_order):
        seq = d.decision_order[aid]
        if seq:
            lines.append(f"order {aid} " + " ".join(seq))
    return "\n".join(lines) + "\n"
