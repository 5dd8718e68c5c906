"""Textual DSL for belief bases and scenario files, plus a JSON mirror.

Grammar (whitespace-insensitive, `//` comments to end of line):

    base      := { statement }
    statement := [ label ":" ] ( fact | rule ) "."
    fact      := literal
    rule      := literal { "&" literal } "->" literal
    literal   := [ "!" ] atom
    atom      := ident [ "(" term { "," term } ")" ]

Identifiers start with a letter.  In argument position an uppercase-led
identifier is a variable and a lowercase-led one is a constant; any identifier
may appear in functor position.

Scenario files are sectioned:

    [meta]          id = ..., type = I | II | III
    [statements]    one `LABEL: conditional|categorical: statement.` per line
    [fact]          a conjunction of ground literals, "."-terminated
    [explanation]   optional; base statements

Canonical rendering sorts facts before rules, each group lexicographically by
serialized form, so `parse(render(x))` equals `x` under canonical form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from . import revision as _revision
from .errors import ParseError, ScenarioInvalid, SourceSpan
from .logic import (
    Atom,
    BeliefBase,
    Literal,
    Rule,
    Statement,
    Term,
    collect_signature,
    ground,
    is_consistent,
)

# --- tokenizer --------------------------------------------------------------

_PUNCT = {"!": "bang", "&": "amp", ".": "dot", ",": "comma", "(": "lparen",
          ")": "rparen", ":": "colon"}


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | bang | amp | arrow | dot | comma | lparen | rparen | colon | eof
    text: str
    span: SourceSpan


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        span = SourceSpan(line, col)
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            tokens.append(_Token("ident", word, SourceSpan(line, col, len(word))))
            col += j - i
            i = j
            continue
        if text.startswith("->", i):
            tokens.append(_Token("arrow", "->", SourceSpan(line, col, 2)))
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, span))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", span)
    tokens.append(_Token("eof", "", SourceSpan(line, col)))
    return tokens


# --- parser -----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self, offset: int = 0) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def take(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"expected {kind}, found {tok.text or 'end of input'!r}",
                tok.span,
                expected=(kind,),
            )
        self.pos += 1
        return tok

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def parse_atom(self) -> Atom:
        name = self.take("ident")
        args: list[Term] = []
        if self.at("lparen"):
            self.take("lparen")
            args.append(self.parse_term())
            while self.at("comma"):
                self.take("comma")
                args.append(self.parse_term())
            self.take("rparen")
        return Atom(name.text, tuple(args))

    def parse_term(self) -> Term:
        tok = self.take("ident")
        return Term(tok.text)

    def parse_literal(self) -> Literal:
        negated = False
        if self.at("bang"):
            self.take("bang")
            negated = True
        return Literal(self.parse_atom(), negated)

    def parse_statement_body(self) -> Literal | Rule:
        """One fact or rule, without label or terminating dot."""
        first_span = self.peek().span
        literals = [self.parse_literal()]
        while self.at("amp"):
            self.take("amp")
            literals.append(self.parse_literal())
        if self.at("arrow"):
            self.take("arrow")
            head = self.parse_literal()
            try:
                return Rule(tuple(literals), head)
            except ValueError as exc:
                raise ParseError(str(exc), first_span) from exc
        if len(literals) > 1:
            raise ParseError(
                "conjunction without '->': only rule bodies may use '&'",
                self.peek().span,
                expected=("arrow",),
            )
        fact = literals[0]
        if not fact.is_ground:
            raise ParseError(f"fact is not ground: {fact}", first_span)
        return fact

    def parse_labeled_statement(self) -> tuple[str | None, Literal | Rule]:
        label = None
        if self.at("ident") and self.peek(1).kind == "colon":
            label = self.take("ident").text
            self.take("colon")
        formula = self.parse_statement_body()
        self.take("dot")
        return label, formula

    def parse_base(self) -> BeliefBase:
        raw: list[tuple[str | None, Literal | Rule]] = []
        while not self.at("eof"):
            raw.append(self.parse_labeled_statement())
        return _label_statements(raw, self)

    def parse_conjunction(self) -> tuple[Literal, ...]:
        span = self.peek().span
        literals = [self.parse_literal()]
        while self.at("amp"):
            self.take("amp")
            literals.append(self.parse_literal())
        if self.at("dot"):
            self.take("dot")
        self.take("eof")
        for lit in literals:
            if not lit.is_ground:
                raise ParseError(f"literal is not ground: {lit}", span)
        return tuple(literals)


def _label_statements(raw: list[tuple[str | None, Literal | Rule]], parser: _Parser) -> BeliefBase:
    taken = {label for label, _ in raw if label is not None}
    stmts = []
    nf = nr = 0
    for label, formula in raw:
        if label is None:
            prefix = "r" if isinstance(formula, Rule) else "f"
            while True:
                if isinstance(formula, Rule):
                    nr += 1
                    label = f"{prefix}{nr}"
                else:
                    nf += 1
                    label = f"{prefix}{nf}"
                if label not in taken:
                    break
            taken.add(label)
        stmts.append(Statement(label, formula))
    try:
        base = BeliefBase(stmts)
    except ValueError as exc:
        raise ParseError(str(exc), parser.peek().span) from exc
    collect_signature([base])  # arity consistency within the text
    return base


def parse_base(text: str) -> BeliefBase:
    """Parse a belief base; unlabeled elements get f1, f2, ... / r1, r2, ..."""
    return _Parser(text).parse_base()


def parse_literals(text: str) -> tuple[Literal, ...]:
    """Parse a conjunction of ground literals (an explanandum or scenario fact)."""
    return _Parser(text).parse_conjunction()


# --- scenarios ---------------------------------------------------------------

VALID_TYPES = ("I", "II", "III")
STATEMENT_KINDS = ("conditional", "categorical")


@dataclass(frozen=True)
class ScenarioStatement:
    label: str
    kind: str  # conditional | categorical
    formula: Literal | Rule

    def statement(self) -> Statement:
        return Statement(self.label, self.formula)


@dataclass(frozen=True)
class Scenario:
    """One labeled inconsistency problem: statements, a conflicting fact, and
    optionally the canonical explanation resolving it."""

    id: str
    problem_type: str
    statements: tuple[ScenarioStatement, ...]
    fact: tuple[Literal, ...]
    explanation: BeliefBase | None = None

    def belief_base(self) -> BeliefBase:
        return BeliefBase(tuple(s.statement() for s in self.statements))

    def conditionals(self) -> tuple[ScenarioStatement, ...]:
        return tuple(s for s in self.statements if s.kind == "conditional")

    def categoricals(self) -> tuple[ScenarioStatement, ...]:
        return tuple(s for s in self.statements if s.kind == "categorical")


def _split_sections(text: str) -> dict[str, list[tuple[int, str]]]:
    sections: dict[str, list[tuple[int, str]]] = {}
    current: str | None = None
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("//", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            if current in sections:
                raise ParseError(f"duplicate section [{current}]", SourceSpan(lineno, 1, len(line)))
            sections[current] = []
            continue
        if current is None:
            raise ParseError("content before the first [section] header", SourceSpan(lineno, 1, len(line)))
        sections[current].append((lineno, line))
    return sections


def _parse_meta(lines: list[tuple[int, str]]) -> dict[str, str]:
    meta = {}
    for lineno, line in lines:
        if "=" not in line:
            raise ParseError("expected `key = value` in [meta]", SourceSpan(lineno, 1, len(line)))
        key, value = line.split("=", 1)
        meta[key.strip()] = value.strip()
    return meta


def _parse_scenario_statement(lineno: int, line: str) -> ScenarioStatement:
    parts = line.split(":", 2)
    if len(parts) != 3:
        raise ParseError("expected `LABEL: kind: statement.`", SourceSpan(lineno, 1, len(line)))
    label, kind, body = (p.strip() for p in parts)
    if kind not in STATEMENT_KINDS:
        raise ParseError(f"unknown statement kind {kind!r}", SourceSpan(lineno, 1, len(line)),
                         expected=STATEMENT_KINDS)
    try:
        parsed = _Parser(body)
        formula = parsed.parse_statement_body()
        parsed.take("dot")
        parsed.take("eof")
    except ParseError as exc:
        raise ParseError(exc.message, SourceSpan(lineno, exc.span.column, exc.span.length),
                         expected=exc.expected) from exc
    if kind == "conditional" and not isinstance(formula, Rule):
        raise ScenarioInvalid("conditional-statement-form", f"{label} is not a rule")
    if kind == "categorical" and isinstance(formula, Rule):
        raise ScenarioInvalid("categorical-statement-form", f"{label} is not a ground fact")
    return ScenarioStatement(label, kind, formula)


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario file; raises ScenarioInvalid naming the
    violated invariant when the content is syntactically fine but ill-formed."""
    sections = _split_sections(text)
    for required in ("meta", "statements", "fact"):
        if required not in sections:
            raise ParseError(f"missing required section [{required}]", SourceSpan(1, 1))
    meta = _parse_meta(sections["meta"])
    sid = meta.get("id", "")
    ptype = meta.get("type", "")
    if not sid:
        raise ScenarioInvalid("meta-id", "missing id")
    if ptype not in VALID_TYPES:
        raise ScenarioInvalid("meta-type", f"type must be one of {VALID_TYPES}, got {ptype!r}")

    statements = tuple(_parse_scenario_statement(lineno, line) for lineno, line in sections["statements"])
    fact_text = " ".join(line for _, line in sections["fact"])
    try:
        fact = parse_literals(fact_text)
    except ParseError as exc:
        base_line = sections["fact"][0][0] if sections["fact"] else 1
        raise ParseError(exc.message, SourceSpan(base_line, 1), expected=exc.expected) from exc

    explanation = None
    if "explanation" in sections:
        explanation = parse_base("\n".join(line for _, line in sections["explanation"]))

    scenario = Scenario(sid, ptype, statements, fact, explanation)
    _check_scenario_invariants(scenario)
    return scenario


def _check_scenario_invariants(sc: Scenario) -> None:
    try:
        sc.belief_base()
    except ValueError as exc:
        raise ScenarioInvalid("statement-wellformedness", str(exc)) from exc
    n_cond = len(sc.conditionals())
    n_cat = len(sc.categoricals())
    expected = {"I": (1, 1), "II": (2, 1), "III": (2, 1)}[sc.problem_type]
    if (n_cond, n_cat) != expected:
        raise ScenarioInvalid(
            "statement-counts",
            f"type {sc.problem_type} needs {expected[0]} conditional(s) and "
            f"{expected[1]} categorical, got {n_cond} and {n_cat}",
        )
    want_literals = 2 if sc.problem_type == "III" else 1
    if sc.problem_type == "III":
        if len(sc.fact) < want_literals:
            raise ScenarioInvalid("fact-size", "type III facts carry at least 2 literals")
    elif len(sc.fact) != want_literals:
        raise ScenarioInvalid("fact-size", f"type {sc.problem_type} facts carry exactly 1 literal")

    base = sc.belief_base()
    sig = collect_signature([base, sc.fact])
    gb = ground(base, sig)
    if is_consistent(tuple(gb.formulas) + sc.fact):
        raise ScenarioInvalid("fact-consistent-with-statements",
                              "the fact must conflict with what the statements imply")


# --- rendering ----------------------------------------------------------------

def _sorted_statements(base: BeliefBase) -> list[Statement]:
    facts = sorted(base.facts, key=Statement.canonical)
    rules = sorted(base.rules, key=Statement.canonical)
    return facts + rules


def _base_text(base: BeliefBase) -> str:
    return "\n".join(f"{st.formula}." for st in _sorted_statements(base))


def _literal_json(lit: Literal) -> dict[str, Any]:
    return {
        "predicate": lit.atom.predicate,
        "args": [t.name for t in lit.atom.args],
        "negated": lit.negated,
    }


def _base_json(base: BeliefBase) -> dict[str, Any]:
    facts = []
    rules = []
    for st in _sorted_statements(base):
        if isinstance(st.formula, Rule):
            rules.append({
                "label": st.label,
                "body": [_literal_json(l) for l in st.formula.body],
                "head": _literal_json(st.formula.head),
            })
        else:
            facts.append({"label": st.label, **_literal_json(st.formula)})
    return {"facts": facts, "rules": rules}


def _scenario_text(sc: Scenario) -> str:
    lines = ["[meta]", f"id = {sc.id}", f"type = {sc.problem_type}", "", "[statements]"]
    lines += [f"{s.label}: {s.kind}: {s.formula}." for s in sc.statements]
    lines += ["", "[fact]", " & ".join(str(l) for l in sc.fact) + "."]
    if sc.explanation is not None:
        lines += ["", "[explanation]"]
        lines += [f"{st.formula}." for st in _sorted_statements(sc.explanation)]
    return "\n".join(lines)


def _scenario_json(sc: Scenario) -> dict[str, Any]:
    return {
        "id": sc.id,
        "type": sc.problem_type,
        "statements": [
            {"label": s.label, "kind": s.kind, "formula": str(s.formula)}
            for s in sc.statements
        ],
        "fact": [_literal_json(l) for l in sc.fact],
        "explanation": None if sc.explanation is None else _base_json(sc.explanation),
    }


def _measure_json(measure: Any) -> dict[str, Any] | None:
    if measure is None:
        return None
    return {
        "numerator": measure.numerator,
        "denominator": measure.denominator,
        "value": float(round(Fraction(measure.value), 3)),
    }


def _result_json(result: "_revision.RevisionResult") -> dict[str, Any]:
    return {
        "revised": _base_json(result.revised),
        "retracted": [
            {
                "labels": [f"{origin}.{label}" for origin, label in element.sources],
                "formula": str(element.formula),
            }
            for element in result.retracted.elements
        ],
        "strategy": result.strategy,
        "seed": result.seed,
        "entails_explanandum": result.entails_explanandum,
        "postulates": dict(result.postulates) if result.postulates is not None else None,
        "change_measure": _measure_json(result.change_measure),
    }


def _result_text(result: "_revision.RevisionResult") -> str:
    lines = ["revised:"]
    body = _base_text(result.revised)
    lines += [f"  {ln}" for ln in body.splitlines()] if body else ["  (empty)"]
    lines.append("retracted:")
    if result.retracted.elements:
        for element in result.retracted.elements:
            labels = "+".join(f"{o}.{l}" for o, l in element.sources)
            lines.append(f"  - {labels}: {element.formula}")
    else:
        lines.append("  (none)")
    lines.append(f"strategy: {result.strategy}")
    if result.seed is not None:
        lines.append(f"seed: {result.seed}")
    if result.entails_explanandum is not None:
        lines.append(f"entails explanandum: {str(result.entails_explanandum).lower()}")
    if result.postulates is not None:
        held = ", ".join(f"{name}={str(ok).lower()}" for name, ok in result.postulates)
        lines.append(f"postulates: {held}")
    if result.change_measure is not None:
        m = result.change_measure
        lines.append(f"change measure: {m.numerator}/{m.denominator} = {m.decimal}")
    return "\n".join(lines)


def render(entity: Any, format: str = "canonical-text") -> str:
    """Serialize a BeliefBase, Scenario, or RevisionResult.

    `canonical-text` for bases and scenarios is re-parseable and a fixed point
    of parse-then-render; `json` follows the documented stable schema.
    """
    if format not in ("canonical-text", "json"):
        raise ValueError(f"unknown format {format!r}")
    if isinstance(entity, BeliefBase):
        return _base_text(entity) if format == "canonical-text" else json.dumps(_base_json(entity), indent=2)
    if isinstance(entity, Scenario):
        return _scenario_text(entity) if format == "canonical-text" else json.dumps(_scenario_json(entity), indent=2)
    if isinstance(entity, _revision.RevisionResult):
        return _result_text(entity) if format == "canonical-text" else json.dumps(_result_json(entity), indent=2)
    raise TypeError(f"cannot render {type(entity).__name__}")
