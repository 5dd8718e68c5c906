"""Ground-able belief bases and a classical consequence engine.

A belief base holds ground literal facts plus universally quantified rules
(conjunctive body, single-literal head, range-restricted).  Everything
downstream works on the ground version of a base: rules are expanded over the
Herbrand universe of a signature, and consistency/entailment are decided
classically on the resulting ground formulas.

Two engines are kept deliberately independent:

  * `is_consistent` / `entails` clausify the ground formulas and run a small
    complete search (unit propagation + branching);
  * `enumerate_models` evaluates the formulas semantically over every
    interpretation of the Herbrand base, and serves as the brute-force oracle
    the first engine is tested against.

All types are immutable; all operations are pure functions of their inputs.
Deterministic tie-breaking everywhere uses one canonical ordering: the
lexicographic order of the canonical serialized form (`str()` of a formula).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Iterable, Iterator, Mapping, Union

from .errors import ArityMismatch, CapExceeded, EmptyUniverse, InconsistentBase

DEFAULT_CAP = 24

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def is_variable_name(name: str) -> bool:
    """Uppercase-led identifiers are variables, lowercase-led are constants."""
    return name[0].isupper()


@dataclass(frozen=True)
class Term:
    name: str

    def __post_init__(self) -> None:
        if not _IDENT.match(self.name):
            raise ValueError(f"not an identifier: {self.name!r}")

    @property
    def is_variable(self) -> bool:
        return is_variable_name(self.name)

    @property
    def kind(self) -> str:
        return "variable" if self.is_variable else "constant"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Atom:
    """A predicate applied to zero or more terms."""

    predicate: str
    args: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        if not _IDENT.match(self.predicate):
            raise ValueError(f"not an identifier: {self.predicate!r}")

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return all(not t.is_variable for t in self.args)

    def variables(self) -> frozenset[str]:
        return frozenset(t.name for t in self.args if t.is_variable)

    def substitute(self, binding: Mapping[str, str]) -> "Atom":
        return Atom(self.predicate, tuple(Term(binding.get(t.name, t.name)) for t in self.args))

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({', '.join(t.name for t in self.args)})"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    @property
    def is_ground(self) -> bool:
        return self.atom.is_ground

    def variables(self) -> frozenset[str]:
        return self.atom.variables()

    def negate(self) -> "Literal":
        return Literal(self.atom, not self.negated)

    def substitute(self, binding: Mapping[str, str]) -> "Literal":
        return Literal(self.atom.substitute(binding), self.negated)

    def __str__(self) -> str:
        return ("!" if self.negated else "") + str(self.atom)


@dataclass(frozen=True)
class Rule:
    """Conditional with a conjunctive body and a single-literal head.

    Variables are implicitly universally quantified.  Every head variable must
    also occur in the body (range restriction), so grounding semantics do not
    depend on constants that the rule itself never constrains.
    """

    body: tuple[Literal, ...]
    head: Literal

    def __post_init__(self) -> None:
        if not self.body:
            raise ValueError("rule body must be nonempty")
        body_vars = frozenset().union(*(lit.variables() for lit in self.body))
        loose = self.head.variables() - body_vars
        if loose:
            raise ValueError(f"head variables not bound by the body: {sorted(loose)}")

    def variables(self) -> frozenset[str]:
        return frozenset().union(self.head.variables(), *(lit.variables() for lit in self.body))

    def substitute(self, binding: Mapping[str, str]) -> "Rule":
        return Rule(tuple(lit.substitute(binding) for lit in self.body), self.head.substitute(binding))

    def __str__(self) -> str:
        return " & ".join(str(lit) for lit in self.body) + " -> " + str(self.head)


Formula = Union[Literal, Rule]


@dataclass(frozen=True)
class GroundRuleInstance:
    """A rule instantiated over constants; body and head are ground."""

    body: tuple[Literal, ...]
    head: Literal

    def __str__(self) -> str:
        return " & ".join(str(lit) for lit in self.body) + " -> " + str(self.head)


GroundFormula = Union[Literal, GroundRuleInstance]


@dataclass(frozen=True)
class Statement:
    """A labeled belief-base element; labels make retractions reportable."""

    label: str
    formula: Formula

    @property
    def is_rule(self) -> bool:
        return isinstance(self.formula, Rule)

    def canonical(self) -> str:
        return str(self.formula)

    def __str__(self) -> str:
        return f"{self.label}: {self.formula}"


class BeliefBase:
    """An unordered set of labeled facts (ground literals) and rules.

    Equality and hashing are by the canonical formula set: labels are
    reporting plumbing, not part of a base's identity.
    """

    __slots__ = ("statements", "_canon")

    def __init__(self, statements: Iterable[Statement] = ()):
        stmts = tuple(statements)
        seen_labels: set[str] = set()
        seen_forms: set[str] = set()
        for st in stmts:
            if isinstance(st.formula, Literal) and not st.formula.is_ground:
                raise ValueError(f"fact is not ground: {st.formula}")
            if st.label in seen_labels:
                raise ValueError(f"duplicate statement label: {st.label}")
            canon = st.canonical()
            if canon in seen_forms:
                raise ValueError(f"duplicate formula: {canon}")
            seen_labels.add(st.label)
            seen_forms.add(canon)
        self.statements = stmts
        self._canon = frozenset(seen_forms)

    @classmethod
    def from_formulas(cls, formulas: Iterable[Formula]) -> "BeliefBase":
        """Label facts f1, f2, ... and rules r1, r2, ... in input order."""
        stmts = []
        nf = nr = 0
        for formula in formulas:
            if isinstance(formula, Rule):
                nr += 1
                stmts.append(Statement(f"r{nr}", formula))
            else:
                nf += 1
                stmts.append(Statement(f"f{nf}", formula))
        return cls(stmts)

    @property
    def facts(self) -> tuple[Statement, ...]:
        return tuple(st for st in self.statements if not st.is_rule)

    @property
    def rules(self) -> tuple[Statement, ...]:
        return tuple(st for st in self.statements if st.is_rule)

    @property
    def formulas(self) -> tuple[Formula, ...]:
        return tuple(st.formula for st in self.statements)

    def canonical_forms(self) -> frozenset[str]:
        return self._canon

    def __contains__(self, formula: Formula) -> bool:
        return str(formula) in self._canon

    def __len__(self) -> int:
        return len(self.statements)

    def __iter__(self) -> Iterator[Statement]:
        return iter(self.statements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BeliefBase):
            return NotImplemented
        return self._canon == other._canon

    def __hash__(self) -> int:
        return hash(self._canon)

    def __repr__(self) -> str:
        return f"BeliefBase({sorted(self._canon)})"


@dataclass(frozen=True)
class Signature:
    """Constants plus predicates-with-arities; the Herbrand bookkeeping."""

    constants: tuple[str, ...] = ()
    predicates: tuple[tuple[str, int], ...] = ()

    def arity_of(self, predicate: str) -> int | None:
        for name, arity in self.predicates:
            if name == predicate:
                return arity
        return None

    def merge(self, other: "Signature") -> "Signature":
        return collect_signature([self, other])

    def herbrand_atoms(self) -> tuple[Atom, ...]:
        atoms = []
        for name, arity in self.predicates:
            for combo in product(self.constants, repeat=arity):
                atoms.append(Atom(name, tuple(Term(c) for c in combo)))
        return tuple(sorted(atoms, key=str))


def _scan(part: Any, constants: set[str], predicates: dict[str, int]) -> None:
    if isinstance(part, Signature):
        constants.update(part.constants)
        for name, arity in part.predicates:
            _note_predicate(predicates, name, arity)
    elif isinstance(part, BeliefBase):
        for st in part.statements:
            _scan(st.formula, constants, predicates)
    elif isinstance(part, Statement):
        _scan(part.formula, constants, predicates)
    elif isinstance(part, (Rule, GroundRuleInstance)):
        for lit in part.body:
            _scan(lit, constants, predicates)
        _scan(part.head, constants, predicates)
    elif isinstance(part, Literal):
        _note_predicate(predicates, part.atom.predicate, part.atom.arity)
        for term in part.atom.args:
            if not term.is_variable:
                constants.add(term.name)
    elif isinstance(part, Atom):
        _scan(Literal(part), constants, predicates)
    else:
        for item in part:
            _scan(item, constants, predicates)


def _note_predicate(predicates: dict[str, int], name: str, arity: int) -> None:
    known = predicates.get(name)
    if known is None:
        predicates[name] = arity
    elif known != arity:
        raise ArityMismatch(name, known, arity)


def collect_signature(parts: Iterable[Any]) -> Signature:
    """Union of all constants and predicates occurring anywhere in the inputs.

    Accepts belief bases, statements, formulas, and nested iterables of them.
    Raises ArityMismatch if one predicate name is used with two arities.
    """
    constants: set[str] = set()
    predicates: dict[str, int] = {}
    for part in parts:
        _scan(part, constants, predicates)
    return Signature(tuple(sorted(constants)), tuple(sorted(predicates.items())))


def ground_formula(formula: Formula, sig: Signature) -> tuple[GroundFormula, ...]:
    """All ground instances of one formula over the signature's constants."""
    if isinstance(formula, Literal):
        return (formula,)
    variables = sorted(formula.variables())
    if not variables:
        return (GroundRuleInstance(formula.body, formula.head),)
    if not sig.constants:
        raise EmptyUniverse(f"rule {formula} has variables but the universe is empty")
    instances = []
    for combo in product(sig.constants, repeat=len(variables)):
        binding = dict(zip(variables, combo))
        inst = formula.substitute(binding)
        instances.append(GroundRuleInstance(inst.body, inst.head))
    return tuple(instances)


@dataclass(frozen=True, eq=False)
class GroundBeliefBase:
    """Ground formulas of a base plus the map back to their source elements."""

    formulas: tuple[GroundFormula, ...]
    origin: Mapping[GroundFormula, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.formulas)

    def __iter__(self) -> Iterator[GroundFormula]:
        return iter(self.formulas)


def ground(base: BeliefBase, sig: Signature) -> GroundBeliefBase:
    """Expand every rule over the Herbrand universe; facts are copied verbatim.

    Duplicate ground formulas are kept once, attributed to the first source
    statement that produces them.
    """
    formulas: list[GroundFormula] = []
    origin: dict[GroundFormula, Statement] = {}
    seen: set[str] = set()
    for st in base.statements:
        for gf in ground_formula(st.formula, sig):
            canon = str(gf)
            if canon in seen:
                continue
            seen.add(canon)
            formulas.append(gf)
            origin[gf] = st
    return GroundBeliefBase(tuple(formulas), origin)


# --- clausification + complete search -------------------------------------

def _clausify(formulas: Iterable[GroundFormula], index: Mapping[Atom, int]) -> list[list[int]]:
    clauses = []
    for gf in formulas:
        if isinstance(gf, Literal):
            v = index[gf.atom] + 1
            clauses.append([-v if gf.negated else v])
        else:
            clause = []
            for lit in gf.body:
                v = index[lit.atom] + 1
                clause.append(v if lit.negated else -v)
            v = index[gf.head.atom] + 1
            clause.append(-v if gf.head.negated else v)
            lits = set(clause)
            if any(-l in lits for l in lits):
                continue  # tautological instance
            clauses.append(sorted(lits))
    return clauses


def _satisfiable(clauses: list[list[int]]) -> bool:
    # Unit propagation to fixpoint, then branch on the first unassigned atom.
    while True:
        unit = next((c[0] for c in clauses if len(c) == 1), None)
        if unit is None:
            break
        reduced = []
        for clause in clauses:
            if unit in clause:
                continue
            if -unit in clause:
                rest = [l for l in clause if l != -unit]
                if not rest:
                    return False
                reduced.append(rest)
            else:
                reduced.append(clause)
        clauses = reduced
    if not clauses:
        return True
    var = abs(clauses[0][0])
    return _satisfiable(clauses + [[var]]) or _satisfiable(clauses + [[-var]])


def _atom_index(groups: Iterable[Iterable[GroundFormula]]) -> dict[Atom, int]:
    atoms: set[Atom] = set()
    for group in groups:
        for gf in group:
            if isinstance(gf, Literal):
                atoms.add(gf.atom)
            else:
                atoms.update(lit.atom for lit in gf.body)
                atoms.add(gf.head.atom)
    return {atom: i for i, atom in enumerate(sorted(atoms, key=str))}


def is_consistent(formulas: Iterable[GroundFormula]) -> bool:
    """True iff at least one interpretation satisfies every ground formula."""
    fs = tuple(formulas)
    index = _atom_index([fs])
    return _satisfiable(_clausify(fs, index))


def _as_literals(phi: Union[Literal, Iterable[Literal]]) -> tuple[Literal, ...]:
    lits = (phi,) if isinstance(phi, Literal) else tuple(phi)
    if not lits:
        raise ValueError("explanandum conjunction must be nonempty")
    for lit in lits:
        if not lit.is_ground:
            raise ValueError(f"explanandum literal is not ground: {lit}")
    return lits


def entails(formulas: Iterable[GroundFormula], phi: Union[Literal, Iterable[Literal]]) -> bool:
    """Classical entailment of a conjunction of ground literals.

    Decided by refutation: the negation of the conjunction is one clause, and
    the query holds iff formulas plus that clause are unsatisfiable.  An
    inconsistent premise set entails everything.
    """
    lits = _as_literals(phi)
    fs = tuple(formulas)
    index = _atom_index([fs, lits])
    clauses = _clausify(fs, index)
    negated = sorted({(index[l.atom] + 1) * (1 if l.negated else -1) for l in lits})
    if not any(-l in negated for l in negated):
        # otherwise phi contains a literal and its complement: its negation is
        # a tautology, so the query reduces to plain unsatisfiability
        clauses.append(negated)
    return not _satisfiable(clauses)


def consequences(base: BeliefBase, sig: Signature) -> frozenset[Literal]:
    """Every ground literal over the signature's Herbrand base that the base entails.

    Undefined (raises InconsistentBase) when the ground base has no model; a
    consistent base never yields both a literal and its negation.
    """
    gb = ground(base, sig)
    if not is_consistent(gb.formulas):
        raise InconsistentBase("consequences undefined: base has no model")
    out = []
    for atom in sig.herbrand_atoms():
        pos = Literal(atom)
        if entails(gb.formulas, pos):
            out.append(pos)
        else:
            neg = Literal(atom, True)
            if entails(gb.formulas, neg):
                out.append(neg)
    return frozenset(out)


# --- independent truth-table oracle ----------------------------------------

@dataclass(frozen=True)
class Interpretation:
    """A total truth assignment over a fixed, canonically ordered Herbrand base."""

    atoms: tuple[Atom, ...]
    values: tuple[bool, ...]

    def as_dict(self) -> dict[Atom, bool]:
        return dict(zip(self.atoms, self.values))

    def value_of(self, atom: Atom) -> bool:
        return self.values[self.atoms.index(atom)]

    def satisfies(self, gf: GroundFormula) -> bool:
        lookup = self.as_dict()
        return _evaluate(gf, lookup)


def _evaluate(gf: GroundFormula, lookup: Mapping[Atom, bool]) -> bool:
    if isinstance(gf, Literal):
        return lookup[gf.atom] != gf.negated
    if all(lookup[lit.atom] != lit.negated for lit in gf.body):
        return lookup[gf.head.atom] != gf.head.negated
    return True


def enumerate_models(
    formulas: Iterable[GroundFormula],
    sig: Signature,
    cap: int = DEFAULT_CAP,
) -> list[Interpretation]:
    """All satisfying interpretations of the Herbrand base, in canonical order.

    This is a naive truth-table sweep, kept free of the clausal machinery so
    it can serve as an independent oracle for is_consistent and entails.
    """
    atoms = sig.herbrand_atoms()
    if len(atoms) > cap:
        raise CapExceeded(len(atoms), cap, "Herbrand atoms")
    fs = tuple(formulas)
    known = set(atoms)
    for gf in fs:
        for atom in ([gf.atom] if isinstance(gf, Literal) else [l.atom for l in gf.body] + [gf.head.atom]):
            if atom not in known:
                raise ValueError(f"signature does not cover atom {atom}")
    models = []
    for values in product((False, True), repeat=len(atoms)):
        lookup = dict(zip(atoms, values))
        if all(_evaluate(gf, lookup) for gf in fs):
            models.append(Interpretation(atoms, values))
    return models
