"""Explanation-guided belief revision.

The operator unions the prior base with an explanation for the explanandum,
then retracts one correction set: a subset of the union whose removal leaves a
consistent, nonempty remainder that still entails the explanandum.  Selection
among admissible correction sets is a pluggable strategy; nothing forces the
choice to be minimal.

Enumeration order is by cardinality and then lexicographic on canonical
serialized forms, so cardinality-minimal strategies can stop at the first
admissible set and equal inputs always yield equal streams.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from itertools import combinations
from typing import TYPE_CHECKING, Callable, Iterable, Iterator, Sequence

from .errors import CapExceeded, InvalidExplanation, NoCandidates
from .logic import (
    DEFAULT_CAP,
    BeliefBase,
    Formula,
    GroundBeliefBase,
    GroundFormula,
    Literal,
    Signature,
    Statement,
    collect_signature,
    entails,
    ground,
    ground_formula,
    is_consistent,
)

if TYPE_CHECKING:
    from .metrics import ChangeMeasure


@dataclass(frozen=True)
class Explanandum:
    """A nonempty conjunction of ground literals: the fact to be explained."""

    literals: tuple[Literal, ...]

    def __post_init__(self) -> None:
        if not self.literals:
            raise ValueError("explanandum must be nonempty")
        seen = set()
        for lit in self.literals:
            if not lit.is_ground:
                raise ValueError(f"explanandum literal is not ground: {lit}")
            if str(lit) in seen:
                raise ValueError(f"repeated literal: {lit}")
            seen.add(str(lit))
        for lit in self.literals:
            if str(lit.negate()) in seen:
                raise ValueError(f"explanandum contains {lit} and its negation")

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __str__(self) -> str:
        return " & ".join(str(lit) for lit in self.literals)


@dataclass(frozen=True)
class ExplanationReport:
    """Outcome of the three explanation-validity conditions: the explanation
    must entail the explanandum, be consistent, and contain nothing spare."""

    entails_explanandum: bool
    consistent: bool
    minimal: bool
    failing_subsets: tuple[tuple[str, ...], ...] = ()

    @property
    def valid(self) -> bool:
        return self.entails_explanandum and self.consistent and self.minimal

    def summary(self) -> str:
        problems = []
        if not self.entails_explanandum:
            problems.append("does not entail the explanandum")
        if not self.consistent:
            problems.append("is inconsistent")
        if not self.minimal:
            witness = "; ".join("{" + ", ".join(sub) + "}" for sub in self.failing_subsets)
            problems.append(f"is not minimal (sufficient proper subsets: {witness})")
        return "valid" if not problems else ", ".join(problems)


def validate_explanation(
    explanation: BeliefBase,
    phi: Explanandum,
    sig: Signature | None = None,
    exhaustive: bool = False,
) -> ExplanationReport:
    """Evaluate the three validity conditions on the ground explanation.

    Minimality is decided by single-element removals, which is equivalent to
    quantifying over all proper subsets by monotonicity of classical
    entailment; `exhaustive=True` runs the all-subsets check instead (used to
    cross-verify the equivalence).
    """
    if sig is None:
        sig = collect_signature([explanation, phi.literals])
    ge = ground(explanation, sig).formulas
    entails_phi = entails(ge, phi.literals)
    consistent = is_consistent(ge)

    witnesses: list[tuple[str, ...]] = []
    statements = explanation.statements
    if exhaustive:
        subsets: Iterable[tuple[Statement, ...]] = (
            subset
            for size in range(len(statements))
            for subset in combinations(statements, size)
        )
    else:
        subsets = (
            tuple(st for st in statements if st is not removed)
            for removed in statements
        )
    for subset in subsets:
        sub_formulas = [gf for st in subset for gf in ground_formula(st.formula, sig)]
        if entails(sub_formulas, phi.literals):
            witnesses.append(tuple(sorted(st.canonical() for st in subset)))
    return ExplanationReport(entails_phi, consistent, not witnesses, tuple(witnesses))


@dataclass(frozen=True)
class UnionElement:
    """One formula of the union, with every (origin, label) that asserts it."""

    formula: Formula
    sources: tuple[tuple[str, str], ...]

    def canonical(self) -> str:
        return str(self.formula)

    @property
    def from_explanation(self) -> bool:
        return any(origin == "E" for origin, _ in self.sources)

    def __str__(self) -> str:
        return str(self.formula)


def union_elements(base: BeliefBase, explanation: BeliefBase) -> tuple[UnionElement, ...]:
    """The set union of two bases, deduplicated by canonical form and sorted
    canonically; shared formulas carry both provenances."""
    merged: dict[str, list[tuple[str, str]]] = {}
    formulas: dict[str, Formula] = {}
    for origin, b in (("B", base), ("E", explanation)):
        for st in b.statements:
            canon = st.canonical()
            formulas.setdefault(canon, st.formula)
            merged.setdefault(canon, []).append((origin, st.label))
    return tuple(
        UnionElement(formulas[canon], tuple(merged[canon]))
        for canon in sorted(merged)
    )


@dataclass(frozen=True)
class CorrectionSet:
    """A subset of the union whose removal restores consistency."""

    elements: tuple[UnionElement, ...]
    preserves_explanandum: bool | None = None

    def canonical_forms(self) -> frozenset[str]:
        return frozenset(el.canonical() for el in self.elements)

    def sort_key(self) -> tuple[int, tuple[str, ...]]:
        return (len(self.elements), tuple(el.canonical() for el in self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[UnionElement]:
        return iter(self.elements)

    def __str__(self) -> str:
        return "{" + ", ".join(el.canonical() for el in self.elements) + "}"


EMPTY_CORRECTION = CorrectionSet(())


class _UnionContext:
    """Grounds a union once and memoizes subset consistency/entailment checks."""

    def __init__(self, base: BeliefBase, explanation: BeliefBase,
                 phi: Explanandum | None, cap: int):
        parts: list[object] = [base, explanation]
        if phi is not None:
            parts.append(phi.literals)
        self.sig = collect_signature(parts)
        self.elements = union_elements(base, explanation)
        self.ground_of: dict[int, tuple[GroundFormula, ...]] = {
            i: ground_formula(el.formula, self.sig) for i, el in enumerate(self.elements)
        }
        total = sum(len(g) for g in self.ground_of.values())
        if total > cap:
            raise CapExceeded(total, cap, "ground formulas")
        self._consistency: dict[frozenset[int], bool] = {}
        self._entailment: dict[frozenset[int], bool] = {}
        self.phi = phi

    def ground_base(self) -> GroundBeliefBase:
        formulas: list[GroundFormula] = []
        origin: dict[GroundFormula, UnionElement] = {}
        seen: set[str] = set()
        for i, el in enumerate(self.elements):
            for gf in self.ground_of[i]:
                if str(gf) in seen:
                    continue
                seen.add(str(gf))
                formulas.append(gf)
                origin[gf] = el
        return GroundBeliefBase(tuple(formulas), origin)

    def _formulas(self, indices: frozenset[int]) -> list[GroundFormula]:
        return [gf for i in sorted(indices) for gf in self.ground_of[i]]

    def consistent(self, indices: frozenset[int]) -> bool:
        cached = self._consistency.get(indices)
        if cached is None:
            cached = is_consistent(self._formulas(indices))
            self._consistency[indices] = cached
        return cached

    def entails_phi(self, indices: frozenset[int]) -> bool:
        assert self.phi is not None
        cached = self._entailment.get(indices)
        if cached is None:
            cached = entails(self._formulas(indices), self.phi.literals)
            self._entailment[indices] = cached
        return cached

    def kernel_indices(self) -> Iterator[frozenset[int]]:
        """Nonempty-remainder subsets whose removal restores consistency, by
        cardinality then lexicographic on canonical forms.  Empty when the
        union is already consistent."""
        n = len(self.elements)
        everything = frozenset(range(n))
        if self.consistent(everything):
            return
        for size in range(1, n):
            for combo in combinations(range(n), size):
                remainder = everything - frozenset(combo)
                if self.consistent(remainder):
                    yield frozenset(combo)

    def correction_set(self, indices: frozenset[int],
                       preserves: bool | None = None) -> CorrectionSet:
        return CorrectionSet(tuple(self.elements[i] for i in sorted(indices)), preserves)


def correction_kernel(base: BeliefBase, explanation: BeliefBase,
                      cap: int = DEFAULT_CAP) -> Iterator[CorrectionSet]:
    """Stream every correction set of the union, in canonical order.

    A consistent union yields an empty stream: there is nothing to correct and
    the selection upstream degenerates to the empty retraction.
    """
    ctx = _UnionContext(base, explanation, None, cap)
    for indices in ctx.kernel_indices():
        yield ctx.correction_set(indices)


def admissible_selections(base: BeliefBase, explanation: BeliefBase,
                          phi: Explanandum, cap: int = DEFAULT_CAP) -> Iterator[CorrectionSet]:
    """The correction sets whose removal keeps the explanandum entailed.

    Never empty for an inconsistent union and a valid explanation: removing
    everything asserted only by the prior base leaves the explanation itself,
    which is consistent and entails the explanandum.
    """
    ctx = _UnionContext(base, explanation, phi, cap)
    everything = frozenset(range(len(ctx.elements)))
    for indices in ctx.kernel_indices():
        if ctx.entails_phi(everything - indices):
            yield ctx.correction_set(indices, preserves=True)


MIN_CARDINALITY = "min-cardinality"
MAX_CARDINALITY = "max-cardinality"
PROTECT_EXPLANATION = "protect-explanation"
WEIGHTED = "weighted"
SEEDED_RANDOM = "seeded-random"
INTERACTIVE = "interactive"

STRATEGY_KINDS = (
    MIN_CARDINALITY,
    MAX_CARDINALITY,
    PROTECT_EXPLANATION,
    WEIGHTED,
    SEEDED_RANDOM,
    INTERACTIVE,
)

# Strategies that are pure functions of the canonical candidate list (plus
# their own parameters).  protect-explanation keys on the explanation's
# identity and interactive on a live chooser, so neither qualifies for
# checks that need a well-defined selection function of the kernel.
CANDIDATE_PURE_KINDS = frozenset({MIN_CARDINALITY, MAX_CARDINALITY, WEIGHTED, SEEDED_RANDOM})


@dataclass(frozen=True)
class SelectionStrategy:
    kind: str
    seed: int | None = None
    weights: tuple[tuple[str, float], ...] | None = None
    chooser: Callable[[Sequence[CorrectionSet]], int] | None = None

    def __post_init__(self) -> None:
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.kind == INTERACTIVE and self.chooser is None:
            raise ValueError("interactive strategy needs a chooser callback")
        if self.kind == SEEDED_RANDOM and self.seed is None:
            object.__setattr__(self, "seed", 0)
        if self.weights is not None and not isinstance(self.weights, tuple):
            object.__setattr__(self, "weights", tuple(sorted(dict(self.weights).items())))

    @classmethod
    def named(cls, kind: str, seed: int | None = None,
              weights: dict[str, float] | None = None) -> "SelectionStrategy":
        prepared = tuple(sorted(weights.items())) if weights else None
        return cls(kind, seed=seed, weights=prepared)

    def weight_of(self, canonical: str) -> float:
        if self.weights:
            for name, w in self.weights:
                if name == canonical:
                    return w
        return 1.0


def select(candidates: Sequence[CorrectionSet], strategy: SelectionStrategy) -> CorrectionSet:
    """Pick one correction set; ties always break by canonical order."""
    pool = list(candidates)
    if not pool:
        raise NoCandidates("no admissible correction sets to select from")
    if strategy.kind == MIN_CARDINALITY:
        return min(pool, key=CorrectionSet.sort_key)
    if strategy.kind == MAX_CARDINALITY:
        return min(pool, key=lambda cs: (-len(cs), cs.sort_key()[1]))
    if strategy.kind == PROTECT_EXPLANATION:
        shielded = [cs for cs in pool if not any(el.from_explanation for el in cs)]
        return min(shielded or pool, key=CorrectionSet.sort_key)
    if strategy.kind == WEIGHTED:
        return min(pool, key=lambda cs: (sum(strategy.weight_of(el.canonical()) for el in cs),
                                         cs.sort_key()))
    if strategy.kind == SEEDED_RANDOM:
        rng = random.Random(strategy.seed)
        return pool[rng.randrange(len(pool))]
    index = strategy.chooser(pool)
    if not 0 <= index < len(pool):
        raise NoCandidates(f"chooser returned out-of-range index {index}")
    return pool[index]


@dataclass(frozen=True)
class RevisionResult:
    """A revised base plus everything needed to audit how it was produced."""

    revised: BeliefBase
    retracted: CorrectionSet
    union_before: GroundBeliefBase
    strategy: str
    seed: int | None = None
    explanandum: Explanandum | None = None
    entails_explanandum: bool | None = None
    postulates: tuple[tuple[str, bool], ...] | None = None
    change_measure: "ChangeMeasure | None" = None

    def annotated(self, postulates: tuple[tuple[str, bool], ...] | None = None,
                  change_measure: "ChangeMeasure | None" = None) -> "RevisionResult":
        out = self
        if postulates is not None:
            out = replace(out, postulates=postulates)
        if change_measure is not None:
            out = replace(out, change_measure=change_measure)
        return out


def _merge_labels(elements: Sequence[UnionElement]) -> BeliefBase:
    taken: set[str] = set()
    statements = []
    for el in elements:
        b_labels = [label for origin, label in el.sources if origin == "B"]
        label = b_labels[0] if b_labels else el.sources[0][1]
        if label in taken:
            origin = el.sources[0][0]
            candidate = f"{origin.lower()}_{label}"
            bump = 2
            while candidate in taken:
                candidate = f"{origin.lower()}_{label}_{bump}"
                bump += 1
            label = candidate
        taken.add(label)
        statements.append(Statement(label, el.formula))
    return BeliefBase(statements)


def base_from_elements(elements: Sequence[UnionElement]) -> BeliefBase:
    """Rebuild a labeled base from union elements, preferring prior-base labels."""
    return _merge_labels(elements)


def revise(base: BeliefBase, explanation: BeliefBase, phi: Explanandum,
           strategy: SelectionStrategy, cap: int = DEFAULT_CAP) -> RevisionResult:
    """Union the base with the explanation, then retract a selected admissible
    correction set.  A consistent union is returned unchanged (vacuity).

    Raises InvalidExplanation (with the report attached) when the explanation
    fails validation, and CapExceeded when the ground union is too large.
    """
    report = validate_explanation(explanation, phi)
    if not report.valid:
        raise InvalidExplanation(report)

    ctx = _UnionContext(base, explanation, phi, cap)
    union_before = ctx.ground_base()
    everything = frozenset(range(len(ctx.elements)))

    if ctx.consistent(everything):
        revised = base_from_elements(ctx.elements)
        return RevisionResult(revised, EMPTY_CORRECTION, union_before,
                              strategy.kind, strategy.seed, phi, True)

    if strategy.kind == MIN_CARDINALITY:
        # The stream is ordered by cardinality then canonical form, so the
        # first admissible set is the selection.
        selected = next(
            (ctx.correction_set(indices, preserves=True)
             for indices in ctx.kernel_indices()
             if ctx.entails_phi(everything - indices)),
            None,
        )
        if selected is None:
            raise NoCandidates("no admissible correction sets")
    else:
        candidates = [
            ctx.correction_set(indices, preserves=True)
            for indices in ctx.kernel_indices()
            if ctx.entails_phi(everything - indices)
        ]
        selected = select(candidates, strategy)

    removed = selected.canonical_forms()
    kept = [el for el in ctx.elements if el.canonical() not in removed]
    revised = base_from_elements(kept)
    return RevisionResult(revised, selected, union_before,
                          strategy.kind, strategy.seed, phi, True)
