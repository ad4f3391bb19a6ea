"""Exhaustive relation enumeration and the categorical law suites.

This is the ground truth for the rest of the package: every equation the
engine relies on is checked over every relation between small objects, not
over samples.  Counterexamples are minimal in enumeration order, and a run
with a given budget always produces the identical report list.

Quantification families are chosen per law so suites stay fast while each
law still sees every relation shape it can:

- laws quantified over three or more relation variables run over boundaries
  with at most one factor each;
- the interchange law additionally restricts boundary choices to the unit
  and the largest atom (the size-1 atom adds nothing a unit does not);
- laws with a single relation variable run over the full word family the
  budget allows;
- purely structural laws (no relation variables) run over all word pairs.

Instance counts land in the reports, so coverage is visible in the output.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from . import relcore
from .errors import BudgetExceeded
from .relcore import UNIT, Atom, FinObject, Task


@dataclass(frozen=True)
class EnumerationBudget:
    """Size limits for exhaustive enumeration.

    max_relations caps how many relations a single hom-set enumeration may
    yield (2^(|X|*|Y|) must stay at or below it); exceeding it raises
    BudgetExceeded rather than truncating.
    """

    max_atom_size: int = 2
    max_factors: int = 2
    max_relations: int = 1 << 16

    def __post_init__(self):
        if min(self.max_atom_size, self.max_factors, self.max_relations) < 1:
            raise ValueError("budget fields must be positive")


DEFAULT_BUDGET = EnumerationBudget()


@dataclass(frozen=True)
class Counterexample:
    inputs: tuple[str, ...]
    lhs: str
    rhs: str


@dataclass(frozen=True)
class LawReport:
    law: str
    instances: int
    counterexample: Optional[Counterexample] = None

    @property
    def holds(self) -> bool:
        return self.counterexample is None


def render_task(t: Task) -> str:
    return f"{t.dom.format()} -> {t.cod.format()} = {t.format()}"


def report_to_json(r: LawReport) -> dict:
    ce = None
    if r.counterexample is not None:
        ce = {
            "inputs": list(r.counterexample.inputs),
            "lhs": r.counterexample.lhs,
            "rhs": r.counterexample.rhs,
        }
    return {
        "law": r.law,
        "instances": r.instances,
        "holds": r.holds,
        "counterexample": ce,
    }


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def enumerate_relations(
    dom: FinObject, cod: FinObject, budget: EnumerationBudget = DEFAULT_BUDGET
) -> Iterator[Task]:
    """All 2^(|dom|*|cod|) relations, in ascending bitmask order.

    Bit i of the mask controls the i-th slot of the (dom element, cod
    element) grid, dom index major.
    """
    slots = [(x, y) for x in dom.elements for y in cod.elements]
    total = 1 << len(slots)
    if total > budget.max_relations:
        raise BudgetExceeded(
            f"hom-set {dom.format()} -> {cod.format()} has {total} relations, "
            f"budget allows {budget.max_relations}"
        )
    for mask in range(total):
        pairs = frozenset(s for i, s in enumerate(slots) if mask >> i & 1)
        yield Task(dom, cod, pairs)


def enumerate_attributes(
    carrier: FinObject, budget: EnumerationBudget = DEFAULT_BUDGET
) -> Iterator[relcore.Attribute]:
    """All 2^|carrier| attributes, in ascending bitmask order."""
    elems = carrier.elements
    total = 1 << len(elems)
    if total > budget.max_relations:
        raise BudgetExceeded(
            f"{carrier.format()} has {total} attributes, "
            f"budget allows {budget.max_relations}"
        )
    for mask in range(total):
        members = frozenset(e for i, e in enumerate(elems) if mask >> i & 1)
        yield relcore.Attribute(carrier, members)


def sample_relations(
    dom: FinObject, cod: FinObject, count: int, rng: random.Random
) -> Iterator[Task]:
    """Random relations for hom-sets too large to enumerate."""
    slots = [(x, y) for x in dom.elements for y in cod.elements]
    for _ in range(count):
        pairs = frozenset(s for s in slots if rng.random() < 0.5)
        yield Task(dom, cod, pairs)


def standard_atoms(budget: EnumerationBudget = DEFAULT_BUDGET) -> list[Atom]:
    """One atom per size from 1 to the budget's max, deterministically named."""
    letters = "uvwxyz"
    atoms = []
    for size in range(1, budget.max_atom_size + 1):
        name = letters[size - 1] if size <= len(letters) else f"a{size}"
        atoms.append(Atom(name, tuple(f"{name}{i}" for i in range(size))))
    return atoms


def word_objects(atoms: list[Atom], max_factors: int) -> list[FinObject]:
    """All words over the atoms up to the factor bound, shortest first."""
    words = []
    for n in range(max_factors + 1):
        for combo in itertools.product(atoms, repeat=n):
            words.append(FinObject(combo))
    return words


# ---------------------------------------------------------------------------
# Law machinery
# ---------------------------------------------------------------------------


def _run_law(name: str, instances) -> LawReport:
    count = 0
    for inputs, lhs, rhs in instances:
        count += 1
        if lhs != rhs:
            rendered = tuple(
                render_task(i) if isinstance(i, Task) else str(i) for i in inputs
            )
            return LawReport(name, count, Counterexample(rendered, render_task(lhs), render_task(rhs)))
    return LawReport(name, count)


class _HomCache:
    """Materialized hom-sets, so nested relation loops do not re-enumerate."""

    def __init__(self, budget: EnumerationBudget):
        self.budget = budget
        self._cache: dict = {}

    def rels(self, dom: FinObject, cod: FinObject) -> list[Task]:
        key = (dom, cod)
        if key not in self._cache:
            self._cache[key] = list(enumerate_relations(dom, cod, self.budget))
        return self._cache[key]


def _families(budget: EnumerationBudget):
    atoms = standard_atoms(budget)
    words = word_objects(atoms, budget.max_factors)
    atomic = [w for w in words if len(w.factors) <= 1]
    pairish = [UNIT, FinObject((atoms[-1],))]
    return words, atomic, pairish


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def verify_smc_laws(budget: EnumerationBudget = DEFAULT_BUDGET) -> list[LawReport]:
    words, atomic, pairish = _families(budget)
    cache = _HomCache(budget)

    def seq_assoc():
        for x, y, z, w in itertools.product(atomic, repeat=4):
            for a in cache.rels(x, y):
                for b in cache.rels(y, z):
                    for c in cache.rels(z, w):
                        lhs = relcore.seq_compose(relcore.seq_compose(a, b), c)
                        rhs = relcore.seq_compose(a, relcore.seq_compose(b, c))
                        yield (a, b, c), lhs, rhs

    def seq_unit_left():
        for x, y in itertools.product(words, repeat=2):
            for a in enumerate_relations(x, y, budget):
                yield (a,), relcore.seq_compose(relcore.identity(x), a), a

    def seq_unit_right():
        for x, y in itertools.product(words, repeat=2):
            for a in enumerate_relations(x, y, budget):
                yield (a,), relcore.seq_compose(a, relcore.identity(y)), a

    def par_assoc():
        for bounds in itertools.product(atomic, repeat=6):
            x1, y1, x2, y2, x3, y3 = bounds
            for a in cache.rels(x1, y1):
                for b in cache.rels(x2, y2):
                    for c in cache.rels(x3, y3):
                        lhs = relcore.par_compose(relcore.par_compose(a, b), c)
                        rhs = relcore.par_compose(a, relcore.par_compose(b, c))
                        yield (a, b, c), lhs, rhs

    def par_unit_left():
        unit_id = relcore.identity(UNIT)
        for x, y in itertools.product(words, repeat=2):
            for a in enumerate_relations(x, y, budget):
                yield (a,), relcore.par_compose(unit_id, a), a

    def par_unit_right():
        unit_id = relcore.identity(UNIT)
        for x, y in itertools.product(words, repeat=2):
            for a in enumerate_relations(x, y, budget):
                yield (a,), relcore.par_compose(a, unit_id), a

    def interchange():
        for bounds in itertools.product(pairish, repeat=6):
            x1, y1, z1, x2, y2, z2 = bounds
            for a in cache.rels(x1, y1):
                for c in cache.rels(y1, z1):
                    for b in cache.rels(x2, y2):
                        for d in cache.rels(y2, z2):
                            lhs = relcore.seq_compose(
                                relcore.par_compose(a, b), relcore.par_compose(c, d)
                            )
                            rhs = relcore.par_compose(
                                relcore.seq_compose(a, c), relcore.seq_compose(b, d)
                            )
                            yield (a, b, c, d), lhs, rhs

    def swap_naturality():
        for x1, y1, x2, y2 in itertools.product(atomic, repeat=4):
            for a in cache.rels(x1, y1):
                for b in cache.rels(x2, y2):
                    lhs = relcore.seq_compose(relcore.par_compose(a, b), relcore.swap(y1, y2))
                    rhs = relcore.seq_compose(relcore.swap(x1, x2), relcore.par_compose(b, a))
                    yield (a, b), lhs, rhs

    def swap_involution():
        for x, y in itertools.product(words, repeat=2):
            lhs = relcore.seq_compose(relcore.swap(x, y), relcore.swap(y, x))
            yield (x.format(), y.format()), lhs, relcore.identity(x * y)

    return [
        _run_law("seq-assoc", seq_assoc()),
        _run_law("seq-unit-left", seq_unit_left()),
        _run_law("seq-unit-right", seq_unit_right()),
        _run_law("par-assoc", par_assoc()),
        _run_law("par-unit-left", par_unit_left()),
        _run_law("par-unit-right", par_unit_right()),
        _run_law("interchange", interchange()),
        _run_law("swap-naturality", swap_naturality()),
        _run_law("swap-involution", swap_involution()),
    ]


def verify_dagger_laws(budget: EnumerationBudget = DEFAULT_BUDGET) -> list[LawReport]:
    words, atomic, _ = _families(budget)
    cache = _HomCache(budget)

    def dagger_seq():
        for x, y, z in itertools.product(atomic, repeat=3):
            for a in cache.rels(x, y):
                for b in cache.rels(y, z):
                    lhs = relcore.transpose(relcore.seq_compose(a, b))
                    rhs = relcore.seq_compose(relcore.transpose(b), relcore.transpose(a))
                    yield (a, b), lhs, rhs

    def dagger_par():
        for x1, y1, x2, y2 in itertools.product(atomic, repeat=4):
            for a in cache.rels(x1, y1):
                for b in cache.rels(x2, y2):
                    lhs = relcore.transpose(relcore.par_compose(a, b))
                    rhs = relcore.par_compose(relcore.transpose(a), relcore.transpose(b))
                    yield (a, b), lhs, rhs

    def dagger_involution():
        for x, y in itertools.product(words, repeat=2):
            for a in enumerate_relations(x, y, budget):
                yield (a,), relcore.transpose(relcore.transpose(a)), a

    return [
        _run_law("dagger-seq", dagger_seq()),
        _run_law("dagger-par", dagger_par()),
        _run_law("dagger-involution", dagger_involution()),
    ]


def verify_copy_laws(budget: EnumerationBudget = DEFAULT_BUDGET) -> list[LawReport]:
    words, _, _ = _families(budget)

    def copy_swap():
        for x in words:
            lhs = relcore.seq_compose(relcore.copy(x), relcore.swap(x, x))
            yield (x.format(),), lhs, relcore.copy(x)

    def copy_coassoc():
        for x in words:
            first = relcore.copy(x)
            lhs = relcore.seq_compose(first, relcore.par_compose(relcore.copy(x), relcore.identity(x)))
            rhs = relcore.seq_compose(first, relcore.par_compose(relcore.identity(x), relcore.copy(x)))
            yield (x.format(),), lhs, rhs

    def copy_discard_unit():
        for x in words:
            ident = relcore.identity(x)
            left = relcore.seq_compose(
                relcore.copy(x), relcore.par_compose(relcore.discard(x), ident)
            )
            yield (x.format(), "discard-left"), left, ident
            right = relcore.seq_compose(
                relcore.copy(x), relcore.par_compose(ident, relcore.discard(x))
            )
            yield (x.format(), "discard-right"), right, ident

    return [
        _run_law("copy-swap", copy_swap()),
        _run_law("copy-coassoc", copy_coassoc()),
        _run_law("copy-discard-unit", copy_discard_unit()),
    ]


def verify_all_laws(budget: EnumerationBudget = DEFAULT_BUDGET) -> list[LawReport]:
    return verify_smc_laws(budget) + verify_dagger_laws(budget) + verify_copy_laws(budget)
