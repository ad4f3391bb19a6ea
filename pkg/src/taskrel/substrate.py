"""Substrates, deterministic processes, and possibility of tasks.

A substrate is a word of named carriers, each with a finite state set; its
state space is the corresponding FinObject.  Processes are total functions
between state spaces.  A task A between state spaces counts as possible
when some candidate (constructor substrate C, attribute P of its states,
process f on H x C -> K x C) reproduces A exactly once the constructor side
is initialized in P and discarded afterwards, while P survives f.

Both defining conditions are computed two ways (pointwise over states, and
as a relation composite) and the two computations are asserted to agree on
every call.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

from . import relcore
from .errors import BoundaryMismatch, BudgetExceeded, CarrierMismatch, SplitMismatch
from .lawcheck import DEFAULT_BUDGET, EnumerationBudget, enumerate_attributes
from .relcore import Atom, Attribute, Elem, FinObject, Task


@dataclass(frozen=True)
class SubstrateAtom:
    """A named carrier with its finite state set."""

    name: str
    state_set: Atom

    def __post_init__(self):
        if not self.state_set.elements:
            raise ValueError(f"substrate {self.name!r} has an empty state set")


@dataclass(frozen=True)
class Substrate:
    """A word of substrate atoms; the empty word is the unit substrate."""

    factors: tuple[SubstrateAtom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def __mul__(self, other: "Substrate") -> "Substrate":
        return Substrate(self.factors + other.factors)

    @cached_property
    def gamma(self) -> FinObject:
        """The state space: product of the factor state sets."""
        return FinObject(tuple(f.state_set for f in self.factors))

    def format(self) -> str:
        if not self.factors:
            return "I"
        return " * ".join(f.name for f in self.factors)

    def __repr__(self):
        return f"Substrate<{self.format()}>"


UNIT_SUBSTRATE = Substrate()


def sub(*atoms: SubstrateAtom) -> Substrate:
    return Substrate(tuple(atoms))


@dataclass(frozen=True)
class Process:
    """A total function between two substrates' state spaces."""

    name: str
    dom: Substrate
    cod: Substrate
    mapping: tuple[tuple[Elem, Elem], ...]

    def __post_init__(self):
        dom_elems = self.dom.gamma.elements
        cod_set = self.cod.gamma.element_set
        as_dict = dict(self.mapping)
        if len(as_dict) != len(self.mapping) or set(as_dict) != set(dom_elems):
            raise ValueError(f"process {self.name!r} is not a total function on its domain")
        for v in as_dict.values():
            if v not in cod_set:
                raise ValueError(f"process {self.name!r} maps outside its codomain")
        ordered = tuple((e, as_dict[e]) for e in dom_elems)
        object.__setattr__(self, "mapping", ordered)

    @cached_property
    def as_dict(self) -> dict[Elem, Elem]:
        return dict(self.mapping)

    def __call__(self, state: Elem) -> Elem:
        return self.as_dict[state]

    def __repr__(self):
        return f"Process<{self.name}: {self.dom.format()} -> {self.cod.format()}>"


def make_process(name: str, dom: Substrate, cod: Substrate, fn: Callable[[Elem], Elem]) -> Process:
    return Process(name, dom, cod, tuple((e, fn(e)) for e in dom.gamma.elements))


def process_identity(s: Substrate) -> Process:
    return Process(f"id({s.format()})", s, s, tuple((e, e) for e in s.gamma.elements))


def process_swap(s1: Substrate, s2: Substrate) -> Process:
    n1 = len(s1.factors)
    dom = s1 * s2
    return Process(
        f"swap({s1.format()},{s2.format()})",
        dom,
        s2 * s1,
        tuple((e, e[n1:] + e[:n1]) for e in dom.gamma.elements),
    )


def process_seq(f: Process, g: Process) -> Process:
    if f.cod != g.dom:
        raise BoundaryMismatch(
            f"cannot chain {f.name} ({f.cod.format()}) into {g.name} ({g.dom.format()})"
        )
    return Process(
        f"({f.name} ; {g.name})",
        f.dom,
        g.cod,
        tuple((x, g.as_dict[y]) for x, y in f.mapping),
    )


def process_par(f: Process, g: Process) -> Process:
    nf = len(f.dom.factors)
    dom = f.dom * g.dom
    return Process(
        f"({f.name} * {g.name})",
        dom,
        f.cod * g.cod,
        tuple((e, f.as_dict[e[:nf]] + g.as_dict[e[nf:]]) for e in dom.gamma.elements),
    )


def is_task_inducing(f: Process, h: Substrate, k: Substrate) -> bool:
    """Boundary check retained for a future relational extension.

    Total functions always send states of h to states of k, so after the
    boundary validation this is constantly true.
    """
    if f.dom != h or f.cod != k:
        raise BoundaryMismatch(
            f"{f.name} has boundary {f.dom.format()} -> {f.cod.format()}, "
            f"expected {h.format()} -> {k.format()}"
        )
    cod_set = k.gamma.element_set
    return all(v in cod_set for _, v in f.mapping)


def induced_task(f: Process) -> Task:
    return Task(f.dom.gamma, f.cod.gamma, frozenset(f.mapping))


@dataclass(frozen=True)
class SubstrateTheory:
    """A choice of carriers and generating processes, with a term depth bound."""

    atoms: tuple[SubstrateAtom, ...]
    generators: tuple[Process, ...]
    depth_bound: int = 3

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.depth_bound < 0:
            raise ValueError("depth bound must be nonnegative")
        known = set(self.atoms)
        for g in self.generators:
            for a in g.dom.factors + g.cod.factors:
                if a not in known:
                    raise ValueError(
                        f"generator {g.name!r} uses substrate {a.name!r} outside the theory"
                    )

    def substrate_for(self, gamma: FinObject) -> Substrate:
        """The canonical substrate word whose state space is gamma.

        Each factor resolves to the first theory atom carrying that state
        set; declaration order breaks ties between same-state carriers.
        """
        picked = []
        for state_atom in gamma.factors:
            for cand in self.atoms:
                if cand.state_set == state_atom:
                    picked.append(cand)
                    break
            else:
                raise BoundaryMismatch(
                    f"no substrate in the theory has state set {state_atom.name!r}"
                )
        return Substrate(tuple(picked))


@dataclass(frozen=True)
class ConstructorCandidate:
    """A constructor substrate, its allowed states, and the driving process."""

    constructor: Substrate
    states: Attribute
    process: Process

    def __post_init__(self):
        if self.states.carrier != self.constructor.gamma:
            raise CarrierMismatch(
                f"attribute carrier {self.states.carrier.format()} is not the "
                f"constructor state space {self.constructor.gamma.format()}"
            )
        nc = len(self.constructor.factors)
        for side, s in (("input", self.process.dom), ("output", self.process.cod)):
            if nc and s.factors[len(s.factors) - nc:] != self.constructor.factors:
                raise SplitMismatch(
                    f"process {side} {s.format()} does not end with "
                    f"constructor {self.constructor.format()}"
                )
            if len(s.factors) < nc:
                raise SplitMismatch(
                    f"process {side} {s.format()} is narrower than the constructor"
                )

    @cached_property
    def h_sub(self) -> Substrate:
        nc = len(self.constructor.factors)
        return Substrate(self.process.dom.factors[: len(self.process.dom.factors) - nc])

    @cached_property
    def k_sub(self) -> Substrate:
        nc = len(self.constructor.factors)
        return Substrate(self.process.cod.factors[: len(self.process.cod.factors) - nc])


def trivial_candidate(f: Process) -> ConstructorCandidate:
    """Wrap a bare process as a candidate with the unit constructor."""
    full_unit = Attribute(relcore.UNIT, frozenset({()}))
    return ConstructorCandidate(UNIT_SUBSTRATE, full_unit, f)


@dataclass(frozen=True)
class PossibilityVerdict:
    task_inducing: bool
    condition1: bool
    condition2: bool
    overall: bool
    counterexample: Optional[dict] = None


def verdict_to_json(v: PossibilityVerdict) -> dict:
    return {
        "task_inducing": v.task_inducing,
        "condition1": v.condition1,
        "condition2": v.condition2,
        "overall": v.overall,
        "counterexample": v.counterexample,
    }


def process_to_json(f: Process) -> dict:
    return {
        "name": f.name,
        "dom": [a.name for a in f.dom.factors],
        "cod": [a.name for a in f.cod.factors],
        "mapping": [[list(x), list(y)] for x, y in f.mapping],
    }


def candidate_to_json(cand: ConstructorCandidate) -> dict:
    return {
        "constructor": [a.name for a in cand.constructor.factors],
        "states": relcore.attribute_to_json(cand.states),
        "process": process_to_json(cand.process),
    }


def _composite_task(cand: ConstructorCandidate) -> Task:
    """The candidate's effective task: initialize P, run f, drop the constructor."""
    gh = cand.h_sub.gamma
    gk = cand.k_sub.gamma
    gc = cand.constructor.gamma
    lift = relcore.par_compose(relcore.identity(gh), relcore.attribute_as_state(cand.states))
    drop = relcore.par_compose(relcore.identity(gk), relcore.discard(gc))
    return relcore.seq_compose(relcore.seq_compose(lift, induced_task(cand.process)), drop)


def check_condition1(a: Task, cand: ConstructorCandidate) -> bool:
    """Does the candidate reproduce a exactly?"""
    gh = cand.h_sub.gamma
    gk = cand.k_sub.gamma
    if a.dom != gh or a.cod != gk:
        raise BoundaryMismatch(
            f"task boundary {a.dom.format()} -> {a.cod.format()} does not match "
            f"candidate boundary {gh.format()} -> {gk.format()}"
        )
    composite = _composite_task(cand)
    nk = len(gk.factors)
    pointwise = {
        (rho, cand.process.as_dict[rho + gamma][:nk])
        for rho in gh.elements
        for gamma in cand.states.sorted_members
    }
    assert composite.pairs == frozenset(pointwise), "composite and pointwise runs diverged"
    return a.pairs == composite.pairs


def check_condition2(cand: ConstructorCandidate) -> bool:
    """Does the allowed-state attribute survive the process?"""
    gh = cand.h_sub.gamma
    gc = cand.constructor.gamma
    nk = len(cand.k_sub.factors)
    pointwise = True
    for gamma in cand.states.sorted_members:
        for rho in gh.elements:
            if cand.process.as_dict[rho + gamma][nk:] not in cand.states.members:
                pointwise = False
                break
        if not pointwise:
            break
    start = relcore.par_compose(
        relcore.attribute_as_state(relcore.trivial_attribute(gh)),
        relcore.attribute_as_state(cand.states),
    )
    drop = relcore.par_compose(relcore.discard(cand.k_sub.gamma), relcore.identity(gc))
    reached = relcore.seq_compose(relcore.seq_compose(start, induced_task(cand.process)), drop)
    relational = relcore.attribute_from_state(reached).members <= cand.states.members
    assert pointwise == relational, "pointwise and relational survival checks diverged"
    return pointwise


def _condition1_counterexample(a: Task, cand: ConstructorCandidate) -> dict:
    composite = _composite_task(cand)
    extra = composite.pairs - a.pairs
    missing = a.pairs - composite.pairs
    pool = [("produced-but-absent", p) for p in extra] + [("required-but-unproduced", p) for p in missing]
    kind, (x, y) = min(
        pool, key=lambda kp: (a.dom.index_of(kp[1][0]), a.cod.index_of(kp[1][1]), kp[0])
    )
    return {"check": "condition1", "kind": kind, "maplet": [list(x), list(y)]}


def _condition2_counterexample(cand: ConstructorCandidate) -> dict:
    gh = cand.h_sub.gamma
    nk = len(cand.k_sub.factors)
    for gamma in cand.states.sorted_members:
        for rho in gh.elements:
            escaped = cand.process.as_dict[rho + gamma][nk:]
            if escaped not in cand.states.members:
                return {
                    "check": "condition2",
                    "state": list(gamma),
                    "input": list(rho),
                    "escapes_to": list(escaped),
                }
    raise AssertionError("no escaping state found for a failed survival check")


def is_possible_with(a: Task, cand: ConstructorCandidate) -> PossibilityVerdict:
    inducing = is_task_inducing(cand.process, cand.process.dom, cand.process.cod)
    c1 = check_condition1(a, cand)
    c2 = check_condition2(cand)
    counterexample = None
    if not c1:
        counterexample = _condition1_counterexample(a, cand)
    elif not c2:
        counterexample = _condition2_counterexample(cand)
    return PossibilityVerdict(inducing, c1, c2, inducing and c1 and c2, counterexample)


# ---------------------------------------------------------------------------
# Closure witnesses
# ---------------------------------------------------------------------------


def _product_states(p: Attribute, q: Attribute, carrier: FinObject) -> Attribute:
    members = {g + d for g in p.members for d in q.members}
    return Attribute(carrier, frozenset(members))


def witness_seq(wa: ConstructorCandidate, wb: ConstructorCandidate) -> ConstructorCandidate:
    """Chain two witnesses into one for the chained tasks.

    Runs the first process with the second constructor idling, swaps the
    constructors past each other, runs the second, and swaps back, so both
    constructor wires end in their original slots.
    """
    if wa.k_sub != wb.h_sub:
        raise BoundaryMismatch(
            f"first witness ends at {wa.k_sub.format()}, "
            f"second starts at {wb.h_sub.format()}"
        )
    c, d = wa.constructor, wb.constructor
    k, l = wa.k_sub, wb.k_sub
    step1 = process_par(wa.process, process_identity(d))
    step2 = process_par(process_identity(k), process_swap(c, d))
    step3 = process_par(wb.process, process_identity(c))
    step4 = process_par(process_identity(l), process_swap(d, c))
    proc = process_seq(process_seq(process_seq(step1, step2), step3), step4)
    states = _product_states(wa.states, wb.states, (c * d).gamma)
    return ConstructorCandidate(c * d, states, proc)


def witness_par(wa: ConstructorCandidate, wb: ConstructorCandidate) -> ConstructorCandidate:
    """Run two witnesses side by side under a joint constructor.

    The substrate and constructor wires are regrouped before and after so
    the joint process still ends with the joint constructor.
    """
    c, d = wa.constructor, wb.constructor
    h1, k1 = wa.h_sub, wa.k_sub
    h2, k2 = wb.h_sub, wb.k_sub
    regroup_in = process_par(
        process_par(process_identity(h1), process_swap(h2, c)), process_identity(d)
    )
    mid = process_par(wa.process, wb.process)
    regroup_out = process_par(
        process_par(process_identity(k1), process_swap(c, k2)), process_identity(d)
    )
    proc = process_seq(process_seq(regroup_in, mid), regroup_out)
    states = _product_states(wa.states, wb.states, (c * d).gamma)
    return ConstructorCandidate(c * d, states, proc)


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------


def _layer_processes(theory: SubstrateTheory, start: Substrate):
    """Single layers on the word: wires, generators, and adjacent swaps.

    At each position, in order: a plain wire, each generator whose input
    word matches here, then a swap of this factor with the next.  The
    all-wire layer is skipped since it composes to the identity.
    """
    factors = start.factors
    pieces_at: list[list[Process]] = []
    for i in range(len(factors)):
        options = [process_identity(Substrate((factors[i],)))]
        for g in theory.generators:
            k = len(g.dom.factors)
            if k and factors[i : i + k] == g.dom.factors:
                options.append(g)
        if i + 1 < len(factors):
            options.append(
                process_swap(Substrate((factors[i],)), Substrate((factors[i + 1],)))
            )
        pieces_at.append(options)

    def build(i: int, acc: Optional[Process], nontrivial: bool):
        if i == len(factors):
            if nontrivial and acc is not None:
                yield acc
            return
        for piece in pieces_at[i]:
            width = len(piece.dom.factors)
            nxt = piece if acc is None else process_par(acc, piece)
            yield from build(i + width, nxt, nontrivial or width > 1 or piece.mapping != tuple(
                (e, e) for e in piece.dom.gamma.elements
            ))

    yield from build(0, None, False)


def enumerate_processes(
    theory: SubstrateTheory,
    dom: Substrate,
    cod: Substrate,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> list[Process]:
    """All distinct layered terms from dom to cod within the depth bound.

    Breadth-first over layer counts; two terms with the same boundary and
    state map are the same process, and only the first found is kept.
    """
    start = process_identity(dom)
    seen = {(start.cod.factors, start.mapping)}
    frontier = [start]
    results = [start] if dom == cod else []
    for _ in range(theory.depth_bound):
        grown = []
        for proc in frontier:
            for layer in _layer_processes(theory, proc.cod):
                ext = process_seq(proc, layer)
                key = (ext.cod.factors, ext.mapping)
                if key in seen:
                    continue
                seen.add(key)
                if len(seen) > budget.max_relations:
                    raise BudgetExceeded(
                        f"term search exceeded {budget.max_relations} distinct processes"
                    )
                grown.append(ext)
                if ext.cod == cod:
                    results.append(ext)
        frontier = grown
    return results


def search_constructor(
    a: Task, theory: SubstrateTheory, bounds: EnumerationBudget = DEFAULT_BUDGET
) -> Optional[ConstructorCandidate]:
    """First candidate, in canonical order, that makes the task possible.

    Candidate order: fewest constructor factors first, then largest allowed
    state set, then term order.  Absence within bounds is not a proof of
    impossibility; the caller sees bounds in the CLI payload.
    """
    for atom in theory.atoms:
        if len(atom.state_set.elements) > bounds.max_atom_size:
            raise BudgetExceeded(
                f"substrate {atom.name!r} has {len(atom.state_set.elements)} states, "
                f"bounds allow {bounds.max_atom_size}"
            )
    h = theory.substrate_for(a.dom)
    k = theory.substrate_for(a.cod)
    checked = 0
    for n in range(bounds.max_factors + 1):
        for combo in itertools.product(theory.atoms, repeat=n):
            c = Substrate(combo)
            gc = c.gamma
            procs = enumerate_processes(theory, h * c, k * c, bounds)
            if not procs:
                continue
            attrs = sorted(
                enumerate_attributes(gc, bounds),
                key=lambda s: (-len(s.members), tuple(gc.index_of(m) for m in s.sorted_members)),
            )
            for p in attrs:
                for f in procs:
                    checked += 1
                    if checked > bounds.max_relations:
                        raise BudgetExceeded(
                            f"candidate search exceeded {bounds.max_relations} verdicts"
                        )
                    cand = ConstructorCandidate(c, p, f)
                    if is_possible_with(a, cand).overall:
                        return cand
    return None
