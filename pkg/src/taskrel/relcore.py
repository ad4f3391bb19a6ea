"""Finite sets and relations with strict tensor structure.

Objects are words of named atoms; the empty word is the unit object, so
tensoring with the unit is literally a no-op on the data.  Elements of an
object are flat tuples of labels, one label per factor, and the unit object
has the single element ``()``.  Tasks are typed relations between objects,
stored as frozen sets of (input, output) maplets.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import BoundaryMismatch, CarrierMismatch, SplitMismatch

# An element of an object: one label per factor.  The unit element is ().
Elem = tuple[str, ...]

UNIT_ELEM: Elem = ()


@dataclass(frozen=True)
class Atom:
    """A named finite set of labels; the generator objects are built from."""

    name: str
    elements: tuple[str, ...]

    def __post_init__(self):
        if not self.name:
            raise ValueError("atom name must be nonempty")
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise ValueError(f"atom {self.name!r} has duplicate element labels")

    def __repr__(self):
        return f"Atom({self.name!r}, {self.elements!r})"


@dataclass(frozen=True)
class FinObject:
    """A word of atoms.  The empty word is the monoidal unit."""

    factors: tuple[Atom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def __mul__(self, other: "FinObject") -> "FinObject":
        return FinObject(self.factors + other.factors)

    @property
    def size(self) -> int:
        n = 1
        for a in self.factors:
            n *= len(a.elements)
        return n

    @cached_property
    def elements(self) -> tuple[Elem, ...]:
        """All elements in canonical (lexicographic by factor) order."""
        return tuple(itertools.product(*(a.elements for a in self.factors)))

    @cached_property
    def element_set(self) -> frozenset[Elem]:
        return frozenset(self.elements)

    @cached_property
    def _index(self) -> dict[Elem, int]:
        return {e: i for i, e in enumerate(self.elements)}

    def index_of(self, elem: Elem) -> int:
        return self._index[elem]

    def format(self) -> str:
        if not self.factors:
            return "I"
        return " * ".join(a.name for a in self.factors)

    def __repr__(self):
        return f"FinObject<{self.format()}>"


UNIT = FinObject()


def obj(*atoms: Atom) -> FinObject:
    return FinObject(tuple(atoms))


def tensor(*objects: FinObject) -> FinObject:
    factors: tuple[Atom, ...] = ()
    for o in objects:
        factors += o.factors
    return FinObject(factors)


def format_elem(e: Elem) -> str:
    if not e:
        return "*"
    if len(e) == 1:
        return e[0]
    return "(" + ",".join(e) + ")"


def format_maplet(pair: tuple[Elem, Elem]) -> str:
    x, y = pair
    return f"{format_elem(x)} |-> {format_elem(y)}"


@dataclass(frozen=True)
class Task:
    """A relation between the elements of two objects."""

    dom: FinObject
    cod: FinObject
    pairs: frozenset[tuple[Elem, Elem]]

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        dom_elems = self.dom.element_set
        cod_elems = self.cod.element_set
        for x, y in self.pairs:
            if x not in dom_elems or y not in cod_elems:
                raise ValueError(
                    f"maplet {format_maplet((x, y))} not in "
                    f"{self.dom.format()} x {self.cod.format()}"
                )

    def __rshift__(self, other: "Task") -> "Task":
        """Diagrammatic composition: (A >> B) first does A, then B."""
        return seq_compose(self, other)

    def __mul__(self, other: "Task") -> "Task":
        return par_compose(self, other)

    @cached_property
    def sorted_pairs(self) -> tuple[tuple[Elem, Elem], ...]:
        return tuple(
            sorted(self.pairs, key=lambda p: (self.dom.index_of(p[0]), self.cod.index_of(p[1])))
        )

    def format(self) -> str:
        body = ", ".join(format_maplet(p) for p in self.sorted_pairs)
        return "{" + body + "}" if body else "{}"

    def __repr__(self):
        return f"Task<{self.dom.format()} -> {self.cod.format()} = {self.format()}>"


def task(dom: FinObject, cod: FinObject, pairs) -> Task:
    return Task(dom, cod, frozenset(pairs))


@dataclass(frozen=True)
class Attribute:
    """A subset of an object's elements; interchangeable with a state 1 -> X."""

    carrier: FinObject
    members: frozenset[Elem]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        bad = self.members - self.carrier.element_set
        if bad:
            raise ValueError(
                f"attribute members {sorted(bad)} not elements of {self.carrier.format()}"
            )

    @cached_property
    def sorted_members(self) -> tuple[Elem, ...]:
        return tuple(sorted(self.members, key=self.carrier.index_of))

    def format(self) -> str:
        body = ",".join(format_elem(e) for e in self.sorted_members)
        return "{" + body + "}"

    def __repr__(self):
        return f"Attribute<{self.format()} on {self.carrier.format()}>"


def attribute(carrier: FinObject, members) -> Attribute:
    return Attribute(carrier, frozenset(members))


# ---------------------------------------------------------------------------
# Composition and structural generators
# ---------------------------------------------------------------------------


def seq_compose(a: Task, b: Task) -> Task:
    """Relational composite: first a, then b."""
    if a.cod != b.dom:
        raise BoundaryMismatch(
            f"cannot compose {a.dom.format()} -> {a.cod.format()} "
            f"with {b.dom.format()} -> {b.cod.format()}"
        )
    succ: dict[Elem, list[Elem]] = {}
    for y, z in b.pairs:
        succ.setdefault(y, []).append(z)
    pairs = {(x, z) for x, y in a.pairs for z in succ.get(y, ())}
    return Task(a.dom, b.cod, frozenset(pairs))


def par_compose(a: Task, b: Task) -> Task:
    """Side-by-side composite on the tensor of the boundaries."""
    pairs = {(x + z, y + w) for x, y in a.pairs for z, w in b.pairs}
    return Task(a.dom * b.dom, a.cod * b.cod, frozenset(pairs))


def transpose(a: Task) -> Task:
    return Task(a.cod, a.dom, frozenset((y, x) for x, y in a.pairs))


def identity(x: FinObject) -> Task:
    return Task(x, x, frozenset((e, e) for e in x.elements))


def swap(x: FinObject, y: FinObject) -> Task:
    nx = len(x.factors)
    pairs = frozenset((e, e[nx:] + e[:nx]) for e in (x * y).elements)
    return Task(x * y, y * x, pairs)


def copy(x: FinObject) -> Task:
    return Task(x, x * x, frozenset((e, e + e) for e in x.elements))


def discard(x: FinObject) -> Task:
    return Task(x, UNIT, frozenset((e, UNIT_ELEM) for e in x.elements))


def match(x: FinObject) -> Task:
    """Transpose of copy: defined only on equal pairs, returning their value."""
    return Task(x * x, x, frozenset((e + e, e) for e in x.elements))


def trivial_attribute(x: FinObject) -> Attribute:
    return Attribute(x, x.element_set)


def attribute_as_state(s: Attribute) -> Task:
    return Task(UNIT, s.carrier, frozenset((UNIT_ELEM, e) for e in s.members))


def test_of(s: Attribute) -> Task:
    return transpose(attribute_as_state(s))


def attribute_from_state(t: Task) -> Attribute:
    """Inverse of attribute_as_state; the task must start at the unit object."""
    if t.dom != UNIT:
        raise BoundaryMismatch(f"state must have unit domain, got {t.dom.format()}")
    return Attribute(t.cod, frozenset(y for _, y in t.pairs))


# ---------------------------------------------------------------------------
# Conditioning
# ---------------------------------------------------------------------------


def _split_tail(o: FinObject, count: int, what: str) -> tuple[FinObject, FinObject]:
    if count < 0 or count > len(o.factors):
        raise SplitMismatch(
            f"cannot split {count} trailing factor(s) off {what} {o.format()}"
        )
    cut = len(o.factors) - count
    return FinObject(o.factors[:cut]), FinObject(o.factors[cut:])


def precondition(a: Task, s: Attribute, z_factors: int) -> Task:
    """Fix the trailing z_factors of the input to carry attribute s.

    Equals composing (id x state(s)) before a.
    """
    x_obj, z_obj = _split_tail(a.dom, z_factors, "domain of")
    if s.carrier != z_obj:
        raise CarrierMismatch(
            f"attribute carrier {s.carrier.format()} != split factor {z_obj.format()}"
        )
    nx = len(x_obj.factors)
    pairs = {(p[:nx], y) for p, y in a.pairs if p[nx:] in s.members}
    return Task(x_obj, a.cod, frozenset(pairs))


def postcondition(a: Task, s: Attribute, z_factors: int) -> Task:
    """Require the trailing z_factors of the output to carry attribute s.

    Equals composing (id x test(s)) after a.
    """
    y_obj, z_obj = _split_tail(a.cod, z_factors, "codomain of")
    if s.carrier != z_obj:
        raise CarrierMismatch(
            f"attribute carrier {s.carrier.format()} != split factor {z_obj.format()}"
        )
    ny = len(y_obj.factors)
    pairs = {(x, q[:ny]) for x, q in a.pairs if q[ny:] in s.members}
    return Task(a.dom, y_obj, frozenset(pairs))


def pre_post(a: Task, p: Attribute, q: Attribute, z_factors: int, w_factors: int) -> Task:
    """Precondition the input and postcondition the output in one step."""
    return postcondition(precondition(a, p, z_factors), q, w_factors)


def is_function(a: Task) -> bool:
    """True iff the relation is total and single-valued on its domain."""
    if len(a.pairs) != a.dom.size:
        return False
    return len({x for x, _ in a.pairs}) == a.dom.size


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def task_to_text(name: str, t: Task) -> str:
    body = ", ".join(format_maplet(p) for p in t.sorted_pairs)
    return f"rel {name} : {t.dom.format()} -> {t.cod.format()} = {{ {body} }}" if body else (
        f"rel {name} : {t.dom.format()} -> {t.cod.format()} = {{}}"
    )


def object_to_json(o: FinObject) -> list[str]:
    return [a.name for a in o.factors]


def task_to_json(t: Task) -> dict:
    return {
        "dom": object_to_json(t.dom),
        "cod": object_to_json(t.cod),
        "pairs": [[list(x), list(y)] for x, y in t.sorted_pairs],
    }


def attribute_to_json(s: Attribute) -> dict:
    return {
        "carrier": object_to_json(s.carrier),
        "members": [list(e) for e in s.sorted_members],
    }
