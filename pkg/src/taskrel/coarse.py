"""Coarse-graining of tasks over antichains of attributes.

An antichain is a family of attributes on one object with no strict
nesting; a coarse task relates attributes instead of elements.  A task A
coarsens to the pair set { S -> T : every member of S reaches some member
of T through A }.  Coarse tasks compose relationally; when a coarse task
remembers the base task it came from, that provenance is kept only while
it stays consistent with the pair set.

Empty attributes are allowed, but an antichain containing one can contain
nothing else, since the empty set nests strictly inside any nonempty set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cache, cached_property
from typing import Iterable, Optional

from . import relcore
from .errors import (
    BoundaryMismatch,
    BudgetExceeded,
    CarrierMismatch,
    NonAntichainDeclaration,
)
from .lawcheck import (
    DEFAULT_BUDGET,
    Counterexample,
    EnumerationBudget,
    LawReport,
    enumerate_attributes,
    enumerate_relations,
    standard_atoms,
)
from .relcore import Atom, Attribute, Elem, FinObject, Task, format_elem


def attribute_key(a: Attribute) -> tuple[int, ...]:
    """Canonical sort key: the sorted element indices of the members."""
    return tuple(a.carrier.index_of(m) for m in a.sorted_members)


def is_antichain(family: Iterable[Attribute]) -> bool:
    fam = list(family)
    carriers = {a.carrier for a in fam}
    if len(carriers) > 1:
        raise CarrierMismatch(
            "attributes live on different objects: "
            + ", ".join(sorted(c.format() for c in carriers))
        )
    for s, t in itertools.permutations(fam, 2):
        if s.members < t.members:
            return False
    return True


@dataclass(frozen=True)
class Antichain:
    """A nesting-free family of attributes on a common base object."""

    base: FinObject
    attributes: frozenset[Attribute]

    def __post_init__(self):
        object.__setattr__(self, "attributes", frozenset(self.attributes))
        for a in self.attributes:
            if a.carrier != self.base:
                raise CarrierMismatch(
                    f"attribute on {a.carrier.format()} declared in a family "
                    f"over {self.base.format()}"
                )
        if not is_antichain(self.attributes):
            raise NonAntichainDeclaration(
                f"family on {self.base.format()} contains strictly nested attributes"
            )

    @cached_property
    def sorted_attributes(self) -> tuple[Attribute, ...]:
        return tuple(sorted(self.attributes, key=attribute_key))

    @cached_property
    def support(self) -> frozenset[Elem]:
        out: set[Elem] = set()
        for a in self.attributes:
            out |= a.members
        return frozenset(out)

    def format(self) -> str:
        return "{" + ",".join(a.format() for a in self.sorted_attributes) + "}"

    def __repr__(self):
        return f"Antichain<{self.format()} on {self.base.format()}>"


def antichain(base: FinObject, families: Iterable[Iterable]) -> Antichain:
    """Build an antichain from member collections; bare labels are promoted
    to one-component elements."""
    attrs = set()
    for fam in families:
        members = frozenset((m,) if isinstance(m, str) else tuple(m) for m in fam)
        attrs.add(Attribute(base, members))
    return Antichain(base, frozenset(attrs))


def _coarse_pairs(a: Task, dom: Antichain, cod: Antichain) -> frozenset:
    succ: dict[Elem, set[Elem]] = {}
    for x, y in a.pairs:
        succ.setdefault(x, set()).add(y)
    out = set()
    for s in dom.attributes:
        for t in cod.attributes:
            if all(succ.get(x, frozenset()) & t.members for x in s.members):
                out.add((s, t))
    return frozenset(out)


@dataclass(frozen=True)
class CoarseTask:
    """A relation between two antichains, with optional base-task provenance."""

    dom: Antichain
    cod: Antichain
    pairs: frozenset[tuple[Attribute, Attribute]]
    provenance: Optional[Task] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        for s, t in self.pairs:
            if s not in self.dom.attributes or t not in self.cod.attributes:
                raise CarrierMismatch(
                    f"pair {s.format()} |-> {t.format()} relates attributes "
                    "outside the declared antichains"
                )
        if self.provenance is not None:
            if self.pairs != _coarse_pairs(self.provenance, self.dom, self.cod):
                raise CarrierMismatch(
                    "provenance task does not coarse-grain to the declared pairs"
                )

    @cached_property
    def sorted_pairs(self) -> tuple[tuple[Attribute, Attribute], ...]:
        return tuple(
            sorted(self.pairs, key=lambda p: (attribute_key(p[0]), attribute_key(p[1])))
        )

    def format(self) -> str:
        body = ", ".join(f"{s.format()} |-> {t.format()}" for s, t in self.sorted_pairs)
        return "{" + body + "}"

    def __repr__(self):
        return f"CoarseTask<{self.dom.format()} -> {self.cod.format()} = {self.format()}>"


def coarse_grain(a: Task, dom: Antichain, cod: Antichain) -> CoarseTask:
    """Relate S to T whenever every member of S reaches T through a."""
    if dom.base != a.dom:
        raise CarrierMismatch(
            f"domain antichain lives on {dom.base.format()}, task starts at {a.dom.format()}"
        )
    if cod.base != a.cod:
        raise CarrierMismatch(
            f"codomain antichain lives on {cod.base.format()}, task ends at {a.cod.format()}"
        )
    return CoarseTask(dom, cod, _coarse_pairs(a, dom, cod), provenance=a)


@cache
def attribute_product(s: Attribute, t: Attribute) -> Attribute:
    return Attribute(
        s.carrier * t.carrier, frozenset(x + y for x in s.members for y in t.members)
    )


@cache
def boxtimes_objects(xbar: Antichain, ybar: Antichain) -> Antichain:
    attrs = {
        attribute_product(s, t)
        for s in xbar.attributes
        for t in ybar.attributes
    }
    return Antichain(xbar.base * ybar.base, frozenset(attrs))


def _attach_provenance(
    dom: Antichain, cod: Antichain, pairs: frozenset, prov: Optional[Task]
) -> CoarseTask:
    """Keep the base task only when it still explains the pair set."""
    if prov is not None and _coarse_pairs(prov, dom, cod) == pairs:
        return CoarseTask(dom, cod, pairs, provenance=prov)
    return CoarseTask(dom, cod, pairs, provenance=None)


def coarse_identity(xbar: Antichain) -> CoarseTask:
    diag = frozenset((s, s) for s in xbar.attributes)
    return _attach_provenance(xbar, xbar, diag, relcore.identity(xbar.base))


def coarse_swap(xbar: Antichain, ybar: Antichain) -> CoarseTask:
    pairs = frozenset(
        (attribute_product(s, t), attribute_product(t, s))
        for s in xbar.attributes
        for t in ybar.attributes
    )
    return _attach_provenance(
        boxtimes_objects(xbar, ybar),
        boxtimes_objects(ybar, xbar),
        pairs,
        relcore.swap(xbar.base, ybar.base),
    )


def coarse_seq(f: CoarseTask, g: CoarseTask) -> CoarseTask:
    """Relational composite; no provenance, since composing the base tasks
    can relate strictly more attribute pairs than the composite pair set."""
    if f.cod != g.dom:
        raise BoundaryMismatch(
            f"cannot chain coarse tasks through {f.cod.format()} and {g.dom.format()}"
        )
    succ: dict[Attribute, list[Attribute]] = {}
    for t, u in g.pairs:
        succ.setdefault(t, []).append(u)
    pairs = frozenset((s, u) for s, t in f.pairs for u in succ.get(t, ()))
    return CoarseTask(f.dom, g.cod, pairs, provenance=None)


def coarse_par(f: CoarseTask, g: CoarseTask) -> CoarseTask:
    """Pairs are products of the factor pairs; provenance is the product of
    the factor provenances while that stays consistent (an empty attribute
    in a domain antichain can break it)."""
    dom = boxtimes_objects(f.dom, g.dom)
    cod = boxtimes_objects(f.cod, g.cod)
    pairs = frozenset(
        (attribute_product(s, t), attribute_product(u, v))
        for s, u in f.pairs
        for t, v in g.pairs
    )
    prov = None
    if f.provenance is not None and g.provenance is not None:
        prov = relcore.par_compose(f.provenance, g.provenance)
    return _attach_provenance(dom, cod, pairs, prov)


def restrict_to_support(a: Task, xbar: Antichain, ybar: Antichain) -> Task:
    """Cut the task down to the elements the antichains mention.

    Composing with partial identities on the supports drops every maplet
    that touches an unmentioned element; the coarse-graining over the same
    antichains is unchanged.
    """
    if xbar.base != a.dom or ybar.base != a.cod:
        raise CarrierMismatch(
            f"antichains on {xbar.base.format()}, {ybar.base.format()} do not "
            f"fit task {a.dom.format()} -> {a.cod.format()}"
        )
    pi_in = Task(a.dom, a.dom, frozenset((e, e) for e in xbar.support))
    pi_out = Task(a.cod, a.cod, frozenset((e, e) for e in ybar.support))
    return relcore.seq_compose(relcore.seq_compose(pi_in, a), pi_out)


# ---------------------------------------------------------------------------
# Embeddings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SupportEmbedding:
    """A fresh one-atom object carrying exactly an antichain's support."""

    source: Antichain
    target: FinObject
    mapping: tuple[tuple[Elem, Elem], ...]

    @cached_property
    def forward(self) -> dict[Elem, Elem]:
        return dict(self.mapping)

    @cached_property
    def backward(self) -> dict[Elem, Elem]:
        return {v: k for k, v in self.mapping}

    def embed_attribute(self, a: Attribute) -> Attribute:
        return Attribute(self.target, frozenset(self.forward[m] for m in a.members))

    def unembed_attribute(self, a: Attribute) -> Attribute:
        return Attribute(
            self.source.base, frozenset(self.backward[m] for m in a.members)
        )

    @cached_property
    def image(self) -> Antichain:
        return Antichain(
            self.target, frozenset(self.embed_attribute(a) for a in self.source.attributes)
        )


def support_embedding(xbar: Antichain, name: Optional[str] = None) -> SupportEmbedding:
    elems = sorted(xbar.support, key=xbar.base.index_of)
    labels = tuple(format_elem(e) for e in elems)
    if len(set(labels)) != len(labels):
        labels = tuple(f"e{i}" for i in range(len(elems)))
    atom = Atom(name or f"sup({xbar.base.format()})", labels)
    target = FinObject((atom,))
    mapping = tuple((e, (lab,)) for e, lab in zip(elems, labels))
    return SupportEmbedding(xbar, target, mapping)


def singleton_embed_object(x: FinObject) -> Antichain:
    return Antichain(x, frozenset(Attribute(x, frozenset({e})) for e in x.elements))


def singleton_embed_task(a: Task) -> CoarseTask:
    pairs = frozenset(
        (Attribute(a.dom, frozenset({x})), Attribute(a.cod, frozenset({y})))
        for x, y in a.pairs
    )
    return CoarseTask(
        singleton_embed_object(a.dom), singleton_embed_object(a.cod), pairs, provenance=a
    )


def antichain_as_object(xbar: Antichain, name: Optional[str] = None) -> FinObject:
    """A one-atom object whose elements name the antichain's attributes."""
    labels = tuple(a.format() for a in xbar.sorted_attributes)
    atom = Atom(name or f"attrs({xbar.base.format()})", labels)
    return FinObject((atom,))


def coarse_task_as_task(f: CoarseTask) -> Task:
    """A coarse task is itself a relation between attribute-name objects."""
    dom_obj = antichain_as_object(f.dom)
    cod_obj = antichain_as_object(f.cod)
    pairs = frozenset(((s.format(),), (t.format(),)) for s, t in f.pairs)
    return Task(dom_obj, cod_obj, pairs)


def coarse_task_from_task(t: Task, dom: Antichain, cod: Antichain) -> CoarseTask:
    by_label_dom = {a.format(): a for a in dom.attributes}
    by_label_cod = {a.format(): a for a in cod.attributes}
    pairs = frozenset((by_label_dom[x[0]], by_label_cod[y[0]]) for x, y in t.pairs)
    return CoarseTask(dom, cod, pairs, provenance=None)


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def identity_antichain_biconditional(family: Iterable[Attribute]) -> bool:
    """The coarse-grained identity is the identity relation on a family
    exactly when the family is an antichain; both sides are evaluated and
    must agree."""
    fam = list(family)
    nesting_free = is_antichain(fam)
    subset_pairs = {(s, t) for s in fam for t in fam if s.members <= t.members}
    diagonal = {(s, s) for s in fam}
    identity_coarse = subset_pairs == diagonal
    assert identity_coarse == nesting_free, "nesting and identity checks diverged"
    return identity_coarse


def all_antichains(
    x: FinObject,
    budget: EnumerationBudget = DEFAULT_BUDGET,
    nonempty_attributes: bool = False,
) -> list[Antichain]:
    """Every antichain over x, in canonical family-bitmask order."""
    attrs = [
        a
        for a in enumerate_attributes(x, budget)
        if not (nonempty_attributes and not a.members)
    ]
    if 1 << len(attrs) > budget.max_relations:
        raise BudgetExceeded(
            f"{len(attrs)} attributes give {1 << len(attrs)} families, "
            f"budget allows {budget.max_relations}"
        )
    out = []
    for mask in range(1 << len(attrs)):
        family = [a for i, a in enumerate(attrs) if mask >> i & 1]
        if is_antichain(family):
            out.append(Antichain(x, frozenset(family)))
    return out


def lax_structure_check(
    xbar: Antichain, ybar: Antichain, budget: EnumerationBudget = DEFAULT_BUDGET
) -> LawReport:
    """The product map on attributes is a genuine task, and product
    containment splits into factor containments.

    The splitting direction requires both factor attributes nonempty; an
    empty factor makes the product empty, which is contained in anything.
    """
    instances = 0

    boxed = boxtimes_objects(xbar, ybar)
    structure = relcore.Task(
        antichain_as_object(xbar) * antichain_as_object(ybar),
        antichain_as_object(boxed),
        frozenset(
            ((s.format(), t.format()), (attribute_product(s, t).format(),))
            for s in xbar.attributes
            for t in ybar.attributes
        ),
    )
    instances += 1
    if not relcore.is_function(structure):
        return LawReport(
            "lax-structure",
            instances,
            Counterexample(
                (xbar.format(), ybar.format()),
                "product map on attribute names",
                "a single-valued total task",
            ),
        )

    def successors(a: Task) -> dict[Elem, set[Elem]]:
        succ: dict[Elem, set[Elem]] = {}
        for x, y in a.pairs:
            succ.setdefault(x, set()).add(y)
        return succ

    def contained(succ, u: Attribute, s: Attribute) -> bool:
        return all(succ.get(x, frozenset()) & u.members for x in s.members)

    for a in enumerate_relations(xbar.base, xbar.base, budget):
        succ_a = successors(a)
        for b in enumerate_relations(ybar.base, ybar.base, budget):
            succ_b = successors(b)
            succ_ab = successors(relcore.par_compose(a, b))
            for s in xbar.sorted_attributes:
                for u in xbar.sorted_attributes:
                    left = contained(succ_a, u, s)
                    for t in ybar.sorted_attributes:
                        for v in ybar.sorted_attributes:
                            instances += 1
                            joint = contained(
                                succ_ab, attribute_product(u, v), attribute_product(s, t)
                            )
                            right = left and contained(succ_b, v, t)
                            if right and not joint:
                                mismatch = True
                            elif joint and not right and s.members and t.members:
                                mismatch = True
                            else:
                                mismatch = False
                            if mismatch:
                                return LawReport(
                                    "lax-structure",
                                    instances,
                                    Counterexample(
                                        (
                                            f"{xbar.base.format()} <- {a.format()}",
                                            f"{ybar.base.format()} <- {b.format()}",
                                            f"S={s.format()} T={t.format()} "
                                            f"U={u.format()} V={v.format()}",
                                        ),
                                        f"joint containment {joint}",
                                        f"factor containments {right}",
                                    ),
                                )
    return LawReport("lax-structure", instances)


# ---------------------------------------------------------------------------
# Law suite
# ---------------------------------------------------------------------------


def _run_check(name: str, instances) -> LawReport:
    count = 0
    for ok, detail in instances:
        count += 1
        if not ok:
            inputs, lhs, rhs = detail()
            return LawReport(name, count, Counterexample(tuple(inputs), lhs, rhs))
    return LawReport(name, count)


def _render_pairs(pairs) -> str:
    body = ", ".join(
        f"{s.format()} |-> {t.format()}"
        for s, t in sorted(pairs, key=lambda p: (attribute_key(p[0]), attribute_key(p[1])))
    )
    return "{" + body + "}"


def verify_coarse_laws(budget: EnumerationBudget = DEFAULT_BUDGET) -> list[LawReport]:
    atoms = standard_atoms(budget)
    bases = [FinObject((a,)) for a in atoms]
    chains = {x: all_antichains(x, budget) for x in bases}
    solid = {x: all_antichains(x, budget, nonempty_attributes=True) for x in bases}
    rels = {
        (x, y): list(enumerate_relations(x, y, budget))
        for x in bases
        for y in bases
    }

    def identity_biconditional():
        for x in bases:
            attrs = list(enumerate_attributes(x, budget))
            for mask in range(1 << len(attrs)):
                family = [a for i, a in enumerate(attrs) if mask >> i & 1]
                both = identity_antichain_biconditional(family)
                expected = is_antichain(family)
                yield both == expected, lambda f=family, b=both, e=expected: (
                    ("{" + ",".join(a.format() for a in f) + "}",),
                    f"identity-coarse-is-diagonal {b}",
                    f"is-antichain {e}",
                )

    def seq_containment():
        for x, y, z in itertools.product(bases, repeat=3):
            for xb in chains[x]:
                for yb in chains[y]:
                    for zb in chains[z]:
                        for a in rels[(x, y)]:
                            ca = coarse_grain(a, xb, yb)
                            for b in rels[(y, z)]:
                                cb = coarse_grain(b, yb, zb)
                                lhs = coarse_seq(ca, cb).pairs
                                rhs = coarse_grain(
                                    relcore.seq_compose(a, b), xb, zb
                                ).pairs
                                yield lhs <= rhs, lambda a=a, b=b, l=lhs, r=rhs: (
                                    (f"A = {a.format()}", f"B = {b.format()}"),
                                    _render_pairs(l),
                                    _render_pairs(r),
                                )

    def par_factor_formula():
        for x1, y1, x2, y2 in itertools.product(bases, repeat=4):
            for xb1 in solid[x1]:
                for yb1 in solid[y1]:
                    for xb2 in solid[x2]:
                        for yb2 in solid[y2]:
                            dd = boxtimes_objects(xb1, xb2)
                            cc = boxtimes_objects(yb1, yb2)
                            for a in rels[(x1, y1)]:
                                ca = CoarseTask(xb1, yb1, _coarse_pairs(a, xb1, yb1))
                                for b in rels[(x2, y2)]:
                                    cb = CoarseTask(xb2, yb2, _coarse_pairs(b, xb2, yb2))
                                    joint = coarse_par(ca, cb)
                                    direct = _coarse_pairs(
                                        relcore.par_compose(a, b), dd, cc
                                    )
                                    ok = joint.pairs == direct
                                    yield ok, lambda a=a, b=b, j=joint, d=direct: (
                                        (f"A = {a.format()}", f"B = {b.format()}"),
                                        _render_pairs(j.pairs),
                                        _render_pairs(d),
                                    )

    def swap_coherence():
        for x, y in itertools.product(bases, repeat=2):
            for xb in solid[x]:
                for yb in solid[y]:
                    via_base = coarse_grain(
                        relcore.swap(x, y),
                        boxtimes_objects(xb, yb),
                        boxtimes_objects(yb, xb),
                    )
                    direct = coarse_swap(xb, yb)
                    yield via_base.pairs == direct.pairs, lambda v=via_base, d=direct: (
                        (v.dom.format(),),
                        _render_pairs(v.pairs),
                        _render_pairs(d.pairs),
                    )

    def singleton_functor():
        for x, y, z in itertools.product(bases, repeat=3):
            for a in rels[(x, y)]:
                fa = singleton_embed_task(a)
                for b in rels[(y, z)]:
                    lhs = coarse_seq(fa, singleton_embed_task(b))
                    rhs = singleton_embed_task(relcore.seq_compose(a, b))
                    yield lhs.pairs == rhs.pairs, lambda l=lhs, r=rhs: (
                        ("seq",), _render_pairs(l.pairs), _render_pairs(r.pairs)
                    )
        for x, y in itertools.product(bases, repeat=2):
            for a in rels[(x, y)]:
                for b in rels[(x, y)]:
                    lhs = coarse_par(singleton_embed_task(a), singleton_embed_task(b))
                    rhs = singleton_embed_task(relcore.par_compose(a, b))
                    yield lhs.pairs == rhs.pairs, lambda l=lhs, r=rhs: (
                        ("par",), _render_pairs(l.pairs), _render_pairs(r.pairs)
                    )
        for x in bases:
            lhs = coarse_identity(singleton_embed_object(x))
            rhs = singleton_embed_task(relcore.identity(x))
            yield lhs.pairs == rhs.pairs, lambda l=lhs, r=rhs: (
                ("identity",), _render_pairs(l.pairs), _render_pairs(r.pairs)
            )
        for x, y in itertools.product(bases, repeat=2):
            lhs = coarse_swap(singleton_embed_object(x), singleton_embed_object(y))
            rhs = singleton_embed_task(relcore.swap(x, y))
            yield lhs.pairs == rhs.pairs, lambda l=lhs, r=rhs: (
                ("swap",), _render_pairs(l.pairs), _render_pairs(r.pairs)
            )

    def lax_biconditional():
        for x, y in itertools.product(bases, repeat=2):
            attrs_x = list(enumerate_attributes(x, budget))
            attrs_y = list(enumerate_attributes(y, budget))
            for a in rels[(x, x)]:
                succ_a = {}
                for p, q in a.pairs:
                    succ_a.setdefault(p, set()).add(q)
                for b in rels[(y, y)]:
                    succ_b = {}
                    for p, q in b.pairs:
                        succ_b.setdefault(p, set()).add(q)
                    for s in attrs_x:
                        for u in attrs_x:
                            left = all(
                                succ_a.get(e, frozenset()) & u.members for e in s.members
                            )
                            for t in attrs_y:
                                for v in attrs_y:
                                    right = left and all(
                                        succ_b.get(e, frozenset()) & v.members
                                        for e in t.members
                                    )
                                    joint = all(
                                        any(
                                            (p in succ_a.get(e1, frozenset()))
                                            and (q in succ_b.get(e2, frozenset()))
                                            for p in u.members
                                            for q in v.members
                                        )
                                        for e1 in s.members
                                        for e2 in t.members
                                    )
                                    if right and not joint:
                                        ok = False
                                    elif joint and not right and s.members and t.members:
                                        ok = False
                                    else:
                                        ok = True
                                    yield ok, lambda s=s, t=t, u=u, v=v, j=joint, r=right: (
                                        (
                                            f"S={s.format()} T={t.format()} "
                                            f"U={u.format()} V={v.format()}",
                                        ),
                                        f"joint {j}",
                                        f"factors {r}",
                                    )

    def support_invariance():
        for x, y in itertools.product(bases, repeat=2):
            for xb in chains[x]:
                for yb in chains[y]:
                    for a in rels[(x, y)]:
                        cut = restrict_to_support(a, xb, yb)
                        lhs = coarse_grain(cut, xb, yb).pairs
                        rhs = coarse_grain(a, xb, yb).pairs
                        dropped_ok = cut.pairs <= a.pairs
                        yield (lhs == rhs and dropped_ok), lambda a=a, c=cut, l=lhs, r=rhs: (
                            (f"A = {a.format()}", f"cut = {c.format()}"),
                            _render_pairs(l),
                            _render_pairs(r),
                        )

    def task_roundtrip():
        for x, y in itertools.product(bases, repeat=2):
            for xb in chains[x]:
                for yb in chains[y]:
                    for a in rels[(x, y)]:
                        f = coarse_grain(a, xb, yb)
                        back = coarse_task_from_task(coarse_task_as_task(f), xb, yb)
                        yield (back.pairs == f.pairs and back.dom == f.dom
                               and back.cod == f.cod), lambda f=f, b=back: (
                            (f.format(),), _render_pairs(b.pairs), _render_pairs(f.pairs)
                        )

    return [
        _run_check("coarse-identity-antichain", identity_biconditional()),
        _run_check("coarse-seq-containment", seq_containment()),
        _run_check("coarse-par-factor", par_factor_formula()),
        _run_check("coarse-swap-coherence", swap_coherence()),
        _run_check("coarse-singleton-functor", singleton_functor()),
        _run_check("coarse-lax-biconditional", lax_biconditional()),
        _run_check("coarse-support-invariance", support_invariance()),
        _run_check("coarse-task-roundtrip", task_roundtrip()),
    ]


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def antichain_to_json(xbar: Antichain) -> dict:
    return {
        "base": relcore.object_to_json(xbar.base),
        "attributes": [
            [list(m) for m in a.sorted_members] for a in xbar.sorted_attributes
        ],
    }


def coarse_task_to_json(f: CoarseTask) -> dict:
    return {
        "dom": antichain_to_json(f.dom),
        "cod": antichain_to_json(f.cod),
        "pairs": [
            [
                [list(m) for m in s.sorted_members],
                [list(m) for m in t.sorted_members],
            ]
            for s, t in f.sorted_pairs
        ],
    }
