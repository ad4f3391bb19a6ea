"""Enumerator correctness, law suite behavior, and mutation detection.

Unit tests here run with reduced budgets so they stay fast; the full default
budget is exercised once by the acceptance suite.
"""

import json
import random

import pytest

from taskrel import lawcheck, relcore
from taskrel.errors import BudgetExceeded
from taskrel.lawcheck import (
    DEFAULT_BUDGET,
    EnumerationBudget,
    enumerate_attributes,
    enumerate_relations,
    report_to_json,
    sample_relations,
    standard_atoms,
    word_objects,
)
from taskrel.relcore import UNIT, Atom, FinObject, obj

SMALL = EnumerationBudget(max_atom_size=2, max_factors=1)
TINY = EnumerationBudget(max_atom_size=1, max_factors=1)
U1 = obj(Atom("p", ("p0",)))
V2 = obj(Atom("q", ("q0", "q1")))
W3 = obj(Atom("r", ("r0", "r1", "r2")))


@pytest.fixture(scope="module")
def small_reports():
    return lawcheck.verify_all_laws(SMALL)


def test_enumerate_relations_counts():
    assert len(list(enumerate_relations(U1, U1))) == 2
    assert len(list(enumerate_relations(V2, V2))) == 16
    assert len(list(enumerate_relations(UNIT, W3))) == 8


def test_enumerate_relations_complete_and_duplicate_free():
    rels = list(enumerate_relations(V2, V2))
    assert len(set(rels)) == 16
    assert rels[0].pairs == frozenset()
    assert len(rels[-1].pairs) == 4


def test_enumerate_relations_canonical_order():
    # bit 0 is the (first dom elem, first cod elem) slot
    rels = list(enumerate_relations(V2, U1))
    assert rels[1].pairs == frozenset({(("q0",), ("p0",))})
    assert rels[2].pairs == frozenset({(("q1",), ("p0",))})
    assert rels[3].pairs == frozenset({(("q0",), ("p0",)), (("q1",), ("p0",))})


def test_enumerate_relations_budget():
    tight = EnumerationBudget(max_relations=8)
    with pytest.raises(BudgetExceeded):
        list(enumerate_relations(V2, V2, tight))


def test_enumerate_attributes_counts():
    assert len(list(enumerate_attributes(UNIT))) == 2
    assert len(list(enumerate_attributes(V2))) == 4
    assert len(list(enumerate_attributes(W3))) == 8
    with pytest.raises(BudgetExceeded):
        list(enumerate_attributes(W3, EnumerationBudget(max_relations=4)))


def test_budget_validation():
    with pytest.raises(ValueError):
        EnumerationBudget(max_atom_size=0)


def test_standard_atoms_and_words():
    atoms = standard_atoms(DEFAULT_BUDGET)
    assert [a.name for a in atoms] == ["u", "v"]
    assert atoms[1].elements == ("v0", "v1")
    words = word_objects(atoms, 2)
    assert len(words) == 7
    assert words[0] == UNIT
    assert [len(w.factors) for w in words] == [0, 1, 1, 2, 2, 2, 2]


def test_all_suites_pass_at_small_budget(small_reports):
    assert len(small_reports) == 15
    for r in small_reports:
        assert r.holds, f"{r.law}: {r.counterexample}"
        assert r.instances > 0


def test_degenerate_budget_still_passes(small_reports):
    reports = lawcheck.verify_all_laws(TINY)
    assert all(r.holds for r in reports)
    by_law = {r.law: r.instances for r in reports}
    small_counts = {r.law: r.instances for r in small_reports}
    for law, n in by_law.items():
        assert n <= small_counts[law]


def test_mutated_seq_compose_fails_associativity(monkeypatch):
    def drop_min(a, b):
        succ = {}
        for y, z in b.pairs:
            succ.setdefault(y, []).append(z)
        pairs = {(x, z) for x, y in a.pairs for z in succ.get(y, ())}
        if pairs:
            pairs.discard(min(pairs, key=lambda p: (a.dom.index_of(p[0]), b.cod.index_of(p[1]))))
        return relcore.Task(a.dom, b.cod, frozenset(pairs))

    monkeypatch.setattr(relcore, "seq_compose", drop_min)
    reports = {r.law: r for r in lawcheck.verify_smc_laws(SMALL)}
    assoc = reports["seq-assoc"]
    assert not assoc.holds
    assert assoc.counterexample is not None
    assert len(assoc.counterexample.inputs) == 3
    assert assoc.counterexample.lhs != assoc.counterexample.rhs


def test_mutated_par_fails_interchange(monkeypatch):
    honest_par = relcore.par_compose

    def skewed(a, b):
        t = honest_par(a, b)
        if t.pairs:
            kept = sorted(t.pairs)[1:]
            return relcore.Task(t.dom, t.cod, frozenset(kept))
        return t

    monkeypatch.setattr(relcore, "par_compose", skewed)
    reports = {r.law: r for r in lawcheck.verify_smc_laws(SMALL)}
    assert not all(r.holds for r in reports.values())


def test_reports_deterministic_and_serializable():
    first = lawcheck.verify_all_laws(TINY)
    second = lawcheck.verify_all_laws(TINY)
    assert first == second
    a = json.dumps([report_to_json(r) for r in first], sort_keys=True)
    b = json.dumps([report_to_json(r) for r in second], sort_keys=True)
    assert a == b


def test_report_json_shape_on_failure(monkeypatch):
    monkeypatch.setattr(
        relcore, "transpose", lambda a: relcore.Task(a.cod, a.dom, frozenset())
    )
    reports = lawcheck.verify_dagger_laws(SMALL)
    failed = [r for r in reports if not r.holds]
    assert failed
    blob = report_to_json(failed[0])
    assert blob["holds"] is False
    assert set(blob["counterexample"]) == {"inputs", "lhs", "rhs"}


def test_sample_relations_above_budget():
    rng = random.Random(3)
    sampled = list(sample_relations(W3, W3, 25, rng))
    assert len(sampled) == 25
    for t in sampled:
        assert t.dom == W3 and t.cod == W3
    # seeded sampling is reproducible
    again = list(sample_relations(W3, W3, 25, random.Random(3)))
    assert sampled == again
