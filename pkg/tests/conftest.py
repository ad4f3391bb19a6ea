"""Shared fixtures: concrete gate theories and a seeded witness factory."""

import pytest

from taskrel.relcore import Atom, Attribute, Task
from taskrel.substrate import (
    ConstructorCandidate,
    Substrate,
    SubstrateAtom,
    SubstrateTheory,
    make_process,
    process_identity,
    process_par,
    process_seq,
    sub,
)

BIT = Atom("Bit", ("0", "1"))
TRIT = Atom("Trit", ("0", "1", "2"))
B = SubstrateAtom("B", BIT)
T = SubstrateAtom("T", TRIT)


def _flip(b):
    return "1" if b == "0" else "0"


@pytest.fixture(scope="session")
def bit_theory():
    bb = sub(B, B)
    not_gate = make_process("NOT", sub(B), sub(B), lambda e: (_flip(e[0]),))
    cnot = make_process(
        "CNOT", bb, bb, lambda e: (e[0], _flip(e[1]) if e[0] == "1" else e[1])
    )
    swp = make_process("SWP", bb, bb, lambda e: (e[1], e[0]))
    return SubstrateTheory((B,), (not_gate, cnot, swp), depth_bound=3)


@pytest.fixture(scope="session")
def trit_theory():
    rot = make_process("ROT", sub(T), sub(T), lambda e: (str((int(e[0]) + 1) % 3),))
    tswp = make_process("TSWP", sub(T, T), sub(T, T), lambda e: (e[1], e[0]))
    return SubstrateTheory((T,), (rot, tswp), depth_bound=3)


def random_circuit(theory, rng, boundary, layers):
    """A random layered process on the given substrate word."""
    proc = process_identity(boundary)
    for _ in range(layers):
        factors = proc.cod.factors
        pieces = []
        i = 0
        while i < len(factors):
            options = [None]
            for g in theory.generators:
                k = len(g.dom.factors)
                if k and factors[i : i + k] == g.dom.factors:
                    options.append(g)
            pick = options[rng.randrange(len(options))]
            if pick is None:
                pieces.append(process_identity(Substrate((factors[i],))))
                i += 1
            else:
                pieces.append(pick)
                i += len(pick.dom.factors)
        layer = pieces[0]
        for p in pieces[1:]:
            layer = process_par(layer, p)
        proc = process_seq(proc, layer)
    return proc


@pytest.fixture(scope="session")
def witness_factory():
    """Builds seeded (task, passing candidate) pairs over a theory.

    The allowed-state set is closed under the process dynamics so the
    survival condition holds, and the task is defined as exactly what the
    candidate produces, so the reproduction condition holds too.
    """

    def build(theory, rng, max_constructor_factors=2, max_layers=3):
        h = Substrate((theory.atoms[rng.randrange(len(theory.atoms))],))
        n = rng.randrange(max_constructor_factors + 1)
        c = Substrate(tuple(theory.atoms[rng.randrange(len(theory.atoms))] for _ in range(n)))
        proc = random_circuit(theory, rng, h * c, rng.randrange(1, max_layers + 1))
        nk = len(h.factors)

        gammas = c.gamma.elements
        seed = {g for g in gammas if rng.random() < 0.5}
        if not seed:
            seed = {gammas[rng.randrange(len(gammas))]}
        members = set(seed)
        grew = True
        while grew:
            grew = False
            for gamma in list(members):
                for rho in h.gamma.elements:
                    landed = proc.as_dict[rho + gamma][nk:]
                    if landed not in members:
                        members.add(landed)
                        grew = True

        states = Attribute(c.gamma, frozenset(members))
        pairs = {
            (rho, proc.as_dict[rho + gamma][:nk])
            for rho in h.gamma.elements
            for gamma in members
        }
        task = Task(h.gamma, h.gamma, frozenset(pairs))
        return task, ConstructorCandidate(c, states, proc)

    return build


DSL_ENV_SRC = """
set Bit = {0, 1}
set Tri = {a, b, c}
rel f : Bit -> Bit = { 0 |-> 1, 1 |-> 0, 1 |-> 1 }
rel g : Bit -> Tri = { 0 |-> a, 1 |-> b, 1 |-> c }
rel h : Tri -> Bit = { a |-> 0, c |-> 1 }
rel w : Bit * Tri -> Bit = { (0,a) |-> 0, (1,b) |-> 1, (1,c) |-> 0 }
attr p on Bit = { 1 }
attr q on Tri = { a, b }
"""


@pytest.fixture(scope="session")
def dsl_env():
    from taskrel.dsl import parse, resolve

    return resolve(parse(DSL_ENV_SRC, "<env>"))


@pytest.fixture(scope="session")
def typed_term_factory(dsl_env):
    """Grow a pool of well-typed terms paired with the task each denotes."""
    from taskrel import relcore
    from taskrel.dsl import (
        AttributeTerm,
        NamedTerm,
        ObjExpr,
        ParTerm,
        SeqTerm,
        StructuralTerm,
        TransposeTerm,
    )

    bit = ObjExpr(("Bit",))
    tri = ObjExpr(("Tri",))

    def seeds():
        pool = [
            (NamedTerm(name), dsl_env.relations[name]) for name in ("f", "g", "h", "w")
        ]
        for kind, args in [
            ("id", (bit,)), ("id", (tri,)), ("swap", (bit, tri)),
            ("copy", (bit,)), ("discard", (tri,)), ("match", (bit,)),
            ("unit", (bit,)),
        ]:
            term = StructuralTerm(kind, args)
            pool.append((term, dsl_env.evaluate_term(term)))
        for kind, attr in [("state", "p"), ("test", "q")]:
            term = AttributeTerm(kind, attr)
            pool.append((term, dsl_env.evaluate_term(term)))
        return pool

    def build(rng, rounds=40):
        pool = seeds()
        for _ in range(rounds):
            op = rng.choice(("seq", "par", "transpose"))
            if op == "transpose":
                term, val = rng.choice(pool)
                pool.append((TransposeTerm(term), relcore.transpose(val)))
            elif op == "par":
                (lt, lv), (rt, rv) = rng.choice(pool), rng.choice(pool)
                pool.append((ParTerm(lt, rt), relcore.par_compose(lv, rv)))
            else:
                lt, lv = rng.choice(pool)
                fits = [(t, v) for t, v in pool if v.dom == lv.cod]
                if not fits:
                    continue
                rt, rv = rng.choice(fits)
                pool.append((SeqTerm(lt, rt), relcore.seq_compose(lv, rv)))
        return pool

    return build
