"""Deterministic corpus builders and seeded random generators for models,
formulas, and posets. Random models are assembled from per-atom quotient
structures, so they satisfy the validity axioms by construction.
"""
from __future__ import annotations

import itertools
import random

from .boolalg import FinPoset, powerset_algebra
from .bvmodel import BValuedModel, _partitions
from .syntax import (
    And, Atom, Const, Eq, Exists, Forall, Formula, Not, Or, Signature, Var,
)


# ---------------------------------------------------------------------------
# the four-element example

def split_signature() -> Signature:
    return Signature(relations=(), constants=("d", "c0", "c1"))


def four_element_model() -> BValuedModel:
    """Four-element algebra {0, a, comp(a), 1}; the domain is the four
    functions from the two atoms to {0,1}, named mxy for (a0 -> x, a1 -> y);
    equality of two functions is the join of the atoms where they agree.
    d is m01, c0 the constantly-0 and c1 the constantly-1 function."""
    alg = powerset_algebra(("a0", "a1"))
    dom = ("m00", "m01", "m10", "m11")

    def bits(m: str) -> tuple[str, str]:
        return m[1], m[2]

    eq = {}
    for m in dom:
        for n in dom:
            eq[(m, n)] = frozenset(
                a for a, x, y in zip(("a0", "a1"), bits(m), bits(n)) if x == y)
    return BValuedModel(split_signature(), alg, dom, eq, {},
                        {"d": "m01", "c0": "m00", "c1": "m11"})


def three_element_nonmixing_model() -> BValuedModel:
    """The four-element model with the domain cut to {m00, m11, m01}; the
    atom-indexed targets (m11 at a0, m00 at a1) have no mixing element."""
    full = four_element_model()
    dom = ("m00", "m11", "m01")
    eq = {(m, n): full.eq_value(m, n) for m in dom for n in dom}
    return BValuedModel(split_signature(), full.algebra, dom, eq, {},
                        {"d": "m01", "c0": "m00", "c1": "m11"})


def split_constant_theory() -> list[Formula]:
    d, c0, c1 = Const("d"), Const("c0"), Const("c1")
    return [
        Or((Eq(d, c0), Eq(d, c1))),
        Not(Eq(c0, c1)),
        Not(Eq(d, c0)),
        Not(Eq(d, c1)),
    ]


def unattained_sup_formula() -> Formula:
    """On the three-element model: exists v not(v = d) has value one, but no
    single element attains it."""
    return Exists(("v0",), Not(Eq(Var("v0"), Const("d"))))


# ---------------------------------------------------------------------------
# deterministic model pool

def pool_signature() -> Signature:
    return Signature(relations=(("R", 1), ("Q", 2)), constants=("e0", "e1"))


def _assemble_pool_model(sig: Signature, n_atoms: int, n_dom: int,
                         variant: int) -> BValuedModel:
    """One deterministic model: per-atom partitions and relation tables are
    chosen by cycling through the canonical enumerations with stride
    `variant`, so different variants give genuinely different models."""
    atoms = tuple(f"a{i}" for i in range(n_atoms))
    dom = tuple(f"m{i}" for i in range(n_dom))
    parts = _partitions(n_dom)
    per_atom = []
    for i in range(n_atoms):
        rgs = parts[(variant * (i + 2) + i) % len(parts)]
        n_classes = max(rgs) + 1
        un = frozenset((c,) for c in range(n_classes)
                       if (c + variant + i) % 2 == 0)
        bi = frozenset(t for t in itertools.product(range(n_classes), repeat=2)
                       if (t[0] + 2 * t[1] + variant + i) % 3 == 0)
        per_atom.append((rgs, (un, bi)))
    idx = {m: i for i, m in enumerate(dom)}
    eq = {}
    for m in dom:
        for n in dom:
            eq[(m, n)] = frozenset(
                a for a, (rgs, _) in zip(atoms, per_atom)
                if rgs[idx[m]] == rgs[idx[n]])
    relations = {"R": {}, "Q": {}}
    for args in itertools.product(dom, repeat=1):
        relations["R"][args] = frozenset(
            a for a, (rgs, (un, _)) in zip(atoms, per_atom)
            if (rgs[idx[args[0]]],) in un)
    for args in itertools.product(dom, repeat=2):
        relations["Q"][args] = frozenset(
            a for a, (rgs, (_, bi)) in zip(atoms, per_atom)
            if (rgs[idx[args[0]]], rgs[idx[args[1]]]) in bi)
    consts = {"e0": dom[0], "e1": dom[min(1, n_dom - 1) if variant % 2 else 0]}
    return BValuedModel(sig, powerset_algebra(atoms), dom, eq, relations,
                        consts)


def model_pool() -> list[BValuedModel]:
    """Deterministic pool over pool_signature(): algebras with 1..3 atoms,
    domains with 1..3 elements, two variants each."""
    sig = pool_signature()
    out = []
    for n_atoms in (1, 2, 3):
        for n_dom in (1, 2, 3):
            for variant in (0, 1):
                out.append(_assemble_pool_model(sig, n_atoms, n_dom, variant))
    return out


def formula_pool(max_depth: int = 3) -> list[Formula]:
    """Deterministic formulas over pool_signature(), depth at most 3,
    at most two free variables (v0, v1)."""
    v0, v1 = Var("v0"), Var("v1")
    e0, e1 = Const("e0"), Const("e1")
    r_v0 = Atom("R", (v0,))
    r_e0 = Atom("R", (e0,))
    q_ve = Atom("Q", (v0, e1))
    q_vv = Atom("Q", (v0, v1))
    q_ee = Atom("Q", (e0, e1))
    eq_v0e0 = Eq(v0, e0)
    eq_v0v1 = Eq(v0, v1)
    depth1 = [r_v0, r_e0, q_ve, q_vv, q_ee, eq_v0e0, eq_v0v1,
              Eq(e0, e1), Atom("R", (e1,))]
    depth2 = [
        Not(r_v0), Not(q_ee), Not(eq_v0v1),
        And((r_v0, q_ve)), Or((r_e0, q_ee)), And(()), Or(()),
        And((r_v0,)), Or((eq_v0e0,)),
        Forall(("v0",), r_v0), Exists(("v0",), r_v0),
        Exists(("v0",), q_vv), Forall(("v0",), q_vv),
    ]
    depth3 = [
        Not(And((r_v0, q_ve))),
        Or((Not(r_v0), And((q_vv, eq_v0e0)))),
        Forall(("v0",), Or((r_v0, Not(r_v0)))),
        Exists(("v0",), And((r_v0, Not(eq_v0e0)))),
        Forall(("v0",), Exists(("v1",), q_vv)),
        Exists(("v0", "v1"), And((q_vv, r_v0))),
        Not(Exists(("v0",), r_v0)),
        And((Forall(("v0",), r_v0), Or((q_ee, Not(q_ee))))),
        Or((Exists(("v0",), Not(r_v0)), r_e0)),
    ]
    pool = depth1 + depth2 + depth3
    if max_depth < 3:
        pool = depth1 + (depth2 if max_depth >= 2 else [])
    return pool


# ---------------------------------------------------------------------------
# seeded random generation

def random_valid_model(rng: random.Random, sig: Signature,
                       max_atoms: int = 3, max_domain: int = 3) -> BValuedModel:
    n_atoms = rng.randint(1, max_atoms)
    n_dom = rng.randint(1, max_domain)
    atoms = tuple(f"a{i}" for i in range(n_atoms))
    dom = tuple(f"m{i}" for i in range(n_dom))
    parts = _partitions(n_dom)
    per_atom = []
    for _ in range(n_atoms):
        rgs = rng.choice(parts)
        n_classes = max(rgs) + 1
        tables = []
        for _, arity in sig.relations:
            space = list(itertools.product(range(n_classes), repeat=arity))
            tables.append(frozenset(t for t in space if rng.random() < 0.5))
        per_atom.append((rgs, tuple(tables)))
    idx = {m: i for i, m in enumerate(dom)}
    eq = {}
    for m in dom:
        for n in dom:
            eq[(m, n)] = frozenset(
                a for a, (rgs, _) in zip(atoms, per_atom)
                if rgs[idx[m]] == rgs[idx[n]])
    relations = {}
    for r_i, (rel, arity) in enumerate(sig.relations):
        table = {}
        for args in itertools.product(dom, repeat=arity):
            table[args] = frozenset(
                a for a, (rgs, tabs) in zip(atoms, per_atom)
                if tuple(rgs[idx[x]] for x in args) in tabs[r_i])
        relations[rel] = table
    consts = {c: rng.choice(dom) for c in sig.constants}
    return BValuedModel(sig, powerset_algebra(atoms), dom, eq, relations,
                        consts)


def random_formula(rng: random.Random, sig: Signature, depth: int,
                   variables: tuple[str, ...] = ("v0", "v1")) -> Formula:
    terms: list = [Var(v) for v in variables]
    terms += [Const(c) for c in sig.constants]

    def atom() -> Formula:
        choices = []
        for rel, arity in sig.relations:
            choices.append((rel, arity))
        if not choices or rng.random() < 0.3:
            return Eq(rng.choice(terms), rng.choice(terms))
        rel, arity = rng.choice(choices)
        return Atom(rel, tuple(rng.choice(terms) for _ in range(arity)))

    def build(d: int) -> Formula:
        if d <= 0:
            return atom()
        pick = rng.randrange(6)
        if pick == 0:
            return atom()
        if pick == 1:
            return Not(build(d - 1))
        if pick == 2:
            width = rng.randrange(3)
            return And(tuple(build(d - 1) for _ in range(width)))
        if pick == 3:
            width = rng.randrange(3)
            return Or(tuple(build(d - 1) for _ in range(width)))
        v = rng.choice(variables)
        body = build(d - 1)
        return Forall((v,), body) if pick == 4 else Exists((v,), body)

    return build(depth)


def infer_signature(formulas: list[Formula]) -> Signature:
    """Smallest signature declaring every relation (with its observed arity)
    and constant occurring in the formulas."""
    rels: dict[str, int] = {}
    consts: set[str] = set()

    def walk(g: Formula) -> None:
        if isinstance(g, Atom):
            if g.rel in rels and rels[g.rel] != len(g.args):
                raise ValueError(f"relation {g.rel} used at two arities")
            rels[g.rel] = len(g.args)
            consts.update(t.name for t in g.args if isinstance(t, Const))
        elif isinstance(g, Eq):
            consts.update(t.name for t in (g.left, g.right)
                          if isinstance(t, Const))
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (And, Or)):
            for c in g.children:
                walk(c)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)

    for f in formulas:
        walk(f)
    return Signature(tuple(sorted(rels.items())), tuple(sorted(consts)))


# ---------------------------------------------------------------------------
# poset enumeration

def all_labeled_posets(n: int) -> list[FinPoset]:
    """Every labeled poset on elements p0..p(n-1): each unordered pair is
    below/above/incomparable, filtered by transitivity."""
    els = tuple(f"p{i}" for i in range(n))
    if n == 0:
        return []
    pairs = list(itertools.combinations(range(n), 2))
    out = []
    for states in itertools.product((0, 1, 2), repeat=len(pairs)):
        rel = [[False] * n for _ in range(n)]
        for (i, j), s in zip(pairs, states):
            if s == 1:
                rel[i][j] = True   # i < j
            elif s == 2:
                rel[j][i] = True
        ok = True
        for i in range(n):
            for j in range(n):
                if not rel[i][j]:
                    continue
                for k in range(n):
                    if rel[j][k] and not rel[i][k]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            out.append(FinPoset(els, [(els[i], els[j])
                                      for i in range(n) for j in range(n)
                                      if rel[i][j]]))
    return out
