"""Model construction from a consistency property over the regular-open
algebra of its forcing poset, the two inequalities that drive it, and the
reverse direction: the positivity family of a finite Boolean algebra with its
dense embedding and the roundtrip isomorphism.

The built model's domain is the constant set itself; every atomic sentence
(equality included) gets the join of the regular-open neighborhoods of the
conditions containing it.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .boolalg import (
    FinBooleanAlgebra, FinPoset, TrivialAlgebra, ro_completion,
)
from .bvmodel import BValuedModel, check_mixing, check_model, eval_formula
from .consprop import (
    ConsistencyProperty, cp_from_model, check_cp, enumerate_members,
    forcing_poset_conditions, maximal_members, MEMBER_CAP,
)
from .syntax import (
    And, Atom, Const, Eq, Exists, Forall, Formula, Not, Or, Signature, Var,
)


def _pkey(f: Formula) -> str:
    return f.key()


def _member_key(m: frozenset) -> tuple:
    return tuple(sorted(f.key() for f in m))


@dataclass(frozen=True)
class ConditionAlgebra:
    """RO completion of the forcing poset restricted below a root."""
    root: frozenset
    conditions: tuple[frozenset, ...]
    poset: FinPoset
    algebra: FinBooleanAlgebra
    embedding: dict                    # condition -> regular-open element

    def l_value(self, f: Formula):
        """Join of Reg(N_t) over the conditions t containing the sentence."""
        return self.algebra.sup(
            self.embedding[t] for t in self.conditions if f in t)


def condition_algebra(cp: ConsistencyProperty,
                      root: frozenset = frozenset(),
                      cap: int = MEMBER_CAP) -> ConditionAlgebra:
    conds = forcing_poset_conditions(cp, root, cap)
    if not conds:
        raise ValueError("the root is not a condition of the forcing poset")
    pairs = [(p, q) for p in conds for q in conds if q <= p]
    poset = FinPoset(conds, pairs)
    algebra, emb = ro_completion(poset)
    return ConditionAlgebra(root=root, conditions=tuple(conds), poset=poset,
                            algebra=algebra, embedding=emb)


def mansfield_build(cp: ConsistencyProperty, root: frozenset = frozenset(),
                    cap: int = MEMBER_CAP, verify: bool = True) -> dict:
    """Model over the restricted regular-open algebra in which every root
    sentence holds with value one. Verifies the family first (the clauses are
    exactly what the equality-axiom and root-validity checks consume) and
    fails loudly on a family that is not a consistency property."""
    if verify:
        rep = check_cp(cp, cap)
        if not rep["ok"]:
            raise ValueError(
                f"the family is not a consistency property; first violation: "
                f"{rep['violations'][0]}")
    ca = condition_algebra(cp, root, cap)
    consts = cp.all_constants()
    sig = cp.extended_signature()
    eq = {}
    for x in consts:
        for y in consts:
            eq[(x, y)] = ca.l_value(Eq(Const(x), Const(y)))
    relations = {}
    for rel, arity in sig.relations:
        table = {}
        for args in itertools.product(consts, repeat=arity):
            table[args] = ca.l_value(Atom(rel, tuple(Const(a) for a in args)))
        relations[rel] = table
    model = BValuedModel(signature=sig, algebra=ca.algebra, domain=consts,
                         eq=eq, relations=relations,
                         constants={c: c for c in consts})
    root_values = {f.key(): eval_formula(model, f) for f in sorted(root,
                                                                   key=_pkey)}
    out = {
        "model": model,
        "conditions": ca,
        "root_values": root_values,
        "root_ok": all(v == ca.algebra.one for v in root_values.values()),
    }
    if verify:
        out["model_report"] = check_model(model)
    return out


def verify_claim1(cp: ConsistencyProperty, root: frozenset = frozenset(),
                  cap: int = MEMBER_CAP,
                  ca: ConditionAlgebra | None = None) -> dict:
    """Whenever every condition extending s accepts the sentence, the
    regular-open neighborhood of s sits below the sentence's join."""
    ca = ca if ca is not None else condition_algebra(cp, root, cap)
    cond_set = set(ca.conditions)
    checked = skipped = 0
    failures = []
    lvals = {f: ca.l_value(f) for f in cp.pool}
    for s in ca.conditions:
        exts = [t for t in ca.conditions if s <= t]
        for f in cp.pool:
            if all(t | {f} in cond_set for t in exts):
                checked += 1
                if not ca.algebra.leq(ca.embedding[s], lvals[f]):
                    failures.append({"condition": _member_key(s),
                                     "sentence": f.key()})
            else:
                skipped += 1
    return {"ok": not failures, "checked": checked, "skipped": skipped,
            "failures": failures}


def verify_claim2(cp: ConsistencyProperty, root: frozenset = frozenset(),
                  pool: tuple[Formula, ...] | None = None,
                  cap: int = MEMBER_CAP, built: dict | None = None) -> dict:
    """The join over conditions never exceeds the model value, sentence by
    sentence."""
    built = built if built is not None else mansfield_build(
        cp, root, cap, verify=False)
    ca = built["conditions"]
    model = built["model"]
    pool = pool if pool is not None else cp.pool
    failures = []
    for f in pool:
        lv = ca.l_value(f)
        mv = eval_formula(model, f)
        if not ca.algebra.leq(lv, mv):
            failures.append({"sentence": f.key(),
                             "l_value": sorted(map(repr, lv)),
                             "model_value": sorted(map(repr, mv))})
    return {"ok": not failures, "checked": len(pool), "failures": failures}


def meet_identity_holds(ca: ConditionAlgebra, f: Formula, g: Formula) -> bool:
    """L(f) meet L(g) equals the join of Reg(N_q) over conditions holding
    both sentences."""
    lhs = ca.algebra.meet(ca.l_value(f), ca.l_value(g))
    rhs = ca.algebra.sup(ca.embedding[q] for q in ca.conditions
                         if f in q and g in q)
    return lhs == rhs


def mixing_report(built: dict) -> dict:
    """Mixing check on a built model; the construction does not promise it."""
    return check_mixing(built["model"])


# ---------------------------------------------------------------------------
# the reverse direction: a family from a finite Boolean algebra

def _element_names(alg: FinBooleanAlgebra) -> dict:
    def skey(e):
        if isinstance(e, frozenset):
            return (0, len(e), tuple(sorted(map(repr, e))))
        return (1, 0, (repr(e),))
    ordered = sorted(alg.elements, key=skey)
    return {e: f"e{i}" for i, e in enumerate(ordered)}


def algebra_model(alg: FinBooleanAlgebra) -> tuple[BValuedModel, dict]:
    """The canonical membership model of an algebra: one domain element per
    algebra element, a single unary relation whose value at the element named
    after b is b itself, crisp equality."""
    if alg.zero == alg.one:
        raise TrivialAlgebra("the algebra has zero equal to one")
    names = _element_names(alg)
    domain = tuple(names[e] for e in sorted(alg.elements,
                                            key=lambda e: names[e]))
    sig = Signature(relations=(("inG", 1),), constants=())
    rel = {(names[e],): e for e in alg.elements}
    model = BValuedModel(signature=sig, algebra=alg, domain=domain,
                         eq={}, relations={"inG": rel}, constants={})
    return model, names


def sb_pool(alg: FinBooleanAlgebra, names: dict) -> tuple[Formula, ...]:
    """Membership atoms for every element, one negated atom, the disjunction
    over the atoms' names, an existential, and a universal tautology."""
    atoms = sorted(alg.atoms(), key=lambda e: names[e])
    ing = {e: Atom("inG", (Const(names[e]),)) for e in alg.elements}
    pool = [ing[e] for e in sorted(alg.elements, key=lambda e: names[e])]
    pool.append(Not(ing[atoms[0]]))
    pool.append(Or(tuple(ing[a] for a in atoms)))
    v = Var("v0")
    pool.append(Exists(("v0",), Atom("inG", (v,))))
    pool.append(Forall(("v0",), Or((Atom("inG", (v,)),
                                    Not(Atom("inG", (v,)))))))
    seen = set()
    out = []
    for f in pool:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return tuple(out)


def cp_from_algebra(alg: FinBooleanAlgebra, sample_limit: int = 400,
                    seed: int = 0) -> tuple[ConsistencyProperty, dict, dict]:
    """The positivity family of the membership model, the valuation map on
    its members, and the dense-embedding report: order preservation,
    incompatibility agreement, and surjectivity onto the nonzero elements
    through the singleton conditions. Pair checks are exhaustive up to
    sample_limit members, seeded-random samples beyond."""
    model, names = algebra_model(alg)
    pool = sb_pool(alg, names)
    cp = cp_from_model(model, pool)
    members = enumerate_members(cp)
    named = cp.meta["model"]
    zero = alg.zero

    def value(s: frozenset):
        return alg.inf(eval_formula(named, f) for f in s)

    pi = {s: value(s) for s in members}

    order_failures = []
    incomp_failures = []
    if len(members) <= sample_limit:
        pairs = itertools.combinations(range(len(members)), 2)
        pair_mode = "exhaustive"
    else:
        rng = random.Random(seed)
        pairs = [(rng.randrange(len(members)), rng.randrange(len(members)))
                 for _ in range(4 * sample_limit)]
        pair_mode = "sampled"
    for i, j in pairs:
        p, q = members[i], members[j]
        # order: p below q in the poset means q is a subset of p
        if q <= p and not alg.leq(pi[p], pi[q]):
            order_failures.append((_member_key(p), _member_key(q)))
        if p <= q and not alg.leq(pi[q], pi[p]):
            order_failures.append((_member_key(q), _member_key(p)))
        compatible = cp.is_member(p | q)
        if compatible != (alg.meet(pi[p], pi[q]) != zero):
            incomp_failures.append((_member_key(p), _member_key(q)))

    surj_failures = []
    ing_value = {}
    for e in alg.elements:
        f = Atom("inG", (Const(names[e]),))
        ing_value[e] = eval_formula(named, f)
        if e != zero:
            s = frozenset({f})
            if not cp.is_member(s) or value(s) != e:
                surj_failures.append(names[e])

    report = {
        "ok": not (order_failures or incomp_failures or surj_failures),
        "members": len(members),
        "pair_mode": pair_mode,
        "order_failures": order_failures,
        "incompatibility_failures": incomp_failures,
        "surjectivity_failures": surj_failures,
    }
    return cp, pi, report


def roundtrip_check(alg: FinBooleanAlgebra, materialize_limit: int = 200,
                    cap: int = MEMBER_CAP) -> dict:
    """The forcing poset of the algebra's positivity family completes back to
    the algebra itself: the maximal members biject with the atoms, subsets of
    the maximal-member set map isomorphically onto the algebra by joining
    atoms, and that map carries each condition's regular-open neighborhood to
    the condition's valuation. Small posets are additionally materialized and
    completed explicitly."""
    cp, pi, _ = cp_from_algebra(alg)
    members = enumerate_members(cp, cap)
    named = cp.meta["model"]
    atoms = sorted(alg.atoms(), key=lambda e: sorted(map(repr, e))
                   if isinstance(e, frozenset) else repr(e))
    by_atom = {}
    for a in atoms:
        by_atom[a] = frozenset(
            f for f in cp.pool if alg.leq(a, eval_formula(named, f)))
    member_set = set(members)
    maxes = set(maximal_members(cp, frozenset(), cap))
    max_match = (
        set(by_atom.values()) == maxes
        and len(by_atom) == len(set(by_atom.values()))
        and all(m in member_set for m in by_atom.values()))

    def h(subset: frozenset):
        return alg.sup(a for a in atoms if by_atom[a] in subset)

    atom_sets = [frozenset(s) for k in range(len(atoms) + 1)
                 for s in itertools.combinations(
                     sorted(by_atom.values(), key=_member_key), k)]
    images = [h(s) for s in atom_sets]
    h_bijective = len(set(images)) == len(images) \
        and set(images) == set(alg.elements)
    h_hom = all(
        alg.meet(h(s), h(t)) == h(s & t)
        and alg.join(h(s), h(t)) == h(s | t)
        for s in atom_sets for t in atom_sets) and all(
        alg.comp(h(s)) == h(frozenset(by_atom.values()) - s)
        for s in atom_sets)

    reg_matches = all(
        h(frozenset(m for m in by_atom.values() if s <= m)) == pi[s]
        for s in members)

    materialized = False
    ro_size = None
    if len(members) <= materialize_limit:
        pairs = [(p, q) for p in members for q in members if q <= p]
        poset = FinPoset(members, pairs)
        ro_alg, emb = ro_completion(poset)
        ro_size = len(ro_alg.elements)
        materialized = True
        max_match = max_match and set(poset.minimals()) == maxes
        # minimal conditions inside Reg(N_s) are exactly those containing s
        reg_matches = reg_matches and ro_size == len(alg.elements) and all(
            h(frozenset(m for m in by_atom.values() if m in emb[s]))
            == pi[s]
            for s in members)

    ok = max_match and h_bijective and h_hom and reg_matches
    return {"ok": ok, "atoms": len(atoms), "members": len(members),
            "maximal_members_match": max_match, "h_bijective": h_bijective,
            "h_homomorphism": h_hom, "reg_matches_pi": reg_matches,
            "materialized": materialized, "ro_size": ro_size,
            "algebra_size": len(alg.elements)}
