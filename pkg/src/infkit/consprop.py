"""Consistency properties at desk scale: clause checking against a declared
finite sentence pool, maximality, forcing posets over the family, dense sets,
generic filters, and the term structure realized by a generic filter.

A family is either an explicit finite list of finite sentence sets or a
membership oracle with a declared pool. Oracle families must be closed under
subsets (the eval-positivity oracles produced here are); they are enumerated
as the accepted pool-subsets, depth-first with antitone pruning and a hard
cap. Sentences that a clause adds are looked up in explicit families (a miss
outside the pool is a PoolIncomplete finding) and simply evaluated through
the oracle otherwise.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .bvmodel import BValuedModel, eval_formula
from .syntax import (
    And, Atom, Const, Eq, Exists, Forall, Formula, Not, Or, Signature,
    is_sentence, move_neg_inside, subformulas, substitute,
)


class PoolIncomplete(Exception):
    """A clause referenced a sentence outside the declared pool."""


class IllDefined(Exception):
    """The term structure's classes or relations are not well defined."""


MEMBER_CAP = 300_000


@dataclass(frozen=True, eq=False)
class ConsistencyProperty:
    signature: Signature
    fresh_constants: tuple[str, ...]
    pool: tuple[Formula, ...]
    family: tuple[frozenset, ...] | None = None
    oracle: Callable[[frozenset], bool] | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if (self.family is None) == (self.oracle is None):
            raise ValueError("exactly one of family/oracle must be given")
        for c in self.fresh_constants:
            if c in self.signature.constants:
                raise ValueError(f"fresh constant {c!r} already in signature")
        for s in self.pool:
            if not is_sentence(s):
                raise ValueError(f"pool entry has free variables: {s!r}")
        if self.family is not None:
            object.__setattr__(
                self, "family",
                tuple(frozenset(m) for m in self.family))

    @property
    def explicit(self) -> bool:
        return self.family is not None

    def all_constants(self) -> tuple[str, ...]:
        return tuple(self.signature.constants) + tuple(self.fresh_constants)

    def extended_signature(self) -> Signature:
        return self.signature.with_constants(self.fresh_constants)

    def is_member(self, s: frozenset) -> bool:
        if self.family is not None:
            return s in set(self.family)
        return bool(self.oracle(s))

    def in_pool(self, f: Formula) -> bool:
        return f in set(self.pool)


def _pkey(f: Formula) -> str:
    return f.key()


def _member_key(m: frozenset) -> tuple:
    return tuple(sorted(f.key() for f in m))


def enumerate_members(cp: ConsistencyProperty,
                      cap: int = MEMBER_CAP) -> list[frozenset]:
    """Family members. Oracle families are enumerated depth-first over the
    pool; the pruning is exact because the oracles built here are antitone
    (membership closed under subsets)."""
    if cp.family is not None:
        return list(cp.family)
    pool = sorted(cp.pool, key=_pkey)
    out: list[frozenset] = []

    def dfs(current: frozenset, start: int) -> None:
        out.append(current)
        if len(out) > cap:
            raise RuntimeError(
                f"oracle family exceeds the member cap ({cap}); "
                f"shrink the pool")
        for i in range(start, len(pool)):
            nxt = current | {pool[i]}
            if cp.oracle(nxt):
                dfs(nxt, i + 1)

    if cp.oracle(frozenset()):
        dfs(frozenset(), 0)
    return out


def maximal_members(cp: ConsistencyProperty, root: frozenset = frozenset(),
                    cap: int = MEMBER_CAP) -> list[frozenset]:
    """Inclusion-maximal members extending the root; these are the minimal
    conditions of the forcing poset below the root. Oracle families are
    subset-closed, so maximality reduces to single-sentence extensions."""
    sup = [m for m in enumerate_members(cp, cap) if root <= m]
    if cp.family is not None:
        out = [m for m in sup if not any(m < other for other in sup)]
    else:
        pool = set(cp.pool)
        out = [m for m in sup
               if not any(cp.oracle(m | {f}) for f in pool - m)]
    return sorted(out, key=_member_key)


# ---------------------------------------------------------------------------
# default pool closure

POOL_CAP = 20_000


def default_pool(signature: Signature, fresh_constants: tuple[str, ...],
                 seeds: Iterable[Formula]) -> tuple[Formula, ...]:
    """Sentences needed to check the clauses on families seeded by `seeds`:
    closure under subformulas, the negation move on negated sentences,
    constant instantiation of quantified sentences, constant-for-constant
    replacement (the substitution clause), plus every equality sentence over
    the constants."""
    consts = tuple(signature.constants) + tuple(fresh_constants)
    work = list(seeds)
    seen: set[Formula] = set()
    while work:
        f = work.pop()
        if f in seen:
            continue
        seen.add(f)
        if len(seen) > POOL_CAP:
            raise RuntimeError(f"pool closure exceeds {POOL_CAP} formulas")
        for g in subformulas(f):
            if g not in seen:
                work.append(g)
        if isinstance(f, Not):
            work.append(move_neg_inside(f.body))
        if isinstance(f, (Forall, Exists)) and not (f.free_vars()):
            for tup in itertools.product(consts, repeat=len(f.vars)):
                work.append(substitute(
                    f.body, {v: Const(c) for v, c in zip(f.vars, tup)}))
        for old in sorted(_constants_in(f)):
            for new in consts:
                if new != old:
                    g = _replace_all(f, old, new)
                    if g not in seen:
                        work.append(g)
    pool = {f for f in seen if is_sentence(f)}
    for c in consts:
        for d in consts:
            pool.add(Eq(Const(c), Const(d)))
    return tuple(sorted(pool, key=_pkey))


def _constants_in(f: Formula) -> frozenset[str]:
    from .syntax import constants_of
    return constants_of(f)


def _replace_all(f: Formula, old: str, new: str) -> Formula:
    from .syntax import replace_const
    return replace_const(f, old, Const(new))


def occurrence_variants(f: Formula, old: str, new: str) -> set[Formula]:
    """Every formula obtained by replacing a nonempty subset of occurrences
    of the constant `old` by the constant `new`."""
    def term_alts(t):
        if isinstance(t, Const) and t.name == old:
            return [t, Const(new)]
        return [t]

    def walk(g: Formula) -> list[Formula]:
        if isinstance(g, Atom):
            return [Atom(g.rel, args) for args in
                    itertools.product(*(term_alts(t) for t in g.args))]
        if isinstance(g, Eq):
            return [Eq(l, r) for l in term_alts(g.left)
                    for r in term_alts(g.right)]
        if isinstance(g, Not):
            return [Not(b) for b in walk(g.body)]
        if isinstance(g, And):
            return [And(ch) for ch in
                    itertools.product(*(walk(c) for c in g.children))] \
                if g.children else [g]
        if isinstance(g, Or):
            return [Or(ch) for ch in
                    itertools.product(*(walk(c) for c in g.children))] \
                if g.children else [g]
        if isinstance(g, Forall):
            return [Forall(g.vars, b) for b in walk(g.body)]
        if isinstance(g, Exists):
            return [Exists(g.vars, b) for b in walk(g.body)]
        raise ValueError(f"not a formula node: {g!r}")

    return set(walk(f)) - {f}


# ---------------------------------------------------------------------------
# clause checking

def _try_extension(cp: ConsistencyProperty, s: frozenset, add: Formula,
                   clause: str, violations: list, require: bool) -> bool:
    """Check s union {add} for membership. For explicit families a sentence
    outside the pool cannot be a member; when `require` is set that is
    recorded as a PoolIncomplete finding, otherwise the candidate just fails.
    Returns membership."""
    if cp.explicit and not cp.in_pool(add) and add not in s:
        if require:
            violations.append({
                "clause": clause, "kind": "PoolIncomplete",
                "member": _member_key(s), "missing": add.key()})
        return False
    ok = cp.is_member(s | {add})
    if require and not ok:
        violations.append({
            "clause": clause, "kind": "violation",
            "member": _member_key(s), "needed": add.key()})
    return ok


def _undecidable(cp: ConsistencyProperty, s: frozenset, add: Formula) -> bool:
    """An explicit family cannot decide membership of a sentence outside its
    pool; existential clauses report such candidates as pool gaps."""
    return cp.explicit and not cp.in_pool(add) and add not in s


def _miss(cp: ConsistencyProperty, s: frozenset, clause: str,
          candidates: list[Formula], violations: list, **extra) -> None:
    """Record a failed some-candidate clause: a hard violation when every
    candidate was decidable, a PoolIncomplete finding otherwise."""
    gaps = [c.key() for c in candidates if _undecidable(cp, s, c)]
    entry = {"clause": clause, "member": _member_key(s), **extra}
    if gaps:
        entry.update(kind="PoolIncomplete", missing=sorted(gaps))
    else:
        entry.update(kind="violation")
    violations.append(entry)


def check_cp(cp: ConsistencyProperty, cap: int = MEMBER_CAP) -> dict:
    """Check every consistency-property clause on every family member.
    Returns {"ok", "family_size", "violations": [...]}; violation entries
    carry the clause tag, the offending member, and what was required."""
    violations: list[dict] = []
    members = enumerate_members(cp, cap)
    consts = cp.all_constants()
    fresh = cp.fresh_constants
    pool_set = set(cp.pool)

    if cp.explicit:
        for m in members:
            for f in m:
                if f not in pool_set:
                    violations.append({
                        "clause": "pool", "kind": "PoolIncomplete",
                        "member": _member_key(m), "missing": f.key()})

    for s in members:
        # (Con): no sentence together with its negation
        for f in s:
            if isinstance(f, Not) and f.body in s:
                violations.append({
                    "clause": "Con", "kind": "violation",
                    "member": _member_key(s), "needed": f.body.key()})
        for f in s:
            if isinstance(f, Not):
                # (Ind.1): the negation move stays in the family
                _try_extension(cp, s, move_neg_inside(f.body), "Ind.1",
                               violations, require=True)
            elif isinstance(f, And):
                # (Ind.2): every conjunct
                for child in f.children:
                    _try_extension(cp, s, child, "Ind.2", violations,
                                   require=True)
            elif isinstance(f, Forall):
                # (Ind.3): every constant instance
                for tup in itertools.product(consts, repeat=len(f.vars)):
                    inst = substitute(
                        f.body, {v: Const(c) for v, c in zip(f.vars, tup)})
                    _try_extension(cp, s, inst, "Ind.3", violations,
                                   require=True)
            elif isinstance(f, Or):
                # (Ind.4): some disjunct
                if not any(_try_extension(cp, s, child, "Ind.4", violations,
                                          require=False)
                           for child in f.children):
                    _miss(cp, s, "Ind.4", list(f.children), violations,
                          sentence=f.key())
            elif isinstance(f, Exists):
                # (Ind.5): some witness tuple from the fresh constants
                insts = [
                    substitute(f.body,
                               {v: Const(c) for v, c in zip(f.vars, tup)})
                    for tup in itertools.product(fresh, repeat=len(f.vars))]
                if not any(_try_extension(cp, s, inst, "Ind.5", violations,
                                          require=False) for inst in insts):
                    _miss(cp, s, "Ind.5", insts, violations,
                          sentence=f.key())
            if isinstance(f, Eq) and isinstance(f.left, Const) \
                    and isinstance(f.right, Const):
                c, d = f.left.name, f.right.name
                # (Str.1): symmetry
                _try_extension(cp, s, Eq(f.right, f.left), "Str.1",
                               violations, require=True)
                # (Str.2): substitution into any co-member, any occurrences
                if c != d:
                    for psi in s:
                        for variant in occurrence_variants(psi, d, c):
                            _try_extension(cp, s, variant, "Str.2",
                                           violations, require=True)
        # (Str.3): every constant is named by some fresh constant; the
        # diagonal witness is overwhelmingly the cheap hit, try it first
        for d in consts:
            order = ([d] if d in fresh else []) + \
                [c for c in fresh if c != d]
            hit = False
            for c in order:
                if _try_extension(cp, s, Eq(Const(c), Const(d)), "Str.3",
                                  violations, require=False):
                    hit = True
                    break
            if not hit:
                _miss(cp, s, "Str.3",
                      [Eq(Const(c), Const(d)) for c in order], violations,
                      constant=d)

    return {"ok": not violations, "family_size": len(members),
            "violations": violations}


def check_smax(cp: ConsistencyProperty, cap: int = MEMBER_CAP) -> dict:
    """Maximality: every member extends by each pool sentence or by its
    literal negation."""
    violations = []
    members = enumerate_members(cp, cap)
    for s in members:
        for f in cp.pool:
            pos = _try_extension(cp, s, f, "S-Max", [], require=False)
            neg = _try_extension(cp, s, Not(f), "S-Max", [], require=False)
            if not (pos or neg):
                _miss(cp, s, "S-Max", [f, Not(f)], violations,
                      sentence=f.key())
    return {"ok": not violations, "family_size": len(members),
            "violations": violations}


# ---------------------------------------------------------------------------
# families from models

def cp_from_model(model: BValuedModel, pool: Iterable[Formula] | None = None,
                  seeds: Iterable[Formula] = ()) -> ConsistencyProperty:
    """The positivity family of a valid model: the fresh constants are the
    domain elements naming themselves, and a finite sentence set is a member
    exactly when its conjunction has nonzero value."""
    named = model.with_self_named_constants(model.domain)
    zero = named.algebra.zero
    memo: dict[Formula, object] = {}
    set_memo: dict[frozenset, bool] = {}

    def value(f: Formula):
        v = memo.get(f)
        if v is None:
            v = eval_formula(named, f)
            memo[f] = v
        return v

    def oracle(s: frozenset) -> bool:
        r = set_memo.get(s)
        if r is None:
            r = named.algebra.inf(value(f) for f in s) != zero
            set_memo[s] = r
        return r

    if pool is None:
        pool = default_pool(model.signature, tuple(model.domain), list(seeds))
    return ConsistencyProperty(
        signature=model.signature,
        fresh_constants=tuple(model.domain),
        pool=tuple(pool),
        oracle=oracle,
        meta={"kind": "model-positivity", "model": named})


def convert_to_explicit(cp: ConsistencyProperty,
                        cap: int = MEMBER_CAP) -> ConsistencyProperty:
    return ConsistencyProperty(
        signature=cp.signature, fresh_constants=cp.fresh_constants,
        pool=cp.pool, family=tuple(enumerate_members(cp, cap)),
        meta=dict(cp.meta))


# ---------------------------------------------------------------------------
# forcing poset, dense sets, generic filters

def forcing_poset_conditions(cp: ConsistencyProperty,
                             root: frozenset = frozenset(),
                             cap: int = MEMBER_CAP) -> list[frozenset]:
    """All conditions extending the root: subsets of family members that
    contain the root (the forcing order is reverse inclusion)."""
    out: set[frozenset] = set()
    for m in maximal_members(cp, root, cap):
        rest = sorted(m - root, key=_pkey)
        for k in range(len(rest) + 1):
            for combo in itertools.combinations(rest, k):
                out.add(root | frozenset(combo))
                if len(out) > cap:
                    raise RuntimeError("condition count exceeds the cap")
    return sorted(out, key=_member_key)


def forcing_poset(cp: ConsistencyProperty, root: frozenset = frozenset(),
                  cap: int = MEMBER_CAP):
    """The forcing poset of conditions extending the root, ordered by reverse
    inclusion (p below q exactly when p is the larger set)."""
    from .boolalg import FinPoset
    conds = forcing_poset_conditions(cp, root, cap)
    pairs = [(p, q) for p in conds for q in conds if q <= p]
    return FinPoset(conds, pairs)


def dense_sets(cp: ConsistencyProperty, cap: int = MEMBER_CAP) -> list[dict]:
    """The dense-set roster: one set per disjunctive pool sentence (a
    condition extends by some disjunct), one per existential pool sentence
    (extends by some fresh-constant instance), one per base constant d (some
    fresh c with c=d). Density below a condition containing the trigger is
    decided on the maximal members, which is equivalent at finite scale."""
    maxes = maximal_members(cp, frozenset(), cap)
    out = []
    for f in cp.pool:
        if isinstance(f, Or):
            holders = [m for m in maxes if f in m]
            dense = all(any(ch in m for ch in f.children) for m in holders)
            out.append({"kind": "disjunction", "sentence": f,
                        "dense_below_holders": dense,
                        "holders": len(holders)})
        elif isinstance(f, Exists):
            holders = [m for m in maxes if f in m]
            insts = [substitute(f.body,
                                {v: Const(c) for v, c in zip(f.vars, tup)})
                     for tup in itertools.product(cp.fresh_constants,
                                                  repeat=len(f.vars))]
            dense = all(any(i in m for i in insts) for m in holders)
            out.append({"kind": "existential", "sentence": f,
                        "dense_below_holders": dense,
                        "holders": len(holders)})
    for d in cp.signature.constants:
        eqs = [Eq(Const(c), Const(d)) for c in cp.fresh_constants]
        dense = all(any(e in m for e in eqs) for m in maxes)
        out.append({"kind": "constant", "constant": d,
                    "dense_globally": dense})
    return out


@dataclass(frozen=True)
class GenericFilter:
    root: frozenset
    minimum: frozenset                 # the chosen minimal condition
    members: tuple[frozenset, ...]     # the up-set: all subsets of minimum
    sigma: frozenset                   # union of the filter
    dense_report: tuple = ()

    def finite_subsets_equal_members(self) -> bool:
        n = len(self.sigma)
        return len(self.members) == 2 ** n and \
            all(m <= self.sigma for m in self.members)


def _dense_triggers(cp: ConsistencyProperty, entry: dict):
    """(guard, triggers): the dense set is dense below a condition when every
    maximal member above it containing the guard contains a trigger; a filter
    meets it when its union contains a trigger."""
    if entry["kind"] == "disjunction":
        f = entry["sentence"]
        return f, tuple(f.children)
    if entry["kind"] == "existential":
        f = entry["sentence"]
        insts = tuple(
            substitute(f.body, {v: Const(c) for v, c in zip(f.vars, tup)})
            for tup in itertools.product(cp.fresh_constants,
                                         repeat=len(f.vars)))
        return f, insts
    d = entry["constant"]
    return None, tuple(Eq(Const(c), Const(d)) for c in cp.fresh_constants)


def generic_filter(cp: ConsistencyProperty, root: frozenset = frozenset(),
                   cap: int = MEMBER_CAP) -> GenericFilter:
    """The up-set of the lexicographically least minimal condition below the
    root (any condition of the forcing poset). Verified to meet every emitted
    dense set that is dense below the root; satisfies members == finite
    subsets of sigma by construction."""
    maxes = maximal_members(cp, root, cap)
    if not maxes:
        raise ValueError("the root is not a condition of the forcing poset")
    minimum = maxes[0]  # maximal_members sorts canonically
    rest = sorted(minimum, key=_pkey)
    members = []
    for k in range(len(rest) + 1):
        for combo in itertools.combinations(rest, k):
            members.append(frozenset(combo))
    report = []
    for entry in dense_sets(cp, cap):
        guard, triggers = _dense_triggers(cp, entry)
        dense_below_root = all(
            (guard is not None and guard not in m)
            or any(t in m for t in triggers)
            for m in maxes)
        met = any(t in minimum for t in triggers)
        name = entry["constant"] if entry["kind"] == "constant" \
            else entry["sentence"].key()
        report.append({"kind": entry["kind"], "name": name,
                       "dense_below_root": dense_below_root, "met": met})
        if dense_below_root and not met:
            raise AssertionError(
                f"minimal condition misses a dense set: {name}")
    gf = GenericFilter(root=root, minimum=minimum, members=tuple(members),
                       sigma=minimum, dense_report=tuple(report))
    assert gf.finite_subsets_equal_members()
    return gf


# ---------------------------------------------------------------------------
# the realized term structure

@dataclass(frozen=True)
class TermModel:
    signature: Signature               # extended: base + fresh constants
    classes: tuple[frozenset, ...]     # classes of constants
    reps: tuple[str, ...]
    relations: dict                    # rel -> frozenset of rep tuples
    constants: dict                    # every constant -> its rep

    def rep_of(self, c: str) -> str:
        return self.constants[c]

    def to_two_valued_model(self) -> BValuedModel:
        from .boolalg import two_valued_algebra
        alg = two_valued_algebra()
        rels = {}
        for rel, arity in self.signature.relations:
            table = {}
            for args in itertools.product(self.reps, repeat=arity):
                table[args] = alg.one if args in self.relations.get(
                    rel, frozenset()) else alg.zero
            rels[rel] = table
        return BValuedModel(self.signature, alg, self.reps, {}, rels,
                            dict(self.constants))


def build_af(cp: ConsistencyProperty, sigma: frozenset) -> TermModel:
    """Classes of the constants under the equalities found in sigma (with
    reflexive-symmetric-transitive closure), relations holding when some
    representative's positive atomic sentence lies in sigma. Raises
    IllDefined when sigma contains conflicting positive and negative facts
    across class-equal tuples."""
    consts = cp.all_constants()
    parent = {c: c for c in consts}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: str, b: str) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            lo, hi = sorted((ra, rb))
            parent[hi] = lo

    eq_pos = []
    eq_neg = []
    rel_pos = []
    rel_neg = []
    for f in sigma:
        if isinstance(f, Eq) and isinstance(f.left, Const) \
                and isinstance(f.right, Const):
            eq_pos.append((f.left.name, f.right.name))
        elif isinstance(f, Not) and isinstance(f.body, Eq) \
                and isinstance(f.body.left, Const) \
                and isinstance(f.body.right, Const):
            eq_neg.append((f.body.left.name, f.body.right.name))
        elif isinstance(f, Atom) and all(isinstance(t, Const)
                                         for t in f.args):
            rel_pos.append((f.rel, tuple(t.name for t in f.args)))
        elif isinstance(f, Not) and isinstance(f.body, Atom) \
                and all(isinstance(t, Const) for t in f.body.args):
            rel_neg.append((f.body.rel, tuple(t.name for t in f.body.args)))
    for a, b in eq_pos:
        if a not in parent or b not in parent:
            raise ValueError(f"equality over undeclared constants: {a}={b}")
        union(a, b)
    for a, b in eq_neg:
        if find(a) == find(b):
            raise IllDefined(
                f"sigma denies {a}={b} but their classes coincide")
    classes_map: dict[str, set[str]] = {}
    for c in consts:
        classes_map.setdefault(find(c), set()).add(c)
    classes = tuple(sorted((frozenset(v) for v in classes_map.values()),
                           key=min))
    reps = tuple(min(c) for c in classes)
    constants = {c: find(c) for c in consts}

    relations: dict[str, set] = {r: set() for r, _ in cp.signature.relations}
    for rel, args in rel_pos:
        relations[rel].add(tuple(find(a) for a in args))
    for rel, args in rel_neg:
        reptup = tuple(find(a) for a in args)
        if reptup in relations[rel]:
            raise IllDefined(
                f"sigma both asserts and denies {rel} on class tuple {reptup}")
    return TermModel(cp.extended_signature(), classes, reps,
                     {r: frozenset(v) for r, v in relations.items()},
                     constants)


def verify_realizes(term_model: TermModel, sigma: frozenset) -> dict:
    """Two-valued satisfaction of every sigma sentence in the term structure."""
    model = term_model.to_two_valued_model()
    one = model.algebra.one
    failures = []
    for f in sorted(sigma, key=_pkey):
        if eval_formula(model, f) != one:
            failures.append(f.key())
    return {"ok": not failures, "failures": failures,
            "checked": len(sigma)}


def check_kappa_omega_iff(cp: ConsistencyProperty,
                          gf: GenericFilter | None = None,
                          root: frozenset = frozenset(),
                          cap: int = MEMBER_CAP) -> dict:
    """On a maximal family: for every pool sentence, the term structure
    satisfies it exactly when it lies in sigma."""
    if gf is None:
        gf = generic_filter(cp, root, cap)
    tm = build_af(cp, gf.sigma)
    model = tm.to_two_valued_model()
    one = model.algebra.one
    failures = []
    for f in cp.pool:
        sat = eval_formula(model, f) == one
        member = f in gf.sigma
        if sat != member:
            failures.append({"sentence": f.key(), "satisfied": sat,
                             "in_sigma": member})
    return {"ok": not failures, "checked": len(cp.pool),
            "failures": failures}
