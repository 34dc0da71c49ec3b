"""Terms, formulas, signatures, substitution, negation moves, fragments.

Formulas are immutable trees. Conjunction and disjunction take finite child
lists of any width, including 0 and 1; quantifiers bind nonempty duplicate-free
variable tuples. Signatures are purely relational (constants, no function
symbols). Formula equality and hashing go through `canonical_form`, so sets of
formulas identify a formula with any reordering of its And/Or children but
never across a renaming of bound variables.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class CaptureError(Exception):
    """Substitution would move a variable into the scope of a binder for it."""


class PoolExhausted(Exception):
    """The variable pool cannot supply a fresh variable required by a fragment."""


def valid_ident(name: object) -> bool:
    return isinstance(name, str) and bool(_IDENT.match(name))


def _require_ident(name: object, what: str) -> str:
    if not valid_ident(name):
        raise ValueError(f"{what} must be an identifier, got {name!r}")
    return name  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# terms

@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self) -> None:
        _require_ident(self.name, "variable name")

    def key(self) -> str:
        return f"v:{self.name}"


@dataclass(frozen=True)
class Const:
    name: str

    def __post_init__(self) -> None:
        _require_ident(self.name, "constant name")

    def key(self) -> str:
        return f"k:{self.name}"


Term = Var | Const


def is_term(obj: object) -> bool:
    return isinstance(obj, (Var, Const))


# ---------------------------------------------------------------------------
# formulas

class Formula:
    """Base class; subclasses set _key (canonical string) and _free."""

    _key: str
    _free: frozenset[str]

    def key(self) -> str:
        return self._key

    def free_vars(self) -> frozenset[str]:
        return self._free

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Formula) and self._key == other._key

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self._key}>"


def _seal(node: Formula, key: str, free: frozenset[str]) -> None:
    object.__setattr__(node, "_key", key)
    object.__setattr__(node, "_free", free)


@dataclass(frozen=True, eq=False, repr=False)
class Atom(Formula):
    rel: str
    args: tuple[Term, ...]

    def __post_init__(self) -> None:
        _require_ident(self.rel, "relation name")
        object.__setattr__(self, "args", tuple(self.args))
        for a in self.args:
            if not is_term(a):
                raise ValueError(f"atom argument is not a term: {a!r}")
        key = f"(r {self.rel} {' '.join(a.key() for a in self.args)})"
        free = frozenset(a.name for a in self.args if isinstance(a, Var))
        _seal(self, key, free)


@dataclass(frozen=True, eq=False, repr=False)
class Eq(Formula):
    left: Term
    right: Term

    def __post_init__(self) -> None:
        if not (is_term(self.left) and is_term(self.right)):
            raise ValueError("equality sides must be terms")
        key = f"(= {self.left.key()} {self.right.key()})"
        free = frozenset(
            t.name for t in (self.left, self.right) if isinstance(t, Var)
        )
        _seal(self, key, free)


@dataclass(frozen=True, eq=False, repr=False)
class Not(Formula):
    body: Formula

    def __post_init__(self) -> None:
        if not isinstance(self.body, Formula):
            raise ValueError("negation body must be a formula")
        _seal(self, f"(n {self.body.key()})", self.body.free_vars())


def _gate_children(children: object) -> tuple[Formula, ...]:
    out = tuple(children)  # type: ignore[arg-type]
    for c in out:
        if not isinstance(c, Formula):
            raise ValueError(f"connective child is not a formula: {c!r}")
    return out


@dataclass(frozen=True, eq=False, repr=False)
class And(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", _gate_children(self.children))
        keys = sorted(c.key() for c in self.children)
        free = frozenset().union(*(c.free_vars() for c in self.children)) \
            if self.children else frozenset()
        _seal(self, f"(c {' '.join(keys)})", free)


@dataclass(frozen=True, eq=False, repr=False)
class Or(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", _gate_children(self.children))
        keys = sorted(c.key() for c in self.children)
        free = frozenset().union(*(c.free_vars() for c in self.children)) \
            if self.children else frozenset()
        _seal(self, f"(d {' '.join(keys)})", free)


def _gate_binder(vars_: object, body: object) -> tuple[str, ...]:
    vs = tuple(vars_)  # type: ignore[arg-type]
    if not vs:
        raise ValueError("quantifier needs at least one variable")
    if len(set(vs)) != len(vs):
        raise ValueError(f"duplicate bound variables: {vs}")
    for v in vs:
        _require_ident(v, "bound variable")
    if not isinstance(body, Formula):
        raise ValueError("quantifier body must be a formula")
    return vs


@dataclass(frozen=True, eq=False, repr=False)
class Forall(Formula):
    vars: tuple[str, ...]
    body: Formula

    def __post_init__(self) -> None:
        vs = _gate_binder(self.vars, self.body)
        object.__setattr__(self, "vars", vs)
        _seal(self, f"(a {','.join(vs)} {self.body.key()})",
              self.body.free_vars() - set(vs))


@dataclass(frozen=True, eq=False, repr=False)
class Exists(Formula):
    vars: tuple[str, ...]
    body: Formula

    def __post_init__(self) -> None:
        vs = _gate_binder(self.vars, self.body)
        object.__setattr__(self, "vars", vs)
        _seal(self, f"(e {','.join(vs)} {self.body.key()})",
              self.body.free_vars() - set(vs))


def canonical_form(f: Formula) -> bytes:
    """Deterministic byte serialization; And/Or children sorted by their own
    canonical forms, bound variable names kept verbatim."""
    return f.key().encode("utf-8")


def is_sentence(f: Formula) -> bool:
    return not f.free_vars()


# ---------------------------------------------------------------------------
# signatures

@dataclass(frozen=True)
class Signature:
    relations: tuple[tuple[str, int], ...]
    constants: tuple[str, ...]

    def __post_init__(self) -> None:
        rels = tuple((str(n), int(a)) for n, a in self.relations)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "constants", tuple(self.constants))
        names = [n for n, _ in rels]
        if len(set(names)) != len(names):
            raise ValueError("duplicate relation names")
        for n, a in rels:
            _require_ident(n, "relation name")
            if a < 1:
                raise ValueError(f"relation {n} must have arity >= 1, got {a}")
        if len(set(self.constants)) != len(self.constants):
            raise ValueError("duplicate constant names")
        for c in self.constants:
            _require_ident(c, "constant name")

    def arity(self, rel: str) -> int:
        for n, a in self.relations:
            if n == rel:
                return a
        raise KeyError(f"undeclared relation {rel!r}")

    def has_relation(self, rel: str) -> bool:
        return any(n == rel for n, _ in self.relations)

    def with_constants(self, extra: tuple[str, ...]) -> Signature:
        clash = set(extra) & set(self.constants)
        if clash:
            raise ValueError(f"constants already declared: {sorted(clash)}")
        return Signature(self.relations, self.constants + tuple(extra))


def validate_formula(f: Formula, sig: Signature,
                     extra_constants: frozenset[str] = frozenset()) -> None:
    """Raise ValueError if f uses undeclared relations/constants or an atom
    argument count differs from the declared arity."""
    consts = set(sig.constants) | extra_constants

    def walk(g: Formula) -> None:
        if isinstance(g, Atom):
            if not sig.has_relation(g.rel):
                raise ValueError(f"undeclared relation {g.rel!r}")
            if len(g.args) != sig.arity(g.rel):
                raise ValueError(
                    f"relation {g.rel} expects {sig.arity(g.rel)} arguments, "
                    f"got {len(g.args)}")
            for t in g.args:
                if isinstance(t, Const) and t.name not in consts:
                    raise ValueError(f"undeclared constant {t.name!r}")
        elif isinstance(g, Eq):
            for t in (g.left, g.right):
                if isinstance(t, Const) and t.name not in consts:
                    raise ValueError(f"undeclared constant {t.name!r}")
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (And, Or)):
            for c in g.children:
                walk(c)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)
        else:
            raise ValueError(f"not a formula node: {g!r}")

    walk(f)


# ---------------------------------------------------------------------------
# structural operations

def subformulas(f: Formula) -> set[Formula]:
    """f together with all descendants (canonical-form identity)."""
    out: set[Formula] = set()

    def walk(g: Formula) -> None:
        if g in out:
            return
        out.add(g)
        if isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (And, Or)):
            for c in g.children:
                walk(c)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)

    walk(f)
    return out


def substitute(f: Formula, mapping: dict[str, Term]) -> Formula:
    """Capture-checked substitution of terms for free variables.

    Raises CaptureError when a substituted term contains a variable that a
    binder in f would capture.
    """
    def sub_term(t: Term, m: dict[str, Term]) -> Term:
        if isinstance(t, Var) and t.name in m:
            return m[t.name]
        return t

    def walk(g: Formula, m: dict[str, Term]) -> Formula:
        m = {v: t for v, t in m.items() if v in g.free_vars()}
        if not m:
            return g
        if isinstance(g, Atom):
            return Atom(g.rel, tuple(sub_term(t, m) for t in g.args))
        if isinstance(g, Eq):
            return Eq(sub_term(g.left, m), sub_term(g.right, m))
        if isinstance(g, Not):
            return Not(walk(g.body, m))
        if isinstance(g, And):
            return And(tuple(walk(c, m) for c in g.children))
        if isinstance(g, Or):
            return Or(tuple(walk(c, m) for c in g.children))
        if isinstance(g, (Forall, Exists)):
            inner = {v: t for v, t in m.items() if v not in g.vars}
            for v, t in inner.items():
                if isinstance(t, Var) and t.name in g.vars:
                    raise CaptureError(
                        f"substituting {t.name} for {v} is captured by "
                        f"binder over {g.vars}")
            body = walk(g.body, inner)
            cls = Forall if isinstance(g, Forall) else Exists
            return cls(g.vars, body)
        raise ValueError(f"not a formula node: {g!r}")

    return walk(f, dict(mapping))


def replace_const(f: Formula, old: str, new: Term) -> Formula:
    """Replace every occurrence of the constant `old` by the term `new`."""
    def sub_term(t: Term) -> Term:
        return new if isinstance(t, Const) and t.name == old else t

    if isinstance(f, Atom):
        return Atom(f.rel, tuple(sub_term(t) for t in f.args))
    if isinstance(f, Eq):
        return Eq(sub_term(f.left), sub_term(f.right))
    if isinstance(f, Not):
        return Not(replace_const(f.body, old, new))
    if isinstance(f, And):
        return And(tuple(replace_const(c, old, new) for c in f.children))
    if isinstance(f, Or):
        return Or(tuple(replace_const(c, old, new) for c in f.children))
    if isinstance(f, Forall):
        if isinstance(new, Var) and new.name in f.vars:
            raise CaptureError(f"constant {old} generalized into bound {new.name}")
        return Forall(f.vars, replace_const(f.body, old, new))
    if isinstance(f, Exists):
        if isinstance(new, Var) and new.name in f.vars:
            raise CaptureError(f"constant {old} generalized into bound {new.name}")
        return Exists(f.vars, replace_const(f.body, old, new))
    raise ValueError(f"not a formula node: {f!r}")


def constants_of(f: Formula) -> frozenset[str]:
    out: set[str] = set()

    def walk(g: Formula) -> None:
        if isinstance(g, Atom):
            out.update(t.name for t in g.args if isinstance(t, Const))
        elif isinstance(g, Eq):
            out.update(t.name for t in (g.left, g.right) if isinstance(t, Const))
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (And, Or)):
            for c in g.children:
                walk(c)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)

    walk(f)
    return frozenset(out)


def all_vars(f: Formula) -> frozenset[str]:
    """Free and bound variables occurring anywhere in f."""
    out: set[str] = set(f.free_vars())

    def walk(g: Formula) -> None:
        if isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (And, Or)):
            for c in g.children:
                walk(c)
        elif isinstance(g, (Forall, Exists)):
            out.update(g.vars)
            out.update(g.body.free_vars())
            walk(g.body)

    walk(f)
    return frozenset(out)


def move_neg_inside(f: Formula) -> Formula:
    """One negation move: the dual for connectives/quantifiers, plain negation
    on atomic formulas, cancellation on a negation."""
    if isinstance(f, (Atom, Eq)):
        return Not(f)
    if isinstance(f, Not):
        return f.body
    if isinstance(f, And):
        return Or(tuple(Not(c) for c in f.children))
    if isinstance(f, Or):
        return And(tuple(Not(c) for c in f.children))
    if isinstance(f, Forall):
        return Exists(f.vars, Not(f.body))
    if isinstance(f, Exists):
        return Forall(f.vars, Not(f.body))
    raise ValueError(f"not a formula node: {f!r}")


def nnf(f: Formula) -> Formula:
    """Negation normal form: negations pushed to atomic formulas."""
    if isinstance(f, (Atom, Eq)):
        return f
    if isinstance(f, Not):
        if isinstance(f.body, (Atom, Eq)):
            return f
        return nnf(move_neg_inside(f.body))
    if isinstance(f, And):
        return And(tuple(nnf(c) for c in f.children))
    if isinstance(f, Or):
        return Or(tuple(nnf(c) for c in f.children))
    if isinstance(f, Forall):
        return Forall(f.vars, nnf(f.body))
    if isinstance(f, Exists):
        return Exists(f.vars, nnf(f.body))
    raise ValueError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# fragments

@dataclass(frozen=True)
class Fragment:
    signature: Signature
    formulas: frozenset[Formula]
    variables: tuple[str, ...]
    constants: tuple[str, ...]


def build_fragment(signature: Signature, seed: list[Formula] | set[Formula],
                   variables: list[str], constants: list[str],
                   bound: int) -> tuple[Fragment, bool]:
    """Close the seed under the fragment operations for at most `bound`
    generations. Returns the fragment and whether a fixpoint was reached.

    Closure per generation: single negation; negation move; subformulas;
    binary and/or of any pair; renaming a free variable to an unused pool
    variable; substituting a pool constant for a free variable; generalizing a
    constant to an unused pool variable; single-variable forall/exists over
    pool variables. Each seed formula must leave some pool variable unused,
    else PoolExhausted.
    """
    var_pool = tuple(dict.fromkeys(variables))
    const_pool = tuple(dict.fromkeys(constants))
    if bound < 0:
        raise ValueError("generation bound must be >= 0")

    seed_set = set(seed)
    for f in seed_set:
        if not any(v not in all_vars(f) for v in var_pool):
            raise PoolExhausted(
                f"no pool variable avoids {f!r}; pool={list(var_pool)}")

    current: set[Formula] = set(seed_set)
    reached = not current  # the empty set is vacuously closed
    for _ in range(bound):
        fresh: set[Formula] = set()
        members = sorted(current, key=lambda g: g.key())
        for f in members:
            fresh.add(Not(f))
            fresh.add(move_neg_inside(f))
            fresh.update(subformulas(f))
            used = all_vars(f)
            spare = [w for w in var_pool if w not in used]
            for v in sorted(f.free_vars()):
                for w in spare:
                    fresh.add(substitute(f, {v: Var(w)}))
                for c in const_pool:
                    fresh.add(substitute(f, {v: Const(c)}))
            for c in sorted(constants_of(f)):
                for w in spare:
                    fresh.add(replace_const(f, c, Var(w)))
            for v in var_pool:
                fresh.add(Forall((v,), f))
                fresh.add(Exists((v,), f))
        for f, g in itertools.combinations_with_replacement(members, 2):
            fresh.add(And((f, g)))
            fresh.add(Or((f, g)))
        if fresh <= current:
            reached = True
            break
        current |= fresh
    return Fragment(signature, frozenset(current), var_pool, const_pool), reached
