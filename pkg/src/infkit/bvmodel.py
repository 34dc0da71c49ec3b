"""Boolean-valued models: validity axioms, evaluation, mixing, fullness, and
bounded exhaustive satisfiability search.

A model assigns every pair of domain elements an algebra value for equality
and every relation tuple a value, subject to the equality axioms (reflexivity
at one, symmetry, the triangle inequality) and the substitution inequality
for relations. Evaluation maps negation to complement, conjunction to inf,
disjunction to sup, and quantifiers to inf/sup over domain tuples.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .boolalg import FinBooleanAlgebra, powerset_algebra
from .syntax import (
    And, Atom, Const, Eq, Exists, Forall, Formula, Not, Or, Signature, Term,
    Var,
)


class UnboundVariable(Exception):
    """A free variable had no assignment during evaluation."""


class ShapeError(Exception):
    """An operation was applied to a formula of the wrong shape."""


@dataclass(frozen=True, eq=False)
class BValuedModel:
    signature: Signature
    algebra: FinBooleanAlgebra
    domain: tuple[str, ...]
    eq: dict = field(default_factory=dict)          # (m, n) -> element
    relations: dict = field(default_factory=dict)   # rel -> {args tuple -> element}
    constants: dict = field(default_factory=dict)   # const name -> domain member

    def __post_init__(self) -> None:
        if len(set(self.domain)) != len(self.domain):
            raise ValueError("duplicate domain elements")
        if not self.domain:
            raise ValueError("domain must be nonempty")
        alg = self.algebra
        els = set(alg.elements)
        eq = dict(self.eq)
        for m in self.domain:
            for n in self.domain:
                if (m, n) not in eq:
                    eq[(m, n)] = alg.one if m == n else alg.zero
                if eq[(m, n)] not in els:
                    raise ValueError(f"eq value for {(m, n)} not in the algebra")
        for (m, n) in eq:
            if m not in self.domain or n not in self.domain:
                raise ValueError(f"eq entry {(m, n)} outside the domain")
        object.__setattr__(self, "eq", eq)
        rels = {}
        declared = dict(self.signature.relations)
        for rel, table in self.relations.items():
            if rel not in declared:
                raise ValueError(f"undeclared relation {rel!r}")
            for args, v in table.items():
                if len(args) != declared[rel]:
                    raise ValueError(f"bad tuple length for {rel}: {args}")
                if any(a not in self.domain for a in args):
                    raise ValueError(f"tuple {args} outside the domain")
                if v not in els:
                    raise ValueError(f"value for {rel}{args} not in the algebra")
            rels[rel] = dict(table)
        for rel, arity in declared.items():
            table = rels.setdefault(rel, {})
            for args in itertools.product(self.domain, repeat=arity):
                table.setdefault(args, alg.zero)
        object.__setattr__(self, "relations", rels)
        consts = dict(self.constants)
        for c in self.signature.constants:
            if c not in consts:
                raise ValueError(f"constant {c!r} has no interpretation")
        for c, m in consts.items():
            if m not in self.domain:
                raise ValueError(f"constant {c!r} interpreted outside the domain")
        object.__setattr__(self, "constants", consts)

    def eq_value(self, m: str, n: str):
        return self.eq[(m, n)]

    def rel_value(self, rel: str, args: tuple):
        return self.relations[rel][args]

    def with_self_named_constants(self, names: Iterable[str]) -> BValuedModel:
        """Extend the signature with constants that name domain elements
        (each name must be a domain element and not already a constant)."""
        names = tuple(names)
        for m in names:
            if m not in self.domain:
                raise ValueError(f"{m!r} is not a domain element")
        sig = self.signature.with_constants(names)
        consts = dict(self.constants)
        consts.update({m: m for m in names})
        return BValuedModel(sig, self.algebra, self.domain, self.eq,
                            self.relations, consts)


def term_value(model: BValuedModel, t: Term, assignment: dict[str, str]) -> str:
    if isinstance(t, Var):
        if t.name not in assignment:
            raise UnboundVariable(f"no assignment for variable {t.name}")
        return assignment[t.name]
    if t.name not in model.constants:
        raise ValueError(f"constant {t.name!r} has no interpretation")
    return model.constants[t.name]


def eval_formula(model: BValuedModel, f: Formula,
                 assignment: dict[str, str] | None = None):
    """Inductive Boolean value of f under the assignment."""
    alg = model.algebra
    a = assignment or {}

    def ev(g: Formula, env: dict[str, str]):
        if isinstance(g, Atom):
            args = tuple(term_value(model, t, env) for t in g.args)
            return model.rel_value(g.rel, args)
        if isinstance(g, Eq):
            return model.eq_value(term_value(model, g.left, env),
                                  term_value(model, g.right, env))
        if isinstance(g, Not):
            return alg.comp(ev(g.body, env))
        if isinstance(g, And):
            return alg.inf(ev(c, env) for c in g.children)
        if isinstance(g, Or):
            return alg.sup(ev(c, env) for c in g.children)
        if isinstance(g, (Forall, Exists)):
            vals = []
            for tup in itertools.product(model.domain, repeat=len(g.vars)):
                env2 = dict(env)
                env2.update(zip(g.vars, tup))
                vals.append(ev(g.body, env2))
            return alg.inf(vals) if isinstance(g, Forall) else alg.sup(vals)
        raise ValueError(f"not a formula node: {g!r}")

    return ev(f, dict(a))


# ---------------------------------------------------------------------------
# validity

def check_model(model: BValuedModel) -> dict:
    """Equality axioms and the substitution inequality, checked exhaustively.
    Returns {"ok": bool, "violations": [...]}."""
    alg = model.algebra
    dom = model.domain
    violations: list[dict] = []

    for m in dom:
        if model.eq_value(m, m) != alg.one:
            violations.append({"axiom": "reflexivity", "args": [m]})
        for n in dom:
            if model.eq_value(m, n) != model.eq_value(n, m):
                violations.append({"axiom": "symmetry", "args": [m, n]})
            for p in dom:
                lhs = alg.meet(model.eq_value(m, n), model.eq_value(n, p))
                if not alg.leq(lhs, model.eq_value(m, p)):
                    violations.append({"axiom": "triangle", "args": [m, n, p]})

    for rel, arity in model.signature.relations:
        for told in itertools.product(dom, repeat=arity):
            for tnew in itertools.product(dom, repeat=arity):
                agree = alg.inf(model.eq_value(a, b)
                                for a, b in zip(told, tnew))
                lhs = alg.meet(agree, model.rel_value(rel, told))
                if not alg.leq(lhs, model.rel_value(rel, tnew)):
                    violations.append({
                        "axiom": "substitution", "relation": rel,
                        "args": [list(told), list(tnew)]})
    return {"ok": not violations, "violations": violations}


def check_subst_inequality(model: BValuedModel, f: Formula,
                           taus: tuple[str, ...], sigmas: tuple[str, ...],
                           variables: tuple[str, ...] | None = None) -> dict:
    """inf_i [tau_i = sigma_i] meet [f(tau)] <= [f(sigma)], the formula-level
    substitution inequality. Free variables are taken in sorted order unless
    `variables` pins the order."""
    alg = model.algebra
    vs = variables if variables is not None else tuple(sorted(f.free_vars()))
    if len(vs) != len(taus) or len(vs) != len(sigmas):
        raise ShapeError("tuple lengths do not match the variable list")
    agree = alg.inf(model.eq_value(a, b) for a, b in zip(taus, sigmas))
    lhs = alg.meet(agree, eval_formula(model, f, dict(zip(vs, taus))))
    rhs = eval_formula(model, f, dict(zip(vs, sigmas)))
    return {"ok": alg.leq(lhs, rhs), "lhs": lhs, "rhs": rhs}


# ---------------------------------------------------------------------------
# mixing and fullness

def check_mixing(model: BValuedModel) -> dict:
    """Decide the mixing property through atom refinement: the model mixes
    iff for every function g from atoms to the domain some element tau has
    atom <= [tau = g(atom)] for every atom. On failure the atoms form the
    reported antichain with targets g."""
    alg = model.algebra
    atoms = sorted(alg.atoms(), key=repr)
    for targets in itertools.product(model.domain, repeat=len(atoms)):
        hit = None
        for tau in model.domain:
            if all(alg.leq(a, model.eq_value(tau, t))
                   for a, t in zip(atoms, targets)):
                hit = tau
                break
        if hit is None:
            return {"mixing": False, "antichain": list(atoms),
                    "targets": list(targets)}
    return {"mixing": True}


def mixes_over(model: BValuedModel, antichain: list, targets: list) -> str | None:
    """First domain element mixing the given antichain/targets, or None."""
    alg = model.algebra
    for tau in model.domain:
        if all(alg.leq(a, model.eq_value(tau, t))
               for a, t in zip(antichain, targets)):
            return tau
    return None


def check_mixing_by_antichains(model: BValuedModel) -> dict:
    """Cross-check: enumerate every antichain of nonzero elements and every
    target map; exponential, for small algebras only."""
    alg = model.algebra
    nz = sorted(alg.nonzero(), key=repr)

    antichains: list[tuple] = [()]
    def extend(prefix: tuple, rest: list) -> None:
        for i, b in enumerate(rest):
            if all(alg.meet(b, a) == alg.zero for a in prefix):
                cand = prefix + (b,)
                antichains.append(cand)
                extend(cand, rest[i + 1:])
    extend((), nz)

    for chain in antichains:
        if not chain:
            continue
        for targets in itertools.product(model.domain, repeat=len(chain)):
            if mixes_over(model, list(chain), list(targets)) is None:
                return {"mixing": False, "antichain": list(chain),
                        "targets": list(targets)}
    return {"mixing": True}


def check_full(model: BValuedModel, f: Formula,
               assignment: dict[str, str] | None = None) -> dict:
    """Whether the sup defining an existential value is attained by a single
    witness tuple."""
    if not isinstance(f, Exists):
        raise ShapeError("fullness applies to an existential formula")
    alg = model.algebra
    env = dict(assignment or {})
    target = eval_formula(model, f, env)
    best = alg.zero
    for tup in itertools.product(model.domain, repeat=len(f.vars)):
        env2 = dict(env)
        env2.update(zip(f.vars, tup))
        v = eval_formula(model, f.body, env2)
        if v == target:
            return {"full": True, "witness": list(tup), "value": target}
        best = alg.join(best, v)
    return {"full": False, "value": target, "sup_of_values": best}


def existential_subformulas(f: Formula) -> list[Exists]:
    from .syntax import subformulas
    return [g for g in subformulas(f) if isinstance(g, Exists)]


def check_full_everywhere(model: BValuedModel, f: Formula) -> dict:
    """check_full for every existential subformula of f under every
    assignment of its free variables; the fullness precondition used by the
    quotient theorem."""
    failures = []
    for g in existential_subformulas(f):
        fv = sorted(g.free_vars())
        for tup in itertools.product(model.domain, repeat=len(fv)):
            r = check_full(model, g, dict(zip(fv, tup)))
            if not r["full"]:
                failures.append({"existential": g.key(), "assignment": list(tup)})
    return {"ok": not failures, "failures": failures}


# ---------------------------------------------------------------------------
# bounded satisfiability search

def _partitions(n: int) -> list[tuple[int, ...]]:
    """Restricted-growth strings: canonical encodings of set partitions of n
    items, lexicographic order."""
    out: list[tuple[int, ...]] = []

    def grow(prefix: list[int], used: int) -> None:
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for c in range(used + 1):
            prefix.append(c)
            grow(prefix, max(used, c + 1))
            prefix.pop()

    grow([], 0)
    return out


def bounded_boolean_sat(signature: Signature, sentences: list[Formula],
                        max_atoms: int = 2, max_domain: int = 3,
                        mode: str = "weak") -> dict:
    """Exhaustive search for a valid Boolean-valued witness within bounds.

    mode "weak": every sentence gets a nonzero value; mode "strong": every
    sentence gets value one. A valid model over a powerset algebra with k
    atoms decomposes into k per-atom quotient structures (an equivalence on
    the domain plus equivalence-invariant relation tables) sharing constant
    interpretations, so the search enumerates exactly those, in lexicographic
    order: domain size ascending, atom count ascending, then per-atom
    structures as nondecreasing tuples (atom relabeling pruned exactly),
    then constants. Reports {"found": True, "model": ...} for the first hit
    or {"exhausted": True} - never unsatisfiability.
    """
    if mode not in ("weak", "strong"):
        raise ValueError("mode must be 'weak' or 'strong'")
    if max_atoms < 1 or max_domain < 1:
        raise ValueError("bounds must be at least 1")
    rel_decl = tuple(signature.relations)

    for n_dom in range(1, max_domain + 1):
        domain = tuple(f"m{i}" for i in range(n_dom))
        structures = []
        for rgs in _partitions(n_dom):
            n_classes = max(rgs) + 1
            spaces = []
            for _, arity in rel_decl:
                tuples = list(itertools.product(range(n_classes), repeat=arity))
                spaces.append(_subsets_lex(tuples))
            for rel_choice in itertools.product(*spaces) if spaces else [()]:
                structures.append((rgs, tuple(rel_choice)))
        for n_atoms in range(1, max_atoms + 1):
            atom_names = tuple(f"a{i}" for i in range(n_atoms))
            for combo in itertools.combinations_with_replacement(
                    structures, n_atoms):
                for cvals in itertools.product(
                        domain, repeat=len(signature.constants)):
                    consts = dict(zip(signature.constants, cvals))
                    model = _assemble(signature, atom_names, domain,
                                      combo, consts)
                    if _witnesses(model, sentences, mode):
                        return {"found": True, "model": model,
                                "atoms": n_atoms, "domain_size": n_dom}
    return {"exhausted": True, "max_atoms": max_atoms,
            "max_domain": max_domain, "mode": mode}


def _subsets_lex(items: list) -> list[frozenset]:
    out = []
    for k in range(len(items) + 1):
        for c in itertools.combinations(items, k):
            out.append(frozenset(c))
    return out


def _assemble(signature: Signature, atom_names: tuple[str, ...],
              domain: tuple[str, ...], per_atom: tuple,
              constants: dict) -> BValuedModel:
    """Model over powerset(atom_names) whose per-atom quotients are the given
    structures; axioms (A)/(B) hold by construction."""
    alg = powerset_algebra(atom_names)
    idx = {m: i for i, m in enumerate(domain)}
    eq = {}
    for m in domain:
        for n in domain:
            eq[(m, n)] = frozenset(
                a for a, (rgs, _) in zip(atom_names, per_atom)
                if rgs[idx[m]] == rgs[idx[n]])
    relations = {}
    for r_i, (rel, arity) in enumerate(signature.relations):
        table = {}
        for args in itertools.product(domain, repeat=arity):
            table[args] = frozenset(
                a for a, (rgs, choice) in zip(atom_names, per_atom)
                if tuple(rgs[idx[x]] for x in args) in choice[r_i])
        relations[rel] = table
    return BValuedModel(signature, alg, domain, eq, relations, dict(constants))


def _witnesses(model: BValuedModel, sentences: list[Formula], mode: str) -> bool:
    alg = model.algebra
    for s in sentences:
        v = eval_formula(model, s)
        if mode == "strong" and v != alg.one:
            return False
        if mode == "weak" and v == alg.zero:
            return False
    return True
