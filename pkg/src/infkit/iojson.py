"""JSON wire formats for every object the command line reads or writes.

Parsing is strict: every function takes the decoded JSON value plus a path
string and raises ParseError naming the faulty location. Emission is
canonical (sorted object keys, two-space indent, formula lists ordered by
canonical form, trailing newline) so emit(parse(x)) is byte-stable and file
diffs stay meaningful.
"""
from __future__ import annotations

import json
from typing import Any, Callable, NoReturn

from .boolalg import FinBooleanAlgebra, FinPoset, powerset_algebra, \
    ro_completion, table_algebra
from .bvmodel import BValuedModel
from .calculus import Proof, Sequent, Step, RULES
from .consprop import ConsistencyProperty, default_pool
from .syntax import And, Atom, Const, Eq, Exists, Forall, Formula, Not, Or, \
    Signature, Term, Var, is_sentence, validate_formula


class ParseError(Exception):
    """Malformed or inconsistent input; the message starts with a $.path."""


def _fail(path: str, msg: str) -> NoReturn:
    raise ParseError(f"{path}: {msg}")


def _obj(x: Any, path: str) -> dict:
    if not isinstance(x, dict):
        _fail(path, f"expected an object, got {type(x).__name__}")
    return x


def _arr(x: Any, path: str) -> list:
    if not isinstance(x, list):
        _fail(path, f"expected an array, got {type(x).__name__}")
    return x


def _str(x: Any, path: str) -> str:
    if not isinstance(x, str):
        _fail(path, f"expected a string, got {type(x).__name__}")
    return x


def _int(x: Any, path: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        _fail(path, f"expected an integer, got {type(x).__name__}")
    return x


def _get(d: dict, key: str, path: str) -> Any:
    if key not in d:
        _fail(path, f"missing required key {key!r}")
    return d[key]


def _reject_extras(d: dict, allowed: set[str], path: str) -> None:
    extras = sorted(set(d) - allowed)
    if extras:
        _fail(path, f"unknown keys {extras}; allowed: {sorted(allowed)}")


# ---------------------------------------------------------------------------
# terms and formulas

def parse_term(x: Any, path: str = "$") -> Term:
    d = _obj(x, path)
    if len(d) != 1:
        _fail(path, "a term has exactly one key, 'var' or 'const'")
    key, val = next(iter(d.items()))
    name = _str(val, f"{path}.{key}")
    try:
        if key == "var":
            return Var(name)
        if key == "const":
            return Const(name)
    except ValueError as exc:
        _fail(f"{path}.{key}", str(exc))
    _fail(path, f"unknown term kind {key!r}")


def emit_term(t: Term) -> dict:
    if isinstance(t, Var):
        return {"var": t.name}
    if isinstance(t, Const):
        return {"const": t.name}
    raise ValueError(f"not a term: {t!r}")


_FORMULA_KEYS = ("atom", "eq", "not", "and", "or", "forall", "exists")


def parse_formula(x: Any, path: str = "$") -> Formula:
    d = _obj(x, path)
    if len(d) != 1 or next(iter(d)) not in _FORMULA_KEYS:
        _fail(path, f"a formula has exactly one key among {_FORMULA_KEYS}")
    kind, val = next(iter(d.items()))
    here = f"{path}.{kind}"
    try:
        if kind == "atom":
            a = _obj(val, here)
            _reject_extras(a, {"rel", "args"}, here)
            rel = _str(_get(a, "rel", here), f"{here}.rel")
            args = _arr(_get(a, "args", here), f"{here}.args")
            return Atom(rel, tuple(
                parse_term(t, f"{here}.args[{i}]") for i, t in enumerate(args)))
        if kind == "eq":
            pair = _arr(val, here)
            if len(pair) != 2:
                _fail(here, f"equality takes exactly two terms, got {len(pair)}")
            return Eq(parse_term(pair[0], f"{here}[0]"),
                      parse_term(pair[1], f"{here}[1]"))
        if kind == "not":
            return Not(parse_formula(val, here))
        if kind in ("and", "or"):
            kids = tuple(parse_formula(c, f"{here}[{i}]")
                         for i, c in enumerate(_arr(val, here)))
            return And(kids) if kind == "and" else Or(kids)
        # forall / exists
        b = _obj(val, here)
        _reject_extras(b, {"vars", "body"}, here)
        vars_ = _arr(_get(b, "vars", here), f"{here}.vars")
        names = tuple(_str(v, f"{here}.vars[{i}]") for i, v in enumerate(vars_))
        body = parse_formula(_get(b, "body", here), f"{here}.body")
        return Forall(names, body) if kind == "forall" else Exists(names, body)
    except ValueError as exc:
        _fail(here, str(exc))


def emit_formula(f: Formula) -> dict:
    if isinstance(f, Atom):
        return {"atom": {"rel": f.rel, "args": [emit_term(t) for t in f.args]}}
    if isinstance(f, Eq):
        return {"eq": [emit_term(f.left), emit_term(f.right)]}
    if isinstance(f, Not):
        return {"not": emit_formula(f.body)}
    if isinstance(f, (And, Or)):
        kids = [emit_formula(c)
                for c in sorted(f.children, key=lambda c: c.key())]
        return {"and" if isinstance(f, And) else "or": kids}
    if isinstance(f, (Forall, Exists)):
        body = {"vars": list(f.vars), "body": emit_formula(f.body)}
        return {"forall" if isinstance(f, Forall) else "exists": body}
    raise ValueError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# signatures

def parse_signature(x: Any, path: str = "$") -> Signature:
    d = _obj(x, path)
    _reject_extras(d, {"relations", "constants"}, path)
    rels = []
    for i, entry in enumerate(_arr(_get(d, "relations", path),
                                   f"{path}.relations")):
        here = f"{path}.relations[{i}]"
        e = _obj(entry, here)
        _reject_extras(e, {"name", "arity"}, here)
        rels.append((_str(_get(e, "name", here), f"{here}.name"),
                     _int(_get(e, "arity", here), f"{here}.arity")))
    consts = tuple(
        _str(c, f"{path}.constants[{i}]")
        for i, c in enumerate(_arr(_get(d, "constants", path),
                                   f"{path}.constants")))
    try:
        return Signature(tuple(rels), consts)
    except ValueError as exc:
        _fail(path, str(exc))


def emit_signature(sig: Signature) -> dict:
    return {
        "relations": [{"name": n, "arity": a}
                      for n, a in sorted(sig.relations)],
        "constants": sorted(sig.constants),
    }


def _validated(f: Formula, sig: Signature, path: str,
               need_sentence: bool = False) -> Formula:
    """Signature check with a path-carrying error that cites the signature."""
    if need_sentence and f.free_vars():
        _fail(path, f"expected a sentence, found free variables "
                    f"{sorted(f.free_vars())}")
    try:
        validate_formula(f, sig)
    except ValueError as exc:
        rels = ", ".join(f"{n}/{a}" for n, a in sig.relations) or "none"
        consts = ", ".join(sig.constants) or "none"
        _fail(path, f"{exc} (signature relations: {rels}; "
                    f"constants: {consts})")
    return f


# ---------------------------------------------------------------------------
# posets and algebras

def parse_poset(x: Any, path: str = "$") -> FinPoset:
    d = _obj(x, path)
    _reject_extras(d, {"elements", "leq"}, path)
    els = [_str(e, f"{path}.elements[{i}]")
           for i, e in enumerate(_arr(_get(d, "elements", path),
                                      f"{path}.elements"))]
    pairs = []
    for i, entry in enumerate(_arr(_get(d, "leq", path), f"{path}.leq")):
        here = f"{path}.leq[{i}]"
        p = _arr(entry, here)
        if len(p) != 2:
            _fail(here, "each leq entry is a pair [below, above]")
        pairs.append((_str(p[0], f"{here}[0]"), _str(p[1], f"{here}[1]")))
    try:
        return FinPoset(els, pairs)
    except ValueError as exc:
        _fail(path, str(exc))


def emit_poset(poset: FinPoset) -> dict:
    pairs = sorted((lo, hi) for lo, hi in poset.leq_pairs() if lo != hi)
    return {"elements": sorted(poset.elements),
            "leq": [[lo, hi] for lo, hi in pairs]}


def parse_algebra(x: Any, path: str = "$") -> FinBooleanAlgebra:
    d = _obj(x, path)
    kind = _str(_get(d, "type", path), f"{path}.type")
    try:
        if kind == "powerset":
            _reject_extras(d, {"type", "atoms"}, path)
            atoms = [_str(a, f"{path}.atoms[{i}]")
                     for i, a in enumerate(_arr(_get(d, "atoms", path),
                                                f"{path}.atoms"))]
            return powerset_algebra(atoms)
        if kind == "ro":
            _reject_extras(d, {"type", "poset"}, path)
            poset = parse_poset(_get(d, "poset", path), f"{path}.poset")
            return ro_completion(poset)[0]
        if kind == "table":
            _reject_extras(d, {"type", "elements", "meet", "join", "comp"},
                           path)
            els = [_str(e, f"{path}.elements[{i}]")
                   for i, e in enumerate(_arr(_get(d, "elements", path),
                                              f"{path}.elements"))]
            meet = _table_rows(_get(d, "meet", path), f"{path}.meet")
            join = _table_rows(_get(d, "join", path), f"{path}.join")
            comp = [_str(e, f"{path}.comp[{i}]")
                    for i, e in enumerate(_arr(_get(d, "comp", path),
                                               f"{path}.comp"))]
            return table_algebra(els, meet, join, comp)
    except Exception as exc:  # algebra constructors raise several kinds
        if isinstance(exc, ParseError):
            raise
        _fail(path, str(exc))
    _fail(f"{path}.type",
          f"unknown algebra type {kind!r}; expected powerset/ro/table")


def _table_rows(x: Any, path: str) -> list[list[str]]:
    rows = _arr(x, path)
    return [[_str(v, f"{path}[{i}][{j}]") for j, v in enumerate(_arr(r, f"{path}[{i}]"))]
            for i, r in enumerate(rows)]


def emit_algebra(alg: FinBooleanAlgebra) -> dict:
    if alg.kind == "powerset":
        return {"type": "powerset", "atoms": sorted(alg.meta["atoms"])}
    if alg.kind == "ro":
        poset = alg.meta["poset"]
        if all(isinstance(e, str) for e in poset.elements):
            return {"type": "ro", "poset": emit_poset(poset)}
        raise ValueError("regular-open algebra over non-identifier poset "
                         "elements; convert with as_table_algebra first")
    if alg.kind == "table":
        els = list(alg.elements)
        return {
            "type": "table",
            "elements": els,
            "meet": [[alg.meet(a, b) for b in els] for a in els],
            "join": [[alg.join(a, b) for b in els] for a in els],
            "comp": [alg.comp(a) for a in els],
        }
    raise ValueError(f"algebra kind {alg.kind!r} has no file form; "
                     "convert with as_table_algebra first")


def _skey(x: Any):
    """Deterministic sort key for algebra elements of any internal shape."""
    if isinstance(x, Formula):
        return ("f", x.key())
    if isinstance(x, frozenset):
        return ("s", tuple(sorted(_skey(y) for y in x)))
    return ("a", str(x))


def as_table_algebra(alg: FinBooleanAlgebra) -> tuple[FinBooleanAlgebra, dict]:
    """Isomorphic copy with opaque string elements b0..bN, plus the element
    map. Makes algebras with unprintable carriers (regular opens of formula
    posets, restrictions) serializable."""
    middle = sorted((e for e in alg.elements if e not in (alg.zero, alg.one)),
                    key=_skey)
    ordered = [alg.zero] + middle + ([alg.one] if alg.one != alg.zero else [])
    names = {e: f"b{i}" for i, e in enumerate(ordered)}
    els = [names[e] for e in ordered]
    meet = [[names[alg.meet(a, b)] for b in ordered] for a in ordered]
    join = [[names[alg.join(a, b)] for b in ordered] for a in ordered]
    comp = [names[alg.comp(a)] for a in ordered]
    return table_algebra(els, meet, join, comp), names


# ---------------------------------------------------------------------------
# algebra elements

def parse_element(alg: FinBooleanAlgebra, x: Any, path: str = "$"):
    if x == "0" and "0" not in alg.elements:
        return alg.zero
    if x == "1" and "1" not in alg.elements:
        return alg.one
    if isinstance(x, str):
        if x in alg.elements:
            return x
        _fail(path, f"{x!r} is not an element of the algebra")
    if isinstance(x, list):
        val = frozenset(_str(n, f"{path}[{i}]") for i, n in enumerate(x))
        if val in set(alg.elements):
            return val
        _fail(path, f"{sorted(x)} is not an element of the algebra")
    _fail(path, "an element is a sorted name list, an element name, "
                "or the alias '0'/'1'")


def emit_element(alg: FinBooleanAlgebra, val: Any):
    if val not in set(alg.elements):
        raise ValueError(f"value {val!r} is not in the algebra")
    if isinstance(val, frozenset):
        return sorted(str(v) for v in val)
    return val


# ---------------------------------------------------------------------------
# models

def parse_model(x: Any, path: str = "$") -> BValuedModel:
    d = _obj(x, path)
    _reject_extras(d, {"signature", "algebra", "domain", "eq", "relations",
                       "constants"}, path)
    sig = parse_signature(_get(d, "signature", path), f"{path}.signature")
    alg = parse_algebra(_get(d, "algebra", path), f"{path}.algebra")
    domain = tuple(
        _str(m, f"{path}.domain[{i}]")
        for i, m in enumerate(_arr(_get(d, "domain", path), f"{path}.domain")))
    eq = {}
    for i, entry in enumerate(_arr(d.get("eq", []), f"{path}.eq")):
        here = f"{path}.eq[{i}]"
        e = _obj(entry, here)
        _reject_extras(e, {"pair", "value"}, here)
        pair = _arr(_get(e, "pair", here), f"{here}.pair")
        if len(pair) != 2:
            _fail(f"{here}.pair", "expected a pair of domain members")
        key = (_str(pair[0], f"{here}.pair[0]"), _str(pair[1], f"{here}.pair[1]"))
        eq[key] = parse_element(alg, _get(e, "value", here), f"{here}.value")
    relations: dict = {}
    rels_obj = _obj(d.get("relations", {}), f"{path}.relations")
    for rel, rows in rels_obj.items():
        table = {}
        for i, entry in enumerate(_arr(rows, f"{path}.relations.{rel}")):
            here = f"{path}.relations.{rel}[{i}]"
            e = _obj(entry, here)
            _reject_extras(e, {"args", "value"}, here)
            args = tuple(
                _str(m, f"{here}.args[{j}]")
                for j, m in enumerate(_arr(_get(e, "args", here),
                                           f"{here}.args")))
            table[args] = parse_element(alg, _get(e, "value", here),
                                        f"{here}.value")
        relations[rel] = table
    consts_obj = _obj(d.get("constants", {}), f"{path}.constants")
    constants = {
        _str(c, f"{path}.constants"): _str(m, f"{path}.constants.{c}")
        for c, m in consts_obj.items()}
    try:
        return BValuedModel(sig, alg, domain, eq, relations, constants)
    except ValueError as exc:
        _fail(path, str(exc))


def emit_model(model: BValuedModel) -> dict:
    alg = model.algebra
    rename: Callable[[Any], Any] = lambda v: v
    try:
        alg_obj = emit_algebra(alg)
    except ValueError:
        table, names = as_table_algebra(alg)
        alg_obj = emit_algebra(table)
        alg, rename = table, names.__getitem__
    eq_rows = []
    for m in sorted(model.domain):
        for n in sorted(model.domain):
            val = model.eq[(m, n)]
            default = model.algebra.one if m == n else model.algebra.zero
            if val != default:
                eq_rows.append({"pair": [m, n],
                                "value": emit_element(alg, rename(val))})
    rel_obj = {}
    for rel, table in sorted(model.relations.items()):
        rows = [{"args": list(args), "value": emit_element(alg, rename(v))}
                for args, v in sorted(table.items()) if v != model.algebra.zero]
        if rows:
            rel_obj[rel] = rows
    out = {
        "signature": emit_signature(model.signature),
        "algebra": alg_obj,
        "domain": sorted(model.domain),
    }
    if eq_rows:
        out["eq"] = eq_rows
    if rel_obj:
        out["relations"] = rel_obj
    if model.constants:
        out["constants"] = dict(sorted(model.constants.items()))
    return out


# ---------------------------------------------------------------------------
# ultrafilters

def parse_ultrafilter(x: Any, alg: FinBooleanAlgebra,
                      path: str = "$") -> frozenset:
    d = _obj(x, path)
    _reject_extras(d, {"generator"}, path)
    gen = parse_element(alg, _get(d, "generator", path), f"{path}.generator")
    if gen not in alg.atoms():
        _fail(f"{path}.generator",
              "the generator of a principal ultrafilter must be an atom")
    return frozenset(b for b in alg.elements if alg.leq(gen, b))


def emit_ultrafilter(alg: FinBooleanAlgebra, uf: frozenset) -> dict:
    return {"generator": emit_element(alg, alg.inf(uf))}


# ---------------------------------------------------------------------------
# theories and formula pools

def parse_theory(x: Any, path: str = "$") -> tuple[Signature, tuple[Formula, ...]]:
    d = _obj(x, path)
    _reject_extras(d, {"signature", "sentences"}, path)
    sig = parse_signature(_get(d, "signature", path), f"{path}.signature")
    sentences = tuple(
        _validated(parse_formula(s, f"{path}.sentences[{i}]"), sig,
                   f"{path}.sentences[{i}]", need_sentence=True)
        for i, s in enumerate(_arr(_get(d, "sentences", path),
                                   f"{path}.sentences")))
    return sig, sentences


def emit_theory(theory: tuple[Signature, tuple[Formula, ...]]) -> dict:
    sig, sentences = theory
    return {"signature": emit_signature(sig),
            "sentences": [emit_formula(f)
                          for f in sorted(sentences, key=lambda f: f.key())]}


def parse_pool(x: Any, path: str = "$") -> tuple[Formula, ...]:
    d = _obj(x, path)
    _reject_extras(d, {"formulas"}, path)
    return tuple(parse_formula(f, f"{path}.formulas[{i}]")
                 for i, f in enumerate(_arr(_get(d, "formulas", path),
                                            f"{path}.formulas")))


def emit_pool(pool: tuple[Formula, ...]) -> dict:
    return {"formulas": [emit_formula(f)
                         for f in sorted(pool, key=lambda f: f.key())]}


# ---------------------------------------------------------------------------
# consistency properties

def parse_cp(x: Any, path: str = "$") -> ConsistencyProperty:
    d = _obj(x, path)
    _reject_extras(d, {"signature", "fresh_constants", "family", "pool"}, path)
    sig = parse_signature(_get(d, "signature", path), f"{path}.signature")
    fresh = tuple(
        _str(c, f"{path}.fresh_constants[{i}]")
        for i, c in enumerate(_arr(_get(d, "fresh_constants", path),
                                   f"{path}.fresh_constants")))
    try:
        wide = sig.with_constants(fresh)
    except ValueError as exc:
        _fail(f"{path}.fresh_constants", str(exc))
    family = []
    for i, member in enumerate(_arr(_get(d, "family", path), f"{path}.family")):
        sentences = frozenset(
            _validated(parse_formula(s, f"{path}.family[{i}][{j}]"), wide,
                       f"{path}.family[{i}][{j}]", need_sentence=True)
            for j, s in enumerate(_arr(member, f"{path}.family[{i}]")))
        family.append(sentences)
    if "pool" in d:
        pool = tuple(
            _validated(parse_formula(s, f"{path}.pool[{i}]"), wide,
                       f"{path}.pool[{i}]", need_sentence=True)
            for i, s in enumerate(_arr(d["pool"], f"{path}.pool")))
    else:
        seeds = [f for member in family for f in member]
        pool = default_pool(sig, fresh, seeds)
    try:
        return ConsistencyProperty(sig, fresh, pool, family=tuple(family))
    except ValueError as exc:
        _fail(path, str(exc))


def emit_cp(cp: ConsistencyProperty) -> dict:
    if cp.family is None:
        raise ValueError("only explicit families have a file form; "
                         "use convert_to_explicit first")
    members = sorted(
        (sorted(m, key=lambda f: f.key()) for m in cp.family),
        key=lambda m: (len(m), [f.key() for f in m]))
    return {
        "signature": emit_signature(cp.signature),
        "fresh_constants": sorted(cp.fresh_constants),
        "family": [[emit_formula(f) for f in m] for m in members],
        "pool": [emit_formula(f)
                 for f in sorted(cp.pool, key=lambda f: f.key())],
    }


# ---------------------------------------------------------------------------
# proofs

_RULE_PARAM_KEYS = {
    "axiom": set(),
    "cut": {"formula"},
    "substitution": {"map"},
    "weakening": set(),
    "neg_left": {"formula"},
    "neg_right": {"formula"},
    "conj_left": {"formula"},
    "conj_right": {"formula"},
    "quant_left": {"formula", "terms"},
    "quant_right": {"formula", "fresh"},
    "eq1": set(),
    "eq2": {"template", "vars", "from_terms", "to_terms"},
}


def _parse_sequent(x: Any, path: str) -> Sequent:
    d = _obj(x, path)
    _reject_extras(d, {"ante", "succ"}, path)
    ante = [parse_formula(f, f"{path}.ante[{i}]")
            for i, f in enumerate(_arr(_get(d, "ante", path), f"{path}.ante"))]
    succ = [parse_formula(f, f"{path}.succ[{i}]")
            for i, f in enumerate(_arr(_get(d, "succ", path), f"{path}.succ"))]
    try:
        return Sequent(frozenset(ante), frozenset(succ))
    except ValueError as exc:
        _fail(path, str(exc))


def parse_proof(x: Any, path: str = "$") -> Proof:
    d = _obj(x, path)
    _reject_extras(d, {"steps"}, path)
    steps = []
    for i, entry in enumerate(_arr(_get(d, "steps", path), f"{path}.steps")):
        here = f"{path}.steps[{i}]"
        e = _obj(entry, here)
        _reject_extras(e, {"sequent", "rule"}, here)
        sequent = _parse_sequent(_get(e, "sequent", here), f"{here}.sequent")
        rule_obj = _obj(_get(e, "rule", here), f"{here}.rule")
        name = _str(_get(rule_obj, "name", f"{here}.rule"),
                    f"{here}.rule.name")
        if name not in RULES:
            _fail(f"{here}.rule.name", f"unknown rule {name!r}")
        _reject_extras(rule_obj, {"name", "premises"} | _RULE_PARAM_KEYS[name],
                       f"{here}.rule")
        premises = tuple(
            _int(p, f"{here}.rule.premises[{j}]")
            for j, p in enumerate(_arr(rule_obj.get("premises", []),
                                       f"{here}.rule.premises")))
        params = _parse_rule_params(rule_obj, f"{here}.rule")
        steps.append(Step(sequent, name, premises, params or None))
    if not steps:
        _fail(f"{path}.steps", "a proof needs at least one step")
    return Proof(tuple(steps))


def _parse_rule_params(rule_obj: dict, path: str) -> dict:
    params: dict = {}
    for key in ("formula", "template"):
        if key in rule_obj:
            params[key] = parse_formula(rule_obj[key], f"{path}.{key}")
    for key in ("terms", "from_terms", "to_terms"):
        if key in rule_obj:
            params[key] = tuple(
                parse_term(t, f"{path}.{key}[{i}]")
                for i, t in enumerate(_arr(rule_obj[key], f"{path}.{key}")))
    for key in ("fresh", "vars"):
        if key in rule_obj:
            params[key] = tuple(
                _str(v, f"{path}.{key}[{i}]")
                for i, v in enumerate(_arr(rule_obj[key], f"{path}.{key}")))
    if "map" in rule_obj:
        m = _obj(rule_obj["map"], f"{path}.map")
        params["map"] = {
            v: parse_term(t, f"{path}.map.{v}") for v, t in m.items()}
    return params


def _emit_sequent(s: Sequent) -> dict:
    return {"ante": [emit_formula(f)
                     for f in sorted(s.ante, key=lambda f: f.key())],
            "succ": [emit_formula(f)
                     for f in sorted(s.succ, key=lambda f: f.key())]}


def emit_proof(proof: Proof) -> dict:
    steps = []
    for step in proof.steps:
        rule: dict = {"name": step.rule}
        if step.premises:
            rule["premises"] = list(step.premises)
        for key, val in sorted((step.params or {}).items()):
            if key in ("formula", "template"):
                rule[key] = emit_formula(val)
            elif key in ("terms", "from_terms", "to_terms"):
                rule[key] = [emit_term(t) for t in val]
            elif key in ("fresh", "vars"):
                rule[key] = list(val)
            elif key == "map":
                rule[key] = {v: emit_term(t) for v, t in sorted(val.items())}
            else:
                raise ValueError(f"rule parameter {key!r} has no file form")
        steps.append({"sequent": _emit_sequent(step.sequent), "rule": rule})
    return {"steps": steps}


# ---------------------------------------------------------------------------
# files

def dumps(obj: Any) -> str:
    """Canonical serialization: sorted keys, two-space indent, newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_json(path_on_disk: str) -> Any:
    try:
        with open(path_on_disk, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"$: cannot read {path_on_disk}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"$: {path_on_disk} is not valid JSON: {exc}") from exc


def save_json(path_on_disk: str, obj: Any) -> None:
    with open(path_on_disk, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))
