"""Formulas of elementary / light affine logic.

Grammar: `A ::= ident | A '-o' A | '!'A | '$'A | 'forall' a '.' A | 'mu' a '.' A`
where `$` is the light-logic paragraph modality (LAL mode only) and
`-o` associates to the right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "Formula", "Atom", "Lolli", "Bang", "Para", "Forall", "Mu",
    "FormulaSyntaxError", "parse_formula", "show_formula",
    "free_type_vars", "subst_formula", "formula_eq", "erase_para",
    "unfold_mu", "contains_para",
]


class FormulaSyntaxError(Exception):
    pass


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Lolli:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Bang:
    inner: "Formula"


@dataclass(frozen=True)
class Para:
    inner: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Mu:
    var: str
    body: "Formula"


Formula = Atom | Lolli | Bang | Para | Forall | Mu

_TOKEN = re.compile(r"\s*(-o|forall|mu|[a-zA-Z][a-zA-Z0-9_]*|[!$().])")


def _tokenize(text: str) -> list[str]:
    toks, i = [], 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            if text[i:].strip():
                raise FormulaSyntaxError(f"bad formula token at {text[i:]!r}")
            break
        toks.append(m.group(1))
        i = m.end()
    return toks


def parse_formula(text: str) -> Formula:
    toks = _tokenize(text)
    pos = 0

    def peek() -> str | None:
        return toks[pos] if pos < len(toks) else None

    def eat(tok: str) -> None:
        nonlocal pos
        if peek() != tok:
            raise FormulaSyntaxError(f"expected {tok!r}, got {peek()!r}")
        pos += 1

    def parse() -> Formula:
        nonlocal pos
        if peek() in ("forall", "mu"):
            kw = toks[pos]
            pos += 1
            var = toks[pos] if peek() and re.fullmatch(r"[a-zA-Z][a-zA-Z0-9_]*", toks[pos]) else None
            if var is None:
                raise FormulaSyntaxError(f"expected type variable after {kw}")
            pos += 1
            eat(".")
            body = parse()
            return Forall(var, body) if kw == "forall" else Mu(var, body)
        left = parse_unary()
        if peek() == "-o":
            pos += 1
            return Lolli(left, parse())
        return left

    def parse_unary() -> Formula:
        nonlocal pos
        if peek() == "!":
            pos += 1
            return Bang(parse_unary())
        if peek() == "$":
            pos += 1
            return Para(parse_unary())
        if peek() == "(":
            pos += 1
            f = parse()
            eat(")")
            return f
        tok = peek()
        if tok is None or not re.fullmatch(r"[a-zA-Z][a-zA-Z0-9_]*", tok) or tok in ("forall", "mu"):
            raise FormulaSyntaxError(f"unexpected token {tok!r}")
        pos += 1
        return Atom(tok)

    f = parse()
    if pos != len(toks):
        raise FormulaSyntaxError(f"trailing formula tokens: {toks[pos:]}")
    return f


def show_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Bang):
        return "!" + _show_tight(f.inner)
    if isinstance(f, Para):
        return "$" + _show_tight(f.inner)
    if isinstance(f, Forall):
        return f"forall {f.var}.{show_formula(f.body)}"
    if isinstance(f, Mu):
        return f"mu {f.var}.{show_formula(f.body)}"
    left = show_formula(f.left)
    if isinstance(f.left, (Lolli, Forall, Mu)):
        left = f"({left})"
    return f"{left} -o {show_formula(f.right)}"


def _show_tight(f: Formula) -> str:
    s = show_formula(f)
    return f"({s})" if isinstance(f, (Lolli, Forall, Mu)) else s


def free_type_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset((f.name,))
    if isinstance(f, (Bang, Para)):
        return free_type_vars(f.inner)
    if isinstance(f, Lolli):
        return free_type_vars(f.left) | free_type_vars(f.right)
    return free_type_vars(f.body) - {f.var}


def subst_formula(f: Formula, var: str, repl: Formula) -> Formula:
    """Capture-avoiding substitution f{repl/var}."""
    if isinstance(f, Atom):
        return repl if f.name == var else f
    if isinstance(f, Bang):
        return Bang(subst_formula(f.inner, var, repl))
    if isinstance(f, Para):
        return Para(subst_formula(f.inner, var, repl))
    if isinstance(f, Lolli):
        return Lolli(subst_formula(f.left, var, repl), subst_formula(f.right, var, repl))
    cls = type(f)
    if f.var == var:
        return f
    if f.var in free_type_vars(repl) and var in free_type_vars(f.body):
        fresh = f.var
        taken = free_type_vars(repl) | free_type_vars(f.body) | {var}
        i = 0
        while fresh in taken:
            fresh = f"{f.var}{i}"
            i += 1
        return cls(fresh, subst_formula(subst_formula(f.body, f.var, Atom(fresh)), var, repl))
    return cls(f.var, subst_formula(f.body, var, repl))


def formula_eq(a: Formula, b: Formula) -> bool:
    """Equality up to renaming of bound type variables."""
    def go(a: Formula, b: Formula, ea: dict[str, int], eb: dict[str, int], d: int) -> bool:
        if isinstance(a, Atom) and isinstance(b, Atom):
            ia, ib = ea.get(a.name), eb.get(b.name)
            return a.name == b.name if ia is None and ib is None else ia == ib
        if type(a) is not type(b):
            return False
        if isinstance(a, (Bang, Para)):
            return go(a.inner, b.inner, ea, eb, d)  # type: ignore[union-attr]
        if isinstance(a, Lolli):
            return go(a.left, b.left, ea, eb, d) and go(a.right, b.right, ea, eb, d)  # type: ignore[union-attr]
        assert isinstance(a, (Forall, Mu)) and isinstance(b, (Forall, Mu))
        return go(a.body, b.body, {**ea, a.var: d}, {**eb, b.var: d}, d + 1)

    return go(a, b, {}, {}, 0)


def erase_para(f: Formula) -> Formula:
    """Replace every paragraph modality by a bang."""
    if isinstance(f, Atom):
        return f
    if isinstance(f, Bang):
        return Bang(erase_para(f.inner))
    if isinstance(f, Para):
        return Bang(erase_para(f.inner))
    if isinstance(f, Lolli):
        return Lolli(erase_para(f.left), erase_para(f.right))
    return type(f)(f.var, erase_para(f.body))


def contains_para(f: Formula) -> bool:
    if isinstance(f, Atom):
        return False
    if isinstance(f, Para):
        return True
    if isinstance(f, Bang):
        return contains_para(f.inner)
    if isinstance(f, Lolli):
        return contains_para(f.left) or contains_para(f.right)
    return contains_para(f.body)


def unfold_mu(f: Mu) -> Formula:
    return subst_formula(f.body, f.var, f)
