"""Pure lambda terms with named binders.

Parsing/printing, alpha-equivalence, head decomposition, and a
normal-order beta normalizer that serves as the reference evaluator
for the rest of the pipeline.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "Term", "Var", "Abs", "App",
    "TermSyntaxError", "FuelExhausted", "NotNormal",
    "parse_term", "show_term", "free_vars", "term_size",
    "subst", "alpha_eq", "beta_step", "beta_normalize", "is_normal",
    "head_decompose", "head_reassemble", "fresh_name",
    "DEFAULT_FUEL",
]

DEFAULT_FUEL = 10 ** 6


class TermSyntaxError(Exception):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


class FuelExhausted(Exception):
    pass


class NotNormal(Exception):
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Abs:
    binder: str
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


Term = Var | Abs | App

_IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")


# ---------------------------------------------------------------------------
# parsing / printing

def parse_term(text: str) -> Term:
    """Parse `\\x.body | f a b | (t)`; application is left-associative and
    an abstraction body extends as far right as possible."""
    pos = 0
    n = len(text)

    def skip_ws(i: int) -> int:
        while i < n and text[i].isspace():
            i += 1
        return i

    def parse(i: int) -> tuple[Term, int]:
        i = skip_ws(i)
        if i < n and text[i] in "\\λ":
            m = _IDENT.match(text, skip_ws(i + 1))
            if not m:
                raise TermSyntaxError("expected identifier after lambda", i + 1)
            j = skip_ws(m.end())
            if j >= n or text[j] != ".":
                raise TermSyntaxError("expected '.' after binder", j)
            body, j = parse(j + 1)
            return Abs(m.group(), body), j
        return parse_app(i)

    def parse_app(i: int) -> tuple[Term, int]:
        t, i = parse_atom(i)
        while True:
            j = skip_ws(i)
            if j < n and (text[j] == "(" or _IDENT.match(text, j)):
                u, i = parse_atom(j)
                t = App(t, u)
            else:
                break
        return t, i

    def parse_atom(i: int) -> tuple[Term, int]:
        i = skip_ws(i)
        if i >= n:
            raise TermSyntaxError("unexpected end of input", i)
        if text[i] == "(":
            t, j = parse(i + 1)
            j = skip_ws(j)
            if j >= n or text[j] != ")":
                raise TermSyntaxError("expected ')'", j)
            return t, j + 1
        m = _IDENT.match(text, i)
        if not m:
            raise TermSyntaxError(f"unexpected character {text[i]!r}", i)
        return Var(m.group()), m.end()

    t, i = parse(0)
    i = skip_ws(i)
    if i != n:
        raise TermSyntaxError("trailing input", i)
    return t


def show_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Abs):
        return f"\\{t.binder}.{show_term(t.body)}"
    fun = show_term(t.fun)
    if isinstance(t.fun, Abs):
        fun = f"({fun})"
    arg = show_term(t.arg)
    if isinstance(t.arg, (Abs, App)):
        arg = f"({arg})"
    return f"{fun} {arg}"


# ---------------------------------------------------------------------------
# basic structure

def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Abs):
        return free_vars(t.body) - {t.binder}
    return free_vars(t.fun) | free_vars(t.arg)


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    if isinstance(t, Abs):
        return 1 + term_size(t.body)
    return 1 + term_size(t.fun) + term_size(t.arg)


def fresh_name(base: str, avoid: set[str] | frozenset[str]) -> str:
    if base not in avoid:
        return base
    stem = base.rstrip("0123456789") or "x"
    i = 0
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def subst(t: Term, x: str, u: Term) -> Term:
    """Capture-avoiding substitution t{u/x}."""
    if isinstance(t, Var):
        return u if t.name == x else t
    if isinstance(t, App):
        return App(subst(t.fun, x, u), subst(t.arg, x, u))
    if t.binder == x:
        return t
    if t.binder in free_vars(u) and x in free_vars(t.body):
        b = fresh_name(t.binder, free_vars(u) | free_vars(t.body) | {x})
        return Abs(b, subst(subst(t.body, t.binder, Var(b)), x, u))
    return Abs(t.binder, subst(t.body, x, u))


def alpha_eq(a: Term, b: Term) -> bool:
    def go(a: Term, b: Term, env_a: dict[str, int], env_b: dict[str, int], depth: int) -> bool:
        if isinstance(a, Var) and isinstance(b, Var):
            ia, ib = env_a.get(a.name), env_b.get(b.name)
            if ia is None and ib is None:
                return a.name == b.name
            return ia == ib
        if isinstance(a, Abs) and isinstance(b, Abs):
            return go(a.body, b.body,
                      {**env_a, a.binder: depth}, {**env_b, b.binder: depth}, depth + 1)
        if isinstance(a, App) and isinstance(b, App):
            return go(a.fun, b.fun, env_a, env_b, depth) and \
                go(a.arg, b.arg, env_a, env_b, depth)
        return False

    return go(a, b, {}, {}, 0)


# ---------------------------------------------------------------------------
# normal-order reduction

def beta_step(t: Term) -> Term | None:
    """One leftmost-outermost beta step, or None if t is normal."""
    if isinstance(t, App) and isinstance(t.fun, Abs):
        return subst(t.fun.body, t.fun.binder, t.arg)
    if isinstance(t, Abs):
        b = beta_step(t.body)
        return None if b is None else Abs(t.binder, b)
    if isinstance(t, App):
        f = beta_step(t.fun)
        if f is not None:
            return App(f, t.arg)
        a = beta_step(t.arg)
        return None if a is None else App(t.fun, a)
    return None


def is_normal(t: Term) -> bool:
    if isinstance(t, Var):
        return True
    if isinstance(t, Abs):
        return is_normal(t.body)
    return not isinstance(t.fun, Abs) and is_normal(t.fun) and is_normal(t.arg)


def beta_normalize(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    for _ in range(fuel):
        u = beta_step(t)
        if u is None:
            return t
        t = u
    raise FuelExhausted(f"no normal form within {fuel} steps")


# ---------------------------------------------------------------------------
# head decomposition of normal forms

def head_decompose(t: Term) -> tuple[int, tuple[str, str | int], tuple[Term, ...]]:
    """Split a beta-normal t = \\x1...\\xn. h a1 ... am.

    Returns (n, head, args) where head is ('free', name) or
    ('bound', i) with i the 1-based index of the binder, counted from
    the outermost abstraction.
    """
    if not is_normal(t):
        raise NotNormal(show_term(t))
    binders: list[str] = []
    while isinstance(t, Abs):
        binders.append(t.binder)
        t = t.body
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    assert isinstance(t, Var)
    args.reverse()
    head: tuple[str, str | int]
    for i in range(len(binders) - 1, -1, -1):
        if binders[i] == t.name:
            head = ("bound", i + 1)
            break
    else:
        head = ("free", t.name)
    return len(binders), head, tuple(args)


def head_reassemble(n: int, head: tuple[str, str | int], args: tuple[Term, ...],
                    binders: list[str] | None = None) -> Term:
    """Inverse of head_decompose (binders default to x0..x{n-1})."""
    if binders is None:
        binders = [f"x{i}" for i in range(n)]
    assert len(binders) == n
    kind, which = head
    h: Term = Var(which) if kind == "free" else Var(binders[which - 1])  # type: ignore[index]
    for a in args:
        h = App(h, a)
    for b in reversed(binders):
        h = Abs(b, h)
    return h
