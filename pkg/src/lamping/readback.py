"""Readback of beta-normal forms from normalized structures.

The procedure never inspects the graph: it only queries the token
machine. Each query anchors a head subterm as (port, context); probing
the anchor with extra q's on the multiplicative stack finds how many
abstractions guard the subterm, and the landing stack encodes the head
variable (free port, or position of its binder) together with one new
anchor per argument.
"""

from __future__ import annotations

from dataclasses import dataclass

from .semantics import Ctx, Reached, Stuck, FuelExhaustedRun, run_token
from .terms import Abs, App, Term, Var

__all__ = ["PsiAnswer", "ReadbackError", "psi_query", "readback_term"]


class ReadbackError(Exception):
    pass


@dataclass(frozen=True)
class PsiAnswer:
    n: int                                  # leading abstractions
    head: tuple                             # ("free", port) | ("bound", anchor, l)
    args: tuple                             # argument anchors, leftmost first
    landing: tuple                          # (port, ctx) of the probe that answered


Anchor = tuple  # (port, Ctx): port is a free-port/conclusion label


def _mult(ctx: Ctx) -> tuple:
    return ctx[-1]


def _with_mult(ctx: Ctx, mult: tuple) -> Ctx:
    return ctx[:-1] + (mult,)


def psi_query(structure, labelling, anchor: Anchor,
              fuel: int = 10 ** 5, n_cap: int = 64) -> PsiAnswer:
    """Expand one head subterm by probing its anchor.

    The probe appends q^n for the least n that makes the run land on a
    conclusion; a stuck multiplicative pop means the head sits under one
    more abstraction, so the search continues, while any other stuck run
    has no readback.
    """
    port, ctx = anchor
    k = len(ctx) - 1
    for n in range(n_cap + 1):
        probe = _with_mult(ctx, _mult(ctx) + ("q",) * n)
        res = run_token(structure, labelling, port, probe, fuel)
        if isinstance(res, Stuck):
            if res.reason == "empty-mult":
                continue
            raise ReadbackError(f"probe stuck ({res.reason}) at {res.at}; "
                                f"structure has no readback from {anchor}")
        if isinstance(res, FuelExhaustedRun):
            raise ReadbackError(f"probe from {anchor} ran out of fuel")
        assert isinstance(res, Reached)
        return _classify(res, n)
    raise ReadbackError(f"no defined probe within {n_cap} abstractions from {anchor}")


def _classify(res: Reached, n: int) -> PsiAnswer:
    """Split the landing stack S (top first) as S = T q^l p q^m.

    All-q landings name a free head applied to m arguments. Otherwise
    the trailing q^m counts arguments, the p below them marks the hop
    out of the binder, q^l gives the binder position, and the remaining
    top part T is the anchor stack of the head subterm whose abstractions
    bind the head variable.
    """
    s = list(_mult(res.ctx))
    m = 0
    while s and s[-1] == "q":
        s.pop()
        m += 1
    if not s:
        head = ("free", res.port)
        occ_mult: tuple = ()
    else:
        assert s[-1] == "p"
        s.pop()
        l = 0
        while s and s[-1] == "q":
            s.pop()
            l += 1
        binder_anchor = (res.port, _with_mult(res.ctx, tuple(s)))
        head = ("bound", binder_anchor, l)
        occ_mult = tuple(s) + ("q",) * l + ("p",)
    args = tuple(
        (res.port, _with_mult(res.ctx, occ_mult + ("q",) * (i - 1) + ("p",)))
        for i in range(1, m + 1))
    return PsiAnswer(n, head, args, (res.port, res.ctx))


def _suffix(a: tuple, b: tuple) -> bool:
    return len(a) <= len(b) and (len(a) == 0 or b[-len(a):] == a)


def _resolve_binder(memo: list, anchor: Anchor) -> tuple:
    """Find the memo entry whose binders the anchor refers to.

    Exact anchor equality is the common case. Crossing the sharing fans
    of a bound variable pushes extra symbols on the exponential stacks of
    the landing, so a reference may carry junk above the true anchor's
    stacks: accept a candidate whose every exponential stack is a suffix
    of the reference's, and insist the match is unique at maximal depth.
    """
    port, ctx = anchor
    exact = [entry for entry in memo if entry[0] == (port, ctx) and entry[1]]
    if exact:
        return exact[0]
    cands = []
    for (eport, ectx), binders in memo:
        if not binders or eport != port or ectx[-1] != ctx[-1]:
            continue
        if all(_suffix(ectx[i], ctx[i]) for i in range(len(ctx) - 1)):
            cands.append(((eport, ectx), binders))
    if not cands:
        raise ReadbackError(f"unresolved binder anchor {anchor}")
    best = max(sum(len(s) for s in e[0][1][:-1]) for e in cands)
    top = [e for e in cands if sum(len(s) for s in e[0][1][:-1]) == best]
    if len(top) != 1:
        raise ReadbackError(f"ambiguous binder anchor {anchor}")
    return top[0]


def readback_term(structure, labelling, fuel: int = 10 ** 5,
                  n_cap: int = 64) -> Term:
    """Reconstruct the beta-normal form of a normalized structure.

    Free ports keep their names; bound variables are x0, x1, ... in
    traversal order (skipping clashes with free-port names).
    """
    from .semantics import empty_ctx

    taken = set(structure.conclusions)
    counter = [0]

    def fresh() -> str:
        while True:
            name = f"x{counter[0]}"
            counter[0] += 1
            if name not in taken:
                return name

    memo: list = []  # [(anchor, [binder names])] in query order

    def expand(anchor: Anchor) -> Term:
        ans = psi_query(structure, labelling, anchor, fuel, n_cap)
        binders = [fresh() for _ in range(ans.n)]
        memo.append((anchor, binders))
        if ans.head[0] == "free":
            head: Term = Var(ans.head[1])
        else:
            _, banchor, l = ans.head
            entry = _resolve_binder(memo, banchor)
            names = entry[1]
            if l >= len(names):
                raise ReadbackError(f"binder index {l} out of range at {banchor}")
            head = Var(names[l])
        for arg in ans.args:
            head = App(head, expand(arg))
        for b in reversed(binders):
            head = Abs(b, head)
        return head

    main = "main" if "main" in structure.conclusions else structure.conclusions[0]
    return expand((main, empty_ctx(labelling.k)))
