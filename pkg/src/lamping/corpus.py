"""A corpus of EAL/LAL derivations used by the test suite and the docs.

Each entry is built programmatically with the rule helpers; the text
files shipped under corpus/ are the serialized forms. Subjects cover
identity and projections, sharing through contraction, weakened (erased)
arguments, Church numerals with addition and composition instances,
second-order instantiation, fixpoint coercions, and light-logic entries
with paragraph boxes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .derivations import (
    Derivation, ax, bang, bang2, contract, cut, dapp, forall_l, forall_r,
    lam, llolli, mu_l, mu_r, para, weak,
)
from .formulas import Atom, Bang, Forall, Lolli, Mu, Para

__all__ = ["CORPUS", "CorpusEntry", "build", "names"]

A = Atom("a")
B = Atom("b")
AA = Lolli(A, A)
bAA = Bang(AA)
bA = Bang(A)


@dataclass(frozen=True)
class CorpusEntry:
    mode: str
    make: Callable[[], Derivation]


def _identity() -> Derivation:
    return lam("x", ax("x", A))


def _proj1() -> Derivation:
    return lam("x", lam("y", weak("y", B, ax("x", A))))


def _proj2() -> Derivation:
    return lam("x", lam("y", weak("x", A, ax("y", B))))


def _boxed_g_abstraction() -> Derivation:
    """g:!(a-oa) |- \\z.g z : !(a-oa), a one-box net."""
    inner = llolli("g", "w0", ax("z", A), ax("w0", A))
    return bang(lam("z", inner))


def _running_example() -> Derivation:
    """f:!(a-oa)-o!(a-oa)-ob, g:!(a-oa) |- (\\x.f x x)(\\z.g z) : b."""
    body = llolli("h", "u0", ax("x2", bAA), ax("u0", B))
    body = llolli("f", "h", ax("x1", bAA), body)
    fpart = lam("x", contract("x1", "x2", "x", body))
    shim = llolli("y", "v0", _boxed_g_abstraction(), ax("v0", B))
    return cut("y", fpart, shim)


def _weakened_app() -> Derivation:
    """w:b, g:!(a-oa) |- (\\x.w)(\\z.g z) : b; the argument is erased."""
    fpart = lam("x", weak("x", bAA, ax("w", B)))
    shim = llolli("y", "v0", _boxed_g_abstraction(), ax("v0", B))
    return cut("y", fpart, shim)


def _shared_bound() -> Derivation:
    """g:!a-o!a-ob |- \\z.g z z : !a-ob, contraction on a bound variable."""
    body = llolli("h", "u0", ax("z2", bA), ax("u0", B))
    body = llolli("g", "h", ax("z1", bA), body)
    return lam("z", contract("z1", "z2", "z", body))


def _church(n: int, atom: Atom = A) -> Derivation:
    """|- \\s.\\z.s(...(s z)) : !(t-ot) -o !t -o !t."""
    tt = Lolli(atom, atom)
    if n == 0:
        return lam("s", lam("z", weak("s", Bang(tt), ax("z", Bang(atom)))))
    d = ax("z", atom)
    for i in range(n, 0, -1):
        name = "s" if n == 1 else f"s{i}"
        d = llolli(name, f"r{i}", d, ax(f"r{i}", atom))
    d = bang(d)
    if n >= 2:
        cur = "s1"
        for i in range(2, n + 1):
            target = "s" if i == n else f"c{i}"
            d = contract(cur, f"s{i}", target, d)
            cur = target
    return lam("s", lam("z", d))


def _numeral_type(atom: Atom = A) -> Lolli:
    tt = Lolli(atom, atom)
    return Lolli(Bang(tt), Lolli(Bang(atom), Bang(atom)))


def _add_2_1() -> Derivation:
    """|- add 2 1 : N with add = \\m.\\n.\\s.\\z. m s (n s z)."""
    arrow = Lolli(bA, bA)
    ns = llolli("n", "h1", ax("s2", bAA), ax("h1", arrow))
    nsz = cut("k1", ns, llolli("k1", "h2", ax("z", bA), ax("h2", bA)))
    ms = llolli("m", "h3", ax("s1", bAA), ax("h3", arrow))
    full = cut("k2", ms, llolli("k2", "h4", nsz, ax("h4", bA)))
    add = lam("m", lam("n", lam("s", lam("z", contract("s1", "s2", "s", full)))))
    return dapp(dapp(add, _church(2), "ap1"), _church(1), "ap2")


def _shared_numeral() -> Derivation:
    """f:!N-o!N-ob |- f 2 2 : b; contracting a boxed numeral forces the
    reducer to copy a box that itself contains a box and a contraction."""
    N = _numeral_type()
    body = llolli("h", "u0", ax("c2", Bang(N)), ax("u0", B))
    body = llolli("f", "h", ax("c1", Bang(N)), body)
    body = contract("c1", "c2", "c", body)
    return cut("c", bang(_church(2)), body)


def _church_forall(n: int) -> Derivation:
    t = Atom("t")
    return forall_r("t", _church(n, t))


def _poly_numeral_type() -> Forall:
    t = Atom("t")
    return Forall("t", _numeral_type(t))


def _two_compose_two() -> Derivation:
    """|- \\s. 2 (2 s) : !!(a-oa) -o !!a -o !!a, numerals taken at
    instance types a and !a; normalizes to the Church numeral four."""
    N = _poly_numeral_type()
    inner = llolli("n2a", "h1", ax("s", bAA), ax("h1", Lolli(bA, bA)))
    inner = forall_l("n2a", N, A, inner)
    inner = cut("n2a", _church_forall(2), inner)
    boxed = bang(inner)
    bbA = Bang(bA)
    outer = llolli("n2b", "h2", boxed, ax("h2", Lolli(bbA, bbA)))
    outer = forall_l("n2b", N, bA, outer)
    outer = cut("n2b", _church_forall(2), outer)
    return lam("s", outer)


def _two_compose_two_applied() -> Derivation:
    """S:!!(a-oa), Z:!!a |- (\\s. 2 (2 s)) S Z : !!a; the normal form is
    four applications of S."""
    bbAA = Bang(bAA)
    bbA = Bang(bA)
    d = dapp(_two_compose_two(), ax("S", bbAA), "apS")
    return dapp(d, ax("Z", bbA), "apZ")


def _forall_id_app() -> Derivation:
    """b0:b |- (\\x.x) b0 : b via a second-order instance."""
    poly_id = forall_r("t", lam("x", ax("x", Atom("t"))))
    ty = Forall("t", Lolli(Atom("t"), Atom("t")))
    use = llolli("idb", "h1", ax("b0", B), ax("h1", B))
    use = forall_l("idb", ty, B, use)
    return cut("idb", poly_id, use)


_D = Mu("t", Lolli(Atom("t"), A))
_DU = Lolli(_D, A)  # the unfolding of _D


def _mu_fold() -> Derivation:
    return lam("x", mu_r(_D, ax("x", _DU)))


def _mu_unfold() -> Derivation:
    return lam("x", mu_l("x", _D, ax("x", _DU)))


def _mu_cut() -> Derivation:
    """x:(D-oa) |- x : D-oa through a fold/unfold pair that cuts away."""
    folded = mu_r(_D, ax("x", _DU))
    unfolded = mu_l("y", _D, ax("y", _DU))
    return cut("y", folded, unfolded)


def _lal_identity() -> Derivation:
    return lam("x", ax("x", A))


def _lal_coercion() -> Derivation:
    """|- \\x.x : !(a-oa) -o !(a-oa), a one-door light box."""
    return lam("x", bang2(ax("x", AA)))


def _lal_church2() -> Derivation:
    """|- \\s.\\z.s(s z) : !(a-oa) -o $a -o $a."""
    d = llolli("s2", "r2", ax("z", A), ax("r2", A))
    d = llolli("s1", "r1", d, ax("r1", A))
    d = para(("s1", "s2"), d)
    d = contract("s1", "s2", "s", d)
    return lam("s", lam("z", d))


def _lal_list01() -> Derivation:
    """The two-symbol list \\f0.\\f1.\\x.f0 (f1 x) at the list type
    forall a. !(a-oa) -o !(a-oa) -o $(a-oa)."""
    d = llolli("f1", "r1", ax("x", A), ax("r1", A))
    d = llolli("f0", "r0", d, ax("r0", A))
    d = lam("x", d)
    d = para(("f0", "f1"), d)
    return forall_r("a", lam("f0", lam("f1", d)))


def _list_type() -> Forall:
    return Forall("a", Lolli(bAA, Lolli(bAA, Para(AA))))


def _lal_list_iterate() -> Derivation:
    """g,h:!(a-oa) |- list01 g h : $(a-oa); reads back \\x.g (h x)."""
    W = _list_type()
    d = llolli("k", "h7", ax("h", bAA), ax("h7", Para(AA)))
    d = llolli("L1", "k", ax("g", bAA), d)
    d = forall_l("L1", W, A, d)
    return cut("L1", _lal_list01(), d)


CORPUS: dict[str, CorpusEntry] = {
    "identity": CorpusEntry("eal", _identity),
    "proj1": CorpusEntry("eal", _proj1),
    "proj2": CorpusEntry("eal", _proj2),
    "running_example": CorpusEntry("eal", _running_example),
    "weakened_app": CorpusEntry("eal", _weakened_app),
    "shared_bound": CorpusEntry("eal", _shared_bound),
    "church0": CorpusEntry("eal", lambda: _church(0)),
    "church1": CorpusEntry("eal", lambda: _church(1)),
    "church2": CorpusEntry("eal", lambda: _church(2)),
    "church3": CorpusEntry("eal", lambda: _church(3)),
    "add_2_1": CorpusEntry("eal", _add_2_1),
    "shared_numeral": CorpusEntry("eal", _shared_numeral),
    "two_compose_two": CorpusEntry("eal", _two_compose_two),
    "two_compose_two_applied": CorpusEntry("eal", _two_compose_two_applied),
    "forall_id_app": CorpusEntry("eal", _forall_id_app),
    "mu_fold": CorpusEntry("eal", _mu_fold),
    "mu_unfold": CorpusEntry("eal", _mu_unfold),
    "mu_cut": CorpusEntry("eal", _mu_cut),
    "lal_identity": CorpusEntry("lal", _lal_identity),
    "lal_coercion": CorpusEntry("lal", _lal_coercion),
    "lal_church2": CorpusEntry("lal", _lal_church2),
    "lal_list01": CorpusEntry("lal", _lal_list01),
    "lal_list_iterate": CorpusEntry("lal", _lal_list_iterate),
}


def names() -> list[str]:
    return list(CORPUS)


def build(name: str) -> tuple[str, Derivation]:
    entry = CORPUS[name]
    return entry.mode, entry.make()


def export_corpus(directory) -> list[str]:
    """Serialize every entry as <name>.<mode> under the directory."""
    from pathlib import Path
    from .derivations import show_derivation

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, entry in CORPUS.items():
        path = directory / f"{name}.{entry.mode}"
        path.write_text(show_derivation(entry.make()) + "\n")
        written.append(str(path))
    return written
