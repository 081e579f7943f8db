"""Unary-context terms (one distinguished variable ``x`` plus fresh
parameters), their enumeration and composition, and induced translations.

Because every non-``x`` argument is a fresh parameter, a term is fully
described by the path from the root down to ``x``: a sequence of
``(operation name, arity, slot of x)`` steps, root first. Substituting one
term for the ``x`` of another is path concatenation.
"""

from __future__ import annotations

import itertools
from collections import OrderedDict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .algebra import FiniteAlgebra, Signature, slot_table, unique_rows_first
from .errors import InputError, ResourceError

DEFAULT_BUDGET = 10**6
DEFAULT_MONOID_CAP = 200_000

Step = tuple[str, int, int]


@dataclass(frozen=True)
class TermX:
    path: tuple[Step, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.path)

    @property
    def param_count(self) -> int:
        return sum(ar - 1 for _, ar, _ in self.path)

    def substitute(self, inner: TermX) -> TermX:
        """``self`` with ``inner`` put in place of x."""
        return TermX(self.path + inner.path)

    def split_assignment(self, assignment: Sequence[int]):
        """Per-step (left params, right params) from a left-to-right assignment."""
        if len(assignment) != self.param_count:
            raise InputError(f"term {self} takes {self.param_count} parameters, "
                             f"got {len(assignment)}")
        lefts, rights = [], []
        pos = 0
        for _, _, slot in self.path:
            lefts.append(tuple(assignment[pos:pos + slot]))
            pos += slot
        for _, ar, slot in reversed(self.path):
            k = ar - 1 - slot
            rights.append(tuple(assignment[pos:pos + k]))
            pos += k
        rights.reverse()
        return lefts, rights

    def evaluate(self, A: FiniteAlgebra, a: int, assignment: Sequence[int] = ()) -> int:
        """t(a, e) by direct bottom-up evaluation of the tree."""
        lefts, rights = self.split_assignment(tuple(assignment))
        val = a
        for (name, ar, slot), left, right in reversed(list(zip(self.path, lefts, rights))):
            j = A.signature.index(name)
            if A.signature.arity(j) != ar:
                raise InputError(f"operation {name} has arity {A.signature.arity(j)}, term uses {ar}")
            val = int(A.tables[j][left + (val,) + right])
        return val

    def format(self) -> str:
        out = "x"
        for name, ar, slot in reversed(self.path):
            args = ["_"] * ar
            args[slot] = out
            out = f"{name}({','.join(args)})"
        return out

    def __str__(self):
        return self.format()


X = TermX(())


def sort_key(sig: Signature, t: TermX):
    idx = {nm: i for i, (nm, _) in enumerate(sig)}
    return (t.depth, tuple((idx[nm], slot) for nm, _, slot in t.path))


class TermSet:
    """Deduplicated terms over one signature, in canonical order: depth, then
    root operation index, then x-slot, then recursively inward."""

    def __init__(self, sig: Signature, terms: Iterable[TermX] = ()):
        self.signature = sig
        idx = {nm: i for i, (nm, _) in enumerate(sig)}
        uniq = set()
        for t in terms:
            for nm, ar, slot in t.path:
                if nm not in idx:
                    raise InputError(f"operation {nm!r} not in signature [{sig}]")
                if sig.arity(idx[nm]) != ar or not 0 <= slot < ar:
                    raise InputError(f"bad step {nm}/{ar} slot {slot} for signature [{sig}]")
            uniq.add(t)
        self.terms = tuple(sorted(uniq, key=lambda t: (t.depth, tuple((idx[nm], s) for nm, _, s in t.path))))

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __contains__(self, t):
        return t in set(self.terms)

    def __eq__(self, other):
        if not isinstance(other, TermSet):
            return NotImplemented
        return self.signature == other.signature and self.terms == other.terms

    def __hash__(self):
        return hash((self.signature, self.terms))

    def __or__(self, other: TermSet) -> TermSet:
        return TermSet(self.signature, self.terms + other.terms)

    def issubset(self, other: TermSet) -> bool:
        return set(self.terms) <= set(other.terms)

    def max_depth(self) -> int:
        return max((t.depth for t in self.terms), default=0)

    def __repr__(self):
        return "TermSet{" + ", ".join(map(str, self.terms)) + "}"


def elementary_steps(sig: Signature) -> list[Step]:
    return [(nm, ar, slot) for nm, ar in sig for slot in range(ar) if ar >= 1]


def elementary_terms(sig: Signature) -> TermSet:
    return TermSet(sig, [TermX((s,)) for s in elementary_steps(sig)])


def enumerate_terms(sig: Signature, max_depth: int) -> TermSet:
    if max_depth < 0:
        raise InputError("max_depth must be non-negative")
    steps = elementary_steps(sig)
    terms = [X]
    for d in range(1, max_depth + 1):
        terms.extend(TermX(p) for p in itertools.product(steps, repeat=d))
    return TermSet(sig, terms)


def compose_sets(F: TermSet, G: TermSet) -> TermSet:
    """{ s(t(x, q), p) : s in F, t in G }."""
    if F.signature != G.signature:
        raise InputError("term sets over different signatures")
    return TermSet(F.signature, [s.substitute(t) for s in F for t in G])


# --------------------------------------------------------------------------
# translations


@dataclass(frozen=True)
class Translation:
    map: tuple[int, ...]
    term: TermX
    assignment: tuple[int, ...]


@dataclass
class _Work:
    budget: float
    used: int = 0

    def charge(self, amount: int):
        self.used += amount
        if self.used > self.budget:
            raise ResourceError(
                f"translation budget {int(self.budget)} exceeded", int(self.budget))


@lru_cache(maxsize=1 << 15)
def _path_maps(A: FiniteAlgebra, path: tuple[Step, ...]):
    """Distinct maps induced by the term with this path, with witnesses and
    the work (candidate rows) needed to produce them."""
    n = A.size
    if not path:
        maps = np.arange(n, dtype=np.intp)[None, :]
        maps.flags.writeable = False
        return maps, ((),), 0
    name, ar, slot = path[0]
    j = A.signature.index(name)
    if A.signature.arity(j) != ar:
        raise InputError(f"operation {name} has arity {A.signature.arity(j)}, term uses {ar}")
    inner, inner_assign, inner_work = _path_maps(A, path[1:])
    st = slot_table(A.tables[j], slot)                  # (n^(k-1), n)
    cand = st[:, inner].reshape(-1, n)                   # row r*m + g
    keep = unique_rows_first(cand)
    m = len(inner)
    params = list(itertools.product(range(n), repeat=ar - 1))
    assign = []
    for idx in keep.tolist():
        r, g = divmod(idx, m)
        p = params[r]
        assign.append(p[:slot] + inner_assign[g] + p[slot:])
    maps = np.ascontiguousarray(cand[keep])
    maps.flags.writeable = False
    return maps, tuple(assign), inner_work + len(cand)


def translation_table(A: FiniteAlgebra, F: TermSet, budget: float = DEFAULT_BUDGET):
    """Distinct translation maps of F on A as an array, plus one
    ``(term, assignment)`` witness per row, in canonical term order."""
    if F.signature != A.signature:
        for t in F:
            for name, ar, _ in t.path:
                j = A.signature.index(name)
                if A.signature.arity(j) != ar:
                    raise InputError(f"operation {name} has arity {A.signature.arity(j)} in algebra")
    budget = DEFAULT_BUDGET if budget is None else budget
    work = _Work(budget)
    seen_sufs = set()
    blocks, prov = [], []
    for t in F:
        # charge each new trie node before computing it, innermost first
        p = t.path
        for i in range(len(p) - 1, -1, -1):
            suf = p[i:]
            if suf in seen_sufs:
                continue
            seen_sufs.add(suf)
            _, ar, _ = suf[0]
            child = _path_maps(A, suf[1:])[0]
            work.charge(A.size ** (ar - 1) * len(child))
        maps, assigns, _ = _path_maps(A, p)
        blocks.append(maps)
        prov.extend((t, a) for a in assigns)
    if not blocks:
        return np.empty((0, A.size), dtype=np.intp), []
    allmaps = np.concatenate(blocks)
    keep = unique_rows_first(allmaps)
    return np.ascontiguousarray(allmaps[keep]), [prov[i] for i in keep.tolist()]


def translations(A: FiniteAlgebra, F: TermSet, budget: float = DEFAULT_BUDGET) -> list[Translation]:
    maps, prov = translation_table(A, F, budget)
    return [Translation(tuple(row), t, a) for row, (t, a) in zip(maps.tolist(), prov)]


def translation_monoid(A: FiniteAlgebra, cap: int = DEFAULT_MONOID_CAP) -> list[Translation]:
    """Identity plus all elementary translations, closed under composition.

    Built breadth-first, so each map's witness term has the least depth at
    which the map occurs.
    """
    maps, levels = _monoid(A, cap)
    return [Translation(tuple(row), t, a) for row, (t, a) in zip(maps.tolist(), levels)]


def stabilization_depth(A: FiniteAlgebra, cap: int = DEFAULT_MONOID_CAP) -> int:
    """Least d such that terms of depth <= d induce every translation of A."""
    _, prov = _monoid(A, cap)
    return max(t.depth for t, _ in prov)


@lru_cache(maxsize=256)
def _monoid(A: FiniteAlgebra, cap: int):
    n = A.size
    em = A.elementary
    E = em.maps
    estep = [(A.signature.name(j), A.signature.arity(j), slot, params)
             for j, slot, params in em.provenance]
    ident = np.arange(n, dtype=np.intp)
    seen = OrderedDict()
    seen[ident.tobytes()] = None
    rows = [ident]
    prov = [(X, ())]
    frontier = np.asarray([ident])
    frontier_prov = [(X, ())]
    while len(frontier) and len(E):
        new_rows, new_prov = [], []
        chunk = max(1, 4_000_000 // max(1, n * len(frontier)))
        for e0 in range(0, len(E), chunk):
            comp = E[e0:e0 + chunk][:, frontier]        # (c, m, n)
            c, m = comp.shape[0], comp.shape[1]
            flat = comp.reshape(-1, n)
            for idx in range(len(flat)):
                key = flat[idx].tobytes()
                if key in seen:
                    continue
                seen[key] = None
                ei, g = divmod(idx, m)
                name, ar, slot, params = estep[e0 + ei]
                gt, ga = frontier_prov[g]
                new_rows.append(flat[idx])
                new_prov.append((TermX(((name, ar, slot),) + gt.path),
                                 params[:slot] + ga + params[slot:]))
                if len(seen) > cap:
                    raise ResourceError(f"translation monoid exceeds cap {cap}", cap)
        rows.extend(new_rows)
        prov.extend(new_prov)
        frontier = np.asarray(new_rows) if new_rows else np.empty((0, n), dtype=np.intp)
        frontier_prov = new_prov
    out = np.asarray(rows)
    out.flags.writeable = False
    return out, tuple(prov)


# --------------------------------------------------------------------------
# term literals


def parse_term(text: str, sig: Signature | None = None) -> TermX:
    """Parse ``x``, ``.(x,_)``, ``meet(_,x)``, ``.(meet(x,_),_)``."""
    s = text.strip()
    pos = 0

    def ws():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def name():
        nonlocal pos
        ws()
        start = pos
        while pos < len(s) and s[pos] not in "()," and not s[pos].isspace():
            pos += 1
        return s[start:pos]

    def term():
        # returns path (root first), or None for a parameter slot
        nonlocal pos
        nm = name()
        ws()
        if nm == "_":
            return None
        if nm == "x" and (pos >= len(s) or s[pos] != "("):
            return ()
        if not nm or nm == "x" or pos >= len(s) or s[pos] != "(":
            raise InputError(f"bad term literal {text!r} at offset {pos}")
        pos += 1
        args = [term()]
        ws()
        while pos < len(s) and s[pos] == ",":
            pos += 1
            args.append(term())
            ws()
        if pos >= len(s) or s[pos] != ")":
            raise InputError(f"bad term literal {text!r}: expected ')' at offset {pos}")
        pos += 1
        xs = [i for i, a in enumerate(args) if a is not None]
        if len(xs) != 1:
            raise InputError(f"term literal {text!r}: each application needs exactly one x-branch")
        ar = len(args)
        if sig is not None:
            j = sig.index(nm)
            if sig.arity(j) != ar:
                raise InputError(f"operation {nm} has arity {sig.arity(j)}, literal uses {ar}")
        return ((nm, ar, xs[0]),) + args[xs[0]]

    path = term()
    ws()
    if path is None or pos != len(s):
        raise InputError(f"bad term literal {text!r}")
    return TermX(path)


def parse_terms(texts: Iterable[str], sig: Signature) -> TermSet:
    return TermSet(sig, [parse_term(t, sig) for t in texts])


def split_term_list(text: str) -> list[str]:
    """Split ``a(x,_);b(_,x)`` or whitespace-separated literals at top level."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and (ch == ";" or ch.isspace()):
            if cur:
                out.append("".join(cur))
                cur = []
            continue
        cur.append(ch)
    if cur:
        out.append("".join(cur))
    return out
