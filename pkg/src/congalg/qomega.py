"""Finite truncations Q_n of the algebra (Q_w, meet, prod, 0).

Elements are 0, a_i, b_i for i < n, numbered 0, 2i+1, 2i+2. ``meet`` is
diagonal (a meet a = a, otherwise 0); ``prod`` sends (a_i, b_{i+1}) to b_i
and everything else to 0. The product a_{n-1} * b_n has no b_n to hit, so
in Q_n it falls to 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import FiniteAlgebra, Signature
from .analysis import Verdict, MalcevWitness, theta_upper, verify_witness
from .congruence import generate_congruence
from .errors import InputError, ResourceError
from .partition import Partition
from .terms import DEFAULT_BUDGET, enumerate_terms

QN_SIGNATURE = Signature((("meet", 2), ("prod", 2), ("zero", 0)))


def a(i: int) -> int:
    return 2 * i + 1


def b(i: int) -> int:
    return 2 * i + 2


def qn_labels(n: int) -> list[str]:
    out = ["0"]
    for i in range(n):
        out += [f"a{i}", f"b{i}"]
    return out


@dataclass(frozen=True)
class QOmegaTruncation:
    n: int
    algebra: FiniteAlgebra
    labeling: dict = field(compare=False)


def make_qn(n: int) -> QOmegaTruncation:
    if n < 1:
        raise InputError("Q_n needs n >= 1")
    size = 2 * n + 1
    meet = np.zeros((size, size), dtype=np.intp)
    meet[np.arange(size), np.arange(size)] = np.arange(size)
    prod = np.zeros((size, size), dtype=np.intp)
    for i in range(n - 1):
        prod[a(i), b(i + 1)] = b(i)
    labels = qn_labels(n)
    A = FiniteAlgebra(QN_SIGNATURE, size, [meet, prod, [0]], name=f"Q{n}", labels=labels)
    return QOmegaTruncation(n, A, {lbl: e for e, lbl in enumerate(labels)})


def _binary(A: FiniteAlgebra, op: str) -> np.ndarray:
    j = A.signature.index(op)
    if A.signature.arity(j) != 2:
        raise InputError(f"operation {op} is not binary")
    return np.asarray(A.tables[j])


def _zero(A: FiniteAlgebra, zero: Optional[str]) -> int:
    if zero is None:
        nullary = [j for j, (_, ar) in enumerate(A.signature) if ar == 0]
        if not nullary:
            raise InputError("no constant declared")
        j = nullary[0]
    else:
        j = A.signature.index(zero)
        if A.signature.arity(j) != 0:
            raise InputError(f"{zero} is not a constant")
    return int(A.tables[j][()])


def check_sentence_1(A: FiniteAlgebra, op: str, zero: Optional[str] = None) -> Verdict:
    """forall x, y: x o y != 0  ->  x != 0 and y != 0."""
    T = _binary(A, op)
    z = _zero(A, zero)
    n = A.size
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    bad = (T != z) & ((x == z) | (y == z))
    if bad.any():
        cx, cy = np.argwhere(bad)[0]
        return Verdict(False, (int(cx), int(cy)))
    return Verdict(True)


def check_sentence_2(A: FiniteAlgebra, op: str, zero: Optional[str] = None) -> Verdict:
    """forall x, y, x', y': (x o y == x' o y' and x o y != 0)
    -> (x == x' and y == y' and x != 0 and y != 0).

    Swept literally over all quadruples, one first argument at a time.
    """
    T = _binary(A, op)
    z = _zero(A, zero)
    n = A.size
    ys = np.arange(n)[:, None, None]
    xs2 = np.arange(n)[None, :, None]
    ys2 = np.arange(n)[None, None, :]
    for x in range(n):
        lhs = T[x][:, None, None]                         # (y, 1, 1)
        premise = (lhs == T[None, :, :]) & (lhs != z)     # (y, x', y')
        concl = (x == xs2) & (ys == ys2) & (x != z) & (ys != z)
        bad = premise & ~concl
        if bad.any():
            y, x2, y2 = np.argwhere(bad)[0]
            return Verdict(False, (x, int(y), int(x2), int(y2)))
    return Verdict(True)


def audit_tables(n: int) -> list[str]:
    """Re-derive every table entry of Q_n from element labels; returns mismatches."""
    A = make_qn(n).algebra
    labels = A.labels
    meet, prod = _binary(A, "meet"), _binary(A, "prod")
    index = {lbl: e for e, lbl in enumerate(labels)}
    problems = []
    for x, lx in enumerate(labels):
        for y, ly in enumerate(labels):
            want_meet = x if lx == ly else index["0"]
            want_prod = index["0"]
            if lx.startswith("a") and ly.startswith("b") and int(ly[1:]) == int(lx[1:]) + 1:
                want_prod = index[f"b{int(lx[1:])}"]
            if meet[x, y] != want_meet:
                problems.append(f"{lx} meet {ly} = {labels[meet[x, y]]}, want {labels[want_meet]}")
            if prod[x, y] != want_prod:
                problems.append(f"{lx} prod {ly} = {labels[prod[x, y]]}, want {labels[want_prod]}")
    if A.op("zero") != index["0"]:
        problems.append("zero constant is not 0")
    return problems


def embedding_exceptions(n: int) -> list[tuple[str, str, str]]:
    """Label pairs of Q_n whose products differ in Q_{n+1}: (op, x, y)."""
    small, big = make_qn(n).algebra, make_qn(n + 1).algebra
    out = []
    for op in ("meet", "prod"):
        S, B = _binary(small, op), _binary(big, op)
        m = small.size   # common labels keep their indices
        for x, y in zip(*np.nonzero(S != B[:m, :m])):
            out.append((op, small.labels[x], small.labels[y]))
    return out


# --------------------------------------------------------------------------
# depth growth


@dataclass
class DepthRow:
    i: int
    n: int
    depth: Optional[int]
    witness: Optional[MalcevWitness] = None
    verified: bool = False
    error: str = ""


def minimal_depth(i: int, budget: float = DEFAULT_BUDGET, max_depth: Optional[int] = None) -> DepthRow:
    """Least d with (0, b_0) in theta^{F_d}(0, a_i) on Q_{i+2}."""
    qn = make_qn(i + 2)
    A = qn.algebra
    limit = max_depth if max_depth is not None else 2 * A.size
    row = DepthRow(i, i + 2, None)
    try:
        for d in range(limit + 1):
            F = enumerate_terms(A.signature, d)
            rel, wit = theta_upper(A, F, 0, a(i), with_witness=True, budget=budget)
            if (0, b(0)) in rel:
                row.depth = d
                row.witness = wit[(0, b(0))]
                row.verified = verify_witness(A, row.witness) and all(
                    t.depth <= d for t, _, _ in row.witness.steps)
                return row
    except ResourceError as exc:
        row.error = str(exc)
        return row
    row.error = f"not reached within depth {limit}"
    return row


def depth_growth_experiment(max_i: int = 5, budget: float = DEFAULT_BUDGET) -> list[DepthRow]:
    if max_i < 1:
        raise InputError("max_i must be positive")
    rows = [minimal_depth(i, budget) for i in range(1, max_i + 1)]
    depths = [r.depth for r in rows if r.depth is not None]
    rows_ok = all(r.depth is not None for r in rows)
    if rows_ok:
        assert all(x < y for x, y in zip(depths, depths[1:])), f"depths not increasing: {depths}"
        assert all(r.verified for r in rows), "a depth-growth witness failed verification"
    return rows


# --------------------------------------------------------------------------
# congruence report


@dataclass
class QnReport:
    n: int
    principal: list  # ((x, y), Partition)
    intersection: Partition
    monolith: Optional[Partition]


def qn_congruence_report(n: int) -> QnReport:
    A = make_qn(n).algebra
    rows = []
    mu = Partition.full(A.size)
    for x in range(A.size):
        for y in range(x + 1, A.size):
            p = generate_congruence(A, [(x, y)])
            rows.append(((x, y), p))
            mu = mu.meet(p)
    return QnReport(n, rows, mu, None if mu.is_identity() else mu)
