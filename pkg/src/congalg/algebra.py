"""Finite algebras of a finite signature, and the ``.alg`` text format."""

from __future__ import annotations

import itertools
import re
import zlib
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

_NAME = re.compile(r"^[^\s(),#|@;]+$")
# reserved inside term literals
_RESERVED = {"x", "_"}


@dataclass(frozen=True)
class Signature:
    """Ordered operation symbols; the order fixes operation indexing."""

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        syms = tuple((str(nm), int(ar)) for nm, ar in self.symbols)
        names = [nm for nm, _ in syms]
        if len(set(names)) != len(names):
            raise InputError(f"duplicate operation names in {names}")
        for nm, ar in syms:
            if not nm or not _NAME.match(nm) or nm in _RESERVED:
                raise InputError(f"bad operation name {nm!r}")
            if ar < 0:
                raise InputError(f"negative arity for {nm!r}")
        object.__setattr__(self, "symbols", syms)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def index(self, name: str) -> int:
        for i, (nm, _) in enumerate(self.symbols):
            if nm == name:
                return i
        raise InputError(f"unknown operation {name!r}")

    def arity(self, op: int) -> int:
        return self.symbols[op][1]

    def name(self, op: int) -> str:
        return self.symbols[op][0]

    def __str__(self):
        return ", ".join(f"{nm}/{ar}" for nm, ar in self.symbols)


class FiniteAlgebra:
    """Carrier {0..n-1} with one total table per operation symbol.

    ``tables[j]`` is an integer array of shape ``(n,) * arity``; C order is
    lexicographic with the first argument most significant. Instances are
    immutable and hash by content.
    """

    def __init__(self, signature: Signature, size: int, tables: Sequence, name: str = "A",
                 labels: Sequence[str] | None = None):
        if isinstance(signature, (list, tuple)):
            signature = Signature(tuple(signature))
        if size < 1:
            raise InputError("algebra size must be positive")
        if len(tables) != len(signature):
            raise InputError(f"expected {len(signature)} tables, got {len(tables)}")
        arrs = []
        for (nm, ar), tab in zip(signature, tables):
            arr = np.asarray(tab, dtype=np.intp)
            if arr.size != size ** ar:
                raise InputError(f"table for {nm} has {arr.size} entries, expected {size ** ar}")
            arr = arr.reshape((size,) * ar)
            if arr.size and (arr.min() < 0 or arr.max() >= size):
                raise InputError(f"table for {nm} has entries outside [0, {size})")
            arr = arr.copy()
            arr.flags.writeable = False
            arrs.append(arr)
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != size or len(set(labels)) != size:
                raise InputError("labels must name every element exactly once")
        self.signature = signature
        self.size = int(size)
        self.tables = tuple(arrs)
        self.name = name
        self.labels = labels

    def _key(self):
        return (self.signature, self.size, tuple(t.tobytes() for t in self.tables))

    def __eq__(self, other):
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return self._key() == other._key()

    @cached_property
    def _hash(self):
        return hash(self._key())

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FiniteAlgebra({self.name!r}, size={self.size}, ops=[{self.signature}])"

    def op(self, name_or_index, *args: int) -> int:
        j = name_or_index if isinstance(name_or_index, int) else self.signature.index(name_or_index)
        return int(self.tables[j][tuple(args)])

    def element_name(self, e: int) -> str:
        return self.labels[e] if self.labels is not None else str(e)

    def element(self, tok: str) -> int:
        """Parse an element token: a label if labels are attached, else an index."""
        if self.labels is not None and tok in self.labels:
            return self.labels.index(tok)
        try:
            e = int(tok)
        except ValueError:
            raise InputError(f"unknown element {tok!r}") from None
        if not 0 <= e < self.size:
            raise InputError(f"element {e} out of range for size {self.size}")
        return e

    def checksums(self) -> list[int]:
        return [zlib.crc32(np.asarray(t, dtype=np.int64).tobytes()) for t in self.tables]

    @cached_property
    def elementary(self) -> "ElementaryMaps":
        return elementary_maps(self)

    def with_labels(self, labels: Sequence[str] | None, name: str | None = None) -> FiniteAlgebra:
        return FiniteAlgebra(self.signature, self.size, self.tables,
                             name=self.name if name is None else name, labels=labels)


@dataclass(frozen=True, eq=False)
class ElementaryMaps:
    """All translations ``a -> op(e_0, .., a, .., e_{k-1})`` of one algebra.

    ``maps`` has one row per (op, slot, parameter tuple), deduplicated by map
    vector in first-occurrence order; ``provenance[r]`` is (op, slot, params).
    """

    maps: np.ndarray
    provenance: tuple[tuple[int, int, tuple[int, ...]], ...]

    @cached_property
    def columns(self) -> np.ndarray:
        """``maps.T`` in C order: row u lists every f(u)."""
        return np.ascontiguousarray(self.maps.T)


def slot_table(table: np.ndarray, slot: int) -> np.ndarray:
    """Table of an arity-k op with the ``slot`` argument moved last: shape (n^(k-1), n)."""
    n = table.shape[0]
    return np.moveaxis(table, slot, -1).reshape(-1, n)


def elementary_maps(A: FiniteAlgebra) -> ElementaryMaps:
    n = A.size
    rows = []
    prov = []
    for j, (_, ar) in enumerate(A.signature):
        if ar == 0:
            continue
        for slot in range(ar):
            st = slot_table(A.tables[j], slot)
            rows.append(st)
            prov.extend((j, slot, params) for params in itertools.product(range(n), repeat=ar - 1))
    if not rows:
        maps = np.empty((0, n), dtype=np.intp)
        return ElementaryMaps(maps, ())
    allmaps = np.concatenate(rows)
    keep = unique_rows_first(allmaps)
    maps = np.ascontiguousarray(allmaps[keep])
    maps.flags.writeable = False
    return ElementaryMaps(maps, tuple(prov[i] for i in keep))


def unique_rows_first(rows: np.ndarray) -> np.ndarray:
    """Indices of the first occurrence of each distinct row, in ascending order."""
    if len(rows) == 0:
        return np.empty(0, dtype=np.intp)
    if rows.size <= 1 << 18:
        first: dict[tuple, int] = {}
        for i, r in enumerate(map(tuple, rows.tolist())):
            first.setdefault(r, i)
        return np.fromiter(first.values(), dtype=np.intp, count=len(first))
    _, idx = np.unique(rows, axis=0, return_index=True)
    return np.sort(idx)


# --------------------------------------------------------------------------
# .alg text format


def parse_alg(text: str) -> FiniteAlgebra:
    """Parse the line-oriented ``.alg`` format.

    Besides ``algebra``/``size``/``op`` this accepts an optional ``labels``
    line naming the elements in carrier order.
    """
    tokens: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        tokens.extend((lineno, tok) for tok in line.split())
    if not tokens:
        raise InputError("empty algebra file")

    pos = 0

    def take(what):
        nonlocal pos
        if pos >= len(tokens):
            last = tokens[-1][0]
            raise InputError(f"line {last}: unexpected end of file, expected {what}")
        tok = tokens[pos]
        pos += 1
        return tok

    def take_int(what, minimum=0):
        lineno, tok = take(what)
        try:
            v = int(tok)
        except ValueError:
            raise InputError(f"line {lineno}: expected {what}, got {tok!r}") from None
        if v < minimum:
            raise InputError(f"line {lineno}: {what} must be >= {minimum}, got {v}")
        return v

    name = "A"
    size = None
    labels = None
    symbols: list[tuple[str, int]] = []
    tables: list[list[int]] = []
    while pos < len(tokens):
        lineno, kw = take("directive")
        if kw == "algebra":
            name = take("algebra name")[1]
        elif kw == "size":
            if size is not None:
                raise InputError(f"line {lineno}: size given twice")
            size = take_int("size", 1)
        elif kw == "labels":
            if size is None:
                raise InputError(f"line {lineno}: labels before size")
            labels = [take("label")[1] for _ in range(size)]
        elif kw == "op":
            if size is None:
                raise InputError(f"line {lineno}: op before size")
            lno, opname = take("operation name")
            if not _NAME.match(opname) or opname in _RESERVED:
                raise InputError(f"line {lno}: bad operation name {opname!r}")
            ar = take_int("arity")
            entries = []
            for _ in range(size ** ar):
                v = take_int(f"table entry for {opname}")
                if v >= size:
                    raise InputError(f"line {tokens[pos - 1][0]}: entry {v} outside [0, {size})")
                entries.append(v)
            symbols.append((opname, ar))
            tables.append(entries)
        else:
            raise InputError(f"line {lineno}: unknown directive {kw!r}")
    if size is None:
        raise InputError("missing size directive")
    try:
        sig = Signature(tuple(symbols))
    except InputError as exc:
        raise InputError(f"bad signature: {exc}") from None
    return FiniteAlgebra(sig, size, tables, name=name, labels=labels)


def read_alg(path) -> FiniteAlgebra:
    with open(path, encoding="utf-8") as fh:
        return parse_alg(fh.read())


def format_alg(A: FiniteAlgebra) -> str:
    n = A.size
    out = [f"algebra {A.name}", f"size {n}"]
    if A.labels is not None:
        out.append("labels " + " ".join(A.labels))
    for (nm, ar), tab in zip(A.signature, A.tables):
        out.append(f"op {nm} {ar}")
        flat = [str(int(v)) for v in np.ravel(tab)]
        if ar == 0:
            out.append(flat[0])
        else:
            for i in range(0, len(flat), n):
                out.append(" ".join(flat[i:i + n]))
    return "\n".join(out) + "\n"


def make_algebra(size: int, ops: Iterable[tuple[str, int, Sequence[int]]], name="A",
                 labels=None) -> FiniteAlgebra:
    """Convenience constructor from ``(name, arity, flat_table)`` triples."""
    ops = list(ops)
    sig = Signature(tuple((nm, ar) for nm, ar, _ in ops))
    return FiniteAlgebra(sig, size, [tab for _, _, tab in ops], name=name, labels=labels)
