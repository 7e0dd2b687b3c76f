"""Finite groups as multiplication tables.

Elements are dense integer indices with the identity at index 0, so
homomorphisms and actions are plain index arrays.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NotAGroup, NotAHom, NotAnAction, OrderCapExceeded

MAX_ORDER = 512


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A validated finite group.

    ``table[a, b]`` is the index of ``a*b``.  ``perms`` holds the
    permutation images when the group was generated by permutations.
    Build instances through :func:`group_from_table` or
    :func:`group_from_generators`, which run the full validation.
    """

    name: str
    table: np.ndarray
    perms: tuple[tuple[int, ...], ...] | None = None
    inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.table.setflags(write=False)
        inv = np.argmin(self.table, axis=1)  # identity is index 0
        inv.setflags(write=False)
        object.__setattr__(self, "inverse", inv)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def identity(self) -> int:
        return 0

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def prod(self, *elements: int) -> int:
        acc = 0
        for x in elements:
            acc = int(self.table[acc, x])
        return acc

    def power(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        acc = 0
        for _ in range(n):
            acc = int(self.table[acc, a])
        return acc

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return int(self.table[self.table[g, x], self.inverse[g]])

    def element_order(self, a: int) -> int:
        n, x = 1, a
        while x != 0:
            x = int(self.table[x, a])
            n += 1
        return n

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def label(self, a: int):
        """JSON-friendly description of an element."""
        if self.perms is not None:
            return {"index": int(a), "perm": list(self.perms[a])}
        return {"index": int(a)}


def validate_table(table: np.ndarray) -> None:
    n = table.shape[0]
    if table.ndim != 2 or table.shape != (n, n) or n == 0:
        raise NotAGroup(f"table must be a non-empty square array, got shape {table.shape}")
    if table.min() < 0 or table.max() >= n:
        raise NotAGroup("table entries must lie in 0..n-1")
    ref = np.arange(n)
    for a in range(n):
        if not np.array_equal(np.sort(table[a]), ref):
            raise NotAGroup(f"row {a} is not a permutation (no inverse or not cancellative)")
        if not np.array_equal(np.sort(table[:, a]), ref):
            raise NotAGroup(f"column {a} is not a permutation (no inverse or not cancellative)")
    if not (np.array_equal(table[0], ref) and np.array_equal(table[:, 0], ref)):
        raise NotAGroup("index 0 is not a two-sided identity")
    # associativity, one slab per left factor to keep memory at O(n^2)
    for a in range(n):
        lhs = table[table[a]]          # (a*b)*c over (b, c)
        rhs = table[a][table]          # a*(b*c)
        if not np.array_equal(lhs, rhs):
            b, c = np.argwhere(lhs != rhs)[0]
            raise NotAGroup(f"associativity fails for triple ({a}, {b}, {c})")


def group_from_table(table: Sequence[Sequence[int]] | np.ndarray, name: str = "G",
                     perms=None) -> FiniteGroup:
    arr = np.array(table, dtype=np.int64)
    if arr.ndim != 2:
        raise NotAGroup("table must be two-dimensional")
    if arr.shape[0] > MAX_ORDER:
        raise OrderCapExceeded(f"group order {arr.shape[0]} exceeds cap {MAX_ORDER}")
    validate_table(arr)
    return FiniteGroup(name, arr, perms)


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # (p*q)(i) = p(q(i))
    return tuple(p[i] for i in q)


def group_from_generators(generators: Sequence[Sequence[int]], degree: int | None = None,
                          name: str = "G") -> FiniteGroup:
    """Closure of permutation generators (one-line image notation).

    Elements are numbered in breadth-first order from the identity,
    trying generators in the given order, so the numbering is reproducible.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    if degree is None:
        degree = len(gens[0]) if gens else 0
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise NotAGroup(f"generator {list(g)} is not a permutation of 0..{degree - 1}")
    ident = tuple(range(degree))
    index = {ident: 0}
    elements = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = _compose(x, g)
            if y not in index:
                if len(elements) >= MAX_ORDER:
                    raise OrderCapExceeded(f"generated group exceeds order cap {MAX_ORDER}")
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(elements):
        for j, q in enumerate(elements):
            table[i, j] = index[_compose(p, q)]
    return group_from_table(table, name=name, perms=tuple(elements))


def group_from_spec(spec: dict) -> FiniteGroup:
    name = spec.get("name", "G")
    if "table" in spec:
        return group_from_table(spec["table"], name=name)
    if "generators" in spec:
        return group_from_generators(spec["generators"], spec.get("degree"), name=name)
    raise NotAGroup("a group description needs either 'table' or 'generators'")


def group_to_spec(G: FiniteGroup) -> dict:
    return {"name": G.name, "table": G.table.tolist()}


def conjugacy_classes(G: FiniteGroup) -> list[tuple[int, ...]]:
    """Classes ordered by their minimal element; the identity class comes first."""
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for x in range(G.order):
        if seen[x]:
            continue
        cls = sorted({G.conj(g, x) for g in range(G.order)})
        seen[cls] = True
        classes.append(tuple(cls))
    return classes


# -- maps between groups ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    map: np.ndarray

    def __call__(self, a: int) -> int:
        return int(self.map[a])


@dataclass(frozen=True, eq=False)
class GroupAction:
    """Left action of ``acting`` on ``acted`` by automorphisms.

    ``perms[g, e]`` is the index of ``g |> e``.
    """

    acting: FiniteGroup
    acted: FiniteGroup
    perms: np.ndarray

    def __call__(self, g: int, e: int) -> int:
        return int(self.perms[g, e])


def hom_from_spec(source: FiniteGroup, target: FiniteGroup, map: Sequence[int]) -> GroupHom:
    arr = np.array(map, dtype=np.int64)
    if arr.shape != (source.order,):
        raise NotAHom(f"map must have length {source.order}, got {arr.shape}")
    if arr.min() < 0 or arr.max() >= target.order:
        raise NotAHom("map entries out of range of the target group")
    lhs = arr[source.table]
    rhs = target.table[arr[:, None], arr[None, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        a, b = (int(x) for x in bad[0])
        raise NotAHom(f"map({a}*{b}) != map({a})*map({b}); witness pair ({a}, {b})")
    arr.setflags(write=False)
    return GroupHom(source, target, arr)


def action_from_spec(acting: FiniteGroup, acted: FiniteGroup,
                     perms: Sequence[Sequence[int]]) -> GroupAction:
    arr = np.array(perms, dtype=np.int64)
    if arr.shape != (acting.order, acted.order):
        raise NotAnAction(f"action must be a {acting.order}x{acted.order} array, got {arr.shape}")
    ref = np.arange(acted.order)
    for g in range(acting.order):
        if not np.array_equal(np.sort(arr[g]), ref):
            raise NotAnAction(f"action of {g} is not a permutation")
        # automorphism: g|>(e e') = (g|>e)(g|>e')
        lhs = arr[g][acted.table]
        rhs = acted.table[arr[g][:, None], arr[g][None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            e, f = (int(x) for x in bad[0])
            raise NotAnAction(f"action of {g} is not an automorphism; witness ({e}, {f})")
    if not np.array_equal(arr[0], ref):
        raise NotAnAction("identity does not act trivially")
    # (gh)|>e = g|>(h|>e)
    for g in range(acting.order):
        lhs = arr[acting.table[g]]      # rows h: (g h)|> .
        rhs = arr[g][arr]               # rows h: g|>(h|> .)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            h = int(bad[0][0])
            raise NotAnAction(f"not a left action; witness pair ({g}, {h})")
    arr.setflags(write=False)
    return GroupAction(acting, acted, arr)


def conjugation_action(G: FiniteGroup) -> GroupAction:
    perms = np.array([[G.conj(g, x) for x in range(G.order)] for g in range(G.order)])
    return action_from_spec(G, G, perms)


def trivial_action(G: FiniteGroup, E: FiniteGroup) -> GroupAction:
    return action_from_spec(G, E, np.tile(np.arange(E.order), (G.order, 1)))


# -- small named groups ----------------------------------------------------

def trivial_group() -> FiniteGroup:
    return group_from_table([[0]], name="1")


def cyclic(n: int, name: str | None = None) -> FiniteGroup:
    """Z_n with element k the residue k."""
    a = np.arange(n)
    return group_from_table((a[:, None] + a[None, :]) % n, name=name or f"Z{n}")


def z2_multiplicative() -> FiniteGroup:
    """{+1, -1} under multiplication; index 0 is +1, index 1 is -1."""
    return group_from_table([[0, 1], [1, 0]], name="Z2x")


def symmetric(n: int) -> FiniteGroup:
    if n == 1:
        return trivial_group()
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return group_from_generators(gens, n, name=f"S{n}")


def direct_product(A: FiniteGroup, B: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """Element (a, b) gets index a * |B| + b."""
    na, nb = A.order, B.order
    ia, ib = np.divmod(np.arange(na * nb), nb)
    table = A.table[ia[:, None], ia[None, :]] * nb + B.table[ib[:, None], ib[None, :]]
    return group_from_table(table, name=name or f"{A.name}x{B.name}")
