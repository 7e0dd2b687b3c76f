"""Commuting-projector Hamiltonian on the span of fake-flat configurations.

Operators are stored exactly as an integer sparse numerator over a common
positive integer denominator; floats only appear when diagonalising.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.sparse as sp

from .config import (ConfigSpace, GaugeConfig, blob_holonomy, brute_force_fake_flat,
                     enumerate_fake_flat, eval_compiled_word)
from .errors import DimensionCapExceeded, FixtureMismatch, UnknownCell
from .gauge import edge_spike, edge_spike_key, vertex_spike, vertex_spike_key
from .groups import FiniteGroup
from .lattice import Lattice2
from .xmod import CrossedModule

MAX_DIM = 4096
SNAP_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """Exact rational matrix ``num / den`` (rows, cols may differ)."""

    num: sp.csr_matrix
    den: int = 1
    hermitian: bool = False

    def __post_init__(self):
        num = sp.csr_matrix(self.num, dtype=np.int64)
        num.eliminate_zeros()
        den = int(self.den)
        if den <= 0:
            raise ValueError("denominator must be positive")
        g = reduce(math.gcd, (int(x) for x in np.unique(np.abs(num.data))), den)
        if g > 1:
            num = sp.csr_matrix((num.data // g, num.indices, num.indptr), shape=num.shape)
            den //= g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def shape(self) -> tuple[int, int]:
        return self.num.shape

    @property
    def dimension(self) -> int:
        return self.num.shape[0]

    @classmethod
    def identity(cls, n: int) -> "SparseOperator":
        return cls(sp.identity(n, dtype=np.int64, format="csr"), 1, True)

    @classmethod
    def zero(cls, rows: int, cols: int | None = None) -> "SparseOperator":
        return cls(sp.csr_matrix((rows, rows if cols is None else cols), dtype=np.int64), 1)

    def _aligned(self, other: "SparseOperator"):
        den = math.lcm(self.den, other.den)
        return self.num * (den // self.den), other.num * (den // other.den), den

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        a, b, den = self._aligned(other)
        return SparseOperator(a + b, den, self.hermitian and other.hermitian)

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        a, b, den = self._aligned(other)
        return SparseOperator(a - b, den, self.hermitian and other.hermitian)

    def __neg__(self) -> "SparseOperator":
        return SparseOperator(-self.num, self.den, self.hermitian)

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        return SparseOperator(self.num @ other.num, self.den * other.den)

    def scale(self, p: int, q: int = 1) -> "SparseOperator":
        """Multiply by the rational p/q."""
        sign = -1 if q < 0 else 1
        return SparseOperator(self.num * (sign * p), abs(q) * self.den, self.hermitian)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseOperator) or self.shape != other.shape:
            return NotImplemented if not isinstance(other, SparseOperator) else False
        return (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return self.num.count_nonzero() == 0

    def commutator(self, other: "SparseOperator") -> "SparseOperator":
        return self @ other - other @ self

    def transpose(self) -> "SparseOperator":
        return SparseOperator(self.num.T.tocsr(), self.den, self.hermitian)

    def is_hermitian(self) -> bool:
        # real entries, so Hermitian means symmetric
        return self.shape[0] == self.shape[1] and (self.num != self.num.T).nnz == 0

    def to_dense(self) -> np.ndarray:
        return self.num.toarray().astype(float) / self.den

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.num[i, j]), self.den)


def _permutation_sum(rows: list[int], cols: list[int], n_rows: int, n_cols: int) -> sp.csr_matrix:
    data = np.ones(len(rows), dtype=np.int64)
    return sp.csr_matrix((data, (rows, cols)), shape=(n_rows, n_cols))


def _cell(L: Lattice2, kind: str, cell) -> int:
    index = {"vertex": L.vertex_index, "track": L.track_index, "blob": L.blob_index}[kind]
    size = len(index)
    if isinstance(cell, str):
        if cell not in index:
            raise UnknownCell(f"unknown {kind} {cell!r}")
        return index[cell]
    if not 0 <= int(cell) < size:
        raise UnknownCell(f"{kind} index {cell} out of range")
    return int(cell)


def spike_matrix(space: ConfigSpace, kind: str, cell, elements) -> sp.csr_matrix:
    """Integer matrix of sum_x U^x over ``elements`` (unnormalised)."""
    X, L = space.xmod, space.lattice
    i = _cell(L, kind, cell)
    fn = vertex_spike_key if kind == "vertex" else edge_spike_key
    nt = space.n_tracks
    rows, cols = [], []
    for j, key in enumerate(space.keys):
        g, e = key[:nt], key[nt:]
        for x in elements:
            g2, e2 = fn(X, L, i, x, g, e)
            rows.append(space.index[g2 + e2])
            cols.append(j)
    n = len(space)
    return _permutation_sum(rows, cols, n, n)


def build_Uv(space: ConfigSpace, v, g: int) -> SparseOperator:
    return SparseOperator(spike_matrix(space, "vertex", v, [g]))


def build_Ut(space: ConfigSpace, t, k: int) -> SparseOperator:
    return SparseOperator(spike_matrix(space, "track", t, [k]))


def build_Av(space: ConfigSpace, v) -> SparseOperator:
    G = space.xmod.G
    return SparseOperator(spike_matrix(space, "vertex", v, range(G.order)), G.order, True)


def build_Bt(space: ConfigSpace, t) -> SparseOperator:
    E = space.xmod.E
    return SparseOperator(spike_matrix(space, "track", t, range(E.order)), E.order, True)


def blob_holonomies(space: ConfigSpace, b) -> np.ndarray:
    X, L = space.xmod, space.lattice
    i = _cell(L, "blob", b)
    word = L.compiled_blobs[i]
    nt = space.n_tracks
    return np.array([eval_compiled_word(X, k[:nt], k[nt:], word) for k in space.keys], dtype=np.int64)


def build_Cbe(space: ConfigSpace, b, e: int = 0) -> SparseOperator:
    hol = blob_holonomies(space, b)
    return SparseOperator(sp.diags((hol == e).astype(np.int64), format="csr"), 1, True)


def zeta_operator(space: ConfigSpace) -> SparseOperator:
    """sum_b (1 - C_b^1): diagonal, counting the blobs with nontrivial 2-holonomy."""
    n = len(space)
    diag = np.zeros(n, dtype=np.int64)
    for b in range(len(space.lattice.blobs)):
        diag += blob_holonomies(space, b) != 0
    return SparseOperator(sp.diags(diag, format="csr"), 1, True)


@dataclass(frozen=True, eq=False)
class HamiltonianTerms:
    """The individual projectors and the assembled Hamiltonian."""

    A: dict
    B: dict
    C: dict
    H: SparseOperator
    calA: SparseOperator
    calB: SparseOperator
    calC: SparseOperator


def _complement_of_product(ops, n: int) -> SparseOperator:
    prod = SparseOperator.identity(n)
    for op in ops:
        prod = prod @ op
    return SparseOperator.identity(n) - SparseOperator(prod.num, prod.den, True)


def build_terms(space: ConfigSpace) -> HamiltonianTerms:
    """Every A_v, B_t, C_b^1 plus H and the normalised term projectors.

    The normalised projectors are 1 - prod(A_v), 1 - prod(B_t), 1 - prod(C_b);
    on a lattice with one vertex, one track and equivalent blobs they agree
    with the single-term complements.
    """
    L = space.lattice
    n = len(space)
    A = {v: build_Av(space, v) for v in L.vertices}
    B = {t.id: build_Bt(space, t.id) for t in L.tracks}
    C = {b.id: build_Cbe(space, b.id, 0) for b in L.blobs}
    one = SparseOperator.identity(n)
    H = SparseOperator.zero(n)
    for op in list(A.values()) + list(B.values()) + list(C.values()):
        H = H + (one - op)
    H = SparseOperator(H.num, H.den, True)
    return HamiltonianTerms(A, B, C, H, _complement_of_product(A.values(), n),
                            _complement_of_product(B.values(), n),
                            _complement_of_product(C.values(), n))


def build_hamiltonian(space: ConfigSpace) -> SparseOperator:
    """sum_v (1 - A_v) + sum_t (1 - B_t) + sum_b (1 - C_b^1)."""
    return build_terms(space).H


# -- spectra -------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumReport:
    dimension: int
    eigenvalues: tuple[tuple[float | int, int], ...]   # (value, multiplicity), ascending
    unsnapped: tuple[float, ...] = ()

    @property
    def min_eigenvalue(self):
        return self.eigenvalues[0][0] if self.eigenvalues else None

    def multiplicity(self, value) -> int:
        return sum(m for v, m in self.eigenvalues if v == value)

    def as_dict(self) -> dict:
        return {v: m for v, m in self.eigenvalues}

    def to_json(self) -> dict:
        return {"dimension": self.dimension,
                "eigenvalues": [{"value": v, "multiplicity": m} for v, m in self.eigenvalues],
                "unsnapped": list(self.unsnapped)}


def spectrum_from_values(values: np.ndarray, tol: float = SNAP_TOL) -> SpectrumReport:
    values = np.sort(np.asarray(values, dtype=float))
    groups: list[list] = []
    unsnapped = []
    for x in values:
        r = round(x)
        v = int(r) if abs(x - r) <= tol else float(x)
        if isinstance(v, float):
            unsnapped.append(v)
        if groups and (groups[-1][0] == v or (isinstance(v, float) and isinstance(groups[-1][0], float)
                                              and abs(groups[-1][0] - v) <= tol)):
            groups[-1][1] += 1
        else:
            groups.append([v, 1])
    return SpectrumReport(len(values), tuple((v, m) for v, m in groups), tuple(unsnapped))


def spectrum(H: SparseOperator | np.ndarray, max_dim: int = MAX_DIM, tol: float = SNAP_TOL) -> SpectrumReport:
    """Dense Hermitian diagonalisation; integers within ``tol`` are snapped."""
    n = H.shape[0]
    if n > max_dim:
        raise DimensionCapExceeded(f"dimension {n} exceeds cap {max_dim}")
    dense = H.to_dense() if isinstance(H, SparseOperator) else np.asarray(H)
    if n == 0:
        return SpectrumReport(0, ())
    return spectrum_from_values(np.linalg.eigvalsh(dense), tol)


def dense_hamiltonian_oracle(L: Lattice2, X: CrossedModule) -> tuple[list, np.ndarray]:
    """Independent float construction from the brute-force basis and per-cell averages."""
    keys = brute_force_fake_flat(L, X)
    pos = {k: i for i, k in enumerate(keys)}
    n, nt = len(keys), len(L.tracks)
    H = np.zeros((n, n))
    for j, k in enumerate(keys):
        F = GaugeConfig(X, L, k[:nt], k[nt:])
        for v in L.vertices:
            H[j, j] += 1
            for a in range(X.G.order):
                H[pos[vertex_spike(F, v, a).key], j] -= 1 / X.G.order
        for t in L.tracks:
            H[j, j] += 1
            for x in range(X.E.order):
                H[pos[edge_spike(F, t.id, x).key], j] -= 1 / X.E.order
        for b in L.blobs:
            H[j, j] += blob_holonomy(F, b.id) != 0
    return keys, H


# -- ground states by orbit counting ---------------------------------------------

def generating_set(G: FiniteGroup) -> list[int]:
    """Greedy generating set: add the smallest element outside the current subgroup."""
    gens: list[int] = []
    sub = {0}
    while len(sub) < G.order:
        x = min(set(range(G.order)) - sub)
        gens.append(x)
        frontier = list(sub)
        sub = set(sub)
        while frontier:
            y = frontier.pop()
            for s in gens:
                z = G.mul(y, s)
                if z not in sub:
                    sub.add(z)
                    frontier.append(z)
    return gens


def gauge_orbits(space: ConfigSpace, subset=None) -> list[list[int]]:
    """Orbits of the spike action on the given basis indices (default: all), via union-find."""
    X, L = space.xmod, space.lattice
    nt = space.n_tracks
    idx = list(range(len(space))) if subset is None else list(subset)
    parent = {i: i for i in idx}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    gG, gE = generating_set(X.G), generating_set(X.E)
    for j in idx:
        key = space.keys[j]
        g, e = key[:nt], key[nt:]
        moves = [vertex_spike_key(X, L, v, a, g, e) for v in range(len(L.vertices)) for a in gG]
        moves += [edge_spike_key(X, L, t, k, g, e) for t in range(nt) for k in gE]
        for g2, e2 in moves:
            i = space.index[g2 + e2]
            if i not in parent:
                raise UnknownCell("gauge move left the chosen subset")
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    orbits: dict[int, list[int]] = {}
    for i in idx:
        orbits.setdefault(find(i), []).append(i)
    return sorted(orbits.values())


def two_flat_indices(space: ConfigSpace) -> list[int]:
    X, L = space.xmod, space.lattice
    nt = space.n_tracks
    return [j for j, k in enumerate(space.keys)
            if all(eval_compiled_word(X, k[:nt], k[nt:], w) == 0 for w in L.compiled_blobs)]


def ground_state_degeneracy(L_or_space, X: CrossedModule | None = None, **enum_kw) -> int:
    """Number of gauge orbits of 2-flat configurations (exact)."""
    space = L_or_space if isinstance(L_or_space, ConfigSpace) else enumerate_fake_flat(L_or_space, X, **enum_kw)
    return len(gauge_orbits(space, two_flat_indices(space)))


# -- the projection between the two decompositions of the 3-sphere ----------------

def _check_pair(globe: ConfigSpace, minimal: ConfigSpace) -> None:
    Lg, Lm = globe.lattice, minimal.lattice
    if globe.xmod is not minimal.xmod and globe.xmod.name != minimal.xmod.name:
        raise FixtureMismatch("the two spaces use different crossed modules")
    if (len(Lg.vertices), len(Lg.tracks), len(Lg.plaquettes)) != (1, 1, 2):
        raise FixtureMismatch(f"{Lg.name!r} is not shaped like the globe (1 vertex, 1 track, 2 plaquettes)")
    if (len(Lm.vertices), len(Lm.tracks), len(Lm.plaquettes)) != (1, 0, 1):
        raise FixtureMismatch(f"{Lm.name!r} is not shaped like the minimal sphere (1 vertex, 1 plaquette)")


def mu(globe: ConfigSpace, minimal: ConfigSpace) -> SparseOperator:
    """(g, e, f) -> e^-1 f, as a |minimal| x |globe| matrix."""
    _check_pair(globe, minimal)
    E = globe.xmod.E
    rows, cols = [], []
    for j, (_, e, f) in enumerate(globe.keys):
        m = E.mul(E.inv(e), f)
        if (m,) not in minimal.index:
            raise FixtureMismatch(f"e^-1 f = {m} is not a minimal-sphere state")
        rows.append(minimal.index[(m,)])
        cols.append(j)
    return SparseOperator(_permutation_sum(rows, cols, len(minimal), len(globe)))


def mu_star(globe: ConfigSpace, minimal: ConfigSpace) -> SparseOperator:
    """m -> sum over e^-1 f = m of (d(e), e, f)."""
    return mu(globe, minimal).transpose()
