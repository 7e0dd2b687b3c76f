"""Fake-flat gauge configurations: enumeration and 1-/2-holonomy."""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InvariantBreach, MalformedWord, NotClassFunction, NotFakeFlat, SpaceTooLarge
from .groups import FiniteGroup, conjugacy_classes
from .lattice import Lattice2, PathWord, WordTerm, check_word_terms
from .xmod import CrossedModule

MAX_STATES = 10**7


@dataclass(frozen=True)
class GaugeConfig:
    """Track colours ``g`` (in G) and plaquette colours ``e`` (in E), in the
    lattice's declared order."""

    xmod: CrossedModule = field(compare=False, repr=False)
    lattice: Lattice2 = field(compare=False, repr=False)
    g: tuple[int, ...]
    e: tuple[int, ...]

    @property
    def key(self) -> tuple[int, ...]:
        return self.g + self.e

    @property
    def track_colors(self) -> dict[str, int]:
        return {t.id: c for t, c in zip(self.lattice.tracks, self.g)}

    @property
    def plaquette_colors(self) -> dict[str, int]:
        return {p.id: c for p, c in zip(self.lattice.plaquettes, self.e)}

    def replace(self, g=None, e=None) -> "GaugeConfig":
        return GaugeConfig(self.xmod, self.lattice, self.g if g is None else tuple(g),
                           self.e if e is None else tuple(e))


def word_hol(G: FiniteGroup, colors: Sequence[int], word) -> int:
    """Ordered product of ``colors[t]^s`` along a compiled word."""
    table, inv = G.table, G.inverse
    acc = 0
    for t, s in word:
        c = colors[t]
        acc = table[acc, c if s > 0 else inv[c]]
    return int(acc)


def _fake_flat_violations(X: CrossedModule, L: Lattice2, g, e) -> list[str]:
    bad = []
    for j, word in enumerate(L.compiled_boundaries):
        if X.G.inv(X.d(e[j])) != word_hol(X.G, g, word):
            bad.append(L.plaquettes[j].id)
    return bad


def is_fake_flat(F: GaugeConfig) -> bool:
    return not _fake_flat_violations(F.xmod, F.lattice, F.g, F.e)


def make_config(X: CrossedModule, L: Lattice2, track_colors, plaquette_colors) -> GaugeConfig:
    """Build a configuration from dicts keyed by cell id (or sequences in lattice order)."""
    if isinstance(track_colors, Mapping):
        track_colors = [track_colors[t.id] for t in L.tracks]
    if isinstance(plaquette_colors, Mapping):
        plaquette_colors = [plaquette_colors[p.id] for p in L.plaquettes]
    g, e = tuple(int(x) for x in track_colors), tuple(int(x) for x in plaquette_colors)
    if len(g) != len(L.tracks) or len(e) != len(L.plaquettes):
        raise NotFakeFlat("colouring does not cover every track and plaquette")
    if any(not 0 <= x < X.G.order for x in g) or any(not 0 <= x < X.E.order for x in e):
        raise NotFakeFlat("colour index out of range")
    bad = _fake_flat_violations(X, L, g, e)
    if bad:
        raise NotFakeFlat(f"fake-flatness fails at plaquettes {bad}")
    return GaugeConfig(X, L, g, e)


def naive_vacuum(X: CrossedModule, L: Lattice2) -> GaugeConfig:
    return GaugeConfig(X, L, (0,) * len(L.tracks), (0,) * len(L.plaquettes))


def path_holonomy(F: GaugeConfig, word: PathWord) -> int:
    L = F.lattice
    L.check_composable(word)
    return word_hol(F.xmod.G, F.g, tuple((L.track_index[t], s) for t, s in word))


def eval_compiled_word(X: CrossedModule, g, e, cword) -> int:
    """prod_i hol(path_i) |> e_{P_i}^{sign_i}, left to right."""
    E, act = X.E, X.action.perms
    acc = 0
    for path, p, s in cword:
        x = e[p] if s > 0 else int(E.inverse[e[p]])
        x = act[word_hol(X.G, g, path), x]
        acc = E.table[acc, x]
    return int(acc)


def surface_holonomy(F: GaugeConfig, word: Sequence[WordTerm], base: str | None = None) -> int:
    """E-valued evaluation of a disk or sphere given as an evaluation word."""
    L = F.lattice
    if base is None:
        if word and word[0].path:
            base = L.step_ends(word[0].path[0])[0]
        elif word:
            base = L.plaquette(word[0].plaquette).base
    if word:
        check_word_terms(L, base, word, exc=MalformedWord)
    return eval_compiled_word(F.xmod, F.g, F.e, L.compile_word(word))


def blob_holonomy(F: GaugeConfig, blob: str | int) -> int:
    L = F.lattice
    i = L.blob_index[blob] if isinstance(blob, str) else blob
    value = eval_compiled_word(F.xmod, F.g, F.e, L.compiled_blobs[i])
    if F.xmod.d(value) != 0:
        raise InvariantBreach(f"blob {L.blobs[i].id!r} evaluates outside ker d")
    return value


def zeta(F: GaugeConfig) -> int:
    """Number of blobs with nontrivial 2-holonomy."""
    return sum(1 for i in range(len(F.lattice.blobs)) if blob_holonomy(F, i) != 0)


def is_two_flat(F: GaugeConfig) -> bool:
    return zeta(F) == 0


def wilson_action(F: GaugeConfig, chi) -> float:
    """Sum over plaquettes of Re chi(hol(dP)); ``chi`` is indexed by G elements."""
    G = F.xmod.G
    chi = np.asarray(chi, dtype=complex)
    if chi.shape != (G.order,):
        raise NotClassFunction(f"character must have {G.order} values")
    for cls in conjugacy_classes(G):
        if not np.allclose(chi[list(cls)], chi[cls[0]], atol=1e-12):
            raise NotClassFunction(f"values differ on the conjugacy class {list(cls)}")
    return float(sum(chi[word_hol(G, F.g, w)].real for w in F.lattice.compiled_boundaries))


# -- the configuration basis --------------------------------------------------

@dataclass(frozen=True, eq=False)
class ConfigSpace:
    """All fake-flat configurations, lexicographic in (track, plaquette) colours."""

    xmod: CrossedModule
    lattice: Lattice2
    keys: tuple[tuple[int, ...], ...]
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {k: i for i, k in enumerate(self.keys)})

    def __len__(self):
        return len(self.keys)

    @property
    def n_tracks(self) -> int:
        return len(self.lattice.tracks)

    def __getitem__(self, i: int) -> GaugeConfig:
        k = self.keys[i]
        nt = self.n_tracks
        return GaugeConfig(self.xmod, self.lattice, k[:nt], k[nt:])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def index_of(self, F: GaugeConfig) -> int:
        return self.index[F.key]

    def packed(self) -> np.ndarray:
        return np.array(self.keys, dtype=np.int64).reshape(len(self.keys), -1)


def estimate_size(L: Lattice2, X: CrossedModule) -> int:
    """Upper bound on the number of fake-flat configurations."""
    return X.G.order ** len(L.tracks) * len(X.kernel) ** len(L.plaquettes)


def _enumerate_prefix(L: Lattice2, X: CrossedModule, first: int | None) -> list[tuple[int, ...]]:
    G, nt = X.G, len(L.tracks)
    words = L.compiled_boundaries
    out = []
    if nt == 0:
        colorings = [()]
    elif first is None:
        colorings = itertools.product(range(G.order), repeat=nt)
    else:
        colorings = ((first,) + rest for rest in itertools.product(range(G.order), repeat=nt - 1))
    for g in colorings:
        choices = []
        for w in words:
            fib = X.fiber(int(G.inverse[word_hol(G, g, w)]))
            if not fib:
                break
            choices.append(fib)
        else:
            out.extend(g + e for e in itertools.product(*choices))
    return out


def enumerate_fake_flat(L: Lattice2, X: CrossedModule, max_states: int = MAX_STATES,
                        workers: int = 1) -> ConfigSpace:
    """Stream over track colourings; each plaquette then ranges over a boundary fiber."""
    est = estimate_size(L, X)
    if est > max_states:
        raise SpaceTooLarge(f"state space may reach {est} configurations (cap {max_states})")
    if workers > 1 and L.tracks:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(lambda c: _enumerate_prefix(L, X, c), range(X.G.order)))
        keys = [k for run in runs for k in run]
    else:
        keys = _enumerate_prefix(L, X, None)
    return ConfigSpace(X, L, tuple(keys))


def brute_force_fake_flat(L: Lattice2, X: CrossedModule) -> list[tuple[int, ...]]:
    """Reference enumeration: every colouring, filtered by the fake-flat predicate."""
    nt, np_ = len(L.tracks), len(L.plaquettes)
    out = []
    for g in itertools.product(range(X.G.order), repeat=nt):
        for e in itertools.product(range(X.E.order), repeat=np_):
            if not _fake_flat_violations(X, L, g, e):
                out.append(g + e)
    return out
