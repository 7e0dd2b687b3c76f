"""Gauge transformations: vertex spikes, edge spikes and the gauge group."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .config import GaugeConfig
from .errors import UnknownCell
from .lattice import Lattice2
from .xmod import CrossedModule


def _vertex(L: Lattice2, v) -> int:
    if isinstance(v, str):
        if v not in L.vertex_index:
            raise UnknownCell(f"unknown vertex {v!r}")
        return L.vertex_index[v]
    if not 0 <= v < len(L.vertices):
        raise UnknownCell(f"vertex index {v} out of range")
    return v


def _track(L: Lattice2, t) -> int:
    if isinstance(t, str):
        if t not in L.track_index:
            raise UnknownCell(f"unknown track {t!r}")
        return L.track_index[t]
    if not 0 <= t < len(L.tracks):
        raise UnknownCell(f"track index {t} out of range")
    return t


def vertex_spike_key(X: CrossedModule, L: Lattice2, v: int, h: int, g, e) -> tuple[tuple, tuple]:
    G = X.G
    hi = G.inv(h)
    g = list(g)
    for i, (s, t) in enumerate(L.track_ends):
        if s == v:
            g[i] = G.mul(h, g[i])
        if t == v:
            g[i] = G.mul(g[i], hi)
    e = list(e)
    for j, b in enumerate(L.plaquette_bases):
        if b == v:
            e[j] = X.act(h, e[j])
    return tuple(g), tuple(e)


def edge_spike_key(X: CrossedModule, L: Lattice2, t: int, k: int, g, e) -> tuple[tuple, tuple]:
    G, E = X.G, X.E
    old = g[t]
    new = G.mul(X.d(k), old)
    g = list(g)
    g[t] = new
    kinv = E.inv(k)
    e = list(e)
    for j, word in enumerate(L.compiled_boundaries):
        if t not in L.tracks_in_plaquette[j]:
            continue
        a, x = 0, e[j]
        # earlier occurrences of t already carry the new colour
        for s, sign in word:
            if s == t:
                if sign > 0:
                    x = E.mul(x, X.act(a, kinv))
                else:
                    x = E.mul(x, X.act(G.mul(a, G.inv(old)), k))
            c = g[s]
            a = G.mul(a, c if sign > 0 else G.inv(c))
        e[j] = x
    return tuple(g), tuple(e)


def vertex_spike(F: GaugeConfig, v, h: int) -> GaugeConfig:
    """Gauge transformation by ``h`` in G at vertex ``v``."""
    g, e = vertex_spike_key(F.xmod, F.lattice, _vertex(F.lattice, v), h, F.g, F.e)
    return F.replace(g, e)


def edge_spike(F: GaugeConfig, t, k: int) -> GaugeConfig:
    """Gauge transformation by ``k`` in E along track ``t``."""
    g, e = edge_spike_key(F.xmod, F.lattice, _track(F.lattice, t), k, F.g, F.e)
    return F.replace(g, e)


@dataclass(frozen=True)
class GaugeElement:
    """``eta`` assigns an E element to each track, ``u`` a G element to each vertex."""

    eta: tuple[int, ...]
    u: tuple[int, ...]

    @classmethod
    def identity(cls, L: Lattice2) -> "GaugeElement":
        return cls((0,) * len(L.tracks), (0,) * len(L.vertices))

    @classmethod
    def from_maps(cls, L: Lattice2, eta: Mapping[str, int] | None = None,
                  u: Mapping[str, int] | None = None) -> "GaugeElement":
        eta, u = eta or {}, u or {}
        for t in eta:
            _track(L, t)
        for v in u:
            _vertex(L, v)
        return cls(tuple(eta.get(t.id, 0) for t in L.tracks), tuple(u.get(v, 0) for v in L.vertices))


def bullet(X: CrossedModule, L: Lattice2, u, eta) -> tuple[int, ...]:
    """(u . eta)(t) = u(source t) |> eta(t)."""
    return tuple(X.act(u[s], x) for (s, _), x in zip(L.track_ends, eta))


def compose(X: CrossedModule, L: Lattice2, a: GaugeElement, b: GaugeElement) -> GaugeElement:
    """Semidirect product (eta, u)(eta', u') = (eta * (u . eta'), u u')."""
    moved = bullet(X, L, a.u, b.eta)
    eta = tuple(X.E.mul(x, y) for x, y in zip(a.eta, moved))
    u = tuple(X.G.mul(x, y) for x, y in zip(a.u, b.u))
    return GaugeElement(eta, u)


def inverse(X: CrossedModule, L: Lattice2, a: GaugeElement) -> GaugeElement:
    uinv = tuple(X.G.inv(x) for x in a.u)
    eta = bullet(X, L, uinv, tuple(X.E.inv(x) for x in a.eta))
    return GaugeElement(eta, uinv)


def apply_gauge_key(X: CrossedModule, L: Lattice2, a: GaugeElement, g, e):
    for v, h in enumerate(a.u):
        if h:
            g, e = vertex_spike_key(X, L, v, h, g, e)
    for t, k in enumerate(a.eta):
        if k:
            g, e = edge_spike_key(X, L, t, k, g, e)
    return g, e


def apply_gauge_element(F: GaugeConfig, a: GaugeElement) -> GaugeConfig:
    """Vertex part first, then the edge part."""
    g, e = apply_gauge_key(F.xmod, F.lattice, a, F.g, F.e)
    return F.replace(g, e)
