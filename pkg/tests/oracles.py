"""Slow reference computations shared by the test modules."""
import itertools

from hlgt.config import GaugeConfig, brute_force_fake_flat, is_two_flat
from hlgt.gauge import GaugeElement, apply_gauge_element


def all_gauge_elements(X, L):
    for eta in itertools.product(range(X.E.order), repeat=len(L.tracks)):
        for u in itertools.product(range(X.G.order), repeat=len(L.vertices)):
            yield GaugeElement(eta, u)


def full_group_orbit_count(L, X):
    """Orbits of 2-flat configurations under every element of the gauge group."""
    nt = len(L.tracks)
    flat = [GaugeConfig(X, L, k[:nt], k[nt:]) for k in brute_force_fake_flat(L, X)]
    flat = [F for F in flat if is_two_flat(F)]
    elements = list(all_gauge_elements(X, L))
    seen, count = set(), 0
    for F in flat:
        if F.key in seen:
            continue
        count += 1
        seen.update(apply_gauge_element(F, U).key for U in elements)
    return count
