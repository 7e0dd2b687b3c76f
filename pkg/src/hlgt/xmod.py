"""Finite crossed modules (strict 2-groups)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import PeifferOneViolation, PeifferTwoViolation, InvariantBreach
from .groups import (FiniteGroup, GroupAction, GroupHom, action_from_spec, conjugation_action,
                     cyclic, direct_product, group_from_spec, hom_from_spec, symmetric,
                     trivial_action, trivial_group, z2_multiplicative)


@dataclass(frozen=True)
class FluxOrbit:
    elements: tuple[int, ...]

    @property
    def representative(self) -> int:
        return self.elements[0]

    def __contains__(self, k):
        return k in self.elements

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True, eq=False)
class CrossedModule:
    """Boundary map ``E -> G`` plus a left action of ``G`` on ``E``.

    Construct with :func:`crossed_module`, which checks both Peiffer relations.
    """

    name: str
    E: FiniteGroup
    G: FiniteGroup
    boundary: GroupHom
    action: GroupAction
    kernel: tuple[int, ...] = field(init=False)
    image: tuple[int, ...] = field(init=False)
    fiber_rep: dict = field(init=False, repr=False)
    fibers: dict = field(init=False, repr=False)

    def __post_init__(self):
        d = self.boundary.map
        kernel = tuple(int(e) for e in np.flatnonzero(d == 0))
        image = tuple(sorted({int(x) for x in d}))
        fiber_rep = {}
        for e in range(self.E.order):
            fiber_rep.setdefault(int(d[e]), e)
        # each fiber enumerated as rep * kernel, sorted for lexicographic enumeration
        fibers = {g: tuple(sorted(self.E.mul(r, k) for k in kernel)) for g, r in fiber_rep.items()}
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "image", image)
        object.__setattr__(self, "fiber_rep", fiber_rep)
        object.__setattr__(self, "fibers", fibers)

    def __repr__(self):
        return f"CrossedModule({self.name!r}, E={self.E.name}, G={self.G.name})"

    def d(self, e: int) -> int:
        return int(self.boundary.map[e])

    def act(self, g: int, e: int) -> int:
        return int(self.action.perms[g, e])

    def fiber(self, g: int) -> tuple[int, ...]:
        """Sorted preimage of ``g`` under the boundary map (empty if g is not in the image)."""
        return self.fibers.get(g, ())

    def check_derived(self) -> None:
        """Assert the structural consequences of the Peiffer relations."""
        E, G = self.E, self.G
        ker = set(self.kernel)
        for k in self.kernel:
            for e in range(E.order):
                if E.conj(e, k) not in ker:
                    raise InvariantBreach(f"kernel not normal: {e} {k}")
        img = set(self.image)
        for a in self.image:
            for b in self.image:
                if G.mul(a, G.inv(b)) not in img:
                    raise InvariantBreach("image not a subgroup")
        for g, fib in self.fibers.items():
            if len(fib) != len(self.kernel) or any(self.d(e) != g for e in fib):
                raise InvariantBreach(f"fiber over {g} is not a kernel coset")
        for g in range(G.order):
            for h in range(G.order):
                if G.mul(G.inv(g), h) in img:
                    for m in self.kernel:
                        if self.act(g, m) != self.act(h, m):
                            raise InvariantBreach("action on kernel does not factor through coker")


def crossed_module(E: FiniteGroup, G: FiniteGroup, boundary, action, name: str = "X") -> CrossedModule:
    if not isinstance(boundary, GroupHom):
        boundary = hom_from_spec(E, G, boundary)
    if not isinstance(action, GroupAction):
        action = action_from_spec(G, E, action)
    d, act = boundary.map, action.perms
    # d(g |> e) = g d(e) g^-1
    lhs = d[act]                                                   # (g, e)
    rhs = G.table[G.table[np.arange(G.order)[:, None], d[None, :]], G.inverse[:, None]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        g, e = (int(x) for x in bad[0])
        raise PeifferOneViolation(f"d(g|>e) != g d(e) g^-1 for witness (g, e) = ({g}, {e})")
    # d(e) |> e' = e e' e^-1
    lhs = act[d]                                                   # (e, e')
    rhs = E.table[E.table[np.arange(E.order)[:, None], np.arange(E.order)[None, :]],
                  E.inverse[:, None]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        e, f = (int(x) for x in bad[0])
        raise PeifferTwoViolation(f"d(e)|>e' != e e' e^-1 for witness (e, e') = ({e}, {f})")
    return CrossedModule(name, E, G, boundary, action)


def _load_group(obj, base_dir: Path) -> FiniteGroup:
    if isinstance(obj, str):
        path = Path(obj)
        if not path.is_absolute():
            path = base_dir / path
        obj = json.loads(path.read_text())
    return group_from_spec(obj)


def crossed_module_from_spec(spec: dict, base_dir: str | Path = ".") -> CrossedModule:
    """Build from the JSON layout ``{"E", "G", "boundary", "action"}``.

    Group entries may be inline specs or paths relative to ``base_dir``.
    """
    base_dir = Path(base_dir)
    E = _load_group(spec["E"], base_dir)
    G = _load_group(spec["G"], base_dir)
    return crossed_module(E, G, spec["boundary"], spec["action"], name=spec.get("name", "X"))


def crossed_module_to_spec(X: CrossedModule) -> dict:
    return {
        "name": X.name,
        "E": {"name": X.E.name, "table": X.E.table.tolist()},
        "G": {"name": X.G.name, "table": X.G.table.tolist()},
        "boundary": X.boundary.map.tolist(),
        "action": X.action.perms.tolist(),
    }


def flux_orbits(X: CrossedModule) -> list[FluxOrbit]:
    """Orbits of the G-action on ker d, sorted by minimal element."""
    seen = set()
    orbits = []
    for k in X.kernel:
        if k in seen:
            continue
        orb = tuple(sorted({X.act(g, k) for g in range(X.G.order)}))
        seen.update(orb)
        orbits.append(FluxOrbit(orb))
    return orbits


# -- fixture crossed modules -----------------------------------------------

def g32() -> CrossedModule:
    """d: Z3 -> Z2x constant at +1, with z |> e = z e."""
    E, G = cyclic(3), z2_multiplicative()
    return crossed_module(E, G, [0, 0, 0], [[0, 1, 2], [0, 2, 1]], name="G32")


def identity_xmod(G: FiniteGroup) -> CrossedModule:
    return crossed_module(G, G, np.arange(G.order), conjugation_action(G), name=f"id_{G.name}")


def trivial_xmod() -> CrossedModule:
    T = trivial_group()
    return crossed_module(T, T, [0], [[0]], name="trivial")


def mod2_xmod() -> CrossedModule:
    """Z4 -> Z2 reduction mod 2, trivial action."""
    return crossed_module(cyclic(4), cyclic(2), [0, 1, 0, 1], trivial_action(cyclic(2), cyclic(4)),
                          name="Z4_mod2")


def sign_twisted_xmod() -> CrossedModule:
    """Z3 -> S3 constant map; S3 acts on Z3 through the sign, odd permutations invert."""
    S3, Z3 = symmetric(3), cyclic(3)
    perms = []
    for p in S3.perms:
        odd = sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j]) % 2
        perms.append([0, 2, 1] if odd else [0, 1, 2])
    return crossed_module(Z3, S3, [0, 0, 0], perms, name="Z3_S3_sign")


def alternating_inclusion_xmod() -> CrossedModule:
    """Z3 = A3 included in S3, conjugation action."""
    S3 = symmetric(3)
    a3 = [i for i, p in enumerate(S3.perms)
          if sum(1 for x in range(3) for y in range(x + 1, 3) if p[x] > p[y]) % 2 == 0]
    rot = [i for i in a3 if i != 0][0]
    powers = [0, rot, S3.mul(rot, rot)]
    Z3 = cyclic(3)
    perms = []
    for g in range(S3.order):
        img = [powers.index(S3.conj(g, powers[k])) for k in range(3)]
        perms.append(img)
    return crossed_module(Z3, S3, powers, perms, name="A3_in_S3")


def central_extension_xmod() -> CrossedModule:
    """S3 x Z2 -> S3 projection; S3 acts by conjugation on the first factor.

    Nonabelian E with a nontrivial (central) kernel.
    """
    S3, Z2 = symmetric(3), cyclic(2)
    E = direct_product(S3, Z2, name="S3xZ2")
    d = [i // 2 for i in range(E.order)]
    perms = [[S3.conj(g, i // 2) * 2 + i % 2 for i in range(E.order)] for g in range(S3.order)]
    return crossed_module(E, S3, d, perms, name="S3xZ2_to_S3")


BUILTIN_XMODS = {
    "g32": g32,
    "trivial": trivial_xmod,
    "id_z2": lambda: identity_xmod(cyclic(2)),
    "id_s3": lambda: identity_xmod(symmetric(3)),
    "z4_mod2": mod2_xmod,
    "z3_s3_sign": sign_twisted_xmod,
    "a3_in_s3": alternating_inclusion_xmod,
    "s3xz2_to_s3": central_extension_xmod,
}
