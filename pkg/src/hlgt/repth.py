"""Characters, irreps and the charge decomposition of the two 3-sphere models."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import ConfigSpace, enumerate_fake_flat
from .errors import IncompleteDecomposition, NoMatchingIrrep, OrthogonalityFailure, ZeroVector
from .groups import FiniteGroup, conjugacy_classes
from .hamiltonian import MAX_DIM, build_terms, build_Uv, generating_set
from .lattice import builtin
from .xmod import CrossedModule, FluxOrbit, flux_orbits

TOL = 1e-8
BURNSIDE_MAX_ORDER = 64


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """``table[l, c]`` is the value of irrep ``l`` on class ``c``; row 0 is trivial."""

    group: FiniteGroup
    classes: tuple[tuple[int, ...], ...]
    table: np.ndarray
    degrees: tuple[int, ...]
    exact: bool = False
    class_of: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        cls = np.empty(self.group.order, dtype=np.int64)
        for i, c in enumerate(self.classes):
            cls[list(c)] = i
        object.__setattr__(self, "class_of", cls)

    def __len__(self):
        return len(self.degrees)

    @property
    def on_elements(self) -> np.ndarray:
        """(irrep, element) array of character values."""
        return self.table[:, self.class_of]

    def chi(self, lam: int) -> np.ndarray:
        return self.on_elements[lam]

    def trivial(self) -> int:
        return 0

    def match(self, values: np.ndarray, tol: float = TOL) -> int:
        hits = np.flatnonzero(np.all(np.abs(self.on_elements - values[None, :]) <= tol, axis=1))
        if len(hits) != 1:
            raise NoMatchingIrrep(f"class function matches {len(hits)} irreps")
        return int(hits[0])


def check_orthogonality(ct: CharacterTable, tol: float = TOL) -> None:
    chars = ct.on_elements
    gram = chars @ chars.conj().T / ct.group.order
    if not np.allclose(gram, np.eye(len(ct)), atol=tol):
        raise OrthogonalityFailure(f"row orthogonality fails by {np.abs(gram - np.eye(len(ct))).max():.3g}")
    if sum(d * d for d in ct.degrees) != ct.group.order:
        raise OrthogonalityFailure(f"sum of squared degrees {sum(d * d for d in ct.degrees)} != |G|")


def _abelian_table(G: FiniteGroup) -> CharacterTable:
    """Exact characters of an abelian group, built one generator at a time.

    A character is stored as integers c with chi(x) = exp(2 pi i c(x) / n),
    n the exponent of G.
    """
    n = math.lcm(*(G.element_order(x) for x in range(G.order)))
    members = [0]                       # elements of the current subgroup
    chars = [{0: 0}]                    # partial characters on it
    for gen in generating_set(G):
        sub = set(members)
        m, x = 1, gen
        while x not in sub:
            x = G.mul(x, gen)
            m += 1
        new_members = []
        powers = [0]
        for _ in range(m - 1):
            powers.append(G.mul(powers[-1], gen))
        for a in range(m):
            for h in members:
                new_members.append(G.mul(h, powers[a]))
        new_chars = []
        for c in chars:
            base = c[x]
            for j in range(m):
                cg = (base // m + j * n // m) % n
                d = {}
                for a in range(m):
                    for h in members:
                        d[G.mul(h, powers[a])] = (c[h] + a * cg) % n
                new_chars.append(d)
        members, chars = new_members, new_chars
    ints = np.array([[c[x] for x in range(G.order)] for c in chars], dtype=np.int64)
    table = np.exp(2j * np.pi * ints / n)
    classes = tuple((x,) for x in range(G.order))
    return CharacterTable(G, classes, table, (1,) * G.order, exact=True)


def _burnside_table(G: FiniteGroup, seed: int = 0) -> CharacterTable:
    classes = conjugacy_classes(G)
    r = len(classes)
    cls_of = np.empty(G.order, dtype=np.int64)
    for i, c in enumerate(classes):
        cls_of[list(c)] = i
    sizes = np.array([len(c) for c in classes], dtype=float)
    # M[i][j, k] = #{(x, y) in C_i x C_j : x y = z_k}
    M = np.zeros((r, r, r))
    for i, ci in enumerate(classes):
        for j, cj in enumerate(classes):
            prods = G.table[np.ix_(ci, cj)].ravel()
            counts = np.bincount(cls_of[prods], minlength=r)
            M[i, j] = counts / sizes
    rng = np.random.default_rng(seed)
    for _ in range(8):
        coeffs = rng.normal(size=r)
        mat = np.tensordot(coeffs, M, axes=1)
        vals, vecs = np.linalg.eig(mat)
        if np.min(np.abs(vals[:, None] - vals[None, :]) + np.eye(r) * 1e9) > 1e-6:
            break
    else:
        raise OrthogonalityFailure("class-sum eigenvalues never separated")
    rows = []
    for w in vecs.T:
        w = w / w[0]                               # central character, identity class first
        deg = math.sqrt(G.order / float(np.sum(np.abs(w) ** 2 / sizes)))
        rows.append((round(deg), w * deg / sizes))
    rows.sort(key=lambda t: (t[0], -round(t[1].real.sum(), 6), tuple(np.round(t[1].imag, 6))))
    # the trivial character has all values equal to 1 and sorts first among degree 1
    table = np.array([t for _, t in rows])
    degrees = tuple(int(d) for d, _ in rows)
    return CharacterTable(G, tuple(classes), table, degrees, exact=False)


def character_table(G: FiniteGroup, method: str = "auto") -> CharacterTable:
    """``method`` is "abelian", "burnside" or "auto" (abelian when possible)."""
    if method == "auto":
        method = "abelian" if G.is_abelian() else "burnside"
    if method == "abelian":
        if not G.is_abelian():
            raise ValueError("abelian construction needs an abelian group")
        ct = _abelian_table(G)
    else:
        if G.order > BURNSIDE_MAX_ORDER:
            raise OrthogonalityFailure(f"class-sum path limited to order {BURNSIDE_MAX_ORDER}")
        ct = _burnside_table(G)
    check_orthogonality(ct)
    return ct


# -- explicit unitary irreps ----------------------------------------------------

def left_regular(G: FiniteGroup) -> np.ndarray:
    """L[x] sends basis vector e to x e."""
    n = G.order
    L = np.zeros((n, n, n))
    for x in range(n):
        L[x, G.table[x], np.arange(n)] = 1
    return L


def irrep_matrices(ct: CharacterTable, lam: int, seed: int = 0) -> np.ndarray:
    """Unitary matrices rho(x), shape (|G|, d, d), realising irrep ``lam``.

    Cut one copy out of the lam-isotypic part of the left regular
    representation with a generic Hermitian element of the right-regular
    commutant.
    """
    G = ct.group
    n, d = G.order, ct.degrees[lam]
    chi = ct.chi(lam)
    L = left_regular(G)
    P = (d / n) * np.tensordot(chi.conj(), L, axes=1)
    vals, vecs = np.linalg.eigh((P + P.conj().T) / 2)
    Q = vecs[:, vals > 0.5]
    rng = np.random.default_rng(seed)
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    R = np.zeros((n, n), dtype=complex)
    for y in range(n):
        # right multiplication by y commutes with every L[x]
        Ry = np.zeros((n, n))
        Ry[G.table[:, y], np.arange(n)] = 1
        R += c[y] * Ry
    R = R + R.conj().T
    w, u = np.linalg.eigh(Q.conj().T @ R @ Q)
    V = Q @ u[:, :d]
    rho = np.einsum("ia,xij,jb->xab", V.conj(), L, V)
    if not np.allclose(np.einsum("xaa->x", rho), chi, atol=1e-6):
        raise NoMatchingIrrep(f"could not isolate irrep {lam}")
    return rho


def matrix_element_embedding(G: FiniteGroup, rho: np.ndarray, v0) -> np.ndarray:
    """(|G|, d) matrix of v -> sum_e <rho(e^-1) v, v0> e; intertwines rho with L."""
    v0 = np.asarray(v0, dtype=complex).reshape(-1)
    if np.linalg.norm(v0) == 0:
        raise ZeroVector("v0 must be nonzero")
    return np.einsum("a,eab->eb", v0.conj(), rho[G.inverse])



def coefficient_space(ct: CharacterTable, lam: int) -> np.ndarray:
    """Orthonormal basis (columns) of the span of the functions x -> chi(x y)."""
    G = ct.group
    chi = ct.chi(lam)
    F = chi[G.table]                     # F[x, y] = chi(x y)
    return orthonormal_columns(F)


def orthonormal_columns(M: np.ndarray, tol: float = TOL) -> np.ndarray:
    if M.size == 0:
        return M.reshape(M.shape[0], 0)
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    scale = max(1.0, s[0]) if len(s) else 1.0
    return u[:, s > tol * scale * 1e2]


# -- star action and edge charges -----------------------------------------------

def star_action(X: CrossedModule, g: int, lam: int, ct: CharacterTable | None = None) -> int:
    """Label of the irrep with character e -> chi_lam(g^-1 |> e)."""
    ct = ct or character_table(X.E)
    moved = ct.chi(lam)[X.action.perms[X.G.inv(g)]]
    return ct.match(moved)


@dataclass(frozen=True)
class EdgeCharge:
    flux: FluxOrbit
    k: int
    lam: int


def edge_charge_classes(X: CrossedModule, c: FluxOrbit, ct: CharacterTable | None = None) -> list[list[EdgeCharge]]:
    """Equivalence classes of (k, lam), k in c, under a: (k, lam) -> (a |> k, a * lam)."""
    ct = ct or character_table(X.E)
    star = {(a, l): star_action(X, a, l, ct) for a in range(X.G.order) for l in range(len(ct))}
    seen = set()
    classes = []
    for k in c.elements:
        for lam in range(len(ct)):
            if (k, lam) in seen:
                continue
            orbit = sorted({(X.act(a, k), star[a, lam]) for a in range(X.G.order)})
            seen.update(orbit)
            classes.append([EdgeCharge(c, kk, ll) for kk, ll in orbit])
    classes.sort(key=lambda cl: (min(q.k for q in cl), min(q.lam for q in cl)))
    return classes


def stabiliser_transversal(X: CrossedModule, k: int) -> list[int]:
    """Smallest element of each left coset of Stab_G(k)."""
    stab = [a for a in range(X.G.order) if X.act(a, k) == k]
    reps, covered = [], set()
    for g in range(X.G.order):
        if g not in covered:
            reps.append(g)
            covered.update(X.G.mul(g, s) for s in stab)
    return reps


# -- decompositions ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ChargeBlock:
    """Vertex-charge component of an edge-charge space (or of a 2-flux space)."""

    flux: tuple[int, ...]
    rho: int
    vectors: np.ndarray                     # orthonormal columns over the basis
    calC: int
    calB: int | None
    calA: int
    energy: int
    edge_charge: tuple[int, int] | None = None

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True, eq=False)
class EdgeChargeBlock:
    flux: tuple[int, ...]
    charges: tuple[EdgeCharge, ...]
    k: int
    lam: int
    transversal: tuple[int, ...]
    vectors: np.ndarray
    blocks: tuple[ChargeBlock, ...]

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]


def _scalar_on(op: np.ndarray, W: np.ndarray, what: str) -> float:
    img = op @ W
    val = np.trace(W.conj().T @ img).real / W.shape[1]
    if not np.allclose(img, val * W, atol=1e-7):
        raise IncompleteDecomposition(f"{what} does not act as a scalar on a block")
    return val


def _snap(x: float, what: str) -> int:
    r = round(x)
    if abs(x - r) > 1e-7:
        raise IncompleteDecomposition(f"{what} eigenvalue {x} is not an integer")
    return int(r)


def vertex_charge_projectors(space: ConfigSpace, v=0, ct: CharacterTable | None = None) -> list[np.ndarray]:
    """A_v^rho = (dim rho / |G|) sum_g chi_rho(g^-1) U_v^g, one per irrep of G."""
    G = space.xmod.G
    ct = ct or character_table(G)
    U = np.array([build_Uv(space, v, g).to_dense() for g in range(G.order)])
    return [(ct.degrees[r] / G.order) * np.tensordot(ct.chi(r)[G.inverse], U, axes=1)
            for r in range(len(ct))]


def _split(W: np.ndarray, projectors: list[np.ndarray]) -> list[tuple[int, np.ndarray]]:
    out = []
    for r, P in enumerate(projectors):
        sub = orthonormal_columns(P @ W)
        if sub.shape[1]:
            out.append((r, sub))
    if sum(s.shape[1] for _, s in out) != W.shape[1]:
        raise IncompleteDecomposition("vertex-charge components do not fill the block")
    return out


def globe_space(X: CrossedModule) -> ConfigSpace:
    return enumerate_fake_flat(builtin("s3_globe"), X)


def minimal_space(X: CrossedModule) -> ConfigSpace:
    return enumerate_fake_flat(builtin("s3_minimal"), X)


def decompose_globe(X: CrossedModule, space: ConfigSpace | None = None) -> list[EdgeChargeBlock]:
    """2-flux, edge-charge and vertex-charge decomposition of the globe model."""
    space = space or globe_space(X)
    n = len(space)
    if n > MAX_DIM:
        raise IncompleteDecomposition(f"dimension {n} exceeds cap {MAX_DIM}")
    E, G = X.E, X.G
    ctE, ctG = character_table(E), character_table(G)
    terms = build_terms(space)
    H, cA, cB, cC = (op.to_dense() for op in (terms.H, terms.calA, terms.calB, terms.calC))
    projectors = vertex_charge_projectors(space, 0, ctG)
    index = {(e, f): i for i, (_, e, f) in enumerate(space.keys)}
    act = X.action.perms
    out = []
    for c in flux_orbits(X):
        for cls in edge_charge_classes(X, c, ctE):
            k, lam = cls[0].k, cls[0].lam
            coeff = coefficient_space(ctE, lam)          # columns: functions on E
            vecs = []
            for g in range(G.order):
                gk = X.act(g, k)
                # argument g^-1 |> e^-1 for each e
                arg = act[G.inv(g), E.inverse]
                rows = [index[(e, E.mul(e, gk))] for e in range(E.order)]
                block = np.zeros((n, coeff.shape[1]), dtype=complex)
                block[rows] = coeff[arg]
                vecs.append(block)
            W = orthonormal_columns(np.hstack(vecs))
            subs = []
            for r, S in _split(W, projectors):
                subs.append(ChargeBlock(
                    flux=c.elements, rho=r, vectors=S,
                    calC=_snap(_scalar_on(cC, S, "C"), "C"),
                    calB=_snap(_scalar_on(cB, S, "B"), "B"),
                    calA=_snap(_scalar_on(cA, S, "A"), "A"),
                    energy=_snap(_scalar_on(H, S, "H"), "H"),
                    edge_charge=(k, lam)))
            out.append(EdgeChargeBlock(c.elements, tuple(cls), k, lam,
                                       tuple(stabiliser_transversal(X, k)), W, tuple(subs)))
    check_completeness([b.vectors for b in out], n)
    return out


def decompose_minimal(X: CrossedModule, space: ConfigSpace | None = None) -> list[ChargeBlock]:
    """2-flux and vertex-charge decomposition of the minimal model."""
    space = space or minimal_space(X)
    n = len(space)
    ctG = character_table(X.G)
    terms = build_terms(space)
    H, cA, cC = (op.to_dense() for op in (terms.H, terms.calA, terms.calC))
    projectors = vertex_charge_projectors(space, 0, ctG)
    out = []
    for c in flux_orbits(X):
        W = np.zeros((n, len(c)), dtype=complex)
        for j, m in enumerate(c.elements):
            W[space.index[(m,)], j] = 1
        for r, S in _split(W, projectors):
            out.append(ChargeBlock(c.elements, r, S,
                                   calC=_snap(_scalar_on(cC, S, "C"), "C"), calB=None,
                                   calA=_snap(_scalar_on(cA, S, "A"), "A"),
                                   energy=_snap(_scalar_on(H, S, "H"), "H")))
    check_completeness([b.vectors for b in out], n)
    return out


def check_completeness(blocks: list[np.ndarray], n: int) -> None:
    total = sum(b.shape[1] for b in blocks)
    if total != n:
        raise IncompleteDecomposition(f"block dimensions sum to {total}, expected {n}")
    W = np.hstack(blocks) if blocks else np.zeros((n, 0))
    if not np.allclose(W.conj().T @ W, np.eye(n), atol=1e-7):
        raise IncompleteDecomposition("blocks are not mutually orthogonal")


def predicted_table(block: ChargeBlock) -> dict:
    """Operator values forced by the labels: zero exactly on the trivial label."""
    out = {"C": int(block.flux != (0,)), "A": int(block.rho != 0)}
    if block.edge_charge is not None:
        out["B"] = int(block.edge_charge[1] != 0)
    return out


def assembled_energies(blocks) -> dict[int, int]:
    """Energy -> multiplicity from a decomposition."""
    out: dict[int, int] = {}
    for b in blocks:
        for s in (b.blocks if isinstance(b, EdgeChargeBlock) else (b,)):
            out[s.energy] = out.get(s.energy, 0) + s.dimension
    return dict(sorted(out.items()))

