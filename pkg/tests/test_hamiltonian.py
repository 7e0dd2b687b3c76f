import functools
from fractions import Fraction

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given
from hypothesis import strategies as st

from hlgt.config import enumerate_fake_flat, estimate_size, naive_vacuum, zeta
from hlgt.errors import DimensionCapExceeded, FixtureMismatch, UnknownCell
from hlgt.hamiltonian import (SparseOperator, build_Av, build_Bt, build_Cbe, build_hamiltonian, build_terms,
                              build_Ut, build_Uv, dense_hamiltonian_oracle, ground_state_degeneracy, mu,
                              mu_star, spectrum, spectrum_from_values, zeta_operator)
from hlgt.lattice import BUILTIN_LATTICES, builtin
from hlgt.xmod import BUILTIN_XMODS

from oracles import full_group_orbit_count


@functools.lru_cache(maxsize=None)
def space(lname, xname):
    return enumerate_fake_flat(builtin(lname), BUILTIN_XMODS[xname]())


SMALL = [(l, x) for l in BUILTIN_LATTICES for x in sorted(BUILTIN_XMODS)
         if estimate_size(builtin(l), BUILTIN_XMODS[x]()) <= 5000]


def test_minimal_Av_entries(minimal_g32):
    A = build_Av(minimal_g32, "v")
    assert [A.entry(i, j) for i in range(3) for j in range(3)] == [
        1, 0, 0, 0, Fraction(1, 2), Fraction(1, 2), 0, Fraction(1, 2), Fraction(1, 2)]


def test_globe_Bt_formula(globe_g32, g32):
    B = build_Bt(globe_g32, "t")
    E = g32.E
    for j, (g, e, f) in enumerate(globe_g32.keys):
        col = {i: B.entry(i, j) for i in range(9) if B.entry(i, j)}
        expect = {}
        for k in range(3):
            i = globe_g32.index[(g32.G.mul(g32.d(k), g), E.mul(k, e), E.mul(k, f))]
            expect[i] = expect.get(i, 0) + Fraction(1, 3)
        assert col == expect


def test_vacuum_fixed_by_blob_projector():
    for lname in ("s3_globe", "s3_minimal", "s3_orange"):
        S = space(lname, "s3xz2_to_s3")
        i = S.index_of(naive_vacuum(S.xmod, S.lattice))
        for b in S.lattice.blobs:
            assert build_Cbe(S, b.id).entry(i, i) == 1


def test_globe_symmetric_flat_state_is_ground(globe_g32):
    H = build_hamiltonian(globe_g32)
    psi = np.zeros(9)
    for a in range(3):
        psi[globe_g32.index[(0, a, a)]] = 1
    assert np.array_equal(H.num @ psi, np.zeros(9))


def test_minimal_vacuum_annihilated(minimal_g32):
    H = build_hamiltonian(minimal_g32)
    assert H.num[:, 0].count_nonzero() == 0


@pytest.mark.parametrize("lname,xname", SMALL)
def test_projectors_commute_and_are_idempotent(lname, xname):
    S = space(lname, xname)
    T = build_terms(S)
    ops = list(T.A.values()) + list(T.B.values()) + list(T.C.values())
    for i, a in enumerate(ops):
        assert a @ a == a
        assert a.is_hermitian()
        for b in ops[i + 1:]:
            assert a.commutator(b).is_zero()
    for P in (T.calA, T.calB, T.calC):
        assert P @ P == P
    assert T.H.is_hermitian()


def test_blob_vertex_intertwining():
    for lname in ("s3_globe", "s3_minimal", "s3_orange"):
        S = space(lname, "s3xz2_to_s3")
        X, L = S.xmod, S.lattice
        for b in L.blobs:
            for g in range(X.G.order):
                U = build_Uv(S, b.base, g)
                for e in X.kernel:
                    assert build_Cbe(S, b.id, e) @ U == U @ build_Cbe(S, b.id, X.act(X.G.inv(g), e))


def test_spike_matrices_are_permutations(globe_g32):
    U = build_Ut(globe_g32, "t", 1)
    assert (U @ U.transpose()) == SparseOperator.identity(9)
    with pytest.raises(UnknownCell):
        build_Uv(globe_g32, "w", 0)
    with pytest.raises(UnknownCell):
        build_Cbe(globe_g32, "nope")


def test_zeta_operator_is_diagonal_zeta(globe_g32):
    Z = zeta_operator(globe_g32)
    for i, F in enumerate(globe_g32):
        assert Z.entry(i, i) == zeta(F)
    assert Z.num.count_nonzero() == sum(zeta(F) > 0 for F in globe_g32)


def test_known_spectra(globe_g32, minimal_g32):
    assert spectrum(build_hamiltonian(globe_g32)).as_dict() == {0: 1, 1: 1, 2: 2, 3: 3, 4: 2}
    rep = spectrum(build_hamiltonian(minimal_g32))
    assert rep.as_dict() == {0: 1, 2: 1, 3: 1}
    assert rep.min_eigenvalue == 0 and rep.unsnapped == ()


def test_zero_operator_spectrum():
    assert spectrum(SparseOperator.zero(5)).as_dict() == {0: 5}


def test_snapping_refuses_far_values():
    rep = spectrum_from_values(np.array([0.0, 1e-10, 0.5, 2.0 + 1e-6]))
    assert rep.as_dict() == {0: 2, 0.5: 1, 2.000001: 1}
    assert rep.unsnapped == (0.5, 2.000001)


def test_dimension_cap(globe_g32):
    with pytest.raises(DimensionCapExceeded):
        spectrum(build_hamiltonian(globe_g32), max_dim=8)


@pytest.mark.parametrize("lname,xname", SMALL)
def test_sparse_matches_dense_oracle(lname, xname):
    S = space(lname, xname)
    keys, H = dense_hamiltonian_oracle(S.lattice, S.xmod)
    assert keys == list(S.keys)
    assert np.allclose(build_hamiltonian(S).to_dense(), H, atol=1e-12)


@pytest.mark.parametrize("lname,xname", [p for p in SMALL if len(space(*p)) <= 400])
def test_gsd_equals_zero_multiplicity(lname, xname):
    S = space(lname, xname)
    rep = spectrum(build_hamiltonian(S))
    assert rep.unsnapped == ()
    assert all(v >= 0 for v, _ in rep.eigenvalues)
    assert rep.multiplicity(0) == ground_state_degeneracy(S)


@pytest.mark.parametrize("lname,xname", [p for p in SMALL if len(space(*p)) <= 200])
def test_gsd_matches_full_group_orbits(lname, xname):
    S = space(lname, xname)
    assert ground_state_degeneracy(S) == full_group_orbit_count(S.lattice, S.xmod)


def test_gsd_examples(globe, minimal, xmods):
    assert ground_state_degeneracy(globe, xmods["g32"]) == 1
    assert ground_state_degeneracy(minimal, xmods["g32"]) == 1
    for L in BUILTIN_LATTICES:
        assert ground_state_degeneracy(builtin(L), xmods["trivial"]) == 1
    assert ground_state_degeneracy(globe, xmods["id_z2"]) == 1
    # edge spikes move every track colour, so the identity crossed module is featureless
    assert ground_state_degeneracy(builtin("torus"), xmods["id_z2"]) == 1
    # A3 -> S3 leaves the cokernel Z2, whose commuting pairs label four torus sectors
    assert ground_state_degeneracy(builtin("torus"), xmods["a3_in_s3"]) == 4
    assert ground_state_degeneracy(builtin("rp2"), xmods["a3_in_s3"]) == 2


@pytest.mark.parametrize("xname", sorted(BUILTIN_XMODS))
def test_mu_intertwines(xname):
    G, M = space("s3_globe", xname), space("s3_minimal", xname)
    m, ms = mu(G, M), mu_star(G, M)
    n = G.xmod.E.order
    assert m @ build_hamiltonian(G) == build_hamiltonian(M) @ m
    assert m @ ms == SparseOperator.identity(len(M)).scale(n)
    P = (ms @ m).scale(1, n)
    assert P @ P == P


def test_mu_on_diagonal_states(globe_g32, minimal_g32):
    m = mu(globe_g32, minimal_g32)
    for a in range(3):
        j = globe_g32.index[(0, a, a)]
        assert m.entry(minimal_g32.index[(0,)], j) == 1


def test_mu_rejects_mismatched_pairs(globe_g32, minimal_g32):
    with pytest.raises(FixtureMismatch):
        mu(space("s3_globe", "z3_s3_sign"), minimal_g32)
    with pytest.raises(FixtureMismatch):
        mu(space("s3_orange", "g32"), minimal_g32)
    with pytest.raises(FixtureMismatch):
        mu(globe_g32, globe_g32)


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(-9, 9)), max_size=20),
       st.integers(1, 12))
def test_sparse_operator_matches_fractions(entries, den):
    rows = [r for r, _, _ in entries]
    cols = [c for _, c, _ in entries]
    vals = [v for _, _, v in entries]
    A = SparseOperator(sp.csr_matrix((vals, (rows, cols)), shape=(6, 6), dtype=np.int64), den)
    dense = np.zeros((6, 6), dtype=object)
    for r, c, v in entries:
        dense[r, c] += v
    for i in range(6):
        for j in range(6):
            assert A.entry(i, j) == Fraction(int(dense[i, j]), den)
    assert (A + A) == A.scale(2)
    assert (A - A).is_zero()
    assert (A @ SparseOperator.identity(6)) == A
