"""Ground-state degeneracy of every builtin lattice and crossed module.

Orbit counting is exact; where the space is small enough the zero-energy
multiplicity of the Hamiltonian is printed next to it as a cross-check.
"""
import argparse

from hlgt.config import enumerate_fake_flat, estimate_size
from hlgt.hamiltonian import build_hamiltonian, ground_state_degeneracy, spectrum
from hlgt.lattice import BUILTIN_LATTICES, builtin
from hlgt.xmod import BUILTIN_XMODS


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-states", type=int, default=50_000)
    ap.add_argument("--max-dim", type=int, default=600)
    args = ap.parse_args()
    print(f"{'lattice':<22}{'xmod':<14}{'dim':>7}{'gsd':>5}{'E=0':>6}")
    for lname in BUILTIN_LATTICES:
        L = builtin(lname)
        for xname in sorted(BUILTIN_XMODS):
            X = BUILTIN_XMODS[xname]()
            if estimate_size(L, X) > args.max_states:
                print(f"{lname:<22}{xname:<14}{'skip':>7}")
                continue
            S = enumerate_fake_flat(L, X)
            gsd = ground_state_degeneracy(S)
            zero = spectrum(build_hamiltonian(S)).multiplicity(0) if len(S) <= args.max_dim else "-"
            print(f"{lname:<22}{xname:<14}{len(S):>7}{gsd:>5}{zero:>6}")


if __name__ == "__main__":
    main()
