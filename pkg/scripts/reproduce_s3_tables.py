"""Print the charge decomposition of both 3-sphere models for a crossed module.

    python scripts/reproduce_s3_tables.py --xmod g32
"""
import argparse

from hlgt.hamiltonian import build_hamiltonian, spectrum
from hlgt.repth import (assembled_energies, decompose_globe, decompose_minimal, globe_space,
                        minimal_space)
from hlgt.xmod import BUILTIN_XMODS


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--xmod", default="g32", choices=sorted(BUILTIN_XMODS))
    args = ap.parse_args()
    X = BUILTIN_XMODS[args.xmod]()

    S = globe_space(X)
    print(f"globe model, {X.name}: dimension {len(S)}")
    print(f"{'flux':>10} {'(k,lam)':>8} {'dim':>4} {'rho':>4} {'C':>2} {'B':>2} {'A':>2} {'H':>3}")
    blocks = decompose_globe(X, S)
    for b in blocks:
        for s in b.blocks:
            print(f"{str(b.flux):>10} {str((b.k, b.lam)):>8} {s.dimension:>4} {s.rho:>4} "
                  f"{s.calC:>2} {s.calB:>2} {s.calA:>2} {s.energy:>3}")
    print("edge-charge block dimensions:", [b.dimension for b in blocks])
    print("assembled:", assembled_energies(blocks))
    print("spectrum: ", spectrum(build_hamiltonian(S)).as_dict())

    M = minimal_space(X)
    print(f"\nminimal model, {X.name}: dimension {len(M)}")
    mblocks = decompose_minimal(X, M)
    for s in mblocks:
        print(f"flux {s.flux} rho {s.rho} dim {s.dimension} C {s.calC} A {s.calA} H {s.energy}")
    print("assembled:", assembled_energies(mblocks))
    print("spectrum: ", spectrum(build_hamiltonian(M)).as_dict())


if __name__ == "__main__":
    main()
