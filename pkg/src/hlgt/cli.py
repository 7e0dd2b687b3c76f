"""``hlgt`` command line front end."""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import (MAX_STATES, blob_holonomy, enumerate_fake_flat, is_fake_flat, make_config,
                     surface_holonomy, wilson_action, zeta)
from .errors import HLGTError, InvariantBreach, ValidationError
from .gauge import GaugeElement, apply_gauge_element, compose
from .groups import group_from_spec
from .hamiltonian import (MAX_DIM, build_hamiltonian, dense_hamiltonian_oracle, ground_state_degeneracy,
                          spectrum)
from .lattice import (BUILTIN_LATTICES, WordTerm, builtin, fixture_dirs, lattice_from_spec, parse_word)
from .repth import character_table, decompose_globe, decompose_minimal, predicted_table
from .xmod import BUILTIN_XMODS, crossed_module_from_spec


class InputError(ValidationError):
    pass


class Loader:
    """Reads input files and remembers a sha256 digest of every byte string read."""

    def __init__(self):
        self.digests: dict[str, str] = {}

    def read_json(self, path: Path):
        data = path.read_bytes()
        self.digests[str(path)] = hashlib.sha256(data).hexdigest()
        try:
            return json.loads(data)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None

    def _find(self, ref: str) -> Path | None:
        p = Path(ref)
        if p.is_file():
            return p
        for d in fixture_dirs():
            q = d / f"{ref}.json"
            if q.is_file():
                return q
        return None

    def xmod(self, ref: str):
        path = Path(ref)
        if path.is_file():
            return self._xmod_file(path)
        if ref in BUILTIN_XMODS:
            self.digests[f"builtin:{ref}"] = "builtin"
            return BUILTIN_XMODS[ref]()
        found = self._find(ref)
        if found is None:
            raise InputError(f"no crossed module file or builtin named {ref!r}")
        return self._xmod_file(found)

    def _xmod_file(self, path: Path):
        spec = self.read_json(path)
        for key in ("E", "G"):
            if isinstance(spec.get(key), str):
                gp = Path(spec[key])
                spec[key] = self.read_json(gp if gp.is_absolute() else path.parent / gp)
        return crossed_module_from_spec(spec, path.parent)

    def lattice(self, ref: str):
        path = Path(ref)
        if path.is_file():
            return lattice_from_spec(self.read_json(path))
        found = self._find(ref)
        if found is not None:
            self.digests[str(found)] = hashlib.sha256(found.read_bytes()).hexdigest()
        return builtin(ref)

    def config(self, ref: str):
        path = Path(ref)
        if not path.is_file():
            path = self._find(ref)
            if path is None:
                raise InputError(f"no configuration file {ref!r}")
        spec = self.read_json(path)
        X = self.xmod(_resolve(spec["xmod"], path))
        L = self.lattice(_resolve(spec["lattice"], path))
        return spec, make_config(X, L, spec["tracks"], spec["plaquettes"])


def _resolve(ref: str, relative_to: Path) -> str:
    cand = relative_to.parent / ref
    return str(cand) if cand.is_file() else ref


def _terms(items) -> tuple[WordTerm, ...]:
    return tuple(WordTerm(parse_word(it.get("path", [])), it["plaquette"], int(it["sign"])) for it in items)


def _element(G, x: int):
    return G.label(int(x))


# -- subcommands --------------------------------------------------------------------

def _detect_kind(spec) -> str:
    if not isinstance(spec, dict):
        return "unknown"
    if "vertices" in spec:
        return "lattice"
    if "boundary" in spec and "action" in spec:
        return "xmod"
    if "table" in spec or "generators" in spec:
        return "group"
    if "tracks" in spec and "xmod" in spec:
        return "config"
    return "unknown"


def cmd_validate(args, ld: Loader) -> dict:
    results = []
    for p in args.paths:
        entry = {"path": p}
        try:
            path = Path(p)
            spec = ld.read_json(path) if path.is_file() else None
            kind = _detect_kind(spec) if spec is not None else ("lattice" if p in BUILTIN_LATTICES else
                                                                "xmod" if p in BUILTIN_XMODS else "missing")
            entry["kind"] = kind
            if kind == "group":
                group_from_spec(spec)
            elif kind == "xmod":
                ld.xmod(p).check_derived()
            elif kind == "lattice":
                ld.lattice(p)
            elif kind == "config":
                ld.config(p)
            else:
                raise InputError(f"cannot read {p!r} as a group, crossed module, lattice or configuration")
            entry["ok"] = True
        except HLGTError as exc:
            entry.update(ok=False, error={"type": type(exc).__name__, "message": str(exc)})
        results.append(entry)
    return {"ok": all(r["ok"] for r in results), "files": results}


def cmd_enumerate(args, ld: Loader) -> dict:
    X, L = ld.xmod(args.xmod), ld.lattice(args.lattice)
    S = enumerate_fake_flat(L, X, max_states=args.max_states, workers=args.threads)
    shown = list(S)[: args.limit] if args.limit is not None else list(S)
    return {
        "dimension": len(S),
        "two_flat": sum(1 for F in S if zeta(F) == 0),
        "configurations": [{"tracks": F.track_colors, "plaquettes": F.plaquette_colors, "zeta": zeta(F)}
                           for F in shown],
    }


def cmd_spectrum(args, ld: Loader) -> dict:
    X, L = ld.xmod(args.xmod), ld.lattice(args.lattice)
    S = enumerate_fake_flat(L, X, max_states=args.max_states, workers=args.threads)
    H = build_hamiltonian(S)
    rep = spectrum(H, max_dim=args.max_dim)
    gsd = ground_state_degeneracy(S)
    out = rep.to_json()
    out["min_eigenvalue"] = rep.min_eigenvalue
    out["gsd"] = gsd
    if rep.multiplicity(0) != gsd:
        raise InvariantBreach(f"zero-energy multiplicity {rep.multiplicity(0)} differs from orbit count {gsd}")
    if args.oracle:
        _, Hd = dense_hamiltonian_oracle(L, X)
        ref = spectrum(Hd, max_dim=args.max_dim)
        if ref.eigenvalues != rep.eigenvalues:
            raise InvariantBreach(f"oracle spectrum {ref.eigenvalues} differs from {rep.eigenvalues}")
        out["oracle"] = "agrees"
    return out


def cmd_gsd(args, ld: Loader) -> dict:
    X, L = ld.xmod(args.xmod), ld.lattice(args.lattice)
    S = enumerate_fake_flat(L, X, max_states=args.max_states, workers=args.threads)
    return {"dimension": len(S), "gsd": ground_state_degeneracy(S)}


def _block_json(b) -> dict:
    d = {"flux": list(b.flux), "rho": b.rho, "dimension": b.dimension,
         "normalized": {"C": b.calC, "A": b.calA}, "energy": b.energy,
         "predicted": predicted_table(b)}
    if b.calB is not None:
        d["normalized"]["B"] = b.calB
    d["normalized"] = dict(sorted(d["normalized"].items()))
    return d


def cmd_decompose(args, ld: Loader) -> dict:
    X = ld.xmod(args.xmod)
    if args.fixture == "globe":
        blocks = decompose_globe(X)
        out = [{"flux": list(b.flux), "edge_charge": {"k": b.k, "lambda": b.lam},
                "class": [[q.k, q.lam] for q in b.charges], "transversal": list(b.transversal),
                "dimension": b.dimension, "vertex_charges": [_block_json(s) for s in b.blocks]}
               for b in blocks]
        energies: dict[int, int] = {}
        for b in blocks:
            for s in b.blocks:
                energies[s.energy] = energies.get(s.energy, 0) + s.dimension
    else:
        blocks = decompose_minimal(X)
        out = [_block_json(b) for b in blocks]
        energies = {}
        for b in blocks:
            energies[b.energy] = energies.get(b.energy, 0) + b.dimension
    return {"fixture": args.fixture, "blocks": out,
            "energies": [{"value": v, "multiplicity": m} for v, m in sorted(energies.items())]}


def cmd_holonomy(args, ld: Loader) -> dict:
    spec, F = ld.config(args.config)
    X = F.xmod
    blob = args.blob or spec.get("blob")
    word = spec.get("word")
    if blob is not None and args.word is None and word is None:
        value = blob_holonomy(F, blob)
        what = {"blob": blob}
    else:
        terms = _terms(json.loads(args.word) if args.word else word)
        value = surface_holonomy(F, terms, spec.get("base"))
        what = {"word": [{"path": [("+" if s > 0 else "-") + t for t, s in w.path],
                          "plaquette": w.plaquette, "sign": w.sign} for w in terms]}
    return {**what, "holonomy": _element(X.E, value), "trivial": value == 0}


def cmd_wilson(args, ld: Loader) -> dict:
    _, F = ld.config(args.config)
    G = F.xmod.G
    if args.character:
        chi = np.array(json.loads(args.character), dtype=complex)
        label = None
    else:
        ct = character_table(G)
        label = args.irrep
        chi = ct.chi(label)
    return {"irrep": label, "action": round(wilson_action(F, chi), 12)}


def cmd_selftest(args, ld: Loader) -> dict:
    rng = random.Random(args.seed)
    checks = {"gauge_law": 0, "fake_flat_preserved": 0, "equivariance": 0, "zeta_invariant": 0}
    failures = []
    for lname in ("s3_globe", "s3_minimal", "s3_orange_whiskered"):
        L = builtin(lname)
        for xname, build in sorted(BUILTIN_XMODS.items()):
            X = build()
            X.check_derived()
            S = enumerate_fake_flat(L, X, max_states=args.max_states)
            for _ in range(args.samples):
                F = S[rng.randrange(len(S))]
                a = GaugeElement(tuple(rng.randrange(X.E.order) for _ in L.tracks),
                                 tuple(rng.randrange(X.G.order) for _ in L.vertices))
                b = GaugeElement(tuple(rng.randrange(X.E.order) for _ in L.tracks),
                                 tuple(rng.randrange(X.G.order) for _ in L.vertices))
                Fa = apply_gauge_element(F, a)
                tag = f"{lname}/{xname}"
                if apply_gauge_element(apply_gauge_element(F, b), a) != apply_gauge_element(F, compose(X, L, a, b)):
                    failures.append(f"{tag}: gauge law")
                if not is_fake_flat(Fa):
                    failures.append(f"{tag}: fake-flatness")
                for i, bl in enumerate(L.blobs):
                    u = a.u[L.vertex_index[bl.base]]
                    if blob_holonomy(Fa, i) != X.act(u, blob_holonomy(F, i)):
                        failures.append(f"{tag}: equivariance at {bl.id}")
                if zeta(Fa) != zeta(F):
                    failures.append(f"{tag}: zeta")
                for key in checks:
                    checks[key] += 1
    if failures:
        raise InvariantBreach("; ".join(failures[:10]))
    return {"seed": args.seed, "samples_per_case": args.samples, "checks": checks, "ok": True}


COMMANDS = {
    "validate": cmd_validate, "enumerate": cmd_enumerate, "spectrum": cmd_spectrum, "gsd": cmd_gsd,
    "decompose": cmd_decompose, "holonomy": cmd_holonomy, "wilson": cmd_wilson, "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-states", type=int, default=MAX_STATES)
    common.add_argument("--max-dim", type=int, default=MAX_DIM)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--out", help="write the JSON artifact here instead of stdout")

    p = argparse.ArgumentParser(prog="hlgt", description=__doc__)
    p.add_argument("--version", action="version", version=f"hlgt {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check group / crossed module / lattice files")
    s.add_argument("paths", nargs="+")

    for name, helptext in (("enumerate", "list fake-flat configurations"),
                           ("spectrum", "exact Hamiltonian spectrum"),
                           ("gsd", "ground-state degeneracy by orbit counting")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--xmod", required=True, help="crossed module file or builtin name")
        s.add_argument("--lattice", required=True, help="lattice file or builtin name")
        if name == "enumerate":
            s.add_argument("--limit", type=int)
        if name == "spectrum":
            s.add_argument("--oracle", action="store_true", help="cross-check against the dense brute-force path")

    s = sub.add_parser("decompose", parents=[common], help="charge decomposition of the 3-sphere models")
    s.add_argument("--xmod", required=True)
    s.add_argument("--fixture", choices=("globe", "minimal"), default="globe")

    s = sub.add_parser("holonomy", parents=[common], help="2-holonomy of a configuration")
    s.add_argument("--config", required=True)
    s.add_argument("--blob")
    s.add_argument("--word", help="JSON list of {path, plaquette, sign} terms")

    s = sub.add_parser("wilson", parents=[common], help="Wilson action of a configuration")
    s.add_argument("--config", required=True)
    s.add_argument("--irrep", type=int, default=0, help="irrep label in the character table of G")
    s.add_argument("--character", help="JSON list of class-function values indexed by G elements")

    s = sub.add_parser("selftest", parents=[common], help="randomised invariant checks")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, default=20)
    return p


def _params(args) -> dict:
    skip = {"out", "command", "threads"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    ld = Loader()
    t0 = time.perf_counter()
    try:
        result = COMMANDS[args.command](args, ld)
        code = 0 if result.get("ok", True) else 1
    except HLGTError as exc:
        result = {"ok": False, "error": {"type": type(exc).__name__, "message": str(exc)}}
        code = exc.exit_code
    except (OSError, KeyError) as exc:
        result = {"ok": False, "error": {"type": type(exc).__name__, "message": str(exc)}}
        code = 1
    result["manifest"] = {
        "tool": "hlgt",
        "version": __version__,
        "command": args.command,
        "parameters": _params(args),
        "inputs": dict(sorted(ld.digests.items())),
        "timings": {"seconds": round(time.perf_counter() - t0, 6)},
    }
    text = json.dumps(result, indent=1, sort_keys=True, default=str)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if code:
        print(f"hlgt {args.command}: {result.get('error', {}).get('message', 'failed')}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
