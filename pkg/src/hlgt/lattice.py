"""Combinatorial 2-lattices.

Vertices, directed tracks, based plaquettes whose boundary is a quantised
(unreduced) word, and blobs carrying an explicit evaluation word.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import sympy

from .errors import (BlobHomologyInvalid, BlobWordNotTrivial, DanglingReference, DuplicateId,
                     MalformedWord, NotComposable, OpenBoundaryWord, UnknownBuiltin)

Step = tuple[str, int]          # (track id, +1 | -1)
PathWord = tuple[Step, ...]


@dataclass(frozen=True)
class Track:
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class Plaquette:
    id: str
    base: str
    boundary: PathWord


@dataclass(frozen=True)
class WordTerm:
    """One factor ``path |> plaquette^sign`` of an evaluation word."""

    path: PathWord
    plaquette: str
    sign: int


@dataclass(frozen=True)
class Blob:
    id: str
    base: str
    boundary_plaquettes: frozenset[str]
    evaluation: tuple[WordTerm, ...]


def parse_step(token: str) -> Step:
    token = token.strip()
    if token[:1] == "+":
        return token[1:], 1
    if token[:1] == "-":
        return token[1:], -1
    return token, 1


def parse_word(tokens: Iterable[str] | str) -> PathWord:
    if isinstance(tokens, str):
        tokens = [t for t in tokens.split(",") if t.strip()]
    return tuple(parse_step(t) for t in tokens)


def format_word(word: PathWord) -> list[str]:
    return [("+" if s > 0 else "-") + t for t, s in word]


def inverse_word(word: PathWord) -> PathWord:
    return tuple((t, -s) for t, s in reversed(word))


def free_reduce(word: Sequence[Step]) -> PathWord:
    """Cancel adjacent ``t^+ t^-`` / ``t^- t^+`` pairs until none remain."""
    out: list[Step] = []
    for t, s in word:
        if out and out[-1][0] == t and out[-1][1] == -s:
            out.pop()
        else:
            out.append((t, s))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class Lattice2:
    name: str
    vertices: tuple[str, ...]
    tracks: tuple[Track, ...]
    plaquettes: tuple[Plaquette, ...]
    blobs: tuple[Blob, ...] = ()
    vertex_index: dict = field(init=False, repr=False)
    track_index: dict = field(init=False, repr=False)
    plaquette_index: dict = field(init=False, repr=False)
    blob_index: dict = field(init=False, repr=False)

    def __post_init__(self):
        for attr, items, key in (("vertex_index", self.vertices, None),
                                 ("track_index", self.tracks, "id"),
                                 ("plaquette_index", self.plaquettes, "id"),
                                 ("blob_index", self.blobs, "id")):
            ids = [x if key is None else getattr(x, key) for x in items]
            if len(set(ids)) != len(ids):
                dup = next(i for i in ids if ids.count(i) > 1)
                raise DuplicateId(f"duplicate id {dup!r} in {attr.split('_')[0]}s")
            object.__setattr__(self, attr, {i: n for n, i in enumerate(ids)})

    def __repr__(self):
        return (f"Lattice2({self.name!r}, V={len(self.vertices)}, T={len(self.tracks)}, "
                f"P={len(self.plaquettes)}, B={len(self.blobs)})")

    def track(self, tid: str) -> Track:
        return self.tracks[self.track_index[tid]]

    def plaquette(self, pid: str) -> Plaquette:
        return self.plaquettes[self.plaquette_index[pid]]

    def blob(self, bid: str) -> Blob:
        return self.blobs[self.blob_index[bid]]

    def step_ends(self, step: Step) -> tuple[str, str]:
        t = self.track(step[0])
        return (t.source, t.target) if step[1] > 0 else (t.target, t.source)

    def check_composable(self, word: Sequence[Step], start: str | None = None) -> tuple[str, str] | None:
        """Return (initial, final) vertex of a composable word; None for the empty word
        without a given start.  Raises :class:`NotComposable` with the offending index."""
        cur = start
        first = start
        for i, step in enumerate(word):
            if step[0] not in self.track_index:
                raise DanglingReference(f"unknown track {step[0]!r} at position {i}")
            if step[1] not in (1, -1):
                raise NotComposable(f"sign at position {i} must be +1 or -1")
            a, b = self.step_ends(step)
            if cur is not None and a != cur:
                raise NotComposable(f"step {i} ({format_word((step,))[0]}) starts at {a!r}, "
                                    f"previous step ends at {cur!r}")
            if first is None:
                first = a
            cur = b
        if first is None:
            return None
        return first, cur

    def reduce_path(self, word: Sequence[Step]) -> PathWord:
        self.check_composable(word)
        return free_reduce(word)

    # compiled integer views used by the hot loops
    @cached_property
    def compiled_boundaries(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        ti = self.track_index
        return tuple(tuple((ti[t], s) for t, s in p.boundary) for p in self.plaquettes)

    @cached_property
    def track_ends(self) -> tuple[tuple[int, int], ...]:
        vi = self.vertex_index
        return tuple((vi[t.source], vi[t.target]) for t in self.tracks)

    @cached_property
    def plaquette_bases(self) -> tuple[int, ...]:
        return tuple(self.vertex_index[p.base] for p in self.plaquettes)

    @cached_property
    def tracks_in_plaquette(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(t for t, _ in w) for w in self.compiled_boundaries)

    def compile_word(self, terms: Sequence[WordTerm]) -> tuple:
        ti, pi = self.track_index, self.plaquette_index
        return tuple((tuple((ti[t], s) for t, s in term.path), pi[term.plaquette], term.sign)
                     for term in terms)

    @cached_property
    def compiled_blobs(self) -> tuple:
        return tuple(self.compile_word(b.evaluation) for b in self.blobs)

    def boundary_matrix(self) -> sympy.Matrix:
        """Integer matrix of abelianised signed track counts, one column per plaquette."""
        m = sympy.zeros(len(self.tracks), len(self.plaquettes))
        for j, word in enumerate(self.compiled_boundaries):
            for t, s in word:
                m[t, j] += s
        return m

    def to_spec(self) -> dict:
        return {
            "name": self.name,
            "vertices": list(self.vertices),
            "tracks": [{"id": t.id, "source": t.source, "target": t.target} for t in self.tracks],
            "plaquettes": [{"id": p.id, "base": p.base, "boundary": format_word(p.boundary)}
                           for p in self.plaquettes],
            "blobs": [{"id": b.id, "base": b.base,
                       "boundary_plaquettes": sorted(b.boundary_plaquettes),
                       "evaluation": [{"path": format_word(w.path), "plaquette": w.plaquette,
                                       "sign": w.sign} for w in b.evaluation]}
                      for b in self.blobs],
        }


def check_word_terms(L: Lattice2, base: str, terms: Sequence[WordTerm], exc=MalformedWord) -> None:
    """Structural check of an evaluation word: each whisker runs from ``base``
    to the base of its plaquette."""
    if base not in L.vertex_index:
        raise DanglingReference(f"unknown base vertex {base!r}")
    for i, term in enumerate(terms):
        if term.plaquette not in L.plaquette_index:
            raise DanglingReference(f"term {i}: unknown plaquette {term.plaquette!r}")
        if term.sign not in (1, -1):
            raise exc(f"term {i}: sign must be +1 or -1")
        ends = L.check_composable(term.path, start=base)
        end = base if ends is None else ends[1]
        pbase = L.plaquette(term.plaquette).base
        if end != pbase:
            raise exc(f"term {i}: whisker ends at {end!r}, plaquette {term.plaquette!r} "
                      f"is based at {pbase!r}")


def blob_word_residue(L: Lattice2, terms: Sequence[WordTerm]) -> PathWord:
    """Free reduction of prod_i path_i (dP_i)^(-sign_i) path_i^-1.

    With fake-flatness read as d(e_P)^-1 = hol(dP), the holonomy of this word
    is d(Hol2) for every configuration, so an empty reduction forces the
    evaluation into ker d.
    """
    word: list[Step] = []
    for term in terms:
        bd = L.plaquette(term.plaquette).boundary
        inner = bd if term.sign < 0 else inverse_word(bd)
        word.extend(term.path)
        word.extend(inner)
        word.extend(inverse_word(term.path))
    return free_reduce(word)


def net_coefficients(L: Lattice2, terms: Sequence[WordTerm]) -> dict[str, int]:
    n: dict[str, int] = {}
    for term in terms:
        n[term.plaquette] = n.get(term.plaquette, 0) + term.sign
    return n


def check_blob_homology(L: Lattice2, blob: Blob) -> None:
    used = {t.plaquette for t in blob.evaluation}
    if used != set(blob.boundary_plaquettes):
        missing = sorted(set(blob.boundary_plaquettes) - used)
        extra = sorted(used - set(blob.boundary_plaquettes))
        raise BlobHomologyInvalid(f"blob {blob.id!r}: evaluation plaquettes differ from boundary "
                                  f"(missing {missing}, extra {extra})")
    cols = sorted(blob.boundary_plaquettes, key=L.plaquette_index.__getitem__)
    full = L.boundary_matrix()
    sub = full.extract(list(range(full.rows)), [L.plaquette_index[p] for p in cols]) \
        if full.rows else sympy.zeros(0, len(cols))
    kernel = sub.nullspace() if full.rows else [sympy.eye(len(cols))[:, i] for i in range(len(cols))]
    if len(kernel) != 1:
        raise BlobHomologyInvalid(f"blob {blob.id!r}: cycle space of its boundary has rank "
                                  f"{len(kernel)}, expected 1")
    gen = kernel[0]
    denom = math.lcm(*[int(sympy.fraction(x)[1]) for x in gen])
    gen = [int(x * denom) for x in gen]
    g = math.gcd(*gen)
    gen = [x // g for x in gen]
    coeff = net_coefficients(L, blob.evaluation)
    n = [coeff.get(p, 0) for p in cols]
    if n != gen and n != [-x for x in gen]:
        raise BlobHomologyInvalid(f"blob {blob.id!r}: net plaquette coefficients {dict(zip(cols, n))} "
                                  f"are not a primitive generator {dict(zip(cols, gen))}")


def validate_lattice(L: Lattice2) -> Lattice2:
    vs = set(L.vertices)
    for t in L.tracks:
        for end in (t.source, t.target):
            if end not in vs:
                raise DanglingReference(f"track {t.id!r} references unknown vertex {end!r}")
    for p in L.plaquettes:
        if p.base not in vs:
            raise DanglingReference(f"plaquette {p.id!r} references unknown vertex {p.base!r}")
        ends = L.check_composable(p.boundary, start=p.base)
        if ends is not None and ends[1] != p.base:
            raise OpenBoundaryWord(f"plaquette {p.id!r}: boundary ends at {ends[1]!r}, "
                                   f"not at its base {p.base!r}")
    for b in L.blobs:
        for pid in b.boundary_plaquettes:
            if pid not in L.plaquette_index:
                raise DanglingReference(f"blob {b.id!r} references unknown plaquette {pid!r}")
        check_word_terms(L, b.base, b.evaluation)
        check_blob_homology(L, b)
        residue = blob_word_residue(L, b.evaluation)
        if residue:
            raise BlobWordNotTrivial(f"blob {b.id!r}: evaluation word reduces to "
                                     f"{format_word(residue)}, not the empty word")
    return L


def _terms_from_spec(items) -> tuple[WordTerm, ...]:
    return tuple(WordTerm(parse_word(it.get("path", [])), it["plaquette"], int(it["sign"]))
                 for it in items)


def lattice_from_spec(spec: dict, validate: bool = True) -> Lattice2:
    try:
        L = Lattice2(
            name=spec.get("name", "L"),
            vertices=tuple(spec["vertices"]),
            tracks=tuple(Track(t["id"], t["source"], t["target"]) for t in spec.get("tracks", [])),
            plaquettes=tuple(Plaquette(p["id"], p["base"], parse_word(p.get("boundary", [])))
                             for p in spec.get("plaquettes", [])),
            blobs=tuple(Blob(b["id"], b["base"], frozenset(b["boundary_plaquettes"]),
                             _terms_from_spec(b["evaluation"])) for b in spec.get("blobs", [])),
        )
    except KeyError as exc:
        raise DanglingReference(f"lattice description is missing field {exc}") from None
    return validate_lattice(L) if validate else L


# -- built-in fixtures -------------------------------------------------------

BUILTIN_LATTICES = ("s3_globe", "s3_minimal", "s3_orange", "s3_orange_whiskered",
                    "sphere_l1", "annulus", "torus", "rp2")


def fixture_dirs() -> list[Path]:
    dirs = []
    env = os.environ.get("HLGT_FIXTURES")
    if env:
        dirs.append(Path(env))
    dirs.append(Path(str(resources.files("hlgt") / "fixtures")))
    return dirs


def builtin(name: str) -> Lattice2:
    dirs = fixture_dirs()
    for d in dirs:
        path = d / f"{name}.json"
        # the packaged directory only serves the registered names
        if path.is_file() and (d is not dirs[-1] or name in BUILTIN_LATTICES):
            return lattice_from_spec(json.loads(path.read_text()))
    raise UnknownBuiltin(f"unknown builtin lattice {name!r}; known: {', '.join(BUILTIN_LATTICES)}")
