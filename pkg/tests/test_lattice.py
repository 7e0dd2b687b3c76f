import copy

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hlgt.errors import (BlobHomologyInvalid, BlobWordNotTrivial, DanglingReference, DuplicateId,
                         NotComposable, OpenBoundaryWord, UnknownBuiltin)
from hlgt.lattice import (BUILTIN_LATTICES, builtin, free_reduce, inverse_word, lattice_from_spec,
                          parse_word)


def test_reduce_examples(globe):
    L = builtin("sphere_l1")
    assert globe.reduce_path(parse_word("+t,-t")) == ()
    assert L.reduce_path(parse_word("+t2,+t1")) == parse_word("+t2,+t1")
    assert L.reduce_path(parse_word("+t2,+t1,-t1,-t2")) == ()


def test_reduce_not_composable_reports_index():
    L = builtin("sphere_l1")
    with pytest.raises(NotComposable, match="step 1"):
        L.reduce_path(parse_word("+t1,+t1"))


def test_builtin_shapes():
    g, m = builtin("s3_globe"), builtin("s3_minimal")
    assert (len(g.vertices), len(g.tracks), len(g.plaquettes), len(g.blobs)) == (1, 1, 2, 2)
    assert (len(m.vertices), len(m.tracks), len(m.plaquettes), len(m.blobs)) == (1, 0, 1, 2)
    with pytest.raises(UnknownBuiltin):
        builtin("s3_typo")


@pytest.mark.parametrize("name", BUILTIN_LATTICES)
def test_builtins_validate(name):
    L = builtin(name)
    assert lattice_from_spec(L.to_spec()).to_spec() == L.to_spec()


def test_sphere_l1_has_four_cell_word():
    L = builtin("sphere_l1")
    assert L.plaquette("P4").boundary == parse_word("+t1,-t4,+t3,+t2")
    assert L.blobs == ()


def _globe_spec():
    return builtin("s3_globe").to_spec()


def test_blob_missing_plaquette_is_homology_error():
    spec = _globe_spec()
    spec["blobs"][0]["evaluation"] = spec["blobs"][0]["evaluation"][:1]
    with pytest.raises(BlobHomologyInvalid):
        lattice_from_spec(spec)


def test_blob_word_not_trivial_reports_residue():
    spec = copy.deepcopy(builtin("torus").to_spec())
    spec["blobs"] = [{"id": "b", "base": "v", "boundary_plaquettes": ["P"],
                      "evaluation": [{"path": [], "plaquette": "P", "sign": 1}]}]
    # a commutator is a cycle, but not the trivial word in the free group
    with pytest.raises(BlobWordNotTrivial, match=r"\['\+b', '\+a', '-b', '-a'\]"):
        lattice_from_spec(spec)


def test_open_boundary_and_dangling():
    spec = builtin("sphere_l1").to_spec()
    spec["plaquettes"][0]["boundary"] = ["+t5"]
    with pytest.raises(OpenBoundaryWord):
        lattice_from_spec(spec)
    spec = builtin("sphere_l1").to_spec()
    spec["tracks"][0]["target"] = "nowhere"
    with pytest.raises(DanglingReference):
        lattice_from_spec(spec)
    spec = builtin("sphere_l1").to_spec()
    spec["tracks"][1]["id"] = "t1"
    with pytest.raises(DuplicateId):
        lattice_from_spec(spec)


def test_fixture_env_override(tmp_path, monkeypatch):
    spec = builtin("torus").to_spec()
    spec["name"] = "custom"
    import json
    (tmp_path / "custom.json").write_text(json.dumps(spec))
    monkeypatch.setenv("HLGT_FIXTURES", str(tmp_path))
    assert builtin("custom").name == "custom"


# words over a bouquet of loops at one vertex are always composable
LOOPS = builtin("s3_globe")
steps = st.tuples(st.just("t"), st.sampled_from([1, -1]))


@given(st.lists(steps, max_size=30))
def test_reduce_idempotent_and_shrinking(word):
    r = LOOPS.reduce_path(word)
    assert LOOPS.reduce_path(r) == r
    assert len(r) <= len(word)
    assert LOOPS.reduce_path(tuple(word) + inverse_word(tuple(word))) == ()


@given(st.lists(st.tuples(st.sampled_from(["a", "b", "c"]), st.sampled_from([1, -1])), max_size=30))
def test_free_reduce_has_no_adjacent_inverses(word):
    r = free_reduce(word)
    assert all(not (x[0] == y[0] and x[1] == -y[1]) for x, y in zip(r, r[1:]))
    assert free_reduce(tuple(word) + inverse_word(tuple(word))) == ()
