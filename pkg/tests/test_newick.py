"""Parsing and serialization: grammar, validation, round trips."""

import pytest

import mafkit as mk

from helpers import random_forest, random_tree


def test_parse_rooted_attaches_rho():
    inst = mk.parse_instance("((a,b),c);", rooted=True)
    f = inst.forests[0]
    assert f.order() == 1
    assert sorted(f.labels.name(l) for l in f.label_ids()) == ["a", "b", "c", "ρ"]


def test_parse_preserves_multifurcation():
    f = mk.parse_instance("(a,b,c,d);", rooted=False).forests[0]
    hubs = [v for v in f.vertices() if f.label_of(v) is None]
    assert len(hubs) == 1
    assert f.degree(hubs[0]) == 4


def test_parse_label_set_mismatch():
    with pytest.raises(mk.NewickError, match="differs"):
        mk.parse_instance("((a,b),c);\n((a,c),d);", rooted=True)


def test_parse_duplicate_label():
    with pytest.raises(mk.NewickError, match="duplicate"):
        mk.parse_instance("((a,b),a);", rooted=True)


def test_parse_empty_input():
    with pytest.raises(mk.NewickError, match="no trees"):
        mk.parse_instance("# just a comment\n\n", rooted=True)


def test_parse_syntax_errors():
    for bad in ["((a,b);", "(a);", "a,b;", "((a,b)),c;", "(a,b)"]:
        with pytest.raises(mk.NewickError):
            mk.parse_instance(bad, rooted=True)


def test_parse_internal_labels_rejected():
    with pytest.raises(mk.NewickError, match="internal node labels"):
        mk.parse_instance("((a,b)x,c);", rooted=True)


def test_parse_rho_reserved_deep():
    with pytest.raises(mk.NewickError):
        mk.parse_instance(f"((a,{mk.RHO}),b);", rooted=True)
    with pytest.raises(mk.NewickError):
        mk.parse_instance(f"((a,b),{mk.RHO});", rooted=False)


def test_parse_rho_accepted_at_top_level():
    inst = mk.parse_instance(f"((a,b),c,{mk.RHO});", rooted=True)
    ref = mk.parse_instance("((a,b),c);", rooted=True)
    assert inst.forests[0].same_structure(ref.forests[0])


def test_branch_lengths_discarded_with_warning():
    with pytest.warns(mk.NewickWarning):
        inst = mk.parse_instance("((a:1,b:2.5):0.1,c:3e-2);", rooted=True)
    ref = mk.parse_instance("((a,b),c);", rooted=True)
    assert inst.forests[0].same_structure(ref.forests[0])


def test_comments_and_blank_lines_ignored():
    text = "# header\n\n((a,b),c);\n# middle\n((a,c),b);\n"
    inst = mk.parse_instance(text, rooted=True)
    assert inst.m == 2


def test_whitespace_tolerated():
    inst = mk.parse_instance(" ( ( a , b ) , c ) ;", rooted=True)
    ref = mk.parse_instance("((a,b),c);", rooted=True)
    assert inst.forests[0].same_structure(ref.forests[0])


def test_serialize_canonical_child_order():
    inst = mk.parse_instance("((b,a),c);", rooted=True)
    assert mk.serialize(inst.forests[0]) == "((a,b),c,ρ);"


def test_serialize_singletons():
    f = mk.parse_instance("((a,b),c);", rooted=True).forests[0]
    g = f.remove_edges(sorted(f.edge_ids()))
    assert mk.serialize(g) == "a;\nb;\nc;\nρ;"


def test_round_trip_random_trees(rng):
    for rooted in (True, False):
        for _ in range(50):
            t = random_tree(rng, rng.randint(3, 10), rooted)
            text = mk.serialize(t)
            back = mk.parse_instance(text, rooted).forests[0]
            assert back.same_structure(t)
            assert mk.serialize(back) == text


def test_serialize_forest_components_stable(rng):
    # forests (multi-component) serialize deterministically, one line each
    for _ in range(10):
        f = random_forest(rng, 6, rooted=True, max_cuts=3)
        text = mk.serialize(f)
        assert text.count(";") == f.order()
        assert mk.serialize(f) == text


def test_format_instance_round_trip():
    spec = mk.GenSpec(n=6, m=3, x=1, seed=5)
    inst = mk.generate_instance(spec)
    text = mk.format_instance(inst, header=spec.header())
    assert text.startswith("# spec n=6")
    back = mk.parse_instance(text, rooted=True)
    for f, g in zip(inst.forests, back.forests):
        assert f.same_structure(g)


def test_format_instance_rejects_forests():
    f = mk.parse_instance("((a,b),c);", rooted=True).forests[0]
    cut = f.remove_edges([f.pendant_edge(f.labels.id_of("a"))])
    inst = mk.Instance(rooted=True, forests=(cut,))
    with pytest.raises(mk.MafError):
        mk.format_instance(inst)
