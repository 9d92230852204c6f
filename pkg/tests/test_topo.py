import pytest

from quadmaps.checks import expected_class
from quadmaps.classes import AffineClass
from quadmaps.parse import parse_poly
from quadmaps.topo import (MERGES, NotDistinguishedByTable, TABLE, ChainStep, MergeWitness,
                           distinguishing_report, f28_printed_sign_fails, members,
                           merge_witnesses, signature, solve_h, topo_index)


def test_table_total_and_onto():
    assert sorted(TABLE) == list(range(1, 65))
    assert {t.index for t in TABLE.values()} == set(range(1, 48))


def test_letters_only_on_merged_groups():
    for k, t in TABLE.items():
        assert bool(t.letter) == (t.index in MERGES)


@pytest.mark.parametrize("cls,text", [
    (AffineClass.discrete(37), "24b"),
    (AffineClass.discrete(49), "28e"),
    (AffineClass.family(8, 1), "8"),
    (AffineClass.family(1, 1, 1), "1"),
    (AffineClass.family(2, 1, 1), "2"),
    (AffineClass.family(4, 1), "4"),
    (AffineClass.discrete(62), "31g"),
    (AffineClass.discrete(64), "47"),
    (AffineClass.discrete(57), "32d"),
])
def test_examples(cls, text):
    assert str(topo_index(cls)) == text


@pytest.mark.parametrize("idx", sorted(MERGES))
def test_members_in_letter_order(idx):
    assert members(idx) == list(MERGES[idx])


@pytest.mark.parametrize("w", merge_witnesses(), ids=lambda w: w.name)
def test_merge_witness_chain(w):
    out = w.run()
    assert out["verified"], out


def test_solved_h():
    h = solve_h()
    want = parse_poly("-1/8*u^2*y - 1/4*u*y^2 - 1/8*y^3 - 1/4*u^2 - 1/4*u*y", ("u", "y"))
    assert h == want


def test_f28_printed_sign_refuted():
    assert f28_printed_sign_fails()


def test_identity_chain():
    w = MergeWitness("identity", ("x", "y"), [ChainStep("source", ("x", "y", "z")),
                                              ChainStep("target", ("p", "q"))], ("x", "y"))
    assert w.run()["verified"]


def test_non_invertible_step_rejected():
    w = MergeWitness("bad", ("x", "y"), [ChainStep("source", ("x", "x", "z"))], ("x", "x"))
    assert not w.run()["verified"]


@pytest.mark.parametrize("idx", sorted(MERGES))
def test_merged_groups_share_census_signature(idx):
    from quadmaps.census import census_of
    sigs = {census_of(expected_class(k)).signature() for k in MERGES[idx]}
    assert len(sigs) == 1


@pytest.mark.parametrize("i,j", [(13, 17), (6, 7)])
def test_distinguished_pairs(i, j):
    text = distinguishing_report(i, j)
    assert text.startswith(f"{i} vs {j}:")
    assert len(text.splitlines()) > 1


def test_13_vs_17_mentions_image_cusp():
    text = distinguishing_report(13, 17)
    assert "cusp" in text


def test_44_vs_45_only_by_table():
    with pytest.raises(NotDistinguishedByTable):
        distinguishing_report(44, 45)


def test_same_index_rejected():
    with pytest.raises(ValueError):
        distinguishing_report(5, 5)


# pairs of indices with identical census data; everything else must differ
SAME_SIGNATURE = [{30, 32}, {34, 35}, {37, 43}, {42, 44, 45, 46, 47}]


def test_signature_collisions_are_exactly_the_known_ones():
    by_sig = {}
    for idx in range(1, 48):
        by_sig.setdefault(signature(idx), set()).add(idx)
    groups = [g for g in by_sig.values() if len(g) > 1]
    assert sorted(map(sorted, groups)) == sorted(map(sorted, SAME_SIGNATURE))
