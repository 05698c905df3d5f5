from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from annulus_kit.diagram import (
    Component,
    PlanarDiagram,
    connected_sum,
    disjoint_union,
    face_pair_bundle,
    faces,
    from_gauss,
    insert_full_twists,
    linking_matrix,
    linking_number,
    mirror,
    remove_component,
    to_gauss,
    validate,
)
from annulus_kit.errors import EmptyBundle, MalformedPD, MissingFraming
from annulus_kit.morse import braid_closure

HOPF_PD = [(4, 1, 3, 2), (2, 3, 1, 4)]


def unknot(framing=None):
    return PlanarDiagram.from_pd([], components=[Component(arcs=(1,), framing=framing)])


def random_braid(rng, strands=3, length=8):
    return [rng.choice([1, -1]) * rng.randint(1, strands - 1) for _ in range(length)]


braid_words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), min_size=1, max_size=10)


def test_validate_unknot():
    d = validate(unknot())
    assert len(d.components) == 1 and d.crossings == ()


def test_validate_negative_hopf():
    d = validate(PlanarDiagram.from_pd(HOPF_PD))
    assert len(d.components) == 2
    assert d.signs == (-1, -1)
    assert linking_number(d, 0, 1) == -1


def test_label_used_once_is_malformed():
    with pytest.raises(MalformedPD):
        PlanarDiagram.from_pd([(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 7, 2)])


def test_validate_numbers_edges_in_traversal_order():
    d = validate(braid_closure([1, -2, 1, -2]))
    labels = [a for c in d.components for a in c.arcs]
    assert labels == list(range(1, len(labels) + 1))


def test_linking_matrix_examples():
    assert linking_matrix(unknot(5)).matrix == ((Fraction(5),),)
    h = PlanarDiagram.from_pd(HOPF_PD)
    h = h.reframe(0, -1).reframe(1, -1)
    assert linking_matrix(h).matrix == ((-1, -1), (-1, -1))
    with pytest.raises(MissingFraming):
        linking_matrix(PlanarDiagram.from_pd(HOPF_PD))


def test_linking_matrix_rational_framing():
    n = 3
    h = braid_closure([1, 1]).reframe(0, Fraction(-1, n)).reframe(1, 0)
    assert linking_matrix(h).matrix == ((Fraction(-1, n), 1), (1, 0))


def test_twist_single_strand_is_unchanged():
    d = braid_closure([1, 1, 1])
    out = insert_full_twists(d, [1], 4)
    assert out.crossings == d.crossings


def test_twist_empty_bundle():
    with pytest.raises(EmptyBundle):
        insert_full_twists(unknot(), [], 1)


def test_twist_two_parallel_strands():
    # two unlinked unknots side by side; their facing edges form a bundle
    d = disjoint_union(unknot(), unknot())
    for count in (1, 2, 5):
        out = insert_full_twists(d, [1, 2], count)
        assert len(out.crossings) == 2 * count
        assert all(s == 1 for s in out.signs)
        assert abs(linking_number(out, 0, 1)) == count
        validate(out)


@settings(max_examples=40, deadline=None)
@given(word=braid_words, count=st.integers(-3, 3), hand=st.sampled_from([1, -1]), seed=st.integers(0, 10**6))
def test_twist_changes_pairwise_linking_by_count(word, count, hand, seed):
    d = braid_closure(word, 4)
    rng = random.Random(seed)
    regions = faces(d)
    region = rng.choice([r for r in regions if len(r) >= 2])
    (e1, _), (e2, _) = rng.sample(region, 2)
    if e1 == e2:
        return
    bundle = face_pair_bundle(d, e1, e2)
    out = validate(insert_full_twists(d, bundle, count, hand))
    owner = d.component_of()
    c1, c2 = owner[e1], owner[e2]
    m = len(d.components)
    before = {(i, j): linking_number(d, i, j) for i in range(m) for j in range(m) if i < j}
    after = {(i, j): linking_number(out, i, j) for i in range(m) for j in range(m) if i < j}
    direction = (1 if bundle[0] > 0 else -1) * (1 if bundle[1] > 0 else -1)
    for key in before:
        delta = after[key] - before[key]
        if c1 != c2 and key == tuple(sorted((c1, c2))):
            assert delta == hand * count * direction
        else:
            assert delta == 0


def test_mirror_unknot_and_framing():
    u = unknot(4)
    m = mirror(u)
    assert m.crossings == () and m.components[0].framing == -4


@settings(max_examples=40, deadline=None)
@given(word=braid_words)
def test_mirror_negates_linking_matrix(word):
    d = braid_closure(word, 4)
    for i in range(len(d.components)):
        d = d.reframe(i, i + 1)
    lm = linking_matrix(d).matrix
    mm = linking_matrix(mirror(d)).matrix
    assert all(a == -b for ra, rb in zip(lm, mm) for a, b in zip(ra, rb))
    assert mirror(mirror(d)) == d


@settings(max_examples=40, deadline=None)
@given(word=braid_words)
def test_text_round_trips(word):
    d = validate(braid_closure(word, 4)).reframe(0, Fraction(-2, 3))
    assert PlanarDiagram.from_pd_text(d.to_pd_text()) == d
    assert PlanarDiagram.from_json(d.to_json()) == d


@settings(max_examples=40, deadline=None)
@given(word=braid_words)
def test_gauss_round_trip(word):
    d = validate(braid_closure(word, 4))
    e = validate(from_gauss(to_gauss(d)))
    assert to_gauss(e) == to_gauss(d)
    assert e.signs == d.signs


def test_remove_component_of_hopf_leaves_unknot():
    h = PlanarDiagram.from_pd(HOPF_PD)
    u = remove_component(h, 1)
    assert u.crossings == () and len(u.components) == 1


def test_connected_sum_crossings_add():
    a, b = braid_closure([1, 1, 1]), braid_closure([-1, -1, -1])
    s = validate(connected_sum(a, b))
    assert len(s.components) == 1
    assert sorted(s.signs) == [-1, -1, -1, 1, 1, 1]
