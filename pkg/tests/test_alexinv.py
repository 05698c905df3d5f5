import pytest
from hypothesis import given, settings, strategies as st

from annulus_kit.alexinv import (
    SeifertData,
    alexander,
    alexander_seifert,
    is_monic,
    seifert_from_braid,
    seifert_signature,
    signature,
)
from annulus_kit.diagram import Component, PlanarDiagram, connected_sum, disjoint_union, mirror
from annulus_kit.errors import NotAKnotDiagram, SingularPairing, UnsupportedLink, ZeroPolynomial
from annulus_kit.morse import braid_closure
from annulus_kit.polycore import LaurentPoly, degree

P = LaurentPoly.parse
BRAID_8_20 = [1, 1, 1, -2, -1, -1, -1, -2]
DELTA_8_20 = P("t^2 - 2*t + 3 - 2*t^-1 + t^-2")
TREFOIL = P("t - 1 + t^-1")


def unknot():
    return PlanarDiagram.from_pd([], components=[Component(arcs=(1,))])


def knot_braids():
    # 3-strand words whose closure is a knot: the permutation is a 3-cycle
    words = st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=12)

    def is_knot(w):
        perm = [0, 1, 2]
        for g in w:
            i = abs(g) - 1
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
        return perm in ([1, 2, 0], [2, 0, 1])

    return words.filter(is_knot)


def test_unknot():
    assert alexander(unknot()) == 1
    assert alexander_seifert(SeifertData(())) == 1
    assert signature(unknot()) == 0


def test_negative_trefoil():
    d = braid_closure([-1, -1, -1])
    assert alexander(d) == TREFOIL
    assert signature(d) == 2


def test_trefoil_seifert_matrix():
    assert alexander_seifert(SeifertData(((-1, 1), (0, -1)))) == TREFOIL


def test_singular_pairing():
    with pytest.raises(SingularPairing):
        alexander_seifert(SeifertData(((1, 0), (0, 1))))


def test_8_20_fox_equals_seifert():
    d = braid_closure(BRAID_8_20)
    fox = alexander(d)
    assert fox == DELTA_8_20
    assert alexander_seifert(seifert_from_braid(BRAID_8_20)) == fox
    assert degree(fox) == 2 and is_monic(fox) and fox(1) == 1


def test_is_monic():
    assert is_monic(LaurentPoly.const(1))
    assert not is_monic(P("2*t - 3 + 2*t^-1"))
    with pytest.raises(ZeroPolynomial):
        is_monic(LaurentPoly())


def test_negative_hopf_signature():
    assert signature(braid_closure([-1, -1])) == 1
    assert signature(braid_closure([1, 1])) == -1


def test_alexander_needs_a_knot():
    with pytest.raises(NotAKnotDiagram):
        alexander(braid_closure([1, 1]))


def test_signature_rejects_three_components():
    with pytest.raises(UnsupportedLink):
        signature(braid_closure([1, 1, 2, 2]))


@settings(max_examples=60, deadline=None)
@given(word=knot_braids())
def test_fox_equals_seifert_oracle(word):
    d = braid_closure(word, 3)
    sd = seifert_from_braid(word, 3)
    fox = alexander(d)
    assert fox == alexander_seifert(sd)
    assert fox(1) == 1
    assert signature(d) == seifert_signature(sd)


@settings(max_examples=40, deadline=None)
@given(word=knot_braids())
def test_mirror_properties(word):
    d = braid_closure(word, 3)
    m = mirror(d)
    assert alexander(m) == alexander(d)
    assert signature(m) == -signature(d)
    assert signature(d) % 2 == 0


@settings(max_examples=25, deadline=None)
@given(w1=knot_braids(), w2=knot_braids())
def test_connected_sum_multiplies(w1, w2):
    a, b = braid_closure(w1, 3), braid_closure(w2, 3)
    s = connected_sum(a, b)
    assert alexander(s) == alexander(a) * alexander(b)
    assert signature(s) == signature(a) + signature(b)


def test_split_link_signature_adds():
    t = braid_closure([-1, -1, -1])
    u = disjoint_union(t, braid_closure([1, 1, 1]))
    assert signature(u) == 0
