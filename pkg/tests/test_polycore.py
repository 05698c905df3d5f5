from hypothesis import given, settings, strategies as st
import pytest

from annulus_kit import _kernel
from annulus_kit.errors import NotAKnotPolynomial, NotSymmetrizable, ZeroPolynomial
from annulus_kit.polycore import LaurentPoly, degree, poly_det, symmetric_normalize

t = LaurentPoly.monomial(1)

polys = st.dictionaries(st.integers(-3, 3), st.integers(-4, 4), max_size=4).map(LaurentPoly)


def cofactor_det(rows):
    """Laplace expansion along the first row: an independent oracle."""
    if not rows:
        return LaurentPoly.const(1)
    total = LaurentPoly()
    for j, x in enumerate(rows[0]):
        if x.is_zero():
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = x * cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def test_empty_matrix_has_determinant_one():
    assert poly_det([]) == 1


def test_unit_diagonal():
    assert poly_det([[t, 0], [0, t**-1]]) == 1


def test_two_by_two():
    assert poly_det([[t - 1, 1], [-1, t - 1]]) == LaurentPoly.parse("t^2 - 2*t + 2")


def test_symmetric_normalize_examples():
    assert symmetric_normalize(t * t - t + 1) == LaurentPoly.parse("t - 1 + t^-1")
    p = LaurentPoly.parse("t^4 - 2*t^3 + 3*t^2 - 2*t + 1")
    assert str(symmetric_normalize(p)) == "t^2 - 2*t + 3 - 2*t^-1 + t^-2"


def test_symmetric_normalize_sign_and_shift():
    p = -(t * t - 3 * t + 1).shift(5)
    assert symmetric_normalize(p) == LaurentPoly.parse("-t + 3 - t^-1")


def test_symmetric_normalize_errors():
    with pytest.raises(NotSymmetrizable):
        symmetric_normalize(LaurentPoly())
    with pytest.raises(NotSymmetrizable):
        symmetric_normalize(t + 2)
    with pytest.raises(NotSymmetrizable):
        symmetric_normalize(t * t - 1)
    with pytest.raises(NotAKnotPolynomial):
        symmetric_normalize(t * t + t + 1)


def test_degree():
    assert degree(LaurentPoly.const(1)) == 0
    assert degree(LaurentPoly.parse("t - 1 + t^-1")) == 1
    assert degree(LaurentPoly.parse("t^2 - 2*t + 3 - 2*t^-1 + t^-2")) == 2
    with pytest.raises(ZeroPolynomial):
        degree(LaurentPoly())


def test_text_and_json_round_trip():
    p = LaurentPoly.parse("-3*t^-4 + t^2 - 2*t + 7")
    assert str(p) == "t^2 - 2*t + 7 - 3*t^-4"
    assert LaurentPoly.parse(str(p)) == p
    assert LaurentPoly.from_json(p.to_json()) == p
    assert p.to_json() == {"-4": -3, "0": 7, "1": -2, "2": 1}


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == LaurentPoly()


@given(polys, polys)
def test_exact_division(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_div(b) == a


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 4).flatmap(lambda n: st.lists(st.lists(polys, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_cofactor_expansion(rows):
    assert poly_det(rows) == cofactor_det(rows)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(polys, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_backends_agree(rows):
    dense = [[None if x.is_zero() else x.to_dense() for x in r] for r in rows]
    py = _kernel.python_bareiss_det(dense)
    if _kernel.compiled_bareiss_det is not None:
        assert _kernel.compiled_bareiss_det(dense) == py


def test_overflow_falls_back_to_python():
    big = LaurentPoly({0: 10**15, 1: 3})
    rows = [[big if i == j else t for j in range(5)] for i in range(5)]
    dense = [[x.to_dense() for x in r] for r in rows]
    if _kernel.compiled_bareiss_det is not None:
        with pytest.raises(OverflowError):
            _kernel.compiled_bareiss_det(dense)
    assert poly_det(rows) == LaurentPoly.from_dense(*_kernel.python_bareiss_det(dense))
