"""Exact integer Laurent polynomials in one variable ``t``.

Everything here is exact: coefficients are Python ints and rationals are
:class:`fractions.Fraction`.  The determinant over the Laurent ring is
fraction-free elimination; the inner loop lives in :mod:`annulus_kit._kernel`
which prefers the compiled extension when it is importable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import NotAKnotPolynomial, NotSymmetrizable, ZeroPolynomial

__all__ = [
    "LaurentPoly",
    "RationalNum",
    "poly_det",
    "symmetric_normalize",
    "degree",
    "rational",
]

RationalNum = Fraction


def rational(value) -> Fraction:
    """Coerce ``value`` (int, Fraction, ``"p/q"`` string) to a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


class LaurentPoly:
    """Immutable integer Laurent polynomial; the zero polynomial has no terms."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = int(v)
                if v:
                    c[int(e)] = v
        self._c = c
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, value: int) -> "LaurentPoly":
        return cls({0: value})

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def from_dense(cls, lo: int, coeffs: Iterable[int]) -> "LaurentPoly":
        return cls({lo + i: v for i, v in enumerate(coeffs)})

    def to_dense(self) -> tuple[int, list[int]]:
        if not self._c:
            return 0, []
        lo, hi = self.min_exp(), self.max_exp()
        return lo, [self._c.get(e, 0) for e in range(lo, hi + 1)]

    # basic queries
    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def min_exp(self) -> int:
        if not self._c:
            raise ZeroPolynomial("zero polynomial has no exponents")
        return min(self._c)

    def max_exp(self) -> int:
        if not self._c:
            raise ZeroPolynomial("zero polynomial has no exponents")
        return max(self._c)

    def span(self) -> int:
        return self.max_exp() - self.min_exp() if self._c else -1

    def __getitem__(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def __call__(self, value):
        if value == 0 and self._c and self.min_exp() < 0:
            raise ZeroDivisionError("negative powers at t = 0")
        return sum(v * (value ** e if e >= 0 else Fraction(1, value ** -e)) for e, v in self._c.items())

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, v), = self._c.items()
            if v not in (1, -1):
                raise ValueError("only unit monomials have Laurent inverses")
            return LaurentPoly({e * k: v ** (-k)})
        out = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``t**k``."""
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def reflect(self) -> "LaurentPoly":
        """Substitute ``t -> t**-1``."""
        return LaurentPoly({-e: v for e, v in self._c.items()})

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient; raises ``ArithmeticError`` when ``other`` does not divide."""
        from ._kernel import dense_exact_div

        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly()
        lo1, a = self.to_dense()
        lo2, b = other.to_dense()
        q = dense_exact_div(a, b)
        return LaurentPoly.from_dense(lo1 - lo2, q)

    def content(self) -> int:
        from math import gcd

        g = 0
        for v in self._c.values():
            g = gcd(g, v)
        return g

    # comparison / hashing
    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def is_palindromic(self) -> bool:
        return self._c == {-e: v for e, v in self._c.items()}

    # text
    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c, reverse=True):
            v = self._c[e]
            sign = "-" if v < 0 else "+"
            a = abs(v)
            if e == 0:
                body = str(a)
            else:
                mono = "t" if e == 1 else f"t^{e}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({self})"

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Inverse of ``str``: accepts ``t^2 - 2*t + 3 - 2*t^-1 + t^-2``."""
        s = text.replace(" ", "")
        if s in ("", "0"):
            return cls()
        tokens = re.split(r"(?<!\^)(?=[+-])", s)
        c: dict[int, int] = {}
        for tok in tokens:
            if not tok:
                continue
            m = re.fullmatch(r"([+-]?)(\d*)\*?(t(?:\^(-?\d+))?)?", tok)
            if m is None or (not m.group(2) and not m.group(3)):
                raise ValueError(f"cannot parse term {tok!r} in {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coeff = int(m.group(2)) if m.group(2) else 1
            if m.group(3):
                exp = int(m.group(4)) if m.group(4) is not None else 1
            else:
                exp = 0
            c[exp] = c.get(exp, 0) + sign * coeff
        return cls(c)

    def to_json(self) -> dict[str, int]:
        return {str(e): v for e, v in sorted(self._c.items())}

    @classmethod
    def from_json(cls, obj: Mapping[str, int]) -> "LaurentPoly":
        return cls({int(k): int(v) for k, v in obj.items()})


T = LaurentPoly.monomial(1)
ONE = LaurentPoly.const(1)
ZERO = LaurentPoly()


def _as_poly(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.const(int(x))


def poly_det(m) -> LaurentPoly:
    """Exact determinant of a square matrix of Laurent polynomials.

    Fraction-free Bareiss elimination with full pivoting on the entry of
    smallest exponent span (row-major tie break).  A 0x0 matrix has
    determinant 1.
    """
    from ._kernel import bareiss_det

    rows = [list(r) for r in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if n == 0:
        return ONE
    dense = []
    for r in rows:
        dr = []
        for x in r:
            p = _as_poly(x)
            dr.append(None if p.is_zero() else p.to_dense())
        dense.append(dr)
    res = bareiss_det(dense)
    if res is None:
        return ZERO
    lo, coeffs = res
    return LaurentPoly.from_dense(lo, coeffs)


def symmetric_normalize(p: LaurentPoly) -> LaurentPoly:
    """Return the unit multiple ``±t^k p`` with ``q(t) = q(1/t)`` and ``q(1) = 1``."""
    if p.is_zero():
        raise NotSymmetrizable("zero polynomial")
    lo, hi = p.min_exp(), p.max_exp()
    if (lo + hi) % 2:
        raise NotSymmetrizable(f"odd exponent span in {p}")
    q = p.shift(-(lo + hi) // 2)
    if not q.is_palindromic():
        if q == -q.reflect():
            raise NotSymmetrizable(f"{p} is antisymmetric, not a knot polynomial")
        raise NotSymmetrizable(f"no unit multiple of {p} is palindromic")
    at_one = sum(q.coeffs.values())
    if at_one not in (1, -1):
        raise NotAKnotPolynomial(f"value at t=1 is {at_one}, expected +-1")
    return q if at_one == 1 else -q


def degree(p: LaurentPoly) -> int:
    """Top exponent of a symmetric-form polynomial (0 for constants)."""
    if p.is_zero():
        raise ZeroPolynomial("degree of the zero polynomial")
    return p.max_exp()
