"""Alexander polynomials and signatures.

The primary route is the Wirtinger presentation with abelianized Fox
derivatives.  An independent route computes a Seifert matrix from a braid
word (Seifert's algorithm on a closed braid) and takes ``det(V - t V^T)``.
Signatures come from the Goeritz matrix of a checkerboard surface with the
Gordon-Litherland correction, which equals the signature of ``V + V^T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .diagram import PlanarDiagram, faces
from .errors import NotAKnotDiagram, SingularPairing, UnsupportedLink, ZeroPolynomial
from .polycore import LaurentPoly, poly_det, symmetric_normalize

__all__ = [
    "WirtingerData",
    "SeifertData",
    "wirtinger",
    "alexander_matrix",
    "alexander",
    "seifert_from_braid",
    "alexander_seifert",
    "is_monic",
    "signature",
    "seifert_signature",
    "goeritz_matrix",
    "symmetric_signature",
]

T = LaurentPoly.monomial(1)
ONE = LaurentPoly.const(1)


@dataclass(frozen=True)
class WirtingerData:
    """One generator per over-arc, one relation per crossing.

    ``relations[k] = (over, incoming, outgoing, sign)`` in generator indices.
    """

    generators: int
    relations: tuple[tuple[int, int, int, int], ...]
    base: int = 0


@dataclass(frozen=True)
class SeifertData:
    """A spanning-surface basis size and its Seifert matrix ``V[i][j] = lk(a_i, a_j^+)``."""

    matrix: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.matrix)


def _knot_only(d: PlanarDiagram) -> None:
    if len(d.components) != 1:
        raise NotAKnotDiagram(f"expected one component, found {len(d.components)}")


def wirtinger(d: PlanarDiagram) -> WirtingerData:
    """Over-arcs are maximal runs of edges joined at over-passes."""
    labels = d.labels()
    parent = {a: a for a in labels}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for q in d.crossings:
        parent[find(q[1])] = find(q[3])
    order: dict[int, int] = {}
    for a in labels:
        r = find(a)
        if r not in order:
            order[r] = len(order)
    gen = {a: order[find(a)] for a in labels}
    rels = tuple((gen[q[1]], gen[q[0]], gen[q[2]], d.signs[k]) for k, q in enumerate(d.crossings))
    return WirtingerData(len(order), rels, base=gen[labels[0]] if labels else 0)


def alexander_matrix(w: WirtingerData) -> list[list[LaurentPoly]]:
    """Abelianized Fox Jacobian: rows are crossings, columns generators."""
    rows = []
    for over, inc, out, sign in w.relations:
        row = [LaurentPoly() for _ in range(w.generators)]
        if sign > 0:
            entries = ((over, ONE - T), (inc, T), (out, LaurentPoly.const(-1)))
        else:
            entries = ((over, T - ONE), (inc, ONE), (out, -T))
        for g, v in entries:
            row[g] = row[g] + v
        rows.append(row)
    return rows


def alexander(d: PlanarDiagram) -> LaurentPoly:
    """Symmetric-form Alexander polynomial of a one-component diagram."""
    _knot_only(d)
    if not d.crossings:
        return ONE
    w = wirtinger(d)
    m = alexander_matrix(w)
    minor = [[x for j, x in enumerate(row) if j != w.base] for row in m[:-1]]
    return symmetric_normalize(poly_det(minor))


# ------------------------------------------------------------------ Seifert
def seifert_from_braid(word: Sequence[int], strands: int | None = None) -> SeifertData:
    """Seifert matrix of the surface that Seifert's algorithm gives for a closed braid.

    The surface is ``strands`` stacked disks joined by one half-twisted band
    per letter.  For each column the loops run between consecutive bands;
    the entries are the standard linking numbers of those loops with their
    positive push-offs.
    """
    k = strands if strands is not None else (max((abs(g) for g in word), default=0) + 1)
    cols: dict[int, list[tuple[int, int]]] = {}
    for pos, g in enumerate(word):
        cols.setdefault(abs(g), []).append((pos, 1 if g > 0 else -1))
    loops = []  # (column, start position, end position, sign at start, sign at end)
    for j in range(1, k):
        bands = cols.get(j, [])
        for (p, e1), (q, e2) in zip(bands, bands[1:]):
            loops.append((j, p, q, e1, e2))
    n = len(loops)
    V = [[0] * n for _ in range(n)]
    for a, (j, p, q, e1, e2) in enumerate(loops):
        V[a][a] = -(e1 + e2) // 2
        for b, (j2, p2, q2, f1, f2) in enumerate(loops):
            if a == b:
                continue
            if j2 == j and p2 == q:
                # consecutive loops in one column share the band at q
                if e2 > 0:
                    V[a][b] = 1
                else:
                    V[b][a] = -1
            elif j2 == j + 1 and p < p2 < q < q2:
                V[a][b] = -1
            elif j2 == j + 1 and p2 < p < q2 < q:
                V[a][b] = 1
    return SeifertData(tuple(tuple(r) for r in V))


def alexander_seifert(sd: SeifertData) -> LaurentPoly:
    """``det(V - t V^T)`` in symmetric form."""
    V = sd.matrix
    n = len(V)
    if n == 0:
        return ONE
    skew = [[V[i][j] - V[j][i] for j in range(n)] for i in range(n)]
    if abs(_int_det(skew)) != 1:
        raise SingularPairing("det(V - V^T) is not +-1; not a knot Seifert matrix")
    m = [[LaurentPoly.const(V[i][j]) - T * V[j][i] for j in range(n)] for i in range(n)]
    return symmetric_normalize(poly_det(m))


def _int_det(m) -> int:
    p = poly_det([[LaurentPoly.const(int(x)) for x in r] for r in m])
    return p[0] if not p.is_zero() else 0


def symmetric_signature(m: Sequence[Sequence]) -> int:
    """Signature of a symmetric rational matrix by exact congruence diagonalization."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    pos = neg = 0
    idx = list(range(n))
    while idx:
        piv = next((i for i in idx if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in idx for j in idx if i != j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row/column op i += j makes the diagonal nonzero (a_ij != 0, a_ii = a_jj = 0)
            for r in range(n):
                a[i][r] += a[j][r]
            for r in range(n):
                a[r][i] += a[r][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        idx.remove(piv)
        for i in idx:
            f = a[i][piv] / p
            if f:
                for r in range(n):
                    a[i][r] -= f * a[piv][r]
                for r in range(n):
                    a[r][i] -= f * a[r][piv]
    return pos - neg


def seifert_signature(sd: SeifertData) -> int:
    V = sd.matrix
    n = len(V)
    return symmetric_signature([[V[i][j] + V[j][i] for j in range(n)] for i in range(n)])


def is_monic(p: LaurentPoly) -> bool:
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial has no leading coefficient")
    return abs(p[p.max_exp()]) == 1


# ---------------------------------------------------------------- Goeritz
def _checkerboard(d: PlanarDiagram) -> tuple[list[list[tuple[int, bool]]], list[int]]:
    """Regions and a two-colouring (0/1) with adjacent regions coloured differently."""
    regs = faces(d)
    side: dict[int, list[int]] = {}
    for r, cyc in enumerate(regs):
        for label, _ in cyc:
            side.setdefault(label, []).append(r)
    colour = [-1] * len(regs)
    for start in range(len(regs)):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        stack = [start]
        while stack:
            r = stack.pop()
            for label, _ in regs[r]:
                for s in side[label]:
                    if s != r and colour[s] < 0:
                        colour[s] = 1 - colour[r]
                        stack.append(s)
    return regs, colour


def _corner_regions(d: PlanarDiagram, regs) -> dict[tuple[int, int], int]:
    """Region in the corner between position ``p`` and ``p + 1`` (counterclockwise) of each crossing."""
    # faces() walks position p of crossing k to the far end (j, r), then turns to (j, r + 1):
    # the region between r and r + 1 at crossing j.  Rebuild that walk to tag corners.
    where: dict[int, list[tuple[int, int]]] = {}
    for k, q in enumerate(d.crossings):
        for p, a in enumerate(q):
            where.setdefault(a, []).append((k, p))
    other = {}
    for ends in where.values():
        x, y = ends
        other[x] = y
        other[y] = x
    corner: dict[tuple[int, int], int] = {}
    seen = set()
    r_index = 0
    for k in range(len(d.crossings)):
        for p in range(4):
            if (k, p) in seen:
                continue
            cur = (k, p)
            while cur not in seen:
                seen.add(cur)
                j, r = other[cur]
                corner[(j, r)] = r_index
                cur = (j, (r + 1) % 4)
            r_index += 1
    return corner


def goeritz_matrix(d: PlanarDiagram) -> tuple[list[list[int]], int]:
    """Goeritz matrix over the colour-0 regions and the Gordon-Litherland correction.

    Returns ``(G, mu)``; the signature is ``sign(G) - mu``.  One region per
    connected piece of the projection is dropped, which removes the kernel.
    """
    regs, colour = _checkerboard(d)
    corner = _corner_regions(d, regs)
    whites = [r for r in range(len(regs)) if colour[r] == 0]
    widx = {r: i for i, r in enumerate(whites)}
    n = len(whites)
    G = [[0] * n for _ in range(n)]
    mu = 0
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k in range(len(d.crossings)):
        # corner p is the region between positions p and p + 1, counterclockwise
        around = [corner[(k, p)] for p in range(4)]
        white_corners = (0, 2) if colour[around[0]] == 0 else (1, 3)
        w1, w2 = around[white_corners[0]], around[white_corners[1]]
        # crossing index: sign of the crossing seen from the colour-0 corners
        eta = 1 if white_corners == (0, 2) else -1
        i, j = widx[w1], widx[w2]
        parent[find(i)] = find(j)
        if i != j:
            G[i][j] -= eta
            G[j][i] -= eta
            G[i][i] += eta
            G[j][j] += eta
        if _is_type_two(d, k, white_corners):
            mu += eta
    drop = set()
    seen = set()
    for i in range(n):
        r = find(i)
        if r not in seen:
            seen.add(r)
            drop.add(i)
    keep = [i for i in range(n) if i not in drop]
    return [[G[i][j] for j in keep] for i in keep], mu


def _is_type_two(d: PlanarDiagram, k: int, white_corners: tuple[int, int]) -> bool:
    # The oriented strands point into opposite white corners at a type II crossing.
    return (white_corners == (0, 2)) == (d.signs[k] > 0)


def signature(d: PlanarDiagram) -> int:
    """Link signature, normalized so that the negative trefoil has signature 2."""
    if len(d.components) > 2:
        raise UnsupportedLink("signature is implemented for knots and two-component links")
    if not d.crossings:
        return 0
    G, mu = goeritz_matrix(d)
    return symmetric_signature(G) - mu
