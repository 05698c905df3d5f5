"""Kirby moves on framed link diagrams, each checked against the order of H_1.

Framings are stored as surgery coefficients (independent of the diagram's
writhe), so every move states its framing change explicitly:

* ``blow_down`` of an ``eps``-framed unknot inserts a ``-eps``-handed full
  twist on the strands it encircles and maps ``f_i`` to ``f_i - eps*lk_i^2``;
* ``rational_blow_down`` of a ``-1/n``-framed unknot inserts ``n``
  right-handed full twists and maps ``f_i`` to ``f_i + n*lk_i^2``;
* ``blow_up`` and ``rational_blow_up`` are the exact inverses;
* ``handle_slide`` band-sums the mover with a framed push-off of ``over``.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .diagram import (
    Component,
    PlanarDiagram,
    _check,
    crossing_from_corners,
    faces,
    face_pair_bundle,
    fresh_label,
    insert_full_twists,
    linking_matrix,
    linking_number,
    remove_component,
    split_edges,
    _splice_components,
)
from .errors import (
    InvariantViolation,
    MalformedPD,
    NotBlowDownable,
    NotRationalUnknot,
    RationalFramedSlide,
    ScriptError,
)

__all__ = [
    "INFINITE",
    "h1_order",
    "encircling_bundle",
    "encircle",
    "blow_up",
    "blow_down",
    "rational_blow_up",
    "rational_blow_down",
    "push_off",
    "handle_slide",
    "normalize",
    "KirbyMove",
    "MoveScript",
    "StepRecord",
    "apply_move",
    "replay",
    "log_csv",
    "framed_unknot",
    "lemma_script",
]


class _Infinite:
    """Order of an infinite first homology group."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Infinite"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


# ---------------------------------------------------------------- homology
def _frac_det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def h1_order(d: PlanarDiagram):
    """``|det L| * prod q_i`` for framings ``p_i/q_i``; :data:`INFINITE` when it vanishes."""
    mat = linking_matrix(d).matrix
    scale = 1
    for comp in d.components:
        scale *= comp.framing.denominator
    value = abs(_frac_det(mat)) * scale
    if value == 0:
        return INFINITE
    if value.denominator != 1:
        raise MalformedPD(f"non-integral homology order {value}")
    return int(value)


# ---------------------------------------------------------------- encircling curves
def encircling_bundle(d: PlanarDiagram, ref) -> list[int]:
    """Signed bundle of the edges passing through the disk bounded by an unknot.

    The component must have no self-crossings and must pass over ``k``
    strands and then under the same strands in reverse order, each strand
    joining its two crossings by a single edge (the edge inside the disk).
    The bundle lists those inner edges in the order the curve passes over
    them, signed for :func:`insert_full_twists` with the walk along the curve.
    """
    ci = d.component_index(ref)
    comp = d.components[ci]
    head, _ = d.ends()
    comp_of = d.component_of()
    if len(comp.arcs) == 1 and comp.arcs[0] not in head:
        return []
    seq = []  # (crossing, c over?)
    for a in comp.arcs:
        k, p = head[a]
        q = d.crossings[k]
        if comp_of[q[0]] == ci and comp_of[q[1]] == ci:
            raise NotBlowDownable(f"component {ci} crosses itself")
        seq.append((k, p != 0))
    m = len(seq)
    if m % 2:
        raise NotBlowDownable(f"component {ci} has an odd number of crossings")
    k_half = m // 2
    start = next(
        (s for s in range(m) if all(seq[(s + i) % m][1] == (i < k_half) for i in range(m))),
        None,
    )
    if start is None:
        raise NotBlowDownable(f"component {ci} does not pass over and then under a single bundle")
    seq = seq[start:] + seq[:start]
    overs = [k for k, _ in seq[:k_half]]
    unders = [k for k, _ in seq[k_half:]]
    options = []
    for i, ko in enumerate(overs):
        ku = unders[k_half - 1 - i]
        qo, qu = d.crossings[ko], d.crossings[ku]
        inner = [a for a in (qo[0], qo[2]) if a in (qu[1], qu[3])]
        if not inner:
            raise NotBlowDownable(f"component {ci} is not an encircling unknot (crossing {ko})")
        options.append(sorted(set(inner)))
    signs = [d.signs[k] for k in overs]
    for choice in itertools.product(*options):
        if len(set(choice)) != len(choice):
            continue
        bundle = [s * a for s, a in zip(signs, choice)]
        if len(bundle) < 2 or _consecutive_in_faces(d, choice):
            return bundle
    raise NotBlowDownable(f"component {ci} does not bound a disk around a parallel bundle")


def _consecutive_in_faces(d: PlanarDiagram, edges: Sequence[int]) -> bool:
    regions = [set(a for a, _ in cyc) for cyc in faces(d)]
    return all(any(e1 in r and e2 in r for r in regions) for e1, e2 in zip(edges, edges[1:]))


def encircle(
    d: PlanarDiagram,
    bundle: Sequence[int],
    framing,
    name: str | None = None,
    role: str = "SurgeryCurve",
) -> tuple[PlanarDiagram, list[int]]:
    """Add an unknot around a bundle of edges (signed as for :func:`insert_full_twists`).

    The new curve passes over the bundle on the near side and under it on the
    far side; it links each ``+a`` strand ``+1`` times and each ``-a`` strand
    ``-1`` times.  Returns the diagram and the bundle re-expressed on the
    edge segments just before the curve.
    """
    if not bundle:
        c = fresh_label(d)
        comp = Component(arcs=(c,), role=role, framing=framing, name=name)
        return replace(d, components=d.components + (comp,)), []
    labels = [abs(s) for s in bundle]
    if len(set(labels)) != len(labels):
        raise MalformedPD("bundle strands must be distinct edges")
    owner = d.component_of()
    for a in labels:
        if a not in owner:
            raise MalformedPD(f"edge {a} is not in the diagram", a)
    quads, segs, nxt = split_edges(d, {a: 2 for a in labels})
    k = len(bundle)
    up = [s > 0 for s in bundle]
    below, inner, above = [], [], []
    for j, a in enumerate(labels):
        s = segs[a]
        if up[j]:
            below.append(s[0]), inner.append(s[1]), above.append(s[2])
        else:
            above.append(s[0]), inner.append(s[1]), below.append(s[2])
    # the curve runs rightward along the near side and back along the far side
    bottom = list(range(nxt, nxt + k - 1))  # B_i -> B_{i+1}
    right = nxt + k - 1  # B_k -> T_k
    top = list(range(nxt + k, nxt + 2 * k - 1))  # T_{i+1} -> T_i
    left = nxt + 2 * k - 1  # T_1 -> B_1
    new_quads, new_signs = [], []
    for i in range(k):
        w = left if i == 0 else bottom[i - 1]
        e = right if i == k - 1 else bottom[i]
        corners = [w, below[i], e, inner[i]]  # counterclockwise from the west
        new_quads.append(crossing_from_corners(corners, 1 if up[i] else 3))
        new_signs.append(1 if up[i] else -1)
    for i in range(k):
        w = left if i == 0 else top[i - 1]
        e = right if i == k - 1 else top[i]
        corners = [w, inner[i], e, above[i]]
        new_quads.append(crossing_from_corners(corners, 2))
        new_signs.append(1 if up[i] else -1)
    arcs = tuple(bottom) + (right,) + tuple(reversed(top)) + (left,)
    comps = _splice_components(d.components, segs)
    comps.append(Component(arcs=arcs, role=role, framing=framing, name=name))
    out = PlanarDiagram(
        tuple(tuple(q) for q in quads) + tuple(new_quads),
        d.signs + tuple(new_signs),
        tuple(comps),
        sites=d.sites,
        provenance=d.provenance,
    )
    _check(out)
    return out, [b if u else -b for b, u in zip(below, up)]


def _reframe_by_linking(d: PlanarDiagram, lks: Mapping[int, int], coeff: Fraction) -> PlanarDiagram:
    comps = list(d.components)
    for i, lk in lks.items():
        comp = comps[i]
        if comp.framing is not None and lk:
            comps[i] = replace(comp, framing=comp.framing + coeff * lk * lk)
    return d.with_components(comps)


def _linking_with(d: PlanarDiagram, ci: int) -> dict[int, int]:
    return {i: linking_number(d, i, ci) for i in range(len(d.components)) if i != ci}


def _as_sign(x) -> int:
    f = Fraction(x)
    if f not in (1, -1):
        raise NotBlowDownable(f"framing {f} is not +-1")
    return int(f)


def _remove_with_twist(d: PlanarDiagram, ci: int, count: int, handedness: int) -> PlanarDiagram:
    bundle = encircling_bundle(d, ci)
    lks = _linking_with(d, ci)
    name = d.components[ci].name
    if len(bundle) >= 2 and count:
        d = insert_full_twists(d, bundle, count, handedness)
        ci = _find_component(d, name, ci)
    out = remove_component(d, ci)
    keep = [i for i in range(len(d.components)) if i != ci]
    return out, {keep.index(i): lk for i, lk in lks.items()}


def _find_component(d: PlanarDiagram, name, fallback: int) -> int:
    if name is not None:
        return d.component_index(name)
    return fallback


def blow_up(
    d: PlanarDiagram, sign: int, site: Sequence[int] = (), name: str | None = None
) -> PlanarDiagram:
    """Add a ``sign``-framed unknot around ``site`` together with the compensating twist.

    The strands of ``site`` receive one ``sign``-handed full twist and every
    framing changes by ``+sign*lk^2``, so :func:`blow_down` undoes the move
    exactly.  An empty site adds a split ``sign``-framed unknot.
    """
    eps = _as_sign(sign)
    lk_by_comp: dict[int, int] = {}
    owner = d.component_of()
    for s in site:
        i = owner.get(abs(s))
        if i is None:
            raise MalformedPD(f"edge {abs(s)} is not in the diagram", abs(s))
        lk_by_comp[i] = lk_by_comp.get(i, 0) + (1 if s > 0 else -1)
    out, before = encircle(d, site, Fraction(eps), name=name)
    if len(before) >= 2:
        out = insert_full_twists(out, before, 1, eps)
    out = _reframe_by_linking(out, lk_by_comp, Fraction(eps))
    return out.with_provenance(f"blow_up({eps},{list(site)})")


def blow_down(d: PlanarDiagram, ref, sign: int | None = None) -> PlanarDiagram:
    """Remove a ``+-1``-framed encircling unknot, twisting the strands it bounds.

    ``sign`` is the framing as recorded by a script.  It is trusted, not
    checked, so a mistranscribed sign shows up as a change of ``h1_order``.
    """
    ci = d.component_index(ref)
    framing = d.components[ci].framing
    if sign is None:
        if framing is None or framing not in (1, -1):
            raise NotBlowDownable(f"component {ci} has framing {framing}, not +-1")
        eps = int(framing)
    else:
        eps = _as_sign(sign)
    out, lks = _remove_with_twist(d, ci, 1, -eps)
    out = _reframe_by_linking(out, lks, Fraction(-eps))
    return out.with_provenance(f"blow_down({ref})")


def _rational_n(framing) -> int:
    if framing is None or framing == 0 or framing.numerator not in (1, -1):
        raise NotRationalUnknot(f"framing {framing} is not of the form -1/n")
    return int(-framing.numerator * framing.denominator)


def rational_blow_down(d: PlanarDiagram, ref) -> PlanarDiagram:
    """Remove a ``-1/n``-framed encircling unknot, inserting ``n`` right-handed full twists."""
    ci = d.component_index(ref)
    framing = d.components[ci].framing
    try:
        n = _rational_n(framing)
        out, lks = _remove_with_twist(d, ci, n, 1)
    except NotRationalUnknot:
        raise
    except NotBlowDownable as exc:
        raise NotRationalUnknot(str(exc)) from exc
    out = _reframe_by_linking(out, lks, Fraction(n))
    return out.with_provenance(f"rational_blow_down({ref})")


def rational_blow_up(
    d: PlanarDiagram, n: int, site: Sequence[int] = (), name: str | None = None
) -> PlanarDiagram:
    """Add a ``-1/n``-framed unknot around ``site`` with ``n`` left-handed full twists.

    Inverse of :func:`rational_blow_down`: framings change by ``-n*lk^2``.
    """
    n = int(n)
    if n == 0:
        raise NotRationalUnknot("n must be nonzero")
    lk_by_comp: dict[int, int] = {}
    owner = d.component_of()
    for s in site:
        i = owner.get(abs(s))
        if i is None:
            raise MalformedPD(f"edge {abs(s)} is not in the diagram", abs(s))
        lk_by_comp[i] = lk_by_comp.get(i, 0) + (1 if s > 0 else -1)
    out, before = encircle(d, site, Fraction(-1, n), name=name)
    if len(before) >= 2:
        out = insert_full_twists(out, before, n, -1)
    out = _reframe_by_linking(out, lk_by_comp, Fraction(-n))
    return out.with_provenance(f"rational_blow_up({n},{list(site)})")


# ---------------------------------------------------------------- handle slides
def push_off(d: PlanarDiagram, ref, side: int = 1, name: str | None = None) -> tuple[PlanarDiagram, dict[int, int]]:
    """Add a blackboard-parallel copy of a component on its right (``side=1``) or left.

    The copy has the same orientation and no framing.  Returns the diagram
    and the map from each edge of the component to its parallel edge.
    """
    ci = d.component_index(ref)
    comp = d.components[ci]
    comp_of = d.component_of()
    nxt = fresh_label(d)
    twin = {}
    for a in comp.arcs:
        twin[a] = nxt
        nxt += 1
    insert_after: dict[int, list[int]] = {}
    quads, signs = [], []
    for k, q in enumerate(d.crossings):
        sign = d.signs[k]
        u_doubled = comp_of[q[0]] == ci
        o_doubled = comp_of[q[1]] == ci
        if not u_doubled and not o_doubled:
            quads.append(q)
            signs.append(sign)
            continue
        # local frame: under-strand runs south to north, over-strand west-east
        over_east = sign > 0
        o_in, o_out = (q[3], q[1]) if over_east else (q[1], q[3])
        xs = [(0, q[0], q[2])]  # (x position, incoming label, outgoing label)
        if u_doubled:
            xs.append((side, twin[q[0]], twin[q[2]]))
        ys = [(0, o_in, o_out)]
        if o_doubled:
            right_of_over = -1 if over_east else 1
            ys.append((side * right_of_over, twin[o_in], twin[o_out]))
        # segments along each line in its own direction
        v_segs = {}
        for x, lin, lout in xs:
            mids = list(range(nxt, nxt + len(ys) - 1))
            nxt += len(ys) - 1
            if mids:
                insert_after[lin] = mids
            v_segs[x] = [lin] + mids + [lout]
        h_segs = {}
        for y, lin, lout in ys:
            mids = list(range(nxt, nxt + len(xs) - 1))
            nxt += len(xs) - 1
            if mids:
                insert_after[lin] = mids
            h_segs[y] = [lin] + mids + [lout]
        y_order = sorted(y for y, _, _ in ys)
        x_order = sorted((x for x, _, _ in xs), reverse=not over_east)
        for x, _, _ in xs:
            for y, _, _ in ys:
                vi = y_order.index(y)
                hi = x_order.index(x)
                south, north = v_segs[x][vi], v_segs[x][vi + 1]
                before, after = h_segs[y][hi], h_segs[y][hi + 1]
                west, east = (before, after) if over_east else (after, before)
                quads.append((south, east, north, west))
                signs.append(sign)
    comps = []
    for c in d.components:
        arcs = []
        for a in c.arcs:
            arcs.append(a)
            arcs.extend(insert_after.get(a, []))
        comps.append(replace(c, arcs=tuple(arcs)))
    arcs = []
    for a in comp.arcs:
        arcs.append(twin[a])
        arcs.extend(insert_after.get(twin[a], []))
    comps.append(Component(arcs=tuple(arcs), role=comp.role, framing=None, name=name))
    out = PlanarDiagram(tuple(quads), tuple(signs), tuple(comps), sites=d.sites, provenance=d.provenance)
    _check(out)
    return out, twin


def _reverse_component(d: PlanarDiagram, ci: int) -> PlanarDiagram:
    comp_of = d.component_of()
    quads, signs = [], []
    for k, q in enumerate(d.crossings):
        u, o = comp_of[q[0]] == ci, comp_of[q[1]] == ci
        quads.append((q[2], q[3], q[0], q[1]) if u else q)
        signs.append(d.signs[k] if u == o else -d.signs[k])
    comps = list(d.components)
    arcs = comps[ci].arcs
    comps[ci] = replace(comps[ci], arcs=(arcs[0],) + tuple(reversed(arcs[1:])))
    # edge labels keep their place, so each edge's successor is now its predecessor
    return PlanarDiagram(tuple(quads), tuple(signs), tuple(comps), sites=d.sites, provenance=d.provenance)


def _pieces(d: PlanarDiagram) -> dict[int, int]:
    """Connected piece of the projection for each edge label."""
    parent: dict[int, int] = {a: a for a in d.labels()}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for q in d.crossings:
        for a in q[1:]:
            parent[find(a)] = find(q[0])
    return {a: find(a) for a in parent}


def _band_sum(d: PlanarDiagram, ci: int, cj: int, e1: int, e2: int) -> PlanarDiagram:
    """Merge component ``cj`` into ``ci`` by a band between edges ``e1`` and ``e2``."""
    head, _ = d.ends()
    comps = list(d.components)
    a1, a2 = comps[ci].arcs, comps[cj].arcs
    if e2 not in head:
        merged = a1
    elif e1 not in head:
        merged = a2
    else:
        i1, i2 = a1.index(e1), a2.index(e2)
        r1 = a1[i1:] + a1[:i1]
        r2 = a2[i2:] + a2[:i2]
        quads = [list(q) for q in d.crossings]
        (k1, p1), (k2, p2) = head[e1], head[e2]
        quads[k1][p1] = e2
        quads[k2][p2] = e1
        d = replace(d, crossings=tuple(tuple(q) for q in quads))
        merged = (e1,) + r2[1:] + (e2,) + r1[1:]
    comps[ci] = replace(comps[ci], arcs=tuple(merged))
    del comps[cj]
    return replace(d, components=tuple(comps))


def handle_slide(
    d: PlanarDiagram,
    mover,
    over,
    band: Sequence[int] | None = None,
    sign: int | None = None,
) -> PlanarDiagram:
    """Slide ``mover`` over ``over`` along a band through a common region.

    ``band = (mover_edge, over_edge)`` names two edges bounding one region
    (or lying in different pieces of the diagram); when omitted, the first
    suitable pair is used.  ``sign = +1`` adds the push-off parallel to
    ``over`` and ``-1`` antiparallel; the new framing is
    ``f_m + f_o + 2*sign*lk(mover, over)``.  In one region only one sign is
    coherent, so a requested sign restricts the search.
    """
    mi, oi = d.component_index(mover), d.component_index(over)
    if mi == oi:
        raise MalformedPD("a component cannot slide over itself")
    fm, fo = d.components[mi].framing, d.components[oi].framing
    if fo is None or fm is None:
        raise MalformedPD("both components need framings")
    if fo.denominator != 1:
        raise RationalFramedSlide(f"cannot slide over the {fo}-framed component {oi}")
    lk = linking_number(d, mi, oi)
    for em, eo, s, side in _band_candidates(d, mi, oi, band):
        if sign is not None and s != sign:
            continue
        return _slide(d, mi, oi, em, eo, s, side, fm + fo + 2 * s * lk)
    raise MalformedPD(f"no band from component {mi} to component {oi} with sign {sign}")


def _band_candidates(d: PlanarDiagram, mi: int, oi: int, band):
    """Yield (mover edge, over edge, sign, side) choices in a fixed order."""
    arcs_m = d.components[mi].arcs
    arcs_o = d.components[oi].arcs
    if band is not None:
        em, eo = band
        if em not in arcs_m or eo not in arcs_o:
            raise MalformedPD(f"band {tuple(band)} does not join component {mi} to component {oi}")
        pairs = [(em, eo)]
    else:
        pairs = [(em, eo) for em in arcs_m for eo in arcs_o]
    piece = _pieces(d)
    regions = faces(d)
    for em, eo in pairs:
        if piece[em] != piece[eo]:
            for s in (1, -1):
                yield em, eo, s, 1
            continue
        for cyc in regions:
            found = {}
            for a, agrees in cyc:
                if a in (em, eo) and a not in found:
                    found[a] = agrees
            if len(found) == 2:
                # the region lies to the right of ``eo`` when ``eo`` agrees with the walk
                side = 1 if found[eo] else -1
                yield em, eo, (1 if found[em] == found[eo] else -1), side


def _slide(d, mi, oi, em, eo, s, side, framing):
    fo = int(d.components[oi].framing)
    name = d.components[mi].name
    original = d.components[oi].arcs
    d2, twin = push_off(d, oi, side=side)
    ci = len(d2.components) - 1
    extra = fo - linking_number(d2, oi, ci)
    if extra:
        # twist the over strand with its copy, away from the band edge when possible
        e = next((a for a in original if a != eo), eo)
        if e in d2.ends()[0]:
            d2 = insert_full_twists(d2, face_pair_bundle(d2, e, twin[e]), extra, 1)
        else:
            twisted = insert_full_twists(d2, [e, twin[e]], extra, 1)
            if linking_number(twisted, oi, ci) != fo:
                twisted = insert_full_twists(d2, [e, -twin[e]], extra, 1)
            d2 = twisted
    if s < 0:
        d2 = _reverse_component(d2, ci)
    d2 = _band_sum(d2, mi, ci, em, twin[eo])
    comps = list(d2.components)
    comps[mi] = replace(comps[mi], framing=Fraction(framing), name=name)
    out = d2.with_components(comps)
    _check(out)
    return out.with_provenance(f"handle_slide({mi},{oi},{s})")


def normalize(d: PlanarDiagram) -> PlanarDiagram:
    from .diagram import validate

    return validate(d).with_provenance("normalize")


# ---------------------------------------------------------------- scripts
MOVE_KINDS = ("blow_up", "blow_down", "rational_blow_up", "rational_blow_down", "handle_slide", "normalize")


@dataclass(frozen=True)
class KirbyMove:
    """One move; ``params`` holds the keyword arguments of the matching function."""

    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in MOVE_KINDS:
            raise ScriptError(f"unknown move kind {self.kind!r}")
        object.__setattr__(self, "params", dict(self.params))

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.params}

    @classmethod
    def from_json(cls, obj: Mapping) -> "KirbyMove":
        obj = dict(obj)
        return cls(obj.pop("kind"), obj)


@dataclass(frozen=True)
class MoveScript:
    """Initial diagram, moves, and optional expected invariants after given steps.

    Step 0 is the initial diagram and step ``i`` follows move ``i``.  A
    checkpoint may give ``linking`` (matrix of rational strings), ``h1`` and
    ``crossings``.
    """

    initial: PlanarDiagram
    moves: tuple[KirbyMove, ...] = ()
    checkpoints: Mapping[int, Mapping[str, Any]] = field(default_factory=dict)
    title: str = ""

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "initial": self.initial.to_json(),
            "moves": [m.to_json() for m in self.moves],
            "checkpoints": {str(k): dict(v) for k, v in sorted(self.checkpoints.items())},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, obj: Mapping) -> "MoveScript":
        try:
            return cls(
                PlanarDiagram.from_json(obj["initial"]),
                tuple(KirbyMove.from_json(m) for m in obj.get("moves", [])),
                {int(k): v for k, v in obj.get("checkpoints", {}).items()},
                obj.get("title", ""),
            )
        except (KeyError, TypeError) as exc:
            raise ScriptError(f"malformed script: {exc}") from exc

    @classmethod
    def loads(cls, text: str) -> "MoveScript":
        return cls.from_json(json.loads(text))


def framed_unknot(framing, name: str | None = None, role: str = "SurgeryCurve") -> PlanarDiagram:
    """A single crossingless unknot with the given framing."""
    d = blow_up(PlanarDiagram((), (), ()), 1, name=name)
    comp = replace(d.components[0], role=role)
    return d.with_components([comp]).reframe(0, framing)


def lemma_script(n: int) -> MoveScript:
    """A ``-1/n``-framed unknot linking a 0-framed unknot once, blown down to an ``n``-framed unknot.

    The initial diagram is built from the ``n``-framed unknot by
    :func:`rational_blow_up`, so the script checks both directions.
    """
    right = framed_unknot(n, name="L2")
    left = rational_blow_up(right, n, site=right.components[0].arcs[:1], name="L1")
    checkpoints = {
        0: {"linking": [["0", "1"], ["1", str(Fraction(-1, n))]], "h1": str(abs(n))},
        1: {"linking": [[str(n)]], "h1": str(abs(n))},
    }
    return MoveScript(left, (KirbyMove("rational_blow_down", {"component": "L1"}),), checkpoints, f"lemma n={n}")


@dataclass(frozen=True)
class StepRecord:
    step: int
    kind: str
    h1: Any
    linking: str
    crossings: int
    components: int


def apply_move(d: PlanarDiagram, move: KirbyMove) -> PlanarDiagram:
    p = dict(move.params)
    if move.kind == "blow_up":
        return blow_up(d, p["sign"], p.get("site", ()), name=p.get("name"))
    if move.kind == "blow_down":
        return blow_down(d, p["component"], sign=p.get("sign"))
    if move.kind == "rational_blow_up":
        return rational_blow_up(d, p["n"], p.get("site", ()), name=p.get("name"))
    if move.kind == "rational_blow_down":
        return rational_blow_down(d, p["component"])
    if move.kind == "handle_slide":
        band = p.get("band")
        return handle_slide(d, p["mover"], p["over"], band=None if band is None else tuple(band), sign=p.get("sign"))
    return normalize(d)


def _record(step: int, kind: str, d: PlanarDiagram) -> StepRecord:
    return StepRecord(step, kind, h1_order(d), str(linking_matrix(d)), len(d.crossings), len(d.components))


def _check_point(step: int, d: PlanarDiagram, rec: StepRecord, expect: Mapping[str, Any]) -> None:
    if "linking" in expect:
        want = tuple(tuple(Fraction(x) for x in row) for row in expect["linking"])
        if linking_matrix(d).matrix != want:
            raise InvariantViolation(f"step {step}: linking matrix {rec.linking} differs from checkpoint", step)
    if "h1" in expect and str(rec.h1) != str(expect["h1"]):
        raise InvariantViolation(f"step {step}: h1_order {rec.h1} differs from checkpoint {expect['h1']}", step)
    if "crossings" in expect and rec.crossings != int(expect["crossings"]):
        raise InvariantViolation(f"step {step}: {rec.crossings} crossings, checkpoint says {expect['crossings']}", step)


def replay(script: MoveScript) -> tuple[PlanarDiagram, list[StepRecord]]:
    """Apply the moves in order, asserting after each that ``h1_order`` is unchanged."""
    d = script.initial
    rec = _record(0, "initial", d)
    log = [rec]
    if 0 in script.checkpoints:
        _check_point(0, d, rec, script.checkpoints[0])
    for i, move in enumerate(script.moves, start=1):
        try:
            d = apply_move(d, move)
            rec = _record(i, move.kind, d)
        except InvariantViolation:
            raise
        except Exception as exc:
            raise ScriptError(f"step {i} ({move.kind}): {exc}", i) from exc
        log.append(rec)
        if str(rec.h1) != str(log[0].h1):
            raise InvariantViolation(f"step {i} ({move.kind}): h1_order {log[0].h1} became {rec.h1}", i)
        if i in script.checkpoints:
            _check_point(i, d, rec, script.checkpoints[i])
    return d, log


def log_csv(log: Sequence[StepRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "kind", "h1_order", "crossings", "components", "linking_matrix"])
    for r in log:
        w.writerow([r.step, r.kind, r.h1, r.crossings, r.components, r.linking])
    return buf.getvalue()
