"""Oriented, framed link diagrams stored as PD codes.

A crossing is a quadruple ``(a, b, c, d)`` of edge labels: ``a`` is the
incoming under-strand, and the remaining labels follow counterclockwise.
The under-strand leaves along ``c``.  The over-strand runs ``d -> b`` at a
positive crossing and ``b -> d`` at a negative one; the sign is stored
explicitly next to each quadruple so that short components (two edges, both
over-passes) stay unambiguous.

Each component lists its edge labels in traversal order, which fixes its
orientation.  A crossingless component is a single label that appears in no
crossing.  Diagrams are immutable; rewrites return new diagrams with a
provenance entry appended.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import EmptyBundle, MalformedPD, MissingFraming, OrientationMismatch

__all__ = [
    "ROLES",
    "Component",
    "PlanarDiagram",
    "LinkingData",
    "validate",
    "linking_matrix",
    "insert_full_twists",
    "mirror",
    "connected_sum",
    "disjoint_union",
    "from_gauss",
    "to_gauss",
    "crossing_from_corners",
    "faces",
    "face_pair_bundle",
    "remove_component",
    "linking_number",
]

ROLES = ("Knot", "SurgeryCurve", "BandBoundary", "Auxiliary")


def crossing_from_corners(corners_ccw: Sequence[int], under_in: int) -> tuple[int, int, int, int]:
    """PD quadruple from the four edge labels around a crossing in counterclockwise order.

    ``under_in`` indexes the corner where the under-strand enters.
    """
    c = list(corners_ccw)
    return tuple(c[under_in:] + c[:under_in])  # type: ignore[return-value]


def _fmt_framing(f: Fraction | None) -> str:
    if f is None:
        return "none"
    return f"{f.numerator}/{f.denominator}"


def _parse_framing(text: str) -> Fraction | None:
    if text == "none":
        return None
    return Fraction(text)


@dataclass(frozen=True)
class Component:
    """One link component: role tag, framing and edge labels in traversal order."""

    arcs: tuple[int, ...]
    role: str = "Knot"
    framing: Fraction | None = None
    name: str | None = None

    def __post_init__(self):
        if self.role not in ROLES:
            raise MalformedPD(f"unknown role {self.role!r}")
        if self.framing is not None and not isinstance(self.framing, Fraction):
            object.__setattr__(self, "framing", Fraction(self.framing))
        object.__setattr__(self, "arcs", tuple(self.arcs))


@dataclass(frozen=True)
class LinkingData:
    """Framings on the diagonal, pairwise linking numbers elsewhere."""

    matrix: tuple[tuple[Fraction, ...], ...]
    index: tuple[int, ...]

    def as_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.matrix]

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.matrix) + "]"


@dataclass(frozen=True)
class PlanarDiagram:
    crossings: tuple[tuple[int, int, int, int], ...]
    signs: tuple[int, ...]
    components: tuple[Component, ...]
    sites: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(tuple(int(x) for x in q) for q in self.crossings))
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "sites", {k: tuple(v) for k, v in dict(self.sites).items()})
        if len(self.signs) != len(self.crossings):
            raise MalformedPD("one sign per crossing is required")

    # ------------------------------------------------------------------ basics
    @classmethod
    def from_pd(
        cls,
        crossings: Iterable[Sequence[int]],
        components: Iterable[Component] | None = None,
        signs: Iterable[int] | None = None,
        **kw,
    ) -> "PlanarDiagram":
        """Build from bare quadruples, deriving traversal order and signs when omitted.

        Without explicit components the quadruples must determine orientation
        (every component has an under-pass or at least three edges).
        """
        quads = [tuple(int(x) for x in q) for q in crossings]
        if components is None:
            components = [Component(arcs=arcs) for arcs in _trace_components(quads)]
        components = list(components)
        if signs is None:
            signs = _derive_signs(quads, components)
        d = cls(tuple(quads), tuple(signs), tuple(components), **kw)
        _check(d)
        return d

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def labels(self) -> list[int]:
        return [a for comp in self.components for a in comp.arcs]

    def component_of(self) -> dict[int, int]:
        return {a: i for i, comp in enumerate(self.components) for a in comp.arcs}

    def successor(self) -> dict[int, int]:
        nxt = {}
        for comp in self.components:
            arcs = comp.arcs
            for i, a in enumerate(arcs):
                nxt[a] = arcs[(i + 1) % len(arcs)]
        return nxt

    def component_index(self, ref) -> int:
        """Resolve a component given by index or by name."""
        if isinstance(ref, int):
            if not 0 <= ref < len(self.components):
                raise MalformedPD(f"no component {ref}")
            return ref
        for i, comp in enumerate(self.components):
            if comp.name == ref:
                return i
        raise MalformedPD(f"no component named {ref!r}")

    def over_positions(self, k: int) -> tuple[int, int]:
        """(incoming, outgoing) positions of the over-strand at crossing ``k``."""
        return (3, 1) if self.signs[k] > 0 else (1, 3)

    def ends(self) -> tuple[dict[int, tuple[int, int]], dict[int, tuple[int, int]]]:
        """Maps label -> (crossing, position) for the head and the tail of each edge."""
        head: dict[int, tuple[int, int]] = {}
        tail: dict[int, tuple[int, int]] = {}
        for k, q in enumerate(self.crossings):
            oi, oo = self.over_positions(k)
            for pos, m in ((0, head), (2, tail), (oi, head), (oo, tail)):
                if q[pos] in m:
                    raise MalformedPD(f"edge {q[pos]} has two heads or two tails", q[pos])
                m[q[pos]] = (k, pos)
        return head, tail

    def crossing_components(self, k: int) -> tuple[int, int]:
        """(under component, over component) at crossing ``k``."""
        comp = self.component_of()
        q = self.crossings[k]
        return comp[q[0]], comp[q[1]]

    def writhe(self, comp: int | None = None) -> int:
        if comp is None:
            return sum(self.signs)
        total = 0
        for k in range(len(self.crossings)):
            u, o = self.crossing_components(k)
            if u == o == comp:
                total += self.signs[k]
        return total

    def with_provenance(self, tag: str) -> "PlanarDiagram":
        return replace(self, provenance=self.provenance + (tag,))

    def with_components(self, components: Sequence[Component]) -> "PlanarDiagram":
        return replace(self, components=tuple(components))

    def reframe(self, ref, framing) -> "PlanarDiagram":
        i = self.component_index(ref)
        comps = list(self.components)
        comps[i] = replace(comps[i], framing=None if framing is None else Fraction(framing))
        return replace(self, components=tuple(comps))

    def site(self, name: str) -> tuple[int, ...]:
        if name not in self.sites:
            raise MalformedPD(f"unknown site {name!r}")
        return self.sites[name]

    def with_site(self, name: str, labels: Sequence[int]) -> "PlanarDiagram":
        sites = dict(self.sites)
        sites[name] = tuple(labels)
        return replace(self, sites=sites)

    # ------------------------------------------------------------- I/O: text
    def to_pd_text(self) -> str:
        lines = []
        for i, comp in enumerate(self.components):
            line = f"component {i} role {comp.role} framing {_fmt_framing(comp.framing)} orient + arcs {' '.join(map(str, comp.arcs))}"
            if comp.name:
                line += f" name {comp.name}"
            lines.append(line)
        for name in sorted(self.sites):
            lines.append(f"site {name} {' '.join(map(str, self.sites[name]))}".rstrip())
        ambiguous = _ambiguous_crossings(self)
        for k, q in enumerate(self.crossings):
            text = f"X[{q[0]},{q[1]},{q[2]},{q[3]}]"
            if k in ambiguous:
                text += " +" if self.signs[k] > 0 else " -"
            lines.append(text)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_pd_text(cls, text: str) -> "PlanarDiagram":
        comps: list[tuple[int, Component]] = []
        quads: list[tuple[int, ...]] = []
        given_signs: list[int | None] = []
        sites: dict[str, tuple[int, ...]] = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("X["):
                m = re.fullmatch(r"X\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*([+-])?", line)
                if not m:
                    raise MalformedPD(f"bad crossing line {line!r}")
                quads.append(tuple(int(m.group(i)) for i in range(1, 5)))
                given_signs.append(None if m.group(5) is None else (1 if m.group(5) == "+" else -1))
            elif line.startswith("component"):
                comps.append(_parse_component_line(line))
            elif line.startswith("site"):
                parts = line.split()
                sites[parts[1]] = tuple(int(x) for x in parts[2:])
            else:
                raise MalformedPD(f"unrecognized line {line!r}")
        comps.sort(key=lambda p: p[0])
        components = [c for _, c in comps] if comps else None
        if components is None:
            components = [Component(arcs=arcs) for arcs in _trace_components(quads)]
        signs = _derive_signs(quads, components, given_signs)
        d = cls(tuple(quads), tuple(signs), tuple(components), sites=sites)
        _check(d)
        return d

    # ------------------------------------------------------------- I/O: JSON
    def to_json(self) -> dict:
        return {
            "crossings": [list(q) for q in self.crossings],
            "signs": list(self.signs),
            "components": [
                {
                    "role": c.role,
                    "framing": _fmt_framing(c.framing),
                    "orient": "+",
                    "arcs": list(c.arcs),
                    **({"name": c.name} if c.name else {}),
                }
                for c in self.components
            ],
            "sites": {k: list(v) for k, v in sorted(self.sites.items())},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "PlanarDiagram":
        comps = []
        for c in obj.get("components") or []:
            arcs = tuple(c["arcs"])
            if c.get("orient", "+") == "-":
                arcs = tuple(reversed(arcs))
            fr = c.get("framing")
            comps.append(
                Component(
                    arcs=arcs,
                    role=c.get("role", "Knot"),
                    framing=None if fr in (None, "none") else Fraction(str(fr)),
                    name=c.get("name"),
                )
            )
        quads = [tuple(q) for q in obj["crossings"]]
        components = comps or [Component(arcs=arcs) for arcs in _trace_components(quads)]
        signs = obj.get("signs") or _derive_signs(quads, components)
        d = cls(tuple(quads), tuple(signs), tuple(components), sites=obj.get("sites") or {})
        _check(d)
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __eq__(self, other):
        if not isinstance(other, PlanarDiagram):
            return NotImplemented
        return (
            self.crossings == other.crossings
            and self.signs == other.signs
            and self.components == other.components
            and dict(self.sites) == dict(other.sites)
        )

    def __hash__(self):
        return hash((self.crossings, self.signs, self.components))


def _parse_component_line(line: str) -> tuple[int, Component]:
    toks = line.split()
    try:
        idx = int(toks[1])
        kv = {}
        i = 2
        while i < len(toks):
            key = toks[i]
            if key == "arcs":
                j = i + 1
                vals = []
                while j < len(toks) and re.fullmatch(r"-?\d+", toks[j]):
                    vals.append(int(toks[j]))
                    j += 1
                kv["arcs"] = vals
                i = j
            else:
                kv[key] = toks[i + 1]
                i += 2
    except (IndexError, ValueError) as exc:
        raise MalformedPD(f"bad component line {line!r}") from exc
    if "arcs" not in kv:
        raise MalformedPD(f"component line lacks arcs: {line!r}")
    arcs = tuple(kv["arcs"])
    if kv.get("orient", "+") == "-":
        arcs = tuple(reversed(arcs))
    return idx, Component(
        arcs=arcs,
        role=kv.get("role", "Knot"),
        framing=_parse_framing(kv.get("framing", "none")),
        name=kv.get("name"),
    )


# ---------------------------------------------------------------- structure
def _trace_components(quads) -> list[tuple[int, ...]]:
    """Traversal order from bare quadruples, using under-passes and label adjacency."""
    nxt: dict[int, int] = {}
    pairs = []
    for q in quads:
        nxt[q[0]] = q[2]
        pairs.append((q[1], q[3]))
    # over-strands: orient by label succession (KnotTheory convention) when needed
    for b, d in pairs:
        if b in nxt and d in nxt:
            continue
        if b in nxt or d in nxt:
            # one end already has a successor, so the other end must be the one that continues
            if b in nxt:
                nxt[d] = b
            else:
                nxt[b] = d
        elif d == b + 1 or (b > d + 1):
            nxt[b] = d
        else:
            nxt[d] = b
    seen = set()
    comps = []
    for start in sorted(nxt):
        if start in seen:
            continue
        arcs = []
        a = start
        while a not in seen:
            seen.add(a)
            arcs.append(a)
            if a not in nxt:
                raise MalformedPD(f"edge {a} has no successor", a)
            a = nxt[a]
        if a != start:
            raise MalformedPD(f"edge {a} is reached twice", a)
        comps.append(tuple(arcs))
    return comps


def _derive_signs(quads, components, given=None) -> list[int]:
    nxt = {}
    for comp in components:
        arcs = comp.arcs
        for i, a in enumerate(arcs):
            nxt[a] = arcs[(i + 1) % len(arcs)]
    signs = []
    for k, q in enumerate(quads):
        if given is not None and given[k] is not None:
            signs.append(given[k])
            continue
        b, d = q[1], q[3]
        fwd = nxt.get(b) == d  # b -> d
        bwd = nxt.get(d) == b  # d -> b
        if fwd and not bwd:
            signs.append(-1)
        elif bwd and not fwd:
            signs.append(1)
        elif fwd and bwd and _over_from_under_ends(quads, k) is not None:
            signs.append(_over_from_under_ends(quads, k))
        elif fwd and bwd:
            raise MalformedPD(f"crossing {q} has an ambiguous over-strand direction; give its sign", b)
        else:
            raise OrientationMismatch(f"over-strand {b},{d} at crossing {q} is not consecutive in its component")
    return signs


def _over_from_under_ends(quads, k) -> int | None:
    """Sign at crossing ``k`` read off from where its over-edges pass under elsewhere."""
    b, d = quads[k][1], quads[k][3]
    for j, q in enumerate(quads):
        if j == k:
            continue
        for label, towards_d in ((b, True), (d, False)):
            if q[2] == label:  # tail of ``label`` is elsewhere, so its head is here
                return -1 if towards_d else 1
            if q[0] == label:  # head of ``label`` is elsewhere
                return 1 if towards_d else -1
    return None


def _ambiguous_crossings(d: PlanarDiagram) -> set[int]:
    nxt = d.successor()
    return {k for k, q in enumerate(d.crossings) if nxt.get(q[1]) == q[3] and nxt.get(q[3]) == q[1]}


def _check(d: PlanarDiagram) -> None:
    """Raise if ``d`` violates any structural invariant."""
    count: dict[int, int] = {}
    for q in d.crossings:
        for a in q:
            count[a] = count.get(a, 0) + 1
    owner: dict[int, int] = {}
    for i, comp in enumerate(d.components):
        if not comp.arcs:
            raise MalformedPD(f"component {i} has no arcs")
        for a in comp.arcs:
            if a in owner:
                raise MalformedPD(f"edge {a} listed in two components", a)
            owner[a] = i
        if len(comp.arcs) == 1 and count.get(comp.arcs[0], 0) == 0:
            continue
    for a, n in count.items():
        if a not in owner:
            raise MalformedPD(f"edge {a} belongs to no component", a)
        if n != 2:
            raise MalformedPD(f"edge {a} occurs {n} times", a)
    for i, comp in enumerate(d.components):
        for a in comp.arcs:
            if count.get(a, 0) == 0 and len(comp.arcs) != 1:
                raise MalformedPD(f"edge {a} of component {i} occurs in no crossing", a)
    for s in d.signs:
        if s not in (1, -1):
            raise MalformedPD(f"crossing sign {s} is not +-1")
    nxt = d.successor()
    head, tail = d.ends()
    for k, q in enumerate(d.crossings):
        if nxt[q[0]] != q[2]:
            raise OrientationMismatch(f"under-strand {q[0]} -> {q[2]} at crossing {k} disagrees with traversal")
        oi, oo = d.over_positions(k)
        if nxt[q[oi]] != q[oo]:
            raise OrientationMismatch(f"over-strand {q[oi]} -> {q[oo]} at crossing {k} disagrees with traversal")
    for a in owner:
        if count.get(a, 0) == 2 and (a not in head or a not in tail):
            raise OrientationMismatch(f"edge {a} lacks a head or a tail", a)
    _check_planar(d)


def _check_planar(d: PlanarDiagram) -> None:
    """Euler-characteristic test: every connected piece must embed in the sphere."""
    n = len(d.crossings)
    if n == 0:
        return
    where: dict[int, list[tuple[int, int]]] = {}
    for k, q in enumerate(d.crossings):
        for p, a in enumerate(q):
            where.setdefault(a, []).append((k, p))
    other = {}
    for a, ends in where.items():
        (x, y) = ends
        other[x] = y
        other[y] = x
    seen = set()
    faces = 0
    for k in range(n):
        for p in range(4):
            if (k, p) in seen:
                continue
            faces += 1
            cur = (k, p)
            while cur not in seen:
                seen.add(cur)
                j, r = other[cur]
                cur = (j, (r + 1) % 4)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ends in where.values():
        (k1, _), (k2, _) = ends
        parent[find(k1)] = find(k2)
    pieces = len({find(k) for k in range(n)})
    if n - 2 * n + faces != 2 * pieces:
        raise MalformedPD(f"PD code is not planar (V - E + F = {faces - n}, expected {2 * pieces})")


def faces(d: PlanarDiagram) -> list[list[tuple[int, bool]]]:
    """Regions of the diagram as boundary cycles ``(edge, agrees)``.

    Each boundary is walked with the region on the right; ``agrees`` tells
    whether the edge's orientation matches that walk.  Crossingless
    components bound no listed region.
    """
    head, tail = d.ends()
    where: dict[int, list[tuple[int, int]]] = {}
    for k, q in enumerate(d.crossings):
        for p, a in enumerate(q):
            where.setdefault(a, []).append((k, p))
    other = {}
    for ends in where.values():
        x, y = ends
        other[x] = y
        other[y] = x
    seen = set()
    out = []
    for k in range(len(d.crossings)):
        for p in range(4):
            if (k, p) in seen:
                continue
            cyc = []
            cur = (k, p)
            while cur not in seen:
                seen.add(cur)
                label = d.crossings[cur[0]][cur[1]]
                nxt = other[cur]
                # walking from cur's crossing to nxt's crossing along ``label``
                cyc.append((label, tail[label] == cur and head[label] == nxt))
                cur = (nxt[0], (nxt[1] + 1) % 4)
            out.append(cyc)
    return out


def face_pair_bundle(d: PlanarDiagram, e1: int, e2: int) -> list[int]:
    """Signed two-strand bundle for a twist site spanning a region bounded by ``e1`` and ``e2``."""
    for cyc in faces(d):
        found = {}
        for label, agrees in cyc:
            if label in (e1, e2) and label not in found:
                found[label] = agrees
        if len(found) == 2 and e1 != e2:
            return [e1 if found[e1] else -e1, -e2 if found[e2] else e2]
    raise MalformedPD(f"edges {e1} and {e2} share no region")


def validate(d: PlanarDiagram) -> PlanarDiagram:
    """Check all invariants and return the diagram relabeled 1..N in traversal order.

    Crossings are reordered by first visit along the traversal (under or over),
    so two diagrams that differ only by labels and crossing order normalize to
    the same value.
    """
    _check(d)
    mapping: dict[int, int] = {}
    nxt_label = 1
    for comp in d.components:
        for a in comp.arcs:
            mapping[a] = nxt_label
            nxt_label += 1
    head, _ = d.ends()
    order = []
    seen = set()
    for comp in d.components:
        for a in comp.arcs:
            if a in head:
                k = head[a][0]
                if k not in seen:
                    seen.add(k)
                    order.append(k)
    return _relabel(d, mapping, order)


def _relabel(d: PlanarDiagram, mapping: Mapping[int, int], order: Sequence[int] | None = None) -> PlanarDiagram:
    if order is None:
        order = range(len(d.crossings))
    quads = tuple(tuple(mapping[a] for a in d.crossings[k]) for k in order)
    signs = tuple(d.signs[k] for k in order)
    comps = tuple(replace(c, arcs=tuple(mapping[a] for a in c.arcs)) for c in d.components)
    sites = {
        name: tuple((1 if s > 0 else -1) * mapping[abs(s)] for s in labels if abs(s) in mapping)
        for name, labels in d.sites.items()
    }
    return PlanarDiagram(quads, signs, comps, sites=sites, provenance=d.provenance)


def linking_matrix(d: PlanarDiagram) -> LinkingData:
    """Framings on the diagonal; half the signed crossing count between components elsewhere."""
    m = len(d.components)
    for i, comp in enumerate(d.components):
        if comp.framing is None:
            raise MissingFraming(f"component {i} ({comp.role}) has no framing")
    acc = [[0] * m for _ in range(m)]
    comp_of = d.component_of()
    for k, q in enumerate(d.crossings):
        u, o = comp_of[q[0]], comp_of[q[1]]
        if u != o:
            acc[u][o] += d.signs[k]
            acc[o][u] += d.signs[k]
    mat = []
    for i in range(m):
        row = []
        for j in range(m):
            if i == j:
                row.append(d.components[i].framing)
            else:
                if acc[i][j] % 2:
                    raise MalformedPD(f"odd crossing count between components {i} and {j}")
                row.append(Fraction(acc[i][j] // 2))
        mat.append(tuple(row))
    return LinkingData(tuple(mat), tuple(range(m)))


def linking_number(d: PlanarDiagram, i: int, j: int) -> int:
    comp_of = d.component_of()
    total = 0
    for k, q in enumerate(d.crossings):
        u, o = comp_of[q[0]], comp_of[q[1]]
        if {u, o} == {i, j} and u != o:
            total += d.signs[k]
    return total // 2


# ---------------------------------------------------------------- rewrites
def fresh_label(d: PlanarDiagram) -> int:
    labels = d.labels()
    return (max(labels) + 1) if labels else 1


def split_edges(d: PlanarDiagram, pieces: Mapping[int, int]) -> tuple[list[list], dict[int, list[int]], int]:
    """Plan a subdivision: edge ``a`` becomes ``pieces[a] + 1`` segments.

    Returns mutable quadruples with head ends renamed, the segment labels per
    edge (tail segment keeps the old label; for a crossingless loop the last
    segment is the first one again) and the next unused label.
    """
    nxt = fresh_label(d)
    quads = [list(q) for q in d.crossings]
    head, _ = d.ends()
    segs: dict[int, list[int]] = {}
    for a, m in pieces.items():
        if a in head:
            labels = [a] + list(range(nxt, nxt + m))
            nxt += m
            k, p = head[a]
            quads[k][p] = labels[-1]
        elif m == 0:
            labels = [a]
        else:
            labels = [a] + list(range(nxt, nxt + m - 1)) + [a]
            nxt += m - 1
        segs[a] = labels
    return quads, segs, nxt


def _splice_components(components, segs: Mapping[int, list[int]]):
    out = []
    for comp in components:
        arcs = []
        for a in comp.arcs:
            seg = segs.get(a, [a])
            if len(seg) > 1 and seg[0] == seg[-1]:
                seg = seg[:-1]
            arcs.extend(seg)
        out.append(replace(comp, arcs=tuple(arcs)))
    return out


def insert_full_twists(d: PlanarDiagram, bundle: Sequence[int], count: int, handedness: int = 1) -> PlanarDiagram:
    """Insert ``count`` full twists of the given handedness on a bundle of edges.

    ``bundle`` lists signed edge labels from left to right across the insertion
    site; ``+a`` means edge ``a`` runs upward there (the side to the left when
    walking rightward along the site), ``-a`` downward.  A right-handed twist
    (``handedness = +1``) makes crossings between like-oriented strands
    positive.  Pairwise linking numbers between bundle strands of different
    components change by ``handedness * count`` times the product of their
    directions.  Framings are left for the caller to adjust.
    """
    if not bundle:
        raise EmptyBundle("no strands to twist")
    if handedness not in (1, -1):
        raise ValueError("handedness must be +1 or -1")
    labels = [abs(s) for s in bundle]
    if len(set(labels)) != len(labels):
        raise MalformedPD("bundle strands must be distinct edges")
    owner = d.component_of()
    for a in labels:
        if a not in owner:
            raise MalformedPD(f"edge {a} is not in the diagram", a)
    k = len(bundle)
    twist_word = [i for _ in range(abs(count)) for _ in range(k) for i in range(k - 1)]
    if not twist_word:
        return d.with_provenance(f"insert_full_twists({list(bundle)},{count},{handedness})")
    hand = handedness if count > 0 else -handedness
    per_strand = [0] * k
    perm = list(range(k))
    for i in twist_word:
        per_strand[perm[i]] += 1
        per_strand[perm[i + 1]] += 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    quads, segs, _ = split_edges(d, {a: per_strand[j] for j, a in enumerate(labels)})
    up = [s > 0 for s in bundle]
    # walk upward through the braid; ``cursor`` gives the segment index reached per strand
    cursor = [0] * k
    perm = list(range(k))

    def seg_below(j):
        # segment of strand j just below the current level, in the strand's own order
        idx = cursor[j] if up[j] else per_strand[j] - cursor[j]
        return segs[labels[j]][idx]

    def seg_above(j):
        idx = cursor[j] + 1 if up[j] else per_strand[j] - cursor[j] - 1
        return segs[labels[j]][idx]

    new_quads = []
    new_signs = []
    for i in twist_word:
        L, R = perm[i], perm[i + 1]
        bl, br = seg_below(L), seg_below(R)
        tr, tl = seg_above(L), seg_above(R)
        corners = [bl, br, tr, tl]  # counterclockwise from bottom-left
        if hand > 0:  # strand moving rightward (L) is over
            under_in = 1 if up[R] else 3
        else:
            under_in = 0 if up[L] else 2
        new_quads.append(crossing_from_corners(corners, under_in))
        new_signs.append(hand * (1 if up[L] == up[R] else -1))
        cursor[L] += 1
        cursor[R] += 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    comps = _splice_components(d.components, segs)
    out = PlanarDiagram(
        tuple(tuple(q) for q in quads) + tuple(new_quads),
        d.signs + tuple(new_signs),
        tuple(comps),
        sites=d.sites,
        provenance=d.provenance + (f"insert_full_twists({list(bundle)},{count},{handedness})",),
    )
    _check(out)
    return out


def mirror(d: PlanarDiagram) -> PlanarDiagram:
    """Swap over and under at every crossing and negate every framing."""
    quads = []
    for k, q in enumerate(d.crossings):
        oi, _ = d.over_positions(k)
        quads.append(crossing_from_corners(q, oi))
    comps = tuple(replace(c, framing=None if c.framing is None else -c.framing) for c in d.components)
    return PlanarDiagram(
        tuple(quads),
        tuple(-s for s in d.signs),
        comps,
        sites=d.sites,
        provenance=d.provenance + ("mirror",),
    )


def remove_component(d: PlanarDiagram, ref) -> PlanarDiagram:
    """Delete a component and all its crossings, joining the edges it cut."""
    ci = d.component_index(ref)
    comp_of = d.component_of()
    keep = []
    rename: dict[int, int] = {}

    def root(a):
        while a in rename:
            a = rename[a]
        return a

    for k, q in enumerate(d.crossings):
        u, o = comp_of[q[0]], comp_of[q[1]]
        if u == ci and o == ci:
            continue
        if u != ci and o != ci:
            keep.append(k)
            continue
        if u == ci:
            oi, oo = d.over_positions(k)
            a_in, a_out = q[oi], q[oo]
        else:
            a_in, a_out = q[0], q[2]
        a_in, a_out = root(a_in), root(a_out)
        if a_in != a_out:
            rename[a_out] = a_in
    quads = tuple(tuple(root(a) for a in d.crossings[k]) for k in keep)
    signs = tuple(d.signs[k] for k in keep)
    comps = []
    for i, comp in enumerate(d.components):
        if i == ci:
            continue
        arcs = []
        for a in comp.arcs:
            r = root(a)
            if not arcs or arcs[-1] != r:
                arcs.append(r)
        while len(arcs) > 1 and arcs[0] == arcs[-1]:
            arcs.pop()
        comps.append(replace(comp, arcs=tuple(arcs)))
    sites = {}
    for name, labels in d.sites.items():
        sites[name] = tuple((1 if s > 0 else -1) * root(abs(s)) for s in labels if comp_of.get(abs(s)) != ci)
    out = PlanarDiagram(quads, signs, tuple(comps), sites=sites, provenance=d.provenance)
    _check(out)
    return out


def disjoint_union(d1: PlanarDiagram, d2: PlanarDiagram) -> PlanarDiagram:
    off = max(d1.labels(), default=0)
    mapping = {a: a + off for a in d2.labels()}
    d2r = _relabel(d2, mapping)
    sites = dict(d1.sites)
    sites.update(d2r.sites)
    out = PlanarDiagram(
        d1.crossings + d2r.crossings,
        d1.signs + d2r.signs,
        d1.components + d2r.components,
        sites=sites,
        provenance=d1.provenance,
    )
    _check(out)
    return out


def connected_sum(d1: PlanarDiagram, d2: PlanarDiagram, comp1: int = 0, comp2: int = 0) -> PlanarDiagram:
    """Band component ``comp1`` of ``d1`` to component ``comp2`` of ``d2`` along their first edges."""
    u = disjoint_union(d1, d2)
    c1, c2 = comp1, len(d1.components) + comp2
    a1, a2 = u.components[c1].arcs, u.components[c2].arcs
    head, _ = u.ends()
    comps = list(u.components)
    if a2[0] not in head:
        merged = comps[c1]
    elif a1[0] not in head:
        merged = replace(comps[c1], arcs=a2)
    else:
        e1, e2 = a1[0], a2[0]
        quads = [list(q) for q in u.crossings]
        (k1, p1), (k2, p2) = head[e1], head[e2]
        quads[k1][p1] = e2
        quads[k2][p2] = e1
        u = replace(u, crossings=tuple(tuple(q) for q in quads))
        merged = replace(comps[c1], arcs=(e1,) + a2[1:] + (e2,) + a1[1:])
    comps[c1] = merged
    del comps[c2]
    out = replace(u, components=tuple(comps), provenance=u.provenance + ("connected_sum",))
    _check(out)
    return out


# ---------------------------------------------------------------- Gauss codes
def to_gauss(d: PlanarDiagram) -> str:
    """Signed Gauss code: ``O1- U2- ...`` per component, components joined by `` | ``.

    Crossings are numbered by their position in ``d.crossings`` (1-based).  A
    component's code starts at the head of its first edge.
    """
    head, _ = d.ends()
    parts = []
    for comp in d.components:
        toks = []
        for a in comp.arcs:
            if a not in head:
                continue
            k, p = head[a]
            kind = "U" if p == 0 else "O"
            toks.append(f"{kind}{k + 1}{'+' if d.signs[k] > 0 else '-'}")
        parts.append(" ".join(toks))
    return " | ".join(parts)


def from_gauss(text: str, roles: Sequence[str] | None = None, framings: Sequence | None = None) -> PlanarDiagram:
    """Inverse of :func:`to_gauss`; edge labels are 1..N in traversal order."""
    comps_tokens = [p.split() for p in text.split("|")]
    visits: dict[int, dict[str, tuple[int, int]]] = {}
    signs: dict[int, int] = {}
    label = 1
    comp_arcs = []
    for ci, toks in enumerate(comps_tokens):
        m = len(toks)
        if m == 0:
            comp_arcs.append((label,))
            label += 1
            continue
        base = label
        arcs = tuple(range(base, base + m))
        label += m
        comp_arcs.append(arcs)
        for j, tok in enumerate(toks):
            mt = re.fullmatch(r"([OU])(\d+)([+-])", tok)
            if not mt:
                raise MalformedPD(f"bad Gauss token {tok!r}")
            kind, cid, sg = mt.group(1), int(mt.group(2)), (1 if mt.group(3) == "+" else -1)
            if cid in signs and signs[cid] != sg:
                raise MalformedPD(f"crossing {cid} has inconsistent signs")
            signs[cid] = sg
            incoming = arcs[j]
            outgoing = arcs[(j + 1) % m]
            slot = visits.setdefault(cid, {})
            if kind in slot:
                raise MalformedPD(f"crossing {cid} visited twice as {kind}")
            slot[kind] = (incoming, outgoing)
    quads = []
    sign_list = []
    for cid in sorted(visits):
        slot = visits[cid]
        if set(slot) != {"O", "U"}:
            raise MalformedPD(f"crossing {cid} needs one over and one under visit")
        (ui, uo), (oi, oo) = slot["U"], slot["O"]
        s = signs[cid]
        quads.append((ui, oo, uo, oi) if s > 0 else (ui, oi, uo, oo))
        sign_list.append(s)
    comps = []
    for ci, arcs in enumerate(comp_arcs):
        role = roles[ci] if roles else "Knot"
        fr = framings[ci] if framings else None
        comps.append(Component(arcs=arcs, role=role, framing=None if fr is None else Fraction(fr)))
    d = PlanarDiagram(tuple(quads), tuple(sign_list), tuple(comps))
    _check(d)
    return d


def all_signed_labels(labels: Iterable[int]) -> list[int]:
    return list(itertools.chain.from_iterable((a, -a) for a in labels))
