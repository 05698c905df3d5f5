"""Build PD codes from a bottom-to-top Morse description of a tangle.

A :class:`MorseBuilder` keeps the list of strand ends crossing the current
horizontal level, left to right.  ``cup`` creates two ends joined below,
``cap`` joins two adjacent ends, and ``cross`` lets two adjacent strands pass.
When every end is capped, :meth:`MorseBuilder.build` traces the components,
orients them from the recorded hints and emits a :class:`PlanarDiagram`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .diagram import Component, PlanarDiagram, crossing_from_corners, _check
from .errors import MalformedPD

__all__ = ["MorseBuilder", "braid_closure"]

BL, BR, TR, TL = range(4)


@dataclass
class _Crossing:
    corners: list  # node ids at BL, BR, TR, TL
    over_left: bool  # the strand from bottom-left to top-right passes over


class MorseBuilder:
    def __init__(self):
        self._nbr: dict[int, list[int]] = {}  # node -> linked nodes
        self._corner: dict[int, tuple[int, int]] = {}  # node -> (crossing, corner)
        self._crossings: list[_Crossing] = []
        self.pos: list[int] = []  # open end tokens, left to right
        self._next = 0
        self._orient: dict[str, tuple[int, bool, str, Fraction | None]] = {}
        self._sites: dict[str, list[tuple[int, bool]]] = {}

    # -- graph helpers
    def _node(self) -> int:
        self._next += 1
        self._nbr[self._next] = []
        return self._next

    def _link(self, a: int, b: int) -> None:
        self._nbr[a].append(b)
        self._nbr[b].append(a)

    @property
    def width(self) -> int:
        return len(self.pos)

    # -- moves
    def cup(self, i: int) -> "MorseBuilder":
        """New arc whose two ends sit at positions ``i`` and ``i + 1``."""
        if not 0 <= i <= len(self.pos):
            raise IndexError(f"cup position {i} out of range")
        a, b = self._node(), self._node()
        self._link(a, b)
        self.pos[i:i] = [a, b]
        return self

    def cap(self, i: int) -> "MorseBuilder":
        """Join the ends at positions ``i`` and ``i + 1``."""
        if not 0 <= i < len(self.pos) - 1:
            raise IndexError(f"cap position {i} out of range")
        a, b = self.pos[i], self.pos[i + 1]
        self._link(a, b)
        del self.pos[i : i + 2]
        return self

    def cross(self, i: int, over_left: bool) -> "MorseBuilder":
        """Strands at ``i`` and ``i + 1`` swap places.

        ``over_left`` puts the strand moving rightward (from ``i``) on top.
        For two upward strands that is a positive crossing.
        """
        if not 0 <= i < len(self.pos) - 1:
            raise IndexError(f"crossing position {i} out of range")
        k = len(self._crossings)
        corners = [self._node() for _ in range(4)]
        for c, node in enumerate(corners):
            self._corner[node] = (k, c)
        self._link(self.pos[i], corners[BL])
        self._link(self.pos[i + 1], corners[BR])
        self._link(corners[BL], corners[TR])
        self._link(corners[BR], corners[TL])
        top_l, top_r = self._node(), self._node()
        self._link(top_l, corners[TL])
        self._link(top_r, corners[TR])
        self._crossings.append(_Crossing(corners, over_left))
        self.pos[i], self.pos[i + 1] = top_l, top_r
        return self

    def sigma(self, i: int, power: int = 1) -> "MorseBuilder":
        """Braid generator ``sigma_i^power`` (positive for upward strands when ``power > 0``)."""
        for _ in range(abs(power)):
            self.cross(i, power > 0)
        return self

    def full_twist(self, i: int, j: int, count: int = 1) -> "MorseBuilder":
        """``count`` right-handed full twists on positions ``i .. j`` (negative: left-handed)."""
        k = j - i + 1
        for _ in range(abs(count)):
            for _ in range(k):
                for p in range(i, j):
                    self.cross(p, count > 0)
        return self

    def move(self, src: int, dst: int, over: bool) -> "MorseBuilder":
        """Carry the strand at ``src`` sideways to ``dst`` passing over (or under) the others."""
        while src < dst:
            self.cross(src, over)
            src += 1
        while src > dst:
            self.cross(src - 1, not over)
            src -= 1
        return self

    # -- annotations
    def orient(self, name: str, i: int, up: bool = True, role: str = "Knot", framing=None) -> "MorseBuilder":
        """Name the component through position ``i`` and orient it upward (or downward) there."""
        self._orient[name] = (self.pos[i], up, role, None if framing is None else Fraction(framing))
        return self

    def site(self, name: str, positions: Sequence[int]) -> "MorseBuilder":
        """Record a twist site: the strands at ``positions`` at the current level."""
        self._sites[name] = [(self.pos[i], True) for i in positions]
        return self

    # -- output
    def build(self, check: bool = True) -> PlanarDiagram:
        if self.pos:
            raise MalformedPD(f"{len(self.pos)} strand ends left open")
        label_of: dict[int, int] = {}
        next_of: dict[int, int] = {}
        cin: dict[tuple[int, int], int] = {}
        cout: dict[tuple[int, int], int] = {}
        starts = [(tok, up, name, role, fr) for name, (tok, up, role, fr) in self._orient.items()]
        starts += [(node, True, None, "Knot", None) for node in sorted(self._nbr)]
        comps = []
        label = 0
        for tok, up, name, role, fr in starts:
            if tok in label_of:
                if name is not None:
                    raise MalformedPD(f"component {name!r} hinted twice")
                continue
            path = self._trace(tok, up)
            m = len(path)
            for i, n in enumerate(path):
                next_of[n] = path[(i + 1) % m]

            def is_out(i):
                n = path[i]
                return n in self._corner and self._partner(n) == path[i - 1]

            outs = [i for i in range(m) if is_out(i)]
            arcs = []
            if not outs:
                label += 1
                arcs.append(label)
                for n in path:
                    label_of[n] = label
            else:
                path = path[outs[0] :] + path[: outs[0]]
                for i, n in enumerate(path):
                    if n in self._corner:
                        if self._partner(n) == path[i - 1]:
                            label += 1
                            arcs.append(label)
                            cout[self._corner[n]] = label
                        else:
                            cin[self._corner[n]] = label
                    label_of[n] = label
            comps.append(Component(arcs=tuple(arcs), role=role, framing=fr, name=name))
        quads = []
        signs = []
        for k, cr in enumerate(self._crossings):
            labels = [cin.get((k, c), cout.get((k, c))) for c in range(4)]
            left_up = (k, BL) in cin
            right_up = (k, BR) in cin
            if cr.over_left:
                under_in = BR if right_up else TL
            else:
                under_in = BL if left_up else TR
            quads.append(crossing_from_corners(labels, under_in))
            lu = (1, 1) if left_up else (-1, -1)
            ru = (-1, 1) if right_up else (1, -1)
            o, u = (lu, ru) if cr.over_left else (ru, lu)
            signs.append(1 if o[0] * u[1] - o[1] * u[0] > 0 else -1)
        sites = {}
        for sname, toks in self._sites.items():
            signed = []
            for tok, _ in toks:
                going_up = next_of[tok] != self._nbr[tok][0]
                signed.append(label_of[tok] if going_up else -label_of[tok])
            sites[sname] = tuple(signed)
        d = PlanarDiagram(tuple(quads), tuple(signs), tuple(comps), sites=sites)
        if check:
            _check(d)
        return d

    def _partner(self, corner: int) -> int:
        k, c = self._corner[corner]
        return self._crossings[k].corners[(c + 2) % 4]

    def _trace(self, start: int, up: bool) -> list[int]:
        """Closed walk through ``start``; ``up`` leaves a token away from the piece below it."""
        below, above = self._nbr[start]
        prev = below if up else above
        cur = start
        path = []
        while True:
            path.append(cur)
            a, b = self._nbr[cur]
            nxt = b if a == prev else a
            if a == b:
                nxt = a
            prev, cur = cur, nxt
            if cur == start:
                return path


def braid_closure(word: Sequence[int], strands: int | None = None) -> PlanarDiagram:
    """PD of the closure of a braid word (``i`` for ``sigma_i``, ``-i`` for its inverse, 1-based).

    Braid strands run upward and return on the right through nested arcs.
    """
    k = strands if strands is not None else (max((abs(g) for g in word), default=0) + 1)
    return _oriented_closure(list(word), k)


def _oriented_closure(word, k) -> PlanarDiagram:
    perm = list(range(k))
    for g in word:
        i = abs(g) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    # perm[pos] = strand that ends at top position pos; closure maps top pos -> bottom pos
    reps = []
    seen = set()
    for s in range(k):
        if s in seen:
            continue
        reps.append(s)
        cur = s
        while cur not in seen:
            seen.add(cur)
            cur = perm.index(cur)  # strand starting at pos ``cur`` ends at top pos perm.index(cur)
    b = MorseBuilder()
    for i in range(k):
        b.cup(i)
    for j, s in enumerate(reps):
        b.orient(f"L{j}", s, up=True)
    for g in word:
        b.sigma(abs(g) - 1, 1 if g > 0 else -1)
    for i in range(k):
        b.cap(k - 1 - i)
    return b.build()
