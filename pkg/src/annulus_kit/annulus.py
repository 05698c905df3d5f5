"""Annulus presentations: band words, arc words, goodness and the degree formula.

A band word lists what the core of the band meets on its way from the outer
boundary circle ``O`` of ``A`` to the inner circle ``I``:

* ``A+`` / ``A-``: a ribbon pass through the interior of ``A``;
* ``S+`` / ``S-``: a pass through the disk ``Sigma`` bounded by ``c``;
* ``X+`` / ``X-``: a right- / left-handed full twist of the band.

Passes are recorded once per band edge, so one ribbon pass of the core is the
pair ``A+ ... A-`` (the edges cross ``A`` in opposite directions) and
``delta = #A/2``, ``sigma = #S/2``.  After the band is shrunk, each ``A+``
becomes a ``-`` puncture of the spanning disk by ``c`` and each ``A-`` a
``+`` puncture, between the fixed punctures ``p_*`` (``-``) and ``p_*'``
(``+``).

Realization replays a derivation.  A word is realizable when it is obtained
from a seed band by the word rewrites of :mod:`annulus_kit.ops`; the same
sequence of operations is then applied to the spatial seed and the result is
projected and blown down.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import spatial
from .diagram import PlanarDiagram, mirror
from .errors import InvalidBandWord, NotBlowDownable, NotGood, UnsupportedWord
from .kirby import blow_down

__all__ = [
    "Event",
    "ThroughA",
    "ThroughSigma",
    "SelfCross",
    "BandWord",
    "Arc",
    "ArcWord",
    "GoodnessReport",
    "derive_arc_word",
    "check_good",
    "predicted_degree",
    "normalize",
    "Presentation",
    "seed_presentation",
    "find_derivation",
    "presentation",
    "realize_diagram",
    "SEED_WORDS",
]

KINDS = ("A", "S", "X")


@dataclass(frozen=True, order=True)
class Event:
    kind: str
    sign: int

    def __post_init__(self):
        if self.kind not in KINDS or self.sign not in (1, -1):
            raise InvalidBandWord(f"bad event {self.kind}{self.sign}")

    @property
    def token(self) -> str:
        return f"{self.kind}{'+' if self.sign > 0 else '-'}"

    def __neg__(self) -> "Event":
        return Event(self.kind, -self.sign)

    def __repr__(self) -> str:
        return self.token


def ThroughA(sign: int) -> Event:
    return Event("A", sign)


def ThroughSigma(sign: int) -> Event:
    return Event("S", sign)


def SelfCross(sign: int) -> Event:
    return Event("X", sign)


def _parse_token(tok: str) -> Event:
    if len(tok) != 2 or tok[0] not in KINDS or tok[1] not in "+-":
        raise InvalidBandWord(f"bad token {tok!r}")
    return Event(tok[0], 1 if tok[1] == "+" else -1)


@dataclass(frozen=True)
class BandWord:
    events: tuple[Event, ...] = ()
    epsilon: int = -1

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if self.epsilon not in (1, -1):
            raise InvalidBandWord("epsilon must be +1 or -1")
        if sum(e.sign for e in self.events if e.kind == "A"):
            raise InvalidBandWord("ThroughA signs must cancel")
        if sum(e.sign for e in self.events if e.kind == "S"):
            raise InvalidBandWord("ThroughSigma signs must cancel (zero linking with c)")

    @classmethod
    def parse(cls, text: str, epsilon: int = -1) -> "BandWord":
        body = [ln.split("#", 1)[0] for ln in text.splitlines()]
        return cls(tuple(_parse_token(t) for t in " ".join(body).split()), epsilon)

    @classmethod
    def from_tokens(cls, tokens: Iterable[str], epsilon: int = -1) -> "BandWord":
        return cls(tuple(_parse_token(t) for t in tokens), epsilon)

    def to_text(self) -> str:
        return " ".join(e.token for e in self.events)

    def to_json(self) -> str:
        return json.dumps({"events": [e.token for e in self.events], "epsilon": self.epsilon})

    @classmethod
    def from_json(cls, text: str) -> "BandWord":
        obj = json.loads(text)
        return cls.from_tokens(obj["events"], obj.get("epsilon", -1))

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(e.token for e in self.events)

    @property
    def delta(self) -> int:
        return sum(e.kind == "A" for e in self.events) // 2

    @property
    def sigma(self) -> int:
        return sum(e.kind == "S" for e in self.events) // 2

    @property
    def twists(self) -> int:
        return sum(e.sign for e in self.events if e.kind == "X")

    def without_twists(self) -> "BandWord":
        return BandWord(tuple(e for e in self.events if e.kind != "X"), self.epsilon)

    def __str__(self) -> str:
        return self.to_text()


SEED_WORDS = {
    "unknot": BandWord(),
    "neg_trefoil": BandWord.from_tokens(["X+"]),
    "8_20": BandWord.from_tokens(["A+", "A-"]),
}


@dataclass(frozen=True)
class Arc:
    kind: tuple[int, int]
    sigma: tuple[int, ...] = ()

    @property
    def label(self) -> str:
        return "(" + "".join("+" if s > 0 else "-" for s in self.kind) + ")"


@dataclass(frozen=True)
class ArcWord:
    """Cyclic punctures of the shrunk disk by ``c``; ``arcs[i]`` joins puncture ``i`` to ``i+1``.

    Puncture 0 is ``p_*`` and the last puncture is ``p_*'``.
    """

    punctures: tuple[int, ...]
    arcs: tuple[Arc, ...]

    def count(self, kind: tuple[int, int]) -> int:
        return sum(a.kind == kind for a in self.arcs)


def derive_arc_word(bw: BandWord) -> ArcWord:
    punctures = [-1]
    sigma: list[list[int]] = [[]]
    for e in bw.events:
        if e.kind == "A":
            punctures.append(-e.sign)
            sigma.append([])
        elif e.kind == "S":
            sigma[-1].append(e.sign)
    punctures.append(1)
    sigma.append([])  # the arc from p_*' back to p_* meets no band event
    m = len(punctures)
    arcs = tuple(Arc((punctures[i], punctures[(i + 1) % m]), tuple(sigma[i])) for i in range(m))
    return ArcWord(tuple(punctures), arcs)


@dataclass(frozen=True)
class GoodnessReport:
    is_simple: bool
    is_good: bool
    violated_conditions: frozenset[int] = field(default_factory=frozenset)
    delta: int = 0
    sigma: int = 0


def check_good(bw: BandWord) -> GoodnessReport:
    aw = derive_arc_word(bw)
    violated = set()
    if aw.count((1, -1)) != 1:
        violated.add(1)
    for arc in aw.arcs:
        if any(arc.kind != (s, s) for s in arc.sigma):
            violated.add(2)
    if bw.delta < 1:
        violated.add(3)
    # the alphabet has no event for entering the inner disk, so every word is simple
    return GoodnessReport(True, not violated, frozenset(violated), bw.delta, bw.sigma)


def predicted_degree(bw: BandWord) -> int:
    report = check_good(bw)
    if not report.is_good:
        raise NotGood(f"conditions {sorted(report.violated_conditions)} fail")
    return derive_arc_word(bw).count((1, 1)) + 1


def _arc_positions(events: Sequence[Event]) -> list[int]:
    """Arc index of every event position (A events belong to the arc they open)."""
    out, arc = [], 0
    for e in events:
        if e.kind == "A":
            arc += 1
        out.append(arc)
    return out


def normalize(bw: BandWord) -> BandWord:
    """Slide misplaced Sigma passes onto a neighbouring arc of matching type; twists go first.

    A pass with sign ``s`` on an arc not of type ``(s s)`` moves across one
    ribbon puncture (never across ``p_*`` or ``p_*'``) when the arc on the
    other side has type ``(s s)``.  Full twists of the band slide freely
    along it, so they are collected at the start.
    """
    twists = [e for e in bw.events if e.kind == "X"]
    events = [e for e in bw.events if e.kind != "X"]
    changed = True
    while changed:
        changed = False
        aw = derive_arc_word(BandWord(tuple(events), bw.epsilon))
        where = _arc_positions(events)
        last_arc = len(aw.arcs) - 2
        for i, e in enumerate(events):
            if e.kind != "S":
                continue
            k = where[i]
            if aw.arcs[k].kind == (e.sign, e.sign):
                continue
            if k > 0 and aw.arcs[k - 1].kind == (e.sign, e.sign):
                j = max(p for p in range(i) if events[p].kind == "A")
                events.insert(j, events.pop(i))
                changed = True
                break
            if k < last_arc and aw.arcs[k + 1].kind == (e.sign, e.sign):
                j = min(p for p in range(i + 1, len(events)) if events[p].kind == "A")
                events.insert(j, events.pop(i))
                changed = True
                break
    return BandWord(tuple(twists + events), bw.epsilon)


# --- realization -----------------------------------------------------------

# Band cores as (r, theta, z) waypoints from O to I.
TRIVIAL_CORE = ((3.0, np.pi, 0.0), (3.0, np.pi, 0.5), (1.0, np.pi, 0.5), (1.0, np.pi, 0.0))
RIBBON_CORE = (
    (3.0, 2.12676, 0.0),
    (3.0, 2.12676, 0.4),
    (3.42847, 3.49572, 2.92594),
    (2.55768, 3.38453, -0.53627),
    (3.49035, 1.06888, -1.50848),
    (5.62145, 3.01538, -0.00852),
    (1.0, 2.07868, 0.4),
    (1.0, 2.07868, 0.0),
)
SEED_CORES = {(): TRIVIAL_CORE, ("A+", "A-"): RIBBON_CORE}

SHEAR_HEIGHT = 0.1
TN_THETA = 0.12
TN_WIDTH = 0.05
TN_RADIUS = 1.6
C_ANGLES = (0.0, -0.03, 0.03, -0.06, 0.06, -0.09, 0.09, -0.15, 0.15)


@dataclass(frozen=True, eq=False)
class Presentation:
    """A band word with a spatial model of its knot before ``c`` is blown down."""

    word: BandWord
    points: np.ndarray
    annulus_twists: int = 0

    def c_curve(self, theta: float = 0.0) -> spatial.SpaceCurve:
        return spatial.SpaceCurve(
            spatial.meridian_circle(theta, spatial.C_RADIUS, n=160), "SurgeryCurve", Fraction(self.word.epsilon), "c"
        )

    def knot_curve(self) -> spatial.SpaceCurve:
        return spatial.SpaceCurve(self.points, "Knot", None, "K")

    def pre_diagram(self, theta: float = 0.0) -> PlanarDiagram:
        """Diagram of ``K`` together with ``c``; the site ``c`` lists the edges of ``c``."""
        d = spatial.project([self.knot_curve(), self.c_curve(theta)])
        return d.with_site("c", d.components[1].arcs)

    def c_positions(self) -> Iterable[float]:
        """Angles to which ``c`` can be turned without meeting ``K``."""
        for theta in C_ANGLES:
            if spatial.sweep_is_clear(self.points, 0.0, theta, spatial.C_RADIUS):
                yield theta

    def knot_diagram(self) -> PlanarDiagram:
        for theta in self.c_positions():
            try:
                return blow_down(self.pre_diagram(theta), "c")
            except NotBlowDownable:
                continue
        raise UnsupportedWord("no position of c encircles a clean bundle")


def seed_presentation(core: tuple[str, ...], twists: int = 0) -> Presentation:
    if core not in SEED_CORES:
        raise UnsupportedWord(f"no seed band for {' '.join(core) or '(empty)'}")
    pts = spatial.resample(spatial.band_knot(SEED_CORES[core], twists=twists))
    word = BandWord.from_tokens(["X+" if twists > 0 else "X-"] * abs(twists) + list(core))
    return Presentation(word, pts)


def find_derivation(bw: BandWord) -> tuple[tuple[str, ...], list[tuple[str, int]]]:
    """Seed core and operations ``[("A", 0) | ("T", n)]`` producing ``bw`` (twists ignored)."""
    from .ops import _annulus_twist_events, _tn_events

    target = tuple(e for e in bw.events if e.kind != "X")
    for seed in SEED_CORES:
        start = tuple(_parse_token(t) for t in seed)
        queue = deque([(start, [])])
        seen = {start}
        while queue:
            word, ops = queue.popleft()
            if word == target:
                return seed, ops
            moves = [(("A", 0), _annulus_twist_events(word))]
            n_s = sum(e.kind == "S" for e in word)
            if n_s:
                room = (len(target) - len(word)) // n_s
                moves += [(("T", n), _tn_events(word, n)) for n in range(1, room + 1)]
            for op, nxt in moves:
                if nxt != word and len(nxt) <= len(target) and nxt not in seen:
                    seen.add(nxt)
                    queue.append((nxt, ops + [op]))
    raise UnsupportedWord(f"{bw.to_text() or '(empty)'} is not derived from a seed band")


def apply_spatial(pres: Presentation, op: tuple[str, int], word: BandWord) -> Presentation:
    """One operation on the spatial model: ``("A", 0)`` or ``("T", n)``."""
    kind, n = op
    if kind == "A":
        h = SHEAR_HEIGHT / (pres.annulus_twists + 1)
        return Presentation(word, spatial.annulus_shear(pres.points, h), pres.annulus_twists + 1)
    pts = spatial.meridional_twist(pres.points, -n, TN_THETA, TN_WIDTH, TN_RADIUS)
    return Presentation(word, pts, pres.annulus_twists)


def presentation(bw: BandWord) -> Presentation:
    """Spatial presentation of a realizable word with ``epsilon = -1``."""
    from .ops import _annulus_twist_events, _tn_events

    if bw.epsilon != -1:
        raise UnsupportedWord("spatial presentations use epsilon = -1; mirror the word instead")
    seed, ops = find_derivation(bw)
    pres = seed_presentation(seed, bw.twists)
    events = pres.word.events
    for op in ops:
        events = _annulus_twist_events(events) if op[0] == "A" else _tn_events(events, op[1])
        pres = apply_spatial(pres, op, BandWord(events))
    return Presentation(normalize(bw), pres.points, pres.annulus_twists)


def realize_diagram(bw: BandWord) -> PlanarDiagram:
    """Diagram of the knot presented by ``bw`` (``c`` blown down).

    Twist tokens may sit anywhere; only their total counts.  A word with
    ``epsilon = +1`` is realized as the mirror of its sign-reversed word.
    """
    if bw.epsilon == 1:
        return mirror(realize_diagram(BandWord(tuple(-e for e in bw.events), -1)))
    return presentation(bw).knot_diagram()
