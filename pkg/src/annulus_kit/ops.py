"""The operations (A), (T_n) and (*n) on band words and on spatial presentations.

Word rewrites, applied event by event:

* (A): ``A+ -> S- A+`` and ``A- -> A- S+``.  Every ribbon pass is dragged
  once around the annulus and so through ``Sigma``.
* (T_n), ``n >= 0``: ``S- -> S- (A+)^n`` and ``S+ -> (A-)^n S+``.  Every
  pass through ``Sigma`` is wound ``n`` times around ``O``.  For ``n < 0`` the
  windings go the other way and the inserted passes are ``A-`` and ``A+``.
* (*n) = (T_n) after (A).

New events sit next to the event they come from, so the new punctures land
on arcs of the matching type.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import spatial
from .annulus import (
    TN_RADIUS,
    TN_THETA,
    BandWord,
    Event,
    Presentation,
    apply_spatial,
)
from .diagram import PlanarDiagram, linking_number
from .errors import NotBlowDownable, NotSimple, ScriptError, UnsupportedWord
from .kirby import KirbyMove, MoveScript, replay

__all__ = [
    "StarNParams",
    "DeltaSigma",
    "apply_annulus_twist",
    "apply_tn",
    "apply_star_n",
    "delta_sigma_step",
    "counts",
    "random_realizable_word",
    "annulus_twist_presentation",
    "tn_presentation",
    "star_n_presentation",
    "star_n_script",
    "star_n_diagram",
]

T_ANGLES = (TN_THETA, TN_THETA + 0.04, TN_THETA - 0.04, TN_THETA + 0.08)


@dataclass(frozen=True)
class StarNParams:
    n: int


@dataclass(frozen=True)
class DeltaSigma:
    delta: int
    sigma: int

    def __post_init__(self):
        if self.delta < 0 or self.sigma < 0:
            raise ValueError("delta and sigma are nonnegative")


def counts(bw: BandWord) -> DeltaSigma:
    return DeltaSigma(bw.delta, bw.sigma)


def _annulus_twist_events(events: Sequence[Event]) -> tuple[Event, ...]:
    out: list[Event] = []
    for e in events:
        if e.kind == "A" and e.sign > 0:
            out += [Event("S", -1), e]
        elif e.kind == "A":
            out += [e, Event("S", 1)]
        else:
            out.append(e)
    return tuple(out)


def _tn_events(events: Sequence[Event], n: int) -> tuple[Event, ...]:
    k, s = abs(n), 1 if n >= 0 else -1
    out: list[Event] = []
    for e in events:
        if e.kind == "S" and e.sign < 0:
            out += [e] + [Event("A", s)] * k
        elif e.kind == "S":
            out += [Event("A", -s)] * k + [e]
        else:
            out.append(e)
    return tuple(out)


def _require_simple(bw: BandWord) -> None:
    # every word over the alphabet is simple; kept as the single place to tighten the check
    if any(e.kind not in "ASX" for e in bw.events):
        raise NotSimple("band enters the inner disk")


def apply_annulus_twist(bw: BandWord) -> BandWord:
    _require_simple(bw)
    return BandWord(_annulus_twist_events(bw.events), bw.epsilon)


def apply_tn(bw: BandWord, n: int) -> BandWord:
    _require_simple(bw)
    return BandWord(_tn_events(bw.events, n), bw.epsilon)


def apply_star_n(bw: BandWord, n: int) -> BandWord:
    return apply_tn(apply_annulus_twist(bw), n)


def random_realizable_word(rng: random.Random, max_events: int = 16, max_twists: int = 4) -> BandWord:
    """A word built from the ribbon seed by random (A) and (T_n), ``n`` in 1..3, plus random band twists.

    Every word this returns can be realized by :func:`annulus.realize_diagram`.
    """
    events = BandWord.parse("A+ A-").events
    while rng.random() < 0.75:
        n = rng.choice((0, 1, 2, 3))
        nxt = _annulus_twist_events(events) if n == 0 else _tn_events(events, n)
        if len(nxt) > max_events:
            break
        events = nxt
    m = rng.randint(-max_twists, max_twists)
    return BandWord((Event("X", 1 if m > 0 else -1),) * abs(m) + events)


def delta_sigma_step(ds: DeltaSigma, n: int) -> DeltaSigma:
    return DeltaSigma((n + 1) * ds.delta + n * ds.sigma, ds.delta + ds.sigma)


# --- spatial layer ------------------------------------------------------------


def annulus_twist_presentation(pres: Presentation) -> Presentation:
    return apply_spatial(pres, ("A", 0), apply_annulus_twist(pres.word))


def tn_presentation(pres: Presentation, n: int) -> Presentation:
    return apply_spatial(pres, ("T", n), apply_tn(pres.word, n))


def star_n_presentation(pres: Presentation, n: int) -> Presentation:
    return tn_presentation(annulus_twist_presentation(pres), n)


def star_n_script(pres: Presentation, n: int, framing: int | None = None) -> MoveScript:
    """Kirby script for (*n) applied to ``pres``.

    (A) acts on the spatial model.  The ``-1/n``-framed circle ``t`` is then
    drawn around ``O`` next to ``c``, the three curves are projected, and the
    moves remove ``t`` and ``c`` by ``rational_blow_down`` and ``blow_down``.
    The knot starts with the framing that the moves turn into ``framing``
    (default ``n``).  For ``n = 0`` no ``t`` is drawn.
    """
    twisted = annulus_twist_presentation(pres)
    framing = n if framing is None else framing
    angles = T_ANGLES if n else (None,)
    for theta_t in angles:
        curves = [twisted.knot_curve()]
        moves = [KirbyMove("blow_down", {"component": "c"}), KirbyMove("normalize")]
        if theta_t is not None:
            if not spatial.sweep_is_clear(twisted.points, TN_THETA, theta_t, TN_RADIUS):
                continue
            circle = spatial.meridian_circle(theta_t, TN_RADIUS)
            curves.append(spatial.SpaceCurve(circle, "SurgeryCurve", Fraction(-1, n), "t"))
            moves.insert(0, KirbyMove("rational_blow_down", {"component": "t"}))
        for theta_c in twisted.c_positions():
            d = spatial.project(curves[:1] + [twisted.c_curve(theta_c)] + curves[1:])
            # blowing down a -1/m curve adds m*lk^2 to the knot framing
            shift = sum(linking_number(d, 0, j) ** 2 * (-1 / d.components[j].framing) for j in range(1, len(d.components)))
            d = d.reframe(0, framing - shift)
            final = {len(moves): {"linking": [[str(framing)]]}}
            script = MoveScript(d, tuple(moves), final, f"(*{n}) on {pres.word.to_text() or '(empty)'}")
            try:
                replay(script)
            except ScriptError as exc:
                if isinstance(exc.__cause__, NotBlowDownable):
                    continue
                raise
            return script
    raise UnsupportedWord("no clean position for the surgery curves")


def star_n_diagram(pres: Presentation, n: int) -> PlanarDiagram:
    """Knot diagram of (*n) applied to ``pres``, finishing with Kirby moves."""
    final, _ = replay(star_n_script(pres, n))
    return final.reframe(0, None)
