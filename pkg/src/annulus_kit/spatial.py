"""Polygonal curves in R^3: planar projection to PD codes, band building and twist maps.

The standard annulus ``A`` is ``{1 <= r <= 3, z = 0}`` in cylindrical
coordinates ``(r, theta, z)``.  Its outer and inner boundary circles are
``O`` and ``I``.  The surgery curve ``c`` is the circle of radius
:data:`C_RADIUS` about ``(r, z) = (3, 0)`` in the half-plane ``theta = 0``; it
meets the plane of ``A`` at ``r = 0.7`` and ``r = 5.3``, so it links ``O``
and ``I`` once each.  ``Sigma`` is the disk bounded by ``c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .diagram import Component, PlanarDiagram

__all__ = [
    "R_OUTER",
    "R_INNER",
    "C_RADIUS",
    "SpaceCurve",
    "project",
    "cyl",
    "cyl_path",
    "band_knot",
    "resample",
    "annulus_shear",
    "meridional_twist",
    "meridian_circle",
    "sweep_is_clear",
]

R_OUTER = 3.0
R_INNER = 1.0
C_RADIUS = 2.3
TILT = (0.0123, 0.0217)


@dataclass(frozen=True)
class SpaceCurve:
    """A closed polygon (``points`` is ``N x 3``; the last point joins the first)."""

    points: np.ndarray
    role: str = "Knot"
    framing: Fraction | None = None
    name: str | None = None


def project(curves: Sequence[SpaceCurve], tilt: tuple[float, float] = TILT) -> PlanarDiagram:
    """Project along ``(-a, -b, 1)`` onto the ``xy``-plane and read off a PD code.

    Height is ``z``.  Edges are numbered component by component in traversal
    order.  Raises ``ValueError`` on a degenerate crossing (equal heights).
    """
    a, b = tilt
    p0, p1, z0, z1, comp, seg = [], [], [], [], [], []
    for ci, cv in enumerate(curves):
        p = np.asarray(cv.points, float)
        q = np.roll(p, -1, axis=0)
        p0.append(np.stack([p[:, 0] + a * p[:, 2], p[:, 1] + b * p[:, 2]], 1))
        p1.append(np.stack([q[:, 0] + a * q[:, 2], q[:, 1] + b * q[:, 2]], 1))
        z0.append(p[:, 2])
        z1.append(q[:, 2])
        comp.append(np.full(len(p), ci))
        seg.append(np.arange(len(p)))
    P0, P1 = np.concatenate(p0), np.concatenate(p1)
    Z0, Z1 = np.concatenate(z0), np.concatenate(z1)
    CI, SI = np.concatenate(comp), np.concatenate(seg)
    sizes = np.array([len(cv.points) for cv in curves])
    lo, hi = np.minimum(P0, P1), np.maximum(P0, P1)
    D = P1 - P0
    order = np.argsort(lo[:, 0])
    lo_sorted = lo[order, 0]
    events: list[list[tuple[int, float, int, bool]]] = [[] for _ in curves]
    xings: list[tuple[int, int]] = []  # (under segment, over segment)
    for ii, i in enumerate(order):
        end = np.searchsorted(lo_sorted, hi[i, 0], side="right")
        js = order[ii + 1 : end]
        js = js[(lo[js, 1] <= hi[i, 1]) & (hi[js, 1] >= lo[i, 1])]
        if len(js) == 0:
            continue
        n = sizes[CI[js]]
        adjacent = (CI[js] == CI[i]) & (((SI[js] - SI[i]) % n == 1) | ((SI[i] - SI[js]) % n == 1))
        js = js[~adjacent]
        if len(js) == 0:
            continue
        d2 = D[js]
        den = D[i, 0] * d2[:, 1] - D[i, 1] * d2[:, 0]
        w = P0[js] - P0[i]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (w[:, 0] * d2[:, 1] - w[:, 1] * d2[:, 0]) / den
            s = (w[:, 0] * D[i, 1] - w[:, 1] * D[i, 0]) / den
        ok = (den != 0) & (t > 0) & (t < 1) & (s > 0) & (s < 1)
        for j, tt, ss in zip(js[ok], t[ok], s[ok]):
            zi = Z0[i] + tt * (Z1[i] - Z0[i])
            zj = Z0[j] + ss * (Z1[j] - Z0[j])
            if abs(zi - zj) < 1e-12:
                raise ValueError("degenerate crossing in projection")
            k = len(xings)
            xings.append((i, j) if zi < zj else (j, i))
            events[CI[i]].append((SI[i], tt, k, zi < zj))
            events[CI[j]].append((SI[j], ss, k, zj < zi))
    label = 1
    incoming: dict[tuple[int, bool], int] = {}
    outgoing: dict[tuple[int, bool], int] = {}
    comps = []
    for ci, cv in enumerate(curves):
        ev = sorted(events[ci])
        m = max(1, len(ev))
        labels = list(range(label, label + m))
        label += m
        for e, (_, _, k, under) in enumerate(ev):
            incoming[(k, under)] = labels[e - 1]
            outgoing[(k, under)] = labels[e]
        comps.append(Component(arcs=tuple(labels), role=cv.role, framing=cv.framing, name=cv.name))
    quads, signs = [], []
    for k, (ui, oi) in enumerate(xings):
        u, v = D[ui], D[oi]
        a_in, a_out = incoming[(k, True)], outgoing[(k, True)]
        b_in, b_out = incoming[(k, False)], outgoing[(k, False)]
        if -u[0] * v[1] + u[1] * v[0] > 0:
            quads.append((a_in, b_out, a_out, b_in))
            signs.append(1)
        else:
            quads.append((a_in, b_in, a_out, b_out))
            signs.append(-1)
    return PlanarDiagram.from_pd(quads, components=comps, signs=signs)


def cyl(r: float, theta: float, z: float) -> np.ndarray:
    return np.array([r * np.cos(theta), r * np.sin(theta), z])


def cyl_path(waypoints: Sequence[tuple[float, float, float]], step: float = 0.04) -> np.ndarray:
    """Open polygon through ``(r, theta, z)`` waypoints, linear in cylindrical coordinates."""
    out = []
    for (r0, t0, z0), (r1, t1, z1) in zip(waypoints[:-1], waypoints[1:]):
        length = np.hypot(r1 - r0, z1 - z0) + max(r0, r1) * abs(t1 - t0)
        n = max(2, int(np.ceil(length / step)))
        for i in range(n):
            f = i / n
            out.append(cyl(r0 + (r1 - r0) * f, t0 + (t1 - t0) * f, z0 + (z1 - z0) * f))
    out.append(cyl(*waypoints[-1]))
    return np.array(out)


def _rotation_minimising_frame(core: np.ndarray, w0: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # double reflection method
    T = np.gradient(core, axis=0)
    T /= np.linalg.norm(T, axis=1)[:, None]
    W = [w0 - (w0 @ T[0]) * T[0]]
    W[0] = W[0] / np.linalg.norm(W[0])
    for i in range(len(core) - 1):
        v1 = core[i + 1] - core[i]
        c1 = v1 @ v1
        r_l = W[i] - (2 / c1) * (v1 @ W[i]) * v1
        t_l = T[i] - (2 / c1) * (v1 @ T[i]) * v1
        v2 = T[i + 1] - t_l
        c2 = v2 @ v2
        r = r_l - (2 / c2) * (v2 @ r_l) * v2 if c2 > 1e-15 else r_l
        r = r - (r @ T[i + 1]) * T[i + 1]
        W.append(r / np.linalg.norm(r))
    return T, np.array(W)


def band_knot(
    waypoints: Sequence[tuple[float, float, float]],
    twists: int = 0,
    width: float = 0.04,
    step: float = 0.04,
) -> np.ndarray:
    """The knot ``(dA minus the band ends) + (band edges)`` for a band along ``waypoints``.

    The core starts on ``O`` and ends on ``I``.  The ribbon is attached
    tangentially to both circles, with ``twists`` extra right-handed full
    twists spread along it.  ``O`` is traversed counterclockwise and ``I``
    clockwise, as the oriented boundary of ``A``.
    """
    core = cyl_path(waypoints, step)
    ta, te = waypoints[0][1], waypoints[-1][1]

    def e_theta(t):
        return np.array([-np.sin(t), np.cos(t), 0.0])

    T, W = _rotation_minimising_frame(core, e_theta(ta))
    target = e_theta(te)
    gap = np.arctan2(np.cross(W[-1], target) @ T[-1], W[-1] @ target)
    total = gap + 2 * np.pi * twists
    s = np.linspace(0, 1, len(core))
    W = np.cos(total * s)[:, None] * W + np.sin(total * s)[:, None] * np.cross(T, W)
    lower, upper = core - width * W, core + width * W
    t_o = np.linspace(ta + width / R_OUTER, ta - width / R_OUTER + 2 * np.pi, 300)
    t_i = np.linspace(te - width / R_INNER, te + width / R_INNER - 2 * np.pi, 100)
    o_arc = np.array([cyl(R_OUTER, t, 0.0) for t in t_o])
    i_arc = np.array([cyl(R_INNER, t, 0.0) for t in t_i])
    return np.concatenate([o_arc[:-1], lower[:-1], i_arc[:-1], upper[::-1][:-1]])


def resample(points: np.ndarray, step: float = 0.01) -> np.ndarray:
    """Closed polygon resampled at (about) uniform arc length."""
    closed = np.vstack([points, points[:1]])
    s = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(closed, axis=0), axis=1))])
    n = max(8, int(s[-1] / step))
    t = np.linspace(0.0, s[-1], n, endpoint=False)
    return np.stack([np.interp(t, s, closed[:, i]) for i in range(3)], 1)


def _refine(points: np.ndarray, active, step: float) -> np.ndarray:
    nxt = np.roll(points, -1, axis=0)
    hot = active(points) | active(nxt) | active((points + nxt) / 2)
    out = []
    for p, q, h in zip(points, nxt, hot):
        if h:
            n = max(1, int(np.ceil(np.linalg.norm(q - p) / step)))
            out.extend(p + (q - p) * (i / n) for i in range(n))
        else:
            out.append(p)
    return np.array(out)


def _smooth_step(u: np.ndarray) -> np.ndarray:
    u = np.clip((u + 1) / 2, 0.0, 1.0)
    return u * u * (3 - 2 * u)


def annulus_shear(points: np.ndarray, height: float, margin: float = 0.12, turns: int = 1) -> np.ndarray:
    """Twist along ``A``: rotate by ``2*pi*turns*g(z)`` in the slab ``|z| < height`` over ``A``.

    This is the annulus twist of the complement of two push-offs of
    ``dA`` (at ``r = 1 + margin`` and ``r = 3 - margin``); points of the
    curve must stay away from those push-offs.
    """

    def active(p):
        r = np.hypot(p[:, 0], p[:, 1])
        return (np.abs(p[:, 2]) < height) & (r > R_INNER + margin) & (r < R_OUTER - margin)

    pts = _refine(points, active, height / 400)
    hot = active(pts)
    r = np.hypot(pts[hot, 0], pts[hot, 1])
    th = np.arctan2(pts[hot, 1], pts[hot, 0]) + 2 * np.pi * turns * _smooth_step(pts[hot, 2] / height)
    pts = pts.copy()
    pts[hot, 0], pts[hot, 1] = r * np.cos(th), r * np.sin(th)
    return resample(pts)


def meridional_twist(
    points: np.ndarray,
    turns: int,
    theta0: float,
    width: float,
    radius: float,
    center: tuple[float, float] = (R_OUTER, 0.0),
) -> np.ndarray:
    """Twist along the disk of :func:`meridian_circle`: rotate ``(r, z)`` about ``center``.

    Inside the wedge ``|theta - theta0| < width`` and within ``radius`` of
    ``center`` the half-plane coordinates turn by ``2*pi*turns*g(theta)``.
    ``turns = -n`` is the blow-down of the ``-1/n``-framed circle.
    """
    r0, z0 = center

    def active(p):
        r = np.hypot(p[:, 0], p[:, 1])
        th = np.arctan2(p[:, 1], p[:, 0])
        return (np.abs(th - theta0) < width) & (np.hypot(r - r0, p[:, 2] - z0) < radius) & (p[:, 0] > 0)

    pts = _refine(points, active, width / (300 * max(1, abs(turns))))
    hot = active(pts)
    r = np.hypot(pts[hot, 0], pts[hot, 1])
    th = np.arctan2(pts[hot, 1], pts[hot, 0])
    ang = 2 * np.pi * turns * _smooth_step((th - theta0) / width)
    dr, dz = r - r0, pts[hot, 2] - z0
    nr = r0 + dr * np.cos(ang) - dz * np.sin(ang)
    nz = z0 + dr * np.sin(ang) + dz * np.cos(ang)
    pts = pts.copy()
    pts[hot, 0], pts[hot, 1], pts[hot, 2] = nr * np.cos(th), nr * np.sin(th), nz
    return resample(pts)


def meridian_circle(theta: float, radius: float, center: tuple[float, float] = (R_OUTER, 0.0), n: int = 200) -> np.ndarray:
    """Circle of the given radius about ``center`` in the half-plane at angle ``theta``."""
    s = np.linspace(0, 2 * np.pi, n, endpoint=False)
    r = center[0] + radius * np.cos(s)
    return np.stack([r * np.cos(theta), r * np.sin(theta), center[1] + radius * np.sin(s)], 1)


def sweep_is_clear(
    points: np.ndarray,
    theta_from: float,
    theta_to: float,
    radius: float,
    center: tuple[float, float] = (R_OUTER, 0.0),
    margin: float = 0.05,
) -> bool:
    """True if turning a meridian circle between the two angles never comes near the curve."""
    r = np.hypot(points[:, 0], points[:, 1])
    th = np.arctan2(points[:, 1], points[:, 0])
    lo, hi = min(theta_from, theta_to) - 0.01, max(theta_from, theta_to) + 0.01
    near = (th >= lo) & (th <= hi) & (points[:, 0] > 0)
    d = np.abs(np.hypot(r[near] - center[0], points[near, 2] - center[1]) - radius)
    return d.size == 0 or bool(d.min() > margin)
