"""Families K_0, K_1, ... obtained by iterating (*n) from a good seed."""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Sequence

from .alexinv import alexander, is_monic, signature
from .annulus import BandWord, check_good, predicted_degree, presentation
from .diagram import PlanarDiagram, mirror
from .errors import AnnulusKitError, NotGoodSeed
from .ops import apply_star_n, star_n_presentation
from .polycore import LaurentPoly, degree

__all__ = [
    "DEFAULT_CROSSING_BUDGET",
    "FamilyEntry",
    "CheckResult",
    "FamilyReport",
    "generate_family",
    "mirror_family",
    "verify_family",
    "family_to_json",
    "family_from_json",
    "family_csv",
    "CHECKS",
]

DEFAULT_CROSSING_BUDGET = 200
CHECKS = ("degrees", "match", "monic", "distinct")


@dataclass(frozen=True)
class FamilyEntry:
    i: int
    word: BandWord
    n: int
    delta: int
    sigma: int
    predicted_degree: int
    diagram: PlanarDiagram | None = None
    polynomial: LaurentPoly | None = None
    signature: int | None = None
    framing: int = 0
    mirror: bool = False
    note: str = ""

    @property
    def computed_degree(self) -> int | None:
        return None if self.polynomial is None else degree(self.polynomial)

    @property
    def crossings(self) -> int | None:
        return None if self.diagram is None else len(self.diagram.crossings)


def _invariants(d: PlanarDiagram) -> tuple[LaurentPoly, int]:
    return alexander(d), signature(d)


def _workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("ANNULUS_KIT_WORKERS", "1"))
    if workers < 1:
        raise ValueError("worker count must be at least 1")
    return workers


def _map(fn, items: Sequence, workers: int) -> list:
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def generate_family(
    seed: BandWord,
    n: int,
    iters: int,
    crossing_budget: int = DEFAULT_CROSSING_BUDGET,
    compute: bool = True,
    workers: int | None = None,
) -> list[FamilyEntry]:
    """Entries ``0..iters``; entry ``i+1`` is (*n) applied to entry ``i``.

    Words and predicted degrees are always produced.  With ``compute`` set,
    diagrams are realized while they stay within ``crossing_budget`` and
    their polynomials and signatures are computed.
    """
    if iters < 0:
        raise ValueError("iters must be nonnegative")
    if crossing_budget < 0:
        raise ValueError("crossing budget must be nonnegative")
    if not check_good(seed).is_good:
        raise NotGoodSeed(f"seed {seed.to_text() or '(empty)'} is not good")
    words = [seed]
    for _ in range(iters):
        words.append(apply_star_n(words[-1], n))

    diagrams: list[PlanarDiagram | None] = [None] * len(words)
    notes = ["" for _ in words]
    if not compute:
        notes = ["prediction only" for _ in words]
    elif seed.epsilon == -1:
        try:
            pres = presentation(seed)
        except AnnulusKitError as exc:
            pres, notes[0] = None, f"not realized: {exc}"
        for i in range(len(words)):
            if pres is None:
                break
            d = pres.knot_diagram()
            if len(d.crossings) > crossing_budget:
                notes[i] = f"over crossing budget ({len(d.crossings)} > {crossing_budget}); prediction only"
                break
            diagrams[i] = d
            if i + 1 < len(words):
                pres = star_n_presentation(pres, n)
    else:
        notes[0] = "not realized: generate with epsilon -1 and use mirror_family"
    for i in range(len(words)):
        if diagrams[i] is None and not notes[i]:
            notes[i] = "prediction only"

    invariants: list = [None] * len(words)
    idx = [i for i, d in enumerate(diagrams) if d is not None]
    for i, res in zip(idx, _map(_invariants, [diagrams[i] for i in idx], _workers(workers))):
        invariants[i] = res
    out = []
    for i, w in enumerate(words):
        poly, sig = invariants[i] if invariants[i] is not None else (None, None)
        out.append(
            FamilyEntry(i, w, n, w.delta, w.sigma, predicted_degree(w), diagrams[i], poly, sig, n, False, notes[i])
        )
    return out


def _mirror_word(w: BandWord) -> BandWord:
    return BandWord(tuple(-e for e in w.events), -w.epsilon)


def mirror_family(fam: Sequence[FamilyEntry]) -> list[FamilyEntry]:
    """Mirror images: diagrams mirrored, framing and signatures negated."""
    if not fam:
        raise ValueError("empty family")
    return [
        replace(
            e,
            word=_mirror_word(e.word),
            diagram=None if e.diagram is None else mirror(e.diagram),
            signature=None if e.signature is None else -e.signature,
            framing=-e.framing,
            mirror=not e.mirror,
        )
        for e in fam
    ]


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # PASS, FAIL or NOT APPLICABLE
    detail: str = ""
    counterexample: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class FamilyReport:
    n: int
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.status != "FAIL" for c in self.checks)

    def to_text(self) -> str:
        lines = [f"{c.name}: {c.status}" + (f" ({c.detail})" if c.detail else "") for c in self.checks]
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "status", "detail", "counterexample"])
        for c in self.checks:
            w.writerow([c.name, c.status, c.detail, json.dumps(dict(c.counterexample), sort_keys=True)])
        return buf.getvalue()


def _strictly_increasing(values: Sequence[int]) -> int | None:
    for k in range(1, len(values)):
        if values[k] <= values[k - 1]:
            return k
    return None


def verify_family(fam: Sequence[FamilyEntry], checks: Sequence[str] = CHECKS) -> FamilyReport:
    """Pass/fail for each check; failures carry the offending indices."""
    unknown = set(checks) - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown checks {sorted(unknown)}")
    n = fam[0].n if fam else 0
    preds = [e.predicted_degree for e in fam]
    results = []
    for name in checks:
        if name == "degrees":
            if n == 0:
                results.append(CheckResult(name, "NOT APPLICABLE", "n = 0: degrees do not grow under the annulus twist alone"))
                continue
            k = _strictly_increasing(preds)
            if k is None:
                results.append(CheckResult(name, "PASS", "predicted " + " < ".join(map(str, preds))))
            else:
                results.append(CheckResult(name, "FAIL", f"entry {k} does not exceed entry {k - 1}",
                                           {"i": fam[k].i, "prev": preds[k - 1], "pred_deg": preds[k]}))
        elif name == "match":
            bad = [e for e in fam if e.computed_degree is not None and e.computed_degree != e.predicted_degree]
            done = sum(e.computed_degree is not None for e in fam)
            if bad:
                e = bad[0]
                results.append(CheckResult(name, "FAIL", f"entry {e.i}: predicted {e.predicted_degree}, computed {e.computed_degree}",
                                           {"i": e.i, "pred_deg": e.predicted_degree, "comp_deg": e.computed_degree}))
            else:
                results.append(CheckResult(name, "PASS", f"{done} computed entries agree"))
        elif name == "monic":
            bad = [e for e in fam if e.polynomial is not None and not is_monic(e.polynomial)]
            if bad:
                results.append(CheckResult(name, "FAIL", f"entry {bad[0].i} is not monic",
                                           {"i": bad[0].i, "poly": str(bad[0].polynomial)}))
            else:
                results.append(CheckResult(name, "PASS"))
        else:
            if n == 0:
                results.append(CheckResult(name, "NOT APPLICABLE", "n = 0: degree chain is constant"))
                continue
            degs = [e.computed_degree if e.computed_degree is not None else e.predicted_degree for e in fam]
            seen: dict[int, int] = {}
            clash = None
            for e, dg in zip(fam, degs):
                if dg in seen:
                    clash = (seen[dg], e.i, dg)
                    break
                seen[dg] = e.i
            if clash is None and _strictly_increasing(degs) is None:
                results.append(CheckResult(name, "PASS", "strictly increasing degree chain"))
            elif clash is not None:
                results.append(CheckResult(name, "FAIL", f"entries {clash[0]} and {clash[1]} share degree {clash[2]}",
                                           {"i": clash[0], "j": clash[1], "degree": clash[2]}))
            else:
                results.append(CheckResult(name, "FAIL", "degree chain is not increasing"))
    return FamilyReport(n, tuple(results))


# --- serialization ------------------------------------------------------------


def family_to_json(fam: Sequence[FamilyEntry]) -> dict:
    return {
        "n": fam[0].n if fam else 0,
        "framing": fam[0].framing if fam else 0,
        "mirror": bool(fam and fam[0].mirror),
        "entries": [
            {
                "i": e.i,
                "word": e.word.to_text(),
                "epsilon": e.word.epsilon,
                "pd": None if e.diagram is None else e.diagram.to_pd_text(),
                "delta": e.delta,
                "sigma": e.sigma,
                "pred_deg": e.predicted_degree,
                "poly": None if e.polynomial is None else e.polynomial.to_json(),
                "signature": e.signature,
                "note": e.note,
            }
            for e in fam
        ],
    }


def family_from_json(obj: Mapping) -> list[FamilyEntry]:
    n = int(obj["n"])
    framing = int(obj.get("framing", n))
    is_mirror = bool(obj.get("mirror", False))
    out = []
    for e in obj["entries"]:
        poly = e.get("poly")
        out.append(
            FamilyEntry(
                int(e["i"]),
                BandWord.parse(e["word"], int(e.get("epsilon", -1))),
                n,
                int(e["delta"]),
                int(e["sigma"]),
                int(e["pred_deg"]),
                None if e.get("pd") is None else PlanarDiagram.from_pd_text(e["pd"]),
                None if poly is None else LaurentPoly.from_json(poly),
                e.get("signature"),
                framing,
                is_mirror,
                e.get("note", ""),
            )
        )
    return out


def family_csv(fam: Sequence[FamilyEntry]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "delta", "sigma", "pred_deg", "comp_deg"])
    for e in fam:
        w.writerow([e.i, e.delta, e.sigma, e.predicted_degree, "" if e.computed_degree is None else e.computed_degree])
    return buf.getvalue()
