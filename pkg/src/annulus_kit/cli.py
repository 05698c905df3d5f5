"""Command-line entry point ``annulus-kit``."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import __version__
from .alexinv import alexander, is_monic, signature
from .annulus import BandWord, check_good, predicted_degree, realize_diagram
from .diagram import PlanarDiagram, from_gauss, to_gauss
from .errors import AnnulusKitError, UnsupportedFormat
from .family import (
    CHECKS,
    DEFAULT_CROSSING_BUDGET,
    family_csv,
    family_from_json,
    family_to_json,
    generate_family,
    verify_family,
)
from .kirby import MoveScript, log_csv, replay
from .ops import apply_star_n, random_realizable_word
from .polycore import degree

__all__ = ["RunConfig", "main", "export", "import_text", "FORMATS"]

PACKAGE_DIR = Path(__file__).resolve().parent
FORMATS = ("pd", "gauss", "bw", "json", "csv")
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...] = ()
    n: int = 1
    iters: int = 0
    crossing_budget: int = DEFAULT_CROSSING_BUDGET
    workers: int = 1
    output_format: str = "json"
    random_seed: int = 0

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("worker count must be at least 1")
        if self.crossing_budget < 0:
            raise ValueError("crossing budget must be nonnegative")


class InputError(Exception):
    pass


# --- formats ------------------------------------------------------------------


def export(obj, fmt: str) -> str:
    """Text form of a diagram, band word or family in ``fmt``."""
    if isinstance(obj, PlanarDiagram):
        if fmt == "pd":
            return obj.to_pd_text()
        if fmt == "gauss":
            return to_gauss(obj) + "\n"
        if fmt == "json":
            return obj.dumps() + "\n"
    elif isinstance(obj, BandWord):
        if fmt == "bw":
            return obj.to_text() + "\n"
        if fmt == "json":
            return obj.to_json() + "\n"
    elif isinstance(obj, list):
        if fmt == "json":
            return json.dumps(family_to_json(obj), indent=1, sort_keys=True) + "\n"
        if fmt == "csv":
            return family_csv(obj)
    raise UnsupportedFormat(f"cannot export {type(obj).__name__} as {fmt}")


def import_text(text: str, fmt: str):
    """Inverse of :func:`export`; JSON input may hold a diagram, a band word or a family."""
    if fmt == "pd":
        return PlanarDiagram.from_pd_text(text)
    if fmt == "gauss":
        return from_gauss(text.strip())
    if fmt == "bw":
        return BandWord.parse(text)
    if fmt == "json":
        obj = json.loads(text)
        if "entries" in obj:
            return family_from_json(obj)
        if "events" in obj:
            return BandWord.from_json(text)
        return PlanarDiagram.from_json(obj)
    raise UnsupportedFormat(f"cannot import {fmt}")


def _format_of(path: str, given: str | None) -> str:
    if given:
        return given
    ext = Path(path).suffix.lstrip(".")
    return {"gc": "gauss", "txt": "pd"}.get(ext, ext)


# --- helpers ------------------------------------------------------------------


def _resolve(path: str, packaged: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    alt = PACKAGE_DIR / packaged / p.name
    if alt.exists():
        return alt
    raise InputError(f"{path}: no such file")


def _read(path: str, packaged: str = "") -> tuple[str, str]:
    p = _resolve(path, packaged) if packaged else Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    return data.decode(), hashlib.sha256(data).hexdigest()


def _provenance(digest: str) -> dict:
    return {"tool": "annulus-kit", "version": __version__, "input_sha256": digest}


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    return int(os.environ.get("ANNULUS_KIT_WORKERS", "1"))


def _load_word(args) -> tuple[BandWord, str]:
    if args.word:
        text, digest = _read(args.word, "seeds")
    elif args.tokens is not None:
        text = args.tokens
        digest = hashlib.sha256(text.encode()).hexdigest()
    else:
        raise InputError("give --word FILE or --tokens TEXT")
    return BandWord.parse(text, args.epsilon), digest


def _invariants(d: PlanarDiagram) -> dict:
    poly = alexander(d)
    return {
        "crossings": len(d.crossings),
        "alexander": str(poly),
        "degree": degree(poly),
        "monic": is_monic(poly),
        "signature": signature(d),
    }


# --- verbs --------------------------------------------------------------------


def cmd_gen(args) -> int:
    text, digest = _read(args.seed, "seeds")
    seed = BandWord.parse(text, args.epsilon)
    cfg = RunConfig("gen", (args.seed,), args.n, args.iters, args.budget, _workers(args))
    fam = generate_family(seed, cfg.n, cfg.iters, cfg.crossing_budget, not args.no_compute, cfg.workers)
    out = family_to_json(fam)
    out["provenance"] = _provenance(digest)
    _write(args.out, _dump(out))
    return EXIT_OK


def cmd_verify(args) -> int:
    text, digest = _read(args.family)
    fam = family_from_json(json.loads(text))
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    report = verify_family(fam, checks)
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
    if args.format == "json":
        body = {
            "ok": report.ok,
            "n": report.n,
            "checks": [{"name": c.name, "status": c.status, "detail": c.detail,
                        "counterexample": dict(c.counterexample)} for c in report.checks],
            "provenance": _provenance(digest),
        }
        sys.stdout.write(_dump(body))
    else:
        sys.stdout.write(report.to_text())
        sys.stdout.write(f"version {__version__}, input sha256 {digest}\n")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_inv(args) -> int:
    if args.pd:
        text, digest = _read(args.pd)
        d = PlanarDiagram.from_pd_text(text)
    elif args.gauss:
        text, digest = _read(args.gauss)
        d = from_gauss(text.strip())
    else:
        word, digest = _load_word(args)
        d = realize_diagram(word)
    body = _invariants(d)
    wanted = [k for k, flag in (("alexander", args.alexander), ("signature", args.signature)) if flag]
    if wanted:
        drop = {"alexander", "degree", "monic", "signature"} - set(wanted)
        if args.alexander:
            drop -= {"degree", "monic"}
        body = {k: v for k, v in body.items() if k not in drop}
    if args.json or args.format == "json":
        body["provenance"] = _provenance(digest)
        sys.stdout.write(_dump(body))
    else:
        for k, v in body.items():
            sys.stdout.write(f"{k}: {v}\n")
    return EXIT_OK


def cmd_star_n(args) -> int:
    word, digest = _load_word(args)
    if args.iters < 1:
        raise InputError("--iters must be at least 1")
    steps = []
    for _ in range(args.iters):
        word = apply_star_n(word, args.n)
        rep = check_good(word)
        rec = {
            "word": word.to_text(),
            "epsilon": word.epsilon,
            "delta": word.delta,
            "sigma": word.sigma,
            "good": rep.is_good,
            "pred_deg": predicted_degree(word) if rep.is_good else None,
        }
        if args.emit == "diagrams":
            d = realize_diagram(word)
            rec["pd"] = d.to_pd_text()
            rec.update(_invariants(d))
        steps.append(rec)
    if args.format == "bw":
        sys.stdout.write("".join(r["word"] + "\n" for r in steps))
    else:
        sys.stdout.write(_dump({"n": args.n, "steps": steps, "provenance": _provenance(digest)}))
    return EXIT_OK


def cmd_corpus(args) -> int:
    rng = random.Random(args.random_seed)
    for _ in range(args.count):
        sys.stdout.write(random_realizable_word(rng).to_text() + "\n")
    return EXIT_OK


def cmd_replay(args) -> int:
    text, digest = _read(args.script, "scripts")
    final, log = replay(MoveScript.loads(text))
    if args.log:
        Path(args.log).write_text(log_csv(log))
    sys.stdout.write(f"{len(log) - 1} moves replayed; h1_order {log[-1].h1}; final linking {log[-1].linking}\n")
    if args.out:
        Path(args.out).write_text(final.to_pd_text())
    return EXIT_OK


def cmd_export(args) -> int:
    text, _ = _read(args.input)
    obj = import_text(text, _format_of(args.input, args.source))
    _write(args.out, export(obj, args.to))
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def _word_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--word", help="band word file")
    p.add_argument("--tokens", help="band word as text, e.g. 'A+ A-'")
    p.add_argument("--epsilon", type=int, default=-1, choices=(-1, 1))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="annulus-kit", description="Annulus twists, Kirby moves and Alexander polynomials.")
    ap.add_argument("--version", action="version", version=f"annulus-kit {__version__}")
    sub = ap.add_subparsers(dest="verb", required=True)

    g = sub.add_parser("gen", help="generate a (*n) family from a seed word")
    g.add_argument("--seed", required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--iters", type=int, default=2)
    g.add_argument("--budget", type=int, default=DEFAULT_CROSSING_BUDGET, help="crossing budget for computed entries")
    g.add_argument("--workers", type=int)
    g.add_argument("--epsilon", type=int, default=-1, choices=(-1, 1))
    g.add_argument("--no-compute", action="store_true", help="predictions only")
    g.add_argument("--out", default="family.json")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check a family file")
    v.add_argument("--family", required=True)
    v.add_argument("--checks", default=",".join(CHECKS))
    v.add_argument("--csv")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("inv", help="invariants of a diagram or band word")
    i.add_argument("--pd")
    i.add_argument("--gauss")
    _word_args(i)
    i.add_argument("--alexander", action="store_true", help="report the Alexander polynomial")
    i.add_argument("--signature", action="store_true", help="report the signature")
    i.add_argument("--json", action="store_true", help="same as --format json")
    i.add_argument("--format", choices=("text", "json"), default="text")
    i.set_defaults(func=cmd_inv)

    o = sub.add_parser("ops", help="operations on band words")
    osub = o.add_subparsers(dest="op", required=True)
    s = osub.add_parser("star-n", help="apply (*n)")
    _word_args(s)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--iters", type=int, default=1)
    s.add_argument("--emit", choices=("words", "diagrams"), default="words")
    s.add_argument("--format", choices=("json", "bw"), default="json")
    s.set_defaults(func=cmd_star_n)
    c = osub.add_parser("corpus", help="random realizable words")
    c.add_argument("--count", type=int, default=10)
    c.add_argument("--random-seed", type=int, default=0)
    c.set_defaults(func=cmd_corpus)

    k = sub.add_parser("kirby", help="Kirby move scripts")
    ksub = k.add_subparsers(dest="op", required=True)
    r = ksub.add_parser("replay", help="replay a move script")
    r.add_argument("--script", required=True)
    r.add_argument("--log")
    r.add_argument("--out", help="write the final diagram as PD text")
    r.set_defaults(func=cmd_replay)

    e = sub.add_parser("export", help="convert between formats")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--from", dest="source", choices=FORMATS)
    e.add_argument("--to", required=True, choices=FORMATS)
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, AnnulusKitError, ValueError, KeyError) as exc:
        print(f"annulus-kit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
