"""Regenerate the Kirby move scripts shipped in ``annulus_kit/scripts``."""

from pathlib import Path

from annulus_kit.annulus import SEED_WORDS, presentation
from annulus_kit.kirby import lemma_script
from annulus_kit.ops import apply_star_n, star_n_script

OUT = Path(__file__).resolve().parents[1] / "src" / "annulus_kit" / "scripts"


def build() -> dict[str, str]:
    seed = SEED_WORDS["8_20"]
    scripts = {f"lemma_n{n}.json": lemma_script(n) for n in range(1, 6)}
    for n in (1, 2):
        scripts[f"star_8_20_n{n}.json"] = star_n_script(presentation(seed), n)
    scripts["star_j1_n1.json"] = star_n_script(presentation(apply_star_n(seed, 1)), 1)
    return {name: s.dumps() + "\n" for name, s in scripts.items()}


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    for name, text in build().items():
        (OUT / name).write_text(text)
        print(name)
