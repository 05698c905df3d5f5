import random

from annulus_kit.annulus import BandWord, Event, ThroughA


def random_word(rng: random.Random, pairs: int | None = None) -> BandWord:
    """Any valid word: balanced ribbon and Sigma passes with twists, all scattered."""
    k = rng.randint(0, 6) if pairs is None else pairs
    events = [ThroughA(1)] * k + [ThroughA(-1)] * k
    rng.shuffle(events)
    for _ in range(rng.randint(0, 4)):
        for sign in (1, -1):
            events.insert(rng.randint(0, len(events)), Event("S", sign))
    for _ in range(rng.randint(0, 3)):
        events.insert(rng.randint(0, len(events)), Event("X", rng.choice((1, -1))))
    return BandWord(tuple(events))
