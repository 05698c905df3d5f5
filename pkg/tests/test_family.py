import json
import random
from dataclasses import replace

import pytest

from annulus_kit.alexinv import alexander
from annulus_kit.annulus import SEED_WORDS
from annulus_kit.errors import NotGoodSeed
from annulus_kit.family import (
    family_csv,
    family_from_json,
    family_to_json,
    generate_family,
    mirror_family,
    verify_family,
)
from annulus_kit.ops import random_realizable_word
from annulus_kit.polycore import LaurentPoly

SEED = SEED_WORDS["8_20"]


@pytest.fixture(scope="module")
def fam1():
    return generate_family(SEED, 1, 2)


def test_predicted_degrees_n1():
    fam = generate_family(SEED, 1, 4, compute=False)
    assert [e.predicted_degree for e in fam] == [2, 3, 6, 14, 35]
    assert [(e.delta, e.sigma) for e in fam] == [(1, 0), (2, 1), (5, 3), (13, 8), (34, 21)]


def test_predicted_degrees_n2():
    fam = generate_family(SEED, 2, 3, compute=False)
    assert [e.predicted_degree for e in fam] == [2, 4, 12, 42]


def test_zero_iterations_gives_seed_only():
    fam = generate_family(SEED, 3, 0, compute=False)
    assert len(fam) == 1 and fam[0].word == SEED


def test_seed_must_be_good():
    with pytest.raises(NotGoodSeed):
        generate_family(SEED_WORDS["unknot"], 1, 2)


def test_negative_iterations_rejected():
    with pytest.raises(ValueError):
        generate_family(SEED, 1, -1)


def test_computed_family_n1(fam1):
    assert [e.computed_degree for e in fam1] == [2, 3, 6]
    tref = LaurentPoly.parse("t - 1 + t^-1")
    assert fam1[0].polynomial == tref * tref
    assert all(e.framing == 1 and not e.mirror for e in fam1)
    rep = verify_family(fam1)
    assert rep.ok and [c.status for c in rep.checks] == ["PASS"] * 4


def test_budget_limits_realization():
    fam = generate_family(SEED, 1, 2, crossing_budget=40)
    assert [e.computed_degree for e in fam] == [2, None, None]
    assert "budget" in fam[1].note
    assert verify_family(fam).ok


def test_parallel_pool_matches_serial():
    a = generate_family(SEED, 2, 1, workers=1)
    b = generate_family(SEED, 2, 1, workers=2)
    assert [e.polynomial for e in a] == [e.polynomial for e in b]


def test_mirror_family(fam1):
    m = mirror_family(fam1)
    assert all(e.framing == -1 and e.mirror for e in m)
    assert [e.predicted_degree for e in m] == [2, 3, 6]
    for a, b in zip(fam1, m):
        assert alexander(b.diagram) == a.polynomial
        assert b.signature == -a.signature
        assert b.word.epsilon == 1


def test_mirror_twice_restores(fam1):
    mm = mirror_family(mirror_family(fam1))
    for a, b in zip(fam1, mm):
        assert b.diagram == a.diagram and b.word == a.word and b.framing == a.framing


def test_mirror_unrealized_entry_flips_metadata():
    fam = generate_family(SEED, 1, 0, compute=False)
    (e,) = mirror_family(fam)
    assert e.diagram is None and e.framing == -1 and e.mirror


def test_mirror_of_empty_family_rejected():
    with pytest.raises(ValueError):
        mirror_family([])


def test_forged_duplicate_fails_distinctness(fam1):
    forged = list(fam1) + [replace(fam1[2], i=3)]
    rep = verify_family(forged)
    status = {c.name: c for c in rep.checks}
    assert not rep.ok
    assert status["distinct"].status == "FAIL"
    assert status["distinct"].counterexample == {"i": 2, "j": 3, "degree": 6}


def test_wrong_computed_degree_fails_match(fam1):
    bad = [replace(fam1[1], polynomial=fam1[0].polynomial)]
    rep = verify_family(bad, ["match"])
    assert rep.checks[0].status == "FAIL"


def test_n_zero_growth_not_applicable():
    fam = generate_family(SEED, 0, 2)
    assert [e.computed_degree for e in fam] == [2, 2, 2]
    status = {c.name: c.status for c in verify_family(fam).checks}
    assert status["degrees"] == "NOT APPLICABLE" and status["distinct"] == "NOT APPLICABLE"
    assert status["match"] == "PASS"


def test_unknown_check_rejected(fam1):
    with pytest.raises(ValueError):
        verify_family(fam1, ["speed"])


def test_json_round_trip(fam1):
    obj = json.loads(json.dumps(family_to_json(fam1)))
    assert family_to_json(family_from_json(obj)) == family_to_json(fam1)
    assert set(obj["entries"][0]) >= {"i", "word", "pd", "delta", "sigma", "pred_deg", "poly"}


def test_csv_projection(fam1):
    lines = family_csv(fam1).splitlines()
    assert lines[0] == "i,delta,sigma,pred_deg,comp_deg"
    assert lines[3] == "2,5,3,6,6"


@pytest.mark.parametrize("n, iters", [(1, 10), (2, 7), (3, 6)])
def test_symbolic_growth(n, iters):
    rng = random.Random(n)
    seeds = [SEED] + [random_realizable_word(rng, max_events=8) for _ in range(5)]
    for seed in seeds:
        fam = generate_family(seed, n, iters, compute=False)
        degs = [e.predicted_degree for e in fam]
        assert all(a < b for a, b in zip(degs, degs[1:]))
        assert all(b.delta >= (n + 1) * a.delta for a, b in zip(fam, fam[1:]))
