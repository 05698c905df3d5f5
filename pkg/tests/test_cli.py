import hashlib
import json
from pathlib import Path

import pytest

import annulus_kit
from annulus_kit.annulus import SEED_WORDS, BandWord, realize_diagram
from annulus_kit.cli import RunConfig, export, import_text, main
from annulus_kit.diagram import to_gauss, validate
from annulus_kit.errors import UnsupportedFormat
from annulus_kit.morse import braid_closure

SEEDS = Path(annulus_kit.__file__).parent / "seeds"


@pytest.fixture(scope="module")
def family_file(tmp_path_factory):
    out = tmp_path_factory.mktemp("gen") / "family.json"
    assert main(["gen", "--seed", str(SEEDS / "8_20.bw"), "--n", "1", "--iters", "2", "--out", str(out)]) == 0
    return out


def corpus_diagrams():
    return [realize_diagram(w) for w in SEED_WORDS.values()] + [
        braid_closure([1, 1, 1, -2, -1, -1, -1, -2]),
        braid_closure([1, -2, 1, -2]),
    ]


# --- gen / verify -------------------------------------------------------------


def test_gen_writes_family_with_provenance(family_file):
    obj = json.loads(family_file.read_text())
    assert obj["n"] == 1
    assert [e["pred_deg"] for e in obj["entries"]] == [2, 3, 6]
    digest = hashlib.sha256((SEEDS / "8_20.bw").read_bytes()).hexdigest()
    assert obj["provenance"] == {"tool": "annulus-kit", "version": annulus_kit.__version__, "input_sha256": digest}


def test_gen_finds_packaged_seed_by_relative_name(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["gen", "--seed", "seeds/8_20.bw", "--n", "2", "--iters", "1", "--no-compute"]) == 0
    obj = json.loads((tmp_path / "family.json").read_text())
    assert [e["pred_deg"] for e in obj["entries"]] == [2, 4]
    assert obj["entries"][0]["pd"] is None


def test_gen_respects_worker_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("ANNULUS_KIT_WORKERS", "2")
    out = tmp_path / "f.json"
    assert main(["gen", "--seed", "8_20.bw", "--n", "1", "--iters", "1", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["entries"][1]["poly"] is not None


def test_gen_rejects_bad_seed(tmp_path, capsys):
    assert main(["gen", "--seed", "unknot.bw", "--n", "1", "--out", str(tmp_path / "x.json")]) == 2
    assert "not good" in capsys.readouterr().err


def test_verify_passes(family_file, tmp_path, capsys):
    csv_path = tmp_path / "report.csv"
    assert main(["verify", "--family", str(family_file), "--csv", str(csv_path)]) == 0
    out = capsys.readouterr().out
    assert "distinct: PASS" in out and "input sha256" in out
    assert csv_path.read_text().splitlines()[0] == "check,status,detail,counterexample"


def test_verify_failure_exits_one(family_file, tmp_path, capsys):
    obj = json.loads(family_file.read_text())
    obj["entries"].append(dict(obj["entries"][2], i=3))
    forged = tmp_path / "forged.json"
    forged.write_text(json.dumps(obj))
    assert main(["verify", "--family", str(forged), "--checks", "distinct", "--format", "json"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is False and report["checks"][0]["counterexample"]["j"] == 3


# --- inv / ops / kirby ----------------------------------------------------------


def test_inv_missing_file_exits_two(capsys):
    assert main(["inv", "--pd", "missing.pd"]) == 2
    assert "missing.pd" in capsys.readouterr().err


def test_inv_pd_file(tmp_path, capsys):
    p = tmp_path / "k.pd"
    p.write_text(realize_diagram(SEED_WORDS["8_20"]).to_pd_text())
    assert main(["inv", "--pd", str(p), "--alexander", "--json"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["alexander"] == "t^2 - 2*t + 3 - 2*t^-1 + t^-2" and body["degree"] == 2
    assert "signature" not in body


def test_inv_word_signature(capsys):
    assert main(["inv", "--tokens", "X+", "--signature"]) == 0
    assert "signature: 2" in capsys.readouterr().out


def test_ops_star_n_iterates(capsys):
    assert main(["ops", "star-n", "--word", "8_20.bw", "--n", "1", "--iters", "3"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert [s["pred_deg"] for s in body["steps"]] == [3, 6, 14]


def test_ops_star_n_emits_diagrams(capsys):
    assert main(["ops", "star-n", "--tokens", "A+ A-", "--n", "1", "--emit", "diagrams"]) == 0
    (step,) = json.loads(capsys.readouterr().out)["steps"]
    assert step["degree"] == step["pred_deg"] == 3 and step["pd"]


def test_output_is_deterministic(capsys):
    argv = ["ops", "star-n", "--tokens", "A+ A-", "--n", "2", "--iters", "2"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_corpus_is_seeded(capsys):
    main(["ops", "corpus", "--count", "5", "--random-seed", "3"])
    a = capsys.readouterr().out
    main(["ops", "corpus", "--count", "5", "--random-seed", "3"])
    assert capsys.readouterr().out == a and len(a.splitlines()) == 5


def test_kirby_replay_writes_log(tmp_path, capsys):
    log = tmp_path / "out.csv"
    assert main(["kirby", "replay", "--script", "lemma_n3.json", "--log", str(log)]) == 0
    assert "h1_order 3" in capsys.readouterr().out
    assert log.read_text().startswith("step,kind,h1_order")


def test_usage_error_exits_two(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().err


# --- export -------------------------------------------------------------------


@pytest.mark.parametrize("fmt", ["pd", "json"])
def test_diagram_round_trip(fmt):
    for d in corpus_diagrams():
        assert import_text(export(d, fmt), fmt) == d


def test_gauss_round_trip():
    for d in corpus_diagrams():
        if not d.crossings:
            continue
        e = import_text(export(d, "gauss"), "gauss")
        assert to_gauss(validate(e)) == to_gauss(validate(d))


@pytest.mark.parametrize("fmt", ["bw", "json"])
def test_word_round_trip(fmt):
    for w in list(SEED_WORDS.values()) + [BandWord.parse("X- S- A+ A+ A- A- S+")]:
        assert import_text(export(w, fmt), fmt) == w


def test_seed_word_exports_as_tokens():
    assert export(SEED_WORDS["8_20"], "bw") == "A+ A-\n"


def test_family_export_csv(family_file, capsys):
    assert main(["export", "--in", str(family_file), "--to", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "i,delta,sigma,pred_deg,comp_deg"
    assert lines[1:] == ["0,1,0,2,2", "1,2,1,3,3", "2,5,3,6,6"]


def test_family_json_round_trip(family_file, tmp_path):
    out = tmp_path / "again.json"
    assert main(["export", "--in", str(family_file), "--to", "json", "--out", str(out)]) == 0
    a = json.loads(family_file.read_text())
    a.pop("provenance")
    assert json.loads(out.read_text()) == a


def test_unsupported_export_format(tmp_path, capsys):
    with pytest.raises(UnsupportedFormat):
        export(SEED_WORDS["8_20"], "gauss")
    p = tmp_path / "w.bw"
    p.write_text("A+ A-\n")
    assert main(["export", "--in", str(p), "--to", "pd"]) == 2


def test_run_config_invariants():
    with pytest.raises(ValueError):
        RunConfig("gen", workers=0)
    with pytest.raises(ValueError):
        RunConfig("gen", crossing_budget=-1)
