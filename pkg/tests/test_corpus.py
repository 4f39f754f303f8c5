import json

import pytest

from expanse import corpus, experiments, schemas
from expanse.actions import ActionSpec
from expanse.ca import LocalRule
from expanse.errors import MalformedInput
from expanse.groups import GroupSpec
from expanse.symbolic import SubshiftSpec
from expanse.tiling import TileSet

KIND_TYPES = {"group": GroupSpec, "sft": SubshiftSpec, "ca": LocalRule, "action": ActionSpec,
              "tileset": TileSet}


def test_fresh_corpus_has_the_named_entries():
    names = corpus.entry_names()
    assert len(names) >= 10
    for need in ("example-2.6-truncation", "example-4.4-truncation", "golden-mean", "period-2",
                 "jigsaw-tile", "fig3-tile", "dominoes"):
        assert need in names


def test_corpus_validates():
    rows = corpus.validate_corpus()
    bad = [r for r in rows if not r["ok"]]
    assert bad == []


@pytest.mark.parametrize("name", corpus.entry_names())
def test_entries_build_to_their_kind(name):
    e = corpus.load(name)
    obj = e.build()
    assert isinstance(obj, KIND_TYPES[e.kind])
    assert e.provenance


def test_corrupted_entry_is_named(monkeypatch):
    original = corpus.read_entry_text

    def fake(name):
        text = original(name)
        if name == "golden-mean":
            data = json.loads(text)
            data["payload"]["alphabet"] = "01"
            return json.dumps(data)
        return text

    monkeypatch.setattr(corpus, "read_entry_text", fake)
    rows = {r["name"]: r for r in corpus.validate_corpus()}
    row = rows["entries/golden-mean"]
    assert not row["ok"]
    assert row["errors"][0]["pointer"] == "/payload/alphabet"
    assert all(r["ok"] for n, r in rows.items() if n != "entries/golden-mean")
    with pytest.raises(MalformedInput, match="golden-mean"):
        corpus.load("golden-mean")


def test_unknown_entry():
    with pytest.raises(MalformedInput, match="no corpus entry"):
        corpus.load("nope")
    with pytest.raises(MalformedInput, match="expected a tileset"):
        corpus.build("golden-mean", "tileset")


def test_schema_pointers():
    errs = schemas.errors(schemas.EXPERIMENT, {"name": "x", "operation": "nk", "inputs": {},
                                               "budgets": {"tilings": -3}})
    assert errs[0][0] == "/budgets/tilings"
    assert schemas.pointer(["a/b", "c~d", 0]) == "/a~1b/c~0d/0"


def test_parse_experiment_reports_pointer():
    with pytest.raises(MalformedInput, match="pointer '/seed'"):
        experiments.parse_experiment(json.dumps(
            {"name": "x", "operation": "nk", "inputs": {}, "seed": "zero"}))
    with pytest.raises(MalformedInput, match="not JSON"):
        experiments.parse_experiment("{\n  'name': 1}")


def test_parse_experiment_unknown_operation():
    with pytest.raises(MalformedInput, match="operation"):
        experiments.parse_experiment(json.dumps({"name": "x", "operation": "frob", "inputs": {}}))


QUICK = ["thm14-period2", "golden-mean-radius", "golden-mean-horoball", "period2-horoball",
         "ball-propagation", "monotone-orbits", "sign-flip-probe", "nk1", "jigsaw-unique",
         "dominoes-faults", "dominoes-report", "jigsaw-report"]


@pytest.mark.parametrize("name", QUICK)
def test_quick_experiments_pass(name):
    data = experiments.parse_experiment(corpus.read_experiment_text(name), name)
    report, code = experiments.run_experiment(data)
    assert report["status"] == "pass", report.get("expectation_mismatches")
    assert code == experiments.PASS
    assert report["claim"] in experiments.CLAIMS.values()


def test_budget_exceeded_is_reported():
    data = experiments.parse_experiment(json.dumps({
        "name": "tiny", "operation": "tile-classes", "inputs": {"tileset": "dominoes"},
        "params": {"tori": [[4, 4]]}, "budgets": {"enumeration": 10}}))
    report, code = experiments.run_experiment(data)
    assert report["status"] == "budget-exceeded" and code == experiments.ERROR


def test_expectation_mismatch_fails():
    data = json.loads(corpus.read_experiment_text("nk1"))
    data["expect"]["N"] = 4
    report, code = experiments.run_experiment(experiments.parse_experiment(json.dumps(data)))
    assert report["status"] == "fail" and code == experiments.FAIL
    assert report["expectation_mismatches"][0]["key"] == "N"
