"""Bundled corpus: worked examples as JSON entries, plus experiment files.

Entries live in ``entries/<id>.json`` and experiments in
``experiments/<name>.json``.  Each entry has a ``kind`` (group, sft, ca,
action, tileset) and a payload validated against :mod:`expanse.schemas`.
"""

import json
from dataclasses import dataclass
from importlib.resources import files

from .. import schemas
from ..actions import ActionSpec
from ..ca import LocalRule
from ..errors import MalformedInput
from ..groups import GroupSpec
from ..symbolic import SubshiftSpec
from ..tiling import TileSet

BUILDERS = {
    "group": GroupSpec.from_json,
    "sft": SubshiftSpec.from_json,
    "ca": LocalRule.from_json,
    "action": ActionSpec.from_json,
    "tileset": TileSet.from_json,
}


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    kind: str
    provenance: str
    payload: dict

    def build(self):
        if self.kind == "ca":
            return LocalRule.from_json(self.payload, name=self.id)
        return BUILDERS[self.kind](self.payload)


def _root():
    return files(__name__)


def entry_names():
    return sorted(p.name[:-5] for p in (_root() / "entries").iterdir() if p.name.endswith(".json"))


def experiment_names():
    return sorted(p.name[:-5] for p in (_root() / "experiments").iterdir()
                  if p.name.endswith(".json"))


def read_entry_text(name):
    path = _root() / "entries" / f"{name}.json"
    if not path.is_file():
        raise MalformedInput(f"no corpus entry named {name!r}")
    return path.read_text()


def read_experiment_text(name):
    path = _root() / "experiments" / f"{name}.json"
    if not path.is_file():
        raise MalformedInput(f"no bundled experiment named {name!r}")
    return path.read_text()


def check_entry(data):
    """Problems with one parsed entry as ``(pointer, message)`` pairs."""
    errs = schemas.errors(schemas.ENTRY, data)
    if errs:
        return errs
    try:
        BUILDERS[data["kind"]](data["payload"])
    except MalformedInput as exc:
        return [("/payload", str(exc))]
    return []


def load(name):
    """Parse, validate and return the :class:`CorpusEntry` called ``name``."""
    try:
        data = json.loads(read_entry_text(name))
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"corpus entry {name!r} is not JSON: {exc}")
    errs = check_entry(data)
    if errs:
        ptr, msg = errs[0]
        raise MalformedInput(f"corpus entry {name!r} invalid at {ptr or '/'}: {msg}")
    if data["id"] != name:
        raise MalformedInput(f"corpus entry {name!r} has id {data['id']!r}")
    return CorpusEntry(data["id"], data["kind"], data["provenance"], data["payload"])


def build(name, kind=None):
    """The library object encoded by entry ``name``; optionally insist on its kind."""
    e = load(name)
    if kind is not None and e.kind != kind:
        raise MalformedInput(f"corpus entry {name!r} is a {e.kind}, expected a {kind}")
    return e.build()


def list_corpus():
    rows = []
    for name in entry_names():
        e = load(name)
        rows.append({"id": e.id, "kind": e.kind, "provenance": e.provenance})
    return rows


def validate_corpus():
    """One row per entry and experiment: ``{"name", "ok", "errors"}``."""
    rows = []
    for name in entry_names():
        try:
            data = json.loads(read_entry_text(name))
            errs = check_entry(data)
            if not errs and data["id"] != name:
                errs = [("/id", f"id {data['id']!r} does not match file name")]
        except json.JSONDecodeError as exc:
            errs = [("", f"not JSON: {exc}")]
        rows.append({"name": f"entries/{name}", "ok": not errs,
                     "errors": [{"pointer": p, "message": m} for p, m in errs]})
    for name in experiment_names():
        try:
            data = json.loads(read_experiment_text(name))
            errs = schemas.errors(schemas.EXPERIMENT, data)
            if not errs:
                errs = missing_refs(data)
        except json.JSONDecodeError as exc:
            errs = [("", f"not JSON: {exc}")]
        rows.append({"name": f"experiments/{name}", "ok": not errs,
                     "errors": [{"pointer": p, "message": m} for p, m in errs]})
    return rows


def missing_refs(data):
    """Corpus references in an experiment's inputs that do not resolve."""
    known = set(entry_names())
    out = []
    for key, val in sorted(data.get("inputs", {}).items()):
        refs = val if isinstance(val, list) else [val]
        for i, ref in enumerate(refs):
            if isinstance(ref, str) and ref not in known:
                ptr = f"/inputs/{key}" + (f"/{i}" if isinstance(val, list) else "")
                out.append((ptr, f"unknown corpus entry {ref!r}"))
    return out
