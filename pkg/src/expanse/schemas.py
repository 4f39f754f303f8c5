"""JSON schemas for corpus entries and experiment files."""

from jsonschema import Draft202012Validator

_INT = {"type": "integer"}

GROUP = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["Z", "Zd", "cyclic", "free", "product"]},
        "d": {"type": "integer", "minimum": 1},
        "n": {"type": "integer", "minimum": 1},
        "rank": {"type": "integer", "minimum": 1},
        "factors": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/group"}},
        "generators": {"type": "array", "minItems": 1},
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": "Zd"}}}, "then": {"required": ["d"]}},
        {"if": {"properties": {"kind": {"const": "cyclic"}}}, "then": {"required": ["n"]}},
        {"if": {"properties": {"kind": {"const": "free"}}}, "then": {"required": ["rank"]}},
        {"if": {"properties": {"kind": {"const": "product"}}}, "then": {"required": ["factors"]}},
    ],
}

SFT = {
    "type": "object",
    "required": ["group", "alphabet"],
    "properties": {
        "group": {"$ref": "#/$defs/group"},
        "alphabet": {"type": "array", "minItems": 1, "uniqueItems": True,
                     "items": {"type": "string", "minLength": 1}},
        "forbidden": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["cells"],
                "properties": {"cells": {
                    "type": "array", "minItems": 1,
                    "items": {"type": "object", "required": ["at", "sym"],
                              "properties": {"sym": {"type": "string"}}},
                }},
            },
        },
    },
}

CA = {
    "type": "object",
    "required": ["sft", "neighborhood", "table"],
    "properties": {
        "sft": {"$ref": "#/$defs/sft"},
        "neighborhood": {"type": "array", "minItems": 1},
        "table": {"type": "object", "additionalProperties": {"type": "string"}},
    },
}

ACTION = {
    "type": "object",
    "required": ["states", "generators"],
    "properties": {
        "states": {"type": "array", "minItems": 1, "items": {"type": "string"}},
        "generators": {
            "type": "object", "minProperties": 1,
            "additionalProperties": {"type": "array", "items": {"type": ["integer", "string"]}},
        },
        "algebra": {"enum": ["semigroup", "monoid", "group"]},
        "partial": {"type": "boolean"},
    },
}

TILESET = {
    "type": "object",
    "required": ["tiles"],
    "properties": {
        "tiles": {
            "type": "array", "minItems": 1,
            "items": {
                "type": "object", "required": ["cells"],
                "properties": {
                    "name": {"type": "string"},
                    "cells": {"type": "array", "minItems": 1,
                              "items": {"type": "array", "items": _INT,
                                        "minItems": 2, "maxItems": 2}},
                },
            },
        },
        "adjacency": {"enum": ["edge", "corner"]},
    },
}

DEFS = {"group": GROUP, "sft": SFT, "ca": CA, "action": ACTION, "tileset": TILESET}

ENTRY = {
    "$defs": DEFS,
    "type": "object",
    "required": ["id", "kind", "provenance", "payload"],
    "additionalProperties": False,
    "properties": {
        "id": {"type": "string", "pattern": "^[a-z0-9][a-z0-9.-]*$"},
        "kind": {"enum": sorted(DEFS)},
        "provenance": {"type": "string", "minLength": 1},
        "payload": {"type": "object"},
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": k}}},
         "then": {"properties": {"payload": {"$ref": f"#/$defs/{k}"}}}}
        for k in sorted(DEFS)
    ],
}

_POSINT = {"type": "integer", "minimum": 1}

EXPERIMENT = {
    "type": "object",
    "required": ["name", "operation", "inputs"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "module": {"enum": ["groups", "symbolic", "coding", "actions", "ca", "tiling"]},
        "operation": {"type": "string"},
        "inputs": {"type": "object"},
        "params": {"type": "object"},
        "budgets": {"type": "object", "additionalProperties": _POSINT},
        "expect": {"type": "object"},
        "seed": {"type": "integer"},
        "format": {"enum": ["json", "text", "dot"]},
    },
}


def pointer(path):
    """JSON pointer for a jsonschema error path."""
    parts = [str(p).replace("~", "~0").replace("/", "~1") for p in path]
    return "/" + "/".join(parts) if parts else ""


def errors(schema, data):
    """Sorted ``(pointer, message)`` pairs; empty when ``data`` is valid."""
    v = Draft202012Validator(schema)
    out = [(pointer(e.absolute_path), e.message) for e in v.iter_errors(data)]
    return sorted(out)
