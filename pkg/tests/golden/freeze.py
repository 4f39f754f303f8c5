"""Regenerate the frozen golden values under tests/golden/.

Every number written here comes from running the library's exhaustive
searches once; nothing is typed in by hand.  Run it only after a deliberate
change to an enumerator, and review the diff:

    python tests/golden/freeze.py
"""

import json
import sys
from pathlib import Path

from expanse import actions, ca, coding, symbolic, tiling
from expanse.errors import MalformedInput

HERE = Path(__file__).resolve().parent

TILESETS = {
    "monomino": tiling.monomino,
    "dominoes": tiling.dominoes,
    "jigsaw": tiling.jigsaw,
    "column": tiling.column_tile,
    "ring-filler": tiling.ring_filler,
}


def _write(name, values):
    doc = {"tag": "DERIVED", "generator": "tests/golden/freeze.py", "values": values}
    (HERE / name).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print("wrote", name)


def tilings():
    out = {}
    for name, make in TILESETS.items():
        ts = make()
        side = 8 if name in ("jigsaw", "column", "ring-filler") else 6
        rows = {}
        for W in range(1, side + 1):
            for H in range(1, side + 1):
                try:
                    xs = tiling.enumerate_tilings(ts, W, H)
                except MalformedInput:
                    continue
                rows[f"{W}x{H}"] = {
                    "tilings": len(xs),
                    "classes": len(tiling.translation_classes(xs)),
                    "cell_partitions": len(tiling.cell_partitions(xs)),
                }
        out[name] = rows
    growth = {}
    for W, H in [(6, 4), (12, 4), (6, 8), (12, 8), (12, 12)]:
        xs = tiling.enumerate_tilings(tiling.column_tile(), W, H)
        growth[f"{W}x{H}"] = len(tiling.translation_classes(xs))
    out["column-growth-tori"] = growth
    _write("tilings.json", out)


def displacements():
    ts = tiling.dominoes()
    xs = tiling.enumerate_tilings(ts, 4, 4)
    E = sorted(list(v) for v in tiling.displacement_set(xs))
    mono = sorted(list(v) for v in tiling.displacement_set(
        tiling.enumerate_tilings(tiling.monomino(), 3, 3)))
    _write("displacements.json", {"dominoes-4x4": E, "monomino-3x3": mono})


def action_values():
    a = actions.monotone_truncation(12)
    sizes = {s: actions.orbit(a, s).size for s in a.states}
    inv = actions.inverse_orbit(a, "0" * 13).size
    res = actions.compute_Nk(1)
    inst, bad = actions.verify_Nk_oracle(res)
    _write("actions.json", {
        "monotone-truncation-12": {"orbit_sizes": sizes, "inverse_orbit_of_zero": inv},
        "N1": {"N": res.N, "universal_size": res.universal_size,
               "table": {"".join(w): list(s) for w, s in sorted(res.table.items())},
               "instances": inst, "disagreements": bad},
    })


def coding_values():
    specs = {"golden-mean": symbolic.golden_mean(), "period-2": symbolic.period_two(),
             "full-shift-2": symbolic.full_shift()}
    out = {}
    for name, spec in specs.items():
        cert = coding.expansive_radius(spec, 4, 6)
        out[name] = {"radius": cert.radius, "bound": cert.bound, "exact_count": cert.exact_count}
    rep = coding.coding_law_suite(0)
    out["law-suite-seed-0"] = {"queries": rep.queries, "violations": len(rep.violations)}
    _write("coding.json", out)


def ca_values():
    gm = symbolic.full_shift()
    rules = {"identity": ca.identity_rule(gm), "constant-0": ca.constant_rule(gm, "0"),
             "and": ca.and_rule(gm), "shift": ca.shift_rule(gm)}
    out = {}
    for name, f in rules.items():
        v = ca.preperiodicity(f, 8, 8)
        prof, stable = ca.uniform_bound_profile(f, [2, 4, 6], 8, 8)
        out[name] = {"preperiodicity": [v.status, v.n, v.p],
                     "profile": [[P, None if b is None else list(b)] for P, b in prof],
                     "stable": stable}
    _write("ca.json", out)


if __name__ == "__main__":
    which = sys.argv[1:] or ["tilings", "displacements", "action_values", "coding_values",
                             "ca_values"]
    for name in which:
        globals()[name]()
