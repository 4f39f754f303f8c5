"""Experiment runner: JSON experiment files dispatched to library operations.

An experiment names an ``operation``, corpus ``inputs`` (entry ids, or
inline payloads), ``params``, ``budgets`` and optional ``expect`` values.
The report is a plain dict; it carries the claim tag of the property the
experiment exercises, the seed when one is used, and every witness inline.
"""

import json

from . import corpus, schemas
from .actions import (ActionSpec, compute_Nk, inverse_orbit, orbit, pointwise_periodicity_probe,
                      verify_Nk_oracle)
from .ca import (LocalRule, PowerCache, nilpotency, preperiodicity, uniform_bound_profile,
                 weak_preperiodicity_probe)
from .coding import (CodingQuery, ball_codes_next, codes, coding_law_suite, expansive_radius,
                     horoball_coding_probe)
from .errors import BudgetExceeded, MalformedInput
from .groups import horoball_approx
from .symbolic import SubshiftSpec, enumerate_periodic_points
from .tiling import (TileSet, cell_partitions, enumerate_tilings, fault_lines, lemma_suite,
                     total_periodicity_report, translation_classes)

PASS, FAIL, ERROR = 0, 1, 2

# claim tags: the property each operation exercises
CLAIMS = {
    "expansive-radius": "finite-coding-ball-bounds-size",
    "horoball-probe": "horoball-window-fails-to-code-on-infinite-sft",
    "coding-laws": "coding-relation-laws",
    "ball-propagation": "ball-coding-propagates",
    "orbit-profile": "monotone-shift-orbits-and-inverse-orbits",
    "probe": "pointwise-periodicity",
    "nk": "bounded-word-reduction",
    "ca-preperiodicity": "ca-preperiodicity-dichotomy",
    "tile-classes": "tilings-up-to-translation",
    "tile-faults": "fault-lines",
    "tile-lemmas": "tiling-semigroup-lemmas",
    "tile-report": "total-periodicity-report",
}

KINDS = {"sft": SubshiftSpec, "action": ActionSpec, "ca": LocalRule, "tileset": TileSet}


def resolve(ref, kind):
    """A corpus id or an inline payload, built as an object of ``kind``."""
    if isinstance(ref, str):
        return corpus.build(ref, kind)
    if isinstance(ref, dict):
        errs = schemas.errors({"$defs": schemas.DEFS, "$ref": f"#/$defs/{kind}"}, ref)
        if errs:
            ptr, msg = errs[0]
            raise MalformedInput(f"inline {kind} invalid at {ptr or '/'}: {msg}")
        return corpus.BUILDERS[kind](ref)
    raise MalformedInput(f"expected a corpus id or an inline {kind}")


def _expect(result, expect):
    """Keys of ``expect`` whose value differs from ``result``."""
    return sorted(k for k, v in expect.items() if result.get(k) != v)


# -- operations ------------------------------------------------------------------------------
# each returns (result dict, list of violated properties)


def op_expansive_radius(inp, prm, budget, seed):
    spec = resolve(inp["sft"], "sft")
    cert = expansive_radius(spec, prm.get("r_max", 4), prm.get("rho", 6))
    res = {"radius": cert.radius, "bound": cert.bound, "exact_count": cert.exact_count,
           "refuted_radii": sorted(cert.refutations)}
    if cert.found:
        res["summary"] = f"expansive_radius={cert.radius}, |X|={cert.exact_count}"
    else:
        res["summary"] = f"no expansive radius up to {prm.get('r_max', 4)}"
    bad = []
    if cert.found and cert.exact_count is not None and cert.exact_count > cert.bound:
        bad.append("size-bound")
    return res, bad


def op_horoball_probe(inp, prm, budget, seed):
    spec = resolve(inp["sft"], "sft")
    grp = spec.group
    R, rho = prm.get("R", 3), prm.get("rho", 6)
    dirs = prm.get("directions", [None])
    rows = []
    for d in dirs:
        h = horoball_approx(grp, R, d)
        p = horoball_coding_probe(spec, h, rho)
        row = {"direction": [grp.encode(s) for s in h.direction], "members": [grp.encode(m) for m in h.members],
               "result": p.result, "mode": p.mode}
        if p.witness is not None:
            row["witness"] = [[{"at": grp.encode(g), "sym": c} for g, c in w.cells]
                              for w in p.witness]
        rows.append(row)
    return {"probes": rows, "results": [r["result"] for r in rows]}, []


def op_coding_laws(inp, prm, budget, seed):
    rep = coding_law_suite(0 if seed is None else seed, prm.get("subshifts", 20),
                           prm.get("pairs", 200), prm.get("radius", 6))
    res = {"subshifts": rep.subshifts, "pairs": rep.pairs, "queries": rep.queries,
           "violations": rep.violations}
    return res, ["coding-laws"] if rep.violations else []


def op_ball_propagation(inp, prm, budget, seed):
    r_max, k_max = prm.get("r_max", 2), prm.get("k_max", 4)
    rho = prm.get("rho", r_max + k_max)
    rows, bad = [], []
    for ref in inp["sfts"]:
        spec = resolve(ref, "sft")
        grp = spec.group
        for r in range(0, r_max + 1):
            if r + 1 > rho or not ball_codes_next(spec, r, rho):
                continue
            for k in range(1, k_max + 1):
                if r + k > rho:
                    break
                ok = codes(CodingQuery(spec, grp.ball(r), grp.ball(r + k), rho)).holds
                rows.append({"sft": ref if isinstance(ref, str) else "inline", "r": r, "k": k,
                             "codes": ok})
                if not ok:
                    bad.append(f"propagation r={r} k={k}")
    return {"checks": rows, "checked": len(rows)}, bad


def op_orbit_profile(inp, prm, budget, seed):
    a = resolve(inp["action"], "action")
    sizes = {str(x): orbit(a, x, budget).size for x in a.states}
    fixed = sorted(x for x, n in sizes.items() if n == 1)
    by_size = {}
    for n in sizes.values():
        by_size[str(n)] = by_size.get(str(n), 0) + 1
    res = {"orbit_sizes": sizes, "fixed_points": fixed, "orbits_by_size": by_size}
    if "target" in prm:
        inv = inverse_orbit(a, prm["target"], budget)
        res["inverse_orbit"] = sorted(str(y) for y in inv.inverse_orbit)
        res["inverse_orbit_size"] = inv.size
    return res, []


def op_probe(inp, prm, budget, seed):
    a = resolve(inp["action"], "action")
    rep = pointwise_periodicity_probe(a, budget)
    return {"status": rep.status, "max_orbit": rep.max_orbit, "partial": rep.partial,
            "orbit_sizes": None if rep.orbit_sizes is None else
            {str(k): v for k, v in sorted(rep.orbit_sizes.items(), key=lambda kv: str(kv[0]))}}, []


def op_nk(inp, prm, budget, seed):
    res = compute_Nk(prm.get("k", 1), budget)
    inst, bad = verify_Nk_oracle(res)
    out = {"k": res.k, "N": res.N, "universal_size": res.universal_size,
           "table": {" ".join(w): " ".join(v) for w, v in sorted(res.table.items())},
           "instances": inst, "disagreements": bad}
    return out, ["oracle-disagreement"] if bad else []


def _ca_row(f, prm):
    n_max, p_max = prm.get("n_max", 8), prm.get("p_max", 8)
    period = prm.get("period", 6)
    cache = PowerCache(f)
    pre = preperiodicity(f, n_max, p_max, cache)
    nil = nilpotency(f, n_max, cache)
    sample = enumerate_periodic_points(f.subshift, period)
    weak = weak_preperiodicity_probe(f, sample, prm.get("probe_n", 64), prm.get("probe_p", 4096))
    profile, stable = uniform_bound_profile(f, prm.get("periods", [2, 4, 6]), n_max, p_max)
    uniform = profile[-1][1] if stable else None
    row = {
        "preperiodic": pre.status,
        "np": None if pre.n is None else [pre.n, pre.p],
        "nilpotent": nil.status,
        "nilpotent_steps": nil.n,
        "probe": weak.status,
        "per_point": sorted([x.word if x.kind == "Z" else repr(x), list(v)]
                            for x, v in weak.per_point.items()),
        "profile": [[P, None if b is None else list(b)] for P, b in profile],
        "uniform_bound": None if uniform is None else list(uniform),
    }
    bad = []
    # a stable uniform bound from the probe must be confirmed by the rule-level check
    if uniform is not None and not (pre.status == "preperiodic" and
                                    tuple(uniform) == (pre.n, pre.p)):
        bad.append(f"{f.name}: probe bound {uniform} not confirmed")
    if uniform is None and pre.status == "preperiodic" and weak.status != "all-satisfy":
        bad.append(f"{f.name}: rule preperiodic but probe found a counterexample")
    return row, bad


def op_ca_preperiodicity(inp, prm, budget, seed):
    rows, bad = {}, []
    for ref in inp["rules"]:
        f = resolve(ref, "ca")
        rows[f.name or str(ref)], b = _ca_row(f, prm)
        bad += b
    return {"rules": rows}, bad


def _tori(prm):
    return [tuple(t) for t in prm.get("tori", [[4, 4]])]


def op_tile_classes(inp, prm, budget, seed):
    ts = resolve(inp["tileset"], "tileset")
    rows = []
    for W, H in _tori(prm):
        tilings = enumerate_tilings(ts, W, H, budget)
        rows.append({"torus": [W, H], "tilings": len(tilings),
                     "cell_partitions": len(cell_partitions(tilings)),
                     "classes": len(translation_classes(tilings))})
    counts = [r["classes"] for r in rows]
    res = {"rows": rows, "classes": counts,
           "strictly_increasing": all(a < b for a, b in zip(counts, counts[1:])),
           "constant": len(set(counts)) <= 1}
    return res, []


def op_tile_faults(inp, prm, budget, seed):
    ts = resolve(inp["tileset"], "tileset")
    rows = []
    for W, H in _tori(prm):
        for c in translation_classes(enumerate_tilings(ts, W, H, budget)):
            x = c.representative
            rows.append({"torus": [W, H], "placements": x.to_json()["placements"],
                         "fault_lines": [[f.axis, f.k, f.slidable] for f in fault_lines(x)]})
    return {"classes": rows, "any_fault": any(r["fault_lines"] for r in rows)}, []


def op_tile_lemmas(inp, prm, budget, seed):
    rows, bad = [], []
    for ref in inp["tilesets"]:
        ts = resolve(ref, "tileset")
        side = prm.get("max_side", 6)
        sizes = [(W, H) for W in range(1, side + 1) for H in range(1, side + 1)
                 if all(t.fits(W, H) for t in ts.tiles)]
        for r in lemma_suite(ts, sizes, budget):
            r["tileset"] = ref if isinstance(ref, str) else "inline"
            rows.append(r)
            bad += [v["check"] for v in r["violations"]]
    return {"rows": rows, "tilings": sum(r["tilings"] for r in rows)}, sorted(set(bad))


def op_tile_report(inp, prm, budget, seed):
    ts = resolve(inp["tileset"], "tileset")
    return total_periodicity_report(ts, _tori(prm), budget), []


OPERATIONS = {
    "expansive-radius": op_expansive_radius,
    "horoball-probe": op_horoball_probe,
    "coding-laws": op_coding_laws,
    "ball-propagation": op_ball_propagation,
    "orbit-profile": op_orbit_profile,
    "probe": op_probe,
    "nk": op_nk,
    "ca-preperiodicity": op_ca_preperiodicity,
    "tile-classes": op_tile_classes,
    "tile-faults": op_tile_faults,
    "tile-lemmas": op_tile_lemmas,
    "tile-report": op_tile_report,
}


def parse_experiment(text, source="<input>"):
    """Parse and validate experiment JSON; raises MalformedInput with a JSON pointer."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{source}: not JSON at line {exc.lineno} column {exc.colno} "
                             f"(pointer ''): {exc.msg}")
    errs = schemas.errors(schemas.EXPERIMENT, data)
    if not errs and data["operation"] not in OPERATIONS:
        errs = [("/operation", f"unknown operation {data['operation']!r}; "
                               f"choose from {sorted(OPERATIONS)}")]
    if not errs:
        errs = corpus.missing_refs(data)
    if errs:
        ptr, msg = errs[0]
        raise MalformedInput(f"{source}: invalid at pointer '{ptr}': {msg}")
    return data


def run_experiment(data):
    """Run a parsed experiment; returns ``(report, exit code)``.

    Exit code 0 when every property and expectation holds, 1 when one is
    violated, 2 when a budget is exceeded or an input is malformed.
    """
    op = data["operation"]
    budgets = data.get("budgets", {})
    budget = budgets.get("enumeration")
    seed = data.get("seed")
    report = {"experiment": data["name"], "operation": op, "claim": CLAIMS[op],
              "budgets": budgets}
    if seed is not None:
        report["seed"] = seed
    try:
        result, violated = OPERATIONS[op](data["inputs"], data.get("params", {}), budget, seed)
    except BudgetExceeded as exc:
        report.update(status="budget-exceeded", error=str(exc), budget=exc.name)
        return report, ERROR
    except MalformedInput as exc:
        report.update(status="malformed-input", error=str(exc))
        return report, ERROR
    mismatched = _expect(result, data.get("expect", {}))
    report["result"] = result
    report["violations"] = violated
    report["expectation_mismatches"] = [
        {"key": k, "expected": data["expect"][k], "got": result.get(k)} for k in mismatched]
    ok = not violated and not mismatched
    report["status"] = "pass" if ok else "fail"
    return report, PASS if ok else FAIL
