"""Command-line interface: ``expanse <command> ...``.

Every command prints one report (JSON, plain text, or DOT where a graph is
involved).  Exit codes: 0 success or pass, 1 a checked property failed,
2 malformed input or an exceeded budget.  The EXPANSE_BUDGET environment
variable caps every enumeration.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__, corpus, schemas
from .actions import action_graph, compute_Nk, inverse_orbit, orbit, pointwise_periodicity_probe
from .ca import apply_point, ca_semigroup_action, compose, nilpotency, preperiodicity
from .coding import CodingQuery, codes, expansive_radius, horoball_coding_probe
from .errors import BudgetExceeded, ExpanseError, InvariantViolation, MalformedInput
from .experiments import CLAIMS, ERROR, FAIL, PASS, parse_experiment, run_experiment
from .groups import find_ball_in_horoball, horoball_approx
from .symbolic import PeriodicPoint, enumerate_periodic_points
from .tiling import (cell_partitions, centering_vector, enumerate_tilings, fault_lines,
                     intersection_graph, mt_inverse_orbit, total_periodicity_report, translation_classes)


# -- input helpers -------------------------------------------------------------------------


def load_object(ref, kind):
    """A corpus id, or a path to a JSON file holding an entry or a bare payload."""
    path = Path(ref)
    if path.suffix == ".json" or path.exists():
        try:
            data = json.loads(path.read_text())
        except FileNotFoundError:
            raise MalformedInput(f"no such file: {ref}")
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"{ref}: not JSON at line {exc.lineno}: {exc.msg} (pointer '')")
        if isinstance(data, dict) and "payload" in data:
            errs = corpus.check_entry(data)
            if errs:
                raise MalformedInput(f"{ref}: invalid at pointer '{errs[0][0]}': {errs[0][1]}")
            if data["kind"] != kind:
                raise MalformedInput(f"{ref}: is a {data['kind']}, expected a {kind}")
            data = data["payload"]
        errs = schemas.errors({"$defs": schemas.DEFS, "$ref": f"#/$defs/{kind}"}, data)
        if errs:
            raise MalformedInput(f"{ref}: invalid at pointer '{errs[0][0]}': {errs[0][1]}")
        return corpus.BUILDERS[kind](data)
    return corpus.build(ref, kind)


def parse_elements(text, group):
    """``"-1,0,2"`` for Z, or a JSON list of encoded elements for any group."""
    text = text.strip()
    if not text:
        return ()
    if text.startswith("["):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"bad element list {text!r}: {exc.msg}")
    else:
        try:
            raw = [int(t) for t in text.split(",")]
        except ValueError:
            raise MalformedInput(f"bad element list {text!r}; use e.g. -1,0,2 or JSON")
    return tuple(group.normalize(e) for e in raw)


def parse_torus(text):
    try:
        W, H = (int(t) for t in text.lower().split("x"))
    except ValueError:
        raise MalformedInput(f"torus must look like 6x6, got {text!r}")
    return W, H


# -- output --------------------------------------------------------------------------------


def to_text(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(to_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {_scalar(v)}" if _flat(v) else
                         f"{pad}-\n{to_text(v, indent + 1)}" for v in obj)
    return pad + _scalar(obj)


def _flat(v, depth=0):
    """Small enough to print on one line."""
    if isinstance(v, dict):
        return not v or (depth > 0 and all(_flat(x, depth + 1) for x in v.values()))
    if isinstance(v, list):
        return all(_flat(x, depth + 1) for x in v)
    return True


def _scalar(v):
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    if v is None:
        return "none"
    return str(v)


def render(report, fmt, dot=None):
    if fmt == "dot":
        if dot is None:
            raise MalformedInput("this command has no graph to export; use --format json or text")
        return dot
    if fmt == "text":
        return to_text(report) + "\n"
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


# -- commands ------------------------------------------------------------------------------


def cmd_codes(args):
    spec = load_object(args.sft, "sft")
    grp = spec.group
    q = CodingQuery(spec, parse_elements(args.A, grp), parse_elements(args.B, grp), args.radius,
                    False if args.local else None)
    v = codes(q, minimal=args.minimal)
    out = v.to_json(grp)
    out.update(A=[grp.encode(a) for a in q.A], B=[grp.encode(b) for b in q.B])
    return out, None


def cmd_expansive_radius(args):
    spec = load_object(args.sft, "sft")
    cert = expansive_radius(spec, args.r_max, args.rho)
    return {"radius": cert.radius, "bound": cert.bound, "exact_count": cert.exact_count,
            "refuted_radii": sorted(cert.refutations)}, None


def cmd_horoball(args):
    if args.sft:
        spec = load_object(args.sft, "sft")
        grp = spec.group
    else:
        spec = None
        grp = load_object(args.group, "group")
    direction = parse_elements(args.direction, grp) if args.direction else None
    h = horoball_approx(grp, args.R, direction, args.r)
    out = {"R": h.R, "r": h.r, "center": grp.encode(h.center),
           "direction": [grp.encode(s) for s in h.direction],
           "members": [grp.encode(m) for m in h.members]}
    if args.ball is not None:
        c = find_ball_in_horoball(h, args.ball)
        out["ball_center"] = None if c is None else grp.encode(c)
    if spec is not None:
        p = horoball_coding_probe(spec, h, args.rho)
        out["probe"] = {"result": p.result, "mode": p.mode}
        if p.witness is not None:
            out["probe"]["witness"] = [[{"at": grp.encode(g), "sym": s} for g, s in w.cells]
                                       for w in p.witness]
    return out, None


def _action_dot(a):
    lines = ["digraph action {"]
    for i, s in enumerate(a.states):
        lines.append(f'  n{i} [label="{s}"];')
    for i, g, j in action_graph(a):
        lines.append(f'  n{i} -> n{j} [label="{g}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _state(a, text):
    for s in a.states:
        if str(s) == text:
            return s
    raise MalformedInput(f"{text!r} is not a state of this action")


def cmd_orbit(args):
    a = load_object(args.action, "action")
    rep = orbit(a, _state(a, args.state), args.budget)
    return {"seed": str(rep.seed), "size": rep.size, "complete": rep.complete,
            "orbit": [{"state": str(y), "word": list(rep.witnesses[y])} for y in rep.orbit]
            }, _action_dot(a)


def cmd_inverse_orbit(args):
    a = load_object(args.action, "action")
    rep = inverse_orbit(a, _state(a, args.state), args.budget)
    return {"target": str(rep.target), "size": rep.size, "complete": rep.complete,
            "inverse_orbit": [{"state": str(y), "word": list(rep.witnesses[y])}
                              for y in rep.inverse_orbit]}, _action_dot(a)


def cmd_nk(args):
    from .actions import verify_Nk_oracle
    res = compute_Nk(args.k, args.budget)
    inst, bad = verify_Nk_oracle(res)
    return {"k": res.k, "N": res.N, "universal_size": res.universal_size,
            "table": {" ".join(w): " ".join(v) for w, v in sorted(res.table.items())},
            "oracle_instances": inst, "oracle_disagreements": bad}, None


def cmd_probe(args):
    a = load_object(args.action, "action")
    rep = pointwise_periodicity_probe(a, args.budget)
    return {"status": rep.status, "max_orbit": rep.max_orbit, "partial": rep.partial,
            "witness": None if rep.witness is None else str(rep.witness)}, _action_dot(a)


def _rule_json(f):
    out = f.to_json()
    out.pop("sft", None)
    return out


def cmd_ca(args):
    rules = [load_object(r, "ca") for r in args.rule]
    if args.ca_command == "apply":
        x = PeriodicPoint.from_word(args.word)
        return {"input": x.word, "output": apply_point(rules[0], x).word}, None
    if args.ca_command == "compose":
        if len(rules) < 2:
            raise MalformedInput("compose needs two or more --rule options")
        f = rules[0]
        for g in rules[1:]:
            f = compose(f, g)
        return _rule_json(f), None
    f = rules[0]
    if args.ca_command == "preperiodic":
        v = preperiodicity(f, args.n_max, args.p_max)
        return {"status": v.status, "n": v.n, "p": v.p, "mode": v.mode,
                "witness": None if v.witness is None else v.witness.text()}, None
    if args.ca_command == "nilpotent":
        v = nilpotency(f, args.n_max)
        return {"status": v.status, "n": v.n, "symbol": v.symbol}, None
    sample = enumerate_periodic_points(f.subshift, args.period)
    rep = ca_semigroup_action(rules, sample, args.budget)
    return {"order": rep.order, "max_orbit": rep.max_orbit, "sample_size": rep.sample_size,
            "generators": sorted(rep.action.names)}, _action_dot(rep.action)


def cmd_tile(args):
    ts = load_object(args.tileset, "tileset")
    tori = [parse_torus(t) for t in (args.torus or ["4x4"])]
    if args.tile_command == "report":
        return total_periodicity_report(ts, tori, args.budget), None
    W, H = tori[0]
    tilings = enumerate_tilings(ts, W, H, args.budget)
    if args.tile_command == "enum":
        dot = "".join(intersection_graph(x, check=False).to_dot() for x in tilings)
        return {"torus": [W, H], "count": len(tilings),
                "cell_partitions": len(cell_partitions(tilings)),
                "tilings": [x.to_json()["placements"] for x in tilings]}, dot
    classes = translation_classes(tilings)
    if args.tile_command == "classes":
        dot = "".join(intersection_graph(c.representative, check=False).to_dot() for c in classes)
        return {"torus": [W, H], "tilings": len(tilings), "classes": len(classes),
                "representatives": [{"size": c.size,
                                     "placements": c.representative.to_json()["placements"]}
                                    for c in classes]}, dot
    if args.tile_command == "faults":
        return {"torus": [W, H], "classes": [
            {"placements": c.representative.to_json()["placements"],
             "fault_lines": [{"axis": f.axis, "k": f.k, "slidable": f.slidable}
                             for f in fault_lines(c.representative)]}
            for c in classes]}, None
    # mt-orbit
    if not classes:
        raise MalformedInput(f"no tilings on the {W}x{H} torus")
    if not 0 <= args.index < len(classes):
        raise MalformedInput(f"--index must be in 0..{len(classes) - 1}")
    x = classes[args.index].representative
    v = centering_vector(x)
    x = x.translate((-v[0], -v[1]))
    inv = mt_inverse_orbit(x, tilings)
    return {"torus": [W, H], "tiling": x.to_json()["placements"], "inverse_orbit_size": len(inv),
            "inverse_orbit": [[[t, list(u)] for t, u in p] for p in inv]}, \
        intersection_graph(x, check=False).to_dot()


def _experiment_text(ref):
    path = Path(ref)
    if path.exists():
        return path.read_text(), str(path)
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    if stem in corpus.experiment_names():
        return corpus.read_experiment_text(stem), f"corpus/{stem}.json"
    raise MalformedInput(f"no experiment file {ref!r} and no bundled experiment {stem!r}")


def _run_one(ref):
    """Worker for ``run``: (report, exit code); never raises."""
    try:
        text, source = _experiment_text(ref)
        data = parse_experiment(text, source)
    except MalformedInput as exc:
        return {"experiment": ref, "status": "malformed-input", "error": str(exc)}, ERROR
    return run_experiment(data)


def cmd_run(args):
    refs = list(args.experiments)
    if args.all:
        refs += [f"corpus/{n}.json" for n in corpus.experiment_names()]
    if not refs:
        raise MalformedInput("give experiment files or --all")
    if args.jobs > 1 and len(refs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, refs))
    else:
        results = [_run_one(r) for r in refs]
    code = max(c for _, c in results)
    reports = [r for r, _ in results]
    if len(reports) == 1 and code == ERROR:
        # a single failed run prints nothing on stdout, only the error
        raise ExpanseError(f"{reports[0]['status']}: {reports[0]['error']}")
    return (reports[0] if len(reports) == 1 else reports), None, code


def cmd_corpus(args):
    if args.corpus_command == "list":
        rows = corpus.list_corpus()
        return {"entries": rows, "count": len(rows),
                "experiments": corpus.experiment_names()}, None
    if args.corpus_command == "show":
        e = corpus.load(args.id)
        return {"id": e.id, "kind": e.kind, "provenance": e.provenance, "payload": e.payload}, None
    rows = corpus.validate_corpus()
    ok = all(r["ok"] for r in rows)
    return {"valid": ok, "entries": rows}, None, PASS if ok else FAIL


def cmd_claims(args):
    return {"claims": CLAIMS}, None


# -- parser --------------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "dot"), default="json")
    common.add_argument("--budget", type=int, default=None,
                        help="enumeration cap (default: EXPANSE_BUDGET or 10^6)")

    p = argparse.ArgumentParser(prog="expanse", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"expanse {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("codes", parents=[common], help="does A code B in a subshift")
    c.add_argument("--sft", required=True, help="corpus id or JSON file")
    c.add_argument("-A", required=True, help="coordinates, e.g. -1,0 or JSON list")
    c.add_argument("-B", required=True)
    c.add_argument("--radius", type=int, default=6, help="workspace radius")
    c.add_argument("--local", action="store_true", help="local (window) mode instead of exact")
    c.add_argument("--minimal", action="store_true", help="also report a minimal coding subset")
    c.set_defaults(func=cmd_codes)

    c = sub.add_parser("expansive-radius", parents=[common],
                       help="least r whose ball codes the next one")
    c.add_argument("--sft", required=True)
    c.add_argument("--r-max", type=int, default=4)
    c.add_argument("--rho", type=int, default=6)
    c.set_defaults(func=cmd_expansive_radius)

    c = sub.add_parser("horoball", parents=[common], help="finite horoball surrogate and probe")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--group", help="group corpus id or JSON file")
    g.add_argument("--sft", help="also probe whether the window codes the identity")
    c.add_argument("-R", type=int, default=3)
    c.add_argument("-r", type=int, default=None, help="ball radius (default 2R)")
    c.add_argument("--direction", help="generators of the geodesic ray, e.g. 1 or JSON")
    c.add_argument("--ball", type=int, default=None, help="look for a ball of this radius inside")
    c.add_argument("--rho", type=int, default=6)
    c.set_defaults(func=cmd_horoball)

    for name, fn, label in (("orbit", cmd_orbit, "forward orbit"),
                            ("inverse-orbit", cmd_inverse_orbit, "inverse orbit")):
        c = sub.add_parser(name, parents=[common], help=f"{label} of a state")
        c.add_argument("--action", required=True)
        c.add_argument("--state", required=True)
        c.set_defaults(func=fn)

    c = sub.add_parser("nk", parents=[common], help="word-reduction bound for k generators")
    c.add_argument("--k", type=int, default=1)
    c.set_defaults(func=cmd_nk)

    c = sub.add_parser("probe", parents=[common], help="are all orbits finite")
    c.add_argument("--action", required=True)
    c.set_defaults(func=cmd_probe)

    c = sub.add_parser("ca", help="cellular automata")
    csub = c.add_subparsers(dest="ca_command", required=True)
    for name in ("apply", "compose", "preperiodic", "nilpotent", "semigroup"):
        cc = csub.add_parser(name, parents=[common])
        cc.add_argument("--rule", action="append", required=True,
                        help="corpus id or JSON file; repeat for compose/semigroup")
        if name == "apply":
            cc.add_argument("--word", required=True, help="one period of a periodic point")
        if name in ("preperiodic", "nilpotent"):
            cc.add_argument("--n-max", type=int, default=8)
        if name == "preperiodic":
            cc.add_argument("--p-max", type=int, default=8)
        if name == "semigroup":
            cc.add_argument("--period", type=int, default=4)
        cc.set_defaults(func=cmd_ca)

    c = sub.add_parser("tile", help="torus tilings")
    tsub = c.add_subparsers(dest="tile_command", required=True)
    for name in ("enum", "classes", "faults", "mt-orbit", "report"):
        tc = tsub.add_parser(name, parents=[common])
        tc.add_argument("--tileset", required=True)
        tc.add_argument("--torus", action="append", help="WxH; repeat for report")
        if name == "mt-orbit":
            tc.add_argument("--index", type=int, default=0, help="translation class to use")
        tc.set_defaults(func=cmd_tile)

    c = sub.add_parser("run", parents=[common], help="run experiment files")
    c.add_argument("experiments", nargs="*")
    c.add_argument("--all", action="store_true", help="run every bundled experiment")
    c.add_argument("--jobs", type=int, default=1)
    c.set_defaults(func=cmd_run)

    c = sub.add_parser("corpus", help="bundled corpus")
    ksub = c.add_subparsers(dest="corpus_command", required=True)
    for name in ("list", "validate", "show"):
        kc = ksub.add_parser(name, parents=[common])
        if name == "show":
            kc.add_argument("id")
        kc.set_defaults(func=cmd_corpus)

    c = sub.add_parser("claims", parents=[common], help="claim tags used in reports")
    c.set_defaults(func=cmd_claims)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.budget is not None:
        if args.budget <= 0:
            print("error: --budget must be positive", file=sys.stderr)
            return ERROR
        os.environ["EXPANSE_BUDGET"] = str(args.budget)
    try:
        out = args.func(args)
        report, dot = out[0], out[1]
        code = out[2] if len(out) > 2 else PASS
        text = render(report, args.format, dot)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    except InvariantViolation as exc:
        print(f"property violated: {exc}", file=sys.stderr)
        return FAIL
    except ExpanseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
