"""Cellular automata on subshifts: sliding-block rules and their powers.

A rule with neighbourhood ``N`` and table ``F`` acts by

    f(x)_g = F((x_{g n})_{n in N}).

Tables are indexed by the symbols read along the sorted neighbourhood.  On Z
they are total on the globally admissible neighbourhood patterns, so
composition, equality and powers are exact there.  Elsewhere they cover the
locally admissible patterns and every verdict carries ``mode == "local"``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .actions import ActionSpec, induced_transformations, pointwise_periodicity_probe
from .errors import BudgetExceeded, MalformedInput, default_budget
from .symbolic import Pattern, PeriodicPoint, SubshiftSpec, extend, locally_admissible


def _domain(spec, support):
    """Admissible symbol tuples on ``support`` (sorted), as a list."""
    support = tuple(sorted(support))
    if not support:
        return [()]
    limit = default_budget()
    if spec.is_z:
        lo, hi = support[0], support[-1]
        arr = spec.zgraph.global_array(hi - lo + 1)
        cols = [g - lo for g in support]
        sub = np.unique(arr[:, cols], axis=0) if len(arr) else arr[:, cols]
        if len(sub) > limit:
            raise BudgetExceeded("rule-domain", limit, len(sub))
        alpha = spec.alphabet
        return [tuple(alpha[a] for a in row) for row in sub.tolist()]
    return [p.symbols for p in extend(spec, Pattern(), support, budget=limit)]


@dataclass(frozen=True, eq=False)
class LocalRule:
    subshift: SubshiftSpec
    neighborhood: tuple
    table: tuple  # sorted ((symbols...), image) pairs
    name: str = ""

    def __post_init__(self):
        grp = self.subshift.group
        nb = tuple(sorted({grp.normalize(n) for n in self.neighborhood}))
        if not nb:
            raise MalformedInput("neighbourhood must be nonempty")
        object.__setattr__(self, "neighborhood", nb)
        items = self.table.items() if isinstance(self.table, dict) else self.table
        tab = {}
        for key, val in items:
            key = tuple(key)
            if len(key) != len(nb):
                raise MalformedInput(f"table key {key} does not match the neighbourhood size")
            if val not in self.subshift.alphabet:
                raise MalformedInput(f"table value {val!r} is not in the alphabet")
            tab[key] = val
        for key in _domain(self.subshift, nb):
            if key not in tab:
                raise MalformedInput(f"table misses admissible pattern {key}")
        object.__setattr__(self, "table", tuple(sorted(tab.items())))

    @cached_property
    def lookup(self):
        return dict(self.table)

    @property
    def radius(self):
        grp = self.subshift.group
        return max(grp.word_length(n) for n in self.neighborhood)

    @property
    def mode(self):
        return "exact-z" if self.subshift.is_z else "local"

    def __call__(self, key):
        try:
            return self.lookup[tuple(key)]
        except KeyError:
            raise MalformedInput(f"neighbourhood pattern {tuple(key)} is not admissible")

    # -- JSON --------------------------------------------------------------

    def _sep(self):
        return "" if all(len(a) == 1 for a in self.subshift.alphabet) else ","

    def to_json(self):
        grp = self.subshift.group
        sep = self._sep()
        return {
            "sft": self.subshift.to_json(),
            "neighborhood": [grp.encode(n) for n in self.neighborhood],
            "table": {sep.join(k): v for k, v in self.table},
        }

    @classmethod
    def from_json(cls, data, name=""):
        try:
            spec = SubshiftSpec.from_json(data["sft"])
            grp = spec.group
            nb = [grp.normalize(n) for n in data["neighborhood"]]
            order = sorted(range(len(nb)), key=lambda i: nb[i])
            sep = "" if all(len(a) == 1 for a in spec.alphabet) else ","
            tab = {}
            for k, v in data["table"].items():
                syms = list(k) if sep == "" else k.split(sep)
                if len(syms) != len(nb):
                    raise MalformedInput(f"table key {k!r} has the wrong length")
                tab[tuple(syms[i] for i in order)] = str(v)
            return cls(spec, tuple(nb), tab, name or data.get("name", ""))
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad CA JSON: {exc}")


def from_function(spec, neighborhood, fn, name=""):
    """Rule whose table is ``fn(symbols)`` on every admissible neighbourhood pattern."""
    nb = tuple(sorted({spec.group.normalize(n) for n in neighborhood}))
    return LocalRule(spec, nb, {k: fn(k) for k in _domain(spec, nb)}, name)


def identity_rule(spec):
    return from_function(spec, [spec.group.identity()], lambda k: k[0], "identity")


def constant_rule(spec, symbol):
    return from_function(spec, [spec.group.identity()], lambda k: symbol, f"constant-{symbol}")


def shift_rule(spec, g=1):
    """The shift by ``g``: ``f(x)_h = x_{g^-1 h}``."""
    grp = spec.group
    g = grp.normalize(g)
    return from_function(spec, [grp.inv(g)], lambda k: k[0], f"shift({g})")


def and_rule(spec):
    """``f(x)_i = min(x_i, x_{i+1})`` on a Z subshift over ``{"0", "1"}``."""
    if not spec.is_z or spec.alphabet != ("0", "1"):
        raise MalformedInput("the AND rule needs a Z subshift over {0, 1}")
    return from_function(spec, [0, 1], lambda k: min(k), "and")


# -- application ---------------------------------------------------------------------


def apply(f, p):
    """Image of a finite pattern on the eroded support ``{g : g N in support(p)}``."""
    grp = f.subshift.group
    cells = p.as_dict()
    nb = f.neighborhood
    n0inv = grp.inv(nb[0])
    cands = {grp.mul(h, n0inv) for h in cells}
    out = []
    for g in sorted(cands):
        pts = [grp.mul(g, n) for n in nb]
        if all(q in cells for q in pts):
            out.append((g, f(tuple(cells[q] for q in pts))))
    if not out:
        raise MalformedInput("pattern support is too small for the neighbourhood")
    return Pattern(tuple(out))


def apply_point(f, x):
    """Image of a periodic point (the period can only shrink)."""
    grp = f.subshift.group
    nb = f.neighborhood
    if x.kind == "Z":
        p = x.dims[0]
        return PeriodicPoint.from_word(
            f(tuple(x.value(i + n) for n in nb)) for i in range(p))
    W, H = x.dims
    rows = [[f(tuple(x.value(grp.mul((i, j), n)) for n in nb)) for i in range(W)] for j in range(H)]
    return PeriodicPoint.from_rows(rows)


# -- composition and equality ------------------------------------------------------


def _minimize(spec, nb, tab):
    nb = list(nb)
    tab = dict(tab)
    changed = True
    while changed and len(nb) > 1:
        changed = False
        for i in range(len(nb)):
            groups = {}
            ok = True
            for k, v in tab.items():
                kk = k[:i] + k[i + 1:]
                if groups.setdefault(kk, v) != v:
                    ok = False
                    break
            if ok:
                nb.pop(i)
                tab = groups
                changed = True
                break
    return tuple(nb), tab


def compose(f, g, minimize=True):
    """The rule ``f o g`` (apply ``g`` first), neighbourhood ``N_f N_g``."""
    spec = f.subshift
    if g.subshift != spec:
        raise MalformedInput("rules live on different subshifts")
    grp = spec.group
    big = tuple(sorted({grp.mul(n, m) for n in f.neighborhood for m in g.neighborhood}))
    pos = {c: i for i, c in enumerate(big)}
    idx = [[pos[grp.mul(n, m)] for m in g.neighborhood] for n in f.neighborhood]
    tab = {}
    for key in _domain(spec, big):
        mid = []
        for cols in idx:
            v = g.lookup.get(tuple(key[c] for c in cols))
            if v is None:
                break
            mid.append(v)
        else:
            out = f.lookup.get(tuple(mid))
            if out is not None:
                tab[key] = out
    nb = big
    if minimize:
        nb, tab = _minimize(spec, big, tab)
    name = f"{f.name}*{g.name}" if f.name and g.name else ""
    return LocalRule(spec, nb, tab, name)


@dataclass(frozen=True)
class EqualityVerdict:
    equal: bool
    mode: str
    witness: Pattern = None

    def __bool__(self):
        return self.equal


def equal(f, g):
    """Do the rules agree on every admissible pattern of the joint neighbourhood?"""
    spec = f.subshift
    if g.subshift != spec:
        raise MalformedInput("rules live on different subshifts")
    joint = tuple(sorted(set(f.neighborhood) | set(g.neighborhood)))
    fi = [joint.index(n) for n in f.neighborhood]
    gi = [joint.index(n) for n in g.neighborhood]
    for key in _domain(spec, joint):
        a = f.lookup.get(tuple(key[i] for i in fi))
        b = g.lookup.get(tuple(key[i] for i in gi))
        if a != b:
            return EqualityVerdict(False, f.mode, Pattern(tuple(zip(joint, key))))
    return EqualityVerdict(True, f.mode)


def is_endomorphism(f):
    """Does the rule map the subshift into itself?  Exact on Z; local elsewhere.

    On Z it suffices to look at images of global words long enough to hold
    one forbidden pattern after erosion.
    """
    spec = f.subshift
    if not spec.forbidden:
        return True
    if spec.is_z:
        nb = f.neighborhood
        span = max(max(p.support) - min(p.support) + 1 for p in spec.forbidden)
        width = nb[-1] - nb[0] + span
        for row in spec.zgraph.global_array(width).tolist():
            cells = {nb[0] + i: spec.alphabet[a] for i, a in enumerate(row)}
            img = apply(f, Pattern.of(cells))
            if not locally_admissible(spec, img):
                return False
        return True
    grp = spec.group
    work = grp.ball(f.radius + spec.window_radius)
    for p in extend(spec, Pattern(), work):
        if not locally_admissible(spec, apply(f, p)):
            return False
    return True


# -- powers and preperiodicity ---------------------------------------------------------


class PowerCache:
    """``f^0, f^1, ...`` built by successive composition."""

    def __init__(self, f):
        self.f = f
        self.powers = [identity_rule(f.subshift), f]

    def __getitem__(self, n):
        while len(self.powers) <= n:
            self.powers.append(compose(self.powers[-1], self.f))
        return self.powers[n]


@dataclass(frozen=True)
class PreperiodicityVerdict:
    status: str  # "preperiodic" | "not-within-bounds"
    n: int = None
    p: int = None
    mode: str = "exact-z"
    witness: Pattern = None


def preperiodicity(f, n_max, p_max, cache=None):
    """Least ``(n, p)`` in lexicographic order with ``f^n == f^(n+p)``."""
    if n_max < 0 or p_max < 1:
        raise MalformedInput("need n_max >= 0 and p_max >= 1")
    pw = cache or PowerCache(f)
    witness = None
    for n in range(n_max + 1):
        for p in range(1, p_max + 1):
            v = equal(pw[n], pw[n + p])
            if v.equal:
                return PreperiodicityVerdict("preperiodic", n, p, f.mode)
            if witness is None:
                witness = v.witness
    return PreperiodicityVerdict("not-within-bounds", mode=f.mode, witness=witness)


@dataclass(frozen=True)
class NilpotencyVerdict:
    status: str  # "nilpotent" | "not-within-bounds"
    n: int = None
    symbol: str = None
    witness: tuple = None


def nilpotency(f, n_max, cache=None):
    """Least ``n >= 1`` such that ``f^n`` is constant onto a uniform point."""
    spec = f.subshift
    pw = cache or PowerCache(f)
    witness = None
    for n in range(1, n_max + 1):
        fn = pw[n]
        vals = sorted(set(fn.lookup.values()))
        if len(vals) == 1:
            c = vals[0]
            if _uniform_in(spec, c):
                return NilpotencyVerdict("nilpotent", n, c)
        witness = vals
    return NilpotencyVerdict("not-within-bounds", witness=None if witness is None else tuple(witness))


def _uniform_in(spec, c):
    """The uniform point ``c`` contains a forbidden pattern iff it is all ``c``."""
    return not any(all(s == c for s in pat.symbols) for pat in spec.forbidden)


# -- weak preperiodicity on periodic points ----------------------------------------


@dataclass
class WeakProbe:
    status: str  # "all-satisfy" | "counterexample"
    per_point: dict
    uniform: tuple = None  # (max n, lcm p) when all satisfy
    counterexample: object = None


def eventual_period(f, x, limit):
    """Least ``(n, p)`` with ``f^n(x) == f^(n+p)(x)``; ``None`` past ``limit`` steps."""
    seen = {x: 0}
    cur = x
    for t in range(1, limit + 1):
        cur = apply_point(f, cur)
        if cur in seen:
            return seen[cur], t - seen[cur]
        seen[cur] = t
    return None


def weak_preperiodicity_probe(f, sample, n_max, p_max):
    """Per-point eventual periods by iterating the rule on each periodic point."""
    from math import lcm
    per = {}
    for x in sample:
        r = eventual_period(f, x, n_max + p_max)
        if r is None or r[0] > n_max or r[1] > p_max:
            return WeakProbe("counterexample", per, counterexample=x)
        per[x] = r
    N = max((n for n, _ in per.values()), default=0)
    P = 1
    for _, p in per.values():
        P = lcm(P, p)
    return WeakProbe("all-satisfy", per, (N, P))


def uniform_bound_profile(f, periods, n_max, p_max):
    """Uniform ``(n, p)`` over all periodic points of period at most ``P``, for each ``P``.

    A bound is only trusted when it stops changing as ``P`` grows.
    """
    from .symbolic import enumerate_periodic_points
    profile = []
    for P in periods:
        sample = enumerate_periodic_points(f.subshift, P)
        probe = weak_preperiodicity_probe(f, sample, n_max, p_max)
        profile.append((P, probe.uniform if probe.status == "all-satisfy" else None))
    bounds = [b for _, b in profile]
    stable = len(bounds) >= 2 and bounds[-1] is not None and bounds[-1] == bounds[-2]
    return profile, stable


# -- semigroups of rules ------------------------------------------------------------------


@dataclass
class SemigroupReport:
    action: ActionSpec
    order: int
    max_orbit: int
    sample_size: int


def ca_semigroup_action(rules, sample, budget=None):
    """Close a periodic-point sample under the rules and return the finite action."""
    if not rules:
        raise MalformedInput("need at least one rule")
    spec = rules[0].subshift
    for r in rules:
        if r.subshift != spec:
            raise MalformedInput("rules live on different subshifts")
    limit = default_budget() if budget is None else budget
    pts = list(dict.fromkeys(sample))
    seen = set(pts)
    i = 0
    while i < len(pts):
        for r in rules:
            y = apply_point(r, pts[i])
            if y not in seen:
                seen.add(y)
                pts.append(y)
                if len(pts) > limit:
                    raise BudgetExceeded("ca-closure", limit, len(pts))
        i += 1
    pts.sort(key=lambda q: (q.kind, q.dims, q.data))
    names = [r.name or f"r{j}" for j, r in enumerate(rules)]
    if len(set(names)) != len(names):
        names = [f"r{j}" for j in range(len(rules))]
    action = ActionSpec.from_maps(pts, {nm: (lambda x, r=r: apply_point(r, x))
                                        for nm, r in zip(names, rules)},
                                  algebra="semigroup", partial=True, name="ca-semigroup")
    order = len(induced_transformations(action, limit))
    probe = pointwise_periodicity_probe(action, limit)
    return SemigroupReport(action, order, probe.max_orbit, len(pts))
