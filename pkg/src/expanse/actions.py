"""Right actions of finitely generated semigroups on explicit state spaces.

An :class:`ActionSpec` lists its states and, for each generator, the image of
every state as an index array.  Actions are written on the right: the word
``(s1, s2)`` sends ``x`` to ``(x . s1) . s2``.  Lazy actions, where the state
space is only reachable through callables, cover samples of infinite spaces.
"""

from collections import deque
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import BudgetExceeded, InvariantViolation, MalformedInput, default_budget

ALGEBRAS = ("semigroup", "monoid", "group")


@dataclass(frozen=True, eq=False)
class ActionSpec:
    """A finite action: ``generators`` maps each name to a tuple of state indices.

    ``partial`` marks a finite sample of a larger (symbolic) space, so
    conclusions about the sample do not transfer to the space.
    """

    states: tuple
    generators: dict
    algebra: str = "semigroup"
    partial: bool = False
    name: str = ""

    def __post_init__(self):
        if self.algebra not in ALGEBRAS:
            raise MalformedInput(f"algebra must be one of {ALGEBRAS}")
        n = len(self.states)
        if len(set(self.states)) != n:
            raise MalformedInput("states must be distinct")
        if not self.generators:
            raise MalformedInput("an action needs at least one generator")
        gens = {}
        for g, arr in self.generators.items():
            arr = tuple(int(i) for i in arr)
            if len(arr) != n or any(not 0 <= i < n for i in arr):
                raise MalformedInput(f"generator {g!r} is not a total map on the {n} states")
            gens[str(g)] = arr
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})
        ident = tuple(range(n))
        if self.algebra in ("monoid", "group") and ident not in gens.values():
            raise MalformedInput(f"{self.algebra} actions must list the identity map")
        if self.algebra == "group":
            maps = set(gens.values())
            for g, arr in gens.items():
                if len(set(arr)) != n:
                    raise MalformedInput(f"generator {g!r} is not a bijection")
                inv = [0] * n
                for i, j in enumerate(arr):
                    inv[j] = i
                if tuple(inv) not in maps:
                    raise MalformedInput(f"inverse of generator {g!r} is not listed")

    @property
    def names(self):
        return tuple(self.generators)

    def index(self, x):
        try:
            return self._index[x]
        except KeyError:
            raise MalformedInput(f"{x!r} is not a state of this action")

    def act(self, x, word):
        i = self.index(x)
        for g in word:
            i = self.generators[g][i]
        return self.states[i]

    def act_index(self, i, word):
        for g in word:
            i = self.generators[g][i]
        return i

    def to_json(self):
        return {
            "states": [str(s) for s in self.states],
            "generators": {g: list(a) for g, a in self.generators.items()},
            "algebra": self.algebra,
            "partial": self.partial,
        }

    @classmethod
    def from_json(cls, data):
        try:
            states = tuple(data["states"])
            gens = {}
            for g, arr in data["generators"].items():
                if all(isinstance(v, int) and not isinstance(v, bool) for v in arr):
                    gens[g] = arr
                else:
                    idx = {s: i for i, s in enumerate(states)}
                    gens[g] = [idx[v] for v in arr]
            return cls(states, gens, data.get("algebra", "semigroup"),
                       bool(data.get("partial", False)), data.get("name", ""))
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad action JSON: missing or malformed {exc}")

    @classmethod
    def from_maps(cls, states, maps, algebra="semigroup", partial=False, name=""):
        """Build from callables ``state -> state`` (applied to every state)."""
        states = tuple(states)
        idx = {s: i for i, s in enumerate(states)}
        gens = {}
        for g, f in maps.items():
            try:
                gens[g] = tuple(idx[f(s)] for s in states)
            except KeyError as exc:
                raise MalformedInput(f"generator {g!r} leaves the state space at {exc}")
        return cls(states, gens, algebra, partial, name)


@dataclass(frozen=True, eq=False)
class LazyAction:
    """Generators given as callables on hashable states; the space may be infinite."""

    maps: dict
    seeds: tuple
    name: str = ""

    @property
    def names(self):
        return tuple(self.maps)

    def step(self, x, g):
        return self.maps[g](x)


# -- orbits ------------------------------------------------------------------------


@dataclass
class OrbitReport:
    seed: object
    orbit: tuple
    witnesses: dict
    complete: bool

    @property
    def size(self):
        return len(self.orbit) if self.complete else None


@dataclass
class InverseOrbitReport:
    target: object
    inverse_orbit: tuple
    witnesses: dict
    complete: bool

    @property
    def size(self):
        return len(self.inverse_orbit) if self.complete else None


def _neighbours(a, x):
    if isinstance(a, ActionSpec):
        i = a.index(x)
        return [(g, a.states[arr[i]]) for g, arr in a.generators.items()]
    return [(g, a.step(x, g)) for g in a.names]


def orbit(a, x, budget=None):
    """``x . M`` by breadth-first search, with a shortlex-least word for each element."""
    limit = default_budget() if budget is None else budget
    if isinstance(a, ActionSpec):
        a.index(x)
    words = {}
    if getattr(a, "algebra", "semigroup") != "semigroup":
        words[x] = ()
    queue = deque([(x, ())])
    expanded = {x}
    complete = True
    while queue:
        y, w = queue.popleft()
        for g, z in _neighbours(a, y):
            if z not in words:
                words[z] = w + (g,)
            if z not in expanded:
                expanded.add(z)
                queue.append((z, w + (g,)))
        if len(words) > limit:
            complete = False
            break
    orb = tuple(sorted(words, key=_state_key))
    report = OrbitReport(x, orb, words, complete)
    if complete:
        for y, w in words.items():
            if _act(a, x, w) != y:
                raise InvariantViolation(f"witness word {w} does not reach {y!r}")
        for y in words:
            for _, z in _neighbours(a, y):
                if z not in words:
                    raise InvariantViolation("orbit is not closed under the generators")
    return report


def _act(a, x, word):
    if isinstance(a, ActionSpec):
        return a.act(x, word)
    for g in word:
        x = a.step(x, g)
    return x


def _state_key(s):
    return (type(s).__name__, str(s))


def action_graph(a):
    """Forward edges ``(i, g, j)`` of a finite action."""
    return [(i, g, arr[i]) for g, arr in a.generators.items() for i in range(len(a.states))]


def inverse_orbit(a, x, budget=None):
    """All ``y`` with ``x`` in ``y . M``, by reverse BFS over the action graph."""
    if not isinstance(a, ActionSpec):
        raise MalformedInput("inverse orbits need an explicit finite action")
    limit = default_budget() if budget is None else budget
    t = a.index(x)
    preds = [[] for _ in a.states]
    for g, arr in a.generators.items():
        for i, j in enumerate(arr):
            preds[j].append((g, i))
    words = {}
    if a.algebra != "semigroup":
        words[t] = ()
    queue = deque([(t, ())])
    expanded = {t}
    complete = True
    while queue:
        j, w = queue.popleft()
        for g, i in preds[j]:
            if i not in words:
                words[i] = (g,) + w
            if i not in expanded:
                expanded.add(i)
                queue.append((i, (g,) + w))
        if len(words) > limit:
            complete = False
            break
    out = {a.states[i]: w for i, w in words.items()}
    for y, w in out.items():
        if a.act(y, w) != x:
            raise InvariantViolation(f"{y!r} . {w} does not reach {x!r}")
    return InverseOrbitReport(x, tuple(sorted(out, key=_state_key)), out, complete)


# -- bounded orbits ------------------------------------------------------------------


@dataclass
class ClosureResult:
    closed: bool
    orbit: tuple = None
    witness: tuple = None


def _layers(a, x, k):
    """``x . S^j`` for ``j = 1..k`` as dicts state -> least word."""
    layers = []
    cur = {x: ()}
    for _ in range(k):
        nxt = {}
        for y in sorted(cur, key=lambda s: (len(cur[s]), cur[s])):
            w = cur[y]
            for g, z in _neighbours(a, y):
                cand = w + (g,)
                if z not in nxt or cand < nxt[z]:
                    nxt[z] = cand
        layers.append(nxt)
        cur = nxt
    return layers


def bounded_orbit_closure(a, x, k):
    """If every word of length ``k`` acts on ``x`` like a shorter one, ``x.M = x.S^{<k}``."""
    if k <= 1:
        raise MalformedInput("k must be > 1")
    layers = _layers(a, x, k)
    shorter = {}
    for layer in layers[:-1]:
        for y, w in layer.items():
            shorter.setdefault(y, w)
    for y in sorted(layers[-1], key=lambda s: layers[-1][s]):
        if y not in shorter:
            return ClosureResult(False, witness=layers[-1][y])
    orb = tuple(sorted(shorter, key=_state_key))
    full = orbit(a, x)
    if full.complete and set(full.orbit) != set(orb):
        raise InvariantViolation("closure differs from the breadth-first orbit")
    return ClosureResult(True, orbit=orb)


# -- the universal action and N_k -------------------------------------------------


def _words(names, n):
    return product(names, repeat=n)


@dataclass
class NkResult:
    k: int
    N: int
    universal_size: int
    table: dict
    representatives: dict = field(repr=False, default_factory=dict)

    def reduce(self, word):
        """``[m]`` for a word of length ``N``."""
        return self.table[tuple(word)]


def universal_action(k, budget=None):
    """Disjoint union over all ``k``-tuples of self-maps of ``{0..k}``.

    Returns the generator arrays (one per generator, each of length
    ``l (k + 1)``) where ``l = ((k+1)^(k+1))^k``.
    """
    m = k + 1
    maps = list(product(range(m), repeat=m))
    ell = len(maps) ** k
    size = ell * m
    limit = default_budget() if budget is None else budget
    if size > limit:
        raise BudgetExceeded("universal-action", limit, size)
    arrs = np.zeros((k, size), dtype=np.int32)
    for t, tup in enumerate(product(range(len(maps)), repeat=k)):
        base = t * m
        for g in range(k):
            f = maps[tup[g]]
            arrs[g, base:base + m] = base + np.array(f)
    return arrs


def compute_Nk(k, budget=None):
    """Least ``N`` such that on the universal action every word of length ``N``
    agrees with a word of length ``1..N-1``; returns it with a reduction table.
    """
    if k < 1:
        raise MalformedInput("k must be >= 1")
    limit = default_budget() if budget is None else budget
    arrs = universal_action(k, limit)
    names = tuple(f"s{i + 1}" for i in range(k))
    size = arrs.shape[1]
    reps = {}  # transformation bytes -> shortlex-least word
    layer = {}
    for g in range(k):
        key = arrs[g].tobytes()
        if key not in layer:
            layer[key] = ((names[g],), arrs[g])
    for key, (w, _) in layer.items():
        reps.setdefault(key, w)
    N = 1
    while True:
        N += 1
        nxt = {}
        for key in sorted(layer, key=lambda kk: layer[kk][0]):
            w, t = layer[key]
            for g in range(k):
                nt = arrs[g][t]
                nk = nt.tobytes()
                if nk not in nxt:
                    nxt[nk] = (w + (names[g],), nt)
        if all(kk in reps for kk in nxt):
            break
        for kk, (w, _) in nxt.items():
            reps.setdefault(kk, w)
        layer = nxt
        # every stored transformation is a table of `size` integers
        if len(reps) * size > 50 * limit:
            raise BudgetExceeded("Nk-stored-entries", 50 * limit, len(reps) * size)
    count = k ** N
    if count > limit:
        raise BudgetExceeded("Nk-table", limit, count)
    table = {}
    for w in _words(names, N):
        t = np.arange(size, dtype=np.int32)
        for g in w:
            t = arrs[names.index(g)][t]
        short = reps[t.tobytes()]
        if not len(short) < N:
            raise InvariantViolation(f"word {w} has no shorter equivalent")
        table[w] = short
    result = NkResult(k, N, size, table, reps)
    _verify_on_universal(result, arrs, names)
    return result


def _verify_on_universal(res, arrs, names):
    for w, short in res.table.items():
        a = np.arange(arrs.shape[1], dtype=np.int32)
        b = a.copy()
        for g in w:
            a = arrs[names.index(g)][a]
        for g in short:
            b = arrs[names.index(g)][b]
        if not np.array_equal(a, b):
            raise InvariantViolation(f"table entry {w} -> {short} fails on the universal action")


# -- probes -------------------------------------------------------------------------


@dataclass
class ProbeReport:
    status: str  # "all-finite" | "infinite-witness" | "inconclusive"
    max_orbit: int = None
    partial: bool = False
    witness: object = None
    orbit_sizes: dict = None


def pointwise_periodicity_probe(a, budget=None):
    """Orbit of every state (or every seed of a lazy action) within ``budget``."""
    limit = default_budget() if budget is None else budget
    seeds = a.states if isinstance(a, ActionSpec) else a.seeds
    sizes = {}
    for x in seeds:
        rep = orbit(a, x, limit)
        if not rep.complete:
            # a finite explicit space cannot overflow unless the budget is tiny
            return ProbeReport("inconclusive", partial=True, witness=x, orbit_sizes=sizes)
        sizes[x] = rep.size
    partial = a.partial if isinstance(a, ActionSpec) else True
    return ProbeReport("all-finite", max(sizes.values(), default=0), partial, orbit_sizes=sizes)


def induced_transformations(a, budget=None):
    """All maps induced by nonempty words, with a shortlex-least word for each."""
    limit = default_budget() if budget is None else budget
    names = a.names
    gens = [a.generators[g] for g in names]
    found = {}
    queue = deque()
    for g, arr in zip(names, gens):
        if arr not in found:
            found[arr] = (g,)
            queue.append(arr)
    while queue:
        t = queue.popleft()
        w = found[t]
        for g, arr in zip(names, gens):
            nt = tuple(arr[i] for i in t)
            if nt not in found:
                found[nt] = w + (g,)
                queue.append(nt)
                if len(found) > limit:
                    raise BudgetExceeded("induced-transformations", limit, len(found))
    return found


def finite_dense_family(a, eps, metric=None):
    """Words ``F`` such that every element acts within ``eps`` of some ``f`` in ``F``.

    The states themselves form the spanning set; group elements are bucketed
    by the images of those states and one shortlex-least word is kept per
    bucket.  ``metric`` is a state-by-state matrix (discrete by default).
    """
    if a.algebra != "group":
        raise MalformedInput("finite_dense_family needs a group action")
    n = len(a.states)
    if metric is None:
        D = 1.0 - np.eye(n)
    else:
        D = np.asarray(metric, dtype=float)
        if D.shape != (n, n):
            raise MalformedInput("metric must be an n x n matrix")
    maps = induced_transformations(a)
    ordered = sorted(maps.items(), key=lambda kv: (len(kv[1]), kv[1]))
    chosen = []
    for t, w in ordered:
        t_arr = np.array(t)
        if not any(D[t_arr, np.array(f)].max(initial=0.0) <= eps for f, _ in chosen):
            chosen.append((t, w))
    for t in maps:
        t_arr = np.array(t)
        if not any(D[t_arr, np.array(f)].max(initial=0.0) <= eps for f, _ in chosen):
            raise InvariantViolation("dense family misses an element")
    return [w for _, w in chosen]


# -- corpus actions ------------------------------------------------------------------


def monotone_truncation(L):
    """Monotone one-sided 0/1 sequences under the shift, kept to ``L + 2`` points.

    The points are ``1^n 0^inf`` for ``n = 0..L`` and ``1^inf``.  Each is
    written as a word of length ``L + 1`` whose last symbol repeats forever,
    and the shift drops the first symbol and repeats the last one, so the
    truncation is invariant and agrees with the shift on every point.
    """
    if L < 1:
        raise MalformedInput("L must be >= 1")
    n = L + 1
    states = tuple("1" * j + "0" * (n - j) for j in range(L + 1)) + ("1" * n,)
    return ActionSpec.from_maps(
        states, {"id": lambda w: w, "shift": lambda w: w[1:] + w[-1]},
        algebra="monoid", name=f"monotone-truncation(L={L})")


def sign_flip_truncation(n):
    """The first ``n`` generating flips of a countable sum of Z/2 acting on two rays.

    States ``(s, j)`` stand for the points ``(s, 1/j)`` and ``(s, 0)`` for
    ``j = 0``; flip ``j`` changes the sign at level ``j`` only.
    """
    if n < 1:
        raise MalformedInput("n must be >= 1")
    states = tuple(f"{s}{j}" for j in range(n + 1) for s in "+-")

    def flip(j):
        def f(st):
            if int(st[1:]) == j:
                return ("-" if st[0] == "+" else "+") + st[1:]
            return st
        return f

    maps = {"e": lambda st: st}
    for j in range(1, n + 1):
        maps[f"t{j}"] = flip(j)
    return ActionSpec.from_maps(states, maps, algebra="group", name=f"sign-flip-truncation(n={n})")


def cyclic_action(n):
    """Z/n acting on itself by +1 (with -1 and the identity listed)."""
    states = tuple(range(n))
    return ActionSpec.from_maps(states, {
        "e": lambda i: i, "+1": lambda i: (i + 1) % n, "-1": lambda i: (i - 1) % n},
        algebra="group", name=f"cyclic({n})")


def shift_on_periodic_points(spec, bound):
    """The shift (and its inverse) on all periodic points of period at most ``bound``."""
    from .symbolic import enumerate_periodic_points
    pts = enumerate_periodic_points(spec, bound)
    states = tuple(pts)
    return ActionSpec.from_maps(states, {
        "e": lambda x: x, "shift": lambda x: x.shifted(1), "unshift": lambda x: x.shifted(-1)},
        algebra="group", partial=True, name="shift-on-periodic-points")


def aperiodic_shift_sample():
    """The one-sided shift on the tails of the Fibonacci word, a lazy infinite orbit.

    States are offsets into the word; the offset ``i`` stands for the tail
    starting there, and no two tails coincide.
    """
    return LazyAction({"shift": lambda i: i + 1}, (0,), name="fibonacci-tails")


def pointed_instances(k):
    """All ``(maps, point)`` with ``k`` generators on ``{0..s-1}``, ``s <= k + 1``."""
    out = []
    for s in range(1, k + 2):
        maps = list(product(range(s), repeat=s))
        for tup in product(maps, repeat=k):
            for y in range(s):
                out.append((tup, y))
    return out


def verify_Nk_oracle(res):
    """Check ``y . m == y . [m]`` over every small pointed action; returns (instances, disagreements)."""
    k = res.k
    bad = 0
    inst = pointed_instances(k)
    names = tuple(f"s{i + 1}" for i in range(k))
    for tup, y in inst:
        for w, short in res.table.items():
            a = y
            for g in w:
                a = tup[names.index(g)][a]
            b = y
            for g in short:
                b = tup[names.index(g)][b]
            if a != b:
                bad += 1
    return len(inst), bad
