"""The coding relation between coordinate sets of a subshift.

Fix the metric ``d(x, y) = 2^-min{|g| : x_g != y_g}`` and any ``eps`` in
``[1/2, 1)``.  Then ``d(x, y) <= eps`` says exactly that ``x`` and ``y`` agree
at the identity, and ``d(h x, h y) <= eps`` says they agree at ``h^-1``.  So
"A eps-codes B" becomes a statement about literal coordinate sets, and this
module stores those coordinate sets directly (already inverted).  The
relation is then equivariant under left translation of coordinates:

    agreement on C forces agreement on D  iff  the same holds for gC, gD.

Two engines decide a query:

* exact mode on Z runs a product automaton over pairs of paths in the
  essential transition graph, so both answers are exact;
* local mode (any group) enumerates the locally admissible patterns on the
  workspace ball and groups them by their restriction to A.  A ``codes``
  answer is sound; a refutation may rest on patterns that do not extend.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvariantViolation, MalformedInput, UnsupportedGroup, default_budget
from .groups import find_ball_in_horoball
from .symbolic import (Pattern, SubshiftSpec, enumerate_periodic_points, extend,
                       is_finite_sft)

CODES = "codes"
REFUTED = "refuted-locally"
CODES_WITH_SET = "codes-with-witness-set"


@dataclass(frozen=True)
class CodingQuery:
    """Does agreement on ``A`` force agreement on ``B``, inside ``S^radius``?"""

    subshift: SubshiftSpec
    A: tuple
    B: tuple
    radius: int
    exact: bool = None

    def __post_init__(self):
        grp = self.subshift.group
        A = tuple(sorted({grp.normalize(a) for a in self.A}))
        B = tuple(sorted({grp.normalize(b) for b in self.B}))
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        if self.radius < 0:
            raise MalformedInput("workspace radius must be >= 0")
        exact = self.exact
        if exact is None:
            exact = self.subshift.is_z
        if exact and not self.subshift.is_z:
            raise UnsupportedGroup("exact mode is available on Z only")
        object.__setattr__(self, "exact", bool(exact))
        for g in A + B:
            if grp.word_length(g) > self.radius:
                raise MalformedInput(f"coordinate {g!r} lies outside the workspace S^{self.radius}")

    @property
    def mode(self):
        return "exact-z" if self.exact else "local"

    def with_sets(self, A=None, B=None):
        return CodingQuery(self.subshift, self.A if A is None else A,
                           self.B if B is None else B, self.radius, self.exact)


@dataclass(frozen=True)
class CodingVerdict:
    result: str
    mode: str
    radius: int
    witness: tuple = None
    minimal_subset: tuple = None

    @property
    def holds(self):
        return self.result != REFUTED

    def to_json(self, group):
        out = {"result": self.result, "mode": self.mode, "radius": self.radius}
        if self.witness is not None:
            out["witness"] = [
                [{"at": group.encode(g), "sym": s} for g, s in p.cells] for p in self.witness]
        if self.minimal_subset is not None:
            out["minimal_subset"] = [group.encode(g) for g in self.minimal_subset]
        return out


# -- exact engine on Z ------------------------------------------------------------


class _PairAutomaton:
    """Pairs of essential paths, advanced one coordinate at a time."""

    def __init__(self, spec):
        zg = spec.zgraph
        self.L = zg.L
        ess = zg.essential
        V = len(ess)
        self.V = V
        pos = {v: i for i, v in enumerate(ess)}
        self.blocks = np.array([zg.vertices[v] for v in ess], dtype=np.int64).reshape(V, zg.L)
        adj = np.zeros((V, V), dtype=np.int64)
        for u, v, _ in zg.essential_edges:
            adj[pos[u], pos[v]] = 1
        self.T = np.kron(adj, adj)
        last = self.blocks[:, -1] if V else np.zeros(0, dtype=np.int64)
        self.same = (last[:, None] == last[None, :]).reshape(-1)
        # first-block symbol pairs, indexed by pair state
        self.first_u = np.repeat(self.blocks, V, axis=0)
        self.first_v = np.tile(self.blocks, (V, 1))

    def run(self, lo, n, A, B):
        """Reachable (no-diff, diff) state vectors at each step."""
        L = self.L
        N = max(n, L)
        agree = np.ones(self.V * self.V, dtype=bool)
        diff_b = np.zeros(self.V * self.V, dtype=bool)
        for i in range(L):
            p = lo + i
            eq = self.first_u[:, i] == self.first_v[:, i]
            if p in A:
                agree &= eq
            elif p in B:
                diff_b |= ~eq
        s0 = agree & ~diff_b
        s1 = agree & diff_b
        hist = [(s0, s1)]
        T = self.T
        for j in range(1, N - L + 1):
            p = lo + j + L - 1
            t0 = (s0.astype(np.int64) @ T) > 0
            t1 = (s1.astype(np.int64) @ T) > 0
            if p in A:
                s0, s1 = t0 & self.same, t1 & self.same
            elif p in B:
                s0, s1 = t0 & self.same, t1 | (t0 & ~self.same)
            else:
                s0, s1 = t0, t1
            hist.append((s0, s1))
        return hist

    def witness(self, hist, lo, n, A, B, alphabet):
        L, V = self.L, self.V
        s1 = hist[-1][1]
        state = int(np.flatnonzero(s1)[0])
        flag = 1
        path = [state]
        for j in range(len(hist) - 1, 0, -1):
            p = lo + j + L - 1
            prev0, prev1 = hist[j - 1]
            col = self.T[:, state] > 0
            if flag and p in B and p not in A and not self.same[state]:
                cands = np.flatnonzero(col & (prev0 | prev1))
                q = int(cands[0])
                flag = 1 if prev1[q] else 0
            else:
                cands = np.flatnonzero(col & (prev1 if flag else prev0))
                q = int(cands[0])
            state = q
            path.append(q)
        path.reverse()
        u0, v0 = divmod(path[0], V)
        xs = list(self.blocks[u0])
        ys = list(self.blocks[v0])
        for st in path[1:]:
            u, v = divmod(st, V)
            xs.append(self.blocks[u][-1])
            ys.append(self.blocks[v][-1])
        x = Pattern(tuple((lo + i, alphabet[int(a)]) for i, a in enumerate(xs[:n])))
        y = Pattern(tuple((lo + i, alphabet[int(a)]) for i, a in enumerate(ys[:n])))
        return x, y


@lru_cache(maxsize=256)
def _pair_automaton(spec):
    return _PairAutomaton(spec)


def _exact_z(q, want_witness=True):
    spec = q.subshift
    rho = q.radius
    lo, n = -rho, 2 * rho + 1
    auto = _pair_automaton(spec)
    A, B = set(q.A), set(q.B)
    if auto.V == 0:
        return CodingVerdict(CODES, q.mode, rho)
    hist = auto.run(lo, n, A, B)
    if not hist[-1][1].any():
        return CodingVerdict(CODES, q.mode, rho)
    w = auto.witness(hist, lo, n, A, B, spec.alphabet) if want_witness else None
    return CodingVerdict(REFUTED, q.mode, rho, witness=w)


# -- local engine ----------------------------------------------------------------


@lru_cache(maxsize=64)
def _workspace_patterns(spec, rho, budget):
    ball = spec.group.ball(rho)
    return ball, tuple(extend(spec, Pattern(), ball, budget=budget))


def _local(q):
    spec = q.subshift
    ball, pats = _workspace_patterns(spec, q.radius, default_budget())
    groups = {}
    for p in pats:
        d = p.as_dict()
        key = tuple(d[a] for a in q.A)
        val = tuple(d[b] for b in q.B)
        seen = groups.get(key)
        if seen is None:
            groups[key] = (val, p)
        elif seen[0] != val:
            return CodingVerdict(REFUTED, q.mode, q.radius, witness=(seen[1], p))
    return CodingVerdict(CODES, q.mode, q.radius)


def codes(q, minimal=False):
    """Decide the query; with ``minimal`` a greedy coding subset of ``A`` is attached."""
    if set(q.B) <= set(q.A):
        v = CodingVerdict(CODES, q.mode, q.radius)
    elif q.exact:
        v = _exact_z(q)
    else:
        v = _local(q)
    if minimal and v.result == CODES:
        F = minimal_coding_subset(q)
        v = CodingVerdict(CODES_WITH_SET, q.mode, q.radius, minimal_subset=F)
    return v


def holds(q):
    return codes(q).holds


def brute_force_codes(q):
    """Independent check by grouping all workspace patterns on their A-part.

    Exact mode reads the globally admissible words of the window from the
    transition graph; local mode uses the backtracking enumeration.
    """
    if not q.exact:
        return _local(q).holds
    spec = q.subshift
    if not q.B:
        return True
    # global admissibility on Z does not depend on the surrounding window,
    # so the hull of A and B is enough
    lo = min(q.A + q.B)
    arr = _window_array(spec, max(q.A + q.B) - lo + 1)
    if arr.shape[0] == 0:
        return True
    k = len(spec.alphabet)
    A = [a - lo for a in q.A]
    B = [b - lo for b in q.B if b not in q.A]
    if not B:
        return True
    ka = arr[:, A] @ (k ** np.arange(len(A), dtype=np.int64))
    kb = arr[:, B] @ (k ** np.arange(len(B), dtype=np.int64))
    if k ** (len(A) + len(B)) > 1 << 24:
        joint = np.unique(ka * k ** len(B) + kb)
        return len(np.unique(joint // k ** len(B))) == len(joint)
    seen = np.zeros((k ** len(A), k ** len(B)), dtype=bool)
    seen[ka, kb] = True
    return bool((seen.sum(axis=1) <= 1).all())


@lru_cache(maxsize=64)
def _window_array(spec, n):
    # the oracle is exhaustive by design, so its cap is the full word count
    cap = max(default_budget(), len(spec.alphabet) ** n)
    return spec.zgraph.global_array(n, budget=cap).astype(np.int64)


def minimal_coding_subset(q):
    """Inclusion-minimal ``F`` inside ``A`` that still codes ``B`` (greedy removal)."""
    if not codes(q).holds:
        raise MalformedInput("minimal_coding_subset needs a query whose answer is 'codes'")
    F = list(q.A)
    for a in list(q.A):
        trial = [b for b in F if b != a]
        if codes(q.with_sets(A=trial)).holds:
            F = trial
    return tuple(F)


# -- algebraic laws ------------------------------------------------------------


LAWS = ("oracle", "union", "shift", "transitivity", "monotonicity")


@dataclass
class LawReport:
    seed: int
    subshifts: int
    pairs: int
    queries: int
    violations: list

    @property
    def ok(self):
        return not self.violations


def _random_set(rng, lo, hi, max_size=5):
    pool = list(range(lo, hi + 1))
    return tuple(sorted(rng.sample(pool, rng.randint(1, min(max_size, len(pool))))))


def check_coding_laws(spec, rng, pairs, radius):
    """Check the coding laws on ``pairs`` random pairs of subsets of ``[-radius, radius]``.

    Every verdict used is also compared with :func:`brute_force_codes`.
    Returns ``(queries, violations)``.
    """
    memo = {}

    def ok(A, B):
        key = (tuple(A), tuple(B))
        if key not in memo:
            q = CodingQuery(spec, A, B, radius)
            fast, slow = codes(q).holds, brute_force_codes(q)
            if fast != slow:
                violations.append({"law": "oracle", "A": list(A), "B": list(B),
                                   "engine": fast, "oracle": slow})
            memo[key] = fast
        return memo[key]

    def fail(law, **sets):
        violations.append({"law": law, **{k: list(v) for k, v in sets.items()}})

    violations = []
    for _ in range(pairs):
        A = _random_set(rng, -radius, radius)
        B = _random_set(rng, -radius, radius)
        ab = ok(A, B)
        B2 = _random_set(rng, -radius, radius)
        if ab and ok(A, B2) and not ok(A, tuple(sorted(set(B) | set(B2)))):
            fail("union", A=A, B=B, B2=B2)
        lo, hi = min(A + B), max(A + B)
        g = rng.randint(-radius - lo, radius - hi)
        if ok(tuple(a + g for a in A), tuple(b + g for b in B)) != ab:
            fail("shift", A=A, B=B, g=(g,))
        C = _random_set(rng, -radius, radius)
        if ab and ok(B, C) and not ok(A, C):
            fail("transitivity", A=A, B=B, C=C)
        A2 = tuple(sorted(set(A) | set(_random_set(rng, -radius, radius, 3))))
        B2 = tuple(b for b in B if rng.random() < 0.6) or B[:1]
        if ab and not ok(A2, B2):
            fail("monotonicity", A=A, B=B, A2=A2, B2=B2)
    return len(memo), violations


def coding_law_suite(seed, subshifts=20, pairs=200, radius=6):
    """Run :func:`check_coding_laws` on ``subshifts`` seeded random Z-SFTs."""
    import random

    from .symbolic import random_z_sft

    rng = random.Random(seed)
    queries = 0
    violations = []
    for i in range(subshifts):
        spec = random_z_sft(rng)
        n, bad = check_coding_laws(spec, rng, pairs, radius)
        queries += n
        for v in bad:
            v["subshift"] = i
        violations += bad
    return LawReport(seed, subshifts, pairs, queries, violations)


# -- balls and expansiveness ------------------------------------------------------


def ball_query(spec, r, rho, k=1, exact=None):
    grp = spec.group
    return CodingQuery(spec, grp.ball(r), grp.ball(r + k), rho, exact)


def ball_codes_next(spec, r, rho, exact=None):
    """Does ``S^r`` code ``S^(r+1)`` inside ``S^rho``?"""
    if r + 1 > rho:
        raise MalformedInput("need r + 1 <= rho")
    return codes(ball_query(spec, r, rho, 1, exact)).holds


@dataclass(frozen=True)
class ExpansiveCertificate:
    radius: int = None
    bound: int = None
    exact_count: int = None
    refutations: dict = field(default_factory=dict)

    @property
    def found(self):
        return self.radius is not None


def expansive_radius(spec, r_max, rho, exact=None):
    """Least ``r`` in ``1..r_max`` with ``S^r`` coding ``S^(r+1)``.

    A hit yields ``|X| <= |alphabet|^|S^r|``.  On Z that bound is checked
    against the exact count from the transition graph.
    """
    if rho < r_max + 1:
        raise MalformedInput("need rho >= r_max + 1")
    refutations = {}
    for r in range(1, r_max + 1):
        v = codes(ball_query(spec, r, rho, 1, exact))
        if v.holds:
            bound = len(spec.alphabet) ** len(spec.group.ball(r))
            count = None
            if spec.is_z:
                fin = is_finite_sft(spec)
                if fin.status != "finite" or fin.count > bound:
                    raise InvariantViolation(
                        f"S^{r} codes S^{r + 1} but the SFT is {fin.status} (count {fin.count})")
                count = fin.count
            return ExpansiveCertificate(r, bound, count, refutations)
        refutations[r] = v.witness
    return ExpansiveCertificate(None, None, None, refutations)


# -- horoballs ---------------------------------------------------------------------


@dataclass(frozen=True)
class HoroballProbe:
    result: str  # "codes" | "non-coding-pair"
    witness: tuple = None
    mode: str = "exact-z"


def horoball_coding_probe(spec, h, rho, exact=None):
    """Do the window's members code the identity coordinate?"""
    grp = spec.group
    if h.spec != grp:
        raise MalformedInput("horoball and subshift live on different groups")
    q = CodingQuery(spec, h.members, (grp.identity(),), rho, exact)
    v = codes(q)
    if v.holds:
        return HoroballProbe("codes", mode=q.mode)
    return HoroballProbe("non-coding-pair", v.witness, q.mode)


def _orbit_radius(spec, x, budget):
    """Least ``n`` with every translate of ``x`` equal to some ``g x``, ``g`` in ``S^n``."""
    grp = spec.group
    orbit = set(x.orbit())
    n = 0
    while True:
        reached = {x.shifted(g) for g in grp.ball(n)}
        if reached == orbit:
            return n
        n += 1
        if n > budget:
            raise InvariantViolation("orbit radius search did not terminate")


def pointwise_periodic_coding_argument(spec, h, N, rho, period_bound=None):
    """Replay, on periodic points, the step "the horoball codes the group".

    The report lists: whether the SFT has only periodic points (exact on Z);
    the largest orbit radius (each orbit is reached from ``S^n``); a ball of
    that radius inside the horoball window; every pair of enumerated periodic
    points agreeing on the window, and whether all such pairs coincide; and
    whether the window codes the whole workspace ``S^rho``.
    """
    grp = spec.group
    if h.spec != grp:
        raise MalformedInput("horoball and subshift live on different groups")
    trace = []
    if spec.is_z:
        fin = is_finite_sft(spec)
        hypothesis = fin.status == "finite"
        trace.append({"step": "hypothesis", "finite": hypothesis,
                      "count": fin.count, "witness": fin.witness})
        bound = period_bound or (max(fin.count, 1) if hypothesis else 2 * rho + 1)
        points = enumerate_periodic_points(spec, bound)
    elif grp.kind == "Zd" and grp.d == 2:
        hypothesis = None
        sizes = period_bound or [(a, b) for a in (1, 2, 3) for b in (1, 2, 3)]
        points = enumerate_periodic_points(spec, sizes)
        trace.append({"step": "hypothesis", "finite": None, "note": "undecided off Z"})
    else:
        raise UnsupportedGroup("periodic points are enumerated on Z and Z^2 only")
    radii = [_orbit_radius(spec, x, 10 * N + 100) for x in points]
    t = max(radii, default=0)
    trace.append({"step": "orbit-radius", "points": len(points), "max_radius": t,
                  "within_N": t <= N})
    center = find_ball_in_horoball(h, t) if t <= N else None
    trace.append({"step": "ball-in-window", "t": t,
                  "center": None if center is None else grp.encode(center)})
    members = h.members
    by_key = {}
    pairs = []
    for x in points:
        key = tuple(x.value(g) for g in members)
        for y in by_key.get(key, []):
            pairs.append((y, x))
        by_key.setdefault(key, []).append(x)
    trace.append({"step": "agreeing-pairs", "distinct_pairs": len(pairs)})
    window = CodingQuery(spec, members, grp.ball(rho), rho, None if spec.is_z else False)
    v = codes(window)
    trace.append({"step": "window-codes-workspace", "result": v.result, "mode": v.mode})
    collapsed = not pairs
    passed = bool(hypothesis is not False and collapsed and center is not None and v.holds)
    return {
        "passed": passed,
        "hypothesis_holds": hypothesis,
        "collapsed": collapsed,
        "codes_workspace": v.holds,
        "orbit_radius": t,
        "ball_center": None if center is None else grp.encode(center),
        "pair_example": None if not pairs else [repr(pairs[0][0]), repr(pairs[0][1])],
        "trace": trace,
    }
