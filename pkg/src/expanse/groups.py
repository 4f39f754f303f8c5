"""Finitely generated groups with word metrics, balls and horoball surrogates.

Supported groups are the integers, integer lattices, cyclic groups, free
groups and direct products of these.  Elements are kept in a canonical normal
form so that equality of elements is equality of Python values:

=========  =====================================================
kind       normal form
=========  =====================================================
``Z``      ``int``
``Zd``     ``tuple`` of ``d`` ints
``cyclic`` ``int`` residue in ``range(n)``
``free``   reduced ``tuple`` of nonzero letters; ``-i`` is the inverse of ``i``
``product`` ``tuple`` of factor elements
=========  =====================================================

Balls are taken in the left Cayley graph, ``S^n g = {s_1 ... s_n g}``, and the
word metric is ``dist(g, h) = |g h^-1|``, which is invariant under
multiplication from the right.
"""

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import BudgetExceeded, MalformedInput, NoHoroball, default_budget

KINDS = ("Z", "Zd", "cyclic", "free", "product")


def _reduce_word(letters):
    out = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


@dataclass(frozen=True)
class GroupSpec:
    """A supported finitely generated group together with a generating set.

    Use the classmethod constructors rather than the raw fields.  When
    ``generators`` is omitted the standard symmetric set containing the
    identity is used.
    """

    kind: str
    d: int = 1
    n: int = 0
    rank: int = 0
    factors: tuple = ()
    generators: tuple = field(default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedInput(f"unknown group kind {self.kind!r}")
        if self.kind == "Zd" and self.d < 0:
            raise MalformedInput("Zd needs d >= 0")
        if self.kind == "cyclic" and self.n < 1:
            raise MalformedInput("cyclic group needs n >= 1")
        if self.kind == "free" and self.rank < 0:
            raise MalformedInput("free group needs rank >= 0")
        if self.kind == "product":
            if not self.factors or not all(isinstance(f, GroupSpec) for f in self.factors):
                raise MalformedInput("product needs a nonempty tuple of GroupSpec factors")
        if self.generators is None:
            gens = self._default_generators()
        else:
            gens = [self.normalize(g) for g in self.generators]
        gens = tuple(sorted(set(gens)))
        object.__setattr__(self, "generators", gens)
        e = self.identity()
        if e not in gens:
            raise MalformedInput("generating set must contain the identity")
        gset = set(gens)
        for g in gens:
            if self.inv(g) not in gset:
                raise MalformedInput(f"generating set is not symmetric: inverse of {g!r} missing")

    # -- constructors -----------------------------------------------------

    @classmethod
    def integers(cls, generators=None):
        return cls("Z", generators=None if generators is None else tuple(generators))

    @classmethod
    def lattice(cls, d, generators=None):
        return cls("Zd", d=d, generators=None if generators is None else tuple(generators))

    @classmethod
    def cyclic(cls, n, generators=None):
        return cls("cyclic", n=n, generators=None if generators is None else tuple(generators))

    @classmethod
    def free(cls, rank, generators=None):
        return cls("free", rank=rank, generators=None if generators is None else tuple(generators))

    @classmethod
    def product(cls, *factors, generators=None):
        return cls("product", factors=tuple(factors),
                   generators=None if generators is None else tuple(generators))

    # -- group structure --------------------------------------------------

    def identity(self):
        k = self.kind
        if k in ("Z", "cyclic"):
            return 0
        if k == "Zd":
            return (0,) * self.d
        if k == "free":
            return ()
        return tuple(f.identity() for f in self.factors)

    def mul(self, g, h):
        k = self.kind
        if k == "Z":
            return g + h
        if k == "Zd":
            return tuple(a + b for a, b in zip(g, h))
        if k == "cyclic":
            return (g + h) % self.n
        if k == "free":
            return _reduce_word(g + h)
        return tuple(f.mul(a, b) for f, a, b in zip(self.factors, g, h))

    def inv(self, g):
        k = self.kind
        if k == "Z":
            return -g
        if k == "Zd":
            return tuple(-a for a in g)
        if k == "cyclic":
            return (-g) % self.n
        if k == "free":
            return tuple(-a for a in reversed(g))
        return tuple(f.inv(a) for f, a in zip(self.factors, g))

    def is_element(self, g):
        k = self.kind
        if k == "Z":
            return isinstance(g, int) and not isinstance(g, bool)
        if k == "Zd":
            return (isinstance(g, tuple) and len(g) == self.d
                    and all(isinstance(a, int) and not isinstance(a, bool) for a in g))
        if k == "cyclic":
            return isinstance(g, int) and not isinstance(g, bool) and 0 <= g < self.n
        if k == "free":
            return (isinstance(g, tuple)
                    and all(isinstance(a, int) and a != 0 and abs(a) <= self.rank for a in g)
                    and _reduce_word(g) == g)
        return (isinstance(g, tuple) and len(g) == len(self.factors)
                and all(f.is_element(a) for f, a in zip(self.factors, g)))

    def check(self, g):
        if not self.is_element(g):
            raise MalformedInput(f"{g!r} is not a normal-form element of {self.describe()}")
        return g

    def normalize(self, raw):
        """Coerce user or JSON input (lists, one-element lists) into normal form."""
        k = self.kind
        try:
            if k in ("Z", "cyclic"):
                if isinstance(raw, (list, tuple)):
                    if len(raw) != 1:
                        raise MalformedInput(f"expected one coordinate, got {raw!r}")
                    raw = raw[0]
                if isinstance(raw, bool) or not isinstance(raw, int):
                    raise MalformedInput(f"expected an integer, got {raw!r}")
                return raw % self.n if k == "cyclic" else raw
            if k == "Zd":
                if isinstance(raw, int) and self.d == 1:
                    raw = [raw]
                g = tuple(raw)
                if len(g) != self.d or not all(isinstance(a, int) and not isinstance(a, bool) for a in g):
                    raise MalformedInput(f"expected {self.d} integer coordinates, got {raw!r}")
                return g
            if k == "free":
                g = tuple(raw)
                for a in g:
                    if isinstance(a, bool) or not isinstance(a, int) or a == 0 or abs(a) > self.rank:
                        raise MalformedInput(f"bad free-group letter {a!r} (rank {self.rank})")
                return _reduce_word(g)
            parts = tuple(raw)
            if len(parts) != len(self.factors):
                raise MalformedInput(f"expected {len(self.factors)} factor coordinates, got {raw!r}")
            return tuple(f.normalize(a) for f, a in zip(self.factors, parts))
        except TypeError:
            raise MalformedInput(f"cannot read {raw!r} as an element of {self.describe()}")

    def encode(self, g):
        """JSON-friendly encoding; ``normalize`` inverts it."""
        k = self.kind
        if k in ("Z", "cyclic"):
            return [g]
        if k in ("Zd", "free"):
            return list(g)
        return [f.encode(a) for f, a in zip(self.factors, g)]

    # -- metric -----------------------------------------------------------

    def _default_generators(self):
        k = self.kind
        e = self.identity()
        if k == "Z":
            return [-1, 0, 1]
        if k == "Zd":
            gens = [e]
            for i in range(self.d):
                for s in (1, -1):
                    v = [0] * self.d
                    v[i] = s
                    gens.append(tuple(v))
            return gens
        if k == "cyclic":
            return [0, 1 % self.n, (-1) % self.n]
        if k == "free":
            return [()] + [(i,) for i in range(1, self.rank + 1)] + [(-i,) for i in range(1, self.rank + 1)]
        gens = [e]
        for idx, f in enumerate(self.factors):
            for s in f.generators:
                g = list(e)
                g[idx] = s
                gens.append(tuple(g))
        return gens

    @property
    def uses_default_generators(self):
        return self.generators == tuple(sorted(set(self._default_generators())))

    def is_finite(self):
        k = self.kind
        if k == "cyclic":
            return True
        if k == "Zd":
            return self.d == 0
        if k == "free":
            return self.rank == 0
        if k == "Z":
            return False
        return all(f.is_finite() for f in self.factors)

    def word_length(self, g, budget=None):
        """Least ``n`` with ``g`` in ``S^n``."""
        self.check(g)
        if self.uses_default_generators:
            return self._closed_form_length(g)
        return self.bfs_word_length(g, budget)

    def _closed_form_length(self, g):
        k = self.kind
        if k == "Z":
            return abs(g)
        if k == "Zd":
            return sum(abs(a) for a in g)
        if k == "cyclic":
            return min(g, self.n - g) if g else 0
        if k == "free":
            return len(g)
        return sum(f.word_length(a) for f, a in zip(self.factors, g))

    def bfs_word_length(self, g, budget=None):
        """Word length by breadth-first search of the Cayley graph."""
        self.check(g)
        limit = default_budget() if budget is None else budget
        e = self.identity()
        if g == e:
            return 0
        seen = {e}
        frontier = [e]
        n = 0
        while frontier:
            n += 1
            nxt = []
            for h in frontier:
                for s in self.generators:
                    k = self.mul(s, h)
                    if k not in seen:
                        if k == g:
                            return n
                        seen.add(k)
                        nxt.append(k)
            if len(seen) > limit:
                raise BudgetExceeded("ball-size", limit, len(seen))
            frontier = nxt
        raise MalformedInput(f"{g!r} is not reachable from the generating set")

    def distance(self, g, h):
        """Word metric ``|g h^-1|``."""
        return self.word_length(self.mul(g, self.inv(h)))

    def ball(self, n, budget=None):
        """``S^n`` as a sorted tuple of elements."""
        if n < 0:
            raise MalformedInput("ball radius must be >= 0")
        limit = default_budget() if budget is None else budget
        return _ball(self, n, limit)

    def sphere_layers(self, n, budget=None):
        """Tuple of layers: elements of word length exactly 0, 1, ..., n."""
        limit = default_budget() if budget is None else budget
        return _layers(self, n, limit)

    def describe(self):
        k = self.kind
        if k == "Z":
            return "Z"
        if k == "Zd":
            return f"Z^{self.d}"
        if k == "cyclic":
            return f"Z/{self.n}"
        if k == "free":
            return f"F_{self.rank}"
        return " x ".join(f.describe() for f in self.factors)

    # -- JSON -------------------------------------------------------------

    def to_json(self, include_generators=None):
        k = self.kind
        out = {"kind": k}
        if k == "Zd":
            out["d"] = self.d
        elif k == "cyclic":
            out["n"] = self.n
        elif k == "free":
            out["rank"] = self.rank
        elif k == "product":
            out["factors"] = [f.to_json() for f in self.factors]
        if include_generators or (include_generators is None and not self.uses_default_generators):
            out["generators"] = [self.encode(g) for g in self.generators]
        return out

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or "kind" not in data:
            raise MalformedInput("group JSON must be an object with a 'kind'")
        k = data["kind"]
        if k == "Z":
            spec = cls("Z")
        elif k == "Zd":
            spec = cls("Zd", d=int(data["d"]))
        elif k == "cyclic":
            spec = cls("cyclic", n=int(data["n"]))
        elif k == "free":
            spec = cls("free", rank=int(data["rank"]))
        elif k == "product":
            spec = cls("product", factors=tuple(cls.from_json(f) for f in data["factors"]))
        else:
            raise MalformedInput(f"unknown group kind {k!r}")
        if "generators" in data:
            gens = tuple(spec.normalize(g) for g in data["generators"])
            spec = cls(spec.kind, d=spec.d, n=spec.n, rank=spec.rank,
                       factors=spec.factors, generators=gens)
        return spec


@lru_cache(maxsize=256)
def _layers(spec, n, limit):
    e = spec.identity()
    layers = [(e,)]
    seen = {e}
    frontier = [e]
    for _ in range(n):
        nxt = []
        for h in frontier:
            for s in spec.generators:
                k = spec.mul(s, h)
                if k not in seen:
                    seen.add(k)
                    nxt.append(k)
        if len(seen) > limit:
            raise BudgetExceeded("ball-size", limit, len(seen))
        layers.append(tuple(sorted(nxt)))
        frontier = nxt
    return tuple(layers)


@lru_cache(maxsize=256)
def _ball(spec, n, limit):
    layers = _layers(spec, n, limit)
    return tuple(sorted(g for layer in layers for g in layer))


def word_length(g, spec):
    return spec.word_length(g)


def ball(spec, n, budget=None):
    return spec.ball(n, budget)


# -- horoballs --------------------------------------------------------------


@dataclass(frozen=True)
class HoroballApprox:
    """Finite window ``S^r g ∩ S^R`` of a horoball, with ``|g| = r + 1``.

    ``members`` is exactly ``{h in S^R : dist(g, h) <= r}``.  Because
    ``|g| = r + 1`` the identity is never a member while the last letter of
    the geodesic word for ``g`` always is.
    """

    spec: GroupSpec
    R: int
    r: int
    center: object
    direction: tuple
    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "_memberset", frozenset(self.members))

    def __contains__(self, h):
        return h in self._memberset

    def check_invariants(self):
        spec = self.spec
        if spec.identity() in self._memberset:
            return False
        if not self._memberset & set(spec.generators):
            return False
        expected = tuple(h for h in spec.ball(self.R) if spec.distance(self.center, h) <= self.r)
        return expected == self.members


def default_direction(spec):
    e = spec.identity()
    for s in spec.generators:
        if s != e:
            return (s,)
    raise NoHoroball("trivial group has no horoballs")


def geodesic_point(spec, n, direction=None):
    """``s_1 s_2 ... s_n`` with letters cycling through ``direction``.

    Raises ``MalformedInput`` if the result is not at word length ``n``.
    """
    if direction is None:
        direction = default_direction(spec)
    direction = tuple(spec.normalize(s) for s in direction)
    if not direction:
        raise MalformedInput("direction needs at least one generator")
    for s in direction:
        if s not in spec.generators:
            raise MalformedInput(f"direction letter {s!r} is not a generator")
    g = spec.identity()
    for i in range(n):
        g = spec.mul(g, direction[i % len(direction)])
    if spec.word_length(g) != n:
        raise MalformedInput(f"direction {direction!r} is not geodesic at length {n}")
    return g


def horoball_approx(spec, R, direction=None, r=None):
    """Finite surrogate of the horoball obtained along a geodesic direction.

    ``r`` defaults to ``2 R`` and may not be smaller.
    """
    if spec.is_finite():
        raise NoHoroball(f"{spec.describe()} is finite; horoballs need arbitrarily large balls")
    if R < 1:
        raise MalformedInput("horoball window radius R must be >= 1")
    if r is None:
        r = 2 * R
    if r < 2 * R:
        raise MalformedInput("ball radius r must be >= 2R")
    if direction is None:
        direction = default_direction(spec)
    direction = tuple(spec.normalize(s) for s in direction)
    g = geodesic_point(spec, r + 1, direction)
    members = tuple(h for h in spec.ball(R) if spec.distance(g, h) <= r)
    return HoroballApprox(spec, R, r, g, direction, members)


def find_ball_in_horoball(h, t):
    """Some ``c`` with ``S^t c`` inside the window, or ``None``.

    ``None`` only says the window is too small; it says nothing about the
    horoball itself.
    """
    if t < 0:
        raise MalformedInput("t must be >= 0")
    if t > 2 * h.R:
        return None
    spec = h.spec
    inside = h._memberset
    small = spec.ball(t)
    for c in h.members:
        if all(spec.mul(w, c) in inside for w in small):
            return c
    return None
