import pytest
from hypothesis import given
from hypothesis import strategies as st

from expanse.errors import MalformedInput, NoHoroball
from expanse.groups import (GroupSpec, find_ball_in_horoball, geodesic_point, horoball_approx)

Z = GroupSpec.integers()
Z2 = GroupSpec.lattice(2)
F2 = GroupSpec.free(2)
C5 = GroupSpec.cyclic(5)
ZxC3 = GroupSpec.product(GroupSpec.integers(), GroupSpec.cyclic(3))


def free_words(rank=2, max_len=6):
    letters = [i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)]
    return st.lists(st.sampled_from(letters), max_size=max_len).map(F2.normalize)


ELEMENTS = {
    "Z": (Z, st.integers(-8, 8)),
    "Z2": (Z2, st.tuples(st.integers(-4, 4), st.integers(-4, 4))),
    "F2": (F2, free_words()),
    "C5": (C5, st.integers(0, 4)),
    "ZxC3": (ZxC3, st.tuples(st.integers(-4, 4), st.integers(0, 2))),
}


@pytest.mark.parametrize("n, size", [(0, 1), (1, 3), (2, 5), (5, 11)])
def test_integer_balls(n, size):
    assert len(Z.ball(n)) == size
    assert Z.ball(n) == tuple(range(-n, n + 1))


@pytest.mark.parametrize("n", range(5))
def test_lattice_ball_is_a_diamond(n):
    assert len(Z2.ball(n)) == 2 * n * n + 2 * n + 1


@pytest.mark.parametrize("n", range(5))
def test_free_group_ball(n):
    # 1 + 4 (1 + 3 + ... + 3^(n-1)) reduced words
    assert len(F2.ball(n)) == 2 * 3 ** n - 1


def test_cyclic_ball_saturates():
    assert C5.ball(2) == (0, 1, 2, 3, 4)
    assert C5.ball(7) == C5.ball(2)


def test_sphere_layers_partition_the_ball():
    layers = Z2.sphere_layers(3)
    flat = sorted(g for layer in layers for g in layer)
    assert flat == list(Z2.ball(3))
    for n, layer in enumerate(layers):
        assert all(Z2.word_length(g) == n for g in layer)


@pytest.mark.parametrize("name", sorted(ELEMENTS))
def test_metric_axioms(name):
    spec, elems = ELEMENTS[name]

    @given(elems, elems, elems)
    def check(g, h, k):
        d = spec.distance
        assert d(g, g) == 0
        assert d(g, h) == d(h, g)
        assert d(g, k) <= d(g, h) + d(h, k)
        # right multiplication is an isometry of |g h^-1|
        assert d(spec.mul(g, k), spec.mul(h, k)) == d(g, h)

    check()


@pytest.mark.parametrize("name", sorted(ELEMENTS))
def test_closed_form_length_matches_bfs(name):
    spec, elems = ELEMENTS[name]

    @given(elems)
    def check(g):
        assert spec.word_length(g) == spec.bfs_word_length(g)

    check()


@pytest.mark.parametrize("name", sorted(ELEMENTS))
def test_group_axioms(name):
    spec, elems = ELEMENTS[name]

    @given(elems, elems, elems)
    def check(g, h, k):
        e = spec.identity()
        assert spec.mul(g, e) == g == spec.mul(e, g)
        assert spec.mul(g, spec.inv(g)) == e
        assert spec.mul(spec.mul(g, h), k) == spec.mul(g, spec.mul(h, k))

    check()


@pytest.mark.parametrize("name", sorted(ELEMENTS))
def test_encode_normalize_round_trip(name):
    spec, elems = ELEMENTS[name]

    @given(elems)
    def check(g):
        assert spec.normalize(spec.encode(g)) == g

    check()


@pytest.mark.parametrize("spec", [Z, Z2, F2, C5, ZxC3, GroupSpec.integers([-2, 0, 2, 3, -3])])
def test_json_round_trip(spec):
    assert GroupSpec.from_json(spec.to_json()) == spec


def test_custom_generators_use_bfs():
    g = GroupSpec.integers([-3, -2, 0, 2, 3])
    assert not g.uses_default_generators
    assert g.word_length(1) == 2  # 3 - 2
    assert g.word_length(5) == 2
    assert g.word_length(7) == 3


@pytest.mark.parametrize("gens, msg", [
    ([0, 1], "not symmetric"),
    ([-1, 1], "identity"),
])
def test_bad_generating_sets(gens, msg):
    with pytest.raises(MalformedInput, match=msg):
        GroupSpec.integers(gens)


@pytest.mark.parametrize("raw", [1.5, "a", [1, 2], True])
def test_normalize_rejects_junk(raw):
    with pytest.raises(MalformedInput):
        Z.normalize(raw)


def test_free_letters_are_checked():
    with pytest.raises(MalformedInput):
        F2.normalize([3])
    assert F2.normalize([1, -1, 2]) == (2,)


def test_horoball_window_on_z():
    h = horoball_approx(Z, 3)
    assert h.center == -7 or h.center == 7
    assert h.check_invariants()
    assert 0 not in h
    # the window is a half-line inside [-3, 3]
    side = 1 if h.center > 0 else -1
    assert set(h.members) == {side * i for i in range(1, 4)}


def test_horoball_in_both_directions():
    left = horoball_approx(Z, 3, direction=[-1])
    right = horoball_approx(Z, 3, direction=[1])
    assert left.members == (-3, -2, -1)
    assert right.members == (1, 2, 3)


@pytest.mark.parametrize("spec", [Z2, F2, ZxC3])
def test_horoball_invariants_elsewhere(spec):
    h = horoball_approx(spec, 2)
    assert h.check_invariants()


def test_ball_inside_horoball():
    h = horoball_approx(Z2, 3)
    c = find_ball_in_horoball(h, 1)
    assert c is not None
    assert all(Z2.mul(w, c) in h for w in Z2.ball(1))
    assert find_ball_in_horoball(h, 7) is None


def test_finite_groups_have_no_horoballs():
    with pytest.raises(NoHoroball):
        horoball_approx(C5, 2)


def test_geodesic_point_checks_direction():
    assert geodesic_point(Z2, 3, [(1, 0), (0, 1)]) == (2, 1)
    with pytest.raises(MalformedInput, match="not geodesic"):
        geodesic_point(Z, 2, [1, -1])
