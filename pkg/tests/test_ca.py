import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import golden
from expanse.ca import (LocalRule, and_rule, apply, apply_point, ca_semigroup_action, compose,
                        constant_rule, equal, eventual_period, from_function, identity_rule,
                        is_endomorphism, nilpotency, preperiodicity, shift_rule,
                        uniform_bound_profile, weak_preperiodicity_probe)
from expanse.errors import MalformedInput
from expanse.groups import GroupSpec
from expanse.symbolic import (Pattern, PeriodicPoint, enumerate_periodic_points, full_shift,
                              golden_mean)

FS = full_shift()
GM = golden_mean()


def random_rule(seed, spec=FS):
    rng = random.Random(seed)
    nb = sorted(rng.sample(range(-1, 2), rng.randint(1, 2)))
    images = {}

    def fn(key):
        return images.setdefault(key, rng.choice(spec.alphabet))

    return from_function(spec, nb, fn)


def test_identity_is_preperiodic_0_1():
    v = preperiodicity(identity_rule(FS), 4, 4)
    assert (v.status, v.n, v.p) == ("preperiodic", 0, 1)


def test_constant_rule():
    f = constant_rule(FS, "0")
    assert (nilpotency(f, 4).status, nilpotency(f, 4).n) == ("nilpotent", 1)
    v = preperiodicity(f, 4, 4)
    assert (v.n, v.p) == (1, 1)


def test_constant_one_on_golden_mean_is_not_a_rule_into_it():
    f = constant_rule(GM, "1")
    assert not is_endomorphism(f)
    assert nilpotency(f, 3).status == "not-within-bounds"


def test_shift_is_not_preperiodic():
    v = preperiodicity(shift_rule(FS), 6, 6)
    assert v.status == "not-within-bounds"
    assert v.witness is not None


def test_shift_powers_compose():
    s = shift_rule(FS)
    assert equal(compose(s, s), shift_rule(FS, 2))
    assert not equal(s, identity_rule(FS))


def test_and_rule_image():
    f = and_rule(FS)
    img = apply(f, Pattern.word("0110111"))
    assert img.text() == "010011"
    assert apply_point(f, PeriodicPoint.from_word("011")).word == "010"


@given(st.integers(0, 10_000), st.integers(0, 10_000), st.integers(0, 10_000))
def test_composition_is_associative(a, b, c):
    f, g, h = random_rule(a), random_rule(b), random_rule(c)
    assert equal(compose(compose(f, g), h), compose(f, compose(g, h)))


@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_composition_matches_pointwise_application(a, b):
    f, g = random_rule(a), random_rule(b)
    fg = compose(f, g)
    for x in enumerate_periodic_points(FS, 4):
        assert apply_point(fg, x) == apply_point(f, apply_point(g, x))


@given(st.integers(0, 10_000))
def test_rules_commute_with_the_shift(a):
    f = random_rule(a)
    s = shift_rule(FS)
    assert equal(compose(f, s), compose(s, f))


def test_endomorphisms():
    assert is_endomorphism(identity_rule(GM))
    assert is_endomorphism(shift_rule(GM))
    assert is_endomorphism(and_rule(GM))


def test_eventual_periods():
    assert eventual_period(shift_rule(FS), PeriodicPoint.from_word("001"), 10) == (0, 3)
    assert eventual_period(and_rule(FS), PeriodicPoint.from_word("0111"), 10) == (3, 1)


def test_weak_probe_and_uniform_profile():
    want = golden("ca.json")
    for name, f in [("identity", identity_rule(FS)), ("constant-0", constant_rule(FS, "0")),
                    ("and", and_rule(FS)), ("shift", shift_rule(FS))]:
        v = preperiodicity(f, 8, 8)
        assert [v.status, v.n, v.p] == want[name]["preperiodicity"]
        prof, stable = uniform_bound_profile(f, [2, 4, 6], 8, 8)
        assert [[P, None if b is None else list(b)] for P, b in prof] == want[name]["profile"]
        assert stable == want[name]["stable"]


def test_weak_probe_counterexample_when_bounds_are_small():
    sample = enumerate_periodic_points(FS, 5)
    probe = weak_preperiodicity_probe(shift_rule(FS), sample, 2, 3)
    assert probe.status == "counterexample"


def test_semigroup_action_of_shift_and_and():
    sample = enumerate_periodic_points(FS, 3)
    rep = ca_semigroup_action([shift_rule(FS), and_rule(FS)], sample)
    assert rep.action.partial
    assert rep.sample_size == len(sample)
    assert rep.order >= 3


def test_json_round_trip():
    for f in (and_rule(GM), shift_rule(FS), constant_rule(FS, "1")):
        g = LocalRule.from_json(f.to_json())
        assert equal(f, g)


def test_missing_table_entry():
    with pytest.raises(MalformedInput, match="misses"):
        LocalRule(FS, (0, 1), {("0", "0"): "0"})


def test_local_rules_on_the_plane():
    z2 = GroupSpec.lattice(2)
    spec = full_shift(group=z2)
    f = shift_rule(spec, (1, 0))
    assert f.mode == "local"
    x = PeriodicPoint.from_rows(["01", "00"])
    assert apply_point(f, x) == x.shifted((1, 0))
