import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import globally_admissible_word, locally_ok
from expanse.errors import BudgetExceeded, MalformedInput, UnsupportedGroup
from expanse.groups import GroupSpec
from expanse.symbolic import (Pattern, PeriodicPoint, SubshiftSpec, enumerate_periodic_points,
                              extend, full_shift, global_words, globally_admissible, golden_mean,
                              is_admissible_point, is_finite_sft, locally_admissible, period_two,
                              random_z_sft, shift, transfer_matrix)

GM = golden_mean()
P2 = period_two()


def hard_square():
    z2 = GroupSpec.lattice(2)
    forb = [Pattern((((0, 0), "1"), ((1, 0), "1"))), Pattern((((0, 0), "1"), ((0, 1), "1")))]
    return SubshiftSpec(z2, ("0", "1"), tuple(forb))


def words_of(spec):
    return ["".join(p.symbols) for p in spec.forbidden]


def test_local_admissibility_examples():
    assert not locally_admissible(GM, Pattern.word("0110"))
    assert locally_admissible(GM, Pattern.word("0101"))
    assert locally_admissible(GM, Pattern.of({0: "1", 2: "1"}))


def test_unknown_symbol_is_malformed():
    with pytest.raises(MalformedInput):
        locally_admissible(GM, Pattern.word("012"))


def test_extend_golden_mean_single_one():
    out = extend(GM, Pattern.of({0: "1"}), [0, 1])
    assert [p.as_dict() for p in out] == [{0: "1", 1: "0"}]


def test_extend_counts_are_fibonacci():
    counts = [len(extend(GM, Pattern(), range(n))) for n in range(1, 9)]
    assert counts == [2, 3, 5, 8, 13, 21, 34, 55]


def test_extend_respects_budget():
    with pytest.raises(BudgetExceeded):
        extend(full_shift(), Pattern(), range(12), budget=100)


def test_shift_moves_support():
    p = Pattern.word("10", start=0)
    q = shift(p, 3, GM.group)
    assert q.as_dict() == {3: "1", 4: "0"}
    x = PeriodicPoint.from_word("001")
    assert shift(x, 1).word == "100"


@given(st.integers(0, 200))
def test_global_admissibility_against_string_oracle(seed):
    rng = random.Random(seed)
    spec = random_z_sft(rng)
    alpha = "".join(spec.alphabet)
    forb = words_of(spec)
    n = rng.randint(1, 5)
    for w in product(alpha, repeat=n):
        w = "".join(w)
        assert globally_admissible(spec, Pattern.word(w)) == \
            globally_admissible_word(w, alpha, forb), (forb, w)


@given(st.integers(0, 200))
def test_global_words_are_the_admissible_ones(seed):
    rng = random.Random(seed)
    spec = random_z_sft(rng)
    alpha = "".join(spec.alphabet)
    forb = words_of(spec)
    got = sorted(p.text() for p in global_words(spec, 0, 3))
    want = sorted("".join(w) for w in product(alpha, repeat=4)
                  if globally_admissible_word("".join(w), alpha, forb))
    assert got == want


def test_locally_but_not_globally_admissible():
    # a 1 can never be followed by anything, so it cannot sit in a point
    spec = SubshiftSpec.z_words("01", ["01", "11"])
    w = Pattern.word("1")
    assert locally_admissible(spec, w)
    assert not globally_admissible(spec, w)
    assert globally_admissible(spec, Pattern.word("000"))


def test_periodic_points_of_the_golden_mean():
    pts = enumerate_periodic_points(GM, 3)
    words = [x.word for x in pts]
    assert words == ["0", "01", "10", "001", "010", "100"]


def test_periodic_points_of_period_two():
    pts = enumerate_periodic_points(P2, 6)
    assert [x.word for x in pts] == ["01", "10"]


def test_period_counts_match_transfer_matrix():
    A = transfer_matrix(GM)
    exact = {}
    for p in range(1, 11):
        fixed = int(np.trace(np.linalg.matrix_power(A, p)))
        exact[p] = fixed - sum(exact[q] for q in exact if p % q == 0)
    pts = enumerate_periodic_points(GM, 10)
    for p in range(1, 11):
        assert sum(1 for x in pts if x.dims[0] == p) == exact[p]


def test_hard_square_tori():
    spec = hard_square()
    pts = enumerate_periodic_points(spec, [(1, 1), (2, 2)])
    assert all(is_admissible_point(spec, x) for x in pts)
    zero = PeriodicPoint.from_rows(["0"])
    assert zero in pts
    board = PeriodicPoint.from_rows(["10", "01"])
    assert board in pts
    assert PeriodicPoint.from_rows(["1"]) not in pts


def test_periodic_point_views():
    x = PeriodicPoint.from_word("0101")
    assert x.dims == (2,) and x.word == "01"
    assert len(x.orbit()) == 2
    t = PeriodicPoint.from_rows(["10", "01"])
    assert t.dims == (2, 2)
    assert t.stabilizer_index == 2
    assert t.value((3, 1)) == "1"


def test_finiteness_on_z():
    assert is_finite_sft(P2).status == "finite"
    assert is_finite_sft(P2).count == 2
    v = is_finite_sft(GM)
    assert v.status == "infinite"
    assert v.witness["kind"] == "branching"
    assert is_finite_sft(full_shift()).status == "infinite"
    empty = SubshiftSpec.z_words("01", ["0", "1"])
    assert is_finite_sft(empty).count == 0


@given(st.integers(0, 300))
def test_finiteness_matches_periodic_growth(seed):
    spec = random_z_sft(random.Random(seed))
    v = is_finite_sft(spec)
    n_ess = len(spec.zgraph.essential)
    if v.status == "finite":
        # a finite Z-SFT consists of periodic points only, one per essential vertex
        pts = enumerate_periodic_points(spec, max(n_ess, 1))
        assert sum(len(x.orbit()) for x in pts) == v.count
    else:
        # an infinite one has admissible words of every length beyond the vertex count
        assert len(global_words(spec, 0, n_ess + 2)) > n_ess


def test_json_round_trip():
    for spec in (GM, P2, full_shift("012"), hard_square()):
        assert SubshiftSpec.from_json(spec.to_json()) == spec


def test_bad_json():
    with pytest.raises(MalformedInput):
        SubshiftSpec.from_json({"alphabet": ["0"]})
    with pytest.raises(MalformedInput):
        SubshiftSpec.z_words("01", ["2"])


def test_transition_graph_is_z_only():
    with pytest.raises(UnsupportedGroup):
        hard_square().zgraph


def test_local_ok_helper_sanity():
    assert locally_ok("0101", ["11"]) and not locally_ok("0110", ["11"])
