import itertools
import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from pcg.collapse import (
    AdditiveGameSpec,
    DivisorGameSpec,
    additive_alignment_instance,
    additive_game_tree_outcome,
    additive_outcome,
    additive_reach_check,
    additive_terminal_consistent,
    alignment_hypothesis_scan,
    alignment_principle_check,
    divisor_alignment_instance,
    divisor_collapse_check,
    divisor_move_units,
    generated_subgroup,
    generates_group,
)
from pcg.errors import MalformedTable, NotAUnit, PreconditionViolated
from pcg.game_core import Outcome
from pcg.number_theory import is_prime, units


def test_additive_reach_examples():
    assert additive_reach_check(AdditiveGameSpec(5), (7, 2), 0).covers_all
    assert additive_reach_check(AdditiveGameSpec(2), (2,), 0).covers_all
    with pytest.raises(PreconditionViolated):
        additive_reach_check(AdditiveGameSpec(5), (4, 2), 0)


def test_additive_outcome_examples():
    # (1,2) at m=3: two-heap terminal (1,1) has sum 2, so the game is read by predicate
    assert not additive_terminal_consistent(AdditiveGameSpec(3), 2)
    assert additive_outcome(AdditiveGameSpec(3), (1, 2)) is Outcome.P
    assert additive_outcome(AdditiveGameSpec(2), (1, 1)) is Outcome.P


def test_consistent_terminal_uses_game_tree():
    """Coverage is a reachability fact; normal play need not follow the sum predicate."""
    spec = AdditiveGameSpec(2, 0)
    assert additive_terminal_consistent(spec, 2)
    assert sum((1, 3)) % 2 == 0
    assert additive_outcome(spec, (1, 3)) is Outcome.N  # Nim on (0, 2)
    assert additive_outcome(spec, (3, 3)) is Outcome.P


def test_plain_subtraction_game_is_nim_on_h_minus_1():
    for a, b in itertools.product(range(1, 9), repeat=2):
        assert (additive_game_tree_outcome((a, b)) is Outcome.P) == ((a - 1) ^ (b - 1) == 0)


def test_divisor_move_units_examples():
    assert divisor_move_units(9, 4) == {1, 3}
    assert divisor_move_units(13, 7) == {pow(13, -1, 7)}
    with pytest.raises(NotAUnit):
        divisor_move_units(4, 2)


def test_generates_group_examples():
    assert not generates_group({1}, 5)
    assert generates_group({2}, 5)
    assert generates_group({3}, 4)
    assert generated_subgroup({4}, 5) == {1, 4}


def test_scan_finds_primes_one_mod_four():
    scan = alignment_hypothesis_scan(4, 2, 100)
    primes = {t for t in range(2, 101) if is_prime(t) and t % 4 == 1}
    assert primes <= set(scan.failures)
    assert all(r.generates for r in alignment_hypothesis_scan(2, 2, 50).rows if r.coprime)


def test_scan_csv(tmp_path):
    path = tmp_path / "scan.csv"
    with open(path, "w", newline="") as fh:
        alignment_hypothesis_scan(5, 2, 20).write_csv(fh)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,coprime,generated_subgroup_order,generates"
    assert len(lines) == 20


def test_divisor_collapse_examples():
    spec = DivisorGameSpec(5)
    res = divisor_collapse_check(spec, (32, 3), 0)
    assert res.transitive == generates_group(divisor_move_units(32, 5), 5)
    one = divisor_collapse_check(spec, (1, 3), 0)
    assert one.reachable_units == set() and not one.transitive
    assert divisor_collapse_check(DivisorGameSpec(2), (9, 1), 0).transitive


def test_one_move_reach_can_fall_short_of_generation():
    # 2 and 4 are units mod 5 whose ratios {4^-1, 2^-1 ...} generate, yet one move reaches fewer
    res = divisor_collapse_check(DivisorGameSpec(5), (4, 1), 0)
    assert res.transitive and not res.direct_transitive


def test_alignment_principle():
    table, images = additive_alignment_instance(5, 12)
    assert alignment_principle_check(table, images, kernel=range(1, 5))
    table, images, _ = divisor_alignment_instance(4, 20)
    assert not alignment_principle_check(table, {5: images[5]})
    assert alignment_principle_check([[0]], {1: set()})
    with pytest.raises(MalformedTable):
        alignment_principle_check([[0, 0], [0, 0]], {})


@given(st.integers(2, 12), st.integers(2, 300))
def test_divisor_closure_iff_generation(m, t):
    assume(math.gcd(t, m) == 1)
    res = divisor_collapse_check(DivisorGameSpec(m), (t, 1), 0)
    gens = generates_group(divisor_move_units(t, m), m)
    assert res.transitive == (gens or len(units(m)) == 1)


@given(st.integers(2, 8), st.lists(st.integers(1, 30), min_size=1, max_size=4), st.data())
def test_additive_coverage(m, pos, data):
    j = data.draw(st.integers(0, len(pos) - 1))
    pos[j] = max(pos[j], m)
    assert additive_reach_check(AdditiveGameSpec(m), tuple(pos), j).covers_all
