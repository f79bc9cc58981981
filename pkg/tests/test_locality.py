"""Signalling checks, one-way decompositions, and the uniqueness computation."""

import random
from fractions import Fraction

import pytest

from rgbgame.locality import (
    Direction,
    SignallingError,
    build_ns_constraints,
    decompose_one_way,
    id_box,
    is_no_signalling,
    is_symmetric,
    l_sig_box,
    pr_box,
    r_sig_box,
    recompose_one_way,
    sig_box,
    solve_ns_unique,
    x_marginal,
    y_marginal,
)
from rgbgame.strategies import (
    StrategyTable,
    WinningFamilyParams,
    chsh_game,
    deterministic_strategy,
    family_strategy,
    l1_distance,
    mix,
    parameter_names,
    rgb0,
    rgrb,
    win_probability,
)

F = Fraction


def random_local_mixture(rng, k=3, parts=6):
    """A no-signalling box by construction: a mixture of local deterministic ones."""
    tables = [
        deterministic_strategy(
            tuple(rng.randrange(k) for _ in range(k)),
            tuple(rng.randrange(k) for _ in range(k)),
            shape=(k, k, k, k),
        )
        for _ in range(parts)
    ]
    cuts = sorted(rng.randint(0, 24) for _ in range(parts - 1))
    weights = [
        F(b - a, 24) for a, b in zip([0] + cuts, cuts + [24])
    ]
    return mix(tables, weights)


# ---------------------------------------------------------------------------
# canonical boxes


def test_pr_box_wins_the_xor_game():
    t = pr_box()
    assert win_probability(t, chsh_game()) == 1
    for a in range(2):
        for b in range(2):
            assert t.support(a, b) == {(x, y) for x in (0, 1) for y in (0, 1) if x ^ y == (a & b)}


def test_canonical_boxes_are_deterministic_relabelings():
    assert id_box().row(1, 2) == {(1, 2): 1}
    assert r_sig_box().row(1, 2) == {(1, 1): 1}
    assert l_sig_box().row(1, 2) == {(2, 2): 1}
    assert sig_box().row(1, 2) == {(2, 1): 1}
    with pytest.raises(ValueError):
        id_box(0)


def test_marginals_are_distributions():
    t = rgrb()
    for a in range(3):
        for b in range(3):
            assert sum(x_marginal(t, a, b).values()) == 1
            assert sum(y_marginal(t, a, b).values()) == 1
    assert x_marginal(pr_box(), 0, 0) == {0: F(1, 2), 1: F(1, 2)}


# ---------------------------------------------------------------------------
# no-signalling checks


def test_ns_verdicts_on_canonical_boxes():
    assert is_no_signalling(id_box()) == (True, None)
    assert is_no_signalling(pr_box()) == (True, None)
    assert is_no_signalling(rgrb()) == (True, None)

    ok, witness = is_no_signalling(r_sig_box())
    assert not ok and witness.side == "right"
    ok, witness = is_no_signalling(l_sig_box())
    assert not ok and witness.side == "left"
    ok, witness = is_no_signalling(sig_box())
    assert not ok and witness.side == "right"  # right is checked first


def test_rgb0_signals_to_the_right():
    ok, witness = is_no_signalling(rgb0())
    assert not ok
    assert witness.side == "right"
    # The witness must name a real marginal discrepancy.
    a0, a1 = witness.sender_inputs
    y = witness.output
    b = witness.fixed_input
    assert y_marginal(rgb0(), a0, b)[y] != y_marginal(rgb0(), a1, b)[y]
    assert "marginal" in str(witness)
    assert witness.to_json_dict()["side"] == "right"


def test_every_other_family_member_signals():
    """rgrb is the only no-signalling member; random parameters all signal."""
    rng = random.Random(31)
    half = WinningFamilyParams.constant(F(1, 2))
    for _ in range(30):
        same = [F(rng.randint(0, 8), 8) for _ in range(3)]
        ps, qs = [], []
        for _ in range(6):
            k = rng.randint(0, 8)
            ps.append(F(k, 8))
            qs.append(F(rng.randint(0, 8 - k), 8))
        params = WinningFamilyParams.from_vector(same + ps + qs)
        if params == half:
            continue
        ok, witness = is_no_signalling(family_strategy(params))
        assert not ok and witness is not None


def test_float_tolerance_on_ns_check():
    # Float twin of rgrb with one row nudged by 1e-12: a strict check sees
    # the marginal shift, a 1e-9 tolerance does not.
    jitter = 1e-12
    base = rgrb()

    def wobble(a, b, x, y):
        p = float(base.prob(a, b, x, y))
        if (a, b) == (0, 0) and p:
            return p + (jitter if (x, y) == (1, 2) else -jitter)
        return p

    t = StrategyTable.from_function((3, 3, 3, 3), wobble)
    ok, _ = is_no_signalling(t, atol=0)
    assert not ok
    ok, _ = is_no_signalling(t, atol=1e-9)
    assert ok


def test_is_symmetric():
    assert is_symmetric(rgrb())
    assert is_symmetric(pr_box())
    assert not is_symmetric(r_sig_box())


# ---------------------------------------------------------------------------
# one-way decompositions


def test_round_trip_on_ns_boxes():
    for table in (rgrb(), pr_box(), id_box()):
        for direction in Direction:
            protocol = decompose_one_way(table, direction)
            assert l1_distance(recompose_one_way(protocol), table) == 0


def test_round_trip_on_random_local_mixtures():
    rng = random.Random(47)
    for _ in range(50):
        table = random_local_mixture(rng)
        for direction in Direction:
            again = recompose_one_way(decompose_one_way(table, direction))
            assert l1_distance(again, table) == 0


def test_one_way_boxes_decompose_only_their_own_way():
    # Alice's input reaching Bob is fine left-to-right, impossible right-to-left.
    protocol = decompose_one_way(r_sig_box(), Direction.LEFT_TO_RIGHT)
    assert l1_distance(recompose_one_way(protocol), r_sig_box()) == 0
    with pytest.raises(SignallingError) as err:
        decompose_one_way(r_sig_box(), Direction.RIGHT_TO_LEFT)
    assert err.value.witness.side == "right"

    protocol = decompose_one_way(l_sig_box(), Direction.RIGHT_TO_LEFT)
    assert l1_distance(recompose_one_way(protocol), l_sig_box()) == 0
    with pytest.raises(SignallingError) as err:
        decompose_one_way(l_sig_box(), Direction.LEFT_TO_RIGHT)
    assert err.value.witness.side == "left"


def test_sig_box_is_rejected_both_ways():
    for direction in Direction:
        with pytest.raises(SignallingError) as err:
            decompose_one_way(sig_box(), direction)
        assert err.value.witness is not None


# ---------------------------------------------------------------------------
# the uniqueness computation


def dot(coeffs, values):
    return sum(c * v for c, v in zip(coeffs, values))


def test_constraint_system_shape():
    system = build_ns_constraints()
    assert system.variables == parameter_names()
    assert len(system.equalities) == 12
    # 15 nonnegativity rows plus 6 pair-sum rows.
    assert len(system.inequalities) == 21


def test_constraints_hold_exactly_at_the_uniform_point():
    system = build_ns_constraints()
    half = WinningFamilyParams.constant(F(1, 2)).as_vector()
    for coeffs, const in system.equalities:
        assert dot(coeffs, half) == const
    for coeffs, const in system.inequalities:
        assert dot(coeffs, half) >= const


def test_constraints_reject_rgb0_parameters():
    system = build_ns_constraints()
    values = {name: F(0) for name in parameter_names()}
    for name in ("p0", "p1", "p2", "p10", "p21", "p02", "q01", "q12", "q20"):
        values[name] = F(1)
    vec = [values[n] for n in parameter_names()]
    assert any(dot(coeffs, vec) != const for coeffs, const in system.equalities)


def test_unique_ns_member_is_the_uniform_one():
    params = solve_ns_unique()
    assert params.as_vector() == (F(1, 2),) * 15
    assert l1_distance(family_strategy(params), rgrb()) == 0
    ok, _ = is_no_signalling(family_strategy(params))
    assert ok
