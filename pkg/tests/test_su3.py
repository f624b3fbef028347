import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbifusion import (
    InputError,
    Verdict,
    admissible_weights,
    cyclic_action,
    kac_walton,
    obstruction_m,
    parse_weight,
    simple_current,
    su3_ring,
    validate_ring,
    verlinde_table,
    weight_label,
)
from orbifusion.su3 import (
    LEVEL_CAP,
    classical_lr,
    dim3,
    verlinde,
    weight_system,
)

from .oracles import classical_fusion

_small = st.integers(min_value=0, max_value=4)


# ---------------------------------------------------------------------------
# labels and alcoves
# ---------------------------------------------------------------------------

def test_label_roundtrip():
    for w in ((0, 0), (3, 1), (0, 7), (12, 12)):
        assert parse_weight(weight_label(w)) == w


def test_parse_weight_errors():
    for bad in ("3", "1,2,3", "a,b", "-1,0", "0,-2", "1.5,0"):
        with pytest.raises(InputError):
            parse_weight(bad)


def test_alcove_size_and_order():
    for level in range(0, 9):
        ws = admissible_weights(level)
        assert len(ws) == (level + 1) * (level + 2) // 2
        assert all(a >= 0 and b >= 0 and a + b <= level for a, b in ws)
        keys = [(a + b, a) for a, b in ws]
        assert keys == sorted(keys)
    with pytest.raises(InputError):
        admissible_weights(-1)


def test_ring_labels_follow_the_alcove_order():
    ring = su3_ring(3)
    assert list(ring.labels) == [weight_label(w) for w in admissible_weights(3)]


# ---------------------------------------------------------------------------
# classical structure
# ---------------------------------------------------------------------------

def test_dimension_values():
    known = {
        (0, 0): 1,
        (1, 0): 3,
        (0, 1): 3,
        (1, 1): 8,
        (2, 0): 6,
        (3, 0): 10,
        (2, 2): 27,
    }
    for w, d in known.items():
        assert dim3(*w) == d


@settings(max_examples=40)
@given(a=st.integers(min_value=0, max_value=10), b=st.integers(min_value=0, max_value=10))
def test_weight_system_totals_match_the_dimension(a, b):
    assert sum(weight_system(a, b).values()) == dim3(a, b)


@settings(max_examples=40)
@given(a=st.integers(min_value=0, max_value=8), b=st.integers(min_value=0, max_value=8))
def test_weight_system_of_the_dual_is_the_negation(a, b):
    flipped = {(-x, -y): m for (x, y), m in weight_system(a, b).items()}
    assert weight_system(b, a) == flipped


def test_classical_products_by_hand():
    assert classical_lr((1, 0), (0, 1)) == {(0, 0): 1, (1, 1): 1}
    assert classical_lr((1, 1), (1, 1)) == {
        (0, 0): 1,
        (1, 1): 2,
        (3, 0): 1,
        (0, 3): 1,
        (2, 2): 1,
    }
    assert classical_lr((1, 0), (1, 0)) == {(2, 0): 1, (0, 1): 1}


@settings(max_examples=50)
@given(a=_small, b=_small, c=_small, d=_small)
def test_classical_product_matches_the_tableau_oracle(a, b, c, d):
    assert classical_lr((a, b), (c, d)) == classical_fusion((a, b), (c, d))


# ---------------------------------------------------------------------------
# truncation
# ---------------------------------------------------------------------------

def test_unit_row():
    for mu in ((0, 0), (2, 1), (0, 4)):
        assert kac_walton((0, 0), mu, 4) == {mu: 1}


def test_truncation_is_inactive_at_high_level():
    assert kac_walton((1, 1), (1, 1), 6) == classical_lr((1, 1), (1, 1))
    assert kac_walton((2, 0), (0, 2), 8) == classical_lr((2, 0), (0, 2))


def test_truncation_at_level_two():
    assert kac_walton((1, 1), (1, 1), 2) == {(0, 0): 1, (1, 1): 1}


def test_inadmissible_weights_refused():
    with pytest.raises(InputError):
        kac_walton((2, 1), (0, 0), 2)
    with pytest.raises(InputError):
        kac_walton((0, 0), (-1, 0), 2)
    with pytest.raises(InputError):
        verlinde((0, 0), (0, 0), (3, 0), 2)


@settings(max_examples=50)
@given(a=_small, b=_small, c=_small, d=_small, data=st.data())
def test_truncated_product_is_commutative(a, b, c, d, data):
    level = data.draw(st.integers(min_value=max(a + b, c + d), max_value=10))
    assert kac_walton((a, b), (c, d), level) == kac_walton((c, d), (a, b), level)


@settings(max_examples=50)
@given(a=_small, b=_small, c=_small, d=_small, data=st.data())
def test_truncated_product_respects_conjugation(a, b, c, d, data):
    level = data.draw(st.integers(min_value=max(a + b, c + d), max_value=10))
    plain = kac_walton((a, b), (c, d), level)
    conj = kac_walton((b, a), (d, c), level)
    assert conj == {(y, x): m for (x, y), m in plain.items()}


def test_tables_match_the_character_sums_exhaustively():
    for level in range(1, 7):
        ws = admissible_weights(level)
        cube = verlinde_table(level)
        for i, lam in enumerate(ws):
            for j, mu in enumerate(ws):
                got = kac_walton(lam, mu, level)
                row = cube[i, j]
                want = {ws[t]: int(row[t]) for t in range(len(ws)) if row[t]}
                assert got == want, (level, lam, mu)


def test_single_character_sum_agrees_with_the_table():
    cube = verlinde_table(3)
    ws = admissible_weights(3)
    for (i, j, t) in ((1, 2, 0), (4, 4, 4), (7, 8, 3)):
        assert verlinde(ws[i], ws[j], ws[t], 3) == int(cube[i, j, t])


# ---------------------------------------------------------------------------
# the order-3 symmetry
# ---------------------------------------------------------------------------

def test_current_has_order_three():
    for level in range(1, 10):
        J = simple_current(level)
        for w in admissible_weights(level):
            assert J[J[J[w]]] == w
        assert J[(0, 0)] == (level, 0)


def test_current_fixed_points():
    for level in range(1, 13):
        J = simple_current(level)
        fixed = [w for w, img in J.items() if img == w]
        if level % 3 == 0:
            assert fixed == [(level // 3, level // 3)]
        else:
            assert fixed == []


def test_ring_action_by_the_current_matches_the_formula():
    for level in (1, 2, 3, 5, 8, 12):
        ring = su3_ring(level)
        action = cyclic_action(ring, weight_label((level, 0)))
        assert action.order == 3
        J = simple_current(level)
        for w, img in J.items():
            got = ring.labels[action.perm[ring.index(weight_label(w))]]
            assert got == weight_label(img)


# ---------------------------------------------------------------------------
# the fixed-point self-coupling
# ---------------------------------------------------------------------------

def test_self_coupling_count_grows_linearly():
    for k in range(1, 9):
        res = obstruction_m(k)
        assert res.level == 3 * k
        assert res.n == 3
        assert res.m == k + 1
        assert res.gcd == math.gcd(k + 1, 3)
        if (k + 1) % 3 == 0:
            assert res.verdict is Verdict.INCONCLUSIVE
        else:
            assert res.verdict is Verdict.TRIVIAL


def test_self_coupling_rejects_bad_k():
    with pytest.raises(InputError):
        obstruction_m(0)
    with pytest.raises(InputError):
        obstruction_m(-3)


# ---------------------------------------------------------------------------
# the ring constructor
# ---------------------------------------------------------------------------

def test_level_bounds():
    with pytest.raises(InputError):
        su3_ring(0)
    with pytest.raises(InputError):
        su3_ring(LEVEL_CAP + 1)


def test_level_four_ring_is_fully_valid():
    ring = su3_ring(4)
    report = validate_ring(ring)
    assert report.passed
    assert ring.labels[ring.dual[ring.index("3,1")]] == "1,3"
    assert ring.labels[ring.unit] == "0,0"
