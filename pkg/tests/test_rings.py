import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orbifusion import (
    FormalSum,
    FusionRing,
    SchemaError,
    ValidationError,
    classify_group,
    fp_dimensions,
    fuse,
    hom_dim,
    invertibles,
    require_valid,
    validate_ring,
)
from orbifusion.catalog import su2_even_ring
from orbifusion.rings import classify_by_orders

from .oracles import broken_z3_ring, cyclic_ring, dense_associator, klein_ring


def tiny_ring(**overrides):
    kw = dict(
        labels=["e", "x"],
        unit="e",
        dual={"e": "e", "x": "x"},
        triples=[("e", "e", "e", 1), ("e", "x", "x", 1), ("x", "e", "x", 1), ("x", "x", "e", 1)],
    )
    kw.update(overrides)
    return FusionRing.from_labels(**kw)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def test_duplicate_labels_rejected():
    with pytest.raises(SchemaError):
        tiny_ring(labels=["e", "e"])


def test_unknown_unit_rejected():
    with pytest.raises(SchemaError):
        tiny_ring(unit="q")


def test_dual_must_be_bijection():
    with pytest.raises(SchemaError):
        tiny_ring(dual={"e": "e", "x": "e"})


def test_negative_constant_rejected():
    with pytest.raises(SchemaError):
        tiny_ring(triples=[("e", "e", "e", 1), ("x", "x", "e", -1)])


def test_duplicate_triple_rejected():
    with pytest.raises(SchemaError):
        tiny_ring(
            triples=[("e", "e", "e", 1), ("x", "x", "e", 1), ("x", "x", "e", 2)]
        )


def test_unknown_label_in_triple_rejected():
    with pytest.raises(SchemaError):
        tiny_ring(triples=[("e", "e", "e", 1), ("x", "y", "e", 1)])


def test_zero_count_is_dropped():
    ring = tiny_ring(
        triples=[
            ("e", "e", "e", 1),
            ("e", "x", "x", 1),
            ("x", "e", "x", 1),
            ("x", "x", "e", 1),
            ("x", "x", "x", 0),
        ]
    )
    assert ring.n(1, 1, 1) == 0
    assert ring.nnz == 4


def test_row_and_n_agree_with_entries():
    ring = klein_ring()
    for i, j, k, v in ring.iter_entries():
        assert ring.n(i, j, k) == v
    ks, vs = ring.row(1, 2)
    assert list(ks) == [3] and list(vs) == [1]


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def test_group_rings_validate():
    for ring in (cyclic_ring(1), cyclic_ring(5), klein_ring()):
        assert validate_ring(ring).passed


def test_broken_table_caught_with_real_witnesses():
    ring = broken_z3_ring()
    report = validate_ring(ring)
    assert not report.passed
    failure = next(f for f in report.failures if f.axiom == "associativity")
    _, lhs, rhs = dense_associator(ring)
    for i, j, k, l, a, b in failure.witnesses:
        assert a != b
        assert lhs[i, j, k, l] == a and rhs[i, j, k, l] == b


def test_both_lanes_agree_on_the_broken_table():
    ring = broken_z3_ring()
    rep_nb = validate_ring(ring, use_numba=True)
    rep_np = validate_ring(ring, use_numba=False)
    wits_nb = sorted(f.axiom for f in rep_nb.failures)
    wits_np = sorted(f.axiom for f in rep_np.failures)
    assert wits_nb == wits_np
    for a, b in zip(rep_nb.failures, rep_np.failures):
        assert a.witnesses == b.witnesses


def test_dual_unit_axiom_caught():
    # x * x lands on x instead of the unit
    ring = tiny_ring(
        triples=[
            ("e", "e", "e", 1),
            ("e", "x", "x", 1),
            ("x", "e", "x", 1),
            ("x", "x", "x", 1),
        ]
    )
    report = validate_ring(ring)
    assert not report.passed
    assert any(f.axiom == "dual-unit" for f in report.failures)


def test_unit_axiom_caught():
    ring = tiny_ring(
        triples=[
            ("e", "e", "e", 1),
            ("e", "x", "x", 2),
            ("x", "e", "x", 1),
            ("x", "x", "e", 1),
        ]
    )
    report = validate_ring(ring)
    assert any(f.axiom == "unit" for f in report.failures)


def test_require_valid_raises_with_report_attached():
    with pytest.raises(ValidationError) as err:
        require_valid(broken_z3_ring())
    assert err.value.report is not None and not err.value.report.passed


@given(st.integers(min_value=1, max_value=8))
def test_cyclic_rings_validate_and_have_unit_dims(n):
    ring = cyclic_ring(n)
    assert validate_ring(ring).passed
    dims = fp_dimensions(ring)
    assert np.allclose(dims.dims, 1.0)
    assert dims.global_dim() == pytest.approx(n)


# ---------------------------------------------------------------------------
# formal sums and pairing
# ---------------------------------------------------------------------------

def test_fuse_matches_table():
    ring = klein_ring()
    out = fuse(ring, FormalSum.basis(1), FormalSum.basis(2))
    assert dict(out.items()) == {3: 1}


def test_fuse_is_bilinear():
    ring = cyclic_ring(3)
    x = FormalSum.make({0: 1, 1: 2})
    y = FormalSum.make({2: 3})
    out = fuse(ring, x, y)
    assert dict(out.items()) == {2: 3, 0: 6}


def test_hom_dim_frobenius_symmetry():
    ring = su2_even_ring(8)
    rho2 = FormalSum.basis(ring.index("rho2"))
    rho4 = FormalSum.basis(ring.index("rho4"))
    lhs = hom_dim(ring, fuse(ring, rho2, rho4), rho2)
    rhs = hom_dim(ring, rho4, fuse(ring, rho2, rho2))
    assert lhs == rhs == 1


def test_formal_sum_describe():
    ring = klein_ring()
    s = FormalSum.make({0: 1, 2: 3})
    assert s.describe(ring) == "e + 3 b"


# ---------------------------------------------------------------------------
# dimensions
# ---------------------------------------------------------------------------

def test_chain_ring_dimensions_are_exact_small_integers():
    ring = su2_even_ring(4)
    dims = fp_dimensions(ring)
    order = [ring.index(lab) for lab in ("rho0", "rho2", "rho4")]
    assert [dims[i] for i in order] == pytest.approx([1.0, 2.0, 1.0], abs=1e-9)


def test_dimensions_reject_inconsistent_product_equations():
    from orbifusion import NumericError

    # klein table with an extra unit summand in a*b: forces 1 = 2
    base = klein_ring()
    triples = [
        (base.labels[i], base.labels[j], base.labels[k], v)
        for i, j, k, v in base.iter_entries()
    ]
    triples.append(("a", "b", "e", 1))
    ring = FusionRing.from_labels(
        list(base.labels), unit="e", dual={lab: lab for lab in base.labels}, triples=triples
    )
    with pytest.raises(NumericError):
        fp_dimensions(ring)


# ---------------------------------------------------------------------------
# units and group classification
# ---------------------------------------------------------------------------

def test_invertibles_of_group_ring_is_everything():
    ring = klein_ring()
    assert invertibles(ring) == ["e", "a", "b", "c"]


def test_invertibles_of_chain_ring():
    ring = su2_even_ring(8)
    assert invertibles(ring) == ["rho0", "rho8"]


def test_classify_group_separates_the_order_four_groups():
    assert classify_group(klein_ring(), ["e", "a", "b", "c"]).name == "Z/2 x Z/2"
    z4 = cyclic_ring(4)
    assert classify_group(z4, ["g0", "g1", "g2", "g3"]).name == "Z/4"


def test_classify_by_orders_needs_an_identity():
    with pytest.raises(SchemaError):
        classify_by_orders([2, 2])
