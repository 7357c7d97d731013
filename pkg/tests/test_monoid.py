import pytest

from tlk.coxeter import parse_sigma_spec, parse_type_spec, quotient_matrix
from tlk.errors import BudgetExceeded
from tlk.monoid import (
    enumerate_elements,
    faithfulness_spotcheck,
    left_multiplication_consistent,
)
from tlk.twisted import build_context


def _b2_quotient():
    m = parse_type_spec("A3")
    return quotient_matrix(m, parse_sigma_spec(m, "full"))


def test_length_one_classes_are_generators():
    q = _b2_quotient()
    classes = enumerate_elements(q, 1)
    assert [e.word for e in classes[1]] == [("1,3",), ("2",)]


def test_b2_no_relation_below_length_four():
    classes = enumerate_elements(_b2_quotient(), 3)
    assert len(classes[2]) == 4
    assert len(classes[3]) == 8


def test_b2_length_four_identifies_one_pair():
    classes = enumerate_elements(_b2_quotient(), 4)
    assert len(classes[4]) == 15
    fused = [e for e in classes[4] if len(e.members) == 2]
    assert len(fused) == 1
    assert set(fused[0].members) == {
        ("1,3", "2", "1,3", "2"),
        ("2", "1,3", "2", "1,3"),
    }


def test_class_counts_invariant_under_relabeling():
    # the quotient of A3 and the quotient of A4 are both rank-2; B2 from
    # A3 vs B2 from A4 share the same Coxeter shape, so counts agree
    q1 = _b2_quotient()
    m = parse_type_spec("A4")
    q2 = quotient_matrix(m, parse_sigma_spec(m, "order2"))
    c1 = enumerate_elements(q1, 5)
    c2 = enumerate_elements(q2, 5)
    for length in range(1, 6):
        assert len(c1[length]) == len(c2[length])


def test_word_cap():
    with pytest.raises(BudgetExceeded):
        enumerate_elements(_b2_quotient(), 10, word_cap=100)


def test_spotcheck_b2():
    report = faithfulness_spotcheck(build_context("A3", "full"), 4)
    assert report["pass"]
    assert [r["classes"] for r in report["lengths"]] == [2, 4, 8, 15]


def test_spotcheck_detects_degenerate_parameters():
    # with the diagonal value sent to zero the twisted map of A2 is the
    # zero homothety, so all lengths collide; informative report only
    ctx = build_context("A2", "order2", {"a": 1, "b": 1, "d": 2, "f": 0})
    report = faithfulness_spotcheck(ctx, 3)
    assert report["collisions"]
    assert not report["pass"]


def test_left_multiplication_consistency():
    assert left_multiplication_consistent(build_context("A3", "full"), 3)
