import pytest

from tlk import coxeter
from tlk.coxeter import (
    CoxeterMatrix,
    automorphism_group,
    index_orbits,
    parse_sigma_spec,
    parse_type_spec,
    quotient_matrix,
    validate,
)
from tlk.errors import NonSphericalSupport, UnsupportedOrbitShape


def test_validate_a2():
    diag = validate(parse_type_spec("A2"))
    assert diag.valid and diag.small_type and diag.connected


def test_validate_non_small_type():
    m = CoxeterMatrix.from_edges(("1", "2"), {frozenset(("1", "2")): 4})
    diag = validate(m)
    assert diag.valid and not diag.small_type


def test_validate_bad_diagonal():
    m = CoxeterMatrix(("1", "2"), ((2, 3), (3, 1)))
    diag = validate(m)
    assert not diag.valid
    assert any("diagonal" in p for p in diag.problems)


def test_validate_asymmetric():
    m = CoxeterMatrix(("1", "2"), ((1, 3), (2, 1)))
    assert not validate(m).valid


@pytest.mark.parametrize(
    "spec,order",
    [("A2", 2), ("A3", 2), ("A5", 2), ("D5", 2), ("D4", 6), ("E6", 2)],
)
def test_automorphism_group_orders(spec, order):
    assert automorphism_group(parse_type_spec(spec)).order() == order


@pytest.mark.parametrize("spec", ["A5", "D4", "E6"])
def test_automorphisms_preserve_entries(spec):
    m = parse_type_spec(spec)
    for smap in automorphism_group(m).as_maps():
        for i in m.index_set:
            for j in m.index_set:
                assert m.m(smap[i], smap[j]) == m.m(i, j)


def test_automorphism_group_is_closed():
    m = parse_type_spec("D4")
    group = automorphism_group(m)
    elements = set(group.elements)
    idx = m.index_set
    assert tuple(idx) in elements
    for x in group.elements:
        px = dict(zip(idx, x))
        inverse = {v: k for k, v in px.items()}
        assert tuple(inverse[i] for i in idx) in elements
        for y in group.elements:
            py = dict(zip(idx, y))
            composed = tuple(px[py[i]] for i in idx)
            assert composed in elements


def test_index_orbits_a5():
    m = parse_type_spec("A5")
    orbs = index_orbits(m, parse_sigma_spec(m, "order2"))
    assert {(o.members, o.orbit_type) for o in orbs} == {
        (("3",), "A"),
        (("2", "4"), "B"),
        (("1", "5"), "B"),
    }


def test_index_orbits_a2_type_d():
    m = parse_type_spec("A2")
    (orb,) = index_orbits(m, parse_sigma_spec(m, "order2"))
    assert orb.orbit_type == "D"
    assert orb.delta_word() == ("1", "2", "1")


def test_index_orbits_d4_order3():
    m = parse_type_spec("D4")
    orbs = index_orbits(m, parse_sigma_spec(m, "order3"))
    assert {(o.members, o.orbit_type) for o in orbs} == {
        (("2",), "A"),
        (("1", "3", "4"), "C"),
    }


def test_unsupported_orbit_shape():
    # affine 4-cycle; rotation by one step has a single size-4 orbit
    labels = ("1", "2", "3", "4")
    edges = {
        frozenset(("1", "2")): 3,
        frozenset(("2", "3")): 3,
        frozenset(("3", "4")): 3,
        frozenset(("1", "4")): 3,
    }
    m = CoxeterMatrix.from_edges(labels, edges)
    sigma = automorphism_group(m).subgroup_of_order(4)
    with pytest.raises(UnsupportedOrbitShape):
        index_orbits(m, sigma)


def test_non_spherical_support():
    # rotation by two steps on the affine 4-cycle: the union of the two
    # orbits carries the whole (infinite) group
    labels = ("1", "2", "3", "4")
    edges = {
        frozenset(("1", "2")): 3,
        frozenset(("2", "3")): 3,
        frozenset(("3", "4")): 3,
        frozenset(("1", "4")): 3,
    }
    m = CoxeterMatrix.from_edges(labels, edges)
    J = coxeter.IndexOrbit(("1", "3"), "B")
    K = coxeter.IndexOrbit(("2", "4"), "B")
    with pytest.raises(NonSphericalSupport):
        coxeter.quotient_entry(m, J, K)


def _entries(q):
    return [[q.m(i, j) for j in q.index_set] for i in q.index_set]


def test_quotient_b3_from_a5():
    m = parse_type_spec("A5")
    q = quotient_matrix(m, parse_sigma_spec(m, "order2"))
    assert q.index_set == ("1,5", "2,4", "3")
    assert _entries(q) == [[1, 3, 2], [3, 1, 4], [2, 4, 1]]


def test_quotient_b4_from_a7_and_d5():
    a7 = parse_type_spec("A7")
    q1 = quotient_matrix(a7, parse_sigma_spec(a7, "order2"))
    assert q1.index_set == ("1,7", "2,6", "3,5", "4")
    assert _entries(q1) == [
        [1, 3, 2, 2],
        [3, 1, 3, 2],
        [2, 3, 1, 4],
        [2, 2, 4, 1],
    ]
    d5 = parse_type_spec("D5")
    q2 = quotient_matrix(d5, parse_sigma_spec(d5, "order2"))
    assert q2.index_set == ("1", "2", "3", "4,5")
    assert _entries(q2) == [
        [1, 3, 2, 2],
        [3, 1, 3, 2],
        [2, 3, 1, 4],
        [2, 2, 4, 1],
    ]


def test_quotient_f4_from_e6():
    m = parse_type_spec("E6")
    q = quotient_matrix(m, parse_sigma_spec(m, "full"))
    assert q.index_set == ("1,6", "2", "3,5", "4")
    assert _entries(q) == [
        [1, 2, 3, 2],
        [2, 1, 2, 3],
        [3, 2, 1, 4],
        [2, 3, 4, 1],
    ]


def test_quotient_g2_from_d4():
    m = parse_type_spec("D4")
    q = quotient_matrix(m, parse_sigma_spec(m, "order3"))
    assert _entries(q) == [[1, 6], [6, 1]]


def test_quotient_b2_from_a4():
    m = parse_type_spec("A4")
    q = quotient_matrix(m, parse_sigma_spec(m, "order2"))
    assert _entries(q) == [[1, 4], [4, 1]]


def test_quotient_b2_from_a3_and_b3_from_d4():
    a3 = parse_type_spec("A3")
    q = quotient_matrix(a3, parse_sigma_spec(a3, "full"))
    assert _entries(q) == [[1, 4], [4, 1]]
    d4 = parse_type_spec("D4")
    q = quotient_matrix(d4, parse_sigma_spec(d4, "order2"))
    assert _entries(q) == [[1, 3, 2], [3, 1, 4], [2, 4, 1]]


def test_trivial_sigma_gives_same_matrix():
    m = parse_type_spec("A3")
    q = quotient_matrix(m, parse_sigma_spec(m, "trivial"))
    assert q.index_set == m.index_set
    assert all(q.m(i, j) == m.m(i, j) for i in m.index_set for j in m.index_set)


def test_orbit_partition_is_sigma_stable():
    m = parse_type_spec("E6")
    sigma = parse_sigma_spec(m, "full")
    orbs = index_orbits(m, sigma)
    covered = sorted(x for o in orbs for x in o.members)
    assert covered == sorted(m.index_set)
    for smap in sigma.as_maps():
        for o in orbs:
            assert {smap[i] for i in o.members} == set(o.members)


def test_parse_type_spec_errors():
    for bad in ("A1", "D3", "E7", "Q5", ""):
        with pytest.raises(ValueError):
            parse_type_spec(bad)


def test_sigma_spec_errors():
    m = parse_type_spec("A3")
    with pytest.raises(ValueError):
        parse_sigma_spec(m, "order3")
    with pytest.raises(ValueError):
        parse_sigma_spec(m, "weird")


def test_d4_order2_is_fork_swap():
    m = parse_type_spec("D4")
    sigma = parse_sigma_spec(m, "order2")
    orbs = index_orbits(m, sigma)
    types = {o.members: o.orbit_type for o in orbs}
    assert len(types) == 3
    assert sorted(types.values()) == ["A", "A", "B"]
