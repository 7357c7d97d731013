import pytest

from tlk.coxeter import index_orbits, parse_sigma_spec, parse_type_spec
from tlk.errors import RootBudgetExceeded, UnrecognizedConfiguration
from tlk.rootsys import (
    ORBITS_PER_TAG,
    census,
    classify_mesh,
    generate,
    graph_json,
    j_mesh,
    meshes_for,
    sigma_orbits,
)


def _setup(spec, sig):
    m = parse_type_spec(spec)
    s = parse_sigma_spec(m, sig)
    rs = generate(m)
    return m, s, rs


@pytest.mark.parametrize(
    "spec,count",
    [("A2", 3), ("A3", 6), ("A4", 10), ("A5", 15), ("A6", 21), ("A7", 28),
     ("A8", 36), ("A9", 45), ("D4", 12), ("D5", 20), ("D6", 30), ("D7", 42),
     ("D8", 56), ("D9", 72), ("E6", 36)],
)
def test_root_counts(spec, count):
    assert generate(parse_type_spec(spec)).size == count


def test_a2_roots_and_depths():
    rs = generate(parse_type_spec("A2"))
    assert set(rs.roots) == {(1, 0), (0, 1), (1, 1)}
    assert rs.depth[rs.root_index((1, 1))] == 2


def test_root_budget():
    labels = ("1", "2", "3", "4")
    edges = {
        frozenset(("1", "2")): 3,
        frozenset(("2", "3")): 3,
        frozenset(("3", "4")): 3,
        frozenset(("1", "4")): 3,
    }
    from tlk.coxeter import CoxeterMatrix

    with pytest.raises(RootBudgetExceeded):
        generate(CoxeterMatrix.from_edges(labels, edges), root_cap=50)


def test_reflections_negate_only_their_simple_root():
    rs = generate(parse_type_spec("E6"))
    for label in rs.matrix.index_set:
        simple = rs.simple_index(label)
        for r in range(rs.size):
            image = rs.reflect(label, r)
            assert (image == -1) == (r == simple)


def test_edges_change_depth_by_one():
    rs = generate(parse_type_spec("D5"))
    for upper, label, lower in rs.edges():
        assert rs.depth[upper] == rs.depth[lower] + 1
        assert rs.reflect(label, upper) == lower


def test_sigma_equivariant_edges():
    m, s, rs = _setup("E6", "full")
    edges = set(rs.edges())
    for smap in s.as_maps():
        perm = rs.sigma_perm(smap)
        for upper, label, lower in edges:
            assert (perm[upper], smap[label], perm[lower]) in edges


def test_sigma_preserves_depth():
    m, s, rs = _setup("D4", "order3")
    for smap in s.as_maps():
        perm = rs.sigma_perm(smap)
        for i in range(rs.size):
            assert rs.depth[perm[i]] == rs.depth[i]


@pytest.mark.parametrize(
    "spec,sig,count",
    [("A2", "order2", 2), ("A5", "order2", 9), ("E6", "full", 24),
     ("D4", "order3", 6), ("A6", "order2", 12), ("A7", "order2", 16),
     ("D5", "order2", 16)],
)
def test_orbit_counts(spec, sig, count):
    m, s, rs = _setup(spec, sig)
    assert len(sigma_orbits(rs, s)) == count


def test_orbits_partition_and_share_depth():
    m, s, rs = _setup("E6", "full")
    orbits = sigma_orbits(rs, s)
    seen = sorted(x for o in orbits for x in o.members)
    assert seen == list(range(rs.size))
    for o in orbits:
        assert len({rs.depth[x] for x in o.members}) == 1


def test_j_mesh_simple_root_is_fixed_point():
    m, s, rs = _setup("A5", "order2")
    orbits = sigma_orbits(rs, s)
    J = next(o for o in index_orbits(m, s) if o.members == ("3",))
    theta = next(o for o in orbits if o.members == (rs.simple_index("3"),))
    mesh = j_mesh(rs, J, theta, orbits)
    assert mesh == [theta]
    assert classify_mesh(J, mesh, rs).tag == "A1"


def test_j_mesh_a5_type_a_pair():
    m, s, rs = _setup("A5", "order2")
    orbits = sigma_orbits(rs, s)
    J = next(o for o in index_orbits(m, s) if o.members == ("3",))
    theta = next(
        o
        for o in orbits
        if set(o.members) == {rs.simple_index("2"), rs.simple_index("4")}
    )
    mesh = j_mesh(rs, J, theta, orbits)
    assert len(mesh) == 2
    assert classify_mesh(J, mesh, rs).tag == "A3"


def test_j_mesh_d4_c5_members():
    m, s, rs = _setup("D4", "order3")
    orbits = sigma_orbits(rs, s)
    J = next(o for o in index_orbits(m, s) if o.orbit_type == "C")
    theta = next(o for o in orbits if o.members == (rs.simple_index("2"),))
    mesh = j_mesh(rs, J, theta, orbits)
    conf = classify_mesh(J, mesh, rs)
    assert conf.tag == "C5"
    assert [o.size for o in conf.orbits] == [1, 3, 3, 1]
    depth3 = next(o for o in conf.orbits if o.depth == 3)
    coords = {rs.roots[x] for x in depth3.members}
    assert coords == {(1, 1, 1, 0), (1, 1, 0, 1), (0, 1, 1, 1)}


def test_classify_rejects_foreign_mesh():
    # the diamond of a type-B pair around the central simple root has
    # three orbits, which no single-generator diagram can produce
    m, s, rs = _setup("A5", "order2")
    orbits = sigma_orbits(rs, s)
    J = next(o for o in index_orbits(m, s) if o.members == ("3",))
    K = next(o for o in index_orbits(m, s) if o.members == ("2", "4"))
    theta = next(o for o in orbits if o.members == (rs.simple_index("3"),))
    mesh_k = j_mesh(rs, K, theta, orbits)
    assert len(mesh_k) == 3
    assert classify_mesh(K, mesh_k, rs).tag == "B4"
    with pytest.raises(UnrecognizedConfiguration):
        classify_mesh(J, mesh_k, rs)


EXPECTED_CENSUS = {
    ("A3", "order2"): {"A": {"A1": 1, "A2": 1, "A3": 1}, "B": {"B1": 1, "B4": 1}},
    ("A5", "order2"): {
        "A": {"A1": 1, "A2": 4, "A3": 2},
        "B": {"B1": 1, "B2": 1, "B3": 2, "B4": 1},
    },
    ("A7", "order2"): {
        "A": {"A1": 1, "A2": 9, "A3": 3},
        "B": {"B1": 1, "B2": 4, "B3": 4, "B4": 1},
    },
    ("D4", "order2"): {
        "A": {"A1": 1, "A2": 2, "A3": 3},
        "B": {"B1": 1, "B2": 2, "B4": 2},
    },
    ("D5", "order2"): {
        "A": {"A1": 1, "A2": 5, "A3": 5},
        "B": {"B1": 1, "B2": 6, "B4": 3},
    },
    ("D6", "order2"): {
        "A": {"A1": 1, "A2": 10, "A3": 7},
        "B": {"B1": 1, "B2": 12, "B4": 4},
    },
    ("E6", "full"): {
        "A": {"A1": 1, "A2": 9, "A3": 7},
        "B": {"B1": 1, "B2": 6, "B3": 4, "B4": 3},
    },
    ("A2", "order2"): {"D": {"D1": 1}},
    ("A4", "order2"): {
        "B": {"B1": 1, "B3": 1, "B4": 1},
        "D": {"D1": 1, "D2": 1, "D3": 1},
    },
    ("A6", "order2"): {
        "B": {"B1": 1, "B2": 2, "B3": 3, "B4": 1},
        "D": {"D1": 1, "D2": 4, "D3": 2},
    },
    ("A8", "order2"): {
        "B": {"B1": 1, "B2": 6, "B3": 5, "B4": 1},
        "D": {"D1": 1, "D2": 9, "D3": 3},
    },
    ("D4", "order3"): {
        "A": {"A1": 1, "A2": 1, "A3": 2},
        "C": {"C1": 1, "C2": 1, "C5": 1},
    },
}


@pytest.mark.parametrize("key", sorted(EXPECTED_CENSUS))
def test_census_tables(key):
    spec, sig = key
    m, s, rs = _setup(spec, sig)
    for J in index_orbits(m, s):
        assert census(m, s, J) == EXPECTED_CENSUS[key][J.orbit_type], (spec, J)


@pytest.mark.parametrize("key", sorted(EXPECTED_CENSUS))
def test_census_accounts_for_every_orbit(key):
    spec, sig = key
    m, s, rs = _setup(spec, sig)
    orbit_total = len(sigma_orbits(rs, s))
    for J in index_orbits(m, s):
        counts = census(m, s, J)
        assert sum(ORBITS_PER_TAG[t] * n for t, n in counts.items()) == orbit_total


@pytest.mark.parametrize("key", sorted(EXPECTED_CENSUS))
def test_b5_never_occurs(key):
    spec, sig = key
    m, s, rs = _setup(spec, sig)
    for J in index_orbits(m, s):
        counts = census(m, s, J)
        for tag in ("B5", "C3", "C4", "C6", "D4", "D5"):
            assert counts.get(tag, 0) == 0


def test_census_closed_forms_extend_to_d7():
    # D_n rows: A1=1, A2=n^2-6n+10, A3=2n-5; B1=1, B2=(n-2)(n-3), B4=n-2
    m, s, rs = _setup("D7", "order2")
    for J in index_orbits(m, s):
        got = census(m, s, J)
        if J.orbit_type == "A":
            assert got == {"A1": 1, "A2": 17, "A3": 9}
        else:
            assert got == {"B1": 1, "B2": 20, "B4": 5}


def test_d4_full_group_matches_order3_orbits():
    # the rotation orbits of the triality action are already stable under
    # the full order-six group, so the census is unchanged
    m = parse_type_spec("D4")
    full = parse_sigma_spec(m, "full")
    rot = parse_sigma_spec(m, "order3")
    rs = generate(m)
    assert sigma_orbits(rs, full) == sigma_orbits(rs, rot)
    for J_full, J_rot in zip(index_orbits(m, full), index_orbits(m, rot)):
        assert J_full == J_rot
        assert census(m, full, J_full) == census(m, rot, J_rot)


def test_meshes_are_deduplicated():
    m, s, rs = _setup("A2", "order2")
    orbits = sigma_orbits(rs, s)
    J = index_orbits(m, s)[0]
    confs = meshes_for(rs, orbits, J)
    assert len(confs) == 1 and confs[0].tag == "D1"


def test_graph_json_shape():
    m, s, rs = _setup("A3", "full")
    data = graph_json(rs, s)
    assert len(data["nodes"]) == 6
    assert data["orbit_count"] == 4
    assert all(set(n) == {"id", "coordinates", "depth", "orbit"} for n in data["nodes"])
    assert all(set(e) == {"from", "to", "label"} for e in data["edges"])
